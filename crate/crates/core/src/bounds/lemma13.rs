use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modelspaces::cone_distance;
use crate::rng::{derive_seed, seeded};
use crate::spaceform::{comparison_angle, tan_k, Curvature, SideTriple, TanK};

const SLACK: f64 = 1e-12;
const CHUNK: usize = 4096;
const MAX_ATTEMPTS_PER_TRIAL: usize = 1000;

/// Outcome of a randomized check of the angle sandwich around a vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma13Report {
    pub kappa: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub trials: usize,
    /// Failures of `cos ∠̃xp_ip_{i+1} ≤ e^ε·|p_ip_{i+1}|/(2 tan_κ|xp_i|)`.
    pub violations_cos: usize,
    pub violations_left: usize,
    pub violations_right: usize,
    /// Largest amount by which any inequality was exceeded (negative when all hold).
    pub max_excess: f64,
}

impl Lemma13Report {
    pub fn violations(&self) -> usize {
        self.violations_cos + self.violations_left + self.violations_right
    }
}

fn precondition(kappa: Curvature, eta: f64, eps: f64) -> bool {
    match tan_k(kappa, 0.5 * eta) {
        Ok(TanK::Finite(t)) => t <= eps.exp() * 0.5 * eta,
        _ => false,
    }
}

/// Largest `η ≤ 1` with `tan_κ(η/2) ≤ e^ε·η/2`, found by bisection.
pub fn derive_eta(kappa: Curvature, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("epsilon must be > 0, got {eps}")));
    }
    if precondition(kappa, 1.0, eps) {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid > 0.0 && precondition(kappa, mid, eps) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[derive(Default)]
struct Tally {
    cos: usize,
    left: usize,
    right: usize,
    max_excess: f64,
}

/// Sample configurations `p_{i−1}, p_i, p_{i+1}, x` in the model plane with
/// `|p_ip_{i±1}| < η` and `x` in the Voronoi cell of `p_i`, and count
/// failures of the comparison-cosine claim and both sides of
///
/// `−e^ε h₊/(2 tan X) − 36η^{3/2}/tan^{3/2} X ≤ ∠xp_ip_{i+1} − π/2
///   ≤ e^ε h₋/(2 tan X) + 36η^{3/2}/tan^{3/2} X + θ_i`,
///
/// where `X = |xp_i|`, `h± = |p_ip_{i±1}|` and `θ_i` is the exterior angle at `p_i`.
/// For `κ > 0`, `x` is drawn with `X < π/(2√κ)`.
pub fn lemma_1_3_check(kappa: Curvature, eta: f64, eps: f64, trials: usize, seed: u64) -> Result<Lemma13Report> {
    if !(eta > 0.0 && eta.is_finite()) || !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain("eta and epsilon must be > 0"));
    }
    if !precondition(kappa, eta, eps) {
        return Err(Error::domain(format!(
            "eta = {eta} violates tan_k(eta/2) <= e^eps eta/2 for kappa = {}",
            kappa.value()
        )));
    }
    let k = kappa.value();
    let x_max = kappa.half_radius().map_or(2.0, |h| h.min(2.0) * (1.0 - 1e-9));
    let grow = eps.exp();
    let corr_coeff = 36.0 * eta.powf(1.5);
    let chunks = trials.div_ceil(CHUNK);

    let tallies = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seeded(derive_seed(seed, c as u64));
            let want = CHUNK.min(trials - c * CHUNK);
            let mut t = Tally { max_excess: f64::NEG_INFINITY, ..Tally::default() };
            let (mut done, mut attempts) = (0, 0);
            while done < want {
                attempts += 1;
                if attempts > MAX_ATTEMPTS_PER_TRIAL * want {
                    return Err(Error::Resource("too many rejected configurations".into()));
                }
                let hp = eta * (1.0 - rng.random::<f64>());
                let hm = eta * (1.0 - rng.random::<f64>());
                let phi_m = TAU * rng.random::<f64>();
                let big_x = x_max * (1.0 - rng.random::<f64>());
                let phi_x = TAU * rng.random::<f64>();

                let sep = |a: f64, b: f64| (a - b).rem_euclid(TAU).min((b - a).rem_euclid(TAU));
                let ang_next = sep(phi_x, 0.0);
                let ang_prev = sep(phi_x, phi_m);
                let interior = sep(phi_m, 0.0);
                let d_next = cone_distance(k, big_x, hp, ang_next);
                let d_prev = cone_distance(k, big_x, hm, ang_prev);
                if big_x > d_next.min(d_prev) || interior == 0.0 {
                    continue;
                }
                done += 1;
                let theta_i = PI - interior;
                let tan = match tan_k(kappa, big_x) {
                    Ok(v) => v,
                    Err(e) => return Err(e),
                };
                let corr = tan.correction(corr_coeff, 1.5);
                let inv = tan.recip();

                let mut excess = f64::NEG_INFINITY;
                if let Ok(cmp) = comparison_angle(kappa, SideTriple::new(big_x, hp, d_next)) {
                    let e = cmp.cos() - grow * hp * 0.5 * inv;
                    excess = excess.max(e);
                    if e > SLACK {
                        t.cos += 1;
                    }
                }
                let dev = ang_next - FRAC_PI_2;
                let e = -grow * hp * 0.5 * inv - corr - dev;
                excess = excess.max(e);
                if e > SLACK {
                    t.left += 1;
                }
                let e = dev - (grow * hm * 0.5 * inv + corr + theta_i);
                excess = excess.max(e);
                if e > SLACK {
                    t.right += 1;
                }
                t.max_excess = t.max_excess.max(excess);
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = Lemma13Report {
        kappa: k,
        eta,
        epsilon: eps,
        trials,
        violations_cos: 0,
        violations_left: 0,
        violations_right: 0,
        max_excess: f64::NEG_INFINITY,
    };
    for t in tallies {
        report.violations_cos += t.cos;
        report.violations_left += t.left;
        report.violations_right += t.right;
        report.max_excess = report.max_excess.max(t.max_excess);
    }
    Ok(report)
}

/// Minimum of `f(u) = u + 36|u|^{3/2} − π/2 + arccos u` on a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FCheck {
    pub min: f64,
    pub argmin: f64,
    pub grid_step: f64,
    pub grid_points: usize,
}

pub fn f_value(u: f64) -> f64 {
    u + 36.0 * u.abs().powf(1.5) - FRAC_PI_2 + u.acos()
}

/// Evaluates `f` at `u_k = −1 + 2(k+1)/(N+1)`, `k = 0..N`.
pub fn f_nonneg_check(grid_points: usize) -> Result<FCheck> {
    if grid_points < 2 {
        return Err(Error::domain("need at least 2 grid points"));
    }
    let step = 2.0 / (grid_points as f64 + 1.0);
    let (min, argmin) = (0..grid_points)
        .into_par_iter()
        .map(|k| {
            let u = -1.0 + step * (k + 1) as f64;
            (f_value(u), u)
        })
        .reduce(|| (f64::INFINITY, 0.0), |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    Ok(FCheck { min, argmin, grid_step: step, grid_points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(x: f64) -> Curvature {
        Curvature::new(x).unwrap()
    }

    #[test]
    fn f_basics() {
        assert_eq!(f_value(0.0), 0.0);
        assert!(f_value(1.0) > 0.0);
        let c = f_nonneg_check(10_001).unwrap();
        assert!(c.min >= -1e-12);
        assert!(c.argmin.abs() <= c.grid_step);
    }

    #[test]
    fn eta_precondition() {
        assert_eq!(derive_eta(k(-1.0), 0.05).unwrap(), 1.0);
        assert_eq!(derive_eta(k(0.0), 0.05).unwrap(), 1.0);
        let e = derive_eta(k(1.0), 0.05).unwrap();
        assert!(e > 0.0 && e < 1.0);
        assert!((0.5 * e).tan() <= 0.05f64.exp() * 0.5 * e);
        assert!(lemma_1_3_check(k(1.0), 1.0, 0.05, 10, 1).is_err());
    }

    #[test]
    fn no_violations_small_run() {
        for kappa in [-1.0, 0.0, 1.0] {
            let r = lemma_1_3_check(k(kappa), 1e-2, 0.05, 5000, 3).unwrap();
            assert_eq!(r.violations(), 0, "{r:?}");
            assert_eq!(r.trials, 5000);
        }
    }

    #[test]
    fn deterministic() {
        let a = lemma_1_3_check(k(0.0), 1e-2, 0.05, 9000, 11).unwrap();
        let b = lemma_1_3_check(k(0.0), 1e-2, 0.05, 9000, 11).unwrap();
        assert_eq!(a, b);
    }
}
