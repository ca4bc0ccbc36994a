use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaceform::{asn_raw, comparison_angle, sn, sn_raw, Curvature, SideTriple};

/// Resolution of the ψ search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiGrid {
    /// Grid cells per axis.
    pub cells: usize,
    /// Number of best grid cells refined by Nelder–Mead.
    pub refine_starts: usize,
    pub tol: f64,
}

impl Default for PsiGrid {
    fn default() -> Self {
        PsiGrid { cells: 200, refine_starts: 10, tol: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub isoceles_sup: f64,
    /// Sides `(|qp|, |qr|, |pr|)` of the best triangle found.
    pub argmax: SideTriple,
}

/// `|pr| / ∠pqr` on the feasible set, `None` outside it.
fn objective(kappa: Curvature, d: f64, x: [f64; 3]) -> Option<f64> {
    let [a, b, c] = x;
    if !(a > 0.0 && b > 0.0 && c > 0.0 && a <= d && b <= d && c <= d) || c < 2.0 * (a - b).abs() {
        return None;
    }
    let theta = comparison_angle(kappa, SideTriple::new(a, b, c)).ok()?;
    (theta > 0.0).then(|| c / theta)
}

/// Maximize `f` by Nelder–Mead from `start` with initial step `step`.
fn nelder_mead(f: impl Fn([f64; 3]) -> f64, start: [f64; 3], step: f64, tol: f64) -> ([f64; 3], f64) {
    let mut simplex: Vec<([f64; 3], f64)> = (0..4)
        .map(|i| {
            let mut x = start;
            if i > 0 {
                x[i - 1] -= step;
            }
            (x, f(x))
        })
        .collect();
    let combine = |a: [f64; 3], b: [f64; 3], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])];
    for _ in 0..5000 {
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        if (simplex[0].1 - simplex[3].1).abs() < tol {
            break;
        }
        let mut centroid = [0.0; 3];
        for (x, _) in &simplex[..3] {
            for k in 0..3 {
                centroid[k] += x[k] / 3.0;
            }
        }
        let worst = simplex[3];
        let refl = combine(centroid, worst.0, -1.0);
        let fr = f(refl);
        if fr > simplex[0].1 {
            let exp = combine(centroid, worst.0, -2.0);
            let fe = f(exp);
            simplex[3] = if fe > fr { (exp, fe) } else { (refl, fr) };
        } else if fr > simplex[2].1 {
            simplex[3] = (refl, fr);
        } else {
            let con = combine(centroid, worst.0, 0.5);
            let fc = f(con);
            if fc > worst.1 {
                simplex[3] = (con, fc);
            } else {
                let best = simplex[0].0;
                for s in simplex.iter_mut().skip(1) {
                    s.0 = combine(best, s.0, 0.5);
                    s.1 = f(s.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
    simplex[0]
}

/// Supremum over `θ` of `|rs|/θ` for the isoceles triangle with legs `x`
/// and apex angle `θ`, evaluated along `θ = π·2^{−k}`.
pub fn isoceles_sup(kappa: Curvature, x: f64) -> f64 {
    let k = kappa.value();
    let sx = sn_raw(k, x);
    (0..60)
        .map(|j| {
            let theta = PI * 0.5f64.powi(j);
            2.0 * asn_raw(k, (0.5 * theta).sin() * sx) / theta
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Numerical value of `ψ(κ, d)`, the supremum of `|pr|/∠pqr` over model
/// triangles with sides at most `d` and `|pr| ≥ 2·||qp| − |qr||`.
pub fn psi_estimate(kappa: Curvature, d: f64, grid: &PsiGrid) -> Result<PsiEstimate> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::domain(format!("d must be > 0, got {d}")));
    }
    if let Some(h) = kappa.half_radius() {
        if d >= h {
            return Err(Error::domain(format!("d must be < pi/(2 sqrt(kappa)) = {h}, got {d}")));
        }
    }
    if grid.cells < 2 || grid.refine_starts == 0 || grid.tol.is_nan() || grid.tol <= 0.0 {
        return Err(Error::domain("grid needs >= 2 cells, >= 1 start and tol > 0"));
    }
    let n = grid.cells;
    let h = d / n as f64;
    let at = |i: usize| h * (i + 1) as f64;
    let keep = grid.refine_starts;

    let push = |best: &mut Vec<(f64, [usize; 3])>, item: (f64, [usize; 3])| {
        best.push(item);
        best.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
        best.truncate(keep);
    };
    let best = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best: Vec<(f64, [usize; 3])> = Vec::with_capacity(keep + 1);
            for j in 0..n {
                for l in 0..n {
                    if let Some(v) = objective(kappa, d, [at(i), at(j), at(l)]) {
                        if best.len() < keep || v > best[best.len() - 1].0 {
                            push(&mut best, (v, [i, j, l]));
                        }
                    }
                }
            }
            best
        })
        .reduce(Vec::new, |mut a, b| {
            for item in b {
                push(&mut a, item);
            }
            a
        });
    if best.is_empty() {
        return Err(Error::Degenerate("no feasible triangle on the grid".into()));
    }

    let f = |x: [f64; 3]| objective(kappa, d, x).unwrap_or(f64::NEG_INFINITY);
    let mut value = best[0].0;
    let mut argmax = [at(best[0].1[0]), at(best[0].1[1]), at(best[0].1[2])];
    for &(_, [i, j, l]) in &best {
        let (x, v) = nelder_mead(f, [at(i), at(j), at(l)], h, grid.tol);
        if v > value {
            value = v;
            argmax = x;
        }
    }
    let s = sn(kappa, d)?;
    Ok(PsiEstimate {
        value,
        lower: 2.0 * s / 3.0,
        upper: 2.0 * s,
        isoceles_sup: isoceles_sup(kappa, d),
        argmax: SideTriple::new(argmax[0], argmax[1], argmax[2]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn k(x: f64) -> Curvature {
        Curvature::new(x).unwrap()
    }

    #[test]
    fn isoceles_limits() {
        assert_abs_diff_eq!(isoceles_sup(k(0.0), 0.7), 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(isoceles_sup(k(-1.0), 1.0), 1f64.sinh(), epsilon = 1e-10);
        assert_abs_diff_eq!(isoceles_sup(k(1.0), 1.2), 1.2f64.sin(), epsilon = 1e-10);
    }

    #[test]
    fn coarse_sandwich() {
        let grid = PsiGrid { cells: 40, ..PsiGrid::default() };
        for kappa in [-1.0, 0.0, 1.0] {
            let e = psi_estimate(k(kappa), 0.7, &grid).unwrap();
            assert!(e.lower <= e.value && e.value <= e.upper, "{e:?}");
        }
    }

    #[test]
    fn flat_scales_linearly() {
        let grid = PsiGrid { cells: 30, ..PsiGrid::default() };
        let a = psi_estimate(k(0.0), 0.5, &grid).unwrap().value;
        let b = psi_estimate(k(0.0), 1.0, &grid).unwrap().value;
        assert_abs_diff_eq!(b, 2.0 * a, epsilon = 1e-5);
    }

    #[test]
    fn rejects_large_d() {
        assert!(psi_estimate(k(1.0), 1.6, &PsiGrid::default()).is_err());
        assert!(psi_estimate(k(0.0), 0.0, &PsiGrid::default()).is_err());
    }
}
