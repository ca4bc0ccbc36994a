//! Evaluation of the length/turning-angle/volume inequalities and their
//! constants, as machine-checkable verdicts.
//!
//! Every claim is normalized to the form `lhs ≥ rhs`, so `margin = lhs − rhs`
//! and a verdict holds when the margin is at least `−1e−9`. Two-sided
//! checks are reported as two verdicts.

mod lemma13;
mod psi;

pub use lemma13::{derive_eta, f_nonneg_check, lemma_1_3_check, FCheck, Lemma13Report};
pub use psi::{isoceles_sup, psi_estimate, PsiEstimate, PsiGrid};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::RoughVolumeEstimate;
use crate::spaceform::{integral_sn_pow, model_ball_volume, sn, unit_sphere_volume, Curvature};

/// Margin below which a verdict fails.
pub const HOLDS_TOL: f64 = 1e-9;

/// One evaluated inequality `lhs ≥ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
    /// The bound is trivially true (its right-hand side is not positive).
    pub vacuous: bool,
    pub context: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl BoundVerdict {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let margin = lhs - rhs;
        BoundVerdict {
            name: name.into(),
            lhs,
            rhs,
            margin,
            holds: margin >= -HOLDS_TOL,
            vacuous: false,
            context: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Like [`BoundVerdict::new`] for a lower bound `rhs`, marking it vacuous
    /// when `rhs ≤ 0`.
    pub fn lower_bound(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let mut v = BoundVerdict::new(name, lhs, rhs);
        v.vacuous = rhs <= 0.0;
        v
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.context.insert(key.to_string(), value);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

/// Dimension, curvature bound, diameter bound, volume lower bound and ball radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryBudget {
    pub n: usize,
    pub kappa: Curvature,
    pub diameter: f64,
    pub volume: f64,
    /// `D` for `κ ≤ 0`, `min{D, π/(2√κ)}` otherwise.
    pub d0: f64,
    pub r: f64,
    pub r0: f64,
}

impl GeometryBudget {
    pub fn new(n: usize, kappa: Curvature, diameter: f64, volume: f64, r: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("dimension must be >= 2, got {n}")));
        }
        if !(diameter.is_finite() && diameter > 0.0) || !(volume.is_finite() && volume >= 0.0) || !(r.is_finite() && r > 0.0) {
            return Err(Error::domain("diameter and radius must be > 0, volume >= 0"));
        }
        Ok(GeometryBudget {
            n,
            kappa,
            diameter,
            volume,
            d0: kappa.clamp_to_half(diameter),
            r,
            r0: kappa.clamp_to_half(r),
        })
    }

    /// `vol(S^{n−2})·sn_κ^{n−1}(D₀)`.
    fn denominator(&self) -> Result<f64> {
        Ok(unit_sphere_volume(self.n - 2) * sn(self.kappa, self.d0)?.powi(self.n as i32 - 1))
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::domain(format!("dimension must be >= 2, got {n}")))
    } else {
        Ok(())
    }
}

/// The loop inequality in its length form
/// `L + (n−1)·r·Θ ≥ (n−1)·Haus_n(B_r(p)) / (vol(S^{n−2})·sn_κ^{n−1}(r₀))`
/// and its volume form
/// `Haus_n(B_r(p)) ≤ vol(S^{n−2})·[sn_κ^{n−1}(r₀)·L/(n−1) + Θ·∫₀^r sn_κ^{n−1}]`.
pub fn theorem_a_check(n: usize, kappa: Curvature, r: f64, haus_ball: f64, length: f64, turning: f64) -> Result<(BoundVerdict, BoundVerdict)> {
    check_dim(n)?;
    if r.is_nan() || r <= 0.0 || haus_ball < 0.0 || length < 0.0 || turning < 0.0 {
        return Err(Error::domain("need r > 0 and non-negative volume, length and turning angle"));
    }
    let m = (n - 1) as f64;
    let r0 = kappa.clamp_to_half(r);
    let r_int = kappa.max_radius().map_or(r, |max| r.min(max));
    let vs = unit_sphere_volume(n - 2);
    let snp = sn(kappa, r0)?.powi(n as i32 - 1);
    let integral = integral_sn_pow(kappa, (n - 1) as u32, r_int)?;
    let ctx = |v: BoundVerdict| {
        v.with("n", n as f64)
            .with("kappa", kappa.value())
            .with("r", r)
            .with("r0", r0)
            .with("haus_ball", haus_ball)
            .with("length", length)
            .with("turning", turning)
    };
    let main = ctx(BoundVerdict::lower_bound("theorem-a", length + m * r * turning, m * haus_ball / (vs * snp)));
    let vol_form = ctx(BoundVerdict::new("theorem-1.1", vs * (snp * length / m + turning * integral), haus_ball))
        .with("integral_sn", integral);
    Ok((main, vol_form))
}

/// Constants derived from a [`GeometryBudget`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorollaryConstants {
    /// Lower bound for `L + Θ`.
    pub c: f64,
    /// `v / (D·vol(S^{n−2})·sn_κ^{n−1}(D₀))`; also the multiplier of `ε` in
    /// the ε-closed threshold.
    pub a: f64,
    pub eps_multiplier: f64,
    /// `c(n)·vol(S^{n−2})/(n−1)`.
    pub c_big_n: f64,
}

pub fn corollary_constants(budget: &GeometryBudget, c_n: f64) -> Result<CorollaryConstants> {
    let denom = budget.denominator()?;
    let m = (budget.n - 1) as f64;
    let c = budget.volume * m.min(1.0 / budget.diameter) / denom;
    let a = budget.volume / (budget.diameter * denom);
    Ok(CorollaryConstants { c, a, eps_multiplier: a, c_big_n: c_n * unit_sphere_volume(budget.n - 2) / m })
}

/// `L + Θ ≥ c(n, κ, D, v)`.
pub fn corollary_0_1_check(length: f64, turning: f64, budget: &GeometryBudget) -> Result<BoundVerdict> {
    let k = corollary_constants(budget, 0.0)?;
    Ok(BoundVerdict::lower_bound("corollary-0.1", length + turning, k.c)
        .with("length", length)
        .with("turning", turning)
        .with("volume", budget.volume)
        .with("diameter", budget.diameter))
}

fn check_eps(eps: f64) -> Result<()> {
    if (0.0..1.0).contains(&eps) {
        Ok(())
    } else {
        Err(Error::domain(format!("epsilon must lie in [0, 1), got {eps}")))
    }
}

/// Whether a loop of turning angle `turning` is an ε-closed geodesic.
pub fn epsilon_closed_test(turning: f64, eps: f64, budget: &GeometryBudget) -> Result<bool> {
    check_eps(eps)?;
    Ok(turning <= eps * corollary_constants(budget, 0.0)?.a)
}

/// Length lower bound `(1−ε)·(n−1)·v / (vol(S^{n−2})·sn_κ^{n−1}(D₀))` for ε-closed geodesics.
pub fn corollary_0_2_bound(eps: f64, budget: &GeometryBudget) -> Result<f64> {
    check_eps(eps)?;
    Ok((1.0 - eps) * (budget.n - 1) as f64 * budget.volume / budget.denominator()?)
}

/// Length lower bound `(1−ε)·V_rn(X) / (C(n)·sn_κ^{n−1}(D₀))` in terms of the rough volume.
pub fn corollary_0_7_bound(eps: f64, budget: &GeometryBudget, rough_volume: f64, c_n: f64) -> Result<f64> {
    check_eps(eps)?;
    if c_n.is_nan() || c_n <= 0.0 {
        return Err(Error::domain(format!("c(n) must be > 0, got {c_n}")));
    }
    let k = corollary_constants(budget, c_n)?;
    Ok((1.0 - eps) * rough_volume / (k.c_big_n * sn(budget.kappa, budget.d0)?.powi(budget.n as i32 - 1)))
}

/// Distance lower bound `((n−1)/2)·[v/(vol(S^{n−2})·sn_κ^{n−1}(D₀)) − D·Θ]`
/// for two minimal geodesics from p to q whose concatenation turns by `Θ`.
/// Returned unclamped; it may be negative.
pub fn theorem_b_bound(budget: &GeometryBudget, turning_pair: f64) -> Result<f64> {
    if !(0.0..=std::f64::consts::TAU).contains(&turning_pair) {
        return Err(Error::domain(format!("turning angle must lie in [0, 2pi], got {turning_pair}")));
    }
    let m = (budget.n - 1) as f64;
    Ok(0.5 * m * (budget.volume / budget.denominator()? - budget.diameter * turning_pair))
}

/// The distance bound with `Θ = 4β`.
pub fn corollary_0_4_bound(budget: &GeometryBudget, beta: f64) -> Result<f64> {
    theorem_b_bound(budget, 4.0 * beta)
}

/// Injectivity radius lower bound
/// `((n−1)/2)·[Haus_n(B_r(p))/(vol(S^{n−2})·sn_κ^{n−1}(r₀)) − r·θ_p]`.
pub fn injectivity_bound(n: usize, kappa: Curvature, r: f64, haus_ball: f64, theta_p: f64) -> Result<f64> {
    check_dim(n)?;
    if r.is_nan() || r <= 0.0 {
        return Err(Error::domain(format!("radius must be > 0, got {r}")));
    }
    if !(0.0..=std::f64::consts::TAU).contains(&theta_p) {
        return Err(Error::domain(format!("geodesic angle must lie in [0, 2pi], got {theta_p}")));
    }
    let r0 = kappa.clamp_to_half(r);
    let denom = unit_sphere_volume(n - 2) * sn(kappa, r0)?.powi(n as i32 - 1);
    Ok(0.5 * (n - 1) as f64 * (haus_ball / denom - r * theta_p))
}

/// Relative volume comparison:
/// `Haus_n(B_r(p)) ≥ Haus_n(X)·vol(B^κ_r)/vol(B^κ_diam)`.
pub fn bishop_gromov_lower(haus_total: f64, diam: f64, kappa: Curvature, n: usize, r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= diam) {
        return Err(Error::domain(format!("need 0 < r <= diam, got r = {r}, diam = {diam}")));
    }
    Ok(haus_total * model_ball_volume(kappa, n, r)? / model_ball_volume(kappa, n, diam)?)
}

/// Rough-volume upper bound `2·d₁·(2 sn_κ(d))^{n−1}·V_link` for a set seen
/// from a point: `d₁` bounds the diameter of the set with the point, `d` the
/// spread of distances to the point, `link_rough_volume` the rough volume of
/// its direction set.
pub fn corollary_2_5_bound(kappa: Curvature, n: usize, d1: f64, d: f64, link_rough_volume: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("dimension must be >= 1"));
    }
    Ok(2.0 * d1 * (2.0 * sn(kappa, d)?).powi(n as i32 - 1) * link_rough_volume)
}

/// Two-sided proportionality check: the ratio
/// `V̂_rn(U) / (c(n)·Haus_n(U))` must lie within `1 ± rel_tol`.
pub fn theorem_c_check(name: &str, rough: &RoughVolumeEstimate, haus: f64, c_n: f64, rel_tol: f64) -> Result<(BoundVerdict, BoundVerdict)> {
    if !(haus > 0.0 && c_n > 0.0) {
        return Err(Error::domain("Hausdorff measure and c(n) must be > 0"));
    }
    let ratio = rough.value / (c_n * haus);
    let ctx = |v: BoundVerdict| {
        v.with("rough_volume", rough.value)
            .with("haus", haus)
            .with("c_n", c_n)
            .with("ratio", ratio)
            .with("rel_tol", rel_tol)
            .with("slope_diagnostic", rough.slope_diagnostic)
    };
    let lower = ctx(BoundVerdict::new(format!("{name}-lower"), ratio, 1.0 - rel_tol));
    let upper = ctx(BoundVerdict::new(format!("{name}-upper"), 1.0 + rel_tol, ratio));
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn k(x: f64) -> Curvature {
        Curvature::new(x).unwrap()
    }

    #[test]
    fn great_circle_equality() {
        let (a, b) = theorem_a_check(2, k(1.0), PI, 4.0 * PI, 2.0 * PI, 0.0).unwrap();
        assert_abs_diff_eq!(a.rhs, 2.0 * PI, epsilon = 1e-14);
        assert!(a.margin.abs() <= 1e-12 && a.holds);
        assert!(b.margin.abs() <= 1e-12 && b.holds);
    }

    #[test]
    fn trivial_loop_holds() {
        let (a, _) = theorem_a_check(2, k(0.0), 0.1, PI * 0.01, 0.0, 2.0 * PI).unwrap();
        assert!(a.margin > 0.0);
    }

    #[test]
    fn flat_cone_loop_example() {
        let (theta, a) = (PI / 2.0, 0.05);
        let length = 2.0 * a * (theta / 2.0).sin();
        let (v, _) = theorem_a_check(2, k(0.0), 1.0, PI / 4.0, length, theta).unwrap();
        assert_abs_diff_eq!(v.lhs, 0.0707 + PI / 2.0, epsilon = 1e-4);
        assert_abs_diff_eq!(v.rhs, PI / 8.0, epsilon = 1e-15);
        assert!(v.margin > 0.0);
    }

    #[test]
    fn constants() {
        let b = GeometryBudget::new(2, k(0.0), 1.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(corollary_constants(&b, 1.0).unwrap().c, 0.5, epsilon = 1e-15);
        let b = GeometryBudget::new(2, k(1.0), 3.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(b.d0, PI / 2.0, epsilon = 1e-15);
        let b = GeometryBudget::new(3, k(-1.0), 2.0, 0.0, 1.0).unwrap();
        let c = corollary_constants(&b, 1.0).unwrap();
        assert_eq!((c.c, c.a), (0.0, 0.0));
    }

    #[test]
    fn sphere_budget() {
        let b = GeometryBudget::new(2, k(1.0), PI, 4.0 * PI, PI).unwrap();
        assert_abs_diff_eq!(corollary_0_2_bound(0.0, &b).unwrap(), 2.0 * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(corollary_0_2_bound(0.5, &b).unwrap(), PI, epsilon = 1e-14);
        assert_abs_diff_eq!(theorem_b_bound(&b, 0.0).unwrap(), PI, epsilon = 1e-14);
        let a = corollary_constants(&b, 1.0).unwrap().a;
        assert_abs_diff_eq!(theorem_b_bound(&b, a).unwrap(), 0.0, epsilon = 1e-14);
        assert!(epsilon_closed_test(0.0, 0.0, &b).unwrap());
        assert!(epsilon_closed_test(0.0, 1.0, &b).is_err());
    }

    #[test]
    fn injectivity_examples() {
        let bound = injectivity_bound(2, k(0.0), 1.0, PI / 4.0, PI / 2.0).unwrap();
        assert_abs_diff_eq!(bound, 0.5 * (PI / 8.0 - PI / 2.0), epsilon = 1e-15);
        assert!(bound < 0.05 * (PI / 4.0).sin());
        let full = injectivity_bound(2, k(1.0), 1.0, 2.0 * PI * (1.0 - 1f64.cos()), 0.0).unwrap();
        let (a, _) = theorem_a_check(2, k(1.0), 1.0, 2.0 * PI * (1.0 - 1f64.cos()), 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(full, 0.5 * a.rhs, epsilon = 1e-14);
    }

    #[test]
    fn bishop_gromov_on_sphere_is_equality() {
        for r in [0.2, 1.0, 2.5] {
            let b = bishop_gromov_lower(4.0 * PI, PI, k(1.0), 2, r).unwrap();
            assert_abs_diff_eq!(b, 2.0 * PI * (1.0 - r.cos()), epsilon = 1e-13);
        }
        assert_abs_diff_eq!(bishop_gromov_lower(3.0, 2.0, k(0.0), 3, 2.0).unwrap(), 3.0, epsilon = 1e-15);
    }

    #[test]
    fn verdict_margin_sign() {
        let v = BoundVerdict::new("x", 1.0, 1.0 + 5e-10);
        assert!(v.holds);
        let v = BoundVerdict::new("x", 1.0, 1.0 + 2e-9);
        assert!(!v.holds);
        assert!(BoundVerdict::lower_bound("x", 0.1, -1.0).vacuous);
    }
}
