use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::{Estimate, EstimateDetail, Outcome, ScenarioConfig};
use crate::bounds::{
    bishop_gromov_lower, corollary_0_1_check, corollary_0_2_bound, corollary_0_4_bound, corollary_0_7_bound, corollary_2_5_bound,
    corollary_constants, derive_eta, epsilon_closed_test, f_nonneg_check, injectivity_bound, isoceles_sup, lemma_1_3_check,
    psi_estimate, theorem_a_check, theorem_b_bound, theorem_c_check, BoundVerdict, GeometryBudget, PsiGrid,
};
use crate::error::{Error, Result};
use crate::loops::{loop_length, turning_angle_broken, turning_angle_curve, turning_angle_inscribed, BrokenLoop, CurveSampler};
use crate::measure::{cone_annulus_volume, mc_hausdorff, rough_volume_estimate, PackingOptions, RegionSpec, RoughVolumeEstimate};
use crate::modelspaces::{ModelSpace, Point, SpaceConfig};
use crate::rng::derive_seed;
use crate::spaceform::{model_ball_volume, sn, unit_sphere_volume, Curvature};

pub(crate) struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
    pub defaults: fn() -> ScenarioConfig,
    pub run: fn(&ScenarioConfig) -> Result<Outcome>,
}

const DEFAULT_SEED: u64 = 20_240_607;

static SCENARIOS: &[Scenario] = &[
    Scenario {
        name: "great-circle-equality",
        description: "Great circles on S^2 and S^3 attain equality in the length/turning-angle bound",
        defaults: great_circle_defaults,
        run: great_circle_run,
    },
    Scenario {
        name: "flat-cone-example-2-9",
        description: "Geodesic loop around the vertex of a flat cone of angle pi/2",
        defaults: flat_cone_defaults,
        run: flat_cone_run,
    },
    Scenario {
        name: "product-cone-example",
        description: "Cone loop in the product of a flat cone with a Euclidean ball",
        defaults: product_defaults,
        run: product_run,
    },
    Scenario {
        name: "sphere-cap-volumes",
        description: "Analytic cone-annulus volumes against Monte Carlo on sphere caps and a flat-cone annulus",
        defaults: caps_defaults,
        run: caps_run,
    },
    Scenario {
        name: "psi-sandwich",
        description: "Numerical psi(kappa, d) between (2/3) sn(d) and 2 sn(d), and its isoceles limit",
        defaults: psi_defaults,
        run: psi_run,
    },
    Scenario {
        name: "lemma-1-3-sweep",
        description: "Random configurations checked against the angle sandwich at a broken-geodesic vertex",
        defaults: lemma_defaults,
        run: lemma_run,
    },
    Scenario {
        name: "f-nonneg",
        description: "u + 36|u|^1.5 - pi/2 + arccos(u) is non-negative on (-1, 1)",
        defaults: f_defaults,
        run: f_run,
    },
    Scenario {
        name: "rough-volume-cube",
        description: "Rough volume of the unit interval and squares of side 1 and 2 from greedy packings",
        defaults: cube_defaults,
        run: cube_run,
    },
    Scenario {
        name: "theorem-c-disk",
        description: "Rough volume over Hausdorff measure of the unit disk against the unit square",
        defaults: disk_defaults,
        run: disk_run,
    },
    Scenario {
        name: "bishop-gromov-sphere",
        description: "Relative volume comparison: equality on S^2, inequality on flat-cone balls",
        defaults: bg_defaults,
        run: bg_run,
    },
    Scenario {
        name: "turning-angle-latitude",
        description: "Turning angles of inscribed polygons of a latitude circle, a planar circle and a great circle",
        defaults: latitude_defaults,
        run: latitude_run,
    },
    Scenario {
        name: "corollary-constants",
        description: "Constants of the length bounds and their equality and consistency cases",
        defaults: constants_defaults,
        run: constants_run,
    },
    Scenario {
        name: "theorem-b-sphere",
        description: "Distance lower bound from two minimal geodesics between antipodes of S^2",
        defaults: theorem_b_defaults,
        run: theorem_b_run,
    },
    Scenario {
        name: "injectivity-radius",
        description: "Injectivity radius lower bound on spheres (equality) and flat cones (vacuous)",
        defaults: injectivity_defaults,
        run: injectivity_run,
    },
];

pub(crate) fn find(name: &str) -> Option<&'static Scenario> {
    SCENARIOS.iter().find(|s| s.name == name)
}

/// Names and descriptions of all registered scenarios.
pub fn list_scenarios() -> Vec<(&'static str, &'static str)> {
    SCENARIOS.iter().map(|s| (s.name, s.description)).collect()
}

/// The full default configuration of a scenario.
pub fn default_config(name: &str) -> Option<ScenarioConfig> {
    find(name).map(|s| (s.defaults)())
}

fn config(name: &str, space: Option<SpaceConfig>, params: &[(&str, f64)], budgets: &[(&str, u64)], schedules: &[(&str, Vec<f64>)]) -> ScenarioConfig {
    ScenarioConfig {
        name: name.to_string(),
        space,
        params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        seed: DEFAULT_SEED,
        budgets: budgets.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        schedules: schedules.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        output_path: None,
    }
}

fn k(x: f64) -> Result<Curvature> {
    Curvature::new(x)
}

fn tag(x: f64) -> String {
    format!("{x}")
}

fn renamed(mut v: BoundVerdict, name: String) -> BoundVerdict {
    v.name = name;
    v
}

/// `tol ≥ |value − reference|`.
fn close(name: String, value: f64, reference: f64, tol: f64) -> BoundVerdict {
    BoundVerdict::new(name, tol, (value - reference).abs()).with("value", value).with("reference", reference)
}

fn equator(dim: usize, m: usize) -> Vec<Point> {
    (0..m)
        .map(|i| {
            let (s, c) = (TAU * i as f64 / m as f64).sin_cos();
            let mut v = vec![0.0; dim + 1];
            v[0] = c;
            v[1] = s;
            Point::unit(v)
        })
        .collect()
}

fn great_circle_defaults() -> ScenarioConfig {
    config("great-circle-equality", None, &[], &[("vertices", 4)], &[])
}

fn great_circle_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let m = cfg.budget("vertices")?;
    let mut out = Outcome::default();
    for n in [2usize, 3] {
        let space = ModelSpace::sphere(1.0, n)?;
        let lp = BrokenLoop::new(space, equator(n, m))?;
        let length = loop_length(&lp);
        let turning = turning_angle_broken(&lp)?;
        let haus = model_ball_volume(k(1.0)?, n, PI)?;
        let (a, b) = theorem_a_check(n, k(1.0)?, PI, haus, length, turning)?;
        out.verdicts.push(renamed(a, format!("theorem-a-n{n}")));
        out.verdicts.push(renamed(b, format!("theorem-1.1-n{n}")));
        let budget = GeometryBudget::new(n, k(1.0)?, PI, haus, PI)?;
        let c02 = corollary_0_2_bound(0.0, &budget)?;
        out.verdicts.push(BoundVerdict::lower_bound(format!("corollary-0.2-n{n}"), length, c02));
        out.estimates.push(Estimate::scalar(format!("length-n{n}"), length, Some(TAU)));
        out.estimates.push(Estimate::scalar(format!("turning-n{n}"), turning, Some(0.0)));
        out.estimates.push(Estimate::scalar(format!("haus-n{n}"), haus, Some(unit_sphere_volume(n))));
    }
    Ok(out)
}

fn flat_cone_defaults() -> ScenarioConfig {
    config(
        "flat-cone-example-2-9",
        Some(SpaceConfig::FlatCone { theta: FRAC_PI_2, radius: 1.0 }),
        &[("a", 0.05), ("r", 1.0)],
        &[],
        &[],
    )
}

fn cone_space(cfg: &ScenarioConfig) -> Result<(ModelSpace, f64, f64)> {
    match &cfg.space {
        Some(SpaceConfig::FlatCone { theta, radius }) => {
            let space = ModelSpace::flat_cone(*theta, *radius).map_err(|e| Error::usage("space", e.to_string()))?;
            Ok((space, *theta, *radius))
        }
        _ => Err(Error::usage("space", "expected a flat-cone space")),
    }
}

fn cone_loop(theta: f64, a: f64, d: f64) -> Result<BrokenLoop> {
    let curve = CurveSampler::cone_loop(theta, a, d).map_err(|e| Error::usage("params.a", e.to_string()))?;
    BrokenLoop::new(curve.space().clone(), curve.inscribed(4))
}

fn flat_cone_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let (space, theta, d) = cone_space(cfg)?;
    let (a, r) = (cfg.param("a")?, cfg.param("r")?);
    let lp = cone_loop(theta, a, d)?;
    let reach = space.distance(&Point::polar(a, 0.0), &Point::polar(d, 0.5 * theta))?;
    if r.is_nan() || r < reach {
        return Err(Error::usage("params.r", format!("ball radius must cover the sector (>= {reach})")));
    }
    let length = loop_length(&lp);
    let turning = turning_angle_broken(&lp)?;
    let haus = cone_annulus_volume(k(0.0)?, 2, theta, 0.0, d)?;
    let mut out = Outcome::default();
    let (ta, tv) = theorem_a_check(2, k(0.0)?, r, haus, length, turning)?;
    let rhs = ta.rhs;
    out.verdicts.push(ta);
    out.verdicts.push(tv);
    let inrad = a * (0.5 * theta).sin();
    let inj = injectivity_bound(2, k(0.0)?, r, haus, turning)?;
    out.verdicts.push(BoundVerdict::lower_bound("corollary-0.5", inrad, inj).with("theta_p", turning));
    out.estimates.push(Estimate::scalar("loop-length", length, Some(2.0 * a * (0.5 * theta).sin())));
    out.estimates.push(Estimate::scalar("turning-angle", turning, Some(theta)));
    out.estimates.push(Estimate::scalar("haus-ball", haus, Some(0.5 * theta * d * d)));
    out.estimates.push(Estimate::scalar("theorem-a-rhs", rhs, Some(0.25 * theta * d * d)));
    out.estimates.push(Estimate::scalar("displayed-rhs", 0.5 * theta * d, Some(rhs)));
    out.notes.push(format!(
        "right-hand side recomputed with vol(S^0) = 2 is theta*d^2/4 = {rhs:.6}; the closed form theta*d/2 = {:.6} quoted for this example is larger by a factor 2",
        0.5 * theta * d
    ));
    out.notes.push("B_r(p) contains the whole sector, so Haus(B_r(p)) = theta*d^2/2".into());
    Ok(out)
}

fn product_defaults() -> ScenarioConfig {
    config(
        "product-cone-example",
        Some(SpaceConfig::Product {
            left: Box::new(SpaceConfig::FlatCone { theta: FRAC_PI_2, radius: 1.0 }),
            right: Box::new(SpaceConfig::EuclideanBall { dim: 2, radius: 1.0 }),
        }),
        &[("a", 0.05)],
        &[],
        &[],
    )
}

fn product_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let Some(SpaceConfig::Product { left, right }) = &cfg.space else {
        return Err(Error::usage("space", "expected a product space"));
    };
    let (SpaceConfig::FlatCone { theta, radius: d }, SpaceConfig::EuclideanBall { dim: m, radius: rb }) = (left.as_ref(), right.as_ref()) else {
        return Err(Error::usage("space", "expected a flat cone times a Euclidean ball"));
    };
    let (theta, d, m, rb) = (*theta, *d, *m, *rb);
    let space = ModelSpace::from_config(cfg.space.as_ref().expect("checked")).map_err(|e| Error::usage("space", e.to_string()))?;
    let a = cfg.param("a")?;
    let cone = cone_loop(theta, a, d)?;
    let centre = Point::Coords(vec![0.0; m]);
    let vertices = cone.vertices().iter().map(|p| Point::pair(p.clone(), centre.clone())).collect();
    let lp = BrokenLoop::new(space.clone(), vertices)?;
    let length = loop_length(&lp);
    let turning = turning_angle_broken(&lp)?;
    let n = m + 2;
    let diam = space.diameter();
    let vol = cone_annulus_volume(k(0.0)?, 2, theta, 0.0, d)? * model_ball_volume(k(0.0)?, m, rb)?;
    let mut out = Outcome::default();
    let (ta, tv) = theorem_a_check(n, k(0.0)?, diam, vol, length, turning)?;
    out.verdicts.push(ta);
    out.verdicts.push(tv);
    let budget = GeometryBudget::new(n, k(0.0)?, diam, vol, diam)?;
    out.verdicts.push(corollary_0_1_check(length, turning, &budget)?);
    out.estimates.push(Estimate::scalar("loop-length", length, Some(2.0 * a * (0.5 * theta).sin())));
    out.estimates.push(Estimate::scalar("turning-angle", turning, Some(theta)));
    out.estimates.push(Estimate::scalar("volume", vol, Some(theta * d.powi(2) * rb.powi(m as i32) * unit_sphere_volume(m - 1) / (2.0 * m as f64))));
    out.estimates.push(Estimate::scalar("diameter", diam, Some(d.max(2.0 * d * (0.25 * theta).sin()).hypot(2.0 * rb))));
    out.notes.push(format!("dimension n = m + 2 = {n}; the ball B_r(p) with r = diam is the whole space"));
    Ok(out)
}

fn caps_defaults() -> ScenarioConfig {
    config(
        "sphere-cap-volumes",
        None,
        &[("cone_theta", FRAC_PI_2), ("cone_r1", 0.2), ("cone_r2", 0.8)],
        &[("samples", 1_000_000)],
        &[("cap_radii", vec![0.5, 1.0, 2.0])],
    )
}

fn mc_verdict(name: String, mc: &crate::measure::McEstimate, exact: f64) -> BoundVerdict {
    BoundVerdict::new(name, 3.0 * mc.stderr, (mc.estimate - exact).abs())
        .with("estimate", mc.estimate)
        .with("stderr", mc.stderr)
        .with("exact", exact)
}

fn caps_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let samples = cfg.budget("samples")?;
    let sphere = ModelSpace::sphere(1.0, 2)?;
    let mut out = Outcome::default();
    for (i, &r) in cfg.schedule("cap_radii")?.iter().enumerate() {
        let exact = cone_annulus_volume(k(1.0)?, 2, TAU, 0.0, r)?;
        let region = RegionSpec::ConeAnnulus { link_measure: TAU, r1: 0.0, r2: r };
        let mc = mc_hausdorff(&sphere, &region, &RegionSpec::WholeSpace, samples, derive_seed(cfg.seed, i as u64))?;
        out.verdicts.push(mc_verdict(format!("cap-r{}", tag(r)), &mc, exact));
        out.estimates.push(Estimate::scalar(format!("cap-exact-r{}", tag(r)), exact, Some(TAU * (1.0 - r.cos()))));
        out.estimates.push(Estimate { name: format!("cap-mc-r{}", tag(r)), value: mc.estimate, reference: Some(exact), detail: EstimateDetail::MonteCarlo(mc) });
    }
    let (theta, r1, r2) = (cfg.param("cone_theta")?, cfg.param("cone_r1")?, cfg.param("cone_r2")?);
    let cone = ModelSpace::flat_cone(theta, 1.0).map_err(|e| Error::usage("params.cone_theta", e.to_string()))?;
    let exact = cone_annulus_volume(k(0.0)?, 2, theta, r1, r2)?;
    let region = RegionSpec::ConeAnnulus { link_measure: theta, r1, r2 };
    let mc = mc_hausdorff(&cone, &region, &RegionSpec::WholeSpace, samples, derive_seed(cfg.seed, 1000))?;
    out.verdicts.push(mc_verdict("cone-annulus".into(), &mc, exact));
    out.estimates.push(Estimate::scalar("cone-annulus-exact", exact, Some(0.5 * theta * (r2 * r2 - r1 * r1))));
    out.estimates.push(Estimate { name: "cone-annulus-mc".into(), value: mc.estimate, reference: Some(exact), detail: EstimateDetail::MonteCarlo(mc) });
    Ok(out)
}

fn psi_defaults() -> ScenarioConfig {
    config(
        "psi-sandwich",
        None,
        &[("tol", 1e-6), ("isoceles_tol", 1e-4)],
        &[("cells", 200), ("refine_starts", 10)],
        &[("kappas", vec![-1.0, 0.0, 1.0]), ("ds", vec![0.3, 0.7, 1.2])],
    )
}

fn psi_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let grid = PsiGrid { cells: cfg.budget("cells")?, refine_starts: cfg.budget("refine_starts")?, tol: cfg.param("tol")? };
    let iso_tol = cfg.param("isoceles_tol")?;
    let mut out = Outcome::default();
    for &kappa in cfg.schedule("kappas")? {
        for &d in cfg.schedule("ds")? {
            let kk = k(kappa)?;
            if kk.half_radius().is_some_and(|h| d >= h) {
                continue;
            }
            let e = psi_estimate(kk, d, &grid)?;
            let id = format!("k{}-d{}", tag(kappa), tag(d));
            out.verdicts.push(BoundVerdict::new(format!("psi-lower-{id}"), e.value, e.lower));
            out.verdicts.push(BoundVerdict::new(format!("psi-upper-{id}"), e.upper, e.value));
            let s = sn(kk, d)?;
            out.verdicts.push(close(format!("isoceles-{id}"), isoceles_sup(kk, d), s, iso_tol));
            out.estimates.push(Estimate { name: format!("psi-{id}"), value: e.value, reference: None, detail: EstimateDetail::Psi(e) });
        }
    }
    Ok(out)
}

fn lemma_defaults() -> ScenarioConfig {
    config(
        "lemma-1-3-sweep",
        None,
        &[("epsilon", 0.05), ("eta_fixed", 1e-2)],
        &[("trials", 100_000)],
        &[("kappas", vec![-1.0, 0.0, 1.0])],
    )
}

fn lemma_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let eps = cfg.param("epsilon")?;
    let eta_fixed = cfg.param("eta_fixed")?;
    let trials = cfg.budget("trials")?;
    let mut out = Outcome::default();
    for (i, &kappa) in cfg.schedule("kappas")?.iter().enumerate() {
        let kk = k(kappa)?;
        let derived = derive_eta(kk, eps)?;
        for (j, (label, eta)) in [("derived", derived), ("fixed", eta_fixed)].into_iter().enumerate() {
            let r = lemma_1_3_check(kk, eta, eps, trials, derive_seed(cfg.seed, (2 * i + j) as u64))?;
            let name = format!("lemma-1.3-{label}-k{}", tag(kappa));
            out.verdicts.push(
                BoundVerdict::new(name.clone(), 0.0, r.violations() as f64)
                    .with("eta", eta)
                    .with("max_excess", r.max_excess)
                    .with("trials", trials as f64),
            );
            out.estimates.push(Estimate { name, value: r.violations() as f64, reference: Some(0.0), detail: EstimateDetail::Lemma13(r) });
        }
    }
    Ok(out)
}

fn f_defaults() -> ScenarioConfig {
    config("f-nonneg", None, &[("floor", -1e-12)], &[("grid_points", 1_000_000)], &[])
}

fn f_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let c = f_nonneg_check(cfg.budget("grid_points")?).map_err(|e| Error::usage("budgets.grid_points", e.to_string()))?;
    let mut out = Outcome::default();
    out.verdicts.push(BoundVerdict::new("f-min", c.min, cfg.param("floor")?).with("argmin", c.argmin));
    out.verdicts.push(BoundVerdict::new("f-argmin-at-zero", c.grid_step, c.argmin.abs()));
    out.estimates.push(Estimate { name: "f-grid".into(), value: c.min, reference: Some(0.0), detail: EstimateDetail::FCheck(c) });
    Ok(out)
}

fn packing_options(cfg: &ScenarioConfig) -> Result<PackingOptions> {
    Ok(PackingOptions { restarts: cfg.budget("restarts")?, ..PackingOptions::default() })
}

fn rough(space: &ModelSpace, n: usize, schedule: &[f64], opts: &PackingOptions, seed: u64) -> Result<RoughVolumeEstimate> {
    rough_volume_estimate(space, &RegionSpec::WholeSpace, n, schedule, opts, seed)
}

fn monotone(name: String, r: &RoughVolumeEstimate) -> BoundVerdict {
    let worst = r.counts.windows(2).map(|w| w[1] as f64 - w[0] as f64).fold(f64::INFINITY, f64::min);
    BoundVerdict::new(name, worst, 0.0)
}

fn rough_estimate(name: &str, r: RoughVolumeEstimate, reference: Option<f64>) -> Estimate {
    Estimate { name: name.into(), value: r.value, reference, detail: EstimateDetail::RoughVolume(r) }
}

fn hex_constant() -> f64 {
    2.0 / 3f64.sqrt()
}

fn cube_defaults() -> ScenarioConfig {
    config(
        "rough-volume-cube",
        None,
        &[("interval_tol", 0.02), ("square_floor", 0.93), ("square_band_hi", 1.10), ("band_epsilon", 0.05), ("scaling_tol", 0.03)],
        &[("restarts", 32)],
        &[
            ("interval", vec![0.016, 0.008, 0.004, 0.002, 0.001, 0.0005]),
            ("square", vec![0.1, 0.05, 0.025, 0.0125]),
        ],
    )
}

fn cube_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let opts = packing_options(cfg)?;
    let k0 = k(0.0)?;
    let mut out = Outcome::default();

    let interval = ModelSpace::euclidean_box(vec![1.0])?;
    let ri = rough(&interval, 1, cfg.schedule("interval")?, &opts, derive_seed(cfg.seed, 0))?;
    let (lo, hi) = theorem_c_check("theorem-c-interval", &ri, 1.0, 1.0, cfg.param("interval_tol")?)?;
    out.verdicts.extend([lo, hi, monotone("monotone-interval".into(), &ri)]);
    let link_bound = corollary_2_5_bound(k0, 1, 1.0, 0.5, 2.0)?;
    let max_scaled = ri.scaled.iter().copied().fold(0.0, f64::max);
    out.verdicts.push(BoundVerdict::new("corollary-2.5-interval", link_bound, max_scaled));

    let square_schedule = cfg.schedule("square")?;
    let unit = ModelSpace::euclidean_box(vec![1.0, 1.0])?;
    let rs = rough(&unit, 2, square_schedule, &opts, derive_seed(cfg.seed, 1))?;
    let floor = cfg.param("square_floor")? * hex_constant();
    out.verdicts.push(BoundVerdict::new("square-lower", rs.value, floor));
    out.verdicts.push(monotone("monotone-square".into(), &rs));
    let band_eps = cfg.param("band_epsilon")?;
    if let Some(j) = square_schedule.iter().position(|&e| e == band_eps) {
        let v = rs.scaled[j];
        out.verdicts.push(BoundVerdict::new(format!("square-band-lower-eps{}", tag(band_eps)), v, floor).with("epsilon", band_eps));
        out.verdicts.push(
            BoundVerdict::new(format!("square-band-upper-eps{}", tag(band_eps)), cfg.param("square_band_hi")? * hex_constant(), v)
                .with("epsilon", band_eps),
        );
    }
    let half_diag = 0.5 * 2f64.sqrt();
    let link_bound = corollary_2_5_bound(k0, 2, 2.0 * half_diag, half_diag, TAU)?;
    let max_scaled = rs.scaled.iter().copied().fold(0.0, f64::max);
    out.verdicts.push(BoundVerdict::new("corollary-2.5-square", link_bound, max_scaled));

    let double = ModelSpace::euclidean_box(vec![2.0, 2.0])?;
    let r2 = rough(&double, 2, square_schedule, &opts, derive_seed(cfg.seed, 2))?;
    let (lo, hi) = theorem_c_check("scaling-square-2", &r2, 4.0, rs.value, cfg.param("scaling_tol")?)?;
    out.verdicts.extend([lo, hi]);
    out.estimates.push(Estimate::scalar("scaling-ratio", r2.value / rs.value, Some(4.0)));
    out.estimates.push(Estimate::scalar("hex-reference", hex_constant(), None));
    out.estimates.push(rough_estimate("interval", ri, Some(1.0)));
    out.estimates.push(rough_estimate("unit-square", rs, None));
    out.estimates.push(rough_estimate("square-side-2", r2, None));
    Ok(out)
}

fn disk_defaults() -> ScenarioConfig {
    config(
        "theorem-c-disk",
        None,
        &[("ratio_tol", 0.10)],
        &[("restarts", 32)],
        &[("schedule", vec![0.1, 0.05, 0.025, 0.0125])],
    )
}

fn disk_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let opts = packing_options(cfg)?;
    let schedule = cfg.schedule("schedule")?;
    let unit = ModelSpace::euclidean_box(vec![1.0, 1.0])?;
    let rs = rough(&unit, 2, schedule, &opts, derive_seed(cfg.seed, 0))?;
    let disk = ModelSpace::euclidean_ball(2, 1.0)?;
    let rd = rough(&disk, 2, schedule, &opts, derive_seed(cfg.seed, 1))?;
    let mut out = Outcome::default();
    let (lo, hi) = theorem_c_check("theorem-c-disk", &rd, PI, rs.value, cfg.param("ratio_tol")?)?;
    out.verdicts.extend([lo, hi]);
    out.estimates.push(Estimate::scalar("c2-measured", rs.value, None));
    out.estimates.push(Estimate::scalar("c2-hex-reference", hex_constant(), None));
    out.estimates.push(Estimate::scalar("disk-ratio", rd.value / PI, Some(rs.value)));
    out.estimates.push(rough_estimate("unit-square", rs, None));
    out.estimates.push(rough_estimate("unit-disk", rd, None));
    out.notes.push("c(2) is taken from the measured unit square; 2/sqrt(3) is listed as a reference only".into());
    Ok(out)
}

fn bg_defaults() -> ScenarioConfig {
    config(
        "bishop-gromov-sphere",
        None,
        &[("cone_theta", FRAC_PI_2), ("vertex_ball_r", 0.5), ("off_center_t", 0.5), ("off_ball_r", 0.7)],
        &[("samples", 1_000_000)],
        &[("sphere_radii", vec![0.5, 1.0, 2.0, PI])],
    )
}

fn bg_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    let k1 = k(1.0)?;
    for &r in cfg.schedule("sphere_radii")? {
        let exact = model_ball_volume(k1, 2, r)?;
        let bound = bishop_gromov_lower(4.0 * PI, PI, k1, 2, r)?;
        out.verdicts.push(BoundVerdict::new(format!("bg-sphere-r{}", tag(r)), exact, bound));
    }
    let theta = cfg.param("cone_theta")?;
    let cone = ModelSpace::flat_cone(theta, 1.0).map_err(|e| Error::usage("params.cone_theta", e.to_string()))?;
    let total = cone_annulus_volume(k(0.0)?, 2, theta, 0.0, 1.0)?;
    let diam = cone.diameter();
    let samples = cfg.budget("samples")?;
    let balls = [
        ("bg-cone-vertex", Point::polar(0.0, 0.0), cfg.param("vertex_ball_r")?),
        ("bg-cone-off-vertex", Point::polar(cfg.param("off_center_t")?, 0.0), cfg.param("off_ball_r")?),
    ];
    for (i, (name, center, r)) in balls.into_iter().enumerate() {
        let region = RegionSpec::Ball { center, radius: r };
        let mc = mc_hausdorff(&cone, &region, &RegionSpec::WholeSpace, samples, derive_seed(cfg.seed, i as u64))?;
        let bound = bishop_gromov_lower(total, diam, k(0.0)?, 2, r)?;
        out.verdicts.push(
            BoundVerdict::new(name, mc.estimate + 3.0 * mc.stderr, bound)
                .with("estimate", mc.estimate)
                .with("stderr", mc.stderr),
        );
        out.estimates.push(Estimate { name: format!("{name}-mc"), value: mc.estimate, reference: Some(bound), detail: EstimateDetail::MonteCarlo(mc) });
    }
    out.notes.push("vertex-centred cone balls attain the bound; the Monte Carlo side carries a 3-standard-error allowance".into());
    Ok(out)
}

fn latitude_defaults() -> ScenarioConfig {
    let partitions: Vec<f64> = (4..=14).map(|k| (1u64 << k) as f64).collect();
    config(
        "turning-angle-latitude",
        None,
        &[("rho", PI / 6.0), ("latitude_tol", 1e-3), ("circle_tol", 1e-6)],
        &[("great_circle_vertices", 1 << 14)],
        &[("partitions", partitions)],
    )
}

fn partitions(cfg: &ScenarioConfig) -> Result<Vec<usize>> {
    cfg.schedule("partitions")?
        .iter()
        .map(|&m| {
            if m >= 1.0 && m.fract() == 0.0 {
                Ok(m as usize)
            } else {
                Err(Error::usage("schedules.partitions", format!("partition sizes must be positive integers, got {m}")))
            }
        })
        .collect()
}

fn latitude_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let sched = partitions(cfg)?;
    let rho = cfg.param("rho")?;
    let tol = cfg.param("latitude_tol")?;
    let mut out = Outcome::default();
    let lat = CurveSampler::latitude(1.0, rho).map_err(|e| Error::usage("params.rho", e.to_string()))?;
    let est = turning_angle_curve(&lat, &sched, tol)?;
    out.verdicts.push(close("latitude".into(), est.value, TAU * rho.cos(), tol));
    out.estimates.push(Estimate { name: "latitude".into(), value: est.value, reference: Some(TAU * rho.cos()), detail: EstimateDetail::Turning(est) });

    let circle = CurveSampler::planar_circle(1.0)?;
    let est = turning_angle_curve(&circle, &sched, tol)?;
    out.verdicts.push(close("planar-circle".into(), est.value, TAU, cfg.param("circle_tol")?));
    out.estimates.push(Estimate { name: "planar-circle".into(), value: est.value, reference: Some(TAU), detail: EstimateDetail::Turning(est) });

    let m = cfg.budget("great_circle_vertices")?;
    let great = CurveSampler::new(ModelSpace::sphere(1.0, 2)?, true, |s| {
        let (sn, cs) = (TAU * s).sin_cos();
        Point::Unit(vec![cs, sn, 0.0])
    })?;
    let value = turning_angle_inscribed(&great, m)?;
    out.verdicts.push(BoundVerdict::new("great-circle-polygon", 0.0, value));
    out.estimates.push(Estimate::scalar("great-circle-polygon", value, Some(0.0)));
    Ok(out)
}

fn constants_defaults() -> ScenarioConfig {
    config("corollary-constants", None, &[("epsilon", 0.5), ("c2", 2.0 / 1.732_050_807_568_877_2)], &[], &[])
}

fn constants_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let eps = cfg.param("epsilon")?;
    let c2 = cfg.param("c2")?;
    let mut out = Outcome::default();
    let budgets = [
        ("sphere", GeometryBudget::new(2, k(1.0)?, PI, 4.0 * PI, PI)?),
        ("hyperbolic", GeometryBudget::new(3, k(-1.0)?, 1.0, 1.0, 1.0)?),
        ("flat-cone", GeometryBudget::new(2, k(0.0)?, 1.0, PI / 4.0, 1.0)?),
    ];
    for (label, b) in &budgets {
        let c = corollary_constants(b, c2)?;
        out.estimates.push(Estimate::scalar(format!("c-{label}"), c.c, None));
        out.estimates.push(Estimate::scalar(format!("a-{label}"), c.a, None));
        let b02 = corollary_0_2_bound(0.0, b)?;
        let b07 = corollary_0_7_bound(0.0, b, c2 * b.volume, c2)?;
        out.verdicts.push(close(format!("corollary-0.7-consistency-{label}"), b07, b02, 1e-12 * b02.abs().max(1.0)));
        let slope = theorem_b_bound(b, 0.0)? - theorem_b_bound(b, 1.0)?;
        out.verdicts.push(close(format!("theorem-b-linear-{label}"), slope, 0.5 * (b.n - 1) as f64 * b.diameter, 1e-12));
        let inj_slope = injectivity_bound(b.n, b.kappa, b.r, b.volume, 0.0)? - injectivity_bound(b.n, b.kappa, b.r, b.volume, 1.0)?;
        out.verdicts.push(close(format!("injectivity-linear-{label}"), inj_slope, 0.5 * (b.n - 1) as f64 * b.r, 1e-12));
    }

    let sphere = &budgets[0].1;
    let lp = BrokenLoop::new(ModelSpace::sphere(1.0, 2)?, equator(2, 4))?;
    let (length, turning) = (loop_length(&lp), turning_angle_broken(&lp)?);
    out.verdicts.push(corollary_0_1_check(length, turning, sphere)?);
    out.verdicts.push(BoundVerdict::lower_bound("corollary-0.2-eps0", length, corollary_0_2_bound(0.0, sphere)?));
    out.verdicts.push(BoundVerdict::lower_bound(format!("corollary-0.2-eps{}", tag(eps)), length, corollary_0_2_bound(eps, sphere)?));
    let closed = epsilon_closed_test(turning, eps, sphere)?;
    out.verdicts.push(BoundVerdict::new("epsilon-closed-great-circle", eps * corollary_constants(sphere, c2)?.a, turning));
    out.estimates.push(Estimate::scalar("great-circle-epsilon-closed", if closed { 1.0 } else { 0.0 }, Some(1.0)));
    out.verdicts.push(BoundVerdict::lower_bound(
        "corollary-0.7-great-circle",
        length,
        corollary_0_7_bound(0.0, sphere, c2 * sphere.volume, c2)?,
    ));
    out.notes.push("D0 = D when kappa <= 0".into());
    Ok(out)
}

fn theorem_b_defaults() -> ScenarioConfig {
    config("theorem-b-sphere", None, &[], &[], &[("alphas", vec![PI, 2.0 * PI / 3.0, FRAC_PI_2])])
}

fn theorem_b_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let space = ModelSpace::sphere(1.0, 2)?;
    let budget = GeometryBudget::new(2, k(1.0)?, PI, 4.0 * PI, PI)?;
    let (north, south) = (Point::unit(vec![0.0, 0.0, 1.0]), Point::unit(vec![0.0, 0.0, -1.0]));
    let mut out = Outcome::default();
    for &alpha in cfg.schedule("alphas")? {
        if !(alpha > 0.0 && alpha <= PI) {
            return Err(Error::usage("schedules.alphas", format!("lune angle must lie in (0, pi], got {alpha}")));
        }
        let (s, c) = alpha.sin_cos();
        let lp = BrokenLoop::new(
            space.clone(),
            vec![north.clone(), Point::unit(vec![1.0, 0.0, 0.0]), south.clone(), Point::unit(vec![c, s, 0.0])],
        )?;
        let turning = turning_angle_broken(&lp)?;
        let dist = space.distance(&north, &south)?;
        let id = tag((alpha / PI * 1e6).round() / 1e6);
        let b = theorem_b_bound(&budget, turning)?;
        out.verdicts.push(BoundVerdict::lower_bound(format!("theorem-b-alpha{id}pi"), dist, b).with("turning", turning));
        let b4 = corollary_0_4_bound(&budget, 0.25 * turning)?;
        out.verdicts.push(BoundVerdict::lower_bound(format!("corollary-0.4-alpha{id}pi"), dist, b4));
        out.estimates.push(Estimate::scalar(format!("turning-alpha{id}pi"), turning, Some(2.0 * (PI - alpha))));
    }
    out.notes.push("two half great circles from pole to pole meeting at angle alpha; alpha = pi is a great circle and attains the bound".into());
    Ok(out)
}

fn injectivity_defaults() -> ScenarioConfig {
    config(
        "injectivity-radius",
        None,
        &[],
        &[],
        &[("cone_thetas", vec![PI / 6.0, PI / 3.0, FRAC_PI_2, 2.0 * PI / 3.0]), ("cone_bases", vec![0.05, 0.2])],
    )
}

fn injectivity_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in [2usize, 3] {
        let space = ModelSpace::sphere(1.0, n)?;
        let lp = BrokenLoop::new(space, equator(n, 4))?;
        let theta_p = turning_angle_broken(&lp)?;
        let haus = model_ball_volume(k(1.0)?, n, PI)?;
        let bound = injectivity_bound(n, k(1.0)?, PI, haus, theta_p)?;
        out.verdicts.push(BoundVerdict::lower_bound(format!("sphere-n{n}"), PI, bound));
    }
    let mut thetas: BTreeMap<String, f64> = BTreeMap::new();
    for &theta in cfg.schedule("cone_thetas")? {
        for &a in cfg.schedule("cone_bases")? {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::usage("schedules.cone_bases", format!("base point must lie in (0, 1), got {a}")));
            }
            let lp = cone_loop(theta, a, 1.0)?;
            let theta_p = turning_angle_broken(&lp)?;
            let r = 1.0 + a;
            let haus = cone_annulus_volume(k(0.0)?, 2, theta, 0.0, 1.0)?;
            let bound = injectivity_bound(2, k(0.0)?, r, haus, theta_p)?;
            let id = format!("theta{:.6}-a{}", theta, tag(a));
            out.verdicts.push(BoundVerdict::lower_bound(format!("cone-{id}"), a * (0.5 * theta).sin(), bound).with("theta_p", theta_p));
            thetas.insert(id, theta_p);
        }
    }
    for (id, theta_p) in thetas {
        out.estimates.push(Estimate::scalar(format!("theta-p-{id}"), theta_p, None));
    }
    out.notes.push("on a flat cone of angle theta < pi the shortest geodesic loop at (a, 0) has length 2a sin(theta/2) and turning angle theta".into());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_unique_and_required() {
        let names: Vec<&str> = list_scenarios().into_iter().map(|(n, _)| n).collect();
        let set: std::collections::HashSet<_> = names.iter().collect();
        assert_eq!(set.len(), names.len());
        for required in [
            "great-circle-equality",
            "flat-cone-example-2-9",
            "product-cone-example",
            "sphere-cap-volumes",
            "psi-sandwich",
            "lemma-1-3-sweep",
            "f-nonneg",
            "rough-volume-cube",
            "theorem-c-disk",
            "bishop-gromov-sphere",
            "turning-angle-latitude",
        ] {
            assert!(names.contains(&required), "{required}");
        }
    }
}
