//! Hausdorff measure of cone regions, Monte Carlo volume estimates and
//! rough volume from ε-separated packings.

mod packing;

pub use packing::{packing_configuration, packing_number, packing_number_with, rough_volume_estimate, PackingOptions, PackingResult, RoughVolumeEstimate};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modelspaces::{sample_uniform, sphere_angle, ModelSpace, Point};
use crate::rng::derive_seed;
use crate::spaceform::{integral_sn_pow, unit_sphere_volume, Curvature};

const MC_CHUNK: usize = 1 << 16;

/// A measurable subset of a model space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RegionSpec {
    /// Closed metric ball.
    Ball { center: Point, radius: f64 },
    /// Points at distance `[r1, r2]` from the cone vertex (or the sphere pole
    /// `e_n`) whose direction lies in an arc of length `link_measure`
    /// starting at angle 0. On spheres of dimension above 2 the arc must be
    /// the whole link.
    ConeAnnulus { link_measure: f64, r1: f64, r2: f64 },
    WholeSpace,
}

impl RegionSpec {
    /// Ball around the vertex of a cone.
    pub fn vertex_ball(radius: f64) -> Self {
        RegionSpec::Ball { center: Point::polar(0.0, 0.0), radius }
    }

    /// Checks that the region makes sense inside `space`.
    pub fn validate(&self, space: &ModelSpace) -> Result<()> {
        match self {
            RegionSpec::WholeSpace => Ok(()),
            RegionSpec::Ball { center, radius } => {
                space.check_point(center)?;
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::domain(format!("ball radius must be > 0, got {radius}")));
                }
                let diam = space.diameter();
                if *radius > diam * (1.0 + 1e-12) {
                    return Err(Error::domain(format!("ball radius {radius} exceeds the diameter {diam}")));
                }
                Ok(())
            }
            RegionSpec::ConeAnnulus { link_measure, r1, r2 } => {
                if !(0.0 <= *r1 && r1 < r2) {
                    return Err(Error::domain(format!("annulus needs 0 <= r1 < r2, got [{r1}, {r2}]")));
                }
                if !(link_measure.is_finite() && *link_measure > 0.0) {
                    return Err(Error::domain(format!("link measure must be > 0, got {link_measure}")));
                }
                let (cap, full) = match space {
                    ModelSpace::FlatCone { theta, radius } => (*radius, *theta),
                    ModelSpace::KappaCone { link, radius, .. } => (*radius, *link),
                    ModelSpace::Sphere { kappa, dim } => {
                        let full = unit_sphere_volume(dim - 1);
                        if *dim != 2 && (link_measure - full).abs() > 1e-12 * full {
                            return Err(Error::Unsupported(
                                "partial annuli on spheres of dimension != 2".into(),
                            ));
                        }
                        (kappa.max_radius().expect("sphere curvature is positive"), full)
                    }
                    _ => return Err(Error::Unsupported(format!("cone annulus in a {} space", space.kind()))),
                };
                if *r2 > cap * (1.0 + 1e-12) {
                    return Err(Error::domain(format!("annulus radius {r2} exceeds {cap}")));
                }
                if *link_measure > full * (1.0 + 1e-12) {
                    return Err(Error::domain(format!("link measure {link_measure} exceeds {full}")));
                }
                Ok(())
            }
        }
    }

    /// Whether `p` lies in the region.
    pub fn contains(&self, space: &ModelSpace, p: &Point) -> Result<bool> {
        space.check_point(p)?;
        Ok(self.contains_unchecked(space, p))
    }

    pub(crate) fn contains_unchecked(&self, space: &ModelSpace, p: &Point) -> bool {
        match self {
            RegionSpec::WholeSpace => true,
            RegionSpec::Ball { center, radius } => space.distance_unchecked(center, p) <= *radius,
            RegionSpec::ConeAnnulus { link_measure, r1, r2 } => match (space, p) {
                (ModelSpace::FlatCone { theta: arc, .. } | ModelSpace::KappaCone { link: arc, .. }, Point::Polar { t, phi }) => {
                    *t >= *r1 && *t <= *r2 && (*link_measure >= *arc || phi.rem_euclid(*arc) <= *link_measure)
                }
                (ModelSpace::Sphere { kappa, dim }, Point::Unit(u)) => {
                    let mut pole = vec![0.0; dim + 1];
                    pole[*dim] = 1.0;
                    let t = sphere_angle(&pole, u) / kappa.value().sqrt();
                    if t < *r1 || t > *r2 {
                        return false;
                    }
                    *dim != 2 || *link_measure >= std::f64::consts::TAU || u[1].atan2(u[0]).rem_euclid(std::f64::consts::TAU) <= *link_measure
                }
                _ => false,
            },
        }
    }

    /// Exact `n`-dimensional Hausdorff measure, where a closed form exists.
    pub fn analytic_volume(&self, space: &ModelSpace) -> Result<f64> {
        self.validate(space)?;
        let n = space.dim();
        let kappa = space.curvature_bound();
        match (self, space) {
            (RegionSpec::WholeSpace, _) => whole_volume(space),
            (RegionSpec::ConeAnnulus { link_measure, r1, r2 }, _) => {
                cone_annulus_volume(kappa, n, *link_measure, *r1, *r2)
            }
            (RegionSpec::Ball { radius, .. }, ModelSpace::Sphere { .. }) => {
                let r = radius.min(kappa.max_radius().expect("sphere curvature is positive"));
                cone_annulus_volume(kappa, n, unit_sphere_volume(n - 1), 0.0, r)
            }
            (RegionSpec::Ball { center: Point::Polar { t, .. }, radius }, ModelSpace::FlatCone { theta: arc, radius: cap } | ModelSpace::KappaCone { link: arc, radius: cap, .. })
                if *t == 0.0 =>
            {
                cone_annulus_volume(kappa, 2, *arc, 0.0, radius.min(*cap))
            }
            (RegionSpec::Ball { center: Point::Coords(c), radius }, ModelSpace::EuclideanBall { radius: big, .. })
                if crate::modelspaces::norm(c) + radius <= *big =>
            {
                Ok(euclidean_ball_volume(n, *radius))
            }
            (RegionSpec::Ball { center: Point::Coords(c), radius }, ModelSpace::EuclideanBox { sides })
                if c.iter().zip(sides).all(|(x, s)| *x - radius >= 0.0 && *x + radius <= *s) =>
            {
                Ok(euclidean_ball_volume(n, *radius))
            }
            _ => Err(Error::Unsupported(format!(
                "no closed-form volume for this region in a {} space",
                space.kind()
            ))),
        }
    }

    /// Upper bound on the diameter of the region.
    pub fn diameter_bound(&self, space: &ModelSpace) -> f64 {
        let d = space.diameter();
        match self {
            RegionSpec::WholeSpace => d,
            RegionSpec::Ball { radius, .. } => d.min(2.0 * radius),
            RegionSpec::ConeAnnulus { r2, .. } => d.min(2.0 * r2),
        }
    }
}

fn euclidean_ball_volume(n: usize, r: f64) -> f64 {
    unit_sphere_volume(n - 1) * r.powi(n as i32) / n as f64
}

fn whole_volume(space: &ModelSpace) -> Result<f64> {
    match space {
        ModelSpace::Sphere { kappa, dim } => Ok(unit_sphere_volume(*dim) / kappa.value().powf(0.5 * *dim as f64)),
        ModelSpace::FlatCone { theta, radius } => cone_annulus_volume(Curvature::FLAT, 2, *theta, 0.0, *radius),
        ModelSpace::KappaCone { kappa, link, radius } => cone_annulus_volume(*kappa, 2, *link, 0.0, *radius),
        ModelSpace::Product(a, b) => Ok(whole_volume(a)? * whole_volume(b)?),
        ModelSpace::EuclideanBall { dim, radius } => Ok(euclidean_ball_volume(*dim, *radius)),
        ModelSpace::EuclideanBox { sides } => Ok(sides.iter().product()),
    }
}

/// `∫₀^r sn^p`, reflecting about `π/(2√κ)` when `κ > 0` so quadrature only
/// ever runs on the rising half.
fn integral_reflected(kappa: Curvature, p: u32, r: f64) -> Result<f64> {
    match (kappa.half_radius(), kappa.max_radius()) {
        (Some(h), Some(max)) if r > h => {
            let far = (max - r).max(0.0);
            Ok(2.0 * integral_sn_pow(kappa, p, h)? - integral_sn_pow(kappa, p, far)?)
        }
        _ => integral_sn_pow(kappa, p, r),
    }
}

/// `Haus_{n−1}(Γ)·∫_{r1}^{r2} sn_κ^{n−1}`: the volume of an annulus of the
/// `κ`-cone over a link set of measure `link_measure`.
pub fn cone_annulus_volume(kappa: Curvature, n: usize, link_measure: f64, r1: f64, r2: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("dimension must be >= 1"));
    }
    if !(0.0 <= r1 && r1 <= r2) {
        return Err(Error::domain(format!("annulus needs 0 <= r1 <= r2, got [{r1}, {r2}]")));
    }
    if !(link_measure.is_finite() && link_measure >= 0.0) {
        return Err(Error::domain(format!("link measure must be >= 0, got {link_measure}")));
    }
    let p = (n - 1) as u32;
    let hi = integral_reflected(kappa, p, r2)?;
    let lo = integral_reflected(kappa, p, r1)?;
    Ok(link_measure * (hi - lo))
}

/// Upper bound on `Haus_n(A)` for a set `A` seen from a point under the
/// direction set of measure `link_measure`, with `r1 ≤ |px| ≤ r2` on `A`.
/// It is attained by the cone annulus itself.
pub fn region_volume_bound(kappa: Curvature, n: usize, link_measure: f64, r1: f64, r2: f64) -> Result<f64> {
    cone_annulus_volume(kappa, n, link_measure, r1, r2)
}

/// Hit-ratio Monte Carlo estimate of a region's measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub hits: u64,
}

/// Estimates `Haus_n(region)` by sampling `enclosing` uniformly and counting
/// hits. Chunks use seeds derived from `seed`, so the result does not depend
/// on the number of worker threads.
pub fn mc_hausdorff(space: &ModelSpace, region: &RegionSpec, enclosing: &RegionSpec, samples: usize, seed: u64) -> Result<McEstimate> {
    region.validate(space)?;
    let volume = enclosing.analytic_volume(space)?;
    if volume <= 0.0 {
        return Err(Error::Degenerate("enclosing region has zero volume".into()));
    }
    if samples == 0 {
        return Err(Error::domain("Monte Carlo needs at least one sample"));
    }
    let chunks = samples.div_ceil(MC_CHUNK);
    let hits = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let len = MC_CHUNK.min(samples - i * MC_CHUNK);
            let pts = sample_uniform(space, enclosing, len, derive_seed(seed, i as u64))?;
            Ok(pts.iter().filter(|p| region.contains_unchecked(space, p)).count() as u64)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum::<u64>();
    let n = samples as f64;
    let frac = hits as f64 / n;
    Ok(McEstimate {
        estimate: volume * frac,
        stderr: volume * (frac * (1.0 - frac) / n).sqrt(),
        samples: samples as u64,
        hits,
    })
}
