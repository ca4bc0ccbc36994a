use std::f64::consts::TAU;

use rand::Rng as _;
use rand_distr::StandardNormal;

use super::{norm, ModelSpace, Point};
use crate::error::{Error, Result};
use crate::measure::RegionSpec;
use crate::rng::{seeded, Rng};
use crate::spaceform::{asn_raw, sn_raw};

/// Draws `count` i.i.d. points, uniform for the `n`-dimensional Hausdorff
/// measure on `region`. The sequence depends only on the inputs and `seed`.
pub fn sample_uniform(space: &ModelSpace, region: &RegionSpec, count: usize, seed: u64) -> Result<Vec<Point>> {
    region.validate(space)?;
    let mut rng = seeded(seed);
    sample_with(space, region, count, &mut rng)
}

pub(crate) fn sample_with(space: &ModelSpace, region: &RegionSpec, count: usize, rng: &mut Rng) -> Result<Vec<Point>> {
    match region {
        RegionSpec::WholeSpace => Ok((0..count).map(|_| draw_whole(space, rng)).collect()),
        RegionSpec::ConeAnnulus { link_measure, r1, r2 } => match space {
            ModelSpace::FlatCone { .. } | ModelSpace::KappaCone { .. } => {
                let k = space.curvature_bound().value();
                Ok((0..count).map(|_| draw_cone_annulus(k, *link_measure, *r1, *r2, rng)).collect())
            }
            ModelSpace::Sphere { kappa, dim: 2 } => {
                let k = kappa.value();
                Ok((0..count).map(|_| draw_sphere_annulus(k, *link_measure, *r1, *r2, rng)).collect())
            }
            ModelSpace::Sphere { .. } => reject(space, region, count, rng),
            _ => Err(Error::Unsupported(format!("cone annulus in a {} space", space.kind()))),
        },
        RegionSpec::Ball { center: Point::Polar { t, .. }, radius } if *t == 0.0 => {
            let (k, theta, cap) = space.cone_params().expect("polar center on a cone");
            let r2 = radius.min(cap);
            Ok((0..count).map(|_| draw_cone_annulus(k, theta, 0.0, r2, rng)).collect())
        }
        RegionSpec::Ball { .. } => reject(space, region, count, rng),
    }
}

fn reject(space: &ModelSpace, region: &RegionSpec, count: usize, rng: &mut Rng) -> Result<Vec<Point>> {
    let cap = 1000 * count + 100_000;
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        if attempts >= cap {
            return Err(Error::Resource(format!(
                "rejection sampling accepted {} of {count} points in {attempts} attempts",
                out.len()
            )));
        }
        attempts += 1;
        let p = draw_whole(space, rng);
        if region.contains_unchecked(space, &p) {
            out.push(p);
        }
    }
    Ok(out)
}

fn gaussian_vec(len: usize, rng: &mut Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-300 || len == 0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// One uniform point of the whole space.
pub(crate) fn draw_whole(space: &ModelSpace, rng: &mut Rng) -> Point {
    match space {
        ModelSpace::Sphere { dim, .. } => Point::Unit(gaussian_vec(dim + 1, rng)),
        ModelSpace::FlatCone { theta, radius } => draw_cone_annulus(0.0, *theta, 0.0, *radius, rng),
        ModelSpace::KappaCone { kappa, link, radius } => draw_cone_annulus(kappa.value(), *link, 0.0, *radius, rng),
        ModelSpace::Product(a, b) => Point::pair(draw_whole(a, rng), draw_whole(b, rng)),
        ModelSpace::EuclideanBall { dim, radius } => {
            let dir = gaussian_vec(*dim, rng);
            let r = radius * rng.random::<f64>().powf(1.0 / *dim as f64);
            Point::Coords(dir.into_iter().map(|x| x * r).collect())
        }
        ModelSpace::EuclideanBox { sides } => {
            Point::Coords(sides.iter().map(|s| s * rng.random::<f64>()).collect())
        }
    }
}

/// Inverse-CDF draw on a 2-dimensional cone annulus: the radial density is
/// `sn_κ(t)` and `∫₀^t sn_κ = 2 sn_κ(t/2)²`.
fn draw_cone_annulus(k: f64, arc: f64, r1: f64, r2: f64, rng: &mut Rng) -> Point {
    let lo = sn_raw(k, 0.5 * r1).powi(2);
    let hi = sn_raw(k, 0.5 * r2).powi(2);
    let y = lo + rng.random::<f64>() * (hi - lo);
    let t = (2.0 * asn_raw(k, y.sqrt())).clamp(r1, r2);
    let phi = arc * rng.random::<f64>();
    Point::polar(t, phi)
}

/// Annulus around the pole `e_2` of `S²(κ)`, azimuth in `[0, arc)`.
fn draw_sphere_annulus(k: f64, arc: f64, r1: f64, r2: f64, rng: &mut Rng) -> Point {
    let s = k.sqrt();
    let (c1, c2) = ((s * r1).cos(), (s * r2).cos());
    let z = c1 - rng.random::<f64>() * (c1 - c2);
    let rho = (1.0 - z * z).max(0.0).sqrt();
    let phi = arc.min(TAU) * rng.random::<f64>();
    Point::Unit(vec![rho * phi.cos(), rho * phi.sin(), z])
}
