//! Analytic model spaces with exact distances, angles and geodesics.
//!
//! Cones are parametrized by polar coordinates `(t, φ)` with `φ` taken
//! modulo the total angle `θ` of the link circle. The flat cone and the
//! `κ = 0` cone share one distance routine, so they agree bit for bit.

mod sample;

pub use sample::sample_uniform;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaceform::{asn_raw, comparison_angle, sn_raw, Curvature, SideTriple};

/// Relative tolerance for points sitting on a domain boundary.
const MEMBERSHIP_TOL: f64 = 1e-12;
/// Angular tolerance used to detect the two-geodesic case on a cone.
const CUT_TOL: f64 = 1e-12;

/// Declarative description of a model space, as it appears in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceConfig {
    Sphere { kappa: f64, dim: usize },
    FlatCone { theta: f64, radius: f64 },
    KappaCone { kappa: f64, link_length: f64, radius: f64 },
    Product { left: Box<SpaceConfig>, right: Box<SpaceConfig> },
    EuclideanBall { dim: usize, radius: f64 },
    EuclideanBox { sides: Vec<f64> },
}

/// A validated model space.
///
/// Build values through the constructors (or from a [`SpaceConfig`]); they
/// reject parameters outside the curvature hypotheses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceConfig", into = "SpaceConfig")]
pub enum ModelSpace {
    /// Round sphere `S^n` of curvature `κ > 0`, points are unit vectors in `R^{n+1}`.
    Sphere { kappa: Curvature, dim: usize },
    /// Ball of radius `radius` around the vertex of the flat cone of total angle `theta < 2π`.
    FlatCone { theta: f64, radius: f64 },
    /// Ball around the vertex of the `κ`-cone over a circle of length `link ≤ 2π`.
    KappaCone { kappa: Curvature, link: f64, radius: f64 },
    Product(Box<ModelSpace>, Box<ModelSpace>),
    /// Closed Euclidean ball centered at the origin.
    EuclideanBall { dim: usize, radius: f64 },
    /// Closed box `[0, s_1] × … × [0, s_n]`.
    EuclideanBox { sides: Vec<f64> },
}

/// A point of a model space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Point {
    /// Unit vector, for spheres.
    Unit(Vec<f64>),
    /// Radial distance from the vertex and angular coordinate, for cones.
    Polar { t: f64, phi: f64 },
    Pair(Box<Point>, Box<Point>),
    /// Cartesian coordinates, for Euclidean balls and boxes.
    Coords(Vec<f64>),
}

impl Point {
    pub fn polar(t: f64, phi: f64) -> Self {
        Point::Polar { t, phi }
    }

    pub fn pair(left: Point, right: Point) -> Self {
        Point::Pair(Box::new(left), Box::new(right))
    }

    /// Normalizes `v` onto the unit sphere.
    pub fn unit(v: Vec<f64>) -> Self {
        let n = norm(&v);
        Point::Unit(v.into_iter().map(|x| x / n).collect())
    }
}

impl TryFrom<SpaceConfig> for ModelSpace {
    type Error = Error;

    fn try_from(cfg: SpaceConfig) -> Result<Self> {
        ModelSpace::from_config(&cfg)
    }
}

impl From<ModelSpace> for SpaceConfig {
    fn from(space: ModelSpace) -> Self {
        space.to_config()
    }
}

impl ModelSpace {
    pub fn sphere(kappa: f64, dim: usize) -> Result<Self> {
        let kappa = Curvature::new(kappa)?;
        if kappa.value() <= 0.0 {
            return Err(Error::domain(format!("sphere needs kappa > 0, got {}", kappa.value())));
        }
        if dim == 0 {
            return Err(Error::domain("sphere dimension must be >= 1"));
        }
        Ok(ModelSpace::Sphere { kappa, dim })
    }

    pub fn flat_cone(theta: f64, radius: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < TAU) {
            return Err(Error::domain(format!("flat cone angle must lie in (0, 2pi), got {theta}")));
        }
        check_positive("cone radius", radius)?;
        Ok(ModelSpace::FlatCone { theta, radius })
    }

    pub fn kappa_cone(kappa: f64, link: f64, radius: f64) -> Result<Self> {
        let kappa = Curvature::new(kappa)?;
        if !(link > 0.0 && link <= TAU) {
            return Err(Error::domain(format!("link length must lie in (0, 2pi], got {link}")));
        }
        check_positive("cone radius", radius)?;
        if let Some(max) = kappa.max_radius() {
            if radius > max * (1.0 + MEMBERSHIP_TOL) {
                return Err(Error::domain(format!(
                    "cone radius {radius} exceeds pi/sqrt(kappa) = {max}"
                )));
            }
        }
        Ok(ModelSpace::KappaCone { kappa, link, radius })
    }

    pub fn product(left: ModelSpace, right: ModelSpace) -> Result<Self> {
        for f in [&left, &right] {
            if f.curvature_bound().value() < 0.0 {
                return Err(Error::domain(
                    "product factors must have a non-negative curvature bound",
                ));
            }
        }
        Ok(ModelSpace::Product(Box::new(left), Box::new(right)))
    }

    pub fn euclidean_ball(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("ball dimension must be >= 1"));
        }
        check_positive("ball radius", radius)?;
        Ok(ModelSpace::EuclideanBall { dim, radius })
    }

    pub fn euclidean_box(sides: Vec<f64>) -> Result<Self> {
        for &s in &sides {
            check_positive("box side", s)?;
        }
        Ok(ModelSpace::EuclideanBox { sides })
    }

    pub fn from_config(cfg: &SpaceConfig) -> Result<Self> {
        match cfg {
            SpaceConfig::Sphere { kappa, dim } => ModelSpace::sphere(*kappa, *dim),
            SpaceConfig::FlatCone { theta, radius } => ModelSpace::flat_cone(*theta, *radius),
            SpaceConfig::KappaCone { kappa, link_length, radius } => {
                ModelSpace::kappa_cone(*kappa, *link_length, *radius)
            }
            SpaceConfig::Product { left, right } => {
                ModelSpace::product(ModelSpace::from_config(left)?, ModelSpace::from_config(right)?)
            }
            SpaceConfig::EuclideanBall { dim, radius } => ModelSpace::euclidean_ball(*dim, *radius),
            SpaceConfig::EuclideanBox { sides } => ModelSpace::euclidean_box(sides.clone()),
        }
    }

    pub fn to_config(&self) -> SpaceConfig {
        match self {
            ModelSpace::Sphere { kappa, dim } => SpaceConfig::Sphere { kappa: kappa.value(), dim: *dim },
            ModelSpace::FlatCone { theta, radius } => SpaceConfig::FlatCone { theta: *theta, radius: *radius },
            ModelSpace::KappaCone { kappa, link, radius } => SpaceConfig::KappaCone {
                kappa: kappa.value(),
                link_length: *link,
                radius: *radius,
            },
            ModelSpace::Product(a, b) => SpaceConfig::Product {
                left: Box::new(a.to_config()),
                right: Box::new(b.to_config()),
            },
            ModelSpace::EuclideanBall { dim, radius } => SpaceConfig::EuclideanBall { dim: *dim, radius: *radius },
            ModelSpace::EuclideanBox { sides } => SpaceConfig::EuclideanBox { sides: sides.clone() },
        }
    }

    /// Short variant name, used in messages and reports.
    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpace::Sphere { .. } => "sphere",
            ModelSpace::FlatCone { .. } => "flat-cone",
            ModelSpace::KappaCone { .. } => "kappa-cone",
            ModelSpace::Product(..) => "product",
            ModelSpace::EuclideanBall { .. } => "euclidean-ball",
            ModelSpace::EuclideanBox { .. } => "euclidean-box",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ModelSpace::Sphere { dim, .. } => *dim,
            ModelSpace::FlatCone { .. } | ModelSpace::KappaCone { .. } => 2,
            ModelSpace::Product(a, b) => a.dim() + b.dim(),
            ModelSpace::EuclideanBall { dim, .. } => *dim,
            ModelSpace::EuclideanBox { sides } => sides.len(),
        }
    }

    pub fn curvature_bound(&self) -> Curvature {
        match self {
            ModelSpace::Sphere { kappa, .. } | ModelSpace::KappaCone { kappa, .. } => *kappa,
            _ => Curvature::FLAT,
        }
    }

    /// Curvature used by the cone formulas; `None` for non-cones.
    fn cone_params(&self) -> Option<(f64, f64, f64)> {
        match self {
            ModelSpace::FlatCone { theta, radius } => Some((0.0, *theta, *radius)),
            ModelSpace::KappaCone { kappa, link, radius } => Some((kappa.value(), *link, *radius)),
            _ => None,
        }
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self, ModelSpace::EuclideanBall { .. } | ModelSpace::EuclideanBox { .. })
    }

    pub fn diameter(&self) -> f64 {
        match self {
            ModelSpace::Sphere { kappa, .. } => PI / kappa.value().sqrt(),
            ModelSpace::FlatCone { theta, radius } => radius * (2.0 * (theta / 4.0).sin()).max(1.0),
            ModelSpace::KappaCone { kappa, link, radius } => {
                let k = kappa.value();
                let delta = (0.5 * link).min(PI);
                let steps = 200;
                let mut best = *radius;
                for i in 0..=steps {
                    let t1 = radius * i as f64 / steps as f64;
                    for j in i..=steps {
                        let t2 = radius * j as f64 / steps as f64;
                        best = best.max(cone_distance(k, t1, t2, delta));
                    }
                }
                best
            }
            ModelSpace::Product(a, b) => a.diameter().hypot(b.diameter()),
            ModelSpace::EuclideanBall { radius, .. } => 2.0 * radius,
            ModelSpace::EuclideanBox { sides } => norm(sides),
        }
    }

    /// The cone vertex, for cone variants.
    pub fn vertex(&self) -> Option<Point> {
        self.cone_params().map(|_| Point::polar(0.0, 0.0))
    }

    /// Checks that `p` is a point of this space.
    pub fn check_point(&self, p: &Point) -> Result<()> {
        let bad = |why: String| Err(Error::Mismatch(format!("{why} for {} space", self.kind())));
        match (self, p) {
            (ModelSpace::Sphere { dim, .. }, Point::Unit(u)) => {
                if u.len() != dim + 1 {
                    return bad(format!("expected {} coordinates, got {}", dim + 1, u.len()));
                }
                let n = norm(u);
                if !n.is_finite() || (n - 1.0).abs() > MEMBERSHIP_TOL {
                    return bad(format!("vector norm {n} is not 1"));
                }
                Ok(())
            }
            (ModelSpace::FlatCone { radius, .. } | ModelSpace::KappaCone { radius, .. }, Point::Polar { t, phi }) => {
                if !(t.is_finite() && phi.is_finite()) || *t < 0.0 {
                    return bad(format!("invalid polar coordinates ({t}, {phi})"));
                }
                if *t > radius * (1.0 + MEMBERSHIP_TOL) {
                    return bad(format!("radial coordinate {t} exceeds cap radius {radius}"));
                }
                Ok(())
            }
            (ModelSpace::Product(a, b), Point::Pair(p1, p2)) => {
                a.check_point(p1)?;
                b.check_point(p2)
            }
            (ModelSpace::EuclideanBall { dim, radius }, Point::Coords(x)) => {
                if x.len() != *dim {
                    return bad(format!("expected {dim} coordinates, got {}", x.len()));
                }
                let n = norm(x);
                if !n.is_finite() || n > radius * (1.0 + MEMBERSHIP_TOL) + MEMBERSHIP_TOL {
                    return bad(format!("point at distance {n} lies outside radius {radius}"));
                }
                Ok(())
            }
            (ModelSpace::EuclideanBox { sides }, Point::Coords(x)) => {
                if x.len() != sides.len() {
                    return bad(format!("expected {} coordinates, got {}", sides.len(), x.len()));
                }
                for (xi, si) in x.iter().zip(sides) {
                    let slack = MEMBERSHIP_TOL * si.max(1.0);
                    if !xi.is_finite() || *xi < -slack || *xi > si + slack {
                        return bad(format!("coordinate {xi} outside [0, {si}]"));
                    }
                }
                Ok(())
            }
            _ => bad("point variant does not match".to_string()),
        }
    }

    /// Geodesic distance between two points.
    pub fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        self.check_point(p)?;
        self.check_point(q)?;
        Ok(self.distance_unchecked(p, q))
    }

    pub(crate) fn distance_unchecked(&self, p: &Point, q: &Point) -> f64 {
        match (self, p, q) {
            (ModelSpace::Sphere { kappa, .. }, Point::Unit(u), Point::Unit(v)) => {
                sphere_angle(u, v) / kappa.value().sqrt()
            }
            (_, Point::Polar { t: t1, phi: f1 }, Point::Polar { t: t2, phi: f2 }) => {
                let (k, theta, _) = self.cone_params().expect("polar point on a cone");
                let delta = wrap_signed(f2 - f1, theta).abs();
                cone_distance(k, *t1, *t2, delta)
            }
            (ModelSpace::Product(a, b), Point::Pair(p1, p2), Point::Pair(q1, q2)) => {
                a.distance_unchecked(p1, q1).hypot(b.distance_unchecked(p2, q2))
            }
            (_, Point::Coords(x), Point::Coords(y)) => euclid_distance(x, y),
            _ => f64::NAN,
        }
    }

    /// Angle at `apex` between the geodesics `[apex p]` and `[apex q]`.
    pub fn vertex_angle(&self, apex: &Point, p: &Point, q: &Point) -> Result<f64> {
        for x in [apex, p, q] {
            self.check_point(x)?;
        }
        for x in [p, q] {
            if self.distance_unchecked(apex, x) == 0.0 {
                return Err(Error::Degenerate("angle needs endpoints distinct from the apex".into()));
            }
        }
        self.vertex_angle_unchecked(apex, p, q)
    }

    /// Turning `π − ∠prev apex next` of the broken geodesic `prev → apex → next`.
    /// On `S²` it is the angle between the normals of the two great circles,
    /// which avoids cancellation when the interior angle is close to `π`.
    pub fn exterior_angle(&self, apex: &Point, prev: &Point, next: &Point) -> Result<f64> {
        if let (ModelSpace::Sphere { dim: 2, .. }, Point::Unit(a), Point::Unit(p), Point::Unit(q)) = (self, apex, prev, next) {
            for x in [apex, prev, next] {
                self.check_point(x)?;
            }
            let n1 = cross(p, a);
            let n2 = cross(a, q);
            let (l1, l2) = (norm(&n1), norm(&n2));
            if l1 > 1e-12 && l2 > 1e-12 {
                let u: Vec<f64> = n1.iter().map(|x| x / l1).collect();
                let v: Vec<f64> = n2.iter().map(|x| x / l2).collect();
                return Ok(unit_angle(&u, &v));
            }
        }
        Ok(PI - self.vertex_angle(apex, prev, next)?)
    }

    fn vertex_angle_unchecked(&self, apex: &Point, p: &Point, q: &Point) -> Result<f64> {
        match (self, apex, p, q) {
            (ModelSpace::Sphere { .. }, Point::Unit(a), Point::Unit(u), Point::Unit(v)) => {
                let tu = sphere_tangent(a, u)?;
                let tv = sphere_tangent(a, v)?;
                Ok(unit_angle(&tu, &tv))
            }
            (_, Point::Polar { t: ta, phi: fa }, Point::Polar { .. }, Point::Polar { .. }) => {
                let (k, theta, _) = self.cone_params().expect("polar point on a cone");
                if *ta == 0.0 {
                    return Err(Error::ApexAtVertex { link_length: theta });
                }
                let psi_p = cone_direction(k, theta, *ta, *fa, p)?;
                let psi_q = cone_direction(k, theta, *ta, *fa, q)?;
                let alpha = (psi_p - psi_q).abs().rem_euclid(TAU);
                Ok(alpha.min(TAU - alpha))
            }
            (ModelSpace::Product(f1, f2), Point::Pair(a1, a2), Point::Pair(p1, p2), Point::Pair(q1, q2)) => {
                let d1p = f1.distance_unchecked(a1, p1);
                let d1q = f1.distance_unchecked(a1, q1);
                let d2p = f2.distance_unchecked(a2, p2);
                let d2q = f2.distance_unchecked(a2, q2);
                let alpha1 = if d1p > 0.0 && d1q > 0.0 { f1.vertex_angle_unchecked(a1, p1, q1)? } else { 0.0 };
                let alpha2 = if d2p > 0.0 && d2q > 0.0 { f2.vertex_angle_unchecked(a2, p2, q2)? } else { 0.0 };
                let dp = d1p.hypot(d2p);
                let dq = d1q.hypot(d2q);
                let (cp, sp) = (d1p / dp, d2p / dp);
                let (cq, sq) = (d1q / dq, d2q / dq);
                // Unit directions live in the spherical join of the factor
                // direction spaces; compare them through chord lengths.
                let (s1, c1) = (0.5 * alpha1).sin_cos();
                let (s2, c2) = (0.5 * alpha2).sin_cos();
                let diff2 = (cp - cq).powi(2) + 4.0 * cp * cq * s1 * s1 + (sp - sq).powi(2) + 4.0 * sp * sq * s2 * s2;
                let sum2 = (cp - cq).powi(2) + 4.0 * cp * cq * c1 * c1 + (sp - sq).powi(2) + 4.0 * sp * sq * c2 * c2;
                Ok(2.0 * diff2.max(0.0).sqrt().atan2(sum2.max(0.0).sqrt()))
            }
            (_, Point::Coords(a), Point::Coords(u), Point::Coords(v)) => {
                let du: Vec<f64> = u.iter().zip(a).map(|(x, y)| x - y).collect();
                let dv: Vec<f64> = v.iter().zip(a).map(|(x, y)| x - y).collect();
                Ok(unit_angle(&normalized(&du), &normalized(&dv)))
            }
            _ => Err(Error::Mismatch("point variants do not match the space".into())),
        }
    }

    /// Point at fraction `s` along the minimizing geodesic from `p` to `q`.
    pub fn geodesic_point(&self, p: &Point, q: &Point, s: f64) -> Result<Point> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::domain(format!("geodesic parameter must lie in [0, 1], got {s}")));
        }
        self.check_point(p)?;
        self.check_point(q)?;
        self.geodesic_point_unchecked(p, q, s)
    }

    /// Errors unless the minimizing geodesic from `p` to `q` is unique.
    pub fn check_unique_geodesic(&self, p: &Point, q: &Point) -> Result<()> {
        self.check_point(p)?;
        self.check_point(q)?;
        self.geodesic_point_unchecked(p, q, 0.5).map(|_| ())
    }

    fn geodesic_point_unchecked(&self, p: &Point, q: &Point, s: f64) -> Result<Point> {
        match (self, p, q) {
            (ModelSpace::Sphere { .. }, Point::Unit(u), Point::Unit(v)) => Ok(Point::Unit(slerp(u, v, s)?)),
            (_, Point::Polar { t: tp, phi: fp }, Point::Polar { t: tq, phi: fq }) => {
                let (k, theta, _) = self.cone_params().expect("polar point on a cone");
                cone_geodesic_point(k, theta, (*tp, *fp), (*tq, *fq), s)
            }
            (ModelSpace::Product(a, b), Point::Pair(p1, p2), Point::Pair(q1, q2)) => Ok(Point::pair(
                a.geodesic_point_unchecked(p1, q1, s)?,
                b.geodesic_point_unchecked(p2, q2, s)?,
            )),
            (_, Point::Coords(x), Point::Coords(y)) => {
                Ok(Point::Coords(x.iter().zip(y).map(|(a, b)| a + s * (b - a)).collect()))
            }
            _ => Err(Error::Mismatch("point variants do not match the space".into())),
        }
    }
}

fn check_positive(what: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be finite and > 0, got {x}")))
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|x| x / n).collect()
}

pub(crate) fn euclid_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Angle between unit vectors, accurate near 0 and π.
fn unit_angle(u: &[f64], v: &[f64]) -> f64 {
    let mut d = 0.0;
    let mut s = 0.0;
    for (a, b) in u.iter().zip(v) {
        d += (a - b) * (a - b);
        s += (a + b) * (a + b);
    }
    2.0 * d.sqrt().atan2(s.sqrt())
}

pub(crate) fn sphere_angle(u: &[f64], v: &[f64]) -> f64 {
    unit_angle(u, v)
}

/// Unit tangent at `a` pointing along the great circle towards `u`.
fn cross(u: &[f64], v: &[f64]) -> [f64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn sphere_tangent(a: &[f64], u: &[f64]) -> Result<Vec<f64>> {
    let dot: f64 = a.iter().zip(u).map(|(x, y)| x * y).sum();
    let t: Vec<f64> = u.iter().zip(a).map(|(x, y)| x - dot * y).collect();
    let n = norm(&t);
    if n <= 1e-12 {
        return Err(Error::AmbiguousGeodesic("endpoint is antipodal to the apex".into()));
    }
    Ok(t.into_iter().map(|x| x / n).collect())
}

fn slerp(u: &[f64], v: &[f64], s: f64) -> Result<Vec<f64>> {
    let sum = u.iter().zip(v).map(|(a, b)| (a + b) * (a + b)).sum::<f64>().sqrt();
    if sum <= 1e-12 {
        return Err(Error::AmbiguousGeodesic("antipodal sphere points".into()));
    }
    if s == 0.0 {
        return Ok(u.to_vec());
    }
    if s == 1.0 {
        return Ok(v.to_vec());
    }
    let d = unit_angle(u, v);
    let out: Vec<f64> = if d < 1e-12 {
        u.iter().zip(v).map(|(a, b)| a + s * (b - a)).collect()
    } else {
        let (wa, wb) = (((1.0 - s) * d).sin() / d.sin(), (s * d).sin() / d.sin());
        u.iter().zip(v).map(|(a, b)| wa * a + wb * b).collect()
    };
    Ok(normalized(&out))
}

/// Representative of `x` modulo `theta` in `[−θ/2, θ/2]`.
pub(crate) fn wrap_signed(x: f64, theta: f64) -> f64 {
    let r = x.rem_euclid(theta);
    if r > 0.5 * theta {
        r - theta
    } else {
        r
    }
}

/// Distance between `(t1, ·)` and `(t2, ·)` at angular separation `delta ∈ [0, π]`
/// on the `κ`-cone, from the half-angle cosine law.
pub(crate) fn cone_distance(k: f64, t1: f64, t2: f64, delta: f64) -> f64 {
    let sd = (0.5 * delta).sin();
    let x = k * (t1 + t2).powi(2);
    if k > 0.0 && x.abs() >= 1e-8 {
        let s = k.sqrt();
        let (a1, a2) = (s * t1, s * t2);
        let prod = a1.sin() * a2.sin();
        let cd = (0.5 * delta).cos();
        let sin2 = (0.5 * (a1 - a2)).sin().powi(2) + sd * sd * prod;
        let cos2 = (0.5 * (a1 + a2)).cos().powi(2) + cd * cd * prod;
        return 2.0 * sin2.max(0.0).sqrt().atan2(cos2.max(0.0).sqrt()) / s;
    }
    let h = sn_raw(k, 0.5 * (t1 - t2));
    let y2 = h * h + sd * sd * sn_raw(k, t1) * sn_raw(k, t2);
    2.0 * asn_raw(k, y2.max(0.0).sqrt())
}

/// Direction angle at the apex `(ta, fa)` towards `p`, measured from the
/// outward radial direction in the chart unrolled around the apex.
fn cone_direction(k: f64, theta: f64, ta: f64, fa: f64, p: &Point) -> Result<f64> {
    let Point::Polar { t: tp, phi: fp } = p else {
        return Err(Error::Mismatch("expected a polar point".into()));
    };
    let tp = *tp;
    if tp == 0.0 {
        return Ok(PI);
    }
    let delta = wrap_signed(fp - fa, theta);
    if theta < TAU && (delta.abs() - 0.5 * theta).abs() <= CUT_TOL {
        return Err(Error::AmbiguousGeodesic(format!(
            "points are separated by half the cone angle {theta}"
        )));
    }
    if k == 0.0 {
        return Ok((tp * delta.sin()).atan2(tp * delta.cos() - ta));
    }
    let b = cone_distance(k, ta, tp, delta.abs());
    let to_vertex = comparison_angle(Curvature::new(k)?, SideTriple::new(ta, b, tp))?;
    Ok(if delta < 0.0 { -(PI - to_vertex) } else { PI - to_vertex })
}

fn cone_geodesic_point(k: f64, theta: f64, p: (f64, f64), q: (f64, f64), s: f64) -> Result<Point> {
    let ((tp, fp), (tq, fq)) = (p, q);
    if s == 0.0 {
        return Ok(Point::polar(tp, fp));
    }
    if s == 1.0 {
        return Ok(Point::polar(tq, fq));
    }
    if tp == 0.0 || tq == 0.0 {
        let phi = if tp == 0.0 { fq } else { fp };
        return Ok(Point::polar(tp + s * (tq - tp), phi));
    }
    let delta = wrap_signed(fq - fp, theta);
    if theta < TAU && (delta.abs() - 0.5 * theta).abs() <= CUT_TOL {
        return Err(Error::AmbiguousGeodesic(format!(
            "points are separated by half the cone angle {theta}"
        )));
    }
    let (x, y, t) = if k == 0.0 {
        let (px, qx, qy) = (tp, tq * delta.cos(), tq * delta.sin());
        let (x, y) = (px + s * (qx - px), s * qy);
        (x, y, x.hypot(y))
    } else if k > 0.0 {
        // Suspension chart: the sphere of radius 1/√κ.
        let r = k.sqrt();
        let (ap, aq) = (r * tp, r * tq);
        let u = [ap.sin(), 0.0, ap.cos()];
        let v = [aq.sin() * delta.cos(), aq.sin() * delta.sin(), aq.cos()];
        let w = slerp(&u, &v, s)?;
        (w[0], w[1], w[0].hypot(w[1]).atan2(w[2]) / r)
    } else {
        // Hyperboloid chart of the hyperbolic plane of curvature κ.
        let r = (-k).sqrt();
        let (ap, aq) = (r * tp, r * tq);
        let u = [ap.sinh(), 0.0, ap.cosh()];
        let v = [aq.sinh() * delta.cos(), aq.sinh() * delta.sin(), aq.cosh()];
        let d = r * cone_distance(k, tp, tq, delta.abs());
        let (wa, wb) = if d < 1e-12 {
            (1.0 - s, s)
        } else {
            (((1.0 - s) * d).sinh() / d.sinh(), (s * d).sinh() / d.sinh())
        };
        let (x, y) = (wa * u[0] + wb * v[0], wa * u[1] + wb * v[1]);
        (x, y, x.hypot(y).asinh() / r)
    };
    let phi = if t == 0.0 { fp } else { (fp + y.atan2(x)).rem_euclid(theta) };
    Ok(Point::polar(t, phi))
}
