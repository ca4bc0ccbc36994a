//! Broken geodesic loops, parametric curves and their turning angles.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modelspaces::{ModelSpace, Point};

pub const DEFAULT_TOL: f64 = 1e-3;

/// Partition sizes `2^4, 2^5, …, 2^14`.
pub fn default_schedule() -> Vec<usize> {
    (4..=14).map(|k| 1usize << k).collect()
}

/// A closed chain of minimal geodesic segments `[p_1 p_2], …, [p_m p_1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrokenLoop {
    space: ModelSpace,
    vertices: Vec<Point>,
}

impl BrokenLoop {
    /// Validates the vertices: at least one, consecutive vertices distinct
    /// (unless the loop is trivial) and every edge a unique geodesic.
    pub fn new(space: ModelSpace, vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidLoop("a loop needs at least one vertex".into()));
        }
        for p in &vertices {
            space.check_point(p)?;
        }
        let m = vertices.len();
        if m > 1 {
            for i in 0..m {
                let (p, q) = (&vertices[i], &vertices[(i + 1) % m]);
                if space.distance_unchecked(p, q) == 0.0 {
                    return Err(Error::InvalidLoop(format!("vertices {i} and {} coincide", (i + 1) % m)));
                }
                space.check_unique_geodesic(p, q).map_err(|e| match e {
                    Error::AmbiguousGeodesic(msg) => Error::InvalidLoop(format!("edge {i}: {msg}")),
                    other => other,
                })?;
            }
        }
        Ok(BrokenLoop { space, vertices })
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Splits edge `edge` (from vertex `edge` to its successor) at parameter `s`.
    pub fn insert_vertex(&self, edge: usize, s: f64) -> Result<BrokenLoop> {
        let m = self.vertices.len();
        if edge >= m || m < 2 {
            return Err(Error::InvalidLoop(format!("no edge {edge} in a loop with {m} vertices")));
        }
        let p = self.space.geodesic_point(&self.vertices[edge], &self.vertices[(edge + 1) % m], s)?;
        let mut vertices = self.vertices.clone();
        vertices.insert(edge + 1, p);
        BrokenLoop::new(self.space.clone(), vertices)
    }
}

/// Total length, closing edge included.
pub fn loop_length(lp: &BrokenLoop) -> f64 {
    let m = lp.vertices.len();
    if m == 1 {
        return 0.0;
    }
    (0..m)
        .map(|i| lp.space.distance_unchecked(&lp.vertices[i], &lp.vertices[(i + 1) % m]))
        .sum()
}

/// Exterior angles `θ_i = π − ∠p_{i−1} p_i p_{i+1}`.
pub fn exterior_angles(lp: &BrokenLoop) -> Result<Vec<f64>> {
    let m = lp.vertices.len();
    if m == 1 {
        return Ok(vec![TAU]);
    }
    (0..m)
        .map(|i| {
            let prev = &lp.vertices[(i + m - 1) % m];
            let next = &lp.vertices[(i + 1) % m];
            lp.space.exterior_angle(&lp.vertices[i], prev, next)
        })
        .collect()
}

/// `Σ θ_i`; a trivial loop has turning angle `2π`.
pub fn turning_angle_broken(lp: &BrokenLoop) -> Result<f64> {
    Ok(exterior_angles(lp)?.iter().sum())
}

type CurveFn = dyn Fn(f64) -> Point + Send + Sync;

/// A parametrized curve `[0, 1] → X`.
#[derive(Clone)]
pub struct CurveSampler {
    space: ModelSpace,
    eval: Arc<CurveFn>,
    closed: bool,
}

impl fmt::Debug for CurveSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveSampler")
            .field("space", &self.space)
            .field("closed", &self.closed)
            .finish_non_exhaustive()
    }
}

impl CurveSampler {
    /// Wraps `eval`. Closed curves must satisfy `eval(0) = eval(1)`.
    pub fn new(space: ModelSpace, closed: bool, eval: impl Fn(f64) -> Point + Send + Sync + 'static) -> Result<Self> {
        let (a, b) = (eval(0.0), eval(1.0));
        space.check_point(&a)?;
        space.check_point(&b)?;
        if closed && space.distance_unchecked(&a, &b) > 1e-9 {
            return Err(Error::InvalidLoop("closed curve must end where it starts".into()));
        }
        Ok(CurveSampler { space, eval: Arc::new(eval), closed })
    }

    pub fn eval(&self, t: f64) -> Point {
        (self.eval)(t)
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    /// Circle of radius `radius` around the origin of the plane.
    pub fn planar_circle(radius: f64) -> Result<Self> {
        let space = ModelSpace::euclidean_ball(2, radius)?;
        CurveSampler::new(space, true, move |s| {
            let (sn, cs) = (TAU * s).sin_cos();
            Point::Coords(vec![radius * cs, radius * sn])
        })
    }

    /// Circle at intrinsic distance `rho` from the pole of `S²(κ)`.
    pub fn latitude(kappa: f64, rho: f64) -> Result<Self> {
        let space = ModelSpace::sphere(kappa, 2)?;
        let a = kappa.sqrt() * rho;
        if !(a > 0.0 && a < PI) {
            return Err(Error::domain(format!("latitude radius must lie in (0, pi/sqrt(kappa)), got {rho}")));
        }
        let (sa, ca) = a.sin_cos();
        CurveSampler::new(space, true, move |s| {
            let (sn, cs) = (TAU * s).sin_cos();
            Point::Unit(vec![sa * cs, sa * sn, ca])
        })
    }

    /// The geodesic loop based at `(a, 0)` that winds once around the vertex
    /// of the flat cone of angle `θ < π`; it unrolls to the chord from angle
    /// 0 to angle θ.
    pub fn cone_loop(theta: f64, a: f64, radius: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < PI) {
            return Err(Error::domain(format!("a cone geodesic loop needs 0 < theta < pi, got {theta}")));
        }
        if !(a > 0.0 && a <= radius) {
            return Err(Error::domain(format!("loop base {a} must lie in (0, {radius}]")));
        }
        let space = ModelSpace::flat_cone(theta, radius)?;
        let (st, ct) = theta.sin_cos();
        CurveSampler::new(space, true, move |s| {
            let (x, y) = (a * ((1.0 - s) + s * ct), a * s * st);
            let phi = if s >= 1.0 { 0.0 } else { y.atan2(x) };
            Point::polar(x.hypot(y), phi)
        })
    }

    /// The minimizing geodesic from `p` to `q`, as an open curve.
    pub fn geodesic(space: ModelSpace, p: Point, q: Point) -> Result<Self> {
        space.check_unique_geodesic(&p, &q)?;
        let inner = space.clone();
        CurveSampler::new(space, false, move |s| {
            inner.geodesic_point(&p, &q, s).expect("geodesic checked at construction")
        })
    }

    /// Vertices at uniform parameters `k/m`: `m` of them for closed curves,
    /// `m + 1` for open ones.
    pub fn inscribed(&self, m: usize) -> Vec<Point> {
        let last = if self.closed { m } else { m + 1 };
        (0..last).map(|k| self.eval(k as f64 / m as f64)).collect()
    }
}

/// Turning angle of the polygon inscribed at `m` uniform parameters. Open
/// curves contribute only at interior vertices.
pub fn turning_angle_inscribed(curve: &CurveSampler, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("partition size must be >= 1"));
    }
    let pts = curve.inscribed(m);
    if curve.closed {
        return turning_angle_broken(&BrokenLoop::new(curve.space.clone(), pts)?);
    }
    let space = &curve.space;
    let mut total = 0.0;
    for k in 1..pts.len() - 1 {
        total += space.exterior_angle(&pts[k], &pts[k - 1], &pts[k + 1])?;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurningEstimate {
    pub value: f64,
    pub partition_sizes: Vec<usize>,
    pub partials: Vec<f64>,
    pub converged: bool,
    pub tolerance: f64,
}

/// Turning angles of inscribed polygons along a refinement schedule.
/// Non-convergence is reported in the estimate rather than as an error.
pub fn turning_angle_curve(curve: &CurveSampler, schedule: &[usize], tol: f64) -> Result<TurningEstimate> {
    if schedule.is_empty() {
        return Err(Error::domain("partition schedule is empty"));
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("partition schedule must be strictly increasing"));
    }
    let partials = schedule
        .par_iter()
        .map(|&m| turning_angle_inscribed(curve, m))
        .collect::<Result<Vec<f64>>>()?;
    let k = partials.len();
    let converged = k >= 2 && (partials[k - 1] - partials[k - 2]).abs() < tol;
    Ok(TurningEstimate {
        value: partials[k - 1],
        partition_sizes: schedule.to_vec(),
        partials,
        converged,
        tolerance: tol,
    })
}
