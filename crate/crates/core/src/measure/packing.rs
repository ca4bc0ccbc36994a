//! Greedy ε-separated packings and the rough-volume extrapolation built on
//! them. Counts are lower estimates of the packing number `β(ε)`.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::RegionSpec;
use crate::error::{Error, Result};
use crate::modelspaces::{norm, sample_uniform, ModelSpace, Point};
use crate::rng::{derive_seed, seeded};

/// Relative slack on the separation test, absorbing rounding in lattice
/// coordinates that are exactly `ε` apart.
pub const SEPARATION_SLACK: f64 = 1e-9;

/// Tuning knobs for [`packing_number_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackingOptions {
    pub restarts: usize,
    /// Pool size per restart is `density·(diam/ε)^n`.
    pub density: f64,
    /// Upper bound on the bytes a single restart may allocate.
    pub memory_budget: usize,
}

impl Default for PackingOptions {
    fn default() -> Self {
        PackingOptions { restarts: 32, density: 8.0, memory_budget: 1 << 30 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackingResult {
    pub epsilon: f64,
    pub count: u64,
    pub restarts: usize,
    pub best_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoughVolumeEstimate {
    pub n: usize,
    pub schedule: Vec<f64>,
    pub counts: Vec<u64>,
    /// `ε^n·β̂(ε)` per schedule entry.
    pub scaled: Vec<f64>,
    /// Mean of the last two scaled entries.
    pub value: f64,
    /// `|ln(s_last / s_prev)|`.
    pub slope_diagnostic: f64,
    pub converged: bool,
}

const SLOPE_TOL: f64 = 0.05;

/// Best-of-`restarts` greedy packing count with default pool density.
pub fn packing_number(space: &ModelSpace, region: &RegionSpec, epsilon: f64, restarts: usize, seed: u64) -> Result<PackingResult> {
    let opts = PackingOptions { restarts, ..PackingOptions::default() };
    packing_number_with(space, region, epsilon, &opts, seed)
}

pub fn packing_number_with(space: &ModelSpace, region: &RegionSpec, epsilon: f64, opts: &PackingOptions, seed: u64) -> Result<PackingResult> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::domain(format!("epsilon must be > 0, got {epsilon}")));
    }
    if opts.restarts == 0 {
        return Err(Error::domain("packing needs at least one restart"));
    }
    region.validate(space)?;
    let counts = (0..opts.restarts)
        .into_par_iter()
        .map(|i| run_restart(space, region, epsilon, opts, seed, i).map(|pts| pts.len() as u64))
        .collect::<Result<Vec<u64>>>()?;
    let (best, count) = counts
        .iter()
        .enumerate()
        .fold((0, 0), |acc, (i, &c)| if c > acc.1 { (i, c) } else { acc });
    Ok(PackingResult { epsilon, count, restarts: opts.restarts, best_seed: derive_seed(seed, best as u64) })
}

/// The separated configuration found by restart `restart`.
pub fn packing_configuration(space: &ModelSpace, region: &RegionSpec, epsilon: f64, opts: &PackingOptions, seed: u64, restart: usize) -> Result<Vec<Point>> {
    region.validate(space)?;
    run_restart(space, region, epsilon, opts, seed, restart)
}

fn pool_size(diam: f64, epsilon: f64, n: usize, density: f64) -> f64 {
    (density * (diam / epsilon).powi(n as i32)).ceil()
}

fn run_restart(space: &ModelSpace, region: &RegionSpec, epsilon: f64, opts: &PackingOptions, seed: u64, restart: usize) -> Result<Vec<Point>> {
    let diam = region.diameter_bound(space);
    let n = space.dim();
    let rseed = derive_seed(seed, restart as u64);
    if n == 0 || diam < epsilon {
        return sample_uniform(space, region, 1, rseed);
    }
    let pool = pool_size(diam, epsilon, n, opts.density);
    if let Some(frame) = EuclidFrame::new(space, region) {
        if pool * (n * 8) as f64 > opts.memory_budget as f64 {
            return Err(Error::Resource(format!("sample pool of {pool} points exceeds the memory budget")));
        }
        return frame.pack(epsilon, pool as usize, opts.memory_budget, rseed, restart);
    }
    let bytes = pool * (std::mem::size_of::<Point>() + 8 * (n + 1) + 8) as f64;
    if bytes > opts.memory_budget as f64 {
        return Err(Error::Resource(format!("sample pool of {pool} points exceeds the memory budget")));
    }
    let pts = sample_uniform(space, region, pool as usize, rseed)?;
    Ok(farthest_point(space, pts, epsilon))
}

/// Farthest-point insertion: repeatedly add the pool point farthest from the
/// current set until no point is at least `ε` away.
fn farthest_point(space: &ModelSpace, pool: Vec<Point>, epsilon: f64) -> Vec<Point> {
    let thr = epsilon * (1.0 - SEPARATION_SLACK);
    let mut mind = vec![f64::INFINITY; pool.len()];
    let mut chosen: Vec<usize> = Vec::new();
    loop {
        let mut j = usize::MAX;
        let mut best = f64::NEG_INFINITY;
        for (k, &d) in mind.iter().enumerate() {
            if d > best {
                best = d;
                j = k;
            }
        }
        if j == usize::MAX || best < thr {
            break;
        }
        chosen.push(j);
        let pj = &pool[j];
        mind.par_iter_mut().zip(pool.par_iter()).for_each(|(m, p)| {
            let d = space.distance_unchecked(pj, p);
            if d < *m {
                *m = d;
            }
        });
    }
    chosen.into_iter().map(|j| pool[j].clone()).collect()
}

/// Axis-aligned view of a Euclidean region for the lattice-seeded packer.
struct EuclidFrame<'a> {
    space: &'a ModelSpace,
    region: &'a RegionSpec,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl<'a> EuclidFrame<'a> {
    fn new(space: &'a ModelSpace, region: &'a RegionSpec) -> Option<Self> {
        let (mut lo, mut hi) = match space {
            ModelSpace::EuclideanBox { sides } => (vec![0.0; sides.len()], sides.clone()),
            ModelSpace::EuclideanBall { dim, radius } => (vec![-radius; *dim], vec![*radius; *dim]),
            _ => return None,
        };
        match region {
            RegionSpec::WholeSpace => {}
            RegionSpec::Ball { center: Point::Coords(c), radius } => {
                for d in 0..lo.len() {
                    lo[d] = lo[d].max(c[d] - radius);
                    hi[d] = hi[d].min(c[d] + radius);
                }
            }
            _ => return None,
        }
        Some(EuclidFrame { space, region, lo, hi })
    }

    fn contains(&self, x: &[f64]) -> bool {
        let inside_space = match self.space {
            ModelSpace::EuclideanBall { radius, .. } => norm(x) <= *radius,
            _ => true,
        };
        inside_space
            && match self.region {
                RegionSpec::Ball { center: Point::Coords(c), radius } => {
                    crate::modelspaces::euclid_distance(c, x) <= *radius
                }
                _ => true,
            }
    }

    /// Lattice points (grid, hexagonal or cubic) followed by a streamed
    /// uniform pool, each inserted greedily.
    fn pack(&self, epsilon: f64, pool: usize, budget: usize, seed: u64, restart: usize) -> Result<Vec<Point>> {
        let n = self.lo.len();
        let mut grid = HashGrid::new(&self.lo, &self.hi, epsilon, budget)?;
        let mut rng = seeded(seed);
        let hex = n == 2;
        let row = if hex { epsilon * 3f64.sqrt() / 2.0 } else { epsilon };
        // Restart 0 anchors the lattice at the lower corner; the rest shift it.
        let mut spacing = vec![epsilon; n];
        let (along, across) = if hex && restart % 2 == 1 { (1, 0) } else { (0, 1.min(n - 1)) };
        if hex {
            spacing[across] = row;
        }
        let offset: Vec<f64> = if restart == 0 {
            vec![0.0; n]
        } else {
            spacing.iter().map(|s| s * rng.random::<f64>()).collect()
        };
        let tol: Vec<f64> = self.lo.iter().zip(&self.hi).map(|(l, h)| 1e-12 * (h - l).max(1.0)).collect();
        let steps: Vec<usize> = (0..n)
            .map(|d| {
                let span = self.hi[d] - self.lo[d] - offset[d] + tol[d];
                (span / spacing[d]).floor().max(0.0) as usize + 1
            })
            .collect();
        let mut idx = vec![0usize; n];
        let mut x = vec![0.0; n];
        'lattice: loop {
            for d in 0..n {
                let mut v = self.lo[d] + offset[d] + idx[d] as f64 * spacing[d];
                if hex && d == along && idx[across] % 2 == 1 {
                    v += 0.5 * epsilon;
                }
                if v > self.hi[d] && v <= self.hi[d] + tol[d] {
                    v = self.hi[d];
                }
                x[d] = v;
            }
            if x.iter().zip(&self.hi).all(|(v, h)| v <= h) && self.contains(&x) {
                grid.try_insert(&x);
            }
            for d in 0..n {
                idx[d] += 1;
                if idx[d] < steps[d] {
                    continue 'lattice;
                }
                idx[d] = 0;
            }
            break;
        }
        for _ in 0..pool {
            for ((xd, lo), hi) in x.iter_mut().zip(&self.lo).zip(&self.hi) {
                *xd = lo + (hi - lo) * rng.random::<f64>();
            }
            if self.contains(&x) {
                grid.try_insert(&x);
            }
        }
        Ok(grid.points())
    }
}

/// Dense cell grid with cell side `ε`, so every point within `ε` of a query
/// lies in one of the `3^n` surrounding cells.
struct HashGrid {
    n: usize,
    lo: Vec<f64>,
    cell: f64,
    dims: Vec<usize>,
    head: Vec<u32>,
    next: Vec<u32>,
    coords: Vec<f64>,
    thr2: f64,
}

const EMPTY: u32 = u32::MAX;

impl HashGrid {
    fn new(lo: &[f64], hi: &[f64], epsilon: f64, budget: usize) -> Result<Self> {
        let dims: Vec<usize> = lo.iter().zip(hi).map(|(l, h)| ((h - l) / epsilon).floor() as usize + 1).collect();
        let cells = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        let cells = match cells {
            Some(c) if c.saturating_mul(4) <= budget => c,
            _ => return Err(Error::Resource(format!("packing grid of {dims:?} cells exceeds the memory budget"))),
        };
        let thr = epsilon * (1.0 - SEPARATION_SLACK);
        Ok(HashGrid {
            n: lo.len(),
            lo: lo.to_vec(),
            cell: epsilon,
            dims,
            head: vec![EMPTY; cells],
            next: Vec::new(),
            coords: Vec::new(),
            thr2: thr * thr,
        })
    }

    fn cell_of(&self, x: &[f64]) -> Vec<usize> {
        (0..self.n)
            .map(|d| (((x[d] - self.lo[d]) / self.cell).floor().max(0.0) as usize).min(self.dims[d] - 1))
            .collect()
    }

    fn flat(&self, c: &[usize]) -> usize {
        c.iter().zip(&self.dims).fold(0, |acc, (i, d)| acc * d + i)
    }

    fn try_insert(&mut self, x: &[f64]) -> bool {
        let c = self.cell_of(x);
        let mut off = vec![0i64; self.n];
        let mut nb = vec![0usize; self.n];
        loop {
            let mut valid = true;
            for d in 0..self.n {
                let v = c[d] as i64 + off[d] - 1;
                if v < 0 || v >= self.dims[d] as i64 {
                    valid = false;
                    break;
                }
                nb[d] = v as usize;
            }
            if valid {
                let mut k = self.head[self.flat(&nb)];
                while k != EMPTY {
                    let p = &self.coords[k as usize * self.n..(k as usize + 1) * self.n];
                    let d2: f64 = p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                    if d2 < self.thr2 {
                        return false;
                    }
                    k = self.next[k as usize];
                }
            }
            let mut d = 0;
            loop {
                if d == self.n {
                    let slot = self.flat(&c);
                    let id = self.next.len() as u32;
                    self.coords.extend_from_slice(x);
                    self.next.push(self.head[slot]);
                    self.head[slot] = id;
                    return true;
                }
                off[d] += 1;
                if off[d] < 3 {
                    break;
                }
                off[d] = 0;
                d += 1;
            }
        }
    }

    fn points(self) -> Vec<Point> {
        if self.n == 0 {
            return Vec::new();
        }
        self.coords.chunks(self.n).map(|c| Point::Coords(c.to_vec())).collect()
    }
}

/// `ε^n·β̂(ε)` along a decreasing schedule, with the tail-based extrapolation.
pub fn rough_volume_estimate(space: &ModelSpace, region: &RegionSpec, n: usize, schedule: &[f64], opts: &PackingOptions, seed: u64) -> Result<RoughVolumeEstimate> {
    if schedule.len() < 3 {
        return Err(Error::domain("rough volume needs a schedule of at least 3 entries"));
    }
    if schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain("epsilon schedule must be strictly decreasing"));
    }
    let mut counts = Vec::with_capacity(schedule.len());
    let mut scaled = Vec::with_capacity(schedule.len());
    for (j, &eps) in schedule.iter().enumerate() {
        let r = packing_number_with(space, region, eps, opts, derive_seed(seed, j as u64))?;
        counts.push(r.count);
        scaled.push(eps.powi(n as i32) * r.count as f64);
    }
    let k = scaled.len();
    let (prev, last) = (scaled[k - 2], scaled[k - 1]);
    let slope = (last / prev).ln().abs();
    Ok(RoughVolumeEstimate {
        n,
        schedule: schedule.to_vec(),
        counts,
        scaled,
        value: 0.5 * (prev + last),
        slope_diagnostic: slope,
        converged: slope < SLOPE_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_grid_is_exact() {
        let unit = ModelSpace::euclidean_box(vec![1.0]).unwrap();
        for k in [1usize, 3, 7, 10, 20] {
            let r = packing_number(&unit, &RegionSpec::WholeSpace, 1.0 / k as f64, 4, 11).unwrap();
            assert_eq!(r.count, k as u64 + 1, "k = {k}");
        }
    }

    #[test]
    fn tiny_region_is_one_point() {
        let unit = ModelSpace::euclidean_box(vec![0.1, 0.1]).unwrap();
        assert_eq!(packing_number(&unit, &RegionSpec::WholeSpace, 0.5, 2, 0).unwrap().count, 1);
    }

    #[test]
    fn memory_budget_is_enforced() {
        let sq = ModelSpace::euclidean_box(vec![1.0, 1.0]).unwrap();
        let opts = PackingOptions { restarts: 1, density: 8.0, memory_budget: 1 << 10 };
        assert!(matches!(
            packing_number_with(&sq, &RegionSpec::WholeSpace, 0.01, &opts, 0),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn schedule_validation() {
        let unit = ModelSpace::euclidean_box(vec![1.0]).unwrap();
        let opts = PackingOptions::default();
        assert!(rough_volume_estimate(&unit, &RegionSpec::WholeSpace, 1, &[0.1, 0.05], &opts, 0).is_err());
        assert!(rough_volume_estimate(&unit, &RegionSpec::WholeSpace, 1, &[0.1, 0.2, 0.05], &opts, 0).is_err());
    }
}
