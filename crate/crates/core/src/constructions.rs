//! Reference point sets: the Erdős parabola construction, a local-search
//! optimizer for small `n`, and a corners-plus-noise fixture.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{stream_rng, uniform01};
use crate::geom::{min_area_triangle, GridArrangement, GridPoint, PointSet, SearchMode, UnitPoint};
use crate::witnesses::find_collinear_triple;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `{(i, i^2 mod p)}` on a `p x p` grid; no three points are collinear.
pub fn erdos_prime(p: u64) -> Result<GridArrangement> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pts = (0..p).map(|i| GridPoint::new(i as u32, (i * i % p) as u32)).collect();
    let a = GridArrangement::new(p, pts)?;
    if let Some(t) = find_collinear_triple(&a) {
        return Err(Error::Inconsistent(format!("collinear triple {t:?}")));
    }
    Ok(a)
}

/// The construction in the unit square with cell size `1/p`: grid point
/// `(i, j)` goes to `(i/p, j/p)`.
pub fn erdos_unit_points(p: u64) -> Result<PointSet> {
    let a = erdos_prime(p)?;
    let s = p as f64;
    Ok(PointSet::new(
        a.points()
            .iter()
            .map(|g| UnitPoint {
                x: g.x as f64 / s,
                y: g.y as f64 / s,
            })
            .collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErdosReport {
    pub p: u64,
    pub min_twice_area: u64,
    /// `T / (2 p^2)`: area with cell size `1/p`, the scale of the `1/(2p^2)` bound.
    pub area_cell_scale: f64,
    /// `T / (2 (p-1)^2)`: area under the grid convention used elsewhere.
    pub area_grid_scale: f64,
}

pub fn erdos_report(p: u64) -> Result<ErdosReport> {
    let a = erdos_prime(p)?;
    let t = if a.n() >= 3 {
        min_area_triangle(&a, SearchMode::Exhaustive)?.twice_area as u64
    } else {
        0
    };
    let s = p as f64;
    Ok(ErdosReport {
        p,
        min_twice_area: t,
        area_cell_scale: t as f64 / (2.0 * s * s),
        area_grid_scale: t as f64 / (2.0 * (s - 1.0) * (s - 1.0)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerResult {
    pub points: PointSet,
    /// Least triangle area of `points`.
    pub value: f64,
    pub iterations: u64,
    pub seed: u64,
    /// Restart that produced `points`.
    pub restart: usize,
}

const INITIAL_STEP: f64 = 0.1;
const STEP_DECAY: f64 = 0.95;
const REJECTION_STREAK: u32 = 20;
const MIN_STEP: f64 = 1e-9;

/// Least triangle area and one triple attaining it.
fn min_area(pts: &[UnitPoint]) -> (f64, [usize; 3]) {
    let n = pts.len();
    let mut best = (f64::INFINITY, [0, 1, 2]);
    for i in 0..n {
        for j in i + 1..n {
            let (dx, dy) = (pts[j].x - pts[i].x, pts[j].y - pts[i].y);
            for k in j + 1..n {
                let v = (dx * (pts[k].y - pts[i].y) - dy * (pts[k].x - pts[i].x)).abs();
                if v < best.0 {
                    best = (v, [i, j, k]);
                }
            }
        }
    }
    (best.0 / 2.0, best.1)
}

fn random_points<R: rand::RngCore>(n: usize, rng: &mut R) -> Vec<UnitPoint> {
    (0..n)
        .map(|_| UnitPoint {
            x: uniform01(rng),
            y: uniform01(rng),
        })
        .collect()
}

/// One restart: perturb a vertex of a least triangle, keep strict improvements.
fn local_search(n: usize, steps: u64, seed: u64, restart: usize) -> (Vec<UnitPoint>, f64) {
    let mut rng = stream_rng(seed, restart as u64);
    let mut cur = random_points(n, &mut rng);
    let (mut cur_v, mut tri) = min_area(&cur);
    let mut best = (cur.clone(), cur_v);
    let mut step = INITIAL_STEP;
    let mut streak = 0;
    for _ in 0..steps {
        // only a vertex of a least triangle can raise the minimum
        let i = tri[((uniform01(&mut rng) * 3.0) as usize).min(2)];
        let old = cur[i];
        let dx = (2.0 * uniform01(&mut rng) - 1.0) * step;
        let dy = (2.0 * uniform01(&mut rng) - 1.0) * step;
        cur[i] = UnitPoint {
            x: (old.x + dx).clamp(0.0, 1.0),
            y: (old.y + dy).clamp(0.0, 1.0),
        };
        let (v, t) = min_area(&cur);
        if v > cur_v {
            cur_v = v;
            tri = t;
            streak = 0;
            if v > best.1 {
                best = (cur.clone(), v);
            }
        } else {
            cur[i] = old;
            streak += 1;
            if streak == REJECTION_STREAK {
                step *= STEP_DECAY;
                streak = 0;
            }
        }
        if step < MIN_STEP {
            cur = random_points(n, &mut rng);
            (cur_v, tri) = min_area(&cur);
            step = INITIAL_STEP;
            streak = 0;
        }
    }
    best
}

/// Random-restart local search for `n` points maximizing the least triangle
/// area. Restart `r` draws from stream `r` of `seed`, so adding restarts
/// never lowers the result.
pub fn optimize_heilbronn(n: usize, restarts: usize, steps: u64, seed: u64) -> Result<OptimizerResult> {
    if !(3..=16).contains(&n) {
        return Err(Error::OutOfRange(format!("n = {n} outside [3, 16]")));
    }
    if restarts == 0 {
        return Err(Error::Precondition("need at least one restart".into()));
    }
    let runs: Vec<(Vec<UnitPoint>, f64)> = (0..restarts)
        .into_par_iter()
        .map(|r| local_search(n, steps, seed, r))
        .collect();
    let mut pick = 0;
    for (r, run) in runs.iter().enumerate() {
        if run.1 > runs[pick].1 {
            pick = r;
        }
    }
    let points = PointSet::new(runs[pick].0.clone());
    let value = min_area_triangle(&points, SearchMode::Exhaustive)?.area;
    Ok(OptimizerResult {
        points,
        value,
        iterations: steps * restarts as u64,
        seed,
        restart: pick,
    })
}

/// The four corners of the unit square followed by `n - 4` seeded uniform points.
pub fn corners_plus_random(n: usize, seed: u64) -> Result<PointSet> {
    if n < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: n });
    }
    let mut pts: Vec<UnitPoint> = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
        .iter()
        .map(|&(x, y)| UnitPoint { x, y })
        .collect();
    let mut rng = stream_rng(seed, 0);
    pts.extend(random_points(n - 4, &mut rng));
    Ok(PointSet::new(pts))
}
