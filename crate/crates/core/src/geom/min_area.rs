use serde::{Deserialize, Serialize};

use super::{GridArrangement, PointSet};
use crate::error::{Error, Result};

/// Point collections the minimum-triangle search can run on.
///
/// `twice_area(i, j, k)` must be called with `i < j < k` and evaluate the
/// same expression every time, so that both search modes see bit-identical
/// values for a given triple.
pub trait Planar: Sync {
    type Area: Copy + PartialOrd + Send + Sync + std::fmt::Debug;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn twice_area(&self, i: usize, j: usize, k: usize) -> Self::Area;

    /// Position in the unit square, used only for bucketing.
    fn unit_xy(&self, i: usize) -> (f64, f64);

    /// An `f64` that is at least the twice-area expressed in unit-square units.
    fn unit_twice_upper(&self, a: Self::Area) -> f64;

    /// Normalized (unit-square) area.
    fn normalized(&self, a: Self::Area) -> f64;
}

impl Planar for GridArrangement {
    type Area = u128;

    fn len(&self) -> usize {
        self.n()
    }

    #[inline]
    fn twice_area(&self, i: usize, j: usize, k: usize) -> u128 {
        let p = self.points();
        super::twice_signed_area_grid(p[i], p[j], p[k]).unsigned_abs()
    }

    fn unit_xy(&self, i: usize) -> (f64, f64) {
        let s = (self.k() - 1) as f64;
        let p = self.points()[i];
        (p.x as f64 / s, p.y as f64 / s)
    }

    fn unit_twice_upper(&self, a: u128) -> f64 {
        let s = (self.k() - 1) as f64;
        a as f64 / (s * s) * (1.0 + 1e-12)
    }

    fn normalized(&self, a: u128) -> f64 {
        let s = (self.k() - 1) as f64;
        a as f64 / (2.0 * s * s)
    }
}

impl Planar for PointSet {
    type Area = f64;

    fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    fn twice_area(&self, i: usize, j: usize, k: usize) -> f64 {
        let p = &self.points;
        super::twice_signed_area_unit(p[i], p[j], p[k]).abs()
    }

    fn unit_xy(&self, i: usize) -> (f64, f64) {
        (self.points[i].x, self.points[i].y)
    }

    fn unit_twice_upper(&self, a: f64) -> f64 {
        a
    }

    fn normalized(&self, a: f64) -> f64 {
        a / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// All `C(n,3)` triples.
    #[default]
    Exhaustive,
    /// Strip search over a bucket grid, pruned by the best area so far.
    Fast,
}

/// The smallest triangle of a point set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleReport<A> {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub twice_area: A,
    pub area: f64,
}

impl<A> TriangleReport<A> {
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.i, self.j, self.k)
    }
}

/// Minimum-area triangle; ties go to the lexicographically smallest triple.
pub fn min_area_triangle<P: Planar>(
    points: &P,
    mode: SearchMode,
) -> Result<TriangleReport<P::Area>> {
    let n = points.len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    let (area, [i, j, k]) = match mode {
        SearchMode::Exhaustive => exhaustive(points),
        SearchMode::Fast => strip_search(points),
    };
    Ok(TriangleReport {
        i,
        j,
        k,
        twice_area: area,
        area: points.normalized(area),
    })
}

fn exhaustive<P: Planar>(pts: &P) -> (P::Area, [usize; 3]) {
    let n = pts.len();
    let mut best = (pts.twice_area(0, 1, 2), [0, 1, 2]);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = pts.twice_area(i, j, k);
                // strict: the first minimum in lex order wins
                if a < best.0 {
                    best = (a, [i, j, k]);
                }
            }
        }
    }
    best
}

struct Buckets {
    side: usize,
    cells: Vec<Vec<usize>>,
}

impl Buckets {
    fn new<P: Planar>(pts: &P) -> Self {
        let n = pts.len();
        let side = ((n as f64).sqrt().ceil() as usize).max(1);
        let mut cells = vec![Vec::new(); side * side];
        for i in 0..n {
            let (x, y) = pts.unit_xy(i);
            cells[Self::slot(y, side) * side + Self::slot(x, side)].push(i);
        }
        Buckets { side, cells }
    }

    fn slot(v: f64, side: usize) -> usize {
        ((v * side as f64).floor().max(0.0) as usize).min(side - 1)
    }

    fn range(&self, lo: f64, hi: f64) -> Option<(usize, usize)> {
        if hi < 0.0 || lo > 1.0 {
            return None;
        }
        Some((Self::slot(lo, self.side), Self::slot(hi, self.side)))
    }
}

// Collinearity margin for the strip test; float error in unit-square
// coordinates is many orders of magnitude smaller.
const STRIP_ABS_MARGIN: f64 = 1e-12;
const STRIP_REL_MARGIN: f64 = 1e-9;

fn strip_search<P: Planar>(pts: &P) -> (P::Area, [usize; 3]) {
    let n = pts.len();
    let buckets = Buckets::new(pts);
    let xy: Vec<(f64, f64)> = (0..n).map(|i| pts.unit_xy(i)).collect();
    let mut best: Option<(P::Area, [usize; 3])> = None;
    let mut cand: Vec<usize> = Vec::with_capacity(n);

    for a in 0..n {
        for b in a + 1..n {
            cand.clear();
            let (xa, ya) = xy[a];
            let (dx, dy) = (xy[b].0 - xa, xy[b].1 - ya);
            let bound = best.map(|(v, _)| pts.unit_twice_upper(v));
            match bound {
                Some(bound) if dx != 0.0 || dy != 0.0 => {
                    collect_strip(&buckets, xa, ya, dx, dy, bound, &mut cand)
                }
                _ => cand.extend(0..n),
            }
            for &c in &cand {
                if c == a || c == b {
                    continue;
                }
                let t = sorted3(a, b, c);
                let v = pts.twice_area(t[0], t[1], t[2]);
                let better = match best {
                    None => true,
                    Some((bv, bt)) => v < bv || (v == bv && t < bt),
                };
                if better {
                    best = Some((v, t));
                }
            }
        }
    }
    best.expect("n >= 3")
}

/// Pushes every point whose distance-weighted offset from the line through
/// `(xa, ya)` with direction `(dx, dy)` could be within `bound`.
fn collect_strip(
    buckets: &Buckets,
    xa: f64,
    ya: f64,
    dx: f64,
    dy: f64,
    bound: f64,
    out: &mut Vec<usize>,
) {
    let side = buckets.side;
    let h = 1.0 / side as f64;
    // |dx*(y-ya) - dy*(x-xa)| <= bound, walked along the dominant axis
    let horizontal = dx.abs() >= dy.abs();
    let (major, minor) = if horizontal { (dx, dy) } else { (dy, dx) };
    let (m0, n0) = if horizontal { (xa, ya) } else { (ya, xa) };
    let slope = minor / major;
    let half = bound / major.abs() * (1.0 + STRIP_REL_MARGIN) + STRIP_ABS_MARGIN;
    for col in 0..side {
        let c0 = col as f64 * h;
        let c1 = c0 + h;
        let v0 = n0 + slope * (c0 - m0);
        let v1 = n0 + slope * (c1 - m0);
        let lo = v0.min(v1) - half;
        let hi = v0.max(v1) + half;
        if let Some((r0, r1)) = buckets.range(lo, hi) {
            for row in r0..=r1 {
                let idx = if horizontal {
                    row * side + col
                } else {
                    col * side + row
                };
                out.extend_from_slice(&buckets.cells[idx]);
            }
        }
    }
}

#[inline]
fn sorted3(a: usize, b: usize, c: usize) -> [usize; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}
