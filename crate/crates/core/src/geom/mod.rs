//! Planar geometry on integer grids and in the unit square.
//!
//! Grid coordinates are exact: every area is an integer twice-area computed
//! through 128-bit intermediates. Continuous coordinates use `f64` and a
//! configurable collinearity tolerance.
//!
//! A grid of side `K` has `K` grid lines per axis, so grid point `(i, j)`
//! sits at `(i / (K-1), j / (K-1))` in the unit square.

mod min_area;

pub use min_area::{min_area_triangle, Planar, SearchMode, TriangleReport};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported grid side. Keeps every cross product inside `i128`
/// with a wide margin and every cell id inside `u64`.
pub const MAX_GRID_SIDE: u64 = 1 << 30;

/// Default tolerance on `|twice_signed_area|` for continuous collinearity.
pub const DEFAULT_COLLINEAR_EPS: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: u32,
    pub y: u32,
}

impl GridPoint {
    pub const fn new(x: u32, y: u32) -> Self {
        GridPoint { x, y }
    }

    /// Row-major cell id on a grid of side `k`.
    pub fn cell_id(self, k: u64) -> u64 {
        self.y as u64 * k + self.x as u64
    }

    pub fn from_cell_id(id: u64, k: u64) -> Self {
        GridPoint::new((id % k) as u32, (id / k) as u32)
    }
}

/// `n` distinct pebbles on a `K x K` grid, kept sorted by `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridArrangement {
    k: u64,
    points: Vec<GridPoint>,
}

pub(crate) fn check_grid_side(k: u64) -> Result<()> {
    if !(2..=MAX_GRID_SIDE).contains(&k) {
        return Err(Error::BadGridSide(k));
    }
    Ok(())
}

impl GridArrangement {
    /// Validates and sorts. Rejects duplicates and points outside the grid.
    pub fn new(k: u64, mut points: Vec<GridPoint>) -> Result<Self> {
        check_grid_side(k)?;
        for p in &points {
            if p.x as u64 >= k || p.y as u64 >= k {
                return Err(Error::PointOutsideGrid {
                    x: p.x as i64,
                    y: p.y as i64,
                    k,
                });
            }
        }
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint {
                x: w[0].x,
                y: w[0].y,
            });
        }
        Ok(GridArrangement { k, points })
    }

    /// Builds an arrangement from row-major cell ids.
    pub fn from_cells(k: u64, cells: &[u64]) -> Result<Self> {
        check_grid_side(k)?;
        let kk = k * k;
        let pts = cells
            .iter()
            .map(|&c| {
                if c >= kk {
                    Err(Error::OutOfRange(format!("cell id {c} >= K^2 = {kk}")))
                } else {
                    Ok(GridPoint::from_cell_id(c, k))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, pts)
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    /// Sorted row-major cell ids.
    pub fn cells(&self) -> Vec<u64> {
        let mut c: Vec<u64> = self.points.iter().map(|p| p.cell_id(self.k)).collect();
        c.sort_unstable();
        c
    }

    pub fn index_of(&self, p: GridPoint) -> Option<usize> {
        self.points.binary_search(&p).ok()
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        self.index_of(p).is_some()
    }

    /// Copy without the pebble at `idx`.
    pub fn without(&self, idx: usize) -> GridArrangement {
        let mut points = self.points.clone();
        points.remove(idx);
        GridArrangement { k: self.k, points }
    }

    /// Copy with one more pebble; fails if occupied or off-grid.
    pub fn with(&self, p: GridPoint) -> Result<GridArrangement> {
        let mut points = self.points.clone();
        points.push(p);
        GridArrangement::new(self.k, points)
    }

    /// Embeds the arrangement in the unit square with spacing `1/(K-1)`.
    pub fn to_unit(&self) -> PointSet {
        let s = (self.k - 1) as f64;
        PointSet {
            points: self
                .points
                .iter()
                .map(|p| UnitPoint {
                    x: p.x as f64 / s,
                    y: p.y as f64 / s,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitPoint {
    pub x: f64,
    pub y: f64,
}

impl UnitPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        for c in [x, y] {
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::CoordinateOutOfRange(c));
            }
        }
        Ok(UnitPoint { x, y })
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PointSet {
    pub points: Vec<UnitPoint>,
}

impl PointSet {
    pub fn new(points: Vec<UnitPoint>) -> Self {
        PointSet { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A point in either coordinate mode, for the mode-checked predicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Grid(GridPoint),
    Unit(UnitPoint),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignedArea {
    Exact(i128),
    Real(f64),
}

#[inline]
pub fn twice_signed_area_grid(p: GridPoint, q: GridPoint, r: GridPoint) -> i128 {
    let (px, py) = (p.x as i128, p.y as i128);
    (q.x as i128 - px) * (r.y as i128 - py) - (q.y as i128 - py) * (r.x as i128 - px)
}

#[inline]
pub fn twice_signed_area_unit(p: UnitPoint, q: UnitPoint, r: UnitPoint) -> f64 {
    (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
}

/// `(q - p) x (r - p)`, exact on grids.
pub fn twice_signed_area(p: Point, q: Point, r: Point) -> Result<SignedArea> {
    match (p, q, r) {
        (Point::Grid(p), Point::Grid(q), Point::Grid(r)) => {
            Ok(SignedArea::Exact(twice_signed_area_grid(p, q, r)))
        }
        (Point::Unit(p), Point::Unit(q), Point::Unit(r)) => {
            Ok(SignedArea::Real(twice_signed_area_unit(p, q, r)))
        }
        _ => Err(Error::MixedModes),
    }
}

pub fn collinear_grid(p: GridPoint, q: GridPoint, r: GridPoint) -> bool {
    twice_signed_area_grid(p, q, r) == 0
}

pub fn collinear_unit(p: UnitPoint, q: UnitPoint, r: UnitPoint, eps: f64) -> bool {
    twice_signed_area_unit(p, q, r).abs() <= eps
}

/// Exact on grids; continuous points use `eps` on the twice-area.
pub fn collinear(p: Point, q: Point, r: Point, eps: f64) -> Result<bool> {
    Ok(match twice_signed_area(p, q, r)? {
        SignedArea::Exact(v) => v == 0,
        SignedArea::Real(v) => v.abs() <= eps,
    })
}

/// Lattice points on the half-open segment `[p, q)`: `gcd(|dx|, |dy|)`.
pub fn lattice_points_half_open(p: GridPoint, q: GridPoint) -> Result<u64> {
    if p == q {
        return Err(Error::CoincidentPoints);
    }
    let dx = (q.x as i64 - p.x as i64).unsigned_abs();
    let dy = (q.y as i64 - p.y as i64).unsigned_abs();
    Ok(dx.gcd(&dy))
}

/// Grid twice-area to unit-square area: `t / (2 (K-1)^2)`.
pub fn normalize_area(twice_area: u128, k: u64) -> Result<f64> {
    if k < 2 {
        return Err(Error::BadGridSide(k));
    }
    let s = (k - 1) as f64;
    Ok(twice_area as f64 / (2.0 * s * s))
}
