//! Forbidding lines, their intercepts on lower rows, and the columns they
//! exclude.
//!
//! The arrangement is split at a horizontal grid row. A forbidding line is a
//! line through two upper-half pebbles that crosses every lower-half row
//! inside the square. A lower pebble at horizontal distance `d` from such a
//! line spans a triangle of area at most `d / 2` with the two upper pebbles,
//! so if the minimum area is `A`, no lower pebble sits within `2A` of an
//! intercept on its own row.
//!
//! All intercepts are exact rationals; the exclusion test is done in `i128`
//! grid units.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{GridArrangement, GridPoint};

/// Constant in the quadratic lower bound on the number of forbidding lines.
pub const LINE_COUNT_CONSTANT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddingLine {
    /// Arrangement indices of the two pebbles, `i < j`.
    pub i: usize,
    pub j: usize,
    pub p: GridPoint,
    pub q: GridPoint,
}

impl ForbiddingLine {
    /// Intercept with `row` as `(num, den)` in grid units, `den > 0`.
    pub fn intercept(&self, row: u32) -> (i128, i128) {
        let (p, q) = (self.p, self.q);
        let dx = q.x as i128 - p.x as i128;
        let dy = q.y as i128 - p.y as i128;
        let num = p.x as i128 * dy + (row as i128 - p.y as i128) * dx;
        if dy < 0 {
            (-num, -dy)
        } else {
            (num, dy)
        }
    }

    /// Reduced `(a, b, c)` with `a x + b y = c`, first nonzero of `(a, b)` positive.
    pub fn equation(&self) -> (i64, i64, i64) {
        use num_integer::Integer;
        let a = self.q.y as i64 - self.p.y as i64;
        let b = self.p.x as i64 - self.q.x as i64;
        let c = a * self.p.x as i64 + b * self.p.y as i64;
        let g = a.gcd(&b).gcd(&c);
        let s = if a < 0 || (a == 0 && b < 0) { -1 } else { 1 };
        (s * a / g, s * b / g, s * c / g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddingLineSet {
    pub k: u64,
    /// Dividing row; it and every row below it form the lower half.
    pub split_row: u32,
    /// Arrangement indices of the upper-half pebbles, top to bottom.
    pub upper: Vec<usize>,
    pub lines: Vec<ForbiddingLine>,
    /// Upper-half pebbles in the top and fifth horizontal strips of the
    /// middle vertical strip.
    pub rect_top: Vec<usize>,
    pub rect_bottom: Vec<usize>,
    pub rect_top_count: usize,
    pub rect_bottom_count: usize,
}

impl ForbiddingLineSet {
    /// Lines through one pebble of each rectangle.
    pub fn rectangle_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.rect_top.len() * self.rect_bottom.len());
        for &t in &self.rect_top {
            for &b in &self.rect_bottom {
                out.push((t.min(b), t.max(b)));
            }
        }
        out
    }

    pub fn rectangle_pair_count(&self) -> usize {
        self.rect_top_count * self.rect_bottom_count
    }
}

/// Row of the `(n/2 + 1)`-th pebble from the top, so that exactly `n/2`
/// pebbles lie strictly above it. Rows must be distinct.
pub fn dividing_row(a: &GridArrangement) -> Result<u32> {
    let rows = distinct_rows_desc(a)?;
    if rows.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: rows.len() });
    }
    Ok(rows[rows.len() / 2])
}

fn distinct_rows_desc(a: &GridArrangement) -> Result<Vec<u32>> {
    let mut rows: Vec<u32> = a.points().iter().map(|p| p.y).collect();
    rows.sort_unstable_by(|x, y| y.cmp(x));
    if rows.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition("two pebbles share a row".into()));
    }
    Ok(rows)
}

/// Strip index from the top among ten horizontal strips; boundary rows go
/// to the lower-indexed strip.
fn horizontal_strip(y: u32, k: u64) -> u64 {
    let s = k - 1;
    (10 * (s - y as u64)).div_ceil(s).saturating_sub(1)
}

/// Strip index from the left among five vertical strips.
fn vertical_strip(x: u32, k: u64) -> u64 {
    (5 * x as u64).div_ceil(k - 1).saturating_sub(1)
}

pub fn forbidding_lines(a: &GridArrangement) -> Result<ForbiddingLineSet> {
    let split_row = dividing_row(a)?;
    let mut upper: Vec<(usize, GridPoint)> = a
        .points()
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, p)| p.y > split_row)
        .collect();
    upper.sort_by_key(|e| std::cmp::Reverse(e.1.y));
    let set = build(a.k(), split_row, &upper);
    for (i, j) in set.rectangle_pairs() {
        if !set.lines.iter().any(|l| l.i == i && l.j == j) {
            return Err(Error::Inconsistent(format!(
                "rectangle pair ({i}, {j}) does not cross the lower half"
            )));
        }
    }
    Ok(set)
}

/// Forbidding lines among `upper` (index, pebble) pairs ordered top to bottom.
pub(super) fn build(k: u64, split_row: u32, upper: &[(usize, GridPoint)]) -> ForbiddingLineSet {
    let hi = (k - 1) as i128;
    let inside = |(num, den): (i128, i128)| num >= 0 && num <= hi * den;
    let mut lines = Vec::new();
    for (a, &(ia, pa)) in upper.iter().enumerate() {
        for &(ib, pb) in &upper[a + 1..] {
            if pa.y == pb.y {
                continue;
            }
            let (i, j, p, q) = if ia < ib { (ia, ib, pa, pb) } else { (ib, ia, pb, pa) };
            let line = ForbiddingLine { i, j, p, q };
            if inside(line.intercept(0)) && inside(line.intercept(split_row)) {
                lines.push(line);
            }
        }
    }
    lines.sort_by_key(|l| (l.i, l.j));
    let mut rect_top = Vec::new();
    let mut rect_bottom = Vec::new();
    for &(i, p) in upper {
        if vertical_strip(p.x, k) != 2 {
            continue;
        }
        match horizontal_strip(p.y, k) {
            0 => rect_top.push(i),
            4 => rect_bottom.push(i),
            _ => {}
        }
    }
    ForbiddingLineSet {
        k,
        split_row,
        upper: upper.iter().map(|&(i, _)| i).collect(),
        lines,
        rect_top_count: rect_top.len(),
        rect_bottom_count: rect_bottom.len(),
        rect_top,
        rect_bottom,
    }
}

/// Six consecutive intercepts of least total width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SextupletWindow {
    /// Position of the first intercept in the sorted list.
    pub start: usize,
    pub w: [BigRational; 5],
    pub d: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterceptWindow {
    pub row: u32,
    /// Sorted intercepts in unit-square units.
    pub intercepts: Vec<BigRational>,
    /// Differences of consecutive intercepts.
    pub spacings: Vec<BigRational>,
    pub window: Option<SextupletWindow>,
}

impl InterceptWindow {
    /// `B = min(4A, D)` with `4A = 2 T_min / (K-1)^2`, when a window exists.
    pub fn b(&self, t_min: u64, k: u64) -> Option<BigRational> {
        let s = BigInt::from(k - 1);
        let four_a = BigRational::new(BigInt::from(2 * t_min), &s * &s);
        self.window.as_ref().map(|w| four_a.min(w.d.clone()))
    }
}

pub fn intercept_spacings(f: &ForbiddingLineSet, row: u32) -> Result<InterceptWindow> {
    if row > f.split_row {
        return Err(Error::Precondition(format!(
            "row {row} is above the dividing row {}",
            f.split_row
        )));
    }
    let scale = BigInt::from(f.k - 1);
    let mut intercepts: Vec<BigRational> = f
        .lines
        .iter()
        .map(|l| {
            let (num, den) = l.intercept(row);
            BigRational::new(BigInt::from(num), BigInt::from(den) * &scale)
        })
        .collect();
    intercepts.sort();
    let spacings: Vec<BigRational> = intercepts.windows(2).map(|w| &w[1] - &w[0]).collect();
    let window = (0..intercepts.len().saturating_sub(5))
        .min_by(|&a, &b| (&intercepts[a + 5] - &intercepts[a]).cmp(&(&intercepts[b + 5] - &intercepts[b])))
        .map(|start| SextupletWindow {
            start,
            w: std::array::from_fn(|i| spacings[start + i].clone()),
            d: &intercepts[start + 5] - &intercepts[start],
        });
    Ok(InterceptWindow {
        row,
        intercepts,
        spacings,
        window,
    })
}

/// Columns of one row, stored as merged inclusive intervals of excluded ones.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ColumnSet {
    pub k: u64,
    intervals: Vec<(u64, u64)>,
}

impl ColumnSet {
    fn from_intervals(k: u64, mut iv: Vec<(u64, u64)>) -> ColumnSet {
        iv.sort_unstable();
        let mut merged: Vec<(u64, u64)> = Vec::with_capacity(iv.len());
        for (lo, hi) in iv {
            match merged.last_mut() {
                Some(last) if lo <= last.1 + 1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        ColumnSet { k, intervals: merged }
    }

    pub fn intervals(&self) -> &[(u64, u64)] {
        &self.intervals
    }

    pub fn contains(&self, c: u64) -> bool {
        let i = self.intervals.partition_point(|iv| iv.1 < c);
        self.intervals.get(i).is_some_and(|iv| iv.0 <= c)
    }

    /// Number of excluded columns.
    pub fn len(&self) -> u64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo + 1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn allowed_count(&self) -> u64 {
        self.k - self.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.intervals.iter().flat_map(|&(lo, hi)| lo..=hi)
    }

    /// Rank of an allowed column among allowed columns.
    pub fn rank_allowed(&self, c: u64) -> Option<u64> {
        if c >= self.k || self.contains(c) {
            return None;
        }
        let before: u64 = self
            .intervals
            .iter()
            .take_while(|iv| iv.1 < c)
            .map(|(lo, hi)| hi - lo + 1)
            .sum();
        Some(c - before)
    }

    pub fn unrank_allowed(&self, r: u64) -> Option<u64> {
        let mut c = r;
        for &(lo, hi) in &self.intervals {
            if c < lo {
                break;
            }
            c += hi - lo + 1;
        }
        (c < self.k).then_some(c)
    }
}

/// Columns of `row` within horizontal distance strictly less than `2A` of
/// some intercept, `A = T_min / (2 (K-1)^2)`.
pub fn excluded_columns(row: u32, f: &ForbiddingLineSet, t_min: u64) -> ColumnSet {
    let k = f.k;
    let m = (k - 1) as i128;
    let t = t_min as i128;
    let mut iv = Vec::new();
    if t > 0 {
        for l in &f.lines {
            let (num, den) = l.intercept(row);
            // |c - num/den| < t/m  <=>  |c q - x| < r
            let (x, r, q) = (num * m, t * den, den * m);
            let lo = (x - r).div_euclid(q) + 1;
            let hi = (x + r + q - 1).div_euclid(q) - 1;
            let (lo, hi) = (lo.max(0), hi.min(m));
            if lo <= hi {
                iv.push((lo as u64, hi as u64));
            }
        }
    }
    ColumnSet::from_intervals(k, iv)
}
