//! Witness that squeezes the lower half of an arrangement between the
//! forbidding lines of the upper half.
//!
//! Payload:
//! - `T_min`, the least twice-area, in `2 ceil(log2(K-1)) + 1` bits;
//! - the rank of the set of occupied rows among `C(K, n)`;
//! - the upper-half columns, top to bottom, `ceil(log2 K)` bits each;
//! - the lower-half columns as one mixed-radix integer: row by row from the
//!   top, the rank of the column among the columns not excluded on that row,
//!   in `ceil(log2 prod M_i)` bits where `M_i` is the allowed count.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::forbidding::{build, excluded_columns, ColumnSet};
use super::{check_n, WitnessKind, WitnessReport};
use crate::codecs::{binomial, ceil_log2, ceil_log2_u64, rank_subset, unrank_subset, BitReader, BitString};
use crate::error::{Error, Result};
use crate::geom::{min_area_triangle, GridArrangement, GridPoint, SearchMode};

fn t_width(k: u64) -> usize {
    2 * ceil_log2_u64(k - 1) as usize + 1
}

fn check_shape(k: u64, n: usize) -> Result<()> {
    check_n(k, n, 2)?;
    if !n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("n = {n} is odd")));
    }
    if n as u64 > k {
        return Err(Error::Precondition(format!("n = {n} pebbles cannot occupy distinct rows of K = {k}")));
    }
    Ok(())
}

fn exclusions(k: u64, split_row: u32, upper: &[GridPoint], lower_rows: &[u32], t_min: u64) -> Vec<ColumnSet> {
    let tagged: Vec<(usize, GridPoint)> = upper.iter().copied().enumerate().collect();
    let f = build(k, split_row, &tagged);
    lower_rows.iter().map(|&row| excluded_columns(row, &f, t_min)).collect()
}

pub fn encode_theorem2(a: &GridArrangement) -> Result<WitnessReport> {
    let (k, n) = (a.k(), a.n());
    check_shape(k, n)?;
    let mut pts: Vec<GridPoint> = a.points().to_vec();
    pts.sort_by_key(|p| std::cmp::Reverse(p.y));
    if pts.windows(2).any(|w| w[0].y == w[1].y) {
        return Err(Error::Precondition("two pebbles share a row".into()));
    }
    let t_min = if n >= 3 {
        min_area_triangle(a, SearchMode::Fast)?.twice_area as u64
    } else {
        0
    };
    let (upper, lower) = pts.split_at(n / 2);
    let split_row = lower[0].y;
    let lower_rows: Vec<u32> = lower.iter().map(|p| p.y).collect();
    let ex = exclusions(k, split_row, upper, &lower_rows, t_min);

    let mut out = BitString::new();
    out.push_uint(t_min, t_width(k));
    let mut rows: Vec<u64> = pts.iter().map(|p| p.y as u64).collect();
    rows.sort_unstable();
    out.push_biguint(&rank_subset(k, &rows)?, ceil_log2(&binomial(k, n as u64)) as usize);
    let cw = ceil_log2_u64(k) as usize;
    for p in upper {
        out.push_uint(p.x as u64, cw);
    }
    let mut value = BigUint::zero();
    let mut radix = BigUint::from(1u32);
    for (p, set) in lower.iter().zip(&ex) {
        let r = set.rank_allowed(p.x as u64).ok_or_else(|| {
            Error::Inconsistent(format!("lower pebble ({}, {}) lies in an excluded column", p.x, p.y))
        })?;
        let m = set.allowed_count();
        value = value * m + r;
        radix *= m;
    }
    out.push_biguint(&value, ceil_log2(&radix) as usize);
    WitnessReport::new(WitnessKind::Theorem2, out, k, n)
}

pub(super) fn decode(r: &mut BitReader<'_>, k: u64, n: usize) -> Result<GridArrangement> {
    check_shape(k, n)?;
    let t_min = r.read_uint(t_width(k))?;
    let pos = r.position();
    let rank = r.read_biguint(ceil_log2(&binomial(k, n as u64)) as usize)?;
    let mut rows = unrank_subset(k, n, &rank).map_err(|e| Error::decode(pos, e.to_string()))?;
    rows.reverse();
    let cw = ceil_log2_u64(k) as usize;
    let mut upper = Vec::with_capacity(n / 2);
    for &y in &rows[..n / 2] {
        let pos = r.position();
        let x = r.read_uint(cw)?;
        if x >= k {
            return Err(Error::decode(pos, format!("column {x} outside the grid")));
        }
        upper.push(GridPoint::new(x as u32, y as u32));
    }
    let lower_rows: Vec<u32> = rows[n / 2..].iter().map(|&y| y as u32).collect();
    let ex = exclusions(k, lower_rows[0], &upper, &lower_rows, t_min);
    let radix = ex.iter().fold(BigUint::from(1u32), |acc, s| acc * s.allowed_count());
    let pos = r.position();
    if radix.is_zero() {
        return Err(Error::decode(pos, "a lower row has no allowed column"));
    }
    let mut value = r.read_biguint(ceil_log2(&radix) as usize)?;
    if value >= radix {
        return Err(Error::decode(pos, "lower-half index out of range"));
    }
    let mut cols = vec![0u64; ex.len()];
    for (i, set) in ex.iter().enumerate().rev() {
        let m = BigUint::from(set.allowed_count());
        let digit = (&value % &m).to_u64().expect("digit below K");
        value /= &m;
        cols[i] = set.unrank_allowed(digit).expect("digit below allowed count");
    }
    let mut pts = upper;
    pts.extend(lower_rows.iter().zip(&cols).map(|(&y, &x)| GridPoint::new(x as u32, y)));
    GridArrangement::new(k, pts).map_err(|e| Error::decode(pos, e.to_string()))
}
