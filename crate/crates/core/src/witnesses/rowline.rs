//! Witness for two pebbles on one horizontal grid line.
//!
//! Payload: rank of the other `n-1` pebbles, the index of `P` among them,
//! then the column of `R` among the `K-1` other cells of `P`'s row.

use super::{check_n, push_arrangement, read_arrangement, WitnessKind, WitnessReport};
use crate::codecs::{ceil_log2_u64, BitReader, BitString};
use crate::error::{Error, Result};
use crate::geom::{GridArrangement, GridPoint};

/// First index pair `(i, j)`, `i < j`, whose pebbles share a row.
pub fn find_shared_row(a: &GridArrangement) -> Option<(usize, usize)> {
    let p = a.points();
    (0..p.len()).find_map(|i| (i + 1..p.len()).find(|&j| p[i].y == p[j].y).map(|j| (i, j)))
}

pub fn encode_rowline_witness(a: &GridArrangement) -> Result<WitnessReport> {
    let (i, j) = find_shared_row(a)
        .ok_or_else(|| Error::Precondition("all pebbles are on distinct rows".into()))?;
    let k = a.k();
    let (p, r) = (a.points()[i], a.points()[j]);
    let sub = a.without(j);
    let mut out = BitString::new();
    push_arrangement(&mut out, &sub);
    out.push_uint(i as u64, ceil_log2_u64(sub.n() as u64) as usize);
    let col = r.x as u64 - (r.x > p.x) as u64;
    out.push_uint(col, ceil_log2_u64(k - 1) as usize);
    WitnessReport::new(WitnessKind::Rowline, out, k, a.n())
}

pub(super) fn decode(r: &mut BitReader<'_>, k: u64, n: usize) -> Result<GridArrangement> {
    check_n(k, n, 2)?;
    let sub = read_arrangement(r, k, n - 1)?;
    let pos = r.position();
    let i = r.read_uint(ceil_log2_u64(sub.n() as u64) as usize)? as usize;
    if i >= sub.n() {
        return Err(Error::decode(pos, format!("pebble index {i} out of range")));
    }
    let p = sub.points()[i];
    let pos = r.position();
    let col = r.read_uint(ceil_log2_u64(k - 1) as usize)?;
    if col >= k - 1 {
        return Err(Error::decode(pos, format!("column index {col} out of range")));
    }
    let x = if col >= p.x as u64 { col + 1 } else { col };
    sub.with(GridPoint::new(x as u32, p.y))
        .map_err(|e| Error::decode(pos, format!("reconstructed pebble invalid: {e}")))
}
