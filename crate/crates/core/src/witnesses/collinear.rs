//! Witness for three collinear pebbles.
//!
//! Payload: rank of the other `n-1` pebbles, the index of the pair `(P, Q)`,
//! then the position of `R` among the grid points of line `PQ` other than
//! `P` and `Q` (at most `K-2` of them), all fixed width.

use num_integer::Integer;

use super::{check_n, push_arrangement, push_pair, read_arrangement, read_pair, WitnessKind, WitnessReport};
use crate::codecs::{ceil_log2_u64, BitReader, BitString};
use crate::error::{Error, Result};
use crate::geom::{collinear_grid, GridArrangement, GridPoint};

/// Lexicographically first collinear triple, by exhaustive exact search.
pub fn find_collinear_triple(a: &GridArrangement) -> Option<(usize, usize, usize)> {
    let p = a.points();
    let n = p.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if collinear_grid(p[i], p[j], p[k]) {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// Lattice points on the line through `p` and `q`, clipped to the grid,
/// parametrized as `p + t * step` for `t` in `t_min..=t_max`.
struct GridLine {
    origin: (i64, i64),
    step: (i64, i64),
    t_min: i64,
    t_max: i64,
    /// Parameter of `q`; `p` sits at 0.
    t_q: i64,
}

impl GridLine {
    fn new(p: GridPoint, q: GridPoint, k: u64) -> GridLine {
        let (dx, dy) = (q.x as i64 - p.x as i64, q.y as i64 - p.y as i64);
        let g = dx.unsigned_abs().gcd(&dy.unsigned_abs()) as i64;
        let step = (dx / g, dy / g);
        let hi = k as i64 - 1;
        let (mut t_min, mut t_max) = (i64::MIN, i64::MAX);
        for (c, s) in [(p.x as i64, step.0), (p.y as i64, step.1)] {
            // 0 <= c + t s <= hi
            if s > 0 {
                t_min = t_min.max(Integer::div_ceil(&-c, &s));
                t_max = t_max.min(Integer::div_floor(&(hi - c), &s));
            } else if s < 0 {
                t_min = t_min.max(Integer::div_ceil(&(hi - c), &s));
                t_max = t_max.min(Integer::div_floor(&-c, &s));
            }
        }
        GridLine {
            origin: (p.x as i64, p.y as i64),
            step,
            t_min,
            t_max,
            t_q: g,
        }
    }

    fn at(&self, t: i64) -> GridPoint {
        GridPoint::new(
            (self.origin.0 + t * self.step.0) as u32,
            (self.origin.1 + t * self.step.1) as u32,
        )
    }

    fn param_of(&self, r: GridPoint) -> i64 {
        if self.step.0 != 0 {
            (r.x as i64 - self.origin.0) / self.step.0
        } else {
            (r.y as i64 - self.origin.1) / self.step.1
        }
    }

    /// Index of parameter `t` once `0` and `t_q` are skipped.
    fn index_of(&self, t: i64) -> u64 {
        let skipped = [0, self.t_q].iter().filter(|&&s| s < t).count() as i64;
        (t - self.t_min - skipped) as u64
    }

    fn param_at(&self, idx: u64) -> i64 {
        let mut t = self.t_min + idx as i64;
        for s in [0, self.t_q] {
            if s <= t {
                t += 1;
            }
        }
        t
    }
}

fn index_width(k: u64) -> usize {
    ceil_log2_u64(k.saturating_sub(2)) as usize
}

pub fn encode_collinear_witness(a: &GridArrangement) -> Result<WitnessReport> {
    let (i, j, r_idx) = find_collinear_triple(a)
        .ok_or_else(|| Error::Precondition("no three pebbles are collinear".into()))?;
    let k = a.k();
    let (p, q, r) = (a.points()[i], a.points()[j], a.points()[r_idx]);
    let sub = a.without(r_idx);
    let line = GridLine::new(p, q, k);

    let mut out = BitString::new();
    push_arrangement(&mut out, &sub);
    // i < j < r_idx, so P and Q keep their indices in `sub`
    push_pair(&mut out, i, j, sub.n());
    out.push_uint(line.index_of(line.param_of(r)), index_width(k));
    WitnessReport::new(WitnessKind::Collinear, out, k, a.n())
}

pub(super) fn decode(r: &mut BitReader<'_>, k: u64, n: usize) -> Result<GridArrangement> {
    check_n(k, n, 3)?;
    let sub = read_arrangement(r, k, n - 1)?;
    let (i, j) = read_pair(r, n - 1)?;
    let (p, q) = (sub.points()[i], sub.points()[j]);
    let line = GridLine::new(p, q, k);
    let pos = r.position();
    let idx = r.read_uint(index_width(k))?;
    let t = line.param_at(idx);
    if t > line.t_max {
        return Err(Error::decode(pos, "point index runs off the grid"));
    }
    sub.with(line.at(t))
        .map_err(|e| Error::decode(pos, format!("reconstructed pebble invalid: {e}")))
}
