//! Witness for a triangle of small area.
//!
//! With `PQ` the longest side, `d = Q - P` and `g = gcd(d)`, the grid points
//! `X` with `cross(d, X - P) = +-k g` lie on lines parallel to `PQ`, `g` of
//! them per line with projection onto `PQ` inside `[P, Q)`. Enumerating by
//! `k`, then sign, then position along the line puts `R` at an index below
//! `2 f g = 2T`, which is sent self-delimited after the sub-arrangement and
//! the pair `(P, Q)`.

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{check_n, push_arrangement, push_pair, read_arrangement, read_pair, WitnessKind, WitnessReport};
use crate::codecs::{binomial, ceil_log2, ceil_log2_u64, decode_nat, encode_nat, BitReader, BitString};
use crate::error::{Error, Result};
use crate::geom::{twice_signed_area_grid, GridArrangement, GridPoint};

/// Upper bound on the witness length beyond the information-theoretic terms,
/// for every `K <= 2^30`. One bit of rounding in the sub-arrangement width,
/// plus at most `2 floor(log2 62) + 1 = 11` bits of length prefix on the
/// candidate index.
pub const SMALL_TRIANGLE_OVERHEAD_BITS: i64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallTriangleGeometry {
    pub p: GridPoint,
    pub q: GridPoint,
    pub r: GridPoint,
    /// Indices of `p`, `q`, `r` in the arrangement.
    pub indices: (usize, usize, usize),
    pub g: u64,
    /// Twice-area in grid units.
    pub t: u64,
    pub f: u64,
}

/// Relabels `triple` so `PQ` is the longest side. Ties between equally long
/// sides go to the first of `(i,j)`, `(i,k)`, `(j,k)` for sorted `i < j < k`.
pub fn small_triangle_geometry(
    a: &GridArrangement,
    triple: (usize, usize, usize),
) -> Result<SmallTriangleGeometry> {
    let mut idx = [triple.0, triple.1, triple.2];
    idx.sort_unstable();
    if idx[0] == idx[1] || idx[1] == idx[2] || idx[2] >= a.n() {
        return Err(Error::Precondition(format!("invalid triple {triple:?}")));
    }
    let pts = a.points();
    let [i, j, k] = idx;
    let len2 = |u: usize, v: usize| {
        let dx = pts[u].x as i64 - pts[v].x as i64;
        let dy = pts[u].y as i64 - pts[v].y as i64;
        (dx * dx + dy * dy) as u64
    };
    let mut best = (i, j, k);
    for cand in [(i, k, j), (j, k, i)] {
        if len2(cand.0, cand.1) > len2(best.0, best.1) {
            best = cand;
        }
    }
    let (pi, qi, ri) = best;
    let (p, q, r) = (pts[pi], pts[qi], pts[ri]);
    let t = twice_signed_area_grid(p, q, r).unsigned_abs() as u64;
    if t == 0 {
        return Err(Error::Precondition("triple is collinear".into()));
    }
    let g = (q.x as i64 - p.x as i64).unsigned_abs().gcd(&(q.y as i64 - p.y as i64).unsigned_abs());
    Ok(SmallTriangleGeometry {
        p,
        q,
        r,
        indices: (pi, qi, ri),
        g,
        t,
        f: t / g,
    })
}

/// Parallel-line lattice around `P` in direction `d = Q - P`.
struct Lattice {
    /// Primitive direction `d / g`.
    step: (i128, i128),
    /// Solution of `cross(step, u) = 1`.
    unit: (i128, i128),
    g: i128,
}

impl Lattice {
    fn new(p: GridPoint, q: GridPoint) -> Lattice {
        let (dx, dy) = (q.x as i128 - p.x as i128, q.y as i128 - p.y as i128);
        let g = dx.gcd(&dy);
        let step = (dx / g, dy / g);
        let e = step.0.extended_gcd(&step.1);
        let (a, b) = if e.gcd < 0 { (-e.x, -e.y) } else { (e.x, e.y) };
        // a sx + b sy = 1, and cross((sx, sy), (-b, a)) = sx a + sy b
        Lattice {
            step,
            unit: (-b, a),
            g,
        }
    }

    fn norm2(&self) -> i128 {
        self.step.0 * self.step.0 + self.step.1 * self.step.1
    }

    /// First line parameter whose projection onto `PQ` is nonnegative, on
    /// the parallel line at signed offset `c`.
    fn t_min(&self, c: i128) -> i128 {
        let c0 = self.unit.0 * self.step.0 + self.unit.1 * self.step.1;
        Integer::div_ceil(&(-c * c0), &self.norm2())
    }

    fn index_of(&self, v: (i128, i128)) -> Option<u64> {
        let c = self.step.0 * v.1 - self.step.1 * v.0;
        if c == 0 {
            return None;
        }
        let (k, sign) = (c.abs(), (c < 0) as i128);
        let w = (v.0 - c * self.unit.0, v.1 - c * self.unit.1);
        let t = (w.0 * self.step.0 + w.1 * self.step.1) / self.norm2();
        let off = t - self.t_min(c);
        if !(0..self.g).contains(&off) {
            return None;
        }
        Some(((2 * (k - 1) + sign) * self.g + off) as u64)
    }

    fn offset_at(&self, idx: u64) -> (i128, i128) {
        let idx = idx as i128;
        let (block, off) = (idx / self.g, idx % self.g);
        let k = block / 2 + 1;
        let c = if block % 2 == 0 { k } else { -k };
        let t = self.t_min(c) + off;
        (c * self.unit.0 + t * self.step.0, c * self.unit.1 + t * self.step.1)
    }
}

pub fn encode_small_triangle_witness(
    a: &GridArrangement,
    triple: (usize, usize, usize),
) -> Result<WitnessReport> {
    let geo = small_triangle_geometry(a, triple)?;
    let (pi, qi, ri) = geo.indices;
    let sub = a.without(ri);
    let shift = |i: usize| i - (i > ri) as usize;
    let (sp, sq) = (shift(pi), shift(qi));
    let (sp, sq) = (sp.min(sq), sp.max(sq));
    let (p, q) = (sub.points()[sp], sub.points()[sq]);
    let lat = Lattice::new(p, q);
    let v = (geo.r.x as i128 - p.x as i128, geo.r.y as i128 - p.y as i128);
    let idx = lat
        .index_of(v)
        .ok_or_else(|| Error::Inconsistent("third vertex projects outside the longest side".into()))?;
    debug_assert!(idx < 2 * geo.t);

    let mut out = BitString::new();
    push_arrangement(&mut out, &sub);
    push_pair(&mut out, sp, sq, sub.n());
    out.extend(&encode_nat(idx));
    WitnessReport::new(WitnessKind::SmallTriangle, out, a.k(), a.n())
}

/// Length bound for a triangle of twice-area `t`:
/// `baseline - ceil(log2((K^2-n+1)/n)) + ceil(log2 C(n,2)) + ceil(log2 2t) + overhead`.
pub fn small_triangle_length_bound(k: u64, n: usize, t: u64) -> Result<i64> {
    let baseline = crate::codecs::baseline_length(k, n)? as i64;
    let num = BigUint::from(k * k - n as u64 + 1);
    let den = BigUint::from(n as u64);
    // smallest e with den 2^e >= num, allowing e < 0
    let mut e: i64 = ceil_log2(&(&num / &den)) as i64 - 1;
    let fits = |e: i64| {
        if e >= 0 {
            (&den << e as u64) >= num
        } else {
            den >= (&num << (-e) as u64)
        }
    };
    while !fits(e) {
        e += 1;
    }
    while fits(e - 1) {
        e -= 1;
    }
    Ok(baseline - e
        + ceil_log2(&binomial(n as u64, 2)) as i64
        + ceil_log2_u64(2 * t) as i64
        + SMALL_TRIANGLE_OVERHEAD_BITS)
}

pub(super) fn decode(
    r: &mut BitReader<'_>,
    k: u64,
    n: usize,
) -> Result<(GridArrangement, (usize, usize, usize))> {
    check_n(k, n, 3)?;
    let sub = read_arrangement(r, k, n - 1)?;
    let (sp, sq) = read_pair(r, n - 1)?;
    let (p, q) = (sub.points()[sp], sub.points()[sq]);
    let pos = r.position();
    let idx = decode_nat(r)?;
    let side = (k - 1) as u128;
    if idx as u128 >= 4 * side * side {
        return Err(Error::decode(pos, format!("candidate index {idx} is too large")));
    }
    let lat = Lattice::new(p, q);
    let v = lat.offset_at(idx);
    let (x, y) = (p.x as i128 + v.0, p.y as i128 + v.1);
    if x < 0 || y < 0 || x >= k as i128 || y >= k as i128 {
        return Err(Error::decode(pos, "third vertex falls outside the grid"));
    }
    let rp = GridPoint::new(x as u32, y as u32);
    let a = sub
        .with(rp)
        .map_err(|e| Error::decode(pos, format!("reconstructed pebble invalid: {e}")))?;
    let find = |g: GridPoint| a.index_of(g).expect("pebble present");
    Ok((a.clone(), (find(p), find(q), find(rp))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codecs::baseline_length;
    use crate::witnesses::decode_witness;
    use proptest::prelude::*;

    fn arr(k: u64, pts: &[(u32, u32)]) -> GridArrangement {
        GridArrangement::new(k, pts.iter().map(|&(x, y)| GridPoint::new(x, y)).collect()).unwrap()
    }

    /// Candidate list by brute force: all lattice offsets with a nonzero
    /// cross product against `d` and projection in `[0, |d|^2)`, ordered by
    /// `(|cross|, sign, projection)`.
    fn brute_candidates(d: (i64, i64), limit: usize) -> Vec<(i64, i64)> {
        let g = (d.0.unsigned_abs()).gcd(&d.1.unsigned_abs()) as i64;
        let n2 = d.0 * d.0 + d.1 * d.1;
        let r = (d.0.abs() + d.1.abs()) * 4 + 8;
        let mut out = Vec::new();
        for x in -r..=r {
            for y in -r..=r {
                let c = d.0 * y - d.1 * x;
                let proj = x * d.0 + y * d.1;
                if c != 0 && (0..n2).contains(&proj) {
                    assert_eq!(c % g, 0);
                    out.push(((c.abs() / g, (c < 0) as i64, proj), (x, y)));
                }
            }
        }
        out.sort();
        out.into_iter().map(|(_, v)| v).take(limit).collect()
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for d in [(3i64, 0i64), (6, 4), (-2, 5), (0, -4), (7, -7), (1, 1), (-5, -3)] {
            let p = GridPoint::new(50, 50);
            let q = GridPoint::new((50 + d.0) as u32, (50 + d.1) as u32);
            let lat = Lattice::new(p, q);
            let g = lat.g as usize;
            for (idx, v) in brute_candidates(d, 6 * g).into_iter().enumerate() {
                assert_eq!(lat.offset_at(idx as u64), (v.0 as i128, v.1 as i128), "d={d:?} idx={idx}");
                assert_eq!(lat.index_of((v.0 as i128, v.1 as i128)), Some(idx as u64));
            }
        }
    }

    #[test]
    fn hand_example_k4() {
        let a = arr(4, &[(0, 0), (3, 0), (1, 1)]);
        let geo = small_triangle_geometry(&a, (0, 1, 2)).unwrap();
        assert_eq!((geo.p, geo.q, geo.r), (GridPoint::new(0, 0), GridPoint::new(3, 0), GridPoint::new(1, 1)));
        assert_eq!((geo.g, geo.t, geo.f), (3, 3, 1));
        // candidates (0,1), (1,1), (2,1), (0,-1), ...: R is index 1
        let lat = Lattice::new(geo.p, geo.q);
        assert_eq!(lat.index_of((1, 1)), Some(1));
        let w = encode_small_triangle_witness(&a, (0, 1, 2)).unwrap();
        assert_eq!(w.witness_length, 7 + encoded_len(1));
        assert_eq!(decode_witness(WitnessKind::SmallTriangle, &w.payload, 4, 3).unwrap(), a);
    }

    fn encoded_len(m: u64) -> u64 {
        crate::codecs::encoded_nat_len(m) as u64
    }

    #[test]
    fn geometry_invariants() {
        let a = arr(64, &[(1, 2), (40, 27), (13, 60), (9, 9)]);
        for t in [(0, 1, 2), (0, 2, 3), (1, 2, 3), (0, 1, 3)] {
            let geo = small_triangle_geometry(&a, t).unwrap();
            assert_eq!(geo.f * geo.g, geo.t);
            assert_eq!(geo.g, crate::geom::lattice_points_half_open(geo.p, geo.q).unwrap());
            let (dx, dy) = (geo.q.x as i64 - geo.p.x as i64, geo.q.y as i64 - geo.p.y as i64);
            let (rx, ry) = (geo.r.x as i64 - geo.p.x as i64, geo.r.y as i64 - geo.p.y as i64);
            assert_eq!((dy * rx - dx * ry).unsigned_abs(), geo.t);
        }
        let c = arr(8, &[(0, 0), (1, 1), (2, 2)]);
        assert!(matches!(small_triangle_geometry(&c, (0, 1, 2)), Err(Error::Precondition(_))));
        assert!(small_triangle_geometry(&c, (0, 0, 2)).is_err());
    }

    #[test]
    fn planted_unit_triangle_large_grid() {
        let k = 1u64 << 20;
        let a = arr(k, &[(1000, 1000), (1001, 1000), (1000, 1001), (5, 900_000), (600_000, 3), (777_777, 555_555), (42, 42), (1_000_000, 1_000_000)]);
        let i = a.index_of(GridPoint::new(1000, 1000)).unwrap();
        let j = a.index_of(GridPoint::new(1001, 1000)).unwrap();
        let l = a.index_of(GridPoint::new(1000, 1001)).unwrap();
        let w = encode_small_triangle_witness(&a, (i, j, l)).unwrap();
        // PQ is the hypotenuse (1000,1001)-(1001,1000), R sits on the negative
        // side at k = 1, so its index is 1 and costs 4 bits
        let expect = baseline_length(k, 8).unwrap() as i64
            - ceil_log2(&binomial(k * k, 7)) as i64
            - ceil_log2(&binomial(7, 2)) as i64
            - encoded_len(1) as i64;
        assert_eq!(w.savings, expect);
        assert_eq!(w.savings, 28);
        assert_eq!(decode_witness(WitnessKind::SmallTriangle, &w.payload, k, 8).unwrap(), a);
    }

    #[test]
    fn large_triangle_does_not_compress() {
        let k = 1u64 << 20;
        let a = arr(k, &[(0, 0), (k as u32 - 1, 0), (0, k as u32 - 1), (5, 900_000), (600_000, 3)]);
        let ix = |x: u32, y: u32| a.index_of(GridPoint::new(x, y)).unwrap();
        let top = k as u32 - 1;
        let w = encode_small_triangle_witness(&a, (ix(0, 0), ix(top, 0), ix(0, top))).unwrap();
        assert!(w.savings < 0);
        assert_eq!(decode_witness(WitnessKind::SmallTriangle, &w.payload, k, 5).unwrap(), a);
    }

    #[test]
    fn non_canonical_payload_rejected() {
        // acute triangle: R projects inside every side, but only the longest
        // side (0,0)-(4,0) is canonical
        let a = arr(8, &[(0, 0), (2, 3), (4, 0)]);
        let sub = a.without(2);
        let idx = Lattice::new(GridPoint::new(0, 0), GridPoint::new(2, 3)).index_of((4, 0)).unwrap();
        let mut rival = BitString::new();
        push_arrangement(&mut rival, &sub);
        push_pair(&mut rival, 0, 1, 2);
        rival.extend(&encode_nat(idx));
        let w = encode_small_triangle_witness(&a, (0, 1, 2)).unwrap();
        assert_ne!(rival, w.payload);
        assert!(matches!(
            decode_witness(WitnessKind::SmallTriangle, &rival, 8, 3),
            Err(Error::Decode { .. })
        ));
    }

    fn arb_arrangement() -> impl Strategy<Value = GridArrangement> {
        (prop_oneof![Just(8u64), Just(64), Just(1 << 12), Just(1 << 30)], 3usize..10)
            .prop_flat_map(|(k, n)| {
                proptest::collection::btree_set((0..k as u32, 0..k as u32), n..=n)
                    .prop_map(move |s| arr(k, &s.into_iter().collect::<Vec<_>>()))
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn round_trip_and_length_bound(a in arb_arrangement(), pick in any::<[usize; 3]>()) {
            let n = a.n();
            let mut t = [pick[0] % n, pick[1] % n, pick[2] % n];
            t.sort_unstable();
            prop_assume!(t[0] != t[1] && t[1] != t[2]);
            let triple = (t[0], t[1], t[2]);
            match small_triangle_geometry(&a, triple) {
                Ok(geo) => {
                    let w = encode_small_triangle_witness(&a, triple).unwrap();
                    let back = decode_witness(WitnessKind::SmallTriangle, &w.payload, a.k(), n).unwrap();
                    prop_assert_eq!(&back, &a);
                    let bound = small_triangle_length_bound(a.k(), n, geo.t).unwrap();
                    prop_assert!((w.witness_length as i64) <= bound);
                    for cut in [0, w.payload.len() / 2, w.payload.len() - 1] {
                        prop_assert!(decode_witness(WitnessKind::SmallTriangle, &w.payload.truncated(cut), a.k(), n).is_err());
                    }
                }
                Err(e) => prop_assert!(matches!(e, Error::Precondition(_))),
            }
        }
    }
}
