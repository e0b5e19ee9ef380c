//! Exact binomials and lexicographic ranking of k-subsets.
//!
//! Subsets of `{0, .., N-1}` are ranked in lexicographic order of their
//! sorted element lists. The rank is computed through the colexicographic
//! rank of the reflected set `{N-1-c}`:
//! `lex(C) = C(N, k) - 1 - sum_i C(N-1-c_i, k-i)`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geom::{check_grid_side, GridArrangement};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `ceil(log2 m)`, with `ceil(log2 0) = ceil(log2 1) = 0`.
pub fn ceil_log2(m: &BigUint) -> u64 {
    if *m <= BigUint::one() {
        0
    } else {
        (m - 1u32).bits()
    }
}

pub fn ceil_log2_u64(m: u64) -> u64 {
    if m <= 1 {
        0
    } else {
        64 - (m - 1).leading_zeros() as u64
    }
}

/// Lexicographic rank of a strictly increasing `subset` of `{0, .., universe-1}`.
pub fn rank_subset(universe: u64, subset: &[u64]) -> Result<BigUint> {
    let k = subset.len() as u64;
    if k > universe {
        return Err(Error::OutOfRange(format!("subset of size {k} in universe {universe}")));
    }
    for w in subset.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Precondition("subset must be strictly increasing".into()));
        }
    }
    if let Some(&last) = subset.last() {
        if last >= universe {
            return Err(Error::OutOfRange(format!("element {last} >= universe {universe}")));
        }
    }
    let mut colex = BigUint::zero();
    for (i, &c) in subset.iter().enumerate() {
        colex += binomial(universe - 1 - c, k - i as u64);
    }
    Ok(binomial(universe, k) - 1u32 - colex)
}

/// Inverse of [`rank_subset`].
pub fn unrank_subset(universe: u64, k: usize, rank: &BigUint) -> Result<Vec<u64>> {
    let total = binomial(universe, k as u64);
    if *rank >= total {
        return Err(Error::OutOfRange(format!(
            "rank {rank} outside [0, C({universe}, {k}) = {total})"
        )));
    }
    let mut s = total - 1u32 - rank;
    let mut out = Vec::with_capacity(k);
    // reflected elements come out in decreasing order
    let mut upper = universe;
    for j in (1..=k as u64).rev() {
        let (d, c) = largest_with_binomial_at_most(&s, j, upper);
        s -= c;
        out.push(universe - 1 - d);
        upper = d;
    }
    debug_assert!(s.is_zero());
    Ok(out)
}

fn ln_binomial(d: u64, j: u64) -> f64 {
    if j > d {
        return f64::NEG_INFINITY;
    }
    let j = j.min(d - j);
    (0..j).map(|i| ((d - i) as f64 / (i + 1) as f64).ln()).sum()
}

/// Largest `d < upper` with `C(d, j) <= s`, together with `C(d, j)`.
fn largest_with_binomial_at_most(s: &BigUint, j: u64, upper: u64) -> (u64, BigUint) {
    // float-guided guess, then an exact galloping search around it
    let target = biguint_ln(s);
    let (mut lo, mut hi) = (j - 1, upper - 1);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if ln_binomial(mid, j) <= target {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    // C(j-1, j) = 0 always fits; `upper` acts as a sentinel that never does
    let fits = |d: u64| d < upper && (d < j || binomial(d, j) <= *s);
    let guess = lo;
    let (mut lo, mut hi);
    if fits(guess) {
        lo = guess;
        let mut step = 1u64;
        loop {
            let h = lo.saturating_add(step).min(upper);
            if !fits(h) {
                hi = h;
                break;
            }
            lo = h;
            step *= 2;
        }
    } else {
        hi = guess;
        let mut step = 1u64;
        loop {
            let l = hi.saturating_sub(step).max(j - 1);
            if fits(l) {
                lo = l;
                break;
            }
            hi = l;
            step *= 2;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, binomial(lo, j))
}

fn biguint_ln(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Position of an arrangement in the lexicographic list of all `C(K^2, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementIndex {
    pub value: BigUint,
    pub domain_size: BigUint,
}

pub fn rank_arrangement(a: &GridArrangement) -> ArrangementIndex {
    let universe = a.k() * a.k();
    let value = rank_subset(universe, &a.cells()).expect("valid arrangement");
    ArrangementIndex {
        value,
        domain_size: binomial(universe, a.n() as u64),
    }
}

pub fn unrank_arrangement(idx: &BigUint, k: u64, n: usize) -> Result<GridArrangement> {
    check_grid_side(k)?;
    let cells = unrank_subset(k * k, n, idx)?;
    GridArrangement::from_cells(k, &cells)
}

/// `ceil(log2 C(K^2, n))`: bits needed to index any arrangement.
pub fn baseline_length(k: u64, n: usize) -> Result<u64> {
    check_grid_side(k)?;
    if n as u64 > k * k {
        return Err(Error::OutOfRange(format!("n = {n} exceeds K^2 = {}", k * k)));
    }
    Ok(ceil_log2(&binomial(k * k, n as u64)))
}

/// Checks the counting bound for one encoder over a domain of size `m`:
/// for every `delta >= 0`, at most `m / 2^delta` elements save `delta` bits or
/// more. Returns the first violating `(delta, count)`.
pub fn counting_bound_violation(savings: &[i64], m: &BigUint) -> Option<(u64, usize)> {
    let max = savings.iter().copied().max().unwrap_or(0).max(0) as u64;
    (0..=max + 1).find_map(|delta| {
        let count = savings.iter().filter(|&&s| s >= delta as i64).count();
        (BigUint::from(count) << delta > *m).then_some((delta, count))
    })
}
