//! Compression witnesses.
//!
//! Each codec compresses exactly the arrangements that carry one specific
//! structure (a collinear triple, two pebbles on a row, a small triangle, a
//! lower half squeezed by forbidding lines) and decodes back to the original
//! arrangement given only `(K, n)`. The savings against
//! [`baseline_length`](crate::codecs::baseline_length) is a computable lower
//! bound on how far the arrangement is from incompressible.
//!
//! Payloads are canonical: [`decode_witness`] re-encodes what it decoded and
//! rejects any payload the encoder would not have produced.

mod collinear;
mod forbidding;
mod rowline;
mod small_triangle;
mod theorem2;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use collinear::{encode_collinear_witness, find_collinear_triple};
pub use forbidding::{
    dividing_row, excluded_columns, forbidding_lines, intercept_spacings, ColumnSet,
    ForbiddingLine, ForbiddingLineSet, InterceptWindow, SextupletWindow, LINE_COUNT_CONSTANT,
};
pub use rowline::{encode_rowline_witness, find_shared_row};
pub use small_triangle::{
    encode_small_triangle_witness, small_triangle_geometry, small_triangle_length_bound,
    SmallTriangleGeometry,
    SMALL_TRIANGLE_OVERHEAD_BITS,
};
pub use theorem2::encode_theorem2;

use crate::codecs::{baseline_length, binomial, ceil_log2, rank_subset, unrank_subset};
use crate::codecs::{BitReader, BitString};
use crate::codecs::{rank_arrangement, unrank_arrangement};
use crate::error::{Error, Result};
use crate::geom::GridArrangement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Collinear,
    Rowline,
    SmallTriangle,
    Theorem2,
}

impl WitnessKind {
    pub const ALL: [WitnessKind; 4] = [
        WitnessKind::Collinear,
        WitnessKind::Rowline,
        WitnessKind::SmallTriangle,
        WitnessKind::Theorem2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WitnessKind::Collinear => "collinear",
            WitnessKind::Rowline => "rowline",
            WitnessKind::SmallTriangle => "small_triangle",
            WitnessKind::Theorem2 => "theorem2",
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WitnessKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::OutOfRange(format!("unknown witness kind '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub kind: WitnessKind,
    pub payload: BitString,
    pub witness_length: u64,
    pub baseline_length: u64,
    /// `baseline_length - witness_length`; negative when nothing is saved.
    pub savings: i64,
}

impl WitnessReport {
    fn new(kind: WitnessKind, payload: BitString, k: u64, n: usize) -> Result<Self> {
        let baseline = baseline_length(k, n)?;
        let len = payload.len() as u64;
        Ok(WitnessReport {
            kind,
            payload,
            witness_length: len,
            baseline_length: baseline,
            savings: baseline as i64 - len as i64,
        })
    }
}

/// Reconstructs the arrangement from a payload and `(kind, K, n)`.
pub fn decode_witness(kind: WitnessKind, payload: &BitString, k: u64, n: usize) -> Result<GridArrangement> {
    let mut r = BitReader::new(payload);
    let (a, reencoded) = match kind {
        WitnessKind::Collinear => {
            let a = collinear::decode(&mut r, k, n)?;
            r.finish()?;
            let e = encode_collinear_witness(&a)?;
            (a, e)
        }
        WitnessKind::Rowline => {
            let a = rowline::decode(&mut r, k, n)?;
            r.finish()?;
            let e = encode_rowline_witness(&a)?;
            (a, e)
        }
        WitnessKind::SmallTriangle => {
            let (a, triple) = small_triangle::decode(&mut r, k, n)?;
            r.finish()?;
            let e = encode_small_triangle_witness(&a, triple)?;
            (a, e)
        }
        WitnessKind::Theorem2 => {
            let a = theorem2::decode(&mut r, k, n)?;
            r.finish()?;
            let e = encode_theorem2(&a)?;
            (a, e)
        }
    };
    if reencoded.payload != *payload {
        return Err(Error::decode(0, "payload is not in canonical form"));
    }
    Ok(a)
}

/// `A(delta) = (14 delta + slack) / (4 C1 n^3 log2 e)`, the upper bound on
/// the least triangle area at deficiency `delta`.
pub fn upper_bound_formula(delta: f64, n: f64, c1: f64, slack: f64) -> f64 {
    (14.0 * delta + slack) / (4.0 * c1 * n.powi(3) * std::f64::consts::LOG2_E)
}

/// On-disk form of a witness: a header line and the hex payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessFile {
    pub kind: WitnessKind,
    pub k: u64,
    pub n: usize,
    pub payload: BitString,
}

impl WitnessFile {
    pub fn render(&self) -> String {
        format!("HW1 {} K={} n={}\n{}\n", self.kind, self.k, self.n, self.payload.to_hex())
    }

    pub fn parse(text: &str) -> Result<WitnessFile> {
        let bad = |line: usize, m: &str| Error::OutOfRange(format!("witness file line {line}: {m}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad(1, "missing header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "HW1" {
            return Err(bad(1, "expected 'HW1 <kind> K=<K> n=<n>'"));
        }
        let kind: WitnessKind = parts[1].parse()?;
        let k = parts[2]
            .strip_prefix("K=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad(1, "bad K field"))?;
        let n = parts[3]
            .strip_prefix("n=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad(1, "bad n field"))?;
        let body = lines.next().ok_or_else(|| bad(2, "missing payload"))?;
        let payload = BitString::from_hex(body).map_err(|e| bad(2, &e.to_string()))?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(bad(3, "unexpected trailing content"));
        }
        Ok(WitnessFile { kind, k, n, payload })
    }
}

// Shared fields --------------------------------------------------------------

/// Appends the rank of `sub` at the fixed width for `C(K^2, sub.n())`.
fn push_arrangement(out: &mut BitString, sub: &GridArrangement) {
    let idx = rank_arrangement(sub);
    out.push_biguint(&idx.value, ceil_log2(&idx.domain_size) as usize);
}

fn read_arrangement(r: &mut BitReader<'_>, k: u64, n: usize) -> Result<GridArrangement> {
    let pos = r.position();
    let width = ceil_log2(&binomial(k * k, n as u64)) as usize;
    let v = r.read_biguint(width)?;
    unrank_arrangement(&v, k, n).map_err(|e| Error::decode(pos, e.to_string()))
}

fn pair_width(m: usize) -> usize {
    ceil_log2(&binomial(m as u64, 2)) as usize
}

/// Lexicographic index of `{a, b}` (a < b) among the 2-subsets of `0..m`.
fn push_pair(out: &mut BitString, a: usize, b: usize, m: usize) {
    let idx = rank_subset(m as u64, &[a as u64, b as u64]).expect("valid pair");
    out.push_biguint(&idx, pair_width(m));
}

fn read_pair(r: &mut BitReader<'_>, m: usize) -> Result<(usize, usize)> {
    let pos = r.position();
    let v = r.read_biguint(pair_width(m))?;
    let p = unrank_subset(m as u64, 2, &v).map_err(|e| Error::decode(pos, e.to_string()))?;
    Ok((p[0] as usize, p[1] as usize))
}

fn check_n(k: u64, n: usize, min: usize) -> Result<()> {
    crate::geom::check_grid_side(k)?;
    if n < min {
        return Err(Error::TooFewPoints { needed: min, got: n });
    }
    if n as u64 > k * k {
        return Err(Error::OutOfRange(format!("n = {n} exceeds K^2")));
    }
    Ok(())
}
