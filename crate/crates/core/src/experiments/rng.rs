//! Seeded, platform-independent random streams.
//!
//! A master seed is expanded into a 256-bit ChaCha8 key with SplitMix64; the
//! stream id selects one of ChaCha's 2^64 independent streams. Trial `i` of
//! any experiment draws from stream `i`, so trials can run in any order on
//! any number of workers.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geom::{check_grid_side, GridArrangement, GridPoint, PointSet, UnitPoint};

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut s = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut s).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

/// Independent seed for a sub-experiment labelled `tag`.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut s = seed ^ tag.wrapping_mul(0xd605_bbb5_8c8a_be5d);
    splitmix64(&mut s)
}

/// Uniform in `[0, 1)` with 53 random bits.
pub fn uniform01<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn sample_unit_square(n: usize, seed: u64, stream: u64) -> PointSet {
    let mut rng = stream_rng(seed, stream);
    let points = (0..n)
        .map(|_| {
            let x = uniform01(&mut rng);
            let y = uniform01(&mut rng);
            UnitPoint { x, y }
        })
        .collect();
    PointSet::new(points)
}

/// Uniform over all `C(K^2, n)` arrangements, by rejection of repeated cells.
pub fn sample_grid_arrangement(k: u64, n: usize, seed: u64, stream: u64) -> Result<GridArrangement> {
    check_grid_side(k)?;
    let cells = k * k;
    if n as u64 > cells {
        return Err(Error::OutOfRange(format!("n = {n} exceeds K^2 = {cells}")));
    }
    let mut rng = stream_rng(seed, stream);
    let mut seen = HashSet::with_capacity(n);
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let c = rng.random_range(0..cells);
        if seen.insert(c) {
            pts.push(GridPoint::from_cell_id(c, k));
        }
    }
    GridArrangement::new(k, pts)
}
