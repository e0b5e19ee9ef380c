//! Frequency of collinear triples and shared rows in random arrangements.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::sample_grid_arrangement;
use crate::error::{Error, Result};
use crate::witnesses::{find_collinear_triple, find_shared_row};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegenerateStats {
    pub k: u64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Fraction of arrangements containing three collinear pebbles.
    pub collinear: f64,
    /// Fraction of arrangements with two pebbles on one row.
    pub shared_row: f64,
}

pub fn degenerate_structure_stats(k: u64, n: usize, trials: usize, seed: u64) -> Result<DegenerateStats> {
    if trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    let flags = (0..trials)
        .into_par_iter()
        .map(|i| {
            let a = sample_grid_arrangement(k, n, seed, i as u64)?;
            Ok((find_collinear_triple(&a).is_some(), find_shared_row(&a).is_some()))
        })
        .collect::<Result<Vec<_>>>()?;
    let frac = |f: fn(&(bool, bool)) -> bool| flags.iter().filter(|x| f(x)).count() as f64 / trials as f64;
    Ok(DegenerateStats {
        k,
        n,
        trials,
        seed,
        collinear: frac(|x| x.0),
        shared_row: frac(|x| x.1),
    })
}
