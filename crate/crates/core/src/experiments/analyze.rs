//! Scoring a given point set against random point sets of the same size.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::montecarlo::sample_min_areas;
use crate::error::Result;
use crate::geom::{min_area_triangle, PointSet, SearchMode};

/// Sorted least areas of random point sets, per `n`, for one seed and trial
/// count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineCache {
    pub seed: u64,
    pub trials: usize,
    areas: HashMap<usize, Vec<f64>>,
}

impl BaselineCache {
    pub fn new(seed: u64, trials: usize) -> Self {
        BaselineCache {
            seed,
            trials,
            areas: HashMap::new(),
        }
    }

    pub fn baseline(&mut self, n: usize) -> Result<&[f64]> {
        if !self.areas.contains_key(&n) {
            let mut v = sample_min_areas(n, self.trials, self.seed, SearchMode::Fast)?;
            v.sort_by(f64::total_cmp);
            self.areas.insert(n, v);
        }
        Ok(&self.areas[&n])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub area: f64,
    /// `A n^3`.
    pub scaled: f64,
    /// Fraction of baseline sets whose least area is below `area`.
    pub percentile: f64,
    pub baseline_seed: u64,
    pub baseline_trials: usize,
}

pub fn analyze_pointset(points: &PointSet, cache: &mut BaselineCache) -> Result<AnalysisReport> {
    let r = min_area_triangle(points, SearchMode::Fast)?;
    let n = points.len();
    let base = cache.baseline(n)?;
    let below = base.partition_point(|&a| a < r.area);
    Ok(AnalysisReport {
        n,
        area: r.area,
        scaled: r.area * (n as f64).powi(3),
        percentile: below as f64 / base.len() as f64,
        baseline_seed: cache.seed,
        baseline_trials: cache.trials,
    })
}
