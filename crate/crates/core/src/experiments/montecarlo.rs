//! Monte Carlo estimates of the expected least triangle area.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::{derive_seed, sample_unit_square};
use super::stats::{compensated_sum, mean_sd};
use crate::error::{Error, Result};
use crate::geom::{min_area_triangle, PointSet, SearchMode};

/// `max(500, floor(160000 / n))`.
pub fn default_trials(n: usize) -> usize {
    (160_000 / n.max(1)).max(500)
}

/// Least triangle area of each trial, in trial order. Trial `i` draws from
/// stream `i` of `seed`.
pub fn sample_min_areas(n: usize, trials: usize, seed: u64, mode: SearchMode) -> Result<Vec<f64>> {
    sample_min_areas_with(n, trials, mode, |i| sample_unit_square(n, seed, i as u64))
}

/// As [`sample_min_areas`] with a caller-supplied generator of trial `i`.
pub fn sample_min_areas_with<F>(n: usize, trials: usize, mode: SearchMode, sampler: F) -> Result<Vec<f64>>
where
    F: Fn(usize) -> PointSet + Sync,
{
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    (0..trials)
        .into_par_iter()
        .map(|i| min_area_triangle(&sampler(i), mode).map(|r| r.area))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuEstimate {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
    pub seed: u64,
    /// Trials whose least area was exactly zero; left out of the mean.
    pub degenerate: usize,
}

impl MuEstimate {
    pub fn from_areas(n: usize, seed: u64, areas: &[f64]) -> Result<MuEstimate> {
        let kept: Vec<f64> = areas.iter().copied().filter(|&a| a != 0.0).collect();
        if kept.is_empty() {
            return Err(Error::Precondition("every trial was degenerate".into()));
        }
        let (mean, sd) = mean_sd(&kept);
        let stderr = sd / (kept.len() as f64).sqrt();
        Ok(MuEstimate {
            n,
            trials: areas.len(),
            mean,
            stderr,
            ci95: (mean - 1.96 * stderr, mean + 1.96 * stderr),
            seed,
            degenerate: areas.len() - kept.len(),
        })
    }
}

pub fn estimate_mu(n: usize, trials: usize, seed: u64) -> Result<MuEstimate> {
    estimate_mu_with(n, trials, seed, SearchMode::Exhaustive, |i| sample_unit_square(n, seed, i as u64))
}

/// [`estimate_mu`] with an explicit search mode and trial generator.
pub fn estimate_mu_with<F>(n: usize, trials: usize, seed: u64, mode: SearchMode, sampler: F) -> Result<MuEstimate>
where
    F: Fn(usize) -> PointSet + Sync,
{
    if trials < 2 {
        return Err(Error::Precondition(format!("need at least 2 trials, got {trials}")));
    }
    let areas = sample_min_areas_with(n, trials, mode, sampler)?;
    MuEstimate::from_areas(n, seed, &areas)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least squares line through `(log2 n, log2 mu)`.
pub fn fit_exponent(samples: &[(f64, f64)]) -> Result<ScalingFit> {
    if samples.len() < 3 {
        return Err(Error::Precondition(format!("need at least 3 samples, got {}", samples.len())));
    }
    if let Some(&(n, mu)) = samples.iter().find(|&&(n, mu)| mu.is_nan() || mu <= 0.0 || n.is_nan() || n <= 0.0) {
        return Err(Error::OutOfRange(format!("sample ({n}, {mu}) is not positive")));
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0.log2()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1.log2()).collect();
    let m = xs.len() as f64;
    let mx = compensated_sum(xs.iter().copied()) / m;
    let my = compensated_sum(ys.iter().copied()) / m;
    let sxy = compensated_sum(xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)));
    let sxx = compensated_sum(xs.iter().map(|x| (x - mx) * (x - mx)));
    let syy = compensated_sum(ys.iter().map(|y| (y - my) * (y - my)));
    if sxx == 0.0 {
        return Err(Error::Precondition("all samples share one n".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(ScalingFit {
        samples: samples.to_vec(),
        slope,
        intercept,
        r_squared,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub estimates: Vec<MuEstimate>,
    pub fit: ScalingFit,
}

/// Estimates for each `n` (trial count from `trials`, seed derived from
/// `seed` and `n`) and the fitted exponent.
pub fn scan(ns: &[usize], seed: u64, trials: impl Fn(usize) -> usize) -> Result<ScanResult> {
    let estimates = ns
        .iter()
        .map(|&n| {
            let s = derive_seed(seed, n as u64);
            let mut e = estimate_mu(n, trials(n), s)?;
            e.seed = seed;
            Ok(e)
        })
        .collect::<Result<Vec<_>>>()?;
    let samples: Vec<(f64, f64)> = estimates.iter().map(|e| (e.n as f64, e.mean)).collect();
    Ok(ScanResult {
        fit: fit_exponent(&samples)?,
        estimates,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub n: usize,
    pub threshold: f64,
    pub trials: usize,
    /// Empirical `P(A < threshold)`.
    pub fraction: f64,
    pub seed: u64,
    /// Trials whose least area was exactly zero.
    pub zero_area: usize,
}

pub fn tail_probability(n: usize, t: f64, trials: usize, seed: u64) -> Result<TailEstimate> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::OutOfRange(format!("threshold {t} must be nonnegative")));
    }
    if trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    let areas = sample_min_areas(n, trials, seed, SearchMode::Fast)?;
    Ok(TailEstimate {
        n,
        threshold: t,
        trials,
        fraction: areas.iter().filter(|&&a| a < t).count() as f64 / trials as f64,
        seed,
        zero_area: areas.iter().filter(|&&a| a == 0.0).count(),
    })
}
