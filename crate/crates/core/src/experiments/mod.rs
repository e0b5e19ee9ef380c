//! Seeded Monte Carlo experiments on random point sets and arrangements.
//!
//! Every result is a pure function of its parameters and seed. Trials run
//! on the current rayon pool, are collected in trial order and summed with
//! compensation, so the worker count never changes a single bit.

mod analyze;
mod degenerate;
mod montecarlo;
mod rng;
mod stats;

pub use analyze::{analyze_pointset, AnalysisReport, BaselineCache};
pub use degenerate::{degenerate_structure_stats, DegenerateStats};
pub use montecarlo::{
    default_trials, estimate_mu, estimate_mu_with, fit_exponent, sample_min_areas,
    sample_min_areas_with, scan, tail_probability, MuEstimate, ScalingFit, ScanResult,
    TailEstimate,
};
pub use rng::{derive_seed, sample_grid_arrangement, sample_unit_square, stream_rng, uniform01};
pub use stats::{compensated_sum, ks_two_sample, ks_uniform, mean_sd, quantile};
