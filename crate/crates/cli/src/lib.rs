//! Command-line front end for the `heilbronn` library.
//!
//! [`run`] parses arguments, dispatches to one subcommand and writes either
//! a JSON envelope, CSV rows or a text file (points, grid or witness) to
//! `out`. Exit codes: 0 on success, 1 on usage errors, 2 on data errors.

pub mod io;
mod commands;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use output::{Envelope, SCHEMA_VERSION};

/// Environment variable holding the default worker count.
pub const JOBS_ENV: &str = "HEILBRONN_JOBS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl From<heilbronn::Error> for CliError {
    fn from(e: heilbronn::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "heilbronn", version, about = "Minimum-area triangles, grid witnesses and Monte Carlo scaling")]
pub struct Cli {
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, env = JOBS_ENV, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Collinear,
    Rowline,
    SmallTriangle,
    Theorem2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum WitnessAction {
    Encode,
    Decode,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smallest triangle of a point-set or grid file.
    MinTriangle {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
    },
    /// Uniform random points in the unit square, or a random grid arrangement.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        /// Sample a grid arrangement of this side instead.
        #[arg(long)]
        grid: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the mean least area for several n and fit the exponent.
    Scan {
        /// Comma-separated point counts.
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long)]
        seed: u64,
        /// Trials per n; defaults to max(500, 160000 / n).
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Empirical probability that the least area is below a threshold.
    Tail {
        #[arg(long)]
        n: usize,
        /// Threshold; exactly one of --t and --quantile.
        #[arg(long, conflicts_with = "quantile")]
        t: Option<f64>,
        /// Take the threshold as this quantile of a pilot run.
        #[arg(long)]
        quantile: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        pilot_trials: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// The parabola construction on a prime grid.
    ConstructErdos {
        #[arg(long)]
        p: u64,
        /// Also write the arrangement as a grid file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for n points with a large least triangle.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 50_000)]
        steps: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lexicographic index of a grid arrangement.
    Rank {
        #[arg(long)]
        grid: PathBuf,
    },
    /// Grid arrangement at a lexicographic index.
    Unrank {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: usize,
        /// Decimal index.
        #[arg(long)]
        index: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a grid into a witness file, or decode one back.
    Witness {
        #[arg(value_enum)]
        kind: Kind,
        #[command(subcommand)]
        action: WitnessAction,
        #[command(flatten)]
        io: WitnessIo,
    },
    /// Frequency of collinear triples and shared rows on random grids.
    StatsDegenerate {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Least area of a point set and its percentile among random sets.
    Analyze {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        baseline_trials: usize,
    },
}

#[derive(Debug, Args)]
pub struct WitnessIo {
    /// Grid file to encode.
    #[arg(long, global = true)]
    pub grid: Option<PathBuf>,
    /// Witness file to decode.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
    /// Small-triangle vertices as `i,j,k`; defaults to a least triangle.
    #[arg(long, global = true, value_delimiter = ',')]
    pub triple: Option<Vec<usize>>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Runs one command line. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start {} workers: {e}", cli.jobs);
            return 2;
        }
    };
    let mut buf = Vec::new();
    let res = pool.install(|| commands::dispatch(&cli.command, &mut buf));
    if let Err(e) = out.write_all(&buf) {
        let _ = writeln!(err, "error: write failed: {e}");
        return 2;
    }
    match res {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let CliError::Usage(_) = e {
                use clap::CommandFactory;
                let _ = writeln!(err, "{}", Cli::command().render_usage());
            }
            e.exit_code()
        }
    }
}
