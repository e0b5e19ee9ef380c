use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// Version of the JSON envelope; matches `schemas/output-v1.schema.json`.
pub const SCHEMA_VERSION: &str = "1";

/// The JSON record every command prints.
#[derive(Debug, Serialize)]
pub struct Envelope {
    pub command: &'static str,
    pub version: &'static str,
    /// Master seed of randomized commands, `null` otherwise.
    pub seed: Option<u64>,
    pub params: Value,
    pub results: Value,
    pub timing_ms: f64,
}

pub fn emit_json(out: &mut dyn Write, env: &Envelope) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(env).map_err(|e| CliError::Data(e.to_string()))?;
    writeln!(out, "{text}").map_err(io_err)
}

pub fn emit_text(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(io_err)
}

pub fn io_err(e: std::io::Error) -> CliError {
    CliError::Data(format!("write failed: {e}"))
}

pub const CSV_HEADER: &str = "n,trials,mean,stderr,lo95,hi95,seed";

pub fn csv_row(e: &heilbronn::experiments::MuEstimate) -> String {
    format!(
        "{},{},{:?},{:?},{:?},{:?},{}",
        e.n, e.trials, e.mean, e.stderr, e.ci95.0, e.ci95.1, e.seed
    )
}
