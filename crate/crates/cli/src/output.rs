//! Files the CLI writes and the readers that parse them back.
//!
//! Every document is deterministic for a fixed command line and seed except
//! the `generated_at` metadata field, which holds the unix time of the run.

use anyhow::Context;
use aps_core::metrics::format_bitstring;
use aps_core::scan::SweepResult;
use aps_core::{DiagonalHamiltonian, Histogram, ProblemInstance, Schedule};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::CliError;

pub fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(CliError::Internal)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Sidecar path: `run.csv` -> `run.meta.json`, `sweep.csv` -> `sweep.peaks.json`.
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    path.with_extension(suffix)
}

/// Metadata document for one search run.
#[allow(clippy::too_many_arguments)]
pub fn run_metadata(
    instance: &ProblemInstance,
    h: &DiagonalHamiltonian,
    schedule: Schedule,
    phase_map: &str,
    target: f64,
    shots: u64,
    seed: u64,
    kld: f64,
    histogram: &Histogram,
) -> Value {
    let n = histogram.n_bits();
    let states: Vec<Value> = histogram
        .sorted_rows()
        .into_iter()
        .map(|(state, p)| {
            let cost = h.eigenvalue(state as usize);
            json!({
                "bitstring": format_bitstring(state, n),
                "probability": p,
                "cost": cost,
                "deviation": (cost - target).abs(),
            })
        })
        .collect();
    json!({
        "command": "aps",
        "instance": serde_json::to_value(instance).expect("instance serializes"),
        "n_work": n,
        "schedule": {
            "preprocessing_reps": schedule.preprocessing_reps,
            "main_reps": schedule.main_reps,
        },
        "phase_map": phase_map,
        "target": target,
        "shots": shots,
        "seed": seed,
        "kld_vs_uniform": kld,
        "generated_at": unix_now(),
        "states": states,
    })
}

/// Peaks document for a sweep: one entry per detected peak.
pub fn peaks_document(
    result: &SweepResult,
    h: &DiagonalHamiltonian,
    peaks: &[f64],
    degeneracy_tol: f64,
) -> Value {
    let entries: Vec<Value> = peaks
        .iter()
        .map(|&lambda| {
            let record = result
                .records
                .iter()
                .find(|r| (r.lambda - lambda).abs() < 1e-9)
                .expect("peak comes from the records");
            json!({
                "lambda": lambda,
                "top_state": format_bitstring(record.top_state, result.meta.n_work),
                "degeneracy": aps_core::degeneracy(h, lambda, degeneracy_tol),
            })
        })
        .collect();
    json!({
        "command": "eigen-scan",
        "generated_at": unix_now(),
        "peaks": entries,
    })
}

/// Reads back a histogram CSV written by the CLI.
pub fn read_histogram_csv(path: &Path) -> Result<Histogram, CliError> {
    let text = std::fs::read_to_string(path)?;
    Histogram::from_csv(&text).map_err(|e| CliError::usage(e.to_string()))
}

/// Reads back the records of a sweep CSV written by the CLI.
pub fn read_sweep_csv(path: &Path) -> Result<Vec<aps_core::SweepRecord>, CliError> {
    let text = std::fs::read_to_string(path)?;
    SweepResult::records_from_csv(&text).map_err(|e| CliError::usage(e.to_string()))
}

/// Reads back any JSON document the CLI wrote (run metadata, sweep, peaks).
pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(e.to_string()))
}
