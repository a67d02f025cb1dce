//! Thread-pool backed versions of the embarrassingly parallel kernels.
//!
//! Results are identical to the sequential core functions; only the order of
//! evaluation changes.

use std::ops::Range;

use piecewise_attractor::analysis::{
    check_separation_input, merge_separations, min_separation, min_separation_rows, Separation,
};
use piecewise_attractor::carrier::{scan_grid, scan_point, DetectionSettings, ScanPoint};
use piecewise_attractor::Trajectory;
use rayon::prelude::*;

use crate::error::{CliError, Result};

pub const THREADS_ENV: &str = "PIECEWISE_ATTRACTOR_THREADS";

/// Worker cap from the environment; `0` or unset means one per core.
pub fn thread_count_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::config(format!("{THREADS_ENV}={v:?} is not a thread count"))),
    }
}

pub fn build_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::config(format!("thread pool: {e}")))
}

/// Grid points are evaluated concurrently and returned in grid order.
pub fn bifurcation_scan(
    lambda_min: f64,
    lambda_max: f64,
    steps: usize,
    x0: f64,
    settings: &DetectionSettings,
) -> Result<Vec<ScanPoint>> {
    let grid = scan_grid(lambda_min, lambda_max, steps).map_err(CliError::InvalidParameter)?;
    Ok(grid
        .into_par_iter()
        .map(|lambda| scan_point(lambda, x0, settings))
        .collect::<piecewise_attractor::Result<Vec<_>>>()?)
}

fn row_blocks(len: usize) -> Vec<Range<usize>> {
    // Early rows carry more pairs; small blocks keep the load even.
    const BLOCK: usize = 64;
    (0..len)
        .step_by(BLOCK)
        .map(|s| s..(s + BLOCK).min(len))
        .collect()
}

/// Same answer as the core `min_separation`, with the pair space split by
/// row blocks.
pub fn par_min_separation(traj: &Trajectory, exclusion: usize) -> Result<Separation> {
    let points = traj.points();
    if points.len() <= 512 {
        return Ok(min_separation(traj, exclusion)?);
    }
    check_separation_input(points.len(), exclusion)?;
    row_blocks(points.len())
        .into_par_iter()
        .map(|rows| min_separation_rows(points, exclusion, rows))
        .reduce(|| None, merge_separations)
        .ok_or_else(|| CliError::config("no admissible sample pairs"))
}
