//! Executes one validated [`RunConfig`] and writes its artifacts.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use piecewise_attractor::carrier::{detect_period, iterate_carrier};
use piecewise_attractor::piecewise::assemble_trajectory;
use piecewise_attractor::rossler::{extract_x_maxima, first_return_map, integrate};
use serde::Serialize;

use crate::config::{Format, Mode, RunConfig};
use crate::csv_io;
use crate::error::{CliError, Result};
use crate::parallel;
use crate::report::compare;
use crate::svg::render_projection;

/// Where the primary artifact goes.
enum Sink<'a> {
    File(&'a Path),
    Stdout,
}

impl Sink<'_> {
    fn write(&self, bytes: &[u8]) -> Result<()> {
        match self {
            Sink::File(path) => std::fs::write(path, bytes).map_err(|e| CliError::io(*path, e)),
            Sink::Stdout => {
                let mut out = io::stdout().lock();
                out.write_all(bytes)
                    .and_then(|_| out.flush())
                    .map_err(|e| CliError::io("<stdout>", e))
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            Sink::File(path) => path.display().to_string(),
            Sink::Stdout => "stdout".to_owned(),
        }
    }
}

/// `out/run.csv` + `maxima` → `out/run_maxima.csv`.
pub fn sibling_path(path: &Path, suffix: &str, extension: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}_{suffix}.{extension}"))
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_bytes<F>(write: F) -> Result<Vec<u8>>
where
    F: FnOnce(&mut Vec<u8>) -> csv::Result<()>,
{
    let mut buf = Vec::new();
    write(&mut buf).map_err(|source| CliError::Csv {
        path: PathBuf::from("<memory>"),
        source,
    })?;
    Ok(buf)
}

/// Runs the configured mode and returns a one-line summary.
pub fn run(config: &RunConfig) -> Result<String> {
    config.validate()?;
    let sink = match &config.output.path {
        Some(path) => Sink::File(path),
        None => Sink::Stdout,
    };
    let format = config.output.format;

    match config.mode {
        Mode::Synthesize => {
            let seq = iterate_carrier(&config.carrier)?;
            let traj = assemble_trajectory(&seq.radii, &config.shape)?;
            let bytes = match format {
                Format::Csv => csv_bytes(|b| csv_io::write_trajectory(&traj, b))?,
                Format::Json => json(&traj)?,
                Format::Svg => render_projection(&traj, config.output.plane)?.into_bytes(),
            };
            sink.write(&bytes)?;
            Ok(format!(
                "synthesized {} points from {} pieces at lambda {} -> {}",
                traj.len(),
                seq.radii.len(),
                config.carrier.lambda,
                sink.describe()
            ))
        }
        Mode::Rossler => {
            let traj = integrate(&config.rossler)?;
            let maxima = extract_x_maxima(&traj, config.rossler.transient);
            let map = first_return_map(&maxima)?;
            match format {
                Format::Csv => {
                    sink.write(&csv_bytes(|b| csv_io::write_trajectory(&traj, b))?)?;
                    if let Sink::File(path) = sink {
                        csv_io::write_maxima_csv(&maxima, &sibling_path(path, "maxima", "csv"))?;
                        csv_io::write_return_map_csv(
                            &map,
                            &sibling_path(path, "return_map", "csv"),
                        )?;
                    }
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Output<'a> {
                        trajectory: &'a piecewise_attractor::Trajectory,
                        maxima: &'a [piecewise_attractor::rossler::Maximum],
                        return_map: &'a [(f64, f64)],
                    }
                    sink.write(&json(&Output {
                        trajectory: &traj,
                        maxima: &maxima,
                        return_map: &map.pairs,
                    })?)?;
                }
                Format::Svg => {
                    sink.write(render_projection(&traj, config.output.plane)?.as_bytes())?
                }
            }
            Ok(format!(
                "integrated {} steps at c {}, {} maxima after t = {} -> {}",
                traj.len(),
                config.rossler.c,
                maxima.len(),
                config.rossler.transient,
                sink.describe()
            ))
        }
        Mode::Carrier => {
            let seq = iterate_carrier(&config.carrier)?;
            let period =
                detect_period(config.carrier.lambda, config.carrier.x0, &config.detection)?;
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Output<'a> {
                        sequence: &'a piecewise_attractor::carrier::CarrierSequence,
                        period: &'a piecewise_attractor::carrier::PeriodResult,
                    }
                    sink.write(&json(&Output {
                        sequence: &seq,
                        period: &period,
                    })?)?;
                }
                _ => {
                    sink.write(&csv_bytes(|b| csv_io::write_carrier(&seq, b))?)?;
                    if let Sink::File(path) = sink {
                        let side = sibling_path(path, "period", "json");
                        std::fs::write(&side, json(&period)?)
                            .map_err(|e| CliError::io(&side, e))?;
                    }
                }
            }
            Ok(format!(
                "carrier at lambda {}: {}{} -> {}",
                config.carrier.lambda,
                period.kind_name(),
                period
                    .period()
                    .map(|p| format!(" ({p})"))
                    .unwrap_or_default(),
                sink.describe()
            ))
        }
        Mode::Bifurcation => {
            let pool = parallel::build_pool(parallel::thread_count_from_env()?)?;
            let scan = pool.install(|| {
                parallel::bifurcation_scan(
                    config.scan.lambda_min,
                    config.scan.lambda_max,
                    config.scan.steps,
                    config.carrier.x0,
                    &config.detection,
                )
            })?;
            let bytes = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Output<'a> {
                        points: &'a [piecewise_attractor::carrier::ScanPoint],
                    }
                    json(&Output { points: &scan })?
                }
                _ => csv_bytes(|b| csv_io::write_bifurcation(&scan, b))?,
            };
            sink.write(&bytes)?;
            Ok(format!(
                "scanned {} lambda values in [{}, {}] -> {}",
                scan.len(),
                config.scan.lambda_min,
                config.scan.lambda_max,
                sink.describe()
            ))
        }
        Mode::Compare => {
            let pool = parallel::build_pool(parallel::thread_count_from_env()?)?;
            let report = pool.install(|| compare(config))?;
            sink.write(&json(&report)?)?;
            Ok(format!(
                "lambda {} vs c {}: carrier {}, rossler {} levels, rank match {:?} -> {}",
                report.lambda,
                report.c,
                report
                    .carrier_period
                    .period()
                    .map(|p| p.to_string())
                    .unwrap_or_else(|| report.carrier_period.kind_name().to_owned()),
                report.rossler_period,
                report.rank_match,
                sink.describe()
            ))
        }
    }
}
