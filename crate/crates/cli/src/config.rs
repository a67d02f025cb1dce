//! Run configuration from command-line flags and an optional JSON file.
//!
//! The file holds one object whose keys are the long flag names in
//! snake_case (`t_end`, `gauss_a`, ...). A value given on the command line
//! always wins over the file.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use piecewise_attractor::carrier::{CarrierConfig, DetectionSettings};
use piecewise_attractor::piecewise::ShapeParams;
use piecewise_attractor::rossler::RosslerParams;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::svg::Plane;

#[derive(Debug, Parser)]
#[command(
    name = "piecewise-attractor",
    version,
    about = "Synthesize Rössler-like trajectories in closed form and compare them with the integrated Rössler flow"
)]
pub struct Cli {
    #[command(subcommand)]
    pub mode: Mode,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Assemble the piecewise trajectory driven by the logistic carrier.
    Synthesize,
    /// Integrate the Rössler flow and build the first-return map of X maxima.
    Rossler,
    /// Iterate the carrier and classify its regime.
    Carrier,
    /// Classify the carrier regime over a λ grid.
    Bifurcation,
    /// Compare a carrier λ against a Rössler c.
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Every optional knob, shared by the command line and the config file.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct Flags {
    /// Carrier bifurcation parameter λ in [0, 4].
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Initial carrier iterate in [0, 1].
    #[arg(long, global = true)]
    pub x0: Option<f64>,
    /// Carrier iterations (pieces of the synthesized trajectory).
    #[arg(long, global = true)]
    pub niter: Option<usize>,
    /// Samples per piece.
    #[arg(long, global = true)]
    pub npoints: Option<usize>,
    /// Rössler control parameter.
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Rössler `a` coefficient.
    #[arg(long = "rossler-a", global = true)]
    pub rossler_a: Option<f64>,
    /// Rössler `b` coefficient.
    #[arg(long = "rossler-b", global = true)]
    pub rossler_b: Option<f64>,
    /// Integration step.
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Integration end time.
    #[arg(long = "t-end", global = true)]
    pub t_end: Option<f64>,
    /// Discarded lead-in: integration time for rossler/compare, iterations
    /// for carrier/bifurcation.
    #[arg(long, global = true)]
    pub transient: Option<f64>,
    /// Carrier iterations discarded before regime detection in compare mode.
    #[arg(long = "carrier-transient", global = true)]
    pub carrier_transient: Option<usize>,
    /// Initial Rössler state as x,y,z.
    #[arg(long, global = true, value_delimiter = ',', num_args = 3)]
    pub initial: Option<Vec<f64>>,
    #[arg(long = "max-period", global = true)]
    pub max_period: Option<usize>,
    /// Cycle detection tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long = "lambda-min", global = true)]
    pub lambda_min: Option<f64>,
    #[arg(long = "lambda-max", global = true)]
    pub lambda_max: Option<f64>,
    /// Grid points of a bifurcation scan.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true)]
    pub m3: Option<f64>,
    #[arg(long, global = true)]
    pub m4: Option<f64>,
    #[arg(long, global = true)]
    pub m5: Option<f64>,
    #[arg(long, global = true)]
    pub m6: Option<f64>,
    #[arg(long, global = true)]
    pub m7: Option<f64>,
    #[arg(long, global = true)]
    pub m8: Option<f64>,
    /// Gaussian sharpness of the oscillator terms.
    #[arg(long = "gauss-a", global = true)]
    pub gauss_a: Option<f64>,
    /// Elevation scale.
    #[arg(long, global = true)]
    pub c3: Option<f64>,
    /// Elevation phase shift in radians.
    #[arg(long, global = true)]
    pub phase: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Projection plane for SVG output.
    #[arg(long, value_enum, global = true)]
    pub plane: Option<Plane>,
    /// JSON file with default values for any of these flags.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! overlay {
    ($top:ident, $base:ident; $($field:ident),* $(,)?) => {
        Flags { $($field: $top.$field.or($base.$field),)* }
    };
}

impl Flags {
    /// Values from `self`, falling back to `base` field by field.
    pub fn over(self, base: Flags) -> Flags {
        let top = self;
        overlay!(top, base;
            lambda, x0, niter, npoints, c, rossler_a, rossler_b, dt, t_end, transient,
            carrier_transient, initial, max_period, tol, lambda_min, lambda_max, steps,
            m3, m4, m5, m6, m7, m8, gauss_a, c3, phase, output, format, plane, config,
        )
    }

    pub fn from_json(text: &str) -> Result<Flags> {
        serde_json::from_str(text).map_err(|e| CliError::config(format!("config file: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Flags> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Flags::from_json(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRange {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub steps: usize,
}

impl Default for ScanRange {
    fn default() -> Self {
        Self {
            lambda_min: 2.8,
            lambda_max: 4.0,
            steps: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Format,
    pub plane: Plane,
}

/// A fully resolved, validated invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub carrier: CarrierConfig,
    pub detection: DetectionSettings,
    pub scan: ScanRange,
    pub shape: ShapeParams,
    pub rossler: RosslerParams,
    pub output: OutputSpec,
}

fn as_iterations(name: &str, v: f64) -> Result<usize> {
    if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(CliError::config(format!(
            "{name} = {v} must be a non-negative whole number of iterations in this mode"
        )))
    }
}

impl RunConfig {
    /// Applies `flags` on top of the defaults and validates the result.
    pub fn resolve(mode: Mode, flags: &Flags) -> Result<RunConfig> {
        let mut carrier = CarrierConfig::default();
        let mut detection = DetectionSettings::default();
        let mut scan = ScanRange::default();
        let mut shape = ShapeParams::default();
        let mut rossler = RosslerParams::default();

        macro_rules! set {
            ($($src:ident => $dst:expr),* $(,)?) => {
                $(if let Some(v) = flags.$src.clone() { $dst = v; })*
            };
        }
        set!(
            lambda => carrier.lambda,
            x0 => carrier.x0,
            niter => carrier.niter,
            npoints => shape.npoints,
            c => rossler.c,
            rossler_a => rossler.a,
            rossler_b => rossler.b,
            dt => rossler.dt,
            t_end => rossler.t_end,
            carrier_transient => detection.transient,
            max_period => detection.max_period,
            tol => detection.tol,
            lambda_min => scan.lambda_min,
            lambda_max => scan.lambda_max,
            steps => scan.steps,
            m3 => shape.sigmoid_center,
            m4 => shape.sigmoid_width,
            m5 => shape.first_level_amplitude,
            m6 => shape.first_level_center,
            m7 => shape.zero_level_amplitude,
            m8 => shape.zero_level_center,
            gauss_a => shape.sharpness,
            c3 => shape.elevation_scale,
            phase => shape.phase,
        );
        if let Some(init) = &flags.initial {
            rossler.initial_state = <[f64; 3]>::try_from(init.as_slice()).map_err(|_| {
                CliError::config(format!("initial state needs 3 values, got {}", init.len()))
            })?;
        }
        if let Some(t) = flags.transient {
            match mode {
                Mode::Carrier | Mode::Bifurcation => {
                    detection.transient = as_iterations("transient", t)?
                }
                _ => rossler.transient = t,
            }
        }

        let default_format = match mode {
            Mode::Synthesize | Mode::Rossler | Mode::Bifurcation => Format::Csv,
            Mode::Carrier | Mode::Compare => Format::Json,
        };
        let output = OutputSpec {
            path: flags.output.clone(),
            format: flags.format.unwrap_or(default_format),
            plane: flags.plane.unwrap_or_default(),
        };

        let config = RunConfig {
            mode,
            carrier,
            detection,
            scan,
            shape,
            rossler,
            output,
        };
        config.validate()?;
        Ok(config)
    }

    /// Checks only the parts the chosen mode uses, before any computation.
    pub fn validate(&self) -> Result<()> {
        let bad = CliError::InvalidParameter;
        let uses_carrier = matches!(self.mode, Mode::Synthesize | Mode::Carrier | Mode::Compare);
        let uses_shape = matches!(self.mode, Mode::Synthesize | Mode::Compare);
        let uses_flow = matches!(self.mode, Mode::Rossler | Mode::Compare);
        let uses_detection = matches!(self.mode, Mode::Carrier | Mode::Bifurcation | Mode::Compare);
        if uses_carrier {
            self.carrier.validate().map_err(bad)?;
        }
        if uses_shape {
            self.shape.validate().map_err(bad)?;
        }
        if uses_flow {
            self.rossler.validate().map_err(bad)?;
        }
        if uses_detection {
            self.detection.validate().map_err(bad)?;
        }
        if self.mode == Mode::Bifurcation {
            piecewise_attractor::carrier::scan_grid(
                self.scan.lambda_min,
                self.scan.lambda_max,
                self.scan.steps,
            )
            .map_err(bad)?;
            check_x0(self.carrier.x0)?;
        }
        if self.mode == Mode::Synthesize && self.carrier.niter < 1 {
            return Err(CliError::config("synthesis needs niter >= 1"));
        }

        let supports = match self.mode {
            Mode::Synthesize | Mode::Rossler => &[Format::Csv, Format::Json, Format::Svg][..],
            Mode::Carrier | Mode::Bifurcation => &[Format::Csv, Format::Json][..],
            Mode::Compare => &[Format::Json][..],
        };
        if !supports.contains(&self.output.format) {
            return Err(CliError::config(format!(
                "{:?} output is not available in {:?} mode",
                self.output.format, self.mode
            )));
        }
        Ok(())
    }
}

fn check_x0(x0: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x0) {
        Ok(())
    } else {
        Err(CliError::config(format!("x0 = {x0} is outside [0, 1]")))
    }
}

/// Parses arguments, loads the config file if one is named, and resolves.
pub fn from_args<I, T>(args: I) -> std::result::Result<RunConfig, ArgsError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(ArgsError::Clap)?;
    let flags = match &cli.flags.config {
        Some(path) => cli.flags.clone().over(Flags::from_file(path)?),
        None => cli.flags.clone(),
    };
    Ok(RunConfig::resolve(cli.mode, &flags)?)
}

#[derive(Debug, thiserror::Error)]
pub enum ArgsError {
    /// Includes `--help` and `--version`, which are not failures.
    #[error(transparent)]
    Clap(clap::Error),
    #[error(transparent)]
    Run(#[from] CliError),
}
