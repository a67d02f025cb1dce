//! Logistic-map carrier.
//!
//! Iterating `x -> λ·x·(1−x)` yields one value per orbital revolution; scaled
//! by ten it becomes the radius sequence that drives the piecewise synthesis.
//! The same iteration, after a transient, classifies the regime selected by λ.

use alloc::vec::Vec;

use crate::error::{ensure, Error, Result};

/// Multiplier turning carrier iterates into trajectory radii.
pub const RADIUS_SCALE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CarrierConfig {
    pub lambda: f64,
    pub x0: f64,
    pub niter: usize,
}

impl Default for CarrierConfig {
    fn default() -> Self {
        Self {
            lambda: 3.5,
            x0: 0.5,
            niter: 64,
        }
    }
}

impl CarrierConfig {
    pub fn validate(&self) -> Result<()> {
        check_lambda(self.lambda)?;
        check_x0(self.x0)?;
        if self.niter == 0 {
            return Err(Error::InsufficientData {
                what: "iterations",
                needed: 1,
                got: 0,
            });
        }
        Ok(())
    }
}

/// Iterates `x_0..=x_niter` and their radii.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CarrierSequence {
    pub xs: Vec<f64>,
    pub radii: Vec<f64>,
}

fn check_lambda(lambda: f64) -> Result<()> {
    ensure(
        (0.0..=4.0).contains(&lambda),
        "lambda",
        lambda,
        "0 <= lambda <= 4",
    )
}

fn check_x0(x0: f64) -> Result<()> {
    ensure((0.0..=1.0).contains(&x0), "x0", x0, "0 <= x0 <= 1")
}

/// One logistic step `λ·x·(1−x)`.
pub fn logistic_step(x: f64, lambda: f64) -> Result<f64> {
    ensure((0.0..=1.0).contains(&x), "x", x, "0 <= x <= 1")?;
    check_lambda(lambda)?;
    Ok(step(x, lambda))
}

#[inline]
fn step(x: f64, lambda: f64) -> f64 {
    lambda * x * (1.0 - x)
}

pub fn iterate_carrier(config: &CarrierConfig) -> Result<CarrierSequence> {
    config.validate()?;
    let mut xs = Vec::with_capacity(config.niter + 1);
    let mut x = config.x0;
    xs.push(x);
    for _ in 0..config.niter {
        x = step(x, config.lambda);
        xs.push(x);
    }
    let radii = xs.iter().map(|x| RADIUS_SCALE * x).collect();
    Ok(CarrierSequence { xs, radii })
}

/// Knobs for regime classification.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DetectionSettings {
    /// Iterates discarded before any check.
    pub transient: usize,
    pub max_period: usize,
    /// Absolute tolerance for `|x_{n+p} − x_n|`.
    pub tol: f64,
    /// Post-transient iterates used for the cycle checks and the Lyapunov
    /// mean. Raised to `3·max_period` if smaller.
    pub samples: usize,
}

impl Default for DetectionSettings {
    fn default() -> Self {
        Self {
            transient: 1000,
            max_period: 64,
            tol: 1e-9,
            samples: 1000,
        }
    }
}

impl DetectionSettings {
    pub fn validate(&self) -> Result<()> {
        if self.max_period == 0 {
            return Err(Error::InsufficientData {
                what: "max_period",
                needed: 1,
                got: 0,
            });
        }
        ensure(self.tol > 0.0, "tol", self.tol, "tol > 0")
    }

    fn window(&self) -> usize {
        self.samples.max(3 * self.max_period)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum RegimeKind {
    /// `cycle` holds one period of post-transient iterates in time order.
    Periodic {
        period: usize,
        cycle: Vec<f64>,
    },
    Chaotic,
    NotConverged,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeriodResult {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub kind: RegimeKind,
    /// Mean of `ln|λ(1−2x)|` over the post-transient window; `None` when the
    /// orbit hits the critical point and the mean is `−∞`.
    pub lyapunov_estimate: Option<f64>,
}

impl PeriodResult {
    pub fn period(&self) -> Option<usize> {
        match self.kind {
            RegimeKind::Periodic { period, .. } => Some(period),
            _ => None,
        }
    }

    pub fn cycle(&self) -> Option<&[f64]> {
        match &self.kind {
            RegimeKind::Periodic { cycle, .. } => Some(cycle),
            _ => None,
        }
    }

    pub fn is_chaotic(&self) -> bool {
        matches!(self.kind, RegimeKind::Chaotic)
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            RegimeKind::Periodic { .. } => "periodic",
            RegimeKind::Chaotic => "chaotic",
            RegimeKind::NotConverged => "not_converged",
        }
    }
}

fn post_transient(lambda: f64, x0: f64, transient: usize, count: usize) -> Vec<f64> {
    let mut x = x0;
    for _ in 0..transient {
        x = step(x, lambda);
    }
    let mut xs = Vec::with_capacity(count);
    xs.push(x);
    for _ in 1..count {
        x = step(x, lambda);
        xs.push(x);
    }
    xs
}

fn lyapunov_mean(lambda: f64, xs: &[f64]) -> f64 {
    let sum: f64 = xs
        .iter()
        .map(|&x| libm::log(libm::fabs(lambda * (1.0 - 2.0 * x))))
        .sum();
    sum / xs.len() as f64
}

/// Mean of `ln|λ(1−2x_i)|` over `samples` iterates after `transient`.
pub fn lyapunov_exponent(lambda: f64, x0: f64, transient: usize, samples: usize) -> Result<f64> {
    check_lambda(lambda)?;
    check_x0(x0)?;
    if samples == 0 {
        return Err(Error::InsufficientData {
            what: "samples",
            needed: 1,
            got: 0,
        });
    }
    Ok(lyapunov_mean(
        lambda,
        &post_transient(lambda, x0, transient, samples),
    ))
}

fn distinct_within(cycle: &[f64], tol: f64) -> bool {
    cycle
        .iter()
        .enumerate()
        .all(|(i, a)| cycle[i + 1..].iter().all(|b| libm::fabs(a - b) > tol))
}

/// Classifies the asymptotic regime of the logistic orbit from `x0`.
///
/// The smallest `p <= max_period` with `|x_{n+p} − x_n| < tol` over the whole
/// post-transient window (at least `2p` checks) and `p` pairwise distinct
/// values wins. Failing that the orbit is chaotic when the Lyapunov mean is
/// positive and unresolved otherwise.
pub fn detect_period(lambda: f64, x0: f64, settings: &DetectionSettings) -> Result<PeriodResult> {
    check_lambda(lambda)?;
    check_x0(x0)?;
    settings.validate()?;

    let window = settings.window();
    let xs = post_transient(lambda, x0, settings.transient, window + 1);
    let lyap = lyapunov_mean(lambda, &xs[..window]);
    let lyapunov_estimate = lyap.is_finite().then_some(lyap);

    let period = (1..=settings.max_period).find(|&p| {
        (0..xs.len() - p).all(|n| libm::fabs(xs[n + p] - xs[n]) < settings.tol)
            && distinct_within(&xs[..p], settings.tol)
    });

    let kind = match period {
        Some(period) => RegimeKind::Periodic {
            period,
            cycle: xs[..period].to_vec(),
        },
        None if lyap > 0.0 => RegimeKind::Chaotic,
        None => RegimeKind::NotConverged,
    };
    Ok(PeriodResult {
        kind,
        lyapunov_estimate,
    })
}

/// One λ grid point of a bifurcation scan.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanPoint {
    pub lambda: f64,
    pub result: PeriodResult,
    /// Last `min(256, samples)` post-transient iterates.
    pub samples: Vec<f64>,
}

pub const SCAN_SAMPLE_LIMIT: usize = 256;

/// Evenly spaced grid including both ends. `lambda_min == lambda_max` is
/// allowed and repeats the value `steps` times.
pub fn scan_grid(lambda_min: f64, lambda_max: f64, steps: usize) -> Result<Vec<f64>> {
    check_lambda(lambda_min)?;
    check_lambda(lambda_max)?;
    ensure(
        lambda_min <= lambda_max,
        "lambda_min",
        lambda_min,
        "lambda_min <= lambda_max",
    )?;
    if steps < 2 {
        return Err(Error::InsufficientData {
            what: "grid steps",
            needed: 2,
            got: steps,
        });
    }
    let span = lambda_max - lambda_min;
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| {
            if k == steps - 1 {
                lambda_max
            } else {
                lambda_min + span * k as f64 / last
            }
        })
        .collect())
}

/// Classification plus attractor samples at a single λ.
pub fn scan_point(lambda: f64, x0: f64, settings: &DetectionSettings) -> Result<ScanPoint> {
    let result = detect_period(lambda, x0, settings)?;
    let keep = SCAN_SAMPLE_LIMIT.min(settings.samples.max(1));
    let tail = post_transient(lambda, x0, settings.transient, settings.samples.max(1));
    let samples = tail[tail.len() - keep..].to_vec();
    Ok(ScanPoint {
        lambda,
        result,
        samples,
    })
}

/// Sequential scan in grid order.
pub fn bifurcation_scan(
    lambda_min: f64,
    lambda_max: f64,
    steps: usize,
    x0: f64,
    settings: &DetectionSettings,
) -> Result<Vec<ScanPoint>> {
    scan_grid(lambda_min, lambda_max, steps)?
        .into_iter()
        .map(|lambda| scan_point(lambda, x0, settings))
        .collect()
}
