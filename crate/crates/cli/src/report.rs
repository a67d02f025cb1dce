//! Side-by-side comparison of a carrier λ and a Rössler c.

use piecewise_attractor::analysis::{
    compare_patterns, rank_order_pattern, rotate_to_max, PatternVerdict, RankPattern, Separation,
    DEFAULT_EXCLUSION,
};
use piecewise_attractor::carrier::{detect_period, iterate_carrier, PeriodResult};
use piecewise_attractor::piecewise::{assemble_trajectory, piece_junction_gap};
use piecewise_attractor::rossler::{
    cluster_values, extract_x_maxima, integrate, maxima_cycle, DEFAULT_CLUSTER_TOL,
};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::Result;
use crate::parallel::par_min_separation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RankMatch {
    Equivalent {
        rotation: usize,
    },
    NotEquivalent,
    LengthMismatch,
    /// The carrier is not periodic, so there is no cycle to compare.
    NotApplicable,
}

impl From<PatternVerdict> for RankMatch {
    fn from(v: PatternVerdict) -> Self {
        match v {
            PatternVerdict::Equivalent { rotation } => Self::Equivalent { rotation },
            PatternVerdict::NotEquivalent => Self::NotEquivalent,
            PatternVerdict::LengthMismatch => Self::LengthMismatch,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub lambda: f64,
    pub c: f64,
    pub carrier_period: PeriodResult,
    /// Number of distinct X-maxima levels after the transient.
    pub rossler_period: usize,
    pub carrier_pattern: Option<RankPattern>,
    pub rossler_pattern: Option<RankPattern>,
    pub rank_match: RankMatch,
    /// Over the last `period` pieces when the carrier is periodic, else over
    /// the whole synthesized trajectory.
    pub min_separation: Option<Separation>,
    pub junction_gap_max: Option<f64>,
}

fn pattern(values: &[f64]) -> Option<RankPattern> {
    rank_order_pattern(&rotate_to_max(values)).ok()
}

pub fn compare(config: &RunConfig) -> Result<ComparisonReport> {
    let lambda = config.carrier.lambda;
    let carrier_period = detect_period(lambda, config.carrier.x0, &config.detection)?;

    let traj = integrate(&config.rossler)?;
    let maxima = extract_x_maxima(&traj, config.rossler.transient);
    let values: Vec<f64> = maxima.iter().map(|m| m.value).collect();
    let rossler_period = cluster_values(&values, DEFAULT_CLUSTER_TOL).len();

    let carrier_pattern = carrier_period.cycle().and_then(pattern);
    let rossler_pattern = match &carrier_pattern {
        Some(_) if rossler_period <= config.detection.max_period => {
            maxima_cycle(&maxima, rossler_period)
                .ok()
                .and_then(|cycle| pattern(&cycle))
        }
        _ => None,
    };
    let rank_match = match (&carrier_pattern, &rossler_pattern) {
        (Some(a), Some(b)) => compare_patterns(a, b).into(),
        (Some(_), None) => RankMatch::LengthMismatch,
        _ => RankMatch::NotApplicable,
    };

    let sequence = iterate_carrier(&config.carrier)?;
    let synthesized = assemble_trajectory(&sequence.radii, &config.shape)?;
    let npoints = config.shape.npoints;
    let window = match carrier_period.period() {
        Some(p) if p <= config.carrier.niter => {
            let len = synthesized.len();
            synthesized.slice(len - p * npoints..len)
        }
        _ => synthesized,
    };
    let min_separation = par_min_separation(&window, DEFAULT_EXCLUSION).ok();
    let junction_gap_max = piece_junction_gap(&sequence.radii, &config.shape)
        .ok()
        .and_then(|gaps| gaps.into_iter().max_by(f64::total_cmp));

    Ok(ComparisonReport {
        lambda,
        c: config.rossler.c,
        carrier_period,
        rossler_period,
        carrier_pattern,
        rossler_pattern,
        rank_match,
        min_separation,
        junction_gap_max,
    })
}
