//! Polar views, self-intersection checks and rank-order cycle patterns.

use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::trajectory::{Trajectory, TrajectoryPoint};

/// Relative tolerance under which two cycle values count as tied.
pub const RANK_TIE_TOL: f64 = 1e-6;

/// Default neighbour window for separation scans, in samples.
pub const DEFAULT_EXCLUSION: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PolarSample {
    /// Degrees in `(−180, 180]`.
    pub theta: f64,
    pub r: f64,
    pub z: f64,
}

pub fn polar_sample(p: &TrajectoryPoint) -> PolarSample {
    let mut theta = libm::atan2(p.y, p.x).to_degrees();
    // atan2(−0, x<0) is −π; fold it onto the closed end of the interval.
    if theta <= -180.0 {
        theta = 180.0;
    }
    PolarSample {
        theta,
        r: libm::hypot(p.x, p.y),
        z: p.z,
    }
}

pub fn to_polar(traj: &Trajectory) -> Result<Vec<PolarSample>> {
    if traj.is_empty() {
        return Err(Error::InsufficientData {
            what: "points",
            needed: 1,
            got: 0,
        });
    }
    Ok(traj.points().iter().map(polar_sample).collect())
}

/// The closest pair of non-neighbouring samples.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Separation {
    pub distance: f64,
    /// `i < j`.
    pub i: usize,
    pub j: usize,
}

/// Pairs `i < j` count when `exclusion < j − i < len − exclusion`, so both
/// the ordinary and the wrap-around neighbourhood are skipped.
#[inline]
fn is_far_pair(i: usize, j: usize, len: usize, exclusion: usize) -> bool {
    let d = j - i;
    d > exclusion && d < len - exclusion
}

/// Fails unless a list of `len` samples has at least one pair more than
/// `exclusion` steps apart in both directions around the cycle.
pub fn check_separation_input(len: usize, exclusion: usize) -> Result<()> {
    if exclusion == 0 {
        return Err(Error::InsufficientData {
            what: "exclusion samples",
            needed: 1,
            got: 0,
        });
    }
    let needed = 2 * exclusion + 2;
    if len < needed {
        return Err(Error::InsufficientData {
            what: "points",
            needed,
            got: len,
        });
    }
    Ok(())
}

/// Brute-force minimum over the pairs whose first index lies in `rows`.
///
/// Splitting `0..len` into row ranges and keeping the smallest result gives
/// the same answer as [`min_separation`].
pub fn min_separation_rows(
    points: &[TrajectoryPoint],
    exclusion: usize,
    rows: Range<usize>,
) -> Option<Separation> {
    let len = points.len();
    let mut best: Option<Separation> = None;
    for i in rows {
        for j in i + exclusion + 1..len {
            if !is_far_pair(i, j, len, exclusion) {
                continue;
            }
            let distance = points[i].distance(&points[j]);
            if best.is_none_or(|b| distance < b.distance) {
                best = Some(Separation { distance, i, j });
            }
        }
    }
    best
}

pub fn merge_separations(a: Option<Separation>, b: Option<Separation>) -> Option<Separation> {
    match (a, b) {
        (Some(a), Some(b)) => Some(
            if b.distance < a.distance || (b.distance == a.distance && (b.i, b.j) < (a.i, a.j)) {
                b
            } else {
                a
            },
        ),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Smallest 3-D distance between samples more than `exclusion` steps apart,
/// treating the sample list as a closed cycle.
pub fn min_separation(traj: &Trajectory, exclusion: usize) -> Result<Separation> {
    let points = traj.points();
    check_separation_input(points.len(), exclusion)?;
    Ok(min_separation_rows(points, exclusion, 0..points.len())
        .expect("input check guarantees at least one far pair"))
}

/// Two non-neighbouring samples that nearly coincide in the X, Y plane.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Coincidence {
    pub i: usize,
    pub j: usize,
    pub xy_distance: f64,
    pub dz: f64,
}

/// All far pairs (same neighbour rule as [`min_separation`]) closer than
/// `xy_tol` in the X, Y projection.
pub fn xy_coincidences(
    traj: &Trajectory,
    exclusion: usize,
    xy_tol: f64,
) -> Result<Vec<Coincidence>> {
    let points = traj.points();
    check_separation_input(points.len(), exclusion)?;
    let len = points.len();
    let mut out = Vec::new();
    for i in 0..len {
        for j in i + exclusion + 1..len {
            if !is_far_pair(i, j, len, exclusion) {
                continue;
            }
            let (a, b) = (&points[i], &points[j]);
            let xy_distance = libm::hypot(a.x - b.x, a.y - b.y);
            if xy_distance < xy_tol {
                out.push(Coincidence {
                    i,
                    j,
                    xy_distance,
                    dz: libm::fabs(a.z - b.z),
                });
            }
        }
    }
    Ok(out)
}

/// Planar coincidences that are not separated in Z by more than `z_tol`.
/// An empty result means no triple of coincident coordinates.
pub fn intersection_violations(
    traj: &Trajectory,
    exclusion: usize,
    xy_tol: f64,
    z_tol: f64,
) -> Result<Vec<Coincidence>> {
    Ok(xy_coincidences(traj, exclusion, xy_tol)?
        .into_iter()
        .filter(|c| !(c.dz > z_tol))
        .collect())
}

/// Rank (0 = smallest) of the value in each time slot of a cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct RankPattern(Vec<usize>);

impl RankPattern {
    /// Fails unless `perm` is a permutation of `0..perm.len()`.
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = alloc::vec![false; perm.len()];
        for (slot, &r) in perm.iter().enumerate() {
            if r >= perm.len() || core::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidPermutation { slot, rank: r });
            }
        }
        Ok(Self(perm))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pattern of the same cycle read from slot `k` onwards.
    pub fn rotated(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Self(v)
    }
}

fn tied(a: f64, b: f64) -> bool {
    libm::fabs(a - b) <= RANK_TIE_TOL * libm::fmax(libm::fabs(a), libm::fabs(b))
}

pub fn rank_order_pattern(values: &[f64]) -> Result<RankPattern> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    if let Some(w) = order.windows(2).find(|w| tied(values[w[0]], values[w[1]])) {
        let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
        return Err(Error::Tie { first, second });
    }
    let mut perm = alloc::vec![0; values.len()];
    for (rank, &slot) in order.iter().enumerate() {
        perm[slot] = rank;
    }
    Ok(RankPattern(perm))
}

/// The cycle rotated so that its largest value comes first.
pub fn rotate_to_max(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    if let Some(k) = (0..v.len()).max_by(|&i, &j| v[i].total_cmp(&v[j])) {
        v.rotate_left(k);
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "verdict", rename_all = "snake_case"))]
pub enum PatternVerdict {
    /// Rotating the second cycle left by `rotation` slots reproduces the first.
    Equivalent {
        rotation: usize,
    },
    NotEquivalent,
    /// The cycles have different periods.
    LengthMismatch,
}

impl PatternVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Self::Equivalent { .. })
    }
}

/// Compares two cycle patterns up to the choice of starting slot.
pub fn compare_patterns(first: &RankPattern, second: &RankPattern) -> PatternVerdict {
    if first.len() != second.len() {
        return PatternVerdict::LengthMismatch;
    }
    let n = first.len().max(1);
    (0..n)
        .find(|&k| second.rotated(k) == *first)
        .map_or(PatternVerdict::NotEquivalent, |rotation| {
            PatternVerdict::Equivalent { rotation }
        })
}
