use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::piecewise::ShapeParams;
use crate::rossler::RosslerParams;

/// One sample of a trajectory.
///
/// `t` is the global sample index for synthesized curves and integration
/// time for Rössler output.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectoryPoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl TrajectoryPoint {
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        libm::sqrt(dx * dx + dy * dy + dz * dz)
    }
}

/// Where a trajectory came from and with which parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "source", rename_all = "snake_case"))]
pub enum Provenance {
    Synthesized {
        shape: ShapeParams,
        pieces: usize,
    },
    Integrated {
        params: RosslerParams,
    },
    /// Loaded from a file or built by hand.
    External,
}

/// Ordered samples with strictly increasing `t`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Trajectory {
    points: Vec<TrajectoryPoint>,
    meta: Provenance,
}

impl Trajectory {
    pub fn new(points: Vec<TrajectoryPoint>, meta: Provenance) -> Result<Self> {
        if let Some(index) = points.windows(2).position(|w| !(w[1].t > w[0].t)) {
            return Err(Error::NonMonotonicTime { index: index + 1 });
        }
        Ok(Self { points, meta })
    }

    /// Builder for callers that already guarantee increasing `t`.
    pub(crate) fn from_sorted(points: Vec<TrajectoryPoint>, meta: Provenance) -> Self {
        debug_assert!(points.windows(2).all(|w| w[1].t > w[0].t));
        Self { points, meta }
    }

    pub fn points(&self) -> &[TrajectoryPoint] {
        &self.points
    }

    pub fn meta(&self) -> &Provenance {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<TrajectoryPoint> {
        self.points
    }

    /// Copy of a contiguous index range, keeping the provenance.
    ///
    /// Panics if `range` is out of bounds.
    pub fn slice(&self, range: Range<usize>) -> Trajectory {
        Trajectory {
            points: self.points[range].to_vec(),
            meta: self.meta.clone(),
        }
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.x)
    }
}
