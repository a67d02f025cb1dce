//! Rössler-like trajectories in piecewise closed form.
//!
//! A logistic-map carrier supplies one radius per orbital revolution; analytic
//! radius and elevation profiles join consecutive radii into a continuous 3-D
//! curve. A fixed-step RK4 integrator of the Rössler flow, first-return maps of
//! the X maxima, and rank-order pattern comparison provide the reference side.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! parallel sweeps live in the `piecewise-attractor-cli` crate.
#![no_std]
#![warn(missing_debug_implementations, rust_2018_idioms)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod analysis;
pub mod carrier;
mod error;
pub mod piecewise;
pub mod rossler;
mod trajectory;

pub use error::{Error, Result};
pub use trajectory::{Provenance, Trajectory, TrajectoryPoint};
