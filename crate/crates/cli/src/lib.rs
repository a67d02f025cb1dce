//! Command-line front end for `piecewise-attractor`: configuration, file
//! formats, parallel sweeps and comparison reports.

#![warn(missing_debug_implementations, rust_2018_idioms)]

pub mod config;
pub mod csv_io;
pub mod error;
pub mod parallel;
pub mod report;
pub mod run;
pub mod svg;

pub use config::{from_args, Flags, Format, Mode, RunConfig};
pub use error::{CliError, Result};
pub use run::run;
