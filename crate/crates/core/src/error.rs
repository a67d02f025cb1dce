use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the range where the operation is defined.
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// The integrator left the blow-up envelope.
    #[error("integration diverged at t = {t}: a coordinate exceeded {limit:e} in magnitude")]
    Divergence { t: f64, limit: f64 },

    #[error("insufficient data: need at least {needed} {what}, got {got}")]
    InsufficientData {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    /// Two values of a rank pattern could not be ordered.
    #[error("values at positions {first} and {second} tie within tolerance")]
    Tie { first: usize, second: usize },

    #[error("rank {rank} at slot {slot} does not belong to a permutation")]
    InvalidPermutation { slot: usize, rank: usize },

    #[error("trajectory times must be strictly increasing (violated at index {index})")]
    NonMonotonicTime { index: usize },
}

/// Rejects `value` unless `ok` holds (NaN never passes).
pub(crate) fn ensure(
    ok: bool,
    name: &'static str,
    value: f64,
    expected: &'static str,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            expected,
        })
    }
}
