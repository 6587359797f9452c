use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("spin count {n} outside supported range 1..={max}")]
    SpinCount { n: usize, max: usize },

    #[error("{what} index {index} out of range 0..={max}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("spin projection {0} not in {{-1, 0, 1}}")]
    SpinProjection(i32),

    #[error("detuning grid is empty")]
    EmptyGrid,

    #[error("spectra are defined on different detuning grids")]
    GridMismatch,

    #[error("norm drift {drift:.3e} at t = {time} exceeds {limit:.1e}")]
    NormDrift { drift: f64, time: f64, limit: f64 },

    #[error("rotation is not real: max imaginary part {0:.3e}")]
    NotReal(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
