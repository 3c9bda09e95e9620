use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid interval ({lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid game configuration: {0}")]
    InvalidConfig(String),

    #[error("node index {index} out of range for {n} nodes")]
    NodeIndex { index: usize, n: usize },

    #[error("{context}: no sign change on [{lo}, {hi}] (values {f_lo}, {f_hi})")]
    NoBracket {
        context: &'static str,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("{context}: no convergence after {iterations} iterations (bracket width {width})")]
    NoConvergence {
        context: &'static str,
        iterations: usize,
        width: f64,
    },
}

impl Error {
    /// True for failures of an iterative numeric procedure, as opposed to
    /// invalid input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NoBracket { .. } | Error::NoConvergence { .. })
    }

    pub(crate) fn check_range(what: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
        if value.is_nan() || value < lo || value > hi {
            Err(Error::OutOfRange {
                what,
                value,
                lo,
                hi,
            })
        } else {
            Ok(())
        }
    }
}
