use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Model parameters outside the admissible range.
    InvalidParams(String),
    /// Grid construction or sampling arguments are unusable.
    InvalidGrid(String),
    /// Two fields that must share a grid do not.
    GridMismatch,
    /// A functional was evaluated outside its domain (e.g. J of the zero field).
    Domain(String),
    /// Both ends of a shooting bracket classify the same way.
    NoBracket {
        lo: f64,
        hi: f64,
    },
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },
    /// A computed ground state failed one of its structural checks.
    InvariantViolation(String),
    /// The time stepper produced a non-finite value.
    StepFailure {
        t: f64,
    },
    InsufficientData {
        needed: usize,
        got: usize,
    },
    /// Time outside the lifespan of a transformed solution.
    OutOfRange(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::GridMismatch => f.write_str("fields live on different grids"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NoBracket { lo, hi } => {
                write!(
                    f,
                    "shooting bracket [{lo}, {hi}] does not straddle the ground state"
                )
            }
            Error::NoConvergence { what, iterations } => {
                write!(f, "{what} did not converge after {iterations} iterations")
            }
            Error::InvariantViolation(msg) => write!(f, "invariant violated: {msg}"),
            Error::StepFailure { t } => write!(f, "non-finite state after step at t = {t}"),
            Error::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need {needed} samples, got {got}")
            }
            Error::OutOfRange(msg) => write!(f, "out of range: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
