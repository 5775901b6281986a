//! Error taxonomy for the whole crate.
//!
//! Validation failures name the violated inequality so a caller can tell
//! which precondition broke; internal-consistency errors indicate a proved
//! identity failed to hold in exact arithmetic and are always bugs.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument is outside an operation's domain (negative index,
    /// composite prime argument, out-of-range pole index, ...).
    Domain(String),
    /// Construction parameters fail their ordering or sum conditions.
    Validation(String),
    /// A construction degenerates (d below the relaxed minimum).
    Degenerate(String),
    /// Evaluation at a pole, or a root collides with a parameter.
    Singularity(String),
    /// Numeric input violates a lemma hypothesis (e.g. three real roots
    /// where one real root and a complex pair are required).
    Hypothesis(String),
    /// An exactly-provable identity failed; indicates a bug.
    Internal(String),
    /// The requested oracle does not apply to the given instance.
    Unavailable(String),
    /// A series or table failed to stabilise at the requested resolution.
    Resolution(String),
    /// Not enough usable data points for a fit.
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Validation(m) => write!(f, "validation error: {m}"),
            Error::Degenerate(m) => write!(f, "degenerate parameters: {m}"),
            Error::Singularity(m) => write!(f, "singularity: {m}"),
            Error::Hypothesis(m) => write!(f, "hypothesis violation: {m}"),
            Error::Internal(m) => write!(f, "internal consistency error: {m}"),
            Error::Unavailable(m) => write!(f, "oracle unavailable: {m}"),
            Error::Resolution(m) => write!(f, "resolution error: {m}"),
            Error::InsufficientData(m) => write!(f, "insufficient data: {m}"),
        }
    }
}

impl std::error::Error for Error {}
