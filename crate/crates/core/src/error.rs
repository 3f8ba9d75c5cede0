//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by construction and evaluation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A measure or product parameter is outside its admissible range.
    #[error("invalid parameter in {module}: {message}")]
    InvalidParameter { module: &'static str, message: String },

    /// A degree or derivative order exceeds the capacity of a table.
    #[error("{module}: degree {requested} exceeds capacity {capacity}")]
    DegreeOutOfRange {
        module: &'static str,
        requested: usize,
        capacity: usize,
    },

    /// Non-positive pivot in the Cholesky step of a Christoffel transform.
    /// Signals that the shift point lies inside the support, or catastrophic
    /// roundoff.
    #[error("christoffel step: non-positive pivot at index {pivot}")]
    ChristoffelBreakdown { pivot: usize },

    /// An iterative solver failed to converge within its iteration cap.
    #[error("{module}: {what} did not converge (residual {residual:e})")]
    NonConvergence {
        module: &'static str,
        what: &'static str,
        residual: f64,
    },

    /// The nonvanishing condition on the Christoffel ladder values at c
    /// failed; the connection formula is not defined.
    #[error("connection: ladder value at c vanishes at level {level} (degree {degree})")]
    ConditionViolation { level: usize, degree: usize },

    /// A quantity that is positive in exact arithmetic came out non-positive;
    /// the computation aborts rather than continue with garbage.
    #[error("{module}: numerical breakdown: {message}")]
    NumericalBreakdown { module: &'static str, message: String },

    /// Root bracketing scan exhausted its range without finding the target.
    #[error("bessel: no bracket for zero {index} of J_{nu} within scan range")]
    BracketNotFound { nu: f64, index: usize },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
