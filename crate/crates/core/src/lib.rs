//! Discrete Sobolev orthogonal polynomials and their hard-edge asymptotics.
//!
//! The crate constructs orthonormal polynomials for inner products of the form
//!
//! ```text
//! <p, q> = integral p q dmu + sum_i M_i p^(i)(c) q^(i)(c)
//! ```
//!
//! over Jacobi, Laguerre and Freud weights, computes the coefficients that
//! connect them to Christoffel-modified families, and provides the scaled
//! evaluation and Bessel machinery needed to check Mehler-Heine limits and
//! hard-edge zero acceleration numerically.
//!
//! All numerics are generic over the scalar type through [`scalar::Real`];
//! the `*64` aliases at the crate root pin the `f64` instantiations used by
//! the command-line tools.

pub mod asymptotics;
pub mod bessel;
pub mod connection;
pub mod error;
pub mod gamma;
mod hessenberg;
pub mod measures;
pub mod opq;
pub mod scalar;
pub mod sobolev;
pub mod symmetry;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` instantiations of the main types.
pub type MeasureSpec64 = measures::MeasureSpec<f64>;
pub type RecurrenceTable64 = measures::RecurrenceTable<f64>;
pub type ChristoffelLadder64 = measures::ChristoffelLadder<f64>;
pub type SobolevProduct64 = sobolev::SobolevProduct<f64>;
pub type SobolevFamily64 = sobolev::SobolevFamily<f64>;
pub type ConnectionRow64 = connection::ConnectionRow<f64>;
pub type SymmetricSplit64 = symmetry::SymmetricSplit<f64>;
pub type ScalingLaw64 = asymptotics::ScalingLaw<f64>;
pub type EvalResult64 = opq::EvalResult<f64>;
