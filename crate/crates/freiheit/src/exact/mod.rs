//! Exact arithmetic: Gaussian rationals, polynomials over them, and
//! generic 2×2 matrices.
//!
//! Everything here is exact. Values are immutable after construction
//! and kept in canonical form (reduced fractions, positive
//! denominators, no trailing zero coefficients), so `==` is semantic
//! equality and hashing is consistent.

mod mat2;
mod poly;
mod rational;

pub use mat2::Mat2;
pub use poly::{Degree, Poly};
pub use rational::GaussianRational;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,

    #[error("matrix is not invertible (determinant is zero)")]
    NonInvertible,

    #[error("cannot parse {kind} from {input:?}: {reason}")]
    Parse {
        kind: &'static str,
        input: String,
        reason: String,
    },
}

impl ExactError {
    pub(crate) fn parse(kind: &'static str, input: &str, reason: impl Into<String>) -> Self {
        ExactError::Parse {
            kind,
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

/// Scalars that render to and parse from a canonical text form.
///
/// Matrices of such scalars serialise as 2×2 arrays of strings, which
/// keeps exact values exact across the JSON boundary.
pub trait TextScalar: std::fmt::Display + std::str::FromStr<Err = ExactError> {
    /// Name used in parse errors ("gaussian rational", "polynomial").
    const KIND: &'static str;
}

impl TextScalar for GaussianRational {
    const KIND: &'static str = "gaussian rational";
}

impl TextScalar for Poly {
    const KIND: &'static str = "polynomial";
}
