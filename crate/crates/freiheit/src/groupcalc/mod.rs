//! Calculus on finitely generated free groups and group descriptors:
//! free words, Stallings folding, independence numbers, Nielsen-move
//! searches, and reduced Euler characteristic arithmetic.
//!
//! The central quantity: `iof(Δ)` is the size of the largest subset of
//! the finite set `Δ` that freely generates a free group of that rank
//! (the "independence number"). Over a free group it is computed
//! exactly by folding; over matrix groups it is bracketed by
//! certificates and obstructions.

mod descriptor;
mod iof;
mod stallings;
mod word;

pub use descriptor::{chibar, deficiency, theorem_b_check, GroupDescriptor, TheoremBReport, TheoremBVerdict};
pub use iof::{
    iof_free, iof_matrix, iof_quotient_check, miof_upper_bound, quotient_map, subgroup_rank,
    GeneratingEvidence, IofLimits, IofReport, MatrixIofConfig, MiofLimits, MiofReport,
    QuotientCheckReport,
};
pub use stallings::{fold, StallingsGraph};
pub use word::FreeWord;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupCalcError {
    #[error("cannot parse free word {input:?}: {reason}")]
    ParseWord { input: String, reason: String },

    #[error("word uses generator {found} but the ambient rank is {ambient}")]
    GeneratorOutOfRange { found: usize, ambient: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{0} (raise the limit or shrink the input)")]
    LimitExceeded(String),

    #[error("evidence does not generate the group: {0}")]
    EvidenceMismatch(String),

    #[error(transparent)]
    Freeness(#[from] crate::freeness::FreenessError),

    #[error(transparent)]
    Hyperbolic(#[from] crate::hyperbolic::HyperbolicError),
}
