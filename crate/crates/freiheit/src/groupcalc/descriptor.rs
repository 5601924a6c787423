//! Euler-characteristic bookkeeping for the groups the freeness bound
//! speaks about, and the consistency check tying `chibar` to measured
//! independence numbers.
//!
//! The bound under test: for these groups, every finite generating
//! set Δ satisfies `iof(Δ) ≥ chibar(G) + 1`, equivalently
//! `chibar(G) < iof(Δ)`. Evidence that places `iof(Δ)` at or below
//! `chibar(G)` would be a counterexample and is flagged as such, not
//! silently accepted.

use serde::{Deserialize, Serialize};

use super::iof::{GeneratingEvidence, IofReport};
use super::{subgroup_rank, GroupCalcError};

/// A group given by its isomorphism type, as far as `chibar` cares.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum GroupDescriptor {
    Trivial,
    Free { rank: usize },
    /// Fundamental group of the closed orientable surface.
    Surface { genus: usize },
    FreeProduct { factors: Vec<GroupDescriptor> },
}

impl GroupDescriptor {
    pub fn validate(&self) -> Result<(), GroupCalcError> {
        match self {
            GroupDescriptor::Trivial => Ok(()),
            GroupDescriptor::Free { rank } if *rank >= 1 => Ok(()),
            GroupDescriptor::Free { .. } => Err(GroupCalcError::Invalid(
                "a free factor needs rank at least 1; use the trivial group for rank 0".into(),
            )),
            GroupDescriptor::Surface { genus } if *genus >= 1 => Ok(()),
            GroupDescriptor::Surface { .. } => Err(GroupCalcError::Invalid(
                "genus 0 is the sphere, whose group is trivial; say so directly".into(),
            )),
            GroupDescriptor::FreeProduct { factors } => {
                if factors.is_empty() {
                    return Err(GroupCalcError::Invalid(
                        "a free product needs at least one factor".into(),
                    ));
                }
                factors.iter().try_for_each(GroupDescriptor::validate)
            }
        }
    }

    /// `Some(r)` when the group is free of rank `r`, `None` when a
    /// surface factor makes it non-free.
    fn free_rank(&self) -> Option<usize> {
        match self {
            GroupDescriptor::Trivial => Some(0),
            GroupDescriptor::Free { rank } => Some(*rank),
            GroupDescriptor::Surface { .. } => None,
            GroupDescriptor::FreeProduct { factors } => {
                factors.iter().map(GroupDescriptor::free_rank).sum()
            }
        }
    }

    /// Minimal size of a generating set; additive over free products.
    fn min_generators(&self) -> usize {
        match self {
            GroupDescriptor::Trivial => 0,
            GroupDescriptor::Free { rank } => *rank,
            GroupDescriptor::Surface { genus } => 2 * genus,
            GroupDescriptor::FreeProduct { factors } => {
                factors.iter().map(GroupDescriptor::min_generators).sum()
            }
        }
    }
}

/// Reduced Euler characteristic: `-1` for the trivial group, `rank - 1`
/// for free groups, `2·genus - 2` for surface groups, and
/// `Σ chibar(factor) + (n-1)` over a free product.
pub fn chibar(group: &GroupDescriptor) -> i64 {
    match group {
        GroupDescriptor::Trivial => -1,
        GroupDescriptor::Free { rank } => *rank as i64 - 1,
        GroupDescriptor::Surface { genus } => 2 * *genus as i64 - 2,
        GroupDescriptor::FreeProduct { factors } => {
            factors.iter().map(chibar).sum::<i64>() + factors.len() as i64 - 1
        }
    }
}

/// Deficiency, `chibar + 1`: rank for free groups, `2g - 1` for
/// surface groups, zero for the trivial group.
pub fn deficiency(group: &GroupDescriptor) -> i64 {
    chibar(group) + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremBVerdict {
    /// `chibar(G) < iof(Δ)` is certified by the evidence.
    Consistent,
    /// The evidence brackets `iof(Δ)` across `chibar(G)`.
    Inconclusive,
    /// The evidence places `iof(Δ) ≤ chibar(G)`. Either the evidence
    /// or the group description is wrong, or the bound is false.
    CandidateCounterexample,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TheoremBReport {
    pub group: GroupDescriptor,
    pub chibar: i64,
    pub deficiency: i64,
    pub iof_lower: usize,
    pub iof_upper: Option<usize>,
    pub verdict: TheoremBVerdict,
    pub inequality: String,
    pub caveats: Vec<String>,
}

/// Check independence evidence for a generating set of `group`
/// against the freeness bound `chibar(G) < iof(Δ)`.
///
/// Word evidence is re-folded to confirm it generates a group of the
/// claimed isomorphism type; matrix evidence only admits cardinality
/// sanity checks, so generation is taken on trust and noted.
pub fn theorem_b_check(
    group: &GroupDescriptor,
    evidence: &IofReport,
) -> Result<TheoremBReport, GroupCalcError> {
    group.validate()?;
    let mut caveats = evidence.caveats.clone();

    match &evidence.evidence {
        GeneratingEvidence::Words {
            ambient_rank,
            words,
        } => {
            let generated = subgroup_rank(words, *ambient_rank)?;
            match group.free_rank() {
                None => {
                    return Err(GroupCalcError::EvidenceMismatch(format!(
                        "{group:?} has a surface factor and is not free, \
                         but words in a free group generate free subgroups only"
                    )));
                }
                Some(r) if r != generated => {
                    return Err(GroupCalcError::EvidenceMismatch(format!(
                        "the words generate a free group of rank {generated}, \
                         but {group:?} is free of rank {r}"
                    )));
                }
                Some(_) => {}
            }
        }
        GeneratingEvidence::Matrices { matrices } => {
            let needed = group.min_generators();
            if matrices.len() < needed {
                return Err(GroupCalcError::EvidenceMismatch(format!(
                    "{group:?} needs at least {needed} generators, \
                     but the evidence lists {} matrices",
                    matrices.len()
                )));
            }
            caveats.push(
                "matrix evidence: that the matrices generate the named group is \
                 assumed, not verified"
                    .into(),
            );
        }
    }

    let cb = chibar(group);
    let lower = evidence.lower;
    let upper = evidence.exact.or(evidence.upper);

    let (verdict, inequality) = if cb < lower as i64 {
        (
            TheoremBVerdict::Consistent,
            format!("chibar(G) = {cb} < {lower} <= iof(Delta)"),
        )
    } else if let Some(u) = upper.filter(|&u| cb >= u as i64) {
        (
            TheoremBVerdict::CandidateCounterexample,
            format!("iof(Delta) <= {u} <= {cb} = chibar(G) violates the freeness bound"),
        )
    } else {
        let u = upper.map_or("?".to_string(), |u| u.to_string());
        (
            TheoremBVerdict::Inconclusive,
            format!("iof(Delta) in [{lower}, {u}] does not separate from chibar(G) = {cb}"),
        )
    };

    Ok(TheoremBReport {
        group: group.clone(),
        chibar: cb,
        deficiency: cb + 1,
        iof_lower: lower,
        iof_upper: upper,
        verdict,
        inequality,
        caveats,
    })
}
