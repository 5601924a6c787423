//! The independence number `iof` and its relatives.
//!
//! `iof(Δ)` = size of the largest subset of `Δ` that is a free basis
//! of the subgroup it generates. Over a free group this is decidable
//! by folding: a set is independent iff its folded rank equals its
//! size. Over matrix groups the number is bracketed: ping-pong
//! certificates push the lower bound up, exact relations, Jørgensen
//! violations, and displacement obstructions pull the upper bound
//! down.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{fold, FreeWord, GroupCalcError};
use crate::freeness::{certify_schottky_with_retry, jorgensen_filter, JorgensenVerdict, SchottkyVerdict};
use crate::hyperbolic::minimize::{minimize_basepoint, MinimizeConfig};
use crate::hyperbolic::{MoebiusNumeric, ObstructionVerdict, UHPoint};

/// Rank of the subgroup of `F_ambient` generated by the words.
pub fn subgroup_rank(words: &[FreeWord], ambient_rank: usize) -> Result<usize, GroupCalcError> {
    for w in words {
        w.check_rank(ambient_rank)?;
    }
    Ok(fold(words).rank())
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct IofLimits {
    /// Subset enumeration is exponential; refuse sets larger than this.
    pub max_set_size: usize,
}

impl Default for IofLimits {
    fn default() -> Self {
        IofLimits { max_set_size: 12 }
    }
}

/// What the independence number was computed from.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratingEvidence {
    Words {
        ambient_rank: usize,
        words: Vec<FreeWord>,
    },
    Matrices {
        matrices: Vec<MoebiusNumeric>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IofReport {
    pub evidence: GeneratingEvidence,
    /// Certified: some subset of this size is independent.
    pub lower: usize,
    /// Every larger subset is ruled out (absent when nothing rules
    /// larger subsets out).
    pub upper: Option<usize>,
    /// Set when the bounds meet.
    pub exact: Option<usize>,
    /// Indices into the input list of a subset attaining `lower`.
    pub witness: Vec<usize>,
    pub subsets_checked: u64,
    pub caveats: Vec<String>,
}

/// Visit `k`-element index combinations of `0..n` in lexicographic
/// order until the callback returns `true`; forwards that result.
fn any_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return false;
    }
    if k == 0 {
        return f(&[]);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return true;
        }
        // Advance the rightmost index that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact independence number over a free group, by descending subset
/// sweep. Duplicates in `delta` are collapsed before enumeration.
pub fn iof_free(
    delta: &[FreeWord],
    ambient_rank: usize,
    limits: &IofLimits,
) -> Result<IofReport, GroupCalcError> {
    for w in delta {
        w.check_rank(ambient_rank)?;
    }
    let mut unique: Vec<(usize, &FreeWord)> = Vec::new();
    let mut seen: BTreeSet<&FreeWord> = BTreeSet::new();
    for (i, w) in delta.iter().enumerate() {
        if seen.insert(w) {
            unique.push((i, w));
        }
    }
    if unique.len() > limits.max_set_size {
        return Err(GroupCalcError::LimitExceeded(format!(
            "independence sweep over {} distinct words exceeds the size limit {}",
            unique.len(),
            limits.max_set_size
        )));
    }

    let mut subsets_checked: u64 = 0;
    for size in (0..=unique.len()).rev() {
        let mut witness: Vec<usize> = Vec::new();
        let found = any_combination(unique.len(), size, |combo| {
            subsets_checked += 1;
            let subset: Vec<FreeWord> = combo.iter().map(|&i| unique[i].1.clone()).collect();
            if fold(&subset).rank() == size {
                witness = combo.iter().map(|&i| unique[i].0).collect();
                true
            } else {
                false
            }
        });
        if found {
            return Ok(IofReport {
                evidence: GeneratingEvidence::Words {
                    ambient_rank,
                    words: delta.to_vec(),
                },
                lower: size,
                upper: Some(size),
                exact: Some(size),
                witness,
                subsets_checked,
                caveats: Vec::new(),
            });
        }
    }
    unreachable!("the empty subset is always independent");
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MatrixIofConfig {
    /// Disk gap ping-pong certificates must clear.
    pub schottky_margin: f64,
    /// Numeric tolerance for relations, Jørgensen, and obstructions.
    pub tol: f64,
    pub seed: u64,
    /// Budget of the obstruction minimiser per subset.
    pub obstruction_restarts: usize,
    pub obstruction_iters: usize,
    pub max_set_size: usize,
}

impl Default for MatrixIofConfig {
    fn default() -> Self {
        MatrixIofConfig {
            schottky_margin: 1e-6,
            tol: crate::DEFAULT_TOL,
            seed: crate::DEFAULT_SEED,
            obstruction_restarts: 12,
            obstruction_iters: 150,
            max_set_size: 8,
        }
    }
}

fn entrywise_close(a: &MoebiusNumeric, b: &MoebiusNumeric, tol: f64) -> bool {
    (a.a() - b.a()).norm() <= tol
        && (a.b() - b.b()).norm() <= tol
        && (a.c() - b.c()).norm() <= tol
        && (a.d() - b.d()).norm() <= tol
}

/// Equal to ±identity within tolerance.
fn is_projective_identity(m: &MoebiusNumeric, tol: f64) -> bool {
    let id = MoebiusNumeric::identity();
    let neg = MoebiusNumeric::new(-id.a(), -id.b(), -id.c(), -id.d())
        .expect("negated identity is unimodular");
    entrywise_close(m, &id, tol) || entrywise_close(m, &neg, tol)
}

/// Bracket the independence number of a list of Möbius matrices.
pub fn iof_matrix(
    mats: &[MoebiusNumeric],
    config: &MatrixIofConfig,
) -> Result<IofReport, GroupCalcError> {
    let n = mats.len();
    if n > config.max_set_size {
        return Err(GroupCalcError::LimitExceeded(format!(
            "matrix independence sweep over {n} matrices exceeds the size limit {}",
            config.max_set_size
        )));
    }

    let trivial: Vec<bool> = mats
        .iter()
        .map(|m| is_projective_identity(m, config.tol))
        .collect();
    let mut dependent_pair = vec![vec![false; n]; n];
    let mut jorgensen_violated = vec![vec![false; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let rel = mats[i].compose(&mats[j].inverse());
            let inv_rel = mats[i].compose(&mats[j]);
            dependent_pair[i][j] = is_projective_identity(&rel, config.tol)
                || is_projective_identity(&inv_rel, config.tol);
            jorgensen_violated[i][j] = jorgensen_filter(&mats[i], &mats[j], config.tol).verdict
                == JorgensenVerdict::Violated;
        }
    }

    let minimize_cfg = MinimizeConfig {
        restarts: config.obstruction_restarts,
        max_iters: config.obstruction_iters,
        seed: config.seed,
        tol: config.tol,
    };

    let mut subsets_checked: u64 = 0;

    // Upper bound: the largest size at which some subset survives
    // every ruling (exact relations, Jørgensen, displacement
    // obstruction).
    let mut upper = 0usize;
    'upper: for size in (1..=n).rev() {
        let survived = any_combination(n, size, |combo| {
            subsets_checked += 1;
            if combo.iter().any(|&i| trivial[i]) {
                return false;
            }
            for (pos, &i) in combo.iter().enumerate() {
                for &j in &combo[pos + 1..] {
                    if dependent_pair[i][j] || jorgensen_violated[i][j] {
                        return false;
                    }
                }
            }
            if combo.len() >= 2 {
                let subset: Vec<MoebiusNumeric> = combo.iter().map(|&i| mats[i]).collect();
                if let Ok(out) = minimize_basepoint(&subset, &UHPoint::j(), &minimize_cfg) {
                    if out.best.verdict == ObstructionVerdict::Obstructed {
                        return false;
                    }
                }
            }
            true
        });
        if survived {
            upper = size;
            break 'upper;
        }
    }

    // Lower bound: the largest size with a ping-pong certificate.
    let mut lower = 0usize;
    let mut witness: Vec<usize> = Vec::new();
    'lower: for size in (1..=upper).rev() {
        let mut found_witness: Vec<usize> = Vec::new();
        let found = any_combination(n, size, |combo| {
            subsets_checked += 1;
            let subset: Vec<MoebiusNumeric> = combo.iter().map(|&i| mats[i]).collect();
            match certify_schottky_with_retry(
                &subset,
                config.schottky_margin,
                config.tol,
                config.seed,
            ) {
                Ok(cert) => {
                    if cert.verdict == SchottkyVerdict::Certified {
                        found_witness = combo.to_vec();
                        true
                    } else {
                        false
                    }
                }
                Err(_) => false,
            }
        });
        if found {
            lower = size;
            witness = found_witness;
            break 'lower;
        }
    }

    debug_assert!(lower <= upper);
    let exact = (lower == upper).then_some(lower);
    Ok(IofReport {
        evidence: GeneratingEvidence::Matrices {
            matrices: mats.to_vec(),
        },
        lower,
        upper: Some(upper),
        exact,
        witness,
        subsets_checked,
        caveats: vec![
            "lower bound: isometric-disk ping-pong certificate; the witness subset \
             generates a discrete free group of that rank"
                .into(),
            "upper bound: subsets are ruled out by exact relations, Jørgensen \
             violations, or displacement obstructions; a surviving subset is not \
             thereby certified independent"
                .into(),
            "numeric verdicts are tolerance-limited; values within tolerance of a \
             threshold rule nothing out"
                .into(),
        ],
    })
}

/// Kill the generators in `kill`, reindexing the survivors in order.
/// The image lives in a free group of rank `ambient − |kill|`.
pub fn quotient_map(
    word: &FreeWord,
    kill: &BTreeSet<usize>,
    ambient_rank: usize,
) -> Result<FreeWord, GroupCalcError> {
    word.check_rank(ambient_rank)?;
    if let Some(&bad) = kill.iter().find(|&&k| k >= ambient_rank) {
        return Err(GroupCalcError::Invalid(format!(
            "kill set names generator {bad}, but the ambient rank is {ambient_rank}"
        )));
    }
    let mut new_index = vec![usize::MAX; ambient_rank];
    let mut next = 0usize;
    for (g, slot) in new_index.iter_mut().enumerate() {
        if !kill.contains(&g) {
            *slot = next;
            next += 1;
        }
    }
    Ok(FreeWord::from_letters(
        word.letters()
            .iter()
            .filter(|(g, _)| !kill.contains(&(*g as usize)))
            .map(|&(g, s)| (new_index[g as usize] as u16, s)),
    ))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuotientCheckReport {
    pub before: IofReport,
    pub after: IofReport,
    pub quotient_rank: usize,
    pub killed: Vec<usize>,
    /// `iof(η(Δ)) ≤ iof(Δ)`; anything else would be a counterexample
    /// to quotient monotonicity and deserves a loud failure.
    pub monotone: bool,
}

/// Compare the independence number of a set against its image under
/// the quotient that kills some generators.
pub fn iof_quotient_check(
    delta: &[FreeWord],
    ambient_rank: usize,
    kill: &BTreeSet<usize>,
    limits: &IofLimits,
) -> Result<QuotientCheckReport, GroupCalcError> {
    let before = iof_free(delta, ambient_rank, limits)?;
    let quotient_rank = ambient_rank - kill.len();
    let image: Vec<FreeWord> = delta
        .iter()
        .map(|w| quotient_map(w, kill, ambient_rank))
        .collect::<Result<_, _>>()?;
    let after = iof_free(&image, quotient_rank, limits)?;
    let monotone = after.exact <= before.exact;
    Ok(QuotientCheckReport {
        before,
        after,
        quotient_rank,
        killed: kill.iter().copied().collect(),
        monotone,
    })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MiofLimits {
    pub max_states: usize,
    pub max_word_len: usize,
}

impl Default for MiofLimits {
    fn default() -> Self {
        MiofLimits {
            max_states: 20_000,
            max_word_len: 64,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MiofReport {
    pub rank: usize,
    pub depth: usize,
    pub generating_sets_examined: u64,
    /// Minimum exact independence number over the examined sets; an
    /// upper bound for the minimum over *all* generating sets.
    pub min_iof: usize,
    pub witness: Vec<FreeWord>,
    /// Set when the state cap stopped the walk early; the bound is
    /// still valid, just over fewer sets.
    pub truncated: bool,
}

/// Walk generating sets of `F_rank` reachable from the standard basis
/// by at most `depth` Nielsen moves (inversions and one-sided
/// multiplications; swaps change nothing about a set) and take the
/// minimum independence number seen.
pub fn miof_upper_bound(
    rank: usize,
    depth: usize,
    limits: &MiofLimits,
) -> Result<MiofReport, GroupCalcError> {
    if rank == 0 {
        return Err(GroupCalcError::Invalid(
            "miof needs a free group of rank at least 1".into(),
        ));
    }
    if rank > 6 {
        return Err(GroupCalcError::LimitExceeded(format!(
            "Nielsen walk over F_{rank} is too wide; rank is capped at 6"
        )));
    }
    let iof_limits = IofLimits::default();

    let canonical = |mut state: Vec<FreeWord>| -> Vec<FreeWord> {
        state.sort();
        state
    };
    let basis: Vec<FreeWord> = (0..rank as u16).map(FreeWord::generator).collect();
    let start = canonical(basis);

    let mut seen: HashSet<Vec<FreeWord>> = HashSet::new();
    let mut queue: VecDeque<(Vec<FreeWord>, usize)> = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start, 0));

    let mut min_iof = usize::MAX;
    let mut witness: Vec<FreeWord> = Vec::new();
    let mut examined: u64 = 0;
    let mut truncated = false;

    while let Some((state, d)) = queue.pop_front() {
        examined += 1;
        let report = iof_free(&state, rank, &iof_limits)?;
        let value = report.exact.expect("word route is exact");
        if value < min_iof {
            min_iof = value;
            witness = state.clone();
        }
        if d == depth {
            continue;
        }

        let mut push = |next: Vec<FreeWord>, seen: &mut HashSet<Vec<FreeWord>>,
                        queue: &mut VecDeque<(Vec<FreeWord>, usize)>| {
            if next.iter().any(|w| w.len() > limits.max_word_len) {
                return;
            }
            if seen.len() >= limits.max_states {
                truncated = true;
                return;
            }
            let c = canonical(next);
            if seen.insert(c.clone()) {
                queue.push_back((c, d + 1));
            }
        };

        let k = state.len();
        for i in 0..k {
            let mut inv = state.clone();
            inv[i] = inv[i].inverse();
            push(inv, &mut seen, &mut queue);
            for j in 0..k {
                if i == j {
                    continue;
                }
                for invert_j in [false, true] {
                    let factor = if invert_j {
                        state[j].inverse()
                    } else {
                        state[j].clone()
                    };
                    let mut right = state.clone();
                    right[i] = right[i].mul(&factor);
                    push(right, &mut seen, &mut queue);
                    let mut left = state.clone();
                    left[i] = factor.mul(&left[i]);
                    push(left, &mut seen, &mut queue);
                }
            }
        }
    }

    Ok(MiofReport {
        rank,
        depth,
        generating_sets_examined: examined,
        min_iof,
        witness,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(ws: &[&str]) -> Vec<FreeWord> {
        ws.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn rank_of_redundant_set() {
        assert_eq!(subgroup_rank(&words(&["a", "b", "a b"]), 2).unwrap(), 2);
        assert_eq!(subgroup_rank(&words(&["a a", "a b", "b b"]), 2).unwrap(), 3);
        assert_eq!(subgroup_rank(&[], 2).unwrap(), 0);
    }

    #[test]
    fn iof_of_redundant_generating_set_is_two() {
        let report = iof_free(&words(&["a", "b", "a b"]), 2, &IofLimits::default()).unwrap();
        assert_eq!(report.exact, Some(2));
        assert_eq!(report.witness, vec![0, 1]);
    }

    #[test]
    fn iof_sees_through_duplicates_and_identities() {
        let report =
            iof_free(&words(&["a", "a", "1", "b"]), 2, &IofLimits::default()).unwrap();
        assert_eq!(report.exact, Some(2));
        assert_eq!(report.witness, vec![0, 3]);
    }

    #[test]
    fn iof_of_powers_is_one_each_but_pairs_collapse() {
        // a² and a³ generate ⟨a⟩ jointly: dependent as a pair, each
        // independent alone.
        let report = iof_free(&words(&["a a", "a a a"]), 1, &IofLimits::default()).unwrap();
        assert_eq!(report.exact, Some(1));
        assert_eq!(report.witness, vec![0]);
    }

    #[test]
    fn iof_limit_guards_the_sweep() {
        let too_many: Vec<FreeWord> = (0..13).map(|i| FreeWord::generator(i as u16)).collect();
        assert!(matches!(
            iof_free(&too_many, 13, &IofLimits::default()),
            Err(GroupCalcError::LimitExceeded(_))
        ));
    }

    #[test]
    fn quotient_collapses_words() {
        let kill: BTreeSet<usize> = [1].into_iter().collect();
        let image = quotient_map(&"a b a B".parse().unwrap(), &kill, 2).unwrap();
        assert_eq!(image.to_string(), "a a");
        let to_trivial: BTreeSet<usize> = [0, 1].into_iter().collect();
        let nothing = quotient_map(&"a b".parse().unwrap(), &to_trivial, 2).unwrap();
        assert!(nothing.is_identity());
    }

    #[test]
    fn quotient_check_on_the_swap_pair() {
        // Δ = {ab, ba} in F₂, kill b: both images become a.
        let kill: BTreeSet<usize> = [1].into_iter().collect();
        let report =
            iof_quotient_check(&words(&["a b", "b a"]), 2, &kill, &IofLimits::default()).unwrap();
        assert_eq!(report.before.exact, Some(2));
        assert_eq!(report.after.exact, Some(1));
        assert!(report.monotone);
    }

    #[test]
    fn miof_of_free_groups_is_the_rank() {
        for rank in 1..=3usize {
            let report = miof_upper_bound(rank, 2, &MiofLimits::default()).unwrap();
            assert_eq!(report.min_iof, rank, "rank {rank}");
            assert!(!report.truncated);
            assert!(report.generating_sets_examined > 1);
        }
    }

    #[test]
    fn miof_respects_state_cap() {
        let limits = MiofLimits {
            max_states: 10,
            max_word_len: 64,
        };
        let report = miof_upper_bound(2, 3, &limits).unwrap();
        assert!(report.truncated);
        assert_eq!(report.min_iof, 2);
    }
}
