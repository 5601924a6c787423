//! Free-product certificates inside `GL₂(ℚ(i)[X])`.
//!
//! Adjoin the unipotent `Λ = [[1, X], [0, 1]]` to a set `Γ` of exact
//! invertible matrices and consider alternating words
//! `γ₁Λ^{m₁}γ₂Λ^{m₂}⋯γ_kΛ^{m_k}` with every `mᵢ ≠ 0` and every `γᵢ`
//! nontrivial. When no `γᵢ` is upper triangular, the four entries of
//! such a word obey a rigid degree profile — in particular the
//! lower-right entry has degree exactly `k` — so the word cannot be
//! scalar. Sweeping all profiles up to a syllable depth therefore
//! certifies that `Γ` and `⟨Λ⟩` generate their free product on the
//! checked region.
//!
//! "No `γ` upper triangular" is arranged, not assumed: a common
//! conjugation moves a vector that is an eigenvector of no short word
//! to `(1, 0)ᵀ`, after which every short word has a nonzero
//! lower-left entry.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{Degree, GaussianRational, Mat2, Poly};

#[derive(Debug, Error)]
pub enum MagnusError {
    #[error("invalid alternating word: {0}")]
    InvalidWord(String),

    #[error("generator {index} is not invertible")]
    SingularGenerator { index: usize },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error(
        "no suitable vector among the first {candidates} candidates; \
         every candidate is an eigenvector of some short word"
    )]
    NormalizationFailed { candidates: usize },

    #[error("enumeration too large: {0}")]
    LimitExceeded(String),
}

/// An alternating word: syllables `(γᵢ, mᵢ)` standing for
/// `γ₁Λ^{m₁}⋯γ_kΛ^{m_k}`. Construction rejects empty words, zero
/// exponents, and identity `γ`s; upper-triangular `γ`s are allowed
/// (they are exactly what normalization exists to rule out).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingWord {
    syllables: Vec<(Mat2<GaussianRational>, i64)>,
}

impl AlternatingWord {
    pub fn new(syllables: Vec<(Mat2<GaussianRational>, i64)>) -> Result<Self, MagnusError> {
        if syllables.is_empty() {
            return Err(MagnusError::InvalidWord("no syllables".into()));
        }
        for (idx, (gamma, m)) in syllables.iter().enumerate() {
            if *m == 0 {
                return Err(MagnusError::InvalidWord(format!(
                    "syllable {idx} has zero exponent"
                )));
            }
            if gamma.is_identity() {
                return Err(MagnusError::InvalidWord(format!(
                    "syllable {idx} has identity gamma"
                )));
            }
        }
        Ok(AlternatingWord { syllables })
    }

    pub fn syllables(&self) -> &[(Mat2<GaussianRational>, i64)] {
        &self.syllables
    }

    pub fn syllable_count(&self) -> usize {
        self.syllables.len()
    }

    pub fn concat(&self, other: &AlternatingWord) -> AlternatingWord {
        let mut syllables = self.syllables.clone();
        syllables.extend(other.syllables.iter().cloned());
        AlternatingWord { syllables }
    }
}

/// `Λ^m = [[1, mX], [0, 1]]`.
pub fn lambda_power(m: i64) -> Mat2<Poly> {
    Mat2::new(
        Poly::one(),
        Poly::monomial(GaussianRational::from_int(m), 1),
        Poly::zero(),
        Poly::one(),
    )
}

/// `γ·Λ^m = [[a, amX + b], [c, cmX + d]]`, built without a general
/// matrix product.
pub fn syllable_matrix(gamma: &Mat2<GaussianRational>, m: i64) -> Mat2<Poly> {
    let mq = GaussianRational::from_int(m);
    Mat2::new(
        Poly::constant(gamma.a.clone()),
        Poly::from_coeffs(vec![gamma.b.clone(), &gamma.a * &mq]),
        Poly::constant(gamma.c.clone()),
        Poly::from_coeffs(vec![gamma.d.clone(), &gamma.c * &mq]),
    )
}

/// Image of the word under the embedding into `GL₂(ℚ(i)[X])`.
pub fn evaluate_word(word: &AlternatingWord) -> Mat2<Poly> {
    let mut acc = Mat2::<Poly>::identity();
    for (gamma, m) in &word.syllables {
        acc = acc.mul(&syllable_matrix(gamma, *m));
    }
    acc
}

/// Entry degrees of a word image, together with the syllable count
/// they are measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub syllables: usize,
    pub deg_a: Degree,
    pub deg_b: Degree,
    pub deg_c: Degree,
    pub deg_d: Degree,
}

impl DegreeProfile {
    pub fn of(image: &Mat2<Poly>, syllables: usize) -> Self {
        DegreeProfile {
            syllables,
            deg_a: image.a.degree(),
            deg_b: image.b.degree(),
            deg_c: image.c.degree(),
            deg_d: image.d.degree(),
        }
    }

    /// The profile a `k`-syllable word must satisfy: `deg a ≤ k−1`,
    /// `deg b ≤ k`, `deg c ≤ k−1`, and `deg d = k` exactly.
    pub fn is_valid(&self) -> bool {
        let k = self.syllables as i64;
        self.deg_a <= Degree::Finite(k - 1)
            && self.deg_b <= Degree::Finite(k)
            && self.deg_c <= Degree::Finite(k - 1)
            && self.deg_d == Degree::Finite(k)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProfileReport {
    pub profile: DegreeProfile,
    pub valid: bool,
    /// Whether the image is scalar (`b = c = 0`, `a = d`). A valid
    /// profile rules this out; recorded so invalid profiles say
    /// whether they are genuine counterexamples or merely broken
    /// hypotheses.
    pub image_scalar: bool,
}

/// Evaluate one word and measure it against the expected profile.
pub fn check_degree_profile(word: &AlternatingWord) -> ProfileReport {
    let image = evaluate_word(word);
    let profile = DegreeProfile::of(&image, word.syllable_count());
    ProfileReport {
        profile,
        valid: profile.is_valid(),
        image_scalar: image.is_scalar(),
    }
}

/// All distinct nontrivial products of at most `word_length` factors
/// drawn from the generators and their inverses, in deterministic
/// breadth-first order.
pub fn enumerate_ball(
    gens: &[Mat2<GaussianRational>],
    word_length: usize,
) -> Result<Vec<Mat2<GaussianRational>>, MagnusError> {
    let mut alphabet: Vec<Mat2<GaussianRational>> = Vec::with_capacity(gens.len() * 2);
    for (index, g) in gens.iter().enumerate() {
        let inv = g
            .inverse()
            .map_err(|_| MagnusError::SingularGenerator { index })?;
        alphabet.push(g.clone());
        alphabet.push(inv);
    }

    let identity = Mat2::<GaussianRational>::identity();
    let mut seen = std::collections::HashSet::new();
    seen.insert(identity.clone());
    let mut out: Vec<Mat2<GaussianRational>> = Vec::new();
    let mut frontier = vec![identity];
    for _ in 0..word_length {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &alphabet {
                let prod = m.mul(g);
                if seen.insert(prod.clone()) {
                    out.push(prod.clone());
                    next.push(prod);
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Witness that a common conjugation clears the setup's triangularity
/// obstruction: `witness_vector` is an eigenvector of no nontrivial
/// product of at most `word_length` generator letters, and
/// `conjugator` moves it to `(1, 0)ᵀ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormalizationCertificate {
    pub conjugator: Mat2<GaussianRational>,
    pub witness_vector: [GaussianRational; 2],
    pub word_length: usize,
    pub candidates_tried: usize,
}

fn is_eigenvector(m: &Mat2<GaussianRational>, v: &(GaussianRational, GaussianRational)) -> bool {
    let (x, y) = m.apply_to_vector(v);
    // Mv ∥ v ⟺ cross(Mv, v) = 0, exactly.
    (&(&x * &v.1) - &(&y * &v.0)).is_zero()
}

fn find_non_eigenvector_in(
    ball: &[Mat2<GaussianRational>],
    word_length: usize,
    pool_size: usize,
) -> Result<NormalizationCertificate, MagnusError> {
    for n in 0..pool_size {
        let v = (
            GaussianRational::one(),
            GaussianRational::from_int(n as i64),
        );
        if ball.iter().all(|m| !is_eigenvector(m, &v)) {
            // [[1, 0], [-n, 1]] sends (1, n)ᵀ to (1, 0)ᵀ.
            let conjugator = Mat2::new(
                GaussianRational::one(),
                GaussianRational::zero(),
                -GaussianRational::from_int(n as i64),
                GaussianRational::one(),
            );
            return Ok(NormalizationCertificate {
                conjugator,
                witness_vector: [v.0, v.1],
                word_length,
                candidates_tried: n + 1,
            });
        }
    }
    Err(MagnusError::NormalizationFailed {
        candidates: pool_size,
    })
}

/// Search the candidate vectors `(1, n)ᵀ`, `n = 0, 1, 2, …`, for one
/// that is an eigenvector of no nontrivial word of length at most
/// `word_length` in the generators. Each nontrivial matrix has at most
/// two eigendirections and the candidates are pairwise independent, so
/// any pool larger than twice the ball guarantees a hit.
pub fn find_non_eigenvector(
    gens: &[Mat2<GaussianRational>],
    word_length: usize,
    pool_size: usize,
) -> Result<NormalizationCertificate, MagnusError> {
    let ball = enumerate_ball(gens, word_length)?;
    find_non_eigenvector_in(&ball, word_length, pool_size)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertifyConfig {
    /// Ball radius: γ ranges over nontrivial products of at most this
    /// many generator letters.
    pub word_length: usize,
    /// Maximum syllable count k of the alternating words swept.
    pub syllable_depth: usize,
    /// Exponents range over 0 < |m| ≤ exponent_bound.
    pub exponent_bound: i64,
    /// How many candidate vectors normalization may try.
    pub candidate_pool: usize,
    /// Abort rather than start a sweep with more nodes than this.
    pub max_nodes: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            word_length: 3,
            syllable_depth: 3,
            exponent_bound: 2,
            candidate_pool: 256,
            max_nodes: 10_000_000,
        }
    }
}

impl CertifyConfig {
    fn validate(&self) -> Result<(), MagnusError> {
        if self.word_length == 0
            || self.syllable_depth == 0
            || self.exponent_bound <= 0
            || self.candidate_pool == 0
        {
            return Err(MagnusError::InvalidConfig(
                "word_length, syllable_depth, exponent_bound, and candidate_pool must be positive"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// A word whose image broke the expected profile, in the coordinates
/// the sweep ran in (after normalization, for certificates).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessWord {
    pub syllables: Vec<(Mat2<GaussianRational>, i64)>,
    pub profile: DegreeProfile,
    pub image_scalar: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    /// Every alternating word within the swept region has a valid
    /// degree profile, hence a non-scalar image.
    CertifiedToDepth,
    /// Some word broke the profile; its data is recorded.
    Refuted { witness: WitnessWord },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProfileSweep {
    /// Number of cyclically-canonical syllable tuples checked. Tuples
    /// that are proper rotations of a checked one are skipped: a
    /// rotation is conjugate to its representative, and scalarity is
    /// conjugation-invariant.
    pub words_checked: u64,
    pub first_invalid: Option<WitnessWord>,
}

fn is_cyclically_canonical(tuple: &[(usize, usize)]) -> bool {
    let k = tuple.len();
    for r in 1..k {
        let rotation = tuple[r..].iter().chain(tuple[..r].iter());
        if tuple.iter().cmp(rotation) == std::cmp::Ordering::Greater {
            return false;
        }
    }
    true
}

struct SweepState<'a> {
    syllables: &'a [Vec<Mat2<Poly>>],
    exponents: &'a [i64],
    gammas: &'a [Mat2<GaussianRational>],
    depth: usize,
    tuple: Vec<(usize, usize)>,
    words_checked: u64,
    first_invalid: Option<WitnessWord>,
}

impl SweepState<'_> {
    fn go(&mut self, prefix: &Mat2<Poly>) {
        let k = self.tuple.len();
        if k > 0 && is_cyclically_canonical(&self.tuple) {
            self.words_checked += 1;
            let profile = DegreeProfile::of(prefix, k);
            if !profile.is_valid() {
                self.first_invalid = Some(WitnessWord {
                    syllables: self
                        .tuple
                        .iter()
                        .map(|&(g, mi)| (self.gammas[g].clone(), self.exponents[mi]))
                        .collect(),
                    profile,
                    image_scalar: prefix.is_scalar(),
                });
            }
        }
        if k == self.depth || self.first_invalid.is_some() {
            return;
        }
        for g in 0..self.syllables.len() {
            for mi in 0..self.exponents.len() {
                self.tuple.push((g, mi));
                let product = prefix.mul(&self.syllables[g][mi]);
                self.go(&product);
                self.tuple.pop();
                if self.first_invalid.is_some() {
                    return;
                }
            }
        }
    }
}

/// Check the degree profile of every alternating word over the given
/// `γ` pool, up to `syllable_depth` syllables and exponent magnitude
/// `exponent_bound`, sharing prefix products across the enumeration.
/// Stops at the first invalid profile.
pub fn check_all_profiles(
    gammas: &[Mat2<GaussianRational>],
    syllable_depth: usize,
    exponent_bound: i64,
    max_nodes: u64,
) -> Result<ProfileSweep, MagnusError> {
    if gammas.is_empty() {
        return Ok(ProfileSweep {
            words_checked: 0,
            first_invalid: None,
        });
    }
    let exponents: Vec<i64> = (1..=exponent_bound)
        .flat_map(|m| [-m, m])
        .collect();

    let branch = (gammas.len() as u64).saturating_mul(exponents.len() as u64);
    let mut nodes: u64 = 0;
    let mut layer: u64 = 1;
    for _ in 0..syllable_depth {
        layer = layer.saturating_mul(branch);
        nodes = nodes.saturating_add(layer);
        if nodes > max_nodes {
            return Err(MagnusError::LimitExceeded(format!(
                "sweep would visit more than {max_nodes} words; \
                 lower the depth, exponent bound, or generator count"
            )));
        }
    }

    let syllables: Vec<Vec<Mat2<Poly>>> = gammas
        .iter()
        .map(|g| exponents.iter().map(|&m| syllable_matrix(g, m)).collect())
        .collect();

    let mut state = SweepState {
        syllables: &syllables,
        exponents: &exponents,
        gammas,
        depth: syllable_depth,
        tuple: Vec::with_capacity(syllable_depth),
        words_checked: 0,
        first_invalid: None,
    };
    state.go(&Mat2::<Poly>::identity());
    Ok(ProfileSweep {
        words_checked: state.words_checked,
        first_invalid: state.first_invalid,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FreeProductCertificate {
    pub generators: Vec<Mat2<GaussianRational>>,
    pub normalization: NormalizationCertificate,
    pub config: CertifyConfig,
    /// Nontrivial elements in the checked ball (the γ pool size).
    pub ball_size: usize,
    pub words_checked: u64,
    pub verdict: Verdict,
}

/// Certify that the group generated by `gens` together with `⟨Λ⟩`
/// sits inside `GL₂(ℚ(i)[X])` as a free product, to the depth the
/// config asks for.
pub fn certify_free_product(
    gens: &[Mat2<GaussianRational>],
    config: &CertifyConfig,
) -> Result<FreeProductCertificate, MagnusError> {
    config.validate()?;
    if gens.is_empty() {
        return Err(MagnusError::InvalidConfig("no generators".into()));
    }

    let ball = enumerate_ball(gens, config.word_length)?;
    for e in &ball {
        if e.is_scalar() {
            return Err(MagnusError::HypothesisViolation(format!(
                "the generators produce the nontrivial scalar {e} within \
                 word length {}; the free-product setup requires a \
                 scalar-free ball",
                config.word_length
            )));
        }
    }

    let normalization = find_non_eigenvector_in(&ball, config.word_length, config.candidate_pool)?;
    let p = &normalization.conjugator;
    let p_inv = p.inverse().expect("unipotent conjugator is invertible");
    let conjugated: Vec<Mat2<GaussianRational>> =
        ball.iter().map(|g| g.conjugate_by(p, &p_inv)).collect();

    debug_assert!(conjugated.iter().all(|g| !g.c.is_zero()));

    let sweep = check_all_profiles(
        &conjugated,
        config.syllable_depth,
        config.exponent_bound,
        config.max_nodes,
    )?;

    Ok(FreeProductCertificate {
        generators: gens.to_vec(),
        normalization,
        config: config.clone(),
        ball_size: ball.len(),
        words_checked: sweep.words_checked,
        verdict: match sweep.first_invalid {
            None => Verdict::CertifiedToDepth,
            Some(witness) => Verdict::Refuted { witness },
        },
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub consistent: bool,
    pub detail: String,
}

/// Re-check a stored certificate: hypotheses, the recorded witness
/// vector, and the profile sweep under the recorded config. The
/// candidate search is not repeated; the sweep is, because the
/// certificate's claim *is* the sweep.
pub fn verify_free_product(
    cert: &FreeProductCertificate,
) -> Result<VerifyReport, MagnusError> {
    cert.config.validate()?;
    let ball = enumerate_ball(&cert.generators, cert.config.word_length)?;
    if ball.len() != cert.ball_size {
        return Ok(VerifyReport {
            consistent: false,
            detail: format!(
                "ball has {} nontrivial elements, certificate recorded {}",
                ball.len(),
                cert.ball_size
            ),
        });
    }
    if let Some(s) = ball.iter().find(|e| e.is_scalar()) {
        return Ok(VerifyReport {
            consistent: false,
            detail: format!("ball contains the nontrivial scalar {s}"),
        });
    }

    let v = (
        cert.normalization.witness_vector[0].clone(),
        cert.normalization.witness_vector[1].clone(),
    );
    if let Some(bad) = ball.iter().find(|m| is_eigenvector(m, &v)) {
        return Ok(VerifyReport {
            consistent: false,
            detail: format!("recorded witness vector is an eigenvector of {bad}"),
        });
    }

    let p = &cert.normalization.conjugator;
    let p_inv = match p.inverse() {
        Ok(inv) => inv,
        Err(_) => {
            return Ok(VerifyReport {
                consistent: false,
                detail: "recorded conjugator is singular".into(),
            })
        }
    };
    let conjugated: Vec<Mat2<GaussianRational>> =
        ball.iter().map(|g| g.conjugate_by(p, &p_inv)).collect();
    if let Some(bad) = conjugated.iter().position(|g| g.c.is_zero()) {
        return Ok(VerifyReport {
            consistent: false,
            detail: format!(
                "conjugated ball element {bad} is upper triangular; \
                 the recorded conjugator does not normalize"
            ),
        });
    }

    let sweep = check_all_profiles(
        &conjugated,
        cert.config.syllable_depth,
        cert.config.exponent_bound,
        cert.config.max_nodes,
    )?;
    let verdict_matches = match (&cert.verdict, &sweep.first_invalid) {
        (Verdict::CertifiedToDepth, None) => true,
        (Verdict::Refuted { witness }, Some(found)) => witness.profile == found.profile,
        _ => false,
    };
    if !verdict_matches {
        return Ok(VerifyReport {
            consistent: false,
            detail: "recorded verdict does not match a fresh sweep".into(),
        });
    }
    if sweep.words_checked != cert.words_checked {
        return Ok(VerifyReport {
            consistent: false,
            detail: format!(
                "fresh sweep checked {} words, certificate recorded {}",
                sweep.words_checked, cert.words_checked
            ),
        });
    }
    Ok(VerifyReport {
        consistent: true,
        detail: format!(
            "verdict reproduced over {} words at depth {}",
            sweep.words_checked, cert.config.syllable_depth
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: &str, b: &str, c: &str, d: &str) -> Mat2<GaussianRational> {
        Mat2::new(
            a.parse().unwrap(),
            b.parse().unwrap(),
            c.parse().unwrap(),
            d.parse().unwrap(),
        )
    }

    fn word(syllables: Vec<(Mat2<GaussianRational>, i64)>) -> AlternatingWord {
        AlternatingWord::new(syllables).unwrap()
    }

    #[test]
    fn single_syllable_matches_closed_form() {
        let gamma = m("1", "0", "1", "1");
        let image = evaluate_word(&word(vec![(gamma, 1)]));
        assert_eq!(image.a, "1".parse().unwrap());
        assert_eq!(image.b, "X".parse().unwrap());
        assert_eq!(image.c, "1".parse().unwrap());
        assert_eq!(image.d, "1+X".parse().unwrap());
    }

    #[test]
    fn two_syllable_word_has_degree_two_corner() {
        let gamma = m("1", "0", "1", "1");
        let w = word(vec![(gamma.clone(), 1), (gamma, 1)]);
        let image = evaluate_word(&w);
        assert_eq!(image.a, "1+X".parse().unwrap());
        assert_eq!(image.b, "2*X+X^2".parse().unwrap());
        assert_eq!(image.c, "2+X".parse().unwrap());
        assert_eq!(image.d, "1+3*X+X^2".parse().unwrap());
        let report = check_degree_profile(&w);
        assert!(report.valid);
        assert_eq!(report.profile.deg_d, Degree::Finite(2));
    }

    #[test]
    fn profile_fails_without_normalization() {
        // Upper-triangular γ: the lower-right entry stays constant.
        let gamma = m("1", "1", "0", "1");
        let report = check_degree_profile(&word(vec![(gamma, 1)]));
        assert!(!report.valid);
        assert_eq!(report.profile.deg_d, Degree::Finite(0));
        assert!(!report.image_scalar);
    }

    #[test]
    fn word_construction_rejects_degenerate_input() {
        assert!(AlternatingWord::new(vec![]).is_err());
        assert!(AlternatingWord::new(vec![(m("1", "0", "1", "1"), 0)]).is_err());
        assert!(AlternatingWord::new(vec![(Mat2::identity(), 1)]).is_err());
    }

    #[test]
    fn evaluation_is_a_homomorphism() {
        let g1 = m("1", "0", "1", "1");
        let g2 = m("2", "1", "3", "2");
        let u = word(vec![(g1.clone(), 2), (g2.clone(), -1)]);
        let v = word(vec![(g2, 3), (g1, -2)]);
        let joined = u.concat(&v);
        assert_eq!(
            evaluate_word(&joined),
            evaluate_word(&u).mul(&evaluate_word(&v))
        );
    }

    #[test]
    fn parabolic_generator_normalizes_to_second_candidate() {
        let cert = find_non_eigenvector(&[m("1", "1", "0", "1")], 3, 256).unwrap();
        assert_eq!(cert.witness_vector[0], GaussianRational::one());
        assert_eq!(cert.witness_vector[1], GaussianRational::one());
        assert_eq!(cert.candidates_tried, 2);
    }

    #[test]
    fn diagonal_generator_normalizes_to_second_candidate() {
        let cert = find_non_eigenvector(&[m("2", "0", "0", "1/2")], 2, 256).unwrap();
        assert_eq!(cert.witness_vector[1], GaussianRational::one());
    }

    #[test]
    fn ball_of_infinite_order_element_is_clean() {
        let ball = enumerate_ball(&[m("2", "0", "0", "1/2")], 3).unwrap();
        assert_eq!(ball.len(), 6);
        assert!(ball.iter().all(|e| !e.is_identity()));
    }

    #[test]
    fn certify_small_diagonal_case() {
        let cert = certify_free_product(
            &[m("2", "0", "0", "1/2")],
            &CertifyConfig {
                word_length: 2,
                syllable_depth: 2,
                exponent_bound: 1,
                ..CertifyConfig::default()
            },
        )
        .unwrap();
        assert!(matches!(cert.verdict, Verdict::CertifiedToDepth));
        // 4 γ choices × 2 exponents = 8 singletons; 64 pairs, of which
        // 36 are cyclically canonical.
        assert_eq!(cert.words_checked, 8 + 36);
        let verify = verify_free_product(&cert).unwrap();
        assert!(verify.consistent, "{}", verify.detail);
    }

    #[test]
    fn scalar_in_ball_is_a_hypothesis_violation() {
        // Order 4: its square is -I.
        let rot = m("0", "-1", "1", "0");
        let err = certify_free_product(
            &[rot],
            &CertifyConfig {
                word_length: 2,
                syllable_depth: 1,
                exponent_bound: 1,
                ..CertifyConfig::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, MagnusError::HypothesisViolation(_)));
    }

    #[test]
    fn certificate_round_trips_through_json() {
        let cert = certify_free_product(
            &[m("2", "0", "0", "1/2")],
            &CertifyConfig {
                word_length: 1,
                syllable_depth: 1,
                exponent_bound: 1,
                ..CertifyConfig::default()
            },
        )
        .unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: FreeProductCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back.words_checked, cert.words_checked);
        assert_eq!(back.generators, cert.generators);
        let verify = verify_free_product(&back).unwrap();
        assert!(verify.consistent);
    }

    #[test]
    fn sweep_size_guard_trips() {
        let err = check_all_profiles(&[m("1", "0", "1", "1")], 30, 5, 1000).unwrap_err();
        assert!(matches!(err, MagnusError::LimitExceeded(_)));
    }
}
