//! Ping-pong certificates from isometric disks, and the Jørgensen
//! inequality as a cheap negative filter.
//!
//! For `g = [[a, b], [c, d]]` with determinant 1 and `c ≠ 0`, the
//! isometric disk `I(g)` has center `−d/c` and radius `1/|c|`; the
//! disk of the inverse has center `a/c`. When the `2k` disks of `k`
//! generators and their inverses are pairwise disjoint, ping-pong
//! applies: the group is discrete and free of rank `k`, with the
//! generators as a basis.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyperbolic::{c64, HyperbolicError, MoebiusNumeric};

#[derive(Debug, Error)]
pub enum FreenessError {
    #[error(
        "matrix {index} fixes infinity (|c| ≤ {tol:.1e}); its isometric disk is undefined"
    )]
    DegenerateDisk { index: usize, tol: f64 },

    #[error("need at least one matrix")]
    Empty,

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
}

/// Which generator a disk belongs to, and whether it is the disk of
/// the inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskLabel {
    pub generator: usize,
    pub inverse: bool,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct IsometricDisk {
    #[serde(with = "c64")]
    pub center: Complex64,
    pub radius: f64,
    pub label: DiskLabel,
}

/// The disks of `g` and `g⁻¹`. Errors when `|c| ≤ tol`, i.e. when `g`
/// fixes infinity and has no isometric circle.
pub fn isometric_disks(
    g: &MoebiusNumeric,
    index: usize,
    tol: f64,
) -> Result<(IsometricDisk, IsometricDisk), FreenessError> {
    let c = g.c();
    if c.norm() <= tol {
        return Err(FreenessError::DegenerateDisk { index, tol });
    }
    let radius = 1.0 / c.norm();
    Ok((
        IsometricDisk {
            center: -g.d() / c,
            radius,
            label: DiskLabel {
                generator: index,
                inverse: false,
            },
        },
        IsometricDisk {
            center: g.a() / c,
            radius,
            label: DiskLabel {
                generator: index,
                inverse: true,
            },
        },
    ))
}

/// Build the determinant-1 matrix whose isometric disk is the circle
/// of radius `r` about `p` and whose inverse's disk is the one about
/// `q`. Handy for manufacturing certified examples.
pub fn generator_with_disks(
    p: Complex64,
    q: Complex64,
    r: f64,
) -> Result<MoebiusNumeric, FreenessError> {
    if !(r.is_finite() && r > 0.0) {
        return Err(FreenessError::InvalidConfig(format!(
            "disk radius must be positive, got {r}"
        )));
    }
    let rc = Complex64::new(r, 0.0);
    Ok(MoebiusNumeric::new(q / rc, -p * q / rc - rc, 1.0 / rc, -p / rc)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SchottkyVerdict {
    /// All `2k` disks pairwise disjoint with at least the required
    /// margin: the group is discrete and free on the given generators.
    Certified,
    /// Some pair of disks comes too close; nothing is concluded.
    Failed { worst_pair: (DiskLabel, DiskLabel) },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchottkyCertificate {
    pub generators: Vec<MoebiusNumeric>,
    /// Conjugation applied before disks were taken (`None` when the
    /// generators were usable as given). Conjugation changes no
    /// group-theoretic conclusion.
    pub conjugator: Option<MoebiusNumeric>,
    pub conjugation_seed: Option<u64>,
    pub disks: Vec<IsometricDisk>,
    /// Smallest gap `|cᵢ−cⱼ| − rᵢ − rⱼ` over disk pairs.
    pub min_gap: f64,
    pub required_margin: f64,
    pub verdict: SchottkyVerdict,
}

fn gap(a: &IsometricDisk, b: &IsometricDisk) -> f64 {
    (a.center - b.center).norm() - a.radius - b.radius
}

fn certify_from_disks(
    generators: Vec<MoebiusNumeric>,
    conjugator: Option<MoebiusNumeric>,
    conjugation_seed: Option<u64>,
    disks: Vec<IsometricDisk>,
    margin: f64,
) -> SchottkyCertificate {
    let mut min_gap = f64::INFINITY;
    let mut worst = (disks[0].label, disks[0].label);
    for i in 0..disks.len() {
        for j in (i + 1)..disks.len() {
            let g = gap(&disks[i], &disks[j]);
            if g < min_gap {
                min_gap = g;
                worst = (disks[i].label, disks[j].label);
            }
        }
    }
    let verdict = if disks.len() < 2 || min_gap >= margin {
        SchottkyVerdict::Certified
    } else {
        SchottkyVerdict::Failed { worst_pair: worst }
    };
    SchottkyCertificate {
        generators,
        conjugator,
        conjugation_seed,
        disks,
        min_gap,
        required_margin: margin,
        verdict,
    }
}

fn disks_of(
    mats: &[MoebiusNumeric],
    tol: f64,
) -> Result<Vec<IsometricDisk>, FreenessError> {
    let mut disks = Vec::with_capacity(mats.len() * 2);
    for (index, g) in mats.iter().enumerate() {
        let (d1, d2) = isometric_disks(g, index, tol)?;
        disks.push(d1);
        disks.push(d2);
    }
    Ok(disks)
}

/// Certify the generators by disk disjointness. `margin` is the gap
/// every pair must clear (guards float error); `tol` is the
/// degeneracy cutoff for `|c|`.
pub fn certify_schottky(
    mats: &[MoebiusNumeric],
    margin: f64,
    tol: f64,
) -> Result<SchottkyCertificate, FreenessError> {
    if mats.is_empty() {
        return Err(FreenessError::Empty);
    }
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(FreenessError::InvalidConfig(format!(
            "margin must be non-negative, got {margin}"
        )));
    }
    let disks = disks_of(mats, tol)?;
    Ok(certify_from_disks(mats.to_vec(), None, None, disks, margin))
}

/// Like [`certify_schottky`], but when some generator fixes infinity,
/// retry once after conjugating the whole set by a seeded random
/// rotation (which moves infinity off every fixed-point set almost
/// surely, and changes nothing group-theoretic).
pub fn certify_schottky_with_retry(
    mats: &[MoebiusNumeric],
    margin: f64,
    tol: f64,
    seed: u64,
) -> Result<SchottkyCertificate, FreenessError> {
    match certify_schottky(mats, margin, tol) {
        Err(FreenessError::DegenerateDisk { .. }) => {}
        other => return other,
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta: f64 = rng.gen_range(0.2..1.4);
    let rot = MoebiusNumeric::new(
        Complex64::new(theta.cos(), 0.0),
        Complex64::new(theta.sin(), 0.0),
        Complex64::new(-theta.sin(), 0.0),
        Complex64::new(theta.cos(), 0.0),
    )?;
    let rot_inv = rot.inverse();
    let conjugated: Vec<MoebiusNumeric> = mats
        .iter()
        .map(|g| rot.compose(g).compose(&rot_inv))
        .collect();
    let disks = disks_of(&conjugated, tol)?;
    Ok(certify_from_disks(
        mats.to_vec(),
        Some(rot),
        Some(seed),
        disks,
        margin,
    ))
}

/// Recompute a stored certificate's disks and gap from its recorded
/// generators and conjugator, and compare against what it claims.
pub fn verify_schottky(cert: &SchottkyCertificate, tol: f64) -> Result<bool, FreenessError> {
    if cert.generators.is_empty() {
        return Err(FreenessError::Empty);
    }
    let applied: Vec<MoebiusNumeric> = match &cert.conjugator {
        None => cert.generators.clone(),
        Some(r) => {
            let r_inv = r.inverse();
            cert.generators
                .iter()
                .map(|g| r.compose(g).compose(&r_inv))
                .collect()
        }
    };
    let disks = disks_of(&applied, tol)?;
    let fresh = certify_from_disks(
        cert.generators.clone(),
        cert.conjugator,
        cert.conjugation_seed,
        disks,
        cert.required_margin,
    );
    let gap_matches = (fresh.min_gap - cert.min_gap).abs() <= 1e-12 * (1.0 + cert.min_gap.abs());
    Ok(gap_matches && fresh.verdict == cert.verdict)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JorgensenVerdict {
    /// `|tr²A − 4| + |tr[A,B] − 2| < 1 − tol`: the pair generates a
    /// group that is not both discrete and non-elementary, so it can
    /// never be an independent pair inside a discrete group.
    Violated,
    /// The inequality holds; no conclusion in either direction.
    Satisfied,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JorgensenReport {
    pub value: f64,
    pub tolerance: f64,
    pub verdict: JorgensenVerdict,
}

/// Jørgensen's trace inequality for a pair. Only the `Violated` arm
/// carries information.
pub fn jorgensen_filter(a: &MoebiusNumeric, b: &MoebiusNumeric, tol: f64) -> JorgensenReport {
    let tr_a = a.trace();
    let commutator = a
        .compose(b)
        .compose(&a.inverse())
        .compose(&b.inverse());
    let value =
        (tr_a * tr_a - Complex64::new(4.0, 0.0)).norm() + (commutator.trace() - Complex64::new(2.0, 0.0)).norm();
    let verdict = if value < 1.0 - tol {
        JorgensenVerdict::Violated
    } else {
        JorgensenVerdict::Satisfied
    };
    JorgensenReport {
        value,
        tolerance: tol,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// The classical pair with disks of radius 1 at ±10 and ±10i.
    pub(crate) fn ring_pair() -> (MoebiusNumeric, MoebiusNumeric) {
        (
            generator_with_disks(c(-10.0, 0.0), c(10.0, 0.0), 1.0).unwrap(),
            generator_with_disks(c(0.0, -10.0), c(0.0, 10.0), 1.0).unwrap(),
        )
    }

    #[test]
    fn disk_data_matches_hand_computation() {
        let g = MoebiusNumeric::new(c(10.0, 0.0), c(99.0, 0.0), c(1.0, 0.0), c(10.0, 0.0)).unwrap();
        let (d, dinv) = isometric_disks(&g, 0, 1e-9).unwrap();
        assert!((d.center - c(-10.0, 0.0)).norm() < 1e-12);
        assert!((dinv.center - c(10.0, 0.0)).norm() < 1e-12);
        assert!((d.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generator_builder_reproduces_the_classical_example() {
        let g1 = generator_with_disks(c(-10.0, 0.0), c(10.0, 0.0), 1.0).unwrap();
        assert!((g1.a() - c(10.0, 0.0)).norm() < 1e-12);
        assert!((g1.b() - c(99.0, 0.0)).norm() < 1e-12);
        assert!((g1.c() - c(1.0, 0.0)).norm() < 1e-12);
        assert!((g1.d() - c(10.0, 0.0)).norm() < 1e-12);

        let g2 = generator_with_disks(c(0.0, -10.0), c(0.0, 10.0), 1.0).unwrap();
        assert!((g2.a() - c(0.0, 10.0)).norm() < 1e-12);
        assert!((g2.b() - c(-101.0, 0.0)).norm() < 1e-12);
        assert!((g2.c() - c(1.0, 0.0)).norm() < 1e-12);
        assert!((g2.d() - c(0.0, 10.0)).norm() < 1e-12);
    }

    #[test]
    fn classical_pair_certifies() {
        let (g1, g2) = ring_pair();
        let cert = certify_schottky(&[g1, g2], 1e-6, 1e-9).unwrap();
        assert_eq!(cert.verdict, SchottkyVerdict::Certified);
        // Closest pair of the four disks: adjacent at distance 10√2.
        assert!((cert.min_gap - (200.0_f64.sqrt() - 2.0)).abs() < 1e-9);
        assert!(verify_schottky(&cert, 1e-9).unwrap());
    }

    #[test]
    fn certified_words_stay_far_from_the_scalars() {
        // Ping-pong soundness, checked the pedestrian way: no reduced
        // word of length <= 8 in a certified pair lands near ±I.
        let (g1, g2) = ring_pair();
        let alphabet = [g1, g1.inverse(), g2, g2.inverse()];

        fn scalar_distance(m: &MoebiusNumeric) -> f64 {
            let to = |s: f64| {
                (m.a() - c(s, 0.0))
                    .norm()
                    .max(m.b().norm())
                    .max(m.c().norm())
                    .max((m.d() - c(s, 0.0)).norm())
            };
            to(1.0).min(to(-1.0))
        }

        fn walk(
            alphabet: &[MoebiusNumeric; 4],
            prefix: &MoebiusNumeric,
            last: usize,
            depth_left: usize,
            checked: &mut u64,
        ) {
            for (i, g) in alphabet.iter().enumerate() {
                if i == (last ^ 1) {
                    continue;
                }
                let word = prefix.compose(g);
                assert!(
                    scalar_distance(&word) > 1e-6,
                    "reduced word hit a scalar after letter {i}"
                );
                *checked += 1;
                if depth_left > 1 {
                    walk(alphabet, &word, i, depth_left - 1, checked);
                }
            }
        }

        let mut checked = 0;
        for (i, g) in alphabet.iter().enumerate() {
            assert!(scalar_distance(g) > 1e-6);
            checked += 1;
            walk(&alphabet, g, i, 7, &mut checked);
        }
        // 4 first letters, 3 continuations each: 4(3^8 - 1)/2 words.
        assert_eq!(checked, 4 * (3u64.pow(8) - 1) / 2);
    }

    #[test]
    fn disk_boundary_maps_to_the_partner_boundary() {
        let (g1, g2) = ring_pair();
        for g in [g1, g2, g1.inverse(), g2.inverse()] {
            let (disk, partner) = isometric_disks(&g, 0, 1e-9).unwrap();
            for step in 0..64 {
                let theta = 2.0 * std::f64::consts::PI * step as f64 / 64.0;
                let z = disk.center + disk.radius * c(theta.cos(), theta.sin());
                let w = (g.a() * z + g.b()) / (g.c() * z + g.d());
                assert!(
                    ((w - partner.center).norm() - partner.radius).abs() <= 1e-6,
                    "boundary point {z} left the partner circle at {w}"
                );
            }
        }
    }

    #[test]
    fn overlapping_disks_fail() {
        let g1 = generator_with_disks(c(-1.0, 0.0), c(1.0, 0.0), 1.5).unwrap();
        let cert = certify_schottky(&[g1], 1e-6, 1e-9).unwrap();
        match cert.verdict {
            SchottkyVerdict::Failed { worst_pair } => {
                assert_eq!(worst_pair.0.generator, 0);
                assert_eq!(worst_pair.1.generator, 0);
            }
            SchottkyVerdict::Certified => panic!("disks overlap, must not certify"),
        }
        assert!(cert.min_gap < 0.0);
    }

    #[test]
    fn upper_triangular_generators_retry_with_conjugation() {
        // Loxodromic but fixing infinity: the direct route degenerates,
        // the conjugated retry certifies.
        let lox =
            MoebiusNumeric::new(c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!(matches!(
            certify_schottky(&[lox], 1e-6, 1e-9),
            Err(FreenessError::DegenerateDisk { .. })
        ));
        let cert = certify_schottky_with_retry(&[lox], 1e-6, 1e-9, 7).unwrap();
        assert!(cert.conjugator.is_some());
        assert_eq!(cert.conjugation_seed, Some(7));
        assert_eq!(cert.verdict, SchottkyVerdict::Certified);
        assert!(verify_schottky(&cert, 1e-9).unwrap());
    }

    #[test]
    fn jorgensen_flags_the_identity_pair() {
        let id = MoebiusNumeric::identity();
        let report = jorgensen_filter(&id, &id, 1e-9);
        assert!(report.value.abs() < 1e-12);
        assert_eq!(report.verdict, JorgensenVerdict::Violated);
    }

    #[test]
    fn jorgensen_passes_a_certified_pair() {
        let (g1, g2) = ring_pair();
        let report = jorgensen_filter(&g1, &g2, 1e-9);
        assert_eq!(report.verdict, JorgensenVerdict::Satisfied);
        assert!(report.value >= 1.0 - 1e-9);
    }

    #[test]
    fn certificate_round_trips_through_json() {
        let (g1, g2) = ring_pair();
        let cert = certify_schottky(&[g1, g2], 1e-6, 1e-9).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: SchottkyCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back.verdict, cert.verdict);
        assert_eq!(back.min_gap, cert.min_gap);
        assert!(verify_schottky(&back, 1e-9).unwrap());
    }
}
