//! Seeded multi-start Nelder–Mead search for an obstruction point.
//!
//! The margin `1/2 − Σ 1/(1 + e^{dᵢ})` is minimised over basepoints
//! parametrised as `(x, y, u) ↦ (x + iy, e^u)`, which keeps the height
//! positive without constraints. The landscape is smooth but can have
//! several basins, hence the restarts.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{log2km1_test, HyperbolicError, MoebiusNumeric, ObstructionReport, UHPoint};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MinimizeConfig {
    /// Independent starts; the first is the caller's point, the rest
    /// are seeded perturbations of it.
    pub restarts: usize,
    /// Iteration budget per start.
    pub max_iters: usize,
    pub seed: u64,
    /// Verdict tolerance, forwarded to the displacement test.
    pub tol: f64,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        MinimizeConfig {
            restarts: 100,
            max_iters: 300,
            seed: crate::DEFAULT_SEED,
            tol: crate::DEFAULT_TOL,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinimizeOutcome {
    /// Report at the best (lowest-margin) point found.
    pub best: ObstructionReport,
    pub evaluations: u64,
    /// Whether the start that produced the best point converged
    /// before its iteration budget ran out.
    pub converged: bool,
    pub restarts: usize,
}

fn point_from(coords: [f64; 3]) -> Option<UHPoint> {
    let t = coords[2].exp();
    UHPoint::new(Complex64::new(coords[0], coords[1]), t).ok()
}

/// Standard Nelder–Mead on ℝ³. Returns (best coords, best value,
/// converged, evaluations).
fn nelder_mead(
    f: &mut impl FnMut(&[f64; 3]) -> f64,
    x0: [f64; 3],
    max_iters: usize,
) -> ([f64; 3], f64, bool, u64) {
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink
    const STEP: f64 = 0.5;
    const EPS: f64 = 1e-12;

    let mut evals: u64 = 0;
    let mut eval = |x: &[f64; 3], evals: &mut u64| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut simplex: Vec<([f64; 3], f64)> = Vec::with_capacity(4);
    let v0 = eval(&x0, &mut evals);
    simplex.push((x0, v0));
    for i in 0..3 {
        let mut x = x0;
        x[i] += STEP;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let mut converged = false;
    for _ in 0..max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[3].1 - simplex[0].1;
        let diameter: f64 = (0..3)
            .map(|i| (simplex[3].0[i] - simplex[0].0[i]).abs())
            .fold(0.0, f64::max);
        if spread.abs() < EPS && diameter < EPS {
            converged = true;
            break;
        }

        let centroid = {
            let mut c = [0.0; 3];
            for (x, _) in &simplex[..3] {
                for i in 0..3 {
                    c[i] += x[i] / 3.0;
                }
            }
            c
        };
        let worst = simplex[3];

        let reflect = std::array::from_fn(|i| centroid[i] + ALPHA * (centroid[i] - worst.0[i]));
        let fr = eval(&reflect, &mut evals);

        if fr < simplex[0].1 {
            let expand = std::array::from_fn(|i| centroid[i] + GAMMA * (reflect[i] - centroid[i]));
            let fe = eval(&expand, &mut evals);
            simplex[3] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[2].1 {
            simplex[3] = (reflect, fr);
        } else {
            let contract_base = if fr < worst.1 { reflect } else { worst.0 };
            let contracted =
                std::array::from_fn(|i| centroid[i] + RHO * (contract_base[i] - centroid[i]));
            let fc = eval(&contracted, &mut evals);
            if fc < worst.1.min(fr) {
                simplex[3] = (contracted, fc);
            } else {
                let best = simplex[0].0;
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk =
                        std::array::from_fn(|i| best[i] + SIGMA * (entry.0[i] - best[i]));
                    let fs = eval(&shrunk, &mut evals);
                    *entry = (shrunk, fs);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    (simplex[0].0, simplex[0].1, converged, evals)
}

/// Hunt for a basepoint where the displacement test fails. Returns
/// the report at the best point found, whether or not it obstructs.
pub fn minimize_basepoint(
    mats: &[MoebiusNumeric],
    init: &UHPoint,
    config: &MinimizeConfig,
) -> Result<MinimizeOutcome, HyperbolicError> {
    if mats.len() < 2 {
        return Err(HyperbolicError::NotEnoughMatrices(mats.len()));
    }
    if config.restarts == 0 || config.max_iters == 0 {
        return Err(HyperbolicError::InvalidConfig(
            "restarts and max_iters must be positive".into(),
        ));
    }

    let mut objective = |coords: &[f64; 3]| -> f64 {
        match point_from(*coords) {
            Some(p) => match log2km1_test(mats, &p, config.tol) {
                Ok(report) => report.margin,
                Err(_) => f64::INFINITY,
            },
            None => f64::INFINITY,
        }
    };

    let base = [init.z.re, init.z.im, init.t.ln()];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best_coords = base;
    let mut best_value = f64::INFINITY;
    let mut best_converged = false;
    let mut evaluations: u64 = 0;

    for restart in 0..config.restarts {
        let start = if restart == 0 {
            base
        } else {
            [
                base[0] + rng.gen_range(-4.0..4.0),
                base[1] + rng.gen_range(-4.0..4.0),
                base[2] + rng.gen_range(-2.0..2.0),
            ]
        };
        let (coords, value, converged, evals) =
            nelder_mead(&mut objective, start, config.max_iters);
        evaluations += evals;
        if value < best_value {
            best_value = value;
            best_coords = coords;
            best_converged = converged;
        }
    }

    let best_point = point_from(best_coords).unwrap_or(*init);
    let best = log2km1_test(mats, &best_point, config.tol)?;
    Ok(MinimizeOutcome {
        best,
        evaluations,
        converged: best_converged,
        restarts: config.restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::ObstructionVerdict;

    fn translation(b: Complex64) -> MoebiusNumeric {
        MoebiusNumeric::new(
            Complex64::new(1.0, 0.0),
            b,
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn finds_the_obstruction_away_from_the_start() {
        // Short translations obstruct high above the origin; start low
        // and far away so the minimiser has to travel.
        let g1 = translation(Complex64::new(0.5, 0.0));
        let g2 = translation(Complex64::new(0.0, 0.5));
        let start = UHPoint::new(Complex64::new(20.0, -15.0), 0.01).unwrap();
        let cfg = MinimizeConfig {
            restarts: 20,
            ..MinimizeConfig::default()
        };
        let out = minimize_basepoint(&[g1, g2], &start, &cfg).unwrap();
        assert_eq!(out.best.verdict, ObstructionVerdict::Obstructed);
        assert!(out.best.margin < -1e-3, "margin = {}", out.best.margin);
    }

    #[test]
    fn deterministic_for_a_fixed_seed() {
        let g1 = translation(Complex64::new(3.0, 0.0));
        let g2 = translation(Complex64::new(0.0, 3.0));
        let start = UHPoint::j();
        let cfg = MinimizeConfig {
            restarts: 8,
            ..MinimizeConfig::default()
        };
        let a = minimize_basepoint(&[g1, g2], &start, &cfg).unwrap();
        let b = minimize_basepoint(&[g1, g2], &start, &cfg).unwrap();
        assert_eq!(a.best.margin, b.best.margin);
        assert_eq!(a.best.basepoint, b.best.basepoint);
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn respects_the_matrix_count_precondition() {
        let g = translation(Complex64::new(1.0, 0.0));
        assert!(minimize_basepoint(&[g], &UHPoint::j(), &MinimizeConfig::default()).is_err());
    }
}
