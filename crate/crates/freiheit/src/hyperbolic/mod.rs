//! Upper half-space model of hyperbolic 3-space, numerically.
//!
//! Points are `(z, t)` with `z ∈ ℂ`, `t > 0`. Matrices act through the
//! Poincaré extension of their Möbius action on the boundary. The
//! headline check: for `k ≥ 2` isometries that are independent inside
//! a discrete group, `Σᵢ 1/(1 + e^{dᵢ}) ≤ 1/2` holds at every point,
//! where `dᵢ` is the displacement of the point by the i-th isometry.
//! A point where the sum exceeds `1/2` is an *obstruction*: the
//! isometries cannot be simultaneously discrete and independent.

pub mod minimize;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{GaussianRational, Mat2};

#[derive(Debug, Error)]
pub enum HyperbolicError {
    #[error("invalid point: z = {z:?}, t = {t} (need finite coordinates, t > 0)")]
    InvalidPoint { z: (f64, f64), t: f64 },

    #[error("matrix is numerically singular (|det| = {det_abs:.3e})")]
    SingularMatrix { det_abs: f64 },

    #[error("matrix entries must be finite")]
    NonFiniteMatrix,

    #[error("displacement test needs at least two matrices, got {0}")]
    NotEnoughMatrices(usize),

    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

/// Complex numbers cross the JSON boundary as `[re, im]`.
pub(crate) mod c64 {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [v.re, v.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// A point of H³: boundary coordinate `z`, height `t > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UHPoint {
    #[serde(with = "c64")]
    pub z: Complex64,
    pub t: f64,
}

impl UHPoint {
    pub fn new(z: Complex64, t: f64) -> Result<Self, HyperbolicError> {
        if !z.re.is_finite() || !z.im.is_finite() || !t.is_finite() || t <= 0.0 {
            return Err(HyperbolicError::InvalidPoint {
                z: (z.re, z.im),
                t,
            });
        }
        Ok(UHPoint { z, t })
    }

    /// The distinguished point `j = (0, 1)`.
    pub fn j() -> Self {
        UHPoint {
            z: Complex64::new(0.0, 0.0),
            t: 1.0,
        }
    }
}

impl<'de> Deserialize<'de> for UHPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            z: [f64; 2],
            t: f64,
        }
        let raw = Raw::deserialize(d)?;
        UHPoint::new(Complex64::new(raw.z[0], raw.z[1]), raw.t).map_err(serde::de::Error::custom)
    }
}

/// A Möbius transformation, stored normalized to determinant 1 (the
/// constructor divides by a square root of the determinant; the
/// leftover ±1 ambiguity never matters here).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MoebiusNumeric {
    #[serde(with = "c64")]
    a: Complex64,
    #[serde(with = "c64")]
    b: Complex64,
    #[serde(with = "c64")]
    c: Complex64,
    #[serde(with = "c64")]
    d: Complex64,
}

impl MoebiusNumeric {
    pub fn new(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    ) -> Result<Self, HyperbolicError> {
        for e in [a, b, c, d] {
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(HyperbolicError::NonFiniteMatrix);
            }
        }
        let det = a * d - b * c;
        if det.norm() < 1e-12 {
            return Err(HyperbolicError::SingularMatrix {
                det_abs: det.norm(),
            });
        }
        let s = det.sqrt().inv();
        Ok(MoebiusNumeric {
            a: a * s,
            b: b * s,
            c: c * s,
            d: d * s,
        })
    }

    pub fn identity() -> Self {
        MoebiusNumeric {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }
    pub fn b(&self) -> Complex64 {
        self.b
    }
    pub fn c(&self) -> Complex64 {
        self.c
    }
    pub fn d(&self) -> Complex64 {
        self.d
    }

    /// Determinant-1 inverse: `[[d, -b], [-c, a]]`.
    pub fn inverse(&self) -> Self {
        MoebiusNumeric {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Plain product. Determinant-1 inputs keep the product there to
    /// representation accuracy; renormalizing by the computed
    /// determinant would inject cancellation noise once entries are
    /// large (for entries of size E, `ad - bc` carries absolute error
    /// on the order of E² ulps).
    pub fn compose(&self, rhs: &Self) -> Self {
        MoebiusNumeric {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Lossy bridge from the exact world.
    pub fn from_exact(m: &Mat2<GaussianRational>) -> Result<Self, HyperbolicError> {
        let conv = |g: &GaussianRational| {
            let (re, im) = g.to_f64_parts();
            Complex64::new(re, im)
        };
        MoebiusNumeric::new(conv(&m.a), conv(&m.b), conv(&m.c), conv(&m.d))
    }

    /// Poincaré extension of the boundary action. For determinant 1:
    /// with `D = |cz + d|² + |c|²t²`,
    /// `z' = ((az + b)·conj(cz + d) + a·conj(c)·t²) / D` and `t' = t / D`.
    pub fn act(&self, p: &UHPoint) -> UHPoint {
        let w = self.c * p.z + self.d;
        let t2 = p.t * p.t;
        let denom = w.norm_sqr() + self.c.norm_sqr() * t2;
        UHPoint {
            z: ((self.a * p.z + self.b) * w.conj() + self.a * self.c.conj() * t2) / denom,
            t: p.t / denom,
        }
    }

    /// `(|a|² + |b|² + |c|² + |d|²) / 2`, which equals
    /// `cosh(displacement at j)` for determinant-1 matrices.
    pub fn frobenius_cosh(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()) / 2.0
    }
}

impl<'de> Deserialize<'de> for MoebiusNumeric {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: [f64; 2],
            b: [f64; 2],
            c: [f64; 2],
            d: [f64; 2],
        }
        let r = Raw::deserialize(d)?;
        let c = |p: [f64; 2]| Complex64::new(p[0], p[1]);
        MoebiusNumeric::new(c(r.a), c(r.b), c(r.c), c(r.d)).map_err(serde::de::Error::custom)
    }
}

/// Hyperbolic distance: `cosh d = 1 + (|z₁−z₂|² + (t₁−t₂)²) / (2t₁t₂)`.
pub fn dist(p: &UHPoint, q: &UHPoint) -> f64 {
    let cosh_d = 1.0 + ((p.z - q.z).norm_sqr() + (p.t - q.t).powi(2)) / (2.0 * p.t * q.t);
    cosh_d.acosh()
}

/// How far `a` moves `p`.
pub fn displacement(a: &MoebiusNumeric, p: &UHPoint) -> f64 {
    dist(p, &a.act(p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionVerdict {
    /// The displacement inequality holds here (up to tolerance).
    Consistent,
    /// The inequality fails here, so no ambient discrete group can
    /// contain these matrices as independent elements.
    Obstructed,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub basepoint: UHPoint,
    pub displacements: Vec<f64>,
    /// `Σ 1/(1 + e^{dᵢ})`.
    pub sum: f64,
    /// `1/2 − sum`; negative beyond tolerance means obstructed.
    pub margin: f64,
    pub tolerance: f64,
    /// `log(2k−1)`: if every displacement clears this, the sum test
    /// cannot fail at this point.
    pub length_threshold: f64,
    pub verdict: ObstructionVerdict,
    pub interpretation: String,
}

/// Evaluate the displacement test for `k ≥ 2` matrices at one point.
pub fn log2km1_test(
    mats: &[MoebiusNumeric],
    p: &UHPoint,
    tol: f64,
) -> Result<ObstructionReport, HyperbolicError> {
    let k = mats.len();
    if k < 2 {
        return Err(HyperbolicError::NotEnoughMatrices(k));
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(HyperbolicError::InvalidConfig(format!(
            "tolerance must be a finite non-negative number, got {tol}"
        )));
    }
    let displacements: Vec<f64> = mats.iter().map(|a| displacement(a, p)).collect();
    let sum: f64 = displacements.iter().map(|d| 1.0 / (1.0 + d.exp())).sum();
    let margin = 0.5 - sum;
    let verdict = if margin < -tol {
        ObstructionVerdict::Obstructed
    } else {
        ObstructionVerdict::Consistent
    };
    let interpretation = match verdict {
        ObstructionVerdict::Obstructed => format!(
            "displacement sum {sum:.9} exceeds 1/2 at this point: the {k} \
             matrices are not simultaneously discrete and independent"
        ),
        ObstructionVerdict::Consistent => format!(
            "displacement sum {sum:.9} respects the 1/2 bound at this point; \
             no obstruction found here"
        ),
    };
    Ok(ObstructionReport {
        basepoint: *p,
        displacements,
        sum,
        margin,
        tolerance: tol,
        length_threshold: (2.0 * k as f64 - 1.0).ln(),
        verdict,
        interpretation,
    })
}
