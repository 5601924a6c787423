use std::fmt;
use std::ops::{Neg, Sub};

use num_traits::{One, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use super::{ExactError, GaussianRational, Poly, TextScalar};

/// A 2×2 matrix over any commutative ring with the usual trait surface.
///
/// Row-major: `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat2<R> {
    pub a: R,
    pub b: R,
    pub c: R,
    pub d: R,
}

impl<R> Mat2<R>
where
    R: Clone + Zero + One + Sub<Output = R> + PartialEq,
{
    pub fn new(a: R, b: R, c: R, d: R) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2 {
            a: R::one(),
            b: R::zero(),
            c: R::zero(),
            d: R::one(),
        }
    }

    pub fn mul(&self, rhs: &Mat2<R>) -> Mat2<R> {
        Mat2 {
            a: self.a.clone() * rhs.a.clone() + self.b.clone() * rhs.c.clone(),
            b: self.a.clone() * rhs.b.clone() + self.b.clone() * rhs.d.clone(),
            c: self.c.clone() * rhs.a.clone() + self.d.clone() * rhs.c.clone(),
            d: self.c.clone() * rhs.b.clone() + self.d.clone() * rhs.d.clone(),
        }
    }

    pub fn det(&self) -> R {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn trace(&self) -> R {
        self.a.clone() + self.d.clone()
    }

    /// Scalar means `b = c = 0` and `a = d`; identity is one of these.
    pub fn is_scalar(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar() && self.a.is_one()
    }

    pub fn map<S>(&self, f: impl Fn(&R) -> S) -> Mat2<S> {
        Mat2 {
            a: f(&self.a),
            b: f(&self.b),
            c: f(&self.c),
            d: f(&self.d),
        }
    }
}

impl Mat2<GaussianRational> {
    /// Exact inverse via the adjugate. Errors when the determinant is zero.
    pub fn inverse(&self) -> Result<Self, ExactError> {
        let det = self.det();
        let inv = det.inv().map_err(|_| ExactError::NonInvertible)?;
        Ok(Mat2 {
            a: &self.d * &inv,
            b: -(&self.b * &inv),
            c: -(&self.c * &inv),
            d: &self.a * &inv,
        })
    }

    /// `P · self · P⁻¹` with the inverse supplied by the caller, so a
    /// batch of conjugations pays for one inversion.
    pub fn conjugate_by(&self, p: &Self, p_inv: &Self) -> Self {
        p.mul(self).mul(p_inv)
    }

    /// Constant-lift into the polynomial ring.
    pub fn lift(&self) -> Mat2<Poly> {
        self.map(|e| Poly::constant(e.clone()))
    }

    /// Column image `self · (x, y)ᵀ`.
    pub fn apply_to_vector(
        &self,
        v: &(GaussianRational, GaussianRational),
    ) -> (GaussianRational, GaussianRational) {
        (
            &(&self.a * &v.0) + &(&self.b * &v.1),
            &(&self.c * &v.0) + &(&self.d * &v.1),
        )
    }
}

impl<R: fmt::Display> fmt::Display for Mat2<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl<R> Neg for &Mat2<R>
where
    R: Clone + Neg<Output = R>,
{
    type Output = Mat2<R>;
    fn neg(self) -> Mat2<R> {
        Mat2 {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
        }
    }
}

/// Matrices of text scalars serialise as `[["a", "b"], ["c", "d"]]`.
impl<R: TextScalar> Serialize for Mat2<R> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&[self.a.to_string(), self.b.to_string()])?;
        seq.serialize_element(&[self.c.to_string(), self.d.to_string()])?;
        seq.end()
    }
}

impl<'de, R: TextScalar> Deserialize<'de> for Mat2<R> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RowsVisitor<R>(std::marker::PhantomData<R>);
        impl<'de, R: TextScalar> Visitor<'de> for RowsVisitor<R> {
            type Value = Mat2<R>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a 2x2 array of {} strings", R::KIND)
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Mat2<R>, A::Error> {
                let top: Option<[String; 2]> = seq.next_element()?;
                let row0 = top.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let row1: [String; 2] = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<serde::de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                let parse = |s: &String| {
                    s.parse::<R>()
                        .map_err(|_| de::Error::custom(format!("bad {} {s:?}", R::KIND)))
                };
                Ok(Mat2 {
                    a: parse(&row0[0])?,
                    b: parse(&row0[1])?,
                    c: parse(&row1[0])?,
                    d: parse(&row1[1])?,
                })
            }
        }
        deserializer.deserialize_seq(RowsVisitor(std::marker::PhantomData))
    }
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

    #[test]
    fn multiplication_and_determinant() {
        let p = m("1", "1", "0", "1");
        let q = m("1", "0", "1", "1");
        let pq = p.mul(&q);
        assert_eq!(pq, m("2", "1", "1", "1"));
        assert_eq!(pq.det(), GaussianRational::one());
    }

    #[test]
    fn inverse_round_trips() {
        let g = m("2", "1", "3", "2");
        let ginv = g.inverse().unwrap();
        assert!(g.mul(&ginv).is_identity());
        assert!(ginv.mul(&g).is_identity());
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let s = m("1", "2", "2", "4");
        assert_eq!(s.inverse(), Err(ExactError::NonInvertible));
    }

    #[test]
    fn scalar_detection() {
        assert!(Mat2::<GaussianRational>::identity().is_identity());
        assert!(m("-3", "0", "0", "-3").is_scalar());
        assert!(!m("-3", "0", "0", "-3").is_identity());
        assert!(!m("1", "1", "0", "1").is_scalar());
    }

    #[test]
    fn conjugation_preserves_trace_and_det() {
        let g = m("2", "1", "3", "2");
        let p = m("1", "0", "-1", "1");
        let conj = g.conjugate_by(&p, &p.inverse().unwrap());
        assert_eq!(conj.trace(), g.trace());
        assert_eq!(conj.det(), g.det());
    }

    #[test]
    fn json_round_trip() {
        let g = m("1/2", "1+i", "0", "2");
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"[["1/2","1+i"],["0","2"]]"#);
        let back: Mat2<GaussianRational> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn poly_matrix_round_trip() {
        let lam = Mat2::new(
            Poly::one(),
            Poly::x(),
            Poly::zero(),
            Poly::one(),
        );
        let text = serde_json::to_string(&lam).unwrap();
        let back: Mat2<Poly> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, lam);
    }
}
