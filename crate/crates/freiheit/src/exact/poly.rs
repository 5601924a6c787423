use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ExactError, GaussianRational};

/// Degree of a polynomial. The zero polynomial has degree `NegInf`,
/// which sorts below every finite degree and absorbs addition.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Degree {
    NegInf,
    Finite(i64),
}

impl Degree {
    pub fn finite(n: usize) -> Self {
        Degree::Finite(n as i64)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Degree::Finite(_))
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(n) => write!(f, "{n}"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::NegInf => serializer.serialize_str("-inf"),
            Degree::Finite(n) => serializer.serialize_i64(*n),
        }
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct DegreeVisitor;
        impl<'de> Visitor<'de> for DegreeVisitor {
            type Value = Degree;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an integer or the string \"-inf\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Degree, E> {
                Ok(Degree::Finite(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Degree, E> {
                Ok(Degree::Finite(v as i64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Degree, E> {
                if v == "-inf" {
                    Ok(Degree::NegInf)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        deserializer.deserialize_any(DegreeVisitor)
    }
}

/// A polynomial in one variable `X` over ℚ(i), stored dense in
/// ascending degree with no trailing zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<GaussianRational>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        Poly::from_coeffs(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    pub fn monomial(c: GaussianRational, degree: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![GaussianRational::zero(); degree + 1];
        coeffs[degree] = c;
        Poly { coeffs }
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInf,
            n => Degree::Finite(n as i64 - 1),
        }
    }

    /// Coefficient of `X^k` (zero when `k` exceeds the degree).
    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_else(Zero::zero)
    }

    pub fn leading_coeff(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Horner evaluation at an exact point.
    pub fn eval(&self, z: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    fn add_ref(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(out)
    }

    fn sub_ref(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(a), Some(b)) => a - b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => -b,
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(out)
    }

    fn mul_ref(&self, rhs: &Poly) -> Poly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut acc =
            vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, ci) in self.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in rhs.coeffs.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                acc[i + j] = &acc[i + j] + &(ci * cj);
            }
        }
        Poly::from_coeffs(acc)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl $trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$impl_fn(&rhs)
            }
        }
        impl<'a> $trait<&'a Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &'a Poly) -> Poly {
                self.$impl_fn(rhs)
            }
        }
        impl<'a> $trait<Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$impl_fn(&rhs)
            }
        }
        impl<'a, 'b> $trait<&'b Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: &'b Poly) -> Poly {
                self.$impl_fn(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(GaussianRational::one())
    }
    fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Canonical text form: terms in ascending degree joined by ` + ` /
/// ` - `, e.g. `1 - X + (1+i)*X^2`. Coefficients with both parts
/// nonzero are parenthesised and never sign-split.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mixed = !c.re().is_zero() && !c.im().is_zero();
            let (negative, magnitude) = if mixed {
                (false, format!("({c})"))
            } else {
                let neg = c.re().is_negative() || c.im().is_negative();
                let abs = if neg { -c } else { c.clone() };
                (neg, abs.to_string())
            };
            let term = if k == 0 {
                magnitude
            } else {
                let xpow = if k == 1 {
                    "X".to_string()
                } else {
                    format!("X^{k}")
                };
                if magnitude == "1" {
                    xpow
                } else {
                    format!("{magnitude}*{xpow}")
                }
            };
            if first {
                if negative {
                    write!(f, "-")?;
                }
                write!(f, "{term}")?;
                first = false;
            } else {
                write!(f, "{}{term}", if negative { " - " } else { " + " })?;
            }
        }
        Ok(())
    }
}

impl FromStr for Poly {
    type Err = ExactError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |reason: String| ExactError::parse("polynomial", input, reason);
        if s.is_empty() {
            return Err(err("empty string".into()));
        }

        // Split into sign-joined terms at paren depth zero.
        let mut terms: Vec<String> = Vec::new();
        let mut current = String::new();
        let mut depth = 0usize;
        for (idx, ch) in s.chars().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth = depth
                        .checked_sub(1)
                        .ok_or_else(|| err("unbalanced parentheses".into()))?
                }
                '+' | '-' if depth == 0 && idx > 0 => {
                    terms.push(std::mem::take(&mut current));
                    if ch == '-' {
                        current.push('-');
                    }
                    continue;
                }
                _ => {}
            }
            current.push(ch);
        }
        if depth != 0 {
            return Err(err("unbalanced parentheses".into()));
        }
        terms.push(current);

        let mut acc = Poly::zero();
        for term in &terms {
            let (negative, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.as_str()),
            };
            if body.is_empty() {
                return Err(err("empty term".into()));
            }

            // Split the term into '*'-joined factors at depth zero.
            let mut factors: Vec<String> = Vec::new();
            let mut cur = String::new();
            let mut d = 0usize;
            for ch in body.chars() {
                match ch {
                    '(' => {
                        d += 1;
                        cur.push(ch);
                    }
                    ')' => {
                        d -= 1;
                        cur.push(ch);
                    }
                    '*' if d == 0 => factors.push(std::mem::take(&mut cur)),
                    _ => cur.push(ch),
                }
            }
            factors.push(cur);

            let mut coeff = GaussianRational::one();
            let mut power = 0usize;
            for factor in &factors {
                if factor.is_empty() {
                    return Err(err("empty factor".into()));
                }
                if let Some(inner) = factor
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                {
                    coeff = &coeff * &inner.parse::<GaussianRational>()?;
                } else if factor == "X" {
                    power += 1;
                } else if let Some(exp) = factor.strip_prefix("X^") {
                    let k: usize = exp
                        .parse()
                        .map_err(|_| err(format!("bad exponent {exp:?}")))?;
                    power += k;
                } else {
                    coeff = &coeff * &factor.parse::<GaussianRational>()?;
                }
            }
            if negative {
                coeff = -coeff;
            }
            acc = &acc + &Poly::monomial(coeff, power);
        }
        Ok(acc)
    }
}
