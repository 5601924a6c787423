use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::ExactError;

/// An element of ℚ(i).
///
/// Both parts are `BigRational`s, which stay reduced with positive
/// denominators, so equality and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    /// Exact fraction `numer/denom`. `denom` must be nonzero.
    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self, ExactError> {
        if denom == 0 {
            return Err(ExactError::DivisionByZero);
        }
        Ok(GaussianRational {
            re: BigRational::new(BigInt::from(numer), BigInt::from(denom)),
            im: BigRational::zero(),
        })
    }

    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |z|² = re² + im², as a rational.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let n = self.norm_sq();
        Ok(GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// Lossy conversion for the numeric layers. Exact code never calls this.
    pub fn to_f64_parts(&self) -> (f64, f64) {
        fn rat_to_f64(r: &BigRational) -> f64 {
            // Good enough for the magnitudes that show up here; large
            // values saturate to ±inf, which downstream validation rejects.
            let n = r.numer();
            let d = r.denom();
            match (n.to_string().parse::<f64>(), d.to_string().parse::<f64>()) {
                (Ok(nf), Ok(df)) => nf / df,
                _ => f64::NAN,
            }
        }
        (rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        // Real operands dominate in practice; skip the imaginary mults.
        if self.im.is_zero() {
            if rhs.im.is_zero() {
                return GaussianRational {
                    re: &self.re * &rhs.re,
                    im: BigRational::zero(),
                };
            }
            return GaussianRational {
                re: &self.re * &rhs.re,
                im: &self.re * &rhs.im,
            };
        }
        if rhs.im.is_zero() {
            return GaussianRational {
                re: &self.re * &rhs.re,
                im: &self.im * &rhs.re,
            };
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl $trait for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                self.$impl_fn(&rhs)
            }
        }
        impl<'a> $trait<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                self.$impl_fn(rhs)
            }
        }
        impl<'a> $trait<GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                self.$impl_fn(&rhs)
            }
        }
        impl<'a, 'b> $trait<&'b GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'b GaussianRational) -> GaussianRational {
                self.$impl_fn(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

/// Panics on division by zero; use [`GaussianRational::inv`] when the
/// divisor is not known to be nonzero.
impl Div for GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: GaussianRational) -> GaussianRational {
        let inv = rhs.inv().expect("division by zero");
        self.mul_ref(&inv)
    }
}

impl<'b> Div<&'b GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &'b GaussianRational) -> GaussianRational {
        let inv = rhs.inv().expect("division by zero");
        self.mul_ref(&inv)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
}

fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text form, one of `0`, `a/b`, `c/d*i`, `i`, `-i`,
/// `a/b+c/d*i`, `a/b-c/d*i` (integer parts drop the `/1`).
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let imag_str = |im: &BigRational| -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", rational_to_string(im))
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", rational_to_string(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}", imag_str(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}{}", rational_to_string(&self.re), imag_str(&self.im))
        } else {
            write!(f, "{}+{}", rational_to_string(&self.re), imag_str(&self.im))
        }
    }
}

/// JSON carries exact scalars as their canonical strings.
impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

fn parse_rational(s: &str, whole: &str) -> Result<BigRational, ExactError> {
    let err = |reason: &str| ExactError::parse("gaussian rational", whole, reason.to_string());
    match s.split_once('/') {
        None => {
            let n = BigInt::from_str(s).map_err(|_| err("bad integer"))?;
            Ok(BigRational::from_integer(n))
        }
        Some((num, den)) => {
            let n = BigInt::from_str(num).map_err(|_| err("bad numerator"))?;
            let d = BigInt::from_str(den).map_err(|_| err("bad denominator"))?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

impl FromStr for GaussianRational {
    type Err = ExactError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |reason: &str| ExactError::parse("gaussian rational", input, reason.to_string());
        if s.is_empty() {
            return Err(err("empty string"));
        }
        // Split into at most two sign-joined terms; the sign at index 0
        // belongs to the first term.
        let mut terms: Vec<String> = Vec::new();
        let mut current = String::new();
        for (idx, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && idx > 0 {
                terms.push(std::mem::take(&mut current));
                if ch == '-' {
                    current.push('-');
                }
            } else {
                current.push(ch);
            }
        }
        terms.push(current);
        if terms.len() > 2 {
            return Err(err("too many terms"));
        }

        let mut re: Option<BigRational> = None;
        let mut im: Option<BigRational> = None;
        for term in &terms {
            if term.is_empty() || term == "-" {
                return Err(err("empty term"));
            }
            if let Some(head) = term.strip_suffix('i') {
                if im.is_some() {
                    return Err(err("duplicate imaginary part"));
                }
                let coeff = match head.strip_suffix('*') {
                    Some("") | Some("-") => return Err(err("dangling '*'")),
                    Some(mag) => parse_rational(mag, input)?,
                    None if head.is_empty() => BigRational::one(),
                    None if head == "-" => -BigRational::one(),
                    None => return Err(err("imaginary coefficient needs '*'")),
                };
                im = Some(coeff);
            } else {
                if re.is_some() {
                    return Err(err("duplicate real part"));
                }
                re = Some(parse_rational(term, input)?);
            }
        }
        Ok(GaussianRational {
            re: re.unwrap_or_else(BigRational::zero),
            im: im.unwrap_or_else(BigRational::zero),
        })
    }
}
