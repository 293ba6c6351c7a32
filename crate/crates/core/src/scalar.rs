//! The scalar field: exact big rationals, with an opt-in binary float.
//!
//! Exact values stay exact under every operation. As soon as one operand is a
//! float the result is a float at that operand's precision, so a computation
//! can keep `q` and most parameters exact while a single small limit
//! parameter is carried as a float.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Binary float with round-half-even, the backend of float mode.
pub type Float = FBig<HalfEven, 2>;

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(Float),
}

fn bigint_to_ibig(n: &BigInt) -> IBig {
    let (sign, bytes) = n.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

fn rational_to_float(r: &BigRational, precision: usize) -> Float {
    let num = Float::from(bigint_to_ibig(r.numer()))
        .with_precision(precision)
        .value();
    let den = Float::from(bigint_to_ibig(r.denom()))
        .with_precision(precision)
        .value();
    num / den
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`; panics if `den` is zero.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Bit precision of a float value, `None` for exact values.
    pub fn precision(&self) -> Option<usize> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Float(f) => Some(f.precision()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(f) => *f.repr().significand() == IBig::ZERO,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_one(),
            Scalar::Float(f) => f.cmp(&Float::ONE) == Ordering::Equal,
        }
    }

    /// Converts to a float at `precision` bits. Floats are re-rounded.
    pub fn to_float(&self, precision: usize) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Float(rational_to_float(r, precision)),
            Scalar::Float(f) => Scalar::Float(f.clone().with_precision(precision).value()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(f) => f.to_f64().value(),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(f) => Scalar::Float(
                if (*f.repr().significand() == IBig::ZERO) || f > &Float::ZERO {
                    f.clone()
                } else {
                    -f.clone()
                },
            ),
        }
    }

    /// Multiplicative inverse; `None` at zero.
    pub fn recip(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Exact(r) => Scalar::Exact(r.recip()),
            Scalar::Float(f) => {
                let one = Float::ONE.with_precision(f.precision()).value();
                Scalar::Float(one / f)
            }
        })
    }

    /// Integer power. Negative exponents of zero panic.
    pub fn pow(&self, e: i64) -> Scalar {
        if e < 0 {
            return self.recip().expect("negative power of zero").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = match self {
            Scalar::Exact(_) => Scalar::one(),
            Scalar::Float(f) => Scalar::Float(Float::ONE.with_precision(f.precision()).value()),
        };
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `|self - other| / |other|`, or `|self|` when `other` is zero, as f64.
    pub fn relative_error(&self, other: &Scalar) -> f64 {
        let diff = (self - other).abs();
        if other.is_zero() {
            diff.to_f64()
        } else {
            (diff / other.abs()).to_f64()
        }
    }

    /// Signum as -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.cmp_value(&Scalar::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    fn cmp_value(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => a.cmp(b),
            (Scalar::Exact(a), Scalar::Float(b)) => rational_to_float(a, b.precision()).cmp(b),
            (Scalar::Float(a), Scalar::Exact(b)) => a.cmp(&rational_to_float(b, a.precision())),
        }
    }
}

fn binop(
    a: &Scalar,
    b: &Scalar,
    exact: impl Fn(&BigRational, &BigRational) -> BigRational,
    float: impl Fn(&Float, &Float) -> Float,
) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(exact(x, y)),
        (Scalar::Float(x), Scalar::Float(y)) => Scalar::Float(float(x, y)),
        (Scalar::Exact(x), Scalar::Float(y)) => {
            Scalar::Float(float(&rational_to_float(x, y.precision()), y))
        }
        (Scalar::Float(x), Scalar::Exact(y)) => {
            Scalar::Float(float(x, &rational_to_float(y, x.precision())))
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                binop(self, rhs, |x, y| x $op y, |x, y| x $op y)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);
forward_binop!(Div, div, /);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(f) => Scalar::Float(-f),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

impl<'a> std::iter::Product<&'a Scalar> for Scalar {
    fn product<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<Float> for Scalar {
    fn from(f: Float) -> Self {
        Scalar::Float(f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parses `"p/q"` or `"p"`. The value is stored in lowest terms.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        let bad = || Error::Parse(s.to_string());
        if t.is_empty() {
            return Err(bad());
        }
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Scalar::Exact(BigRational::new(num, den)))
    }
}

impl fmt::Display for Scalar {
    /// Exact values print as `p/q` (or `p`). Floats print as a decimal with
    /// the binary precision appended, e.g. `3.3333e-7@256`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", r),
            Scalar::Float(x) => {
                let bits = x.precision();
                if *x.repr().significand() == IBig::ZERO {
                    return write!(f, "0@{}", bits);
                }
                let digits = (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize;
                let dec = x.to_decimal().value().with_precision(digits.max(1)).value();
                write!(f, "{:e}@{}", dec, bits)
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn parses_and_prints_lowest_terms() {
        assert_eq!(s("6/4").to_string(), "3/2");
        assert_eq!(s("-7/2").to_string(), "-7/2");
        assert_eq!(s("4").to_string(), "4");
        assert_eq!(s("3/-6").to_string(), "-1/2");
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
    }

    #[test]
    fn pow_handles_negative_exponents() {
        let q = s("3/5");
        assert_eq!(q.pow(-2), s("25/9"));
        assert_eq!(q.pow(0), Scalar::one());
        assert_eq!(q.pow(3), s("27/125"));
    }

    #[test]
    fn mixed_arithmetic_promotes_to_float() {
        let x = s("1/3").to_float(256);
        let y = &x + &s("2/3");
        assert_eq!(y.precision(), Some(256));
        assert!(y.relative_error(&Scalar::one()) < 1e-70);
        assert!(y.to_string().ends_with("@256"));
    }

    #[test]
    fn float_pow_keeps_precision() {
        let x = s("1/3").to_float(128).pow(-3);
        assert_eq!(x.precision(), Some(128));
        assert!(x.relative_error(&s("27")) < 1e-30);
    }

    #[test]
    fn serde_round_trip() {
        let v = s("-22/7");
        let j = serde_json::to_string(&v).unwrap();
        assert_eq!(j, "\"-22/7\"");
        let back: Scalar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, v);
    }
}
