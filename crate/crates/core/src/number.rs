//! Exact rationals and big-integer square roots.
//!
//! [`Rat`] is always kept in canonical form (positive denominator, numerator
//! and denominator coprime, zero as `0/1`), so structural equality is value
//! equality and rationals can be used directly as map and dedup keys.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivideByZero,
    #[error("square root of negative integer {0}")]
    NegativeInput(BigInt),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// A canonical exact rational number.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    /// Builds the canonical rational equal to `num / den`.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, NumberError> {
        let den = den.into();
        if den.is_zero() {
            return Err(NumberError::ZeroDenominator);
        }
        // Ratio::new reduces by the gcd and moves the sign onto the numerator.
        Ok(Rat(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn square(&self) -> Rat {
        Rat(&self.0 * &self.0)
    }

    pub fn recip(&self) -> Result<Rat, NumberError> {
        if self.is_zero() {
            return Err(NumberError::DivideByZero);
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rat) -> Result<Rat, NumberError> {
        if rhs.is_zero() {
            return Err(NumberError::DivideByZero);
        }
        Ok(Rat(&self.0 / &rhs.0))
    }

    /// Half of this value; the solver divides by the determinant magnitude 2.
    pub fn half(&self) -> Rat {
        Rat(&self.0 / BigInt::from(2))
    }

    /// Approximate value, for progress display and plotting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// The numerator and denominator as `i64`, when both fit.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.numer().to_i64()?, self.denom().to_i64()?))
    }

    /// The numerator and denominator as `i128`, when both fit.
    pub fn to_i128_pair(&self) -> Option<(i128, i128)> {
        Some((self.numer().to_i128()?, self.denom().to_i128()?))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat($trait::$method(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl std::iter::Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, r| acc + r)
    }
}

impl<'a> std::iter::Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, r| acc + r)
    }
}

/// Renders as `num/den`, or just `num` when the denominator is 1.
impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = NumberError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        // Accept the typographic minus so values pasted from documents parse.
        let text = text.replace('\u{2212}', "-");
        let bad = || NumberError::Parse(s.to_string());
        let parse_int = |t: &str| {
            let t = t.trim();
            if t.is_empty() {
                return Err(bad());
            }
            BigInt::from_str(t).map_err(|_| bad())
        };
        match text.split_once('/') {
            Some((n, d)) => Rat::new(parse_int(n)?, parse_int(d)?),
            None => Ok(Rat::from_integer(parse_int(&text)?)),
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Compares two rationals; a thin wrapper kept for symmetry with the other
/// arithmetic entry points.
pub fn cmp(a: &Rat, b: &Rat) -> Ordering {
    a.cmp(b)
}

/// Parses a comma-separated list of rationals such as `"-4/15,8/5,4/5"`.
pub fn parse_list(text: &str) -> Result<Vec<Rat>, NumberError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(str::parse).collect()
}

pub fn format_list(values: &[Rat]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Integer square root: `(⌊√n⌋, ⌊√n⌋² == n)`.
pub fn isqrt(n: &BigInt) -> Result<(BigInt, bool), NumberError> {
    if n.sign() == Sign::Minus {
        return Err(NumberError::NegativeInput(n.clone()));
    }
    let root = n.sqrt();
    let exact = &root * &root == *n;
    Ok((root, exact))
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    matches!(isqrt(n), Ok((_, true)))
}

/// `⌊√n⌋` for machine integers.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    // The f64 guess is within a few units; correct it exactly.
    let mut r = (n as f64).sqrt() as u128;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Returns the exact square root of `n`, if `n` is a perfect square.
pub fn exact_sqrt_u128(n: u128) -> Option<u128> {
    let r = isqrt_u128(n);
    (r * r == n).then_some(r)
}
