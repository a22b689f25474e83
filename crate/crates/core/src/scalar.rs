//! Scalar abstraction for the approximate (real-valued) side of the toolkit.
//!
//! Coefficients are always exact [`BigRational`]s. Everything that has to be
//! evaluated numerically (Pochhammer products, partial sums, quadrature,
//! sequence transformations) is written against the [`Real`] trait so the same
//! code runs on `f32`, `f64` and the arbitrary-precision [`BigFloat`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Smallest working precision accepted anywhere in the crate.
pub const MIN_DIGITS: u32 = 16;

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 64;

/// Decimal working precision `P` for every approximate computation.
///
/// Passed explicitly; there is no ambient global precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::InvalidInput(format!(
                "working precision must be at least {MIN_DIGITS} digits, got {digits}"
            )));
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Binary precision backing `digits` decimal digits, with a few guard bits.
    pub fn bits(&self) -> usize {
        (f64::from(self.digits) * std::f64::consts::LOG2_10).ceil() as usize + 8
    }

    /// A context with `extra` more digits, for oracles that need headroom.
    pub fn widened(&self, extra: u32) -> Self {
        Self { digits: self.digits + extra }
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self { digits: DEFAULT_DIGITS }
    }
}

/// Real scalar used by the numerical back-ends.
///
/// Constants must be created through the context-aware constructors
/// (`from_rational`, `from_i64`, `from_f64`) so that arbitrary-precision values
/// carry the requested working precision.
pub trait Real:
    Num + Clone + PartialOrd + fmt::Debug + fmt::Display + Neg<Output = Self> + Send + Sync
{
    fn from_rational(value: &BigRational, ctx: &PrecisionContext) -> Self;

    fn from_i64(value: i64, ctx: &PrecisionContext) -> Self;

    fn from_f64(value: f64, ctx: &PrecisionContext) -> Self;

    /// Decimal digits this type actually resolves under `ctx`.
    fn effective_digits(ctx: &PrecisionContext) -> u32;

    fn abs(&self) -> Self;

    fn sqrt(&self) -> Self;

    fn exp(&self) -> Self;

    fn ln(&self) -> Self;

    fn to_f64(&self) -> f64;

    fn is_finite(&self) -> bool;

    /// Decimal rendering with `digits` significant digits.
    fn to_decimal_string(&self, digits: usize) -> String;

    fn powf(&self, exponent: &Self) -> Self {
        (self.ln() * exponent.clone()).exp()
    }

    fn powi(&self, exponent: i64, ctx: &PrecisionContext) -> Self {
        let mut base = self.clone();
        let mut n = exponent.unsigned_abs();
        let mut acc = Self::from_i64(1, ctx);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            n >>= 1;
        }
        if exponent < 0 {
            Self::from_i64(1, ctx) / acc
        } else {
            acc
        }
    }

    /// `10^(offset - P)` where `P` is the effective precision.
    fn tolerance(offset: i32, ctx: &PrecisionContext) -> Self {
        let exponent = i64::from(offset) - i64::from(Self::effective_digits(ctx));
        Self::from_i64(10, ctx).powi(exponent, ctx)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

macro_rules! impl_real_for_primitive {
    ($t:ty, $digits:expr) => {
        impl Real for $t {
            fn from_rational(value: &BigRational, _ctx: &PrecisionContext) -> Self {
                value.to_f64().unwrap_or(f64::NAN) as $t
            }

            fn from_i64(value: i64, _ctx: &PrecisionContext) -> Self {
                value as $t
            }

            fn from_f64(value: f64, _ctx: &PrecisionContext) -> Self {
                value as $t
            }

            fn effective_digits(ctx: &PrecisionContext) -> u32 {
                ctx.digits().min($digits)
            }

            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }

            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }

            fn exp(&self) -> Self {
                <$t>::exp(*self)
            }

            fn ln(&self) -> Self {
                <$t>::ln(*self)
            }

            fn powf(&self, exponent: &Self) -> Self {
                <$t>::powf(*self, *exponent)
            }

            fn to_f64(&self) -> f64 {
                f64::from(*self)
            }

            fn is_finite(&self) -> bool {
                <$t>::is_finite(*self)
            }

            fn to_decimal_string(&self, digits: usize) -> String {
                format!("{:.*e}", digits.saturating_sub(1), self)
            }
        }
    };
}

impl_real_for_primitive!(f64, 15);
impl_real_for_primitive!(f32, 6);

type Inner = FBig<HalfEven, 2>;

/// Fallback binary precision for operations on two exact constants.
const FALLBACK_BITS: usize = 222;

/// Arbitrary-precision binary floating point number.
///
/// A thin wrapper over `dashu_float::FBig` that records its working precision
/// in the value itself. Binary operations take the larger precision of the two
/// operands.
#[derive(Clone, PartialEq)]
pub struct BigFloat(Inner);

impl BigFloat {
    pub fn precision_bits(&self) -> usize {
        self.0.precision()
    }

    pub fn from_bigint(value: &BigInt, ctx: &PrecisionContext) -> Self {
        Self(to_fbig(value).with_precision(ctx.bits()).value())
    }

    fn limited(&self) -> Inner {
        if self.0.precision() == 0 {
            self.0.clone().with_precision(FALLBACK_BITS).value()
        } else {
            self.0.clone()
        }
    }

    fn binary_precision(a: &Inner, b: &Inner) -> usize {
        a.precision().max(b.precision())
    }
}

fn to_fbig(value: &BigInt) -> Inner {
    Inner::from(IBig::from_le_bytes(&value.to_signed_bytes_le()))
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({})", self.to_decimal_string(24))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.0.precision().max(53) as f64) / std::f64::consts::LOG2_10) as usize;
        f.write_str(&self.to_decimal_string(digits))
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl Add for BigFloat {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for BigFloat {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul for BigFloat {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl Div for BigFloat {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        if Self::binary_precision(&self.0, &rhs.0) == 0 {
            return Self(self.limited() / rhs.0);
        }
        Self(self.0 / rhs.0)
    }
}

impl Rem for BigFloat {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        let quotient = (self.clone() / rhs.clone()).0.trunc();
        Self(self.0 - quotient * rhs.0)
    }
}

impl Neg for BigFloat {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        Self(Inner::ZERO)
    }
    fn is_zero(&self) -> bool {
        self.0 == Inner::ZERO
    }
}

impl One for BigFloat {
    fn one() -> Self {
        Self(Inner::ONE)
    }
}

impl Num for BigFloat {
    type FromStrRadixErr = Error;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self> {
        if radix != 10 {
            return Err(Error::InvalidInput(format!("unsupported radix {radix}")));
        }
        let value: dashu_float::DBig = s
            .parse()
            .map_err(|_| Error::InvalidInput(format!("not a decimal number: {s:?}")))?;
        Ok(Self(value.with_base_and_precision::<2>(FALLBACK_BITS).value().with_rounding()))
    }
}

impl Real for BigFloat {
    fn from_rational(value: &BigRational, ctx: &PrecisionContext) -> Self {
        let bits = ctx.bits();
        let numer = to_fbig(value.numer()).with_precision(bits).value();
        if value.denom().is_one() {
            return Self(numer);
        }
        let denom = to_fbig(value.denom()).with_precision(bits).value();
        Self(numer / denom)
    }

    fn from_i64(value: i64, ctx: &PrecisionContext) -> Self {
        Self(Inner::from(value).with_precision(ctx.bits()).value())
    }

    fn from_f64(value: f64, ctx: &PrecisionContext) -> Self {
        let exact = Inner::try_from(value).unwrap_or(Inner::ZERO);
        Self(exact.with_precision(ctx.bits()).value())
    }

    fn effective_digits(ctx: &PrecisionContext) -> u32 {
        ctx.digits()
    }

    fn abs(&self) -> Self {
        if self.0 < Inner::ZERO {
            Self(-self.0.clone())
        } else {
            self.clone()
        }
    }

    fn sqrt(&self) -> Self {
        Self(self.limited().sqrt())
    }

    fn exp(&self) -> Self {
        Self(self.limited().exp())
    }

    fn ln(&self) -> Self {
        Self(self.limited().ln())
    }

    fn powf(&self, exponent: &Self) -> Self {
        Self(self.limited().powf(&exponent.limited()))
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    fn is_finite(&self) -> bool {
        self.0.repr().is_finite()
    }

    fn to_decimal_string(&self, digits: usize) -> String {
        if !self.is_finite() {
            return if self.0 > Inner::ZERO { "inf".into() } else { "-inf".into() };
        }
        let decimal = self.0.to_decimal().value();
        decimal.with_precision(digits.max(1)).value().to_string()
    }
}

/// Convert an exact rational into any [`Real`].
pub fn real<T: Real>(value: &BigRational, ctx: &PrecisionContext) -> T {
    T::from_rational(value, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rejects_low_precision() {
        assert!(PrecisionContext::new(15).is_err());
        assert_eq!(PrecisionContext::new(16).unwrap().digits(), 16);
    }

    #[test]
    fn third_is_accurate_to_working_precision() {
        let ctx = PrecisionContext::new(64).unwrap();
        let third = BigFloat::from_rational(&ratio(1, 3), &ctx);
        let back = third * BigFloat::from_i64(3, &ctx) - BigFloat::from_i64(1, &ctx);
        assert!(back.abs() < BigFloat::tolerance(0, &ctx));
        assert!(third_digits_ok());
    }

    fn third_digits_ok() -> bool {
        let ctx = PrecisionContext::new(40).unwrap();
        let s = BigFloat::from_rational(&ratio(1, 3), &ctx).to_decimal_string(30);
        s.starts_with("0.33333333333333333333333333")
    }

    #[test]
    fn exact_constants_divide_at_fallback_precision() {
        let q = BigFloat::one() / (BigFloat::one() + BigFloat::one() + BigFloat::one());
        assert!(q.precision_bits() >= 200);
    }

    #[test]
    fn elementary_functions_roundtrip() {
        let ctx = PrecisionContext::new(50).unwrap();
        let x = BigFloat::from_rational(&ratio(7, 3), &ctx);
        let y = x.ln().exp();
        assert!((y - x.clone()).abs() < BigFloat::tolerance(2, &ctx));
        let s = x.sqrt();
        assert!((s.clone() * s - x).abs() < BigFloat::tolerance(2, &ctx));
    }

    #[test]
    fn powi_matches_repeated_product() {
        let ctx = PrecisionContext::default();
        let x = BigFloat::from_rational(&ratio(3, 2), &ctx);
        let cube = x.clone() * x.clone() * x.clone();
        assert!((x.powi(3, &ctx) - cube).abs() < BigFloat::tolerance(0, &ctx));
        assert!((x.powi(-1, &ctx) - BigFloat::from_rational(&ratio(2, 3), &ctx)).abs() < BigFloat::tolerance(0, &ctx));
        assert_eq!(Real::powi(&1.5f64, 2, &ctx), 2.25);
    }

    #[test]
    fn primitive_tolerance_is_capped() {
        let ctx = PrecisionContext::new(64).unwrap();
        assert_eq!(<f64 as Real>::effective_digits(&ctx), 15);
        assert!((<f64 as Real>::tolerance(4, &ctx) - 1e-11).abs() < 1e-24);
    }

    #[test]
    fn large_rationals_convert() {
        let ctx = PrecisionContext::default();
        let big = BigRational::new(BigInt::from(10).pow(80), BigInt::from(3));
        let v = BigFloat::from_rational(&big, &ctx);
        assert!((v.to_f64() / 3.333_333_333_333_333e79 - 1.0).abs() < 1e-14);
        assert!((f64::from_rational(&big, &ctx) / 3.333_333_333_333_333e79 - 1.0).abs() < 1e-14);
    }
}
