//! Series representations and the elementary factorial-series terms.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{PrecisionContext, Real};
use crate::stirling::{StirlingCache, StirlingKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    /// `sum_n c_n z^n`
    Power,
    /// `sum_n c_n / z^(n+1)`
    InversePower,
    /// `sum_n c_n / (z)_(n+1)`
    Factorial,
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesKind::Power => "power",
            SeriesKind::InversePower => "inverse_power",
            SeriesKind::Factorial => "factorial",
        })
    }
}

/// Truncated formal series with exact coefficients.
///
/// For [`SeriesKind::Factorial`] the stored coefficients are the unreduced
/// `d_n` of `sum d_n / (z)_(n+1)`; the reduced `a_n = d_n / n!` are derived on
/// demand by [`FormalSeries::reduced_coefficients`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSeries {
    kind: SeriesKind,
    coeffs: Vec<BigRational>,
}

impl FormalSeries {
    pub fn new(kind: SeriesKind, coeffs: Vec<BigRational>) -> Self {
        Self { kind, coeffs }
    }

    pub fn from_integers<I: IntoIterator<Item = BigInt>>(kind: SeriesKind, coeffs: I) -> Self {
        Self::new(kind, coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    /// Factorial series from reduced coefficients `a_n`, i.e. `d_n = a_n n!`.
    pub fn from_reduced(reduced: &[BigRational]) -> Self {
        let coeffs = reduced
            .iter()
            .zip(factorials(reduced.len()))
            .map(|(a, f)| a * BigRational::from_integer(f))
            .collect();
        Self::new(SeriesKind::Factorial, coeffs)
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading `order + 1` coefficients.
    pub fn truncated(&self, order: usize) -> Result<Self> {
        self.require_order(order)?;
        Ok(Self::new(self.kind, self.coeffs[..=order].to_vec()))
    }

    pub(crate) fn require_kind(&self, kind: SeriesKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::InvalidInput(format!("expected a {kind} series, got {}", self.kind)));
        }
        Ok(())
    }

    pub(crate) fn require_order(&self, order: usize) -> Result<()> {
        if self.coeffs.len() < order + 1 {
            return Err(Error::InvalidInput(format!(
                "order {order} needs {} coefficients, series has {}",
                order + 1,
                self.coeffs.len()
            )));
        }
        Ok(())
    }

    /// Reduced factorial-series coefficients `a_n = d_n / n!`.
    pub fn reduced_coefficients(&self) -> Result<Vec<BigRational>> {
        self.require_kind(SeriesKind::Factorial)?;
        Ok(self
            .coeffs
            .iter()
            .zip(factorials(self.coeffs.len()))
            .map(|(d, f)| d / BigRational::from_integer(f))
            .collect())
    }
}

/// `0!, 1!, ..., (count-1)!`
pub fn factorials(count: usize) -> impl Iterator<Item = BigInt> {
    let mut current = BigInt::one();
    (0..count).map(move |n| {
        if n > 0 {
            current *= n;
        }
        current.clone()
    })
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Moments `mu_n` of a Stieltjes measure. The measure itself is never materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSequence {
    moments: Vec<BigRational>,
}

impl MomentSequence {
    pub fn new(moments: Vec<BigRational>) -> Result<Self> {
        if let Some(n) = moments.iter().position(|m| !m.is_positive()) {
            return Err(Error::InvalidInput(format!("moment mu_{n} must be positive")));
        }
        Ok(Self { moments })
    }

    pub fn moments(&self) -> &[BigRational] {
        &self.moments
    }

    /// Stieltjes series `sum (-1)^n mu_n / z^(n+1)`.
    pub fn stieltjes_series(&self) -> FormalSeries {
        let coeffs = self
            .moments
            .iter()
            .enumerate()
            .map(|(n, m)| if n % 2 == 0 { m.clone() } else { -m.clone() })
            .collect();
        FormalSeries::new(SeriesKind::InversePower, coeffs)
    }

    /// Factorial series `sum_n (-1)^n / (z)_(n+1) sum_v S1(n, v) mu_v`, obtained by
    /// integrating the Pochhammer polynomial `(-t)_n` against the measure.
    pub fn factorial_series(&self, order: usize) -> Result<FormalSeries> {
        if self.moments.len() < order + 1 {
            return Err(Error::InvalidInput(format!(
                "order {order} needs {} moments, have {}",
                order + 1,
                self.moments.len()
            )));
        }
        let s1 = StirlingCache::new(StirlingKind::First, order);
        let mut coeffs = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut inner = BigRational::zero();
            for (v, s) in s1.row(n)?.iter().enumerate() {
                inner += BigRational::from_integer(s.clone()) * &self.moments[v];
            }
            coeffs.push(if n % 2 == 0 { inner } else { -inner });
        }
        Ok(FormalSeries::new(SeriesKind::Factorial, coeffs))
    }
}

/// Rising factorial `z (z+1) ... (z+n-1)`; the empty product is one.
pub fn pochhammer<T: Real>(z: &T, n: usize, ctx: &PrecisionContext) -> T {
    let mut acc = T::from_i64(1, ctx);
    for k in 0..n {
        acc = acc * (z.clone() + T::from_i64(k as i64, ctx));
    }
    acc
}

/// Exact rising factorial over the rationals.
pub fn pochhammer_exact(z: &BigRational, n: usize) -> BigRational {
    (0..n).fold(BigRational::one(), |acc, k| acc * (z + BigRational::from_integer(k.into())))
}

/// Pole check for the chain `z, z+1, ..., z+n`.
///
/// Fails when `z` lies within `10^-(P-4)` of one of `0, -1, ..., -n`.
pub fn check_pochhammer_poles<T: Real>(z: &T, n: usize, ctx: &PrecisionContext) -> Result<()> {
    let nearest = z.to_f64().round();
    if nearest > 0.0 || nearest < -(n as f64) || !nearest.is_finite() {
        return Ok(());
    }
    let distance = (z.clone() - T::from_f64(nearest, ctx)).abs();
    if distance < T::tolerance(4, ctx) {
        return Err(Error::Pole(format!("z = {z} hits the Pochhammer zero at {nearest}")));
    }
    Ok(())
}

/// `d_n / (z)_(n+1)`, which equals `(d_n / n!) B(z, n+1)`.
pub fn factorial_term<T: Real>(z: &T, n: usize, d: &BigRational, ctx: &PrecisionContext) -> Result<T> {
    check_pochhammer_poles(z, n, ctx)?;
    Ok(T::from_rational(d, ctx) / pochhammer(z, n + 1, ctx))
}

fn beta_term<T: Real>(z: &T, n: usize, ctx: &PrecisionContext) -> T {
    T::from_rational(&BigRational::from_integer(factorial(n)), ctx) / pochhammer(z, n + 1, ctx)
}

/// `Delta_z^k [n! / (z)_(n+1)]`.
///
/// Evaluated both as an iterated forward difference and through the closed
/// form `(-1)^k (n+k)! / (z)_(n+k+1)`; the closed form is returned after the
/// two routes are confirmed to agree to `10^(4-P)` relative.
pub fn forward_difference_term<T: Real>(z: &T, n: usize, k: usize, ctx: &PrecisionContext) -> Result<T> {
    check_pochhammer_poles(z, n + k, ctx)?;
    let closed = {
        let value = beta_term(z, n + k, ctx);
        if k % 2 == 1 {
            -value
        } else {
            value
        }
    };
    let mut iterated = T::zero();
    let mut binom = BigInt::one();
    for j in 0..=k {
        let shifted = z.clone() + T::from_i64(j as i64, ctx);
        let weight = T::from_rational(&BigRational::from_integer(binom.clone()), ctx);
        let term = weight * beta_term(&shifted, n, ctx);
        iterated = if (k - j) % 2 == 0 { iterated + term } else { iterated - term };
        binom = binom * (k - j) / (j + 1);
    }
    let scale = T::max_of(closed.abs(), T::tolerance(0, ctx));
    if (iterated - closed.clone()).abs() > T::tolerance(4, ctx) * scale {
        return Err(Error::Instability(format!(
            "iterated difference disagrees with closed form for n = {n}, k = {k}"
        )));
    }
    Ok(closed)
}

/// Predicted magnitude `n^(-z)` of `n! / (z)_(n+1)` for large `n`.
pub fn term_decay_estimate<T: Real>(z: &T, n: usize, ctx: &PrecisionContext) -> Result<T> {
    if n == 0 {
        return Err(Error::Domain("decay estimate needs n >= 1".into()));
    }
    let log_n = T::from_i64(n as i64, ctx).ln();
    Ok((-(z.clone() * log_n)).exp())
}

/// Partial sums of `sum_n (w)_n / (z)_(n+1)`, which converges to `1 / (z - w)`
/// for `z > w`.
pub fn waring_partial_sums<T: Real>(w: &T, z: &T, terms: usize, ctx: &PrecisionContext) -> Result<Vec<T>> {
    check_pochhammer_poles(z, terms, ctx)?;
    let mut numer = T::from_i64(1, ctx);
    let mut denom = T::from_i64(1, ctx);
    let mut acc = T::zero();
    let mut out = Vec::with_capacity(terms);
    for n in 0..terms {
        let shift = T::from_i64(n as i64, ctx);
        if n > 0 {
            numer = numer * (w.clone() + T::from_i64(n as i64 - 1, ctx));
        }
        denom = denom * (z.clone() + shift);
        acc = acc + numer.clone() / denom.clone();
        out.push(acc.clone());
    }
    Ok(out)
}

/// Inverse power series of `1 / (z)_(k+1)`:
/// `c_(k+m) = (-1)^m S2(k+m, k)`, zero below index `k`.
pub fn inverse_pochhammer_series(k: usize, order: usize) -> FormalSeries {
    let table = StirlingCache::new(StirlingKind::Second, order.max(k));
    let coeffs = (0..=order)
        .map(|n| {
            if n < k {
                return BigRational::zero();
            }
            let s = BigRational::from_integer(table.get(n, k).expect("within table").clone());
            if (n - k) % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect();
    FormalSeries::new(SeriesKind::InversePower, coeffs)
}

/// Wire form of an exact rational: integers as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalRepr {
    fn from(value: &BigRational) -> Self {
        Self { num: value.numer().to_string(), den: value.denom().to_string() }
    }
}

impl TryFrom<&RationalRepr> for BigRational {
    type Error = Error;

    fn try_from(value: &RationalRepr) -> Result<Self> {
        let num: BigInt = value
            .num
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad numerator {:?}", value.num)))?;
        let den: BigInt = value
            .den
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad denominator {:?}", value.den)))?;
        if den.is_zero() {
            return Err(Error::Format("zero denominator".into()));
        }
        Ok(BigRational::new(num, den))
    }
}

/// On-disk series file: `{"kind": ..., "coeffs": [{"num": ..., "den": ...}, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesFile {
    pub kind: SeriesKind,
    pub coeffs: Vec<RationalRepr>,
}

impl From<&FormalSeries> for SeriesFile {
    fn from(series: &FormalSeries) -> Self {
        Self { kind: series.kind, coeffs: series.coeffs.iter().map(RationalRepr::from).collect() }
    }
}

impl TryFrom<&SeriesFile> for FormalSeries {
    type Error = Error;

    fn try_from(file: &SeriesFile) -> Result<Self> {
        let coeffs = file.coeffs.iter().map(BigRational::try_from).collect::<Result<Vec<_>>>()?;
        Ok(FormalSeries::new(file.kind, coeffs))
    }
}

impl FormalSeries {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SeriesFile::from(self)).expect("series serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SeriesFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        FormalSeries::try_from(&file)
    }
}

/// Parse `"3"`, `"-7/2"`, `"0.25"` or `"1e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Format(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(digits * ten.pow(scale as u32))
    } else {
        BigRational::new(digits, ten.pow(scale.unsigned_abs()))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}
