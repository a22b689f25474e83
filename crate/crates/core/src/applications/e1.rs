//! Exponential integral `E1(z)`: its divergent inverse power series, the
//! convergent factorial series, and two independent reference evaluations.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::evaluation::GaussLegendre;
use crate::scalar::{PrecisionContext, Real};
use crate::series::{factorials, FormalSeries, SeriesKind};
use crate::transform::inverse_power_to_factorial;

/// Extra working digits used inside the reference evaluations.
const GUARD_DIGITS: u32 = 10;
const MAX_FRACTION_TERMS: usize = 1_000_000;

/// `e^z E1(z) = (1/z) sum_m (-1)^m m! / z^m` in both representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E1Series {
    /// `c_m = (-1)^m m!`
    pub inverse_power: FormalSeries,
    /// `d_n = (-1)^n sum_v S1(n, v) v!`
    pub factorial: FormalSeries,
}

impl E1Series {
    pub fn new(order: usize) -> Self {
        let inverse_power = FormalSeries::from_integers(
            SeriesKind::InversePower,
            factorials(order + 1).enumerate().map(|(m, f)| if m % 2 == 0 { f } else { -f }),
        );
        let factorial = inverse_power_to_factorial(&inverse_power, order).expect("order + 1 coefficients present");
        Self { inverse_power, factorial }
    }
}

/// Factorial-series coefficients `d_0 .. d_order` of `e^z E1(z)`.
pub fn e1_factorial_coeffs(order: usize) -> Vec<BigRational> {
    E1Series::new(order).factorial.into_coeffs()
}

fn require_positive<T: Real>(z: &T) -> Result<()> {
    if !(z.clone() > T::zero()) || !z.is_finite() {
        return Err(Error::Domain(format!("E1 reference needs z > 0, got {z}")));
    }
    Ok(())
}

/// `e^z E1(z)` by modified Lentz evaluation of the continued fraction
/// `1/(z+1 - 1/(z+3 - 4/(z+5 - 9/(z+7 - ...))))`.
pub fn scaled_e1_reference<T: Real>(z: &T, ctx: &PrecisionContext) -> Result<T> {
    require_positive(z)?;
    let work = ctx.widened(GUARD_DIGITS);
    let tiny = T::tolerance(-(T::effective_digits(&work) as i32), &work);
    let tol = T::tolerance(1, &work);
    let one = T::from_i64(1, &work);
    let mut f = tiny.clone();
    let mut c = f.clone();
    let mut d = T::zero();
    for j in 1..=MAX_FRACTION_TERMS {
        let k = (j - 1) as i64;
        let a = if j == 1 { one.clone() } else { T::from_i64(-(k * k), &work) };
        let b = z.clone() + T::from_i64(2 * k + 1, &work);
        d = b.clone() + a.clone() * d;
        if d.is_zero() {
            d = tiny.clone();
        }
        c = b + a / c;
        if c.is_zero() {
            c = tiny.clone();
        }
        d = one.clone() / d;
        let delta = c.clone() * d.clone();
        f = f * delta.clone();
        if (delta - one.clone()).abs() < tol {
            return Ok(f);
        }
    }
    Err(Error::Convergence(format!("continued fraction for E1({z}) after {MAX_FRACTION_TERMS} terms")))
}

/// `E1(z)` from [`scaled_e1_reference`].
pub fn e1_reference<T: Real>(z: &T, ctx: &PrecisionContext) -> Result<T> {
    let scaled = scaled_e1_reference(z, ctx)?;
    Ok(scaled * (-z.clone()).exp())
}

/// `e^z E1(z) = int_0^inf e^(-s) / (z + s) ds` by graded composite Gauss–Legendre.
///
/// Panel widths grow like `(s + z) / 2`, capped at 2, so every panel stays well
/// away from the singularity at `s = -z`. The range is cut where `e^(-s)`
/// drops below the working precision.
pub fn e1_quadrature<T: Real>(z: &T, ctx: &PrecisionContext) -> Result<T> {
    require_positive(z)?;
    let work = ctx.widened(GUARD_DIGITS);
    let digits = T::effective_digits(&work) as f64;
    let s_max = (digits + 5.0) * std::f64::consts::LN_10;
    let rule = GaussLegendre::<T>::new(32, &work)?;
    let zf = z.to_f64();
    let two = T::from_i64(2, &work);
    let mut total = T::zero();
    let mut s = 0.0f64;
    while s < s_max {
        let width = (0.5 * (s + zf)).min(2.0);
        let lo = T::from_f64(s, &work);
        let half = T::from_f64(width, &work) / two.clone();
        let mid = lo + half.clone();
        let mut acc = T::zero();
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            let t = mid.clone() + half.clone() * x.clone();
            acc = acc + w.clone() * (-t.clone()).exp() / (z.clone() + t);
        }
        total = total + acc * half;
        s += width;
    }
    Ok(total)
}

/// `(-1)^m m!`.
pub fn alternating_factorial(m: usize) -> BigInt {
    let f = crate::series::factorial(m);
    if m % 2 == 0 {
        f
    } else {
        -f
    }
}
