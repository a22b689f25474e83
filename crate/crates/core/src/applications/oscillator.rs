//! Ground-state energy of `H = p^2 + x^2 + beta x^4`.
//!
//! The unperturbed levels are `2n + 1`, so `E(beta) = 1 + sum_{n>=1} b_n beta^n`
//! with `b_1 = 3/4`. Other normalizations rescale `b_n` by powers of two.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{euler_integral_eval, eval_power_as_factorial, QuadratureSpec};
use crate::pade::{pade_construct, pade_eval};
use crate::scalar::{real, PrecisionContext, Real};
use crate::series::{factorial, FormalSeries, SeriesKind};
use crate::transform::power_to_factorial_coeffs;

/// Highest order generated by [`oscillator_coeffs`].
pub const MAX_ORDER: usize = 200;

/// Reference ground-state energy at `beta = 1/5`.
pub const E_EXACT: &str = "1.118292654367039154";

/// Rayleigh–Schrödinger coefficients `b_0 .. b_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OscillatorSeries {
    coeffs: Vec<BigRational>,
}

impl OscillatorSeries {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `gamma_n = b_{n+1}`, the power series of `(E - 1) / beta`.
    pub fn shift_series(&self) -> FormalSeries {
        FormalSeries::new(SeriesKind::Power, self.coeffs[1..].to_vec())
    }
}

/// Exact `b_0 .. b_order`.
///
/// Writes the `k`-th order correction to `e^(x^2/2) psi` as an even
/// polynomial `sum_i A_{k,i} x^(2i)` of degree `4k` and solves the
/// perturbation hierarchy degree by degree from the top; `b_k = -2 A_{k,1}`.
pub fn oscillator_coeffs(order: usize) -> Result<OscillatorSeries> {
    if order > MAX_ORDER {
        return Err(Error::Domain(format!("order {order} exceeds {MAX_ORDER}")));
    }
    let mut a: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    let get = |row: &[BigRational], i: usize| row.get(i).cloned().unwrap_or_else(BigRational::zero);
    for k in 1..=order {
        let top = 2 * k;
        let mut row = vec![BigRational::zero(); top + 2];
        for i in (1..=top).rev() {
            let mut acc = BigRational::zero();
            for j in 1..k {
                acc += &b[j] * get(&a[k - j], i);
            }
            if i >= 2 {
                acc -= get(&a[k - 1], i - 2);
            }
            let c = BigInt::from((2 * i + 2) * (2 * i + 1));
            acc += BigRational::from_integer(c) * &row[i + 1];
            row[i] = acc / BigRational::from_integer(BigInt::from(4 * i));
        }
        row.truncate(top + 1);
        b.push(-BigRational::from_integer(BigInt::from(2)) * &row[1]);
        a.push(row);
    }
    Ok(OscillatorSeries { coeffs: b })
}

/// `r_n = b_n / [(-1)^(n+1) sqrt(24) pi^(-3/2) Gamma(n + 1/2) (3/2)^n]` for `n = 1..=N`.
///
/// Uses `Gamma(n + 1/2) = (1/2)_n sqrt(pi)`, so `r_n = q_n pi / sqrt(24)` with
/// `q_n = b_n / ((-1)^(n+1) (1/2)_n (3/2)^n)` computed exactly.
pub fn asymptotics_check(series: &OscillatorSeries) -> Result<Vec<(usize, f64)>> {
    if series.order() < 20 {
        return Err(Error::Domain(format!("asymptotic check needs N >= 20, got {}", series.order())));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let three_halves = BigRational::new(BigInt::from(3), BigInt::from(2));
    let scale = std::f64::consts::PI / 24f64.sqrt();
    let mut poch = BigRational::one();
    let mut power = BigRational::one();
    let mut out = Vec::with_capacity(series.order());
    for (n, bn) in series.coeffs().iter().enumerate().skip(1) {
        poch *= &half + BigRational::from_integer(BigInt::from(n - 1));
        power *= &three_halves;
        let mut qn = bn / (&poch * &power);
        if n % 2 == 0 {
            qn = -qn;
        }
        let qf = qn.to_f64().ok_or_else(|| Error::Instability(format!("r_{n} out of f64 range")))?;
        out.push((n, qf * scale));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OscillatorMethod {
    Factorial,
    Pade,
    Integral,
}

impl OscillatorMethod {
    pub const ALL: [OscillatorMethod; 3] = [Self::Factorial, Self::Pade, Self::Integral];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Factorial => "factorial",
            Self::Pade => "pade",
            Self::Integral => "integral",
        }
    }
}

/// `[L/M]` with `L + M = order`, diagonal or one above it.
pub fn pade_degrees(order: usize) -> (usize, usize) {
    (order.div_ceil(2), order / 2)
}

/// `E(beta)` from `gamma_0 .. gamma_N` (that is `b_1 .. b_{N+1}`).
///
/// * `Factorial`: `1 + beta sum_{m=0}^{N} (lambda_m / m!) prod_{k=1}^{m} beta / (beta + 1/k)`.
/// * `Pade`: `1 + beta [L/M](beta)` of the `gamma` series, `L + M = N`.
/// * `Integral`: `1 + int_0^1 t^(1/beta - 1) phi(1 - t) dt`, with `phi` the
///   `[L/M]` Padé approximant of `sum (lambda_m / m!) u^m`.
pub fn oscillator_energy<T: Real>(
    beta: &BigRational,
    order: usize,
    method: OscillatorMethod,
    ctx: &PrecisionContext,
) -> Result<T> {
    if !beta.is_positive() {
        return Err(Error::Domain(format!("coupling must be positive, got {beta}")));
    }
    let series = oscillator_coeffs(order + 1)?;
    let gamma = series.shift_series();
    let beta_t: T = real(beta, ctx);
    let one = T::from_i64(1, ctx);
    let (l, m) = pade_degrees(order);
    match method {
        OscillatorMethod::Factorial => {
            let lambda = power_to_factorial_coeffs(&gamma, order)?;
            let report = eval_power_as_factorial(&lambda, &beta_t, order + 1, ctx)?;
            Ok(one + beta_t * report.final_value)
        }
        OscillatorMethod::Pade => {
            let p = pade_construct(gamma.coeffs(), l, m)?;
            Ok(one + beta_t.clone() * pade_eval(&p, &beta_t, ctx)?)
        }
        OscillatorMethod::Integral => {
            let lambda = power_to_factorial_coeffs(&gamma, order)?;
            let reduced: Vec<BigRational> = lambda
                .iter()
                .enumerate()
                .map(|(n, v)| v / BigRational::from_integer(factorial(n)))
                .collect();
            let z = BigRational::one() / beta;
            let integral = euler_integral_eval::<T>(&reduced, &z, l, m, &QuadratureSpec::default(), ctx)?;
            Ok(one + integral.value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// `<n| x^4 |0>^2` for `x = (a + a^dagger) / sqrt 2`, exactly.
    ///
    /// States are stored as `sum r_n sqrt(n!) |n>` so every amplitude stays rational.
    fn x4_matrix_elements_squared() -> Vec<BigRational> {
        let mut r = vec![BigRational::zero(); 6];
        r[0] = BigRational::one();
        for _ in 0..4 {
            let mut next = vec![BigRational::zero(); 6];
            for n in 0..5 {
                next[n + 1] += &r[n];
                if n > 0 {
                    next[n - 1] += &r[n] * BigRational::from_integer(n.into());
                }
            }
            r = next;
        }
        (0..6)
            .map(|n| &r[n] * &r[n] * BigRational::from_integer(factorial(n)) / BigRational::from_integer(16.into()))
            .collect()
    }

    #[test]
    fn low_orders() {
        let s = oscillator_coeffs(4).unwrap();
        assert_eq!(s.coeffs(), &[q(1, 1), q(3, 4), q(-21, 16), q(333, 64), q(-30885, 1024)]);
    }

    #[test]
    fn first_and_second_order_from_matrix_elements() {
        let m = x4_matrix_elements_squared();
        // first order is <0|x^4|0>, whose square is m[0]
        assert_eq!(m[0], q(9, 16));
        let b = oscillator_coeffs(2).unwrap();
        assert_eq!(&b.coeffs()[1] * &b.coeffs()[1], m[0]);
        // second order: -sum_{n>0} |<n|x^4|0>|^2 / (2n)
        let second: BigRational =
            (1..6).map(|n| -&m[n] / BigRational::from_integer(BigInt::from(2 * n))).sum();
        assert_eq!(b.coeffs()[2], second);
    }

    #[test]
    fn signs_alternate() {
        let s = oscillator_coeffs(60).unwrap();
        for (n, bn) in s.coeffs().iter().enumerate().skip(1) {
            assert_eq!(bn.is_positive(), n % 2 == 1, "n={n}");
        }
    }

    #[test]
    fn asymptotic_ratio_trend() {
        let s = oscillator_coeffs(60).unwrap();
        let r = asymptotics_check(&s).unwrap();
        assert!(r.iter().all(|(_, v)| *v > 0.0));
        let r50 = r[49].1;
        assert!(r50 > 0.8 && r50 < 1.2, "r_50 = {r50}");
        for w in r.windows(2).skip(29) {
            assert!((w[1].1 - 1.0).abs() < (w[0].1 - 1.0).abs(), "n={}", w[1].0);
        }
        assert!(asymptotics_check(&oscillator_coeffs(10).unwrap()).is_err());
    }

    #[test]
    fn order_limit() {
        assert!(oscillator_coeffs(MAX_ORDER + 1).is_err());
    }

    #[test]
    fn pade_degree_split() {
        assert_eq!(pade_degrees(34), (17, 17));
        assert_eq!(pade_degrees(33), (17, 16));
        assert_eq!(pade_degrees(0), (0, 0));
    }

    #[test]
    fn weak_coupling_methods_agree() {
        let ctx = PrecisionContext::default();
        let beta = q(1, 100);
        let values: Vec<f64> = [OscillatorMethod::Factorial, OscillatorMethod::Pade]
            .iter()
            .map(|&m| oscillator_energy::<f64>(&beta, 10, m, &ctx).unwrap())
            .collect();
        for v in &values {
            assert!((v - values[1]).abs() < 1e-9, "{values:?}");
        }
        assert!(matches!(oscillator_energy::<f64>(&q(0, 1), 4, OscillatorMethod::Pade, &ctx), Err(Error::Domain(_))));
    }
}
