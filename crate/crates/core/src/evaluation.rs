//! Numerical back-ends: factorial-series partial sums, the product form of a
//! re-expanded power series, and the Euler integral with a Padé-rebuilt
//! conjugate function.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pade::{pade_construct, pade_eval, PadeApprox};
use crate::scalar::{real, PrecisionContext, Real};
use crate::series::{check_pochhammer_poles, factorial, FormalSeries, SeriesKind};

/// Length of the Padé pole-detection grid on `[0, 1]` is `POLE_GRID + 1`.
pub const POLE_GRID: i64 = 64;

/// Composite Gauss–Legendre layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub points_per_panel: usize,
    pub panels: usize,
    /// Treat the integrable endpoint power `t^(z-1)` at `t = 0` separately.
    pub singularity_split: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { points_per_panel: 32, panels: 8, singularity_split: true }
    }
}

impl QuadratureSpec {
    pub fn new(points_per_panel: usize, panels: usize, singularity_split: bool) -> Result<Self> {
        let spec = Self { points_per_panel, panels, singularity_split };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points_per_panel < 8 {
            return Err(Error::InvalidInput(format!(
                "at least 8 points per panel required, got {}",
                self.points_per_panel
            )));
        }
        if self.panels < 1 {
            return Err(Error::InvalidInput("at least one panel required".into()));
        }
        if self.points_per_panel * self.panels < 16 {
            return Err(Error::InvalidInput("at least 16 quadrature nodes required".into()));
        }
        Ok(())
    }

    fn doubled(&self) -> Self {
        Self { panels: self.panels * 2, ..*self }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Roots of `P_n` by Newton iteration from the usual cosine guesses.
    pub fn new(n: usize, ctx: &PrecisionContext) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("Gauss–Legendre rule needs at least one node".into()));
        }
        let one = T::from_i64(1, ctx);
        let two = T::from_i64(2, ctx);
        let tol = T::tolerance(2, ctx);
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        for i in 0..n.div_ceil(2) {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut x = T::from_f64(guess, ctx);
            let mut derivative = one.clone();
            let mut converged = false;
            for _ in 0..200 {
                let (p, dp) = legendre(n, &x, ctx);
                let dx = p / dp.clone();
                x = x - dx.clone();
                derivative = dp;
                if dx.abs() <= tol.clone() * T::max_of(x.abs(), one.clone()) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Convergence(format!("Legendre root {i} of P_{n}")));
            }
            let (_, dp) = legendre(n, &x, ctx);
            if dp.is_finite() {
                derivative = dp;
            }
            let w = two.clone() / ((one.clone() - x.clone() * x.clone()) * derivative.clone() * derivative);
            nodes[i] = x.clone();
            nodes[n - 1 - i] = -x;
            weights[i] = w.clone();
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<T: Real>(n: usize, x: &T, ctx: &PrecisionContext) -> (T, T) {
    let mut p0 = T::from_i64(1, ctx);
    let mut p1 = x.clone();
    for k in 2..=n {
        let kf = T::from_i64(k as i64, ctx);
        let a = T::from_i64(2 * k as i64 - 1, ctx);
        let b = T::from_i64(k as i64 - 1, ctx);
        let p2 = (a * x.clone() * p1.clone() - b * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_i64(n as i64, ctx);
    let one = T::from_i64(1, ctx);
    let dp = nf * (x.clone() * p1.clone() - p0) / (x.clone() * x.clone() - one);
    (p1, dp)
}

/// Integral estimate with the change under one panel doubling.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureEstimate<T> {
    /// Estimate from the doubled panel count.
    pub value: T,
    pub doubling_difference: T,
    /// Whether `|doubling_difference| < 10^(-P/2) max(1, |value|)`.
    pub converged: bool,
}

impl<T: Real> QuadratureEstimate<T> {
    fn combine(coarse: T, fine: T, ctx: &PrecisionContext) -> Self {
        let doubling_difference = (fine.clone() - coarse).abs();
        let scale = T::max_of(fine.abs(), T::from_i64(1, ctx));
        let converged = doubling_difference < half_precision::<T>(ctx) * scale;
        Self { value: fine, doubling_difference, converged }
    }
}

/// `10^(-P/2)` for the effective precision of `T`.
pub fn half_precision<T: Real>(ctx: &PrecisionContext) -> T {
    let p = T::effective_digits(ctx) as i32;
    T::tolerance(p - p / 2, ctx)
}

fn panel_sum<T, F>(f: &F, a: &T, b: &T, panels: usize, rule: &GaussLegendre<T>, ctx: &PrecisionContext) -> Result<T>
where
    T: Real,
    F: Fn(&T) -> Result<T>,
{
    let two = T::from_i64(2, ctx);
    let width = (b.clone() - a.clone()) / T::from_i64(panels as i64, ctx);
    let half = width.clone() / two;
    let mut total = T::zero();
    for p in 0..panels {
        let mid = a.clone() + width.clone() * T::from_i64(p as i64, ctx) + half.clone();
        let mut acc = T::zero();
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let t = mid.clone() + half.clone() * x.clone();
            let v = f(&t)?;
            if !v.is_finite() {
                return Err(Error::Integration(format!("integrand is not finite at t = {t}")));
            }
            acc = acc + w.clone() * v;
        }
        total = total + acc * half.clone();
    }
    Ok(total)
}

/// Composite Gauss–Legendre on `[a, b]`, once with `spec.panels` and once doubled.
pub fn quadrature_interval<T, F>(f: F, a: &T, b: &T, spec: &QuadratureSpec, ctx: &PrecisionContext) -> Result<QuadratureEstimate<T>>
where
    T: Real,
    F: Fn(&T) -> Result<T>,
{
    spec.validate()?;
    let rule = GaussLegendre::new(spec.points_per_panel, ctx)?;
    let coarse = panel_sum(&f, a, b, spec.panels, &rule, ctx)?;
    let fine = panel_sum(&f, a, b, spec.doubled().panels, &rule, ctx)?;
    Ok(QuadratureEstimate::combine(coarse, fine, ctx))
}

/// Composite Gauss–Legendre on `[0, 1]`.
pub fn quadrature_01<T, F>(f: F, spec: &QuadratureSpec, ctx: &PrecisionContext) -> Result<QuadratureEstimate<T>>
where
    T: Real,
    F: Fn(&T) -> Result<T>,
{
    quadrature_interval(f, &T::zero(), &T::from_i64(1, ctx), spec, ctx)
}

/// Partial sums with an optional reference value.
#[derive(Debug, Clone, PartialEq)]
pub struct SummationReport<T> {
    pub partial_sums: Vec<T>,
    pub final_value: T,
    pub reference: Option<T>,
    pub relative_errors: Option<Vec<T>>,
}

impl<T: Real> SummationReport<T> {
    fn from_partial_sums(partial_sums: Vec<T>) -> Result<Self> {
        let final_value = partial_sums
            .last()
            .cloned()
            .ok_or_else(|| Error::InvalidInput("at least one term required".into()))?;
        Ok(Self { partial_sums, final_value, reference: None, relative_errors: None })
    }

    /// Attach a reference and the relative error of every partial sum.
    pub fn with_reference(mut self, reference: T) -> Self {
        let scale = reference.abs();
        self.relative_errors = Some(
            self.partial_sums
                .iter()
                .map(|s| {
                    let diff = (s.clone() - reference.clone()).abs();
                    if scale.is_zero() {
                        diff
                    } else {
                        diff / scale.clone()
                    }
                })
                .collect(),
        );
        self.reference = Some(reference);
        self
    }

    pub fn len(&self) -> usize {
        self.partial_sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial_sums.is_empty()
    }
}

fn require_terms(available: usize, terms: usize) -> Result<()> {
    if terms == 0 {
        return Err(Error::InvalidInput("at least one term required".into()));
    }
    if terms > available {
        return Err(Error::InvalidInput(format!("{terms} terms requested, {available} coefficients available")));
    }
    Ok(())
}

/// Partial sums `sum_{n=0}^{m} d_n / (z)_(n+1)` for `m = 0..terms-1`.
pub fn sum_factorial_series<T: Real>(d: &FormalSeries, z: &T, terms: usize, ctx: &PrecisionContext) -> Result<SummationReport<T>> {
    d.require_kind(SeriesKind::Factorial)?;
    require_terms(d.len(), terms)?;
    check_pochhammer_poles(z, terms, ctx)?;
    if !(z.clone() > T::zero()) {
        return Err(Error::Domain(format!("factorial series needs z > 0, got {z}")));
    }
    let mut pochhammer = T::from_i64(1, ctx);
    let mut acc = T::zero();
    let mut partial_sums = Vec::with_capacity(terms);
    for (n, dn) in d.coeffs().iter().take(terms).enumerate() {
        pochhammer = pochhammer * (z.clone() + T::from_i64(n as i64, ctx));
        acc = acc + real::<T>(dn, ctx) / pochhammer.clone();
        partial_sums.push(acc.clone());
    }
    SummationReport::from_partial_sums(partial_sums)
}

/// Partial sums `sum_{n=0}^{m} c_n / z^(n+1)` for `m = 0..terms-1`.
pub fn sum_inverse_power_series<T: Real>(
    c: &FormalSeries,
    z: &T,
    terms: usize,
    ctx: &PrecisionContext,
) -> Result<SummationReport<T>> {
    c.require_kind(SeriesKind::InversePower)?;
    require_terms(c.len(), terms)?;
    if z.is_zero() {
        return Err(Error::Pole("inverse power series at z = 0".into()));
    }
    let inv = T::from_i64(1, ctx) / z.clone();
    let mut power = inv.clone();
    let mut acc = T::zero();
    let mut partial_sums = Vec::with_capacity(terms);
    for cn in c.coeffs().iter().take(terms) {
        acc = acc + real::<T>(cn, ctx) * power.clone();
        partial_sums.push(acc.clone());
        power = power * inv.clone();
    }
    SummationReport::from_partial_sums(partial_sums)
}

/// Partial sums of `sum_{m=0}^{M-1} (lambda_m / m!) prod_{k=1}^{m} z / (z + 1/k)`.
pub fn eval_power_as_factorial<T: Real>(
    lambda: &[BigRational],
    z: &T,
    terms: usize,
    ctx: &PrecisionContext,
) -> Result<SummationReport<T>> {
    require_terms(lambda.len(), terms)?;
    if !(z.clone() > T::zero()) {
        return Err(Error::Domain(format!("product form needs z > 0, got {z}")));
    }
    let one = T::from_i64(1, ctx);
    let mut product = one.clone();
    let mut factorial = one.clone();
    let mut acc = T::zero();
    let mut partial_sums = Vec::with_capacity(terms);
    for (m, lm) in lambda.iter().take(terms).enumerate() {
        if m > 0 {
            let k = T::from_i64(m as i64, ctx);
            product = product * (z.clone() / (z.clone() + one.clone() / k.clone()));
            factorial = factorial * k;
        }
        acc = acc + real::<T>(lm, ctx) / factorial.clone() * product.clone();
        partial_sums.push(acc.clone());
    }
    SummationReport::from_partial_sums(partial_sums)
}

/// `prod_{k=1}^{m} z / (z + 1/k)` evaluated from scratch.
pub fn product_factor<T: Real>(z: &T, m: usize, ctx: &PrecisionContext) -> T {
    let one = T::from_i64(1, ctx);
    (1..=m).fold(one.clone(), |acc, k| {
        let k = T::from_i64(k as i64, ctx);
        acc * (z.clone() * k.clone() / (z.clone() * k + one.clone()))
    })
}

/// Result of [`euler_integral_eval`].
#[derive(Debug, Clone)]
pub struct EulerIntegral<T> {
    pub value: T,
    pub quadrature: QuadratureEstimate<T>,
    pub pade: PadeApprox,
}

/// Split point of the endpoint treatment near `t = 0`.
pub fn split_point() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(16))
}

/// Largest denominator handled by the rational substitution `t = u^q`.
const MAX_SUBSTITUTION_DENOMINATOR: u32 = 64;

/// `int_0^1 t^(z-1) phi(1-t) dt` with `phi` the `[L/M]` Padé approximant of
/// `sum a_n u^n` in `u = 1 - t`.
///
/// `a` holds reduced coefficients `a_n = d_n / n!`. For integer `z` the
/// integrand is a smooth function on `[0, 1]`. For `z = p/q` in lowest terms
/// with `q > 1` and the split enabled, `[0, eps]` is integrated after
/// `t = u^q`, which turns the integrand into `q u^(p-1) phi(1 - u^q)`.
pub fn euler_integral_eval<T: Real>(
    a: &[BigRational],
    z: &BigRational,
    pade_l: usize,
    pade_m: usize,
    spec: &QuadratureSpec,
    ctx: &PrecisionContext,
) -> Result<EulerIntegral<T>> {
    spec.validate()?;
    if !z.is_positive() {
        return Err(Error::Domain(format!("Euler integral needs z > 0, got {z}")));
    }
    let pade = pade_construct(a, pade_l, pade_m)?;
    let grid: Vec<BigRational> =
        (0..=POLE_GRID).map(|j| BigRational::new(BigInt::from(j), BigInt::from(POLE_GRID))).collect();
    if let Some((lo, hi)) = pade.denominator_sign_change(&grid) {
        return Err(Error::PoleInDomain(format!("[{lo}, {hi}]")));
    }

    let one = T::from_i64(1, ctx);
    let phi = |t: &T| pade_eval(&pade, &(one.clone() - t.clone()), ctx);
    let exponent = z - BigRational::one();

    let quadrature = if z.is_integer() {
        let power = exponent.to_integer().to_i64().ok_or_else(|| Error::Domain(format!("z = {z} too large")))?;
        quadrature_01(|t: &T| Ok(t.powi(power, ctx) * phi(t)?), spec, ctx)?
    } else if spec.singularity_split {
        let eps: T = real(&split_point(), ctx);
        let zm1: T = real(&exponent, ctx);
        let smooth = |t: &T| Ok(t.powf(&zm1) * phi(t)?);
        let tail = quadrature_interval(smooth, &eps, &one, spec, ctx)?;
        let head = endpoint_piece::<T, _>(z, &eps, &phi, spec, ctx)?;
        let value = head.value.clone() + tail.value.clone();
        let diff = head.doubling_difference + tail.doubling_difference;
        let scale = T::max_of(value.abs(), one.clone());
        QuadratureEstimate {
            converged: diff < half_precision::<T>(ctx) * scale,
            value,
            doubling_difference: diff,
        }
    } else {
        let zm1: T = real(&exponent, ctx);
        quadrature_01(
            |t: &T| if t.is_zero() { Ok(T::zero()) } else { Ok(t.powf(&zm1) * phi(t)?) },
            spec,
            ctx,
        )?
    };
    Ok(EulerIntegral { value: quadrature.value.clone(), quadrature, pade })
}

/// `int_0^eps t^(z-1) phi(1-t) dt` with the endpoint power removed by substitution.
fn endpoint_piece<T, F>(z: &BigRational, eps: &T, phi: &F, spec: &QuadratureSpec, ctx: &PrecisionContext) -> Result<QuadratureEstimate<T>>
where
    T: Real,
    F: Fn(&T) -> Result<T>,
{
    let p = z.numer().clone();
    let q = z.denom().clone();
    let small_denominator = q <= BigInt::from(MAX_SUBSTITUTION_DENOMINATOR);
    if let (true, Some(p), Some(q)) = (small_denominator, p.to_i64(), q.to_i64()) {
        // t = u^q, dt = q u^(q-1) du, t^(z-1) = u^(p-q)
        let qt = T::from_i64(q, ctx);
        let upper = eps.powf(&(T::from_i64(1, ctx) / qt.clone()));
        return quadrature_interval(
            |u: &T| Ok(qt.clone() * u.powi(p - 1, ctx) * phi(&u.powi(q, ctx))?),
            &T::zero(),
            &upper,
            spec,
            ctx,
        );
    }
    // t = u^(1/z), dt = (1/z) u^(1/z - 1) du, t^(z-1) = u^(1 - 1/z)
    let zt: T = real(z, ctx);
    let inv = T::from_i64(1, ctx) / zt.clone();
    let upper = eps.powf(&zt);
    quadrature_interval(
        |u: &T| {
            let t = if u.is_zero() { T::zero() } else { u.powf(&inv) };
            Ok(inv.clone() * phi(&t)?)
        },
        &T::zero(),
        &upper,
        spec,
        ctx,
    )
}

/// `n! / (z)_(n+1)` evaluated through [`euler_integral_eval`] with `a = e_n`.
pub fn beta_by_quadrature<T: Real>(z: &BigRational, n: usize, spec: &QuadratureSpec, ctx: &PrecisionContext) -> Result<T> {
    let mut a = vec![BigRational::zero(); n + 1];
    a[n] = BigRational::one();
    Ok(euler_integral_eval::<T>(&a, z, n, 0, spec, ctx)?.value)
}

/// Exact `n! / (z)_(n+1)`, the Beta function `B(z, n+1)`.
pub fn beta_exact(z: &BigRational, n: usize) -> BigRational {
    BigRational::from_integer(factorial(n)) / crate::series::pochhammer_exact(z, n + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::BigFloat;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn close<T: Real>(a: &T, b: &T, tol: &T) -> bool {
        (a.clone() - b.clone()).abs() <= tol.clone() * T::max_of(b.abs(), T::from_f64(1.0, &ctx()))
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(7, 4, false).is_err());
        assert!(QuadratureSpec::new(8, 0, false).is_err());
        assert!(QuadratureSpec::new(8, 1, false).is_err());
        assert!(QuadratureSpec::new(8, 2, false).is_ok());
    }

    #[test]
    fn gauss_legendre_weights_sum_to_two() {
        let ctx = ctx();
        for n in [8usize, 9, 32] {
            let rule = GaussLegendre::<BigFloat>::new(n, &ctx).unwrap();
            let total = rule.weights().iter().cloned().fold(BigFloat::from_i64(0, &ctx), |a, b| a + b);
            assert!(close(&total, &BigFloat::from_i64(2, &ctx), &BigFloat::tolerance(3, &ctx)), "n={n}");
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let ctx = ctx();
        let rule = GaussLegendre::<f64>::new(8, &ctx).unwrap();
        // x^14 has integral 2/15 over [-1, 1]
        let v: f64 = rule.nodes().iter().zip(rule.weights()).map(|(x, w)| w * f64::powi(*x, 14)).sum();
        assert!((v - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn quadrature_examples() {
        let ctx = ctx();
        let spec = QuadratureSpec::default();
        let one = quadrature_01(|_: &BigFloat| Ok(BigFloat::from_i64(1, &ctx)), &spec, &ctx).unwrap();
        assert!(one.converged);
        assert!(close(&one.value, &BigFloat::from_i64(1, &ctx), &BigFloat::tolerance(3, &ctx)));
        let sq = quadrature_01(|t: &BigFloat| Ok(t.clone() * t.clone()), &spec, &ctx).unwrap();
        assert!(close(&sq.value, &real(&q(1, 3), &ctx), &BigFloat::tolerance(3, &ctx)));
        let beta = quadrature_01(
            |t: &BigFloat| {
                let u = BigFloat::from_i64(1, &ctx) - t.clone();
                Ok(t.powi(4, &ctx) * u.powi(3, &ctx))
            },
            &spec,
            &ctx,
        )
        .unwrap();
        assert!(close(&beta.value, &real(&q(6, 1680), &ctx), &BigFloat::tolerance(3, &ctx)));
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let ctx = ctx();
        let r = quadrature_01(|_: &f64| Ok(f64::NAN), &QuadratureSpec::default(), &ctx);
        assert!(matches!(r, Err(Error::Integration(_))));
    }

    #[test]
    fn unit_factorial_series_is_constant() {
        let ctx = ctx();
        let d = FormalSeries::new(SeriesKind::Factorial, vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)]);
        let r = sum_factorial_series(&d, &2.0f64, 4, &ctx).unwrap();
        assert!(r.partial_sums.iter().all(|s| *s == 0.5));
    }

    #[test]
    fn factorial_series_rejects_poles_and_kind() {
        let ctx = ctx();
        let d = FormalSeries::new(SeriesKind::Factorial, vec![q(1, 1); 4]);
        assert!(matches!(sum_factorial_series(&d, &-2.0f64, 4, &ctx), Err(Error::Pole(_))));
        assert!(matches!(sum_factorial_series(&d, &-2.5f64, 4, &ctx), Err(Error::Domain(_))));
        assert!(sum_factorial_series(&d, &1.0f64, 5, &ctx).is_err());
        let p = FormalSeries::new(SeriesKind::Power, vec![q(1, 1)]);
        assert!(sum_factorial_series(&p, &1.0f64, 1, &ctx).is_err());
    }

    #[test]
    fn inverse_power_sum_of_geometric_series() {
        // sum_n 1 / z^(n+1) = 1 / (z - 1)
        let ctx = ctx();
        let c = FormalSeries::new(SeriesKind::InversePower, vec![q(1, 1); 60]);
        let r = sum_inverse_power_series(&c, &2.0f64, 60, &ctx).unwrap();
        assert!((r.final_value - 1.0).abs() < 1e-15);
        assert!(matches!(sum_inverse_power_series(&c, &0.0f64, 1, &ctx), Err(Error::Pole(_))));
    }

    #[test]
    fn constant_lambda_is_constant() {
        let ctx = ctx();
        let r = eval_power_as_factorial(&[q(3, 2), q(0, 1), q(0, 1)], &0.7f64, 3, &ctx).unwrap();
        assert!(r.partial_sums.iter().all(|s| *s == 1.5));
        assert!(matches!(eval_power_as_factorial(&[q(1, 1)], &0.0f64, 1, &ctx), Err(Error::Domain(_))));
    }

    #[test]
    fn incremental_product_matches_direct() {
        let ctx = ctx();
        let z: BigFloat = real(&q(1, 5), &ctx);
        let lambda: Vec<BigRational> = (0..=200).map(|m| BigRational::from_integer(factorial(m))).collect();
        let report = eval_power_as_factorial(&lambda, &z, 201, &ctx).unwrap();
        // with lambda_m = m! the increments are the products themselves
        let mut previous = BigFloat::from_i64(0, &ctx);
        for (m, s) in report.partial_sums.iter().enumerate() {
            let increment = s.clone() - previous;
            previous = s.clone();
            if m % 20 == 0 {
                let direct = product_factor(&z, m, &ctx);
                assert!(close(&increment, &direct, &BigFloat::tolerance(4, &ctx)), "m={m}");
            }
        }
    }

    #[test]
    fn reference_attaches_relative_errors() {
        let ctx = ctx();
        let d = FormalSeries::new(SeriesKind::Factorial, vec![q(1, 1), q(0, 1)]);
        let r = sum_factorial_series(&d, &2.0f64, 2, &ctx).unwrap().with_reference(0.25);
        assert_eq!(r.relative_errors.unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn euler_integral_of_unit_vector() {
        let ctx = ctx();
        let v = euler_integral_eval::<BigFloat>(&[q(1, 1)], &q(4, 1), 0, 0, &QuadratureSpec::default(), &ctx).unwrap();
        assert!(close(&v.value, &real(&q(1, 4), &ctx), &BigFloat::tolerance(4, &ctx)));
        assert!(v.quadrature.converged);
    }

    #[test]
    fn euler_integral_of_geometric_pade() {
        // [1/1] of 1 + u + u^2 is exactly 1/(1-u) = 1/t, so the integrand is t^(z-2)
        let ctx = ctx();
        let a = [q(1, 1), q(1, 1), q(1, 1)];
        for (z, expected) in [(q(2, 1), q(1, 1)), (q(3, 1), q(1, 2))] {
            let v = euler_integral_eval::<BigFloat>(&a, &z, 1, 1, &QuadratureSpec::default(), &ctx).unwrap();
            assert!(close(&v.value, &real(&expected, &ctx), &half_precision(&ctx)), "z={z}");
        }
    }

    #[test]
    fn fractional_exponents_match_beta_function() {
        let ctx = ctx();
        let spec = QuadratureSpec::default();
        for z in [q(3, 2), q(1, 3), q(7, 4)] {
            for n in [0usize, 3, 8] {
                let v: BigFloat = beta_by_quadrature(&z, n, &spec, &ctx).unwrap();
                let exact: BigFloat = real(&beta_exact(&z, n), &ctx);
                assert!(close(&v, &exact, &half_precision(&ctx)), "z={z} n={n}");
            }
        }
    }

    #[test]
    fn pole_inside_the_interval_is_refused() {
        // [0/1] of 1 + 2u + 4u^2... has its pole at u = 1/2
        let ctx = ctx();
        let a = [q(1, 1), q(2, 1)];
        let r = euler_integral_eval::<f64>(&a, &q(2, 1), 0, 1, &QuadratureSpec::default(), &ctx);
        assert!(matches!(r, Err(Error::PoleInDomain(_))));
    }

    #[test]
    fn degeneracy_propagates() {
        let ctx = ctx();
        let a = [q(1, 1), q(0, 1), q(1, 1)];
        let r = euler_integral_eval::<f64>(&a, &q(2, 1), 1, 1, &QuadratureSpec::default(), &ctx);
        assert!(matches!(r, Err(Error::Degeneracy { .. })));
    }
}
