//! Levin and Weniger sequence transformations.
//!
//! Both are ratios of weighted binomial sums over a window
//! `s_n .. s_{n+k}` of partial sums and matching remainder estimates `omega`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{PrecisionContext, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Levin,
    WenigerS,
}

/// How `omega_n` is built from the terms `a_n` of the series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaStrategy {
    /// `omega_n = a_{n+1}`.
    #[default]
    FirstNeglected,
    /// `omega_n = (beta + n) a_n`.
    ScaledTerm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformInput<T> {
    partial_sums: Vec<T>,
    omega: Vec<T>,
    beta: T,
}

impl<T: Real> TransformInput<T> {
    pub fn new(partial_sums: Vec<T>, omega: Vec<T>, beta: T) -> Result<Self> {
        if partial_sums.len() != omega.len() {
            return Err(Error::DimensionMismatch { expected: partial_sums.len(), found: omega.len() });
        }
        if !(beta > T::zero()) {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        if let Some(n) = omega.iter().position(Zero::is_zero) {
            return Err(Error::Estimate(n));
        }
        Ok(Self { partial_sums, omega, beta })
    }

    /// Partial sums of `terms` paired with remainder estimates from `strategy`.
    ///
    /// With [`OmegaStrategy::FirstNeglected`] the last term has no successor, so
    /// the sequences are one shorter than `terms`.
    pub fn from_terms(terms: &[T], strategy: OmegaStrategy, beta: T, ctx: &PrecisionContext) -> Result<Self> {
        let omega = remainder_estimates(terms, strategy, &beta, ctx)?;
        let mut partial_sums = Vec::with_capacity(omega.len());
        let mut acc = T::zero();
        for a in terms.iter().take(omega.len()) {
            acc = acc + a.clone();
            partial_sums.push(acc.clone());
        }
        Self::new(partial_sums, omega, beta)
    }

    pub fn partial_sums(&self) -> &[T] {
        &self.partial_sums
    }

    pub fn omega(&self) -> &[T] {
        &self.omega
    }

    pub fn beta(&self) -> &T {
        &self.beta
    }

    pub fn len(&self) -> usize {
        self.partial_sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial_sums.is_empty()
    }
}

/// Remainder estimates for the partial sums of `terms`.
pub fn remainder_estimates<T: Real>(
    terms: &[T],
    strategy: OmegaStrategy,
    beta: &T,
    ctx: &PrecisionContext,
) -> Result<Vec<T>> {
    let omega: Vec<T> = match strategy {
        OmegaStrategy::FirstNeglected => terms.iter().skip(1).cloned().collect(),
        OmegaStrategy::ScaledTerm => terms
            .iter()
            .enumerate()
            .map(|(n, a)| (beta.clone() + T::from_i64(n as i64, ctx)) * a.clone())
            .collect(),
    };
    match omega.iter().position(Zero::is_zero) {
        Some(n) => Err(Error::Estimate(match strategy {
            OmegaStrategy::FirstNeglected => n + 1,
            OmegaStrategy::ScaledTerm => n,
        })),
        None => Ok(omega),
    }
}

/// Ratio weights `w_j`, `j = 0..=k`, each relative to `j = k`.
fn weights<T: Real>(method: Method, beta: &T, n: usize, k: usize, ctx: &PrecisionContext) -> Vec<T> {
    let base = beta.clone() + T::from_i64(n as i64, ctx);
    let shifted = |j: usize| base.clone() + T::from_i64(j as i64, ctx);
    (0..=k)
        .map(|j| match method {
            Method::Levin => {
                let ratio = shifted(j) / shifted(k);
                ratio.powi(k as i64 - 1, ctx)
            }
            Method::WenigerS => {
                let mut w = T::one();
                for m in 0..k.saturating_sub(1) {
                    w = w * (shifted(j + m) / shifted(k + m));
                }
                w
            }
        })
        .collect()
}

fn transform<T: Real>(
    method: Method,
    input: &TransformInput<T>,
    k: usize,
    n: usize,
    ctx: &PrecisionContext,
) -> Result<T> {
    if n + k >= input.len() {
        return Err(Error::InvalidInput(format!(
            "order k = {k} at offset n = {n} needs {} terms, have {}",
            n + k + 1,
            input.len()
        )));
    }
    if k == 0 {
        return Ok(input.partial_sums[n].clone());
    }
    let w = weights(method, &input.beta, n, k, ctx);
    let mut num = T::zero();
    let mut den = T::zero();
    let mut den_scale = T::zero();
    let mut binom = T::one();
    for j in 0..=k {
        if j > 0 {
            binom = binom * T::from_i64((k - j + 1) as i64, ctx) / T::from_i64(j as i64, ctx);
        }
        let c = binom.clone() * w[j].clone() / input.omega[n + j].clone();
        let signed = if j % 2 == 0 { c } else { -c };
        num = num + signed.clone() * input.partial_sums[n + j].clone();
        den_scale = den_scale + signed.abs();
        den = den + signed;
    }
    if !den.is_finite() || den.abs() < T::tolerance(6, ctx) * den_scale {
        return Err(Error::Instability(format!(
            "denominator sum cancels at k = {k}, n = {n}"
        )));
    }
    Ok(num / den)
}

/// Levin transform `L_k^(n)` with weights `((beta+n+j)/(beta+n+k))^(k-1)`.
pub fn levin<T: Real>(input: &TransformInput<T>, k: usize, n: usize, ctx: &PrecisionContext) -> Result<T> {
    transform(Method::Levin, input, k, n, ctx)
}

/// Weniger transform `S_k^(n)` with weights `(beta+n+j)_(k-1) / (beta+n+k)_(k-1)`.
pub fn weniger_s<T: Real>(input: &TransformInput<T>, k: usize, n: usize, ctx: &PrecisionContext) -> Result<T> {
    transform(Method::WenigerS, input, k, n, ctx)
}

pub fn apply<T: Real>(
    method: Method,
    input: &TransformInput<T>,
    k: usize,
    n: usize,
    ctx: &PrecisionContext,
) -> Result<T> {
    transform(method, input, k, n, ctx)
}

/// Cells `(k, n)` of a transformation table; failed cells are kept as errors.
#[derive(Debug, Clone)]
pub struct TransformTable<T> {
    pub method: Method,
    pub values: BTreeMap<(usize, usize), Result<T>>,
}

impl<T: Real> TransformTable<T> {
    /// Every cell with `k <= k_max` whose window fits the input.
    pub fn build(method: Method, input: &TransformInput<T>, k_max: usize, ctx: &PrecisionContext) -> Self {
        let mut values = BTreeMap::new();
        for k in 0..=k_max {
            for n in 0..input.len().saturating_sub(k) {
                values.insert((k, n), transform(method, input, k, n, ctx));
            }
        }
        Self { method, values }
    }

    pub fn get(&self, k: usize, n: usize) -> Option<&Result<T>> {
        self.values.get(&(k, n))
    }

    /// `(k, value)` along `n = 0`, stopping at the first failed cell.
    pub fn first_row(&self) -> Vec<(usize, T)> {
        self.values
            .iter()
            .filter(|((_, n), _)| *n == 0)
            .map_while(|((k, _), v)| v.as_ref().ok().map(|v| (*k, v.clone())))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::BigFloat;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40).unwrap()
    }

    fn ln2_input<T: Real>(len: usize, ctx: &PrecisionContext) -> TransformInput<T> {
        let terms: Vec<T> = (0..=len)
            .map(|m| {
                let v = T::from_i64(1, ctx) / T::from_i64(m as i64 + 1, ctx);
                if m % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        TransformInput::from_terms(&terms, OmegaStrategy::FirstNeglected, T::one(), ctx).unwrap()
    }

    #[test]
    fn order_zero_is_identity() {
        let ctx = ctx();
        let input = TransformInput::new(vec![0.5, 0.7, 0.9], vec![1.0, -2.0, 3.0], 1.0).unwrap();
        for n in 0..3 {
            assert_eq!(levin(&input, 0, n, &ctx).unwrap(), input.partial_sums()[n]);
            assert_eq!(weniger_s(&input, 0, n, &ctx).unwrap(), input.partial_sums()[n]);
        }
    }

    #[test]
    fn ln2_error_below_threshold() {
        let ctx = ctx();
        let input: TransformInput<BigFloat> = ln2_input(12, &ctx);
        let ln2 = BigFloat::from_i64(2, &ctx).ln();
        for method in [Method::Levin, Method::WenigerS] {
            let v = apply(method, &input, 10, 0, &ctx).unwrap();
            let err = (v - ln2.clone()).abs().to_f64();
            assert!(err < 1e-8, "{method:?}: {err:e}");
        }
    }

    #[test]
    fn ln2_in_double_precision() {
        let ctx = ctx();
        let input: TransformInput<f64> = ln2_input(12, &ctx);
        let v = levin(&input, 10, 0, &ctx).unwrap();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-8);
    }

    #[test]
    fn levin_recovers_its_model() {
        // s_n = s + omega_n (c0 + c1/(b+n) + c2/(b+n)^2)
        let ctx = ctx();
        let beta = 2.5;
        let c = [1.25, -3.0, 0.5];
        let omega: Vec<f64> = (0..8).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 } / (n as f64 + 1.0)).collect();
        let s: Vec<f64> = (0..8)
            .map(|n| {
                let x = beta + n as f64;
                0.75 + omega[n] * (c[0] + c[1] / x + c[2] / (x * x))
            })
            .collect();
        let input = TransformInput::new(s, omega, beta).unwrap();
        assert!((levin(&input, 3, 1, &ctx).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn weniger_recovers_its_model() {
        // s_n = s + omega_n (c0 + c1/(b+n)_1 + c2/(b+n)_2)
        let ctx = ctx();
        let beta = 1.0;
        let c = [2.0, 0.5, -4.0];
        let omega: Vec<f64> = (0..8).map(|n| 1.0 / ((n + 1) * (n + 1)) as f64).collect();
        let s: Vec<f64> = (0..8)
            .map(|n| {
                let x = beta + n as f64;
                -1.5 + omega[n] * (c[0] + c[1] / x + c[2] / (x * (x + 1.0)))
            })
            .collect();
        let input = TransformInput::new(s, omega, beta).unwrap();
        assert!((weniger_s(&input, 3, 2, &ctx).unwrap() + 1.5).abs() < 1e-12);
    }

    #[test]
    fn estimate_strategies() {
        let ctx = ctx();
        let terms = [1.0, -0.5, 1.0 / 3.0];
        let first = remainder_estimates(&terms, OmegaStrategy::FirstNeglected, &1.0, &ctx).unwrap();
        assert_eq!(first, vec![-0.5, 1.0 / 3.0]);
        let constant = [2.0; 4];
        let scaled = remainder_estimates(&constant, OmegaStrategy::ScaledTerm, &1.0, &ctx).unwrap();
        assert_eq!(scaled, vec![2.0, 4.0, 6.0, 8.0]);
        assert_eq!(
            remainder_estimates(&[1.0, 0.0, 1.0], OmegaStrategy::FirstNeglected, &1.0, &ctx),
            Err(Error::Estimate(1))
        );
        assert_eq!(remainder_estimates(&[0.0], OmegaStrategy::ScaledTerm, &1.0, &ctx), Err(Error::Estimate(0)));
    }

    #[test]
    fn input_validation() {
        assert!(matches!(TransformInput::new(vec![1.0], vec![1.0], 0.0), Err(Error::Domain(_))));
        assert!(matches!(TransformInput::new(vec![1.0], vec![1.0, 2.0], 1.0), Err(Error::DimensionMismatch { .. })));
        assert_eq!(TransformInput::new(vec![1.0], vec![0.0], 1.0), Err(Error::Estimate(0)));
        let input = TransformInput::new(vec![1.0, 2.0], vec![1.0, 1.0], 1.0).unwrap();
        assert!(levin(&input, 2, 0, &ctx()).is_err());
    }

    #[test]
    fn cancelling_denominator_is_instability() {
        // identical omegas with k = 1 give 1/w - 1/w = 0
        let input = TransformInput::new(vec![1.0, 2.0], vec![1.0, 1.0], 1.0).unwrap();
        assert!(matches!(levin(&input, 1, 0, &ctx()), Err(Error::Instability(_))));
    }

    #[test]
    fn shifted_window_only_reads_its_inputs() {
        let ctx = ctx();
        let base: TransformInput<f64> = ln2_input(10, &ctx);
        let mut s = base.partial_sums().to_vec();
        let mut w = base.omega().to_vec();
        s[0] = 1.0e6;
        w[0] = 3.0;
        let altered = TransformInput::new(s, w, 1.0).unwrap();
        for k in 0..6 {
            assert_eq!(levin(&base, k, 1, &ctx).unwrap(), levin(&altered, k, 1, &ctx).unwrap());
        }
    }

    #[test]
    fn table_cells_match_direct_calls() {
        let ctx = ctx();
        let input: TransformInput<f64> = ln2_input(8, &ctx);
        let table = TransformTable::build(Method::WenigerS, &input, 4, &ctx);
        assert_eq!(table.values.len(), 8 + 7 + 6 + 5 + 4);
        assert_eq!(*table.get(3, 2).unwrap().as_ref().unwrap(), weniger_s(&input, 3, 2, &ctx).unwrap());
        assert_eq!(table.first_row().len(), 5);
        assert!(table.get(5, 0).is_none());
    }
}
