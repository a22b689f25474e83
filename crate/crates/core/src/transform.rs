//! Exact coefficient transforms between inverse-power, factorial and power
//! series, plus the general lower-triangular inversion framework they are
//! special cases of.
//!
//! All transforms work on the leading `order + 1` coefficients. Because the
//! matrices are lower triangular, those outputs depend only on the leading
//! `order + 1` inputs; the infinite column sums of [`TransformMatrix::coefficient_transform`]
//! treat every coefficient beyond `order` as zero.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Zero};

use crate::error::{Error, Result};
use crate::series::{FormalSeries, SeriesKind};
use crate::stirling::{StirlingCache, StirlingKind};

/// `out_m = (-1)^m sum_{mu<=m} (-1)^mu S(m, mu) x_mu` for `m = 0..=order`.
fn signed_stirling_sum(kind: StirlingKind, input: &[BigRational], order: usize) -> Result<Vec<BigRational>> {
    if input.len() < order + 1 {
        return Err(Error::InvalidInput(format!(
            "order {order} needs {} coefficients, got {}",
            order + 1,
            input.len()
        )));
    }
    let table = StirlingCache::new(kind, order);
    let mut out = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut inner = BigRational::zero();
        for (mu, s) in table.row(m)?.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let term = BigRational::from_integer(s.clone()) * &input[mu];
            if mu % 2 == 0 {
                inner += term;
            } else {
                inner -= term;
            }
        }
        out.push(if m % 2 == 0 { inner } else { -inner });
    }
    Ok(out)
}

/// Inverse power series `sum c_n / z^(n+1)` to factorial series `sum d_m / (z)_(m+1)`.
///
/// `d_m = (-1)^m sum_{mu=0}^{m} (-1)^mu S1(m, mu) c_mu`.
pub fn inverse_power_to_factorial(c: &FormalSeries, order: usize) -> Result<FormalSeries> {
    c.require_kind(SeriesKind::InversePower)?;
    let d = signed_stirling_sum(StirlingKind::First, c.coeffs(), order)?;
    Ok(FormalSeries::new(SeriesKind::Factorial, d))
}

/// Factorial series back to an inverse power series.
///
/// `c_m = (-1)^m sum_{mu=0}^{m} (-1)^mu S2(m, mu) d_mu`.
pub fn factorial_to_inverse_power(d: &FormalSeries, order: usize) -> Result<FormalSeries> {
    d.require_kind(SeriesKind::Factorial)?;
    let c = signed_stirling_sum(StirlingKind::Second, d.coeffs(), order)?;
    Ok(FormalSeries::new(SeriesKind::InversePower, c))
}

/// Coefficients `lambda_m` for re-expanding a power series `sum gamma_n z^n`
/// as `sum_m (lambda_m / m!) prod_{k=1}^{m} z / (z + 1/k)`.
///
/// The same Stirling weights as [`inverse_power_to_factorial`], applied to the
/// power-series coefficients read as an inverse power series in `1/z`.
pub fn power_to_factorial_coeffs(gamma: &FormalSeries, order: usize) -> Result<Vec<BigRational>> {
    gamma.require_kind(SeriesKind::Power)?;
    signed_stirling_sum(StirlingKind::First, gamma.coeffs(), order)
}

/// Lower-triangular matrix `A` with optional companion inverse `B`.
///
/// Rows are stored ragged: row `r` holds `A_{r0} .. A_{rr}`.
#[derive(Debug)]
pub struct TransformMatrix<T> {
    rows: Vec<Vec<T>>,
    companion: Option<Vec<Vec<T>>>,
    verified: OnceLock<Result<()>>,
}

impl<T: Clone> Clone for TransformMatrix<T> {
    fn clone(&self) -> Self {
        Self { rows: self.rows.clone(), companion: self.companion.clone(), verified: OnceLock::new() }
    }
}

fn validate_triangle<T>(rows: &[Vec<T>]) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidInput("transform matrix needs at least one row".into()));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != r + 1 {
            return Err(Error::InvalidInput(format!(
                "row {r} of a lower-triangular matrix must have {} entries, got {}",
                r + 1,
                row.len()
            )));
        }
    }
    Ok(())
}

impl<T> TransformMatrix<T>
where
    T: Num + Clone,
{
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        validate_triangle(&rows)?;
        Ok(Self { rows, companion: None, verified: OnceLock::new() })
    }

    /// Attach a companion `B`. Orthogonality `sum_r B_{nr} A_{rk} = delta_{nk}` is
    /// checked lazily on first use of [`Self::triangular_inverse_apply`].
    pub fn with_companion(mut self, companion: Vec<Vec<T>>) -> Result<Self> {
        validate_triangle(&companion)?;
        if companion.len() != self.rows.len() {
            return Err(Error::DimensionMismatch { expected: self.rows.len(), found: companion.len() });
        }
        self.companion = Some(companion);
        self.verified = OnceLock::new();
        Ok(self)
    }

    /// Compute `B = A^{-1}` by exact forward substitution; needs a nonzero diagonal.
    pub fn with_computed_companion(self) -> Result<Self> {
        let n = self.rows.len();
        let mut inverse: Vec<Vec<T>> = Vec::with_capacity(n);
        for r in 0..n {
            let diag = self.rows[r][r].clone();
            if diag.is_zero() {
                return Err(Error::InvalidInput(format!("zero diagonal entry at row {r}")));
            }
            let mut row = vec![T::zero(); r + 1];
            row[r] = T::one() / diag.clone();
            // column k of A B = I below the diagonal gives sum_{j=k}^{r} A_{rj} B_{jk} = 0
            for k in (0..r).rev() {
                let mut acc = T::zero();
                for (j, a_rj) in self.rows[r].iter().enumerate().take(r).skip(k) {
                    acc = acc + a_rj.clone() * inverse[j][k].clone();
                }
                row[k] = T::zero() - acc / diag.clone();
            }
            inverse.push(row);
        }
        let companion = inverse;
        self.with_companion(companion)
    }

    pub fn identity(n_max: usize) -> Self {
        let rows: Vec<Vec<T>> = (0..=n_max)
            .map(|r| (0..=r).map(|k| if k == r { T::one() } else { T::zero() }).collect())
            .collect();
        Self { rows: rows.clone(), companion: Some(rows), verified: OnceLock::new() }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn companion(&self) -> Option<&[Vec<T>]> {
        self.companion.as_deref()
    }

    /// `A_{rk}`, zero above the diagonal.
    pub fn entry(&self, r: usize, k: usize) -> T {
        if k > r {
            T::zero()
        } else {
            self.rows[r][k].clone()
        }
    }

    /// `y_r = sum_{k=0}^{r} A_{rk} x_k`.
    ///
    /// Also the coefficient map `omega_n = sum_{k<=n} A_{nk} upsilon_k` for
    /// re-expanding `sum upsilon_n u_n` when `u_r = sum_{n>=r} A_{nr} w_n`.
    pub fn triangular_forward(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() > self.rows.len() {
            return Err(Error::DimensionMismatch { expected: self.rows.len(), found: x.len() });
        }
        Ok((0..x.len())
            .map(|r| {
                self.rows[r]
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (a, xk)| acc + a.clone() * xk.clone())
            })
            .collect())
    }

    /// Inverse relation `x_n = sum_{k=0}^{n} B_{nk} y_k`.
    pub fn triangular_inverse_apply(&self, y: &[T]) -> Result<Vec<T>> {
        let companion = self.companion.as_ref().ok_or(Error::MissingCompanion)?;
        if y.len() > companion.len() {
            return Err(Error::DimensionMismatch { expected: companion.len(), found: y.len() });
        }
        self.verified.get_or_init(|| self.check_orthogonality()).clone()?;
        Ok((0..y.len())
            .map(|n| {
                companion[n]
                    .iter()
                    .zip(y)
                    .fold(T::zero(), |acc, (b, yk)| acc + b.clone() * yk.clone())
            })
            .collect())
    }

    fn check_orthogonality(&self) -> Result<()> {
        let companion = self.companion.as_ref().ok_or(Error::MissingCompanion)?;
        for n in 0..self.rows.len() {
            for k in 0..=n {
                let mut sum = T::zero();
                for r in k..=n {
                    sum = sum + companion[n][r].clone() * self.rows[r][k].clone();
                }
                let expected = if n == k { T::one() } else { T::zero() };
                if sum != expected {
                    return Err(Error::Integrity(format!(
                        "companion is not an inverse: (B A)_{{{n}{k}}} != delta"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `xi_n = sum_{k=n}^{order} A_{kn} eta_k` for `n = 0..=order`.
    ///
    /// Rewrites `sum eta_n y_n` with `y_n = sum_k A_{nk} x_k` as `sum xi_n x_n`.
    /// Coefficients `eta_k` with `k > order` are taken as zero.
    pub fn coefficient_transform(&self, eta: &[T], order: usize) -> Result<Vec<T>> {
        if eta.len() < order + 1 {
            return Err(Error::InvalidInput(format!(
                "order {order} needs {} coefficients, got {}",
                order + 1,
                eta.len()
            )));
        }
        if order > self.n_max() {
            return Err(Error::DimensionMismatch { expected: self.rows.len(), found: order + 1 });
        }
        Ok((0..=order)
            .map(|n| {
                (n..=order).fold(T::zero(), |acc, k| acc + self.rows[k][n].clone() * eta[k].clone())
            })
            .collect())
    }
}

impl TransformMatrix<BigRational> {
    /// `A_{nk} = (-1)^{n-k} S1(n, k)` with companion `B_{nk} = (-1)^{n-k} S2(n, k)`.
    ///
    /// Applied forward this maps inverse-power coefficients to factorial-series
    /// coefficients; the companion maps them back.
    pub fn stirling_pair(n_max: usize) -> Self {
        let signed = |kind| -> Vec<Vec<BigRational>> {
            let cache = StirlingCache::new(kind, n_max);
            (0..=n_max)
                .map(|n| {
                    cache
                        .row(n)
                        .expect("row within n_max")
                        .iter()
                        .enumerate()
                        .map(|(k, s)| {
                            let v = BigRational::from_integer(s.clone());
                            if (n - k) % 2 == 0 {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect()
        };
        Self {
            rows: signed(StirlingKind::First),
            companion: Some(signed(StirlingKind::Second)),
            verified: OnceLock::new(),
        }
    }

    /// Integer matrix lifted to rationals.
    pub fn from_integer_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        Self::from_rows(
            rows.into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect(),
        )
    }
}

/// Unit lower-triangular check, handy for randomly generated matrices.
pub fn has_unit_diagonal<T: Num + Clone>(m: &TransformMatrix<T>) -> bool {
    m.rows().iter().enumerate().all(|(r, row)| row[r].is_one())
}
