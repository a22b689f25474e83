//! Stirling numbers of the first and second kind.
//!
//! First-kind numbers are signed: `S1(n, k)` is the coefficient of `z^k` in
//! the falling factorial `z (z - 1) ... (z - n + 1)`. Second-kind numbers
//! satisfy `z^n = sum_k S2(n, k) z (z - 1) ... (z - k + 1)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StirlingKind {
    First,
    Second,
}

/// Immutable triangular table `rows[n][k]`, `0 <= k <= n <= n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingCache {
    kind: StirlingKind,
    rows: Vec<Vec<BigInt>>,
}

impl StirlingCache {
    /// Build rows `0..=n_max` with the triangle recurrence.
    pub fn new(kind: StirlingKind, n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
        rows.push(vec![BigInt::one()]);
        for n in 0..n_max {
            let next = next_row(kind, n, &rows[n]);
            rows.push(next);
        }
        Self { kind, rows }
    }

    pub fn kind(&self) -> StirlingKind {
        self.kind
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> Result<&[BigInt]> {
        self.rows.get(n).map(Vec::as_slice).ok_or_else(|| {
            Error::Domain(format!("row {n} exceeds cached n_max = {}", self.n_max()))
        })
    }

    pub fn get(&self, n: usize, k: usize) -> Result<&BigInt> {
        check_indices(n, k)?;
        Ok(&self.row(n)?[k])
    }
}

/// Row `n + 1` from row `n`.
fn next_row(kind: StirlingKind, n: usize, row: &[BigInt]) -> Vec<BigInt> {
    let mut next = vec![BigInt::zero(); n + 2];
    for (k, slot) in next.iter_mut().enumerate() {
        let left = if k >= 1 { row[k - 1].clone() } else { BigInt::zero() };
        let same = row.get(k).cloned().unwrap_or_default();
        *slot = match kind {
            StirlingKind::First => left - same * BigInt::from(n),
            StirlingKind::Second => left + same * BigInt::from(k),
        };
    }
    next
}

fn check_indices(n: usize, k: usize) -> Result<()> {
    if k > n {
        return Err(Error::Domain(format!("Stirling index k = {k} exceeds n = {n}")));
    }
    Ok(())
}

fn single_row(kind: StirlingKind, n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for m in 0..n {
        row = next_row(kind, m, &row);
    }
    row
}

/// Signed Stirling number of the first kind `S1(n, k)`.
pub fn stirling1(n: usize, k: usize) -> Result<BigInt> {
    check_indices(n, k)?;
    Ok(single_row(StirlingKind::First, n).swap_remove(k))
}

/// Stirling number of the second kind `S2(n, k)`.
pub fn stirling2(n: usize, k: usize) -> Result<BigInt> {
    check_indices(n, k)?;
    Ok(single_row(StirlingKind::Second, n).swap_remove(k))
}

/// Both kinds cached to a common `n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingPair {
    pub first: StirlingCache,
    pub second: StirlingCache,
}

impl StirlingPair {
    pub fn new(n_max: usize) -> Self {
        Self {
            first: StirlingCache::new(StirlingKind::First, n_max),
            second: StirlingCache::new(StirlingKind::Second, n_max),
        }
    }

    pub fn n_max(&self) -> usize {
        self.first.n_max()
    }

    /// `sum_{v=k}^{n} S1(n, v) S2(v, k) - delta_{nk}`.
    pub fn orthogonality_defect(&self, n: usize, k: usize) -> Result<BigInt> {
        check_indices(n, k)?;
        let mut sum = BigInt::zero();
        for v in k..=n {
            sum += self.first.get(n, v)? * self.second.get(v, k)?;
        }
        Ok(sum - delta(n, k))
    }

    /// `sum_{v=k}^{n} S2(n, v) S1(v, k) - delta_{nk}`.
    pub fn reverse_orthogonality_defect(&self, n: usize, k: usize) -> Result<BigInt> {
        check_indices(n, k)?;
        let mut sum = BigInt::zero();
        for v in k..=n {
            sum += self.second.get(n, v)? * self.first.get(v, k)?;
        }
        Ok(sum - delta(n, k))
    }
}

fn delta(n: usize, k: usize) -> BigInt {
    if n == k {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

/// `sum_{v=k}^{n} S1(n, v) S2(v, k) - delta_{nk}`; zero for every valid pair.
pub fn orthogonality_defect(n: usize, k: usize) -> Result<BigInt> {
    check_indices(n, k)?;
    StirlingPair::new(n).orthogonality_defect(n, k)
}

/// Coefficients of `z^v`, `v = 0..=n`, in the rising factorial `(z)_n`.
///
/// These equal `(-1)^(n-v) S1(n, v) = |S1(n, v)|` and are never negative.
pub fn pochhammer_coeffs(n: usize) -> Vec<BigInt> {
    single_row(StirlingKind::First, n).into_iter().map(|s| s.abs()).collect()
}
