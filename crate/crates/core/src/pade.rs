//! Exact Padé approximants `[L/M]` of a power series.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{real, PrecisionContext, Real};

/// `num(z) / den(z)` with `den[0] = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadeApprox {
    pub l: usize,
    pub m: usize,
    pub num: Vec<BigRational>,
    pub den: Vec<BigRational>,
}

fn coeff(c: &[BigRational], i: isize) -> BigRational {
    if i < 0 {
        BigRational::zero()
    } else {
        c[i as usize].clone()
    }
}

/// Solve `A q = b` exactly; `None` when `A` is singular.
fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = BigRational::one() / &a[col][col];
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = &a[row][col] * &inv;
            for k in col..n {
                let delta = &factor * &a[col][k];
                a[row][k] -= delta;
            }
            let delta = &factor * &b[col];
            b[row] -= delta;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc -= &a[row][k] * &x[k];
        }
        x[row] = acc / &a[row][row];
    }
    Some(x)
}

/// Denominator `1, q_1 .. q_M` of `[L/M]`, if the Toeplitz system is regular.
fn denominator(c: &[BigRational], l: usize, m: usize) -> Option<Vec<BigRational>> {
    let l = l as isize;
    let a: Vec<Vec<BigRational>> = (1..=m as isize)
        .map(|i| (1..=m as isize).map(|j| coeff(c, l + i - j)).collect())
        .collect();
    let b: Vec<BigRational> = (1..=m as isize).map(|i| -coeff(c, l + i)).collect();
    let q = solve(a, b)?;
    let mut den = Vec::with_capacity(m + 1);
    den.push(BigRational::one());
    den.extend(q);
    Some(den)
}

/// `[L/M]` from `gamma_0 .. gamma_{L+M}`.
///
/// A singular system yields [`Error::Degeneracy`] carrying the largest
/// `M' < M` for which `[L/M']` exists.
pub fn pade_construct(gamma: &[BigRational], l: usize, m: usize) -> Result<PadeApprox> {
    if gamma.len() < l + m + 1 {
        return Err(Error::InvalidInput(format!(
            "[{l}/{m}] needs {} coefficients, got {}",
            l + m + 1,
            gamma.len()
        )));
    }
    let c = &gamma[..=l + m];
    match denominator(c, l, m) {
        Some(den) => Ok(assemble(c, l, m, den)),
        None => {
            let max_solvable_m = (0..m).rev().find(|&mm| denominator(c, l, mm).is_some()).unwrap_or(0);
            Err(Error::Degeneracy { l, m, max_solvable_m })
        }
    }
}

/// As [`pade_construct`], falling back to the largest solvable denominator
/// degree. Returns the approximant and whether a reduction happened.
pub fn pade_construct_reducing(gamma: &[BigRational], l: usize, m: usize) -> Result<(PadeApprox, bool)> {
    match pade_construct(gamma, l, m) {
        Ok(p) => Ok((p, false)),
        Err(Error::Degeneracy { max_solvable_m, .. }) => Ok((pade_construct(gamma, l, max_solvable_m)?, true)),
        Err(e) => Err(e),
    }
}

fn assemble(c: &[BigRational], l: usize, m: usize, den: Vec<BigRational>) -> PadeApprox {
    let num = (0..=l)
        .map(|i| (0..=i.min(m)).map(|j| &den[j] * &c[i - j]).sum())
        .collect();
    PadeApprox { l, m, num, den }
}

fn horner_exact(p: &[BigRational], z: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * z + c)
}

fn horner<T: Real>(p: &[BigRational], z: &T, ctx: &PrecisionContext) -> T {
    p.iter().rev().fold(T::zero(), |acc, c| acc * z.clone() + real::<T>(c, ctx))
}

impl PadeApprox {
    /// Power-series coefficients of `num / den` through `z^order`.
    pub fn expand(&self, order: usize) -> Vec<BigRational> {
        let mut e: Vec<BigRational> = Vec::with_capacity(order + 1);
        for i in 0..=order {
            let mut v = self.num.get(i).cloned().unwrap_or_else(BigRational::zero);
            for j in 1..=i.min(self.m) {
                v -= &self.den[j] * &e[i - j];
            }
            e.push(v);
        }
        e
    }

    pub fn denominator_exact(&self, z: &BigRational) -> BigRational {
        horner_exact(&self.den, z)
    }

    pub fn numerator_exact(&self, z: &BigRational) -> BigRational {
        horner_exact(&self.num, z)
    }

    pub fn eval_exact(&self, z: &BigRational) -> Result<BigRational> {
        let den = self.denominator_exact(z);
        if den.is_zero() {
            return Err(Error::Pole(format!("[{}/{}] denominator vanishes at {z}", self.l, self.m)));
        }
        Ok(self.numerator_exact(z) / den)
    }

    /// First pair of consecutive grid points bracketing a zero of the
    /// denominator in the open interval spanned by the grid.
    ///
    /// Zeros exactly at the two ends of the grid are not reported.
    pub fn denominator_sign_change(&self, grid: &[BigRational]) -> Option<(BigRational, BigRational)> {
        let values: Vec<BigRational> = grid.iter().map(|u| self.denominator_exact(u)).collect();
        let last = grid.len().saturating_sub(1);
        (1..grid.len()).find_map(|i| {
            let (a, b) = (&values[i - 1], &values[i]);
            let interior_zero = (b.is_zero() && i < last) || (a.is_zero() && i - 1 > 0);
            let flips = !a.is_zero() && !b.is_zero() && a.is_negative() != b.is_negative();
            (interior_zero || flips).then(|| (grid[i - 1].clone(), grid[i].clone()))
        })
    }
}

/// Horner evaluation of `num(z) / den(z)` at working precision.
pub fn pade_eval<T: Real>(p: &PadeApprox, z: &T, ctx: &PrecisionContext) -> Result<T> {
    let den = horner(&p.den, z, ctx);
    if !den.is_finite() || den.abs() < T::tolerance(4, ctx) {
        return Err(Error::Pole(format!("[{}/{}] denominator vanishes near {z}", p.l, p.m)));
    }
    Ok(horner(&p.num, z, ctx) / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn constant_series() {
        let p = pade_construct(&[q(7, 3)], 0, 0).unwrap();
        assert_eq!(p.num, vec![q(7, 3)]);
        assert_eq!(p.den, vec![q(1, 1)]);
        let ctx = PrecisionContext::default();
        assert_eq!(pade_eval(&p, &12.5f64, &ctx).unwrap(), 7.0 / 3.0);
    }

    #[test]
    fn geometric_series() {
        let p = pade_construct(&[q(1, 1), q(1, 1)], 0, 1).unwrap();
        assert_eq!(p.num, vec![q(1, 1)]);
        assert_eq!(p.den, vec![q(1, 1), q(-1, 1)]);
        assert_eq!(p.eval_exact(&q(1, 2)).unwrap(), q(2, 1));
        let ctx = PrecisionContext::default();
        assert!((pade_eval(&p, &0.5f64, &ctx).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_one_one() {
        let p = pade_construct(&[q(1, 1), q(1, 1), q(1, 2)], 1, 1).unwrap();
        assert_eq!(p.num, vec![q(1, 1), q(1, 2)]);
        assert_eq!(p.den, vec![q(1, 1), q(-1, 2)]);
    }

    #[test]
    fn expansion_matches_input() {
        let c: Vec<BigRational> = (0..9).map(|n| q(if n % 3 == 0 { -1 } else { 2 } * (n + 1), n + 2)).collect();
        for (l, m) in [(4, 4), (5, 3), (2, 6), (8, 0)] {
            let p = pade_construct(&c, l, m).unwrap();
            assert_eq!(p.expand(l + m), c[..=l + m]);
        }
    }

    #[test]
    fn degenerate_system_reports_reduction() {
        // even function: [1/1] of 1 + z^2 needs c_1 q_1 = -c_2 with c_1 = 0
        let c = vec![q(1, 1), q(0, 1), q(1, 1)];
        assert_eq!(pade_construct(&c, 1, 1), Err(Error::Degeneracy { l: 1, m: 1, max_solvable_m: 0 }));
        let (p, reduced) = pade_construct_reducing(&c, 1, 1).unwrap();
        assert!(reduced);
        assert_eq!(p.m, 0);
    }

    #[test]
    fn too_few_coefficients() {
        assert!(matches!(pade_construct(&[q(1, 1)], 1, 1), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn evaluation_at_pole() {
        let p = pade_construct(&[q(1, 1), q(1, 1)], 0, 1).unwrap();
        assert!(matches!(p.eval_exact(&q(1, 1)), Err(Error::Pole(_))));
        assert!(matches!(pade_eval(&p, &1.0f64, &PrecisionContext::default()), Err(Error::Pole(_))));
    }

    #[test]
    fn sign_change_detection() {
        let p = pade_construct(&[q(1, 1), q(2, 1)], 0, 1).unwrap();
        // den = 1 - 2u vanishes on the grid point 1/2
        let grid: Vec<BigRational> = (0..=4).map(|j| q(j, 4)).collect();
        assert_eq!(p.denominator_sign_change(&grid), Some((q(1, 4), q(1, 2))));
        let safe = pade_construct(&[q(1, 1), q(-1, 1)], 0, 1).unwrap();
        assert_eq!(safe.denominator_sign_change(&grid), None);
        // 1 - u vanishes only at the right end
        let endpoint = pade_construct(&[q(1, 1), q(1, 1)], 0, 1).unwrap();
        assert_eq!(endpoint.denominator_sign_change(&grid), None);
    }
}
