//! Fraction-free elimination over Z and Z[i].
//!
//! Rows of a rational (or Gaussian rational) matrix are scaled by the lcm of
//! their denominators, which leaves the rank unchanged, and the resulting
//! integral matrix is reduced with Bareiss' update
//! `m[i][j] <- (m[i][j]·p - m[i][k]·m[k][j]) / p_prev`, where the division is
//! always exact.

use std::ops::{Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalars::Scalar;

pub(crate) trait IntegralDomain: Clone + Sized
where
    for<'a> &'a Self: Mul<&'a Self, Output = Self> + Sub<&'a Self, Output = Self>,
{
    fn unit() -> Self;
    fn vanishes(&self) -> bool;
    /// `self / d`, where `d` is known to divide `self`.
    fn div_exact(&self, d: &Self) -> Self;
    /// Pivot preference; smaller is better.
    fn size(&self) -> u64;
}

impl IntegralDomain for BigInt {
    fn unit() -> Self {
        One::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn div_exact(&self, d: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % d)));
        self / d
    }
    fn size(&self) -> u64 {
        self.bits()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl Mul<&GaussInt> for &GaussInt {
    type Output = GaussInt;
    fn mul(self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Sub<&GaussInt> for &GaussInt {
    type Output = GaussInt;
    fn sub(self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl IntegralDomain for GaussInt {
    fn unit() -> Self {
        GaussInt {
            re: BigInt::one(),
            im: BigInt::zero(),
        }
    }
    fn vanishes(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn div_exact(&self, d: &Self) -> Self {
        let n = &d.re * &d.re + &d.im * &d.im;
        let re = &self.re * &d.re + &self.im * &d.im;
        let im = &self.im * &d.re - &self.re * &d.im;
        debug_assert!((&re % &n).is_zero() && (&im % &n).is_zero());
        GaussInt { re: re / &n, im: im / n }
    }
    fn size(&self) -> u64 {
        self.re.bits().max(self.im.bits())
    }
}

/// Rank of a row-major integral matrix by Bareiss elimination with full
/// pivoting.
pub(crate) fn rank_integral<T>(mut m: Vec<Vec<T>>, cols: usize) -> usize
where
    T: IntegralDomain,
    for<'a> &'a T: Mul<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    let rows = m.len();
    let mut col_order: Vec<usize> = (0..cols).collect();
    let mut prev = T::unit();
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, u64)> = None;
        for (i, row) in m.iter().enumerate().skip(k) {
            for (jj, &j) in col_order.iter().enumerate().skip(k) {
                let e = &row[j];
                if !e.vanishes() {
                    let s = e.size();
                    if best.is_none_or(|(_, _, b)| s < b) {
                        best = Some((i, jj, s));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        m.swap(k, pi);
        col_order.swap(k, pj);
        let pc = col_order[k];
        let pivot = m[k][pc].clone();
        let (top, bottom) = m.split_at_mut(k + 1);
        let prow = &top[k];
        for row in bottom.iter_mut() {
            let factor = row[pc].clone();
            for &j in &col_order[k + 1..] {
                let v = &(&row[j] * &pivot) - &(&factor * &prow[j]);
                row[j] = v.div_exact(&prev);
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

fn lcm_denoms<'a>(denoms: impl Iterator<Item = &'a BigInt>) -> BigInt {
    denoms.fold(BigInt::one(), |acc, d| acc.lcm(d))
}

fn scale(q: &BigRational, l: &BigInt) -> BigInt {
    q.numer() * (l / q.denom())
}

/// Clears denominators row by row. Returns `None` if the rows are not all
/// rational.
pub(crate) fn integral_rows(rows: &[Vec<Scalar>]) -> Option<Vec<Vec<BigInt>>> {
    rows.iter()
        .map(|row| {
            let qs: Option<Vec<&BigRational>> = row
                .iter()
                .map(|s| match s {
                    Scalar::Rational(q) => Some(q),
                    _ => None,
                })
                .collect();
            let qs = qs?;
            let l = lcm_denoms(qs.iter().map(|q| q.denom()));
            Some(qs.iter().map(|q| scale(q, &l)).collect())
        })
        .collect()
}

pub(crate) fn gaussian_integral_rows(rows: &[Vec<Scalar>]) -> Option<Vec<Vec<GaussInt>>> {
    rows.iter()
        .map(|row| {
            let gs: Option<Vec<_>> = row
                .iter()
                .map(|s| match s {
                    Scalar::Gaussian(g) => Some(g),
                    _ => None,
                })
                .collect();
            let gs = gs?;
            let l = lcm_denoms(gs.iter().flat_map(|g| [g.re.denom(), g.im.denom()]));
            Some(
                gs.iter()
                    .map(|g| GaussInt {
                        re: scale(&g.re, &l),
                        im: scale(&g.im, &l),
                    })
                    .collect(),
            )
        })
        .collect()
}
