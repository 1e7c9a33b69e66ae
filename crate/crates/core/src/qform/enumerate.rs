//! Value-bounded enumeration of integer points of a positive definite form.
//!
//! The form is written as a sum of squares
//!
//! ```text
//! Q(x) = Σ_i d_i · (x_i + Σ_{j<i} l_ij · x_j)²
//! ```
//!
//! by eliminating the last variable first, so that `x_1` is the outermost
//! enumeration variable and points are visited in ascending lexicographic
//! order. The rational `d_i`, `l_ij` are brought to a common denominator `D`,
//! after which every bound is an exact integer computation:
//! `D³·Q(x) = Σ_i E_i · (D·x_i + Σ_{j<i} L_ij·x_j)²`.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{FormError, QuadForm};

#[derive(Debug, Clone)]
pub struct PointEnumerator {
    n: usize,
    denom: i128,
    denom_cubed: i128,
    /// `E_i = D·d_i`.
    diag: Vec<i128>,
    /// `L_ij = D·l_ij` for `j < i`.
    lower: Vec<Vec<i128>>,
}

fn to_i128(x: &BigInt) -> Result<i128, FormError> {
    x.to_i128().ok_or(FormError::Overflow)
}

pub(crate) fn isqrt(x: i128) -> i128 {
    if x <= 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as i128;
    while r > 0 && r.checked_mul(r).map_or(true, |s| s > x) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= x) {
        r += 1;
    }
    r
}

impl PointEnumerator {
    pub fn new(form: &QuadForm) -> Result<Self, FormError> {
        if !form.is_positive_definite() {
            return Err(FormError::NotPositiveDefinite);
        }
        let n = form.nvars();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut g: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = BigRational::from_integer(BigInt::from(form.coeff(i, j)));
                        if i == j {
                            c
                        } else {
                            c * &half
                        }
                    })
                    .collect()
            })
            .collect();

        let mut d = vec![BigRational::zero(); n];
        let mut l = vec![Vec::new(); n];
        for k in (0..n).rev() {
            let pivot = g[k][k].clone();
            if !pivot.is_positive() {
                return Err(FormError::NotPositiveDefinite);
            }
            l[k] = (0..k).map(|j| &g[k][j] / &pivot).collect::<Vec<_>>();
            for a in 0..k {
                for b in 0..k {
                    let delta = &g[a][k] * &g[k][b] / &pivot;
                    g[a][b] -= delta;
                }
            }
            d[k] = pivot;
        }

        let mut denom = BigInt::one();
        for r in d.iter().chain(l.iter().flatten()) {
            denom = denom.lcm(r.denom());
        }
        let scale = |r: &BigRational| -> Result<i128, FormError> {
            let v = r * BigRational::from_integer(denom.clone());
            debug_assert!(v.is_integer());
            to_i128(&v.to_integer())
        };
        let diag = d.iter().map(scale).collect::<Result<Vec<_>, _>>()?;
        let lower = l
            .iter()
            .map(|row| row.iter().map(scale).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let denom_i = to_i128(&denom)?;
        let denom_cubed = denom_i
            .checked_mul(denom_i)
            .and_then(|v| v.checked_mul(denom_i))
            .ok_or(FormError::Overflow)?;
        Ok(PointEnumerator {
            n,
            denom: denom_i,
            denom_cubed,
            diag,
            lower,
        })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// Visits every integer point `x` with `Q(x) ≤ max_value` in ascending
    /// lexicographic order, passing the exact value `Q(x)`.
    pub fn for_each<F>(&self, max_value: u64, mut visit: F) -> Result<ControlFlow<()>, FormError>
    where
        F: FnMut(&[i64], u64) -> ControlFlow<()>,
    {
        let total = self
            .denom_cubed
            .checked_mul(max_value as i128)
            .ok_or(FormError::Overflow)?;
        let mut x = vec![0i64; self.n];
        Ok(self.descend(0, total, total, &mut x, &mut visit))
    }

    /// Like [`for_each`](Self::for_each), restricted to points whose first
    /// coordinate equals `x1`.
    pub fn for_each_with_first<F>(
        &self,
        max_value: u64,
        x1: i64,
        mut visit: F,
    ) -> Result<ControlFlow<()>, FormError>
    where
        F: FnMut(&[i64], u64) -> ControlFlow<()>,
    {
        let total = self
            .denom_cubed
            .checked_mul(max_value as i128)
            .ok_or(FormError::Overflow)?;
        let t = self.denom * x1 as i128;
        let rest = total - self.diag[0] * t * t;
        if rest < 0 {
            return Ok(ControlFlow::Continue(()));
        }
        let mut x = vec![0i64; self.n];
        x[0] = x1;
        if self.n == 1 {
            return Ok(visit(&x, ((total - rest) / self.denom_cubed) as u64));
        }
        Ok(self.descend(1, total, rest, &mut x, &mut visit))
    }

    /// Integer range of the first coordinate for points of value `≤ max_value`.
    pub fn first_range(&self, max_value: u64) -> Result<(i64, i64), FormError> {
        let total = self
            .denom_cubed
            .checked_mul(max_value as i128)
            .ok_or(FormError::Overflow)?;
        let q = isqrt(total / self.diag[0]);
        Ok((
            Integer::div_ceil(&-q, &self.denom) as i64,
            Integer::div_floor(&q, &self.denom) as i64,
        ))
    }

    fn descend<F>(
        &self,
        level: usize,
        total: i128,
        budget: i128,
        x: &mut [i64],
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[i64], u64) -> ControlFlow<()>,
    {
        let e = self.diag[level];
        let s: i128 = self.lower[level]
            .iter()
            .zip(x.iter())
            .map(|(l, &xj)| l * xj as i128)
            .sum();
        // E·(D·v + s)² ≤ budget  ⇔  |D·v + s| ≤ q
        let q = isqrt(budget / e);
        let lo = Integer::div_ceil(&(-q - s), &self.denom);
        let hi = Integer::div_floor(&(q - s), &self.denom);
        let last = level + 1 == self.n;
        for v in lo..=hi {
            let t = self.denom * v + s;
            let rest = budget - e * t * t;
            if rest < 0 {
                continue;
            }
            x[level] = v as i64;
            let flow = if last {
                let value = (total - rest) / self.denom_cubed;
                visit(x, value as u64)
            } else {
                self.descend(level + 1, total, rest, x, visit)
            };
            if flow.is_break() {
                return flow;
            }
        }
        ControlFlow::Continue(())
    }
}
