use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{FormError, ParseError, Substitution};

const VARS: [char; 4] = ['x', 'y', 'z', 'w'];

/// An integer-valued quadratic form `Σ_{i≤j} c_ij·x_i·x_j`.
///
/// Cross coefficients may be odd, so the bilinear form `B(u, v)` with
/// `B(x, x) = Q(x)` is only half-integral; [`QuadForm::doubled_gram`] returns
/// the always-integral matrix `2B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadForm {
    nvars: usize,
    // row-major n×n, only entries with i ≤ j are used
    coeffs: Vec<i64>,
}

impl QuadForm {
    pub fn zero(nvars: usize) -> Self {
        QuadForm {
            nvars,
            coeffs: vec![0; nvars * nvars],
        }
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        let mut q = QuadForm::zero(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            q.set(i, i, d);
        }
        q
    }

    /// Builds a form from `(i, j, c)` triples; repeated monomials accumulate.
    pub fn from_terms(nvars: usize, terms: &[(usize, usize, i64)]) -> Self {
        let mut q = QuadForm::zero(nvars);
        for &(i, j, c) in terms {
            q.add_to(i, j, c);
        }
        q
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Coefficient of `x_i·x_j` (symmetric in `i`, `j`).
    pub fn coeff(&self, i: usize, j: usize) -> i64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[i * self.nvars + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: i64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[i * self.nvars + j] = c;
    }

    fn add_to(&mut self, i: usize, j: usize, c: i64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[i * self.nvars + j] += c;
    }

    /// `2B` where `B` is the bilinear form of `Q`: diagonal `2c_ii`, off-diagonal `c_ij`.
    pub fn doubled_gram(&self) -> Vec<Vec<i64>> {
        let n = self.nvars;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { 2 * self.coeff(i, i) } else { self.coeff(i, j) })
                    .collect()
            })
            .collect()
    }

    pub fn eval(&self, x: &[i64]) -> Result<i128, FormError> {
        if x.len() != self.nvars {
            return Err(FormError::ArityMismatch {
                expected: self.nvars,
                got: x.len(),
            });
        }
        let mut acc: i128 = 0;
        for i in 0..self.nvars {
            for j in i..self.nvars {
                let c = self.coeff(i, j);
                if c == 0 {
                    continue;
                }
                let term = (c as i128)
                    .checked_mul(x[i] as i128)
                    .and_then(|t| t.checked_mul(x[j] as i128))
                    .ok_or(FormError::Overflow)?;
                acc = acc.checked_add(term).ok_or(FormError::Overflow)?;
            }
        }
        Ok(acc)
    }

    /// `2B(u, v) = Q(u + v) − Q(u) − Q(v)`, computed from the coefficients.
    pub fn polar(&self, u: &[i64], v: &[i64]) -> i128 {
        let n = self.nvars;
        let mut acc = 0i128;
        for i in 0..n {
            for j in 0..n {
                let g = if i == j { 2 * self.coeff(i, i) } else { self.coeff(i, j) };
                acc += g as i128 * u[i] as i128 * v[j] as i128;
            }
        }
        acc
    }

    pub fn scaled(&self, k: i64) -> QuadForm {
        QuadForm {
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Orthogonal sum `self ⊥ other` in `n + m` variables.
    pub fn direct_sum(&self, other: &QuadForm) -> QuadForm {
        let n = self.nvars;
        let mut q = QuadForm::zero(n + other.nvars);
        for i in 0..n {
            for j in i..n {
                q.set(i, j, self.coeff(i, j));
            }
        }
        for i in 0..other.nvars {
            for j in i..other.nvars {
                q.set(n + i, n + j, other.coeff(i, j));
            }
        }
        q
    }

    /// The form `x ↦ Q(T·x)` obtained by symbolic expansion of each monomial.
    pub fn pullback(&self, t: &Substitution) -> Result<QuadForm, FormError> {
        if t.rows() != self.nvars {
            return Err(FormError::ArityMismatch {
                expected: self.nvars,
                got: t.rows(),
            });
        }
        let k = t.cols();
        let mut out = QuadForm::zero(k);
        for i in 0..self.nvars {
            for j in i..self.nvars {
                let c = self.coeff(i, j);
                if c == 0 {
                    continue;
                }
                // (Σ_a T_ia x_a)(Σ_b T_jb x_b)
                for a in 0..k {
                    for b in 0..k {
                        let term = c
                            .checked_mul(t.get(i, a))
                            .and_then(|v| v.checked_mul(t.get(j, b)))
                            .ok_or(FormError::Overflow)?;
                        if term != 0 {
                            out.add_to(a, b, term);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exact leading-principal-minor test on the doubled Gram matrix.
    pub fn is_positive_definite(&self) -> bool {
        if self.nvars == 0 {
            return false;
        }
        leading_minors(&self.doubled_gram())
            .iter()
            .all(|d| d.is_positive())
    }

    /// Determinant of the doubled Gram matrix.
    pub fn doubled_determinant(&self) -> BigInt {
        leading_minors(&self.doubled_gram())
            .last()
            .cloned()
            .unwrap_or_else(|| BigInt::from(1))
    }
}

/// All leading principal minors via fraction-free (Bareiss) elimination.
///
/// Elimination stops at the first vanishing pivot; the remaining minors are
/// reported as zero, which is all the definiteness test needs.
fn leading_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            minors.resize(n, BigInt::zero());
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = pivot;
    }
    minors
}

fn var_name(i: usize, n: usize) -> String {
    if n <= VARS.len() {
        VARS[i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.nvars;
        let mut monomials = Vec::new();
        for i in 0..n {
            monomials.push((i, i));
        }
        for i in 0..n {
            for j in i + 1..n {
                monomials.push((i, j));
            }
        }
        let mut first = true;
        for (i, j) in monomials {
            let c = self.coeff(i, j);
            if c == 0 {
                continue;
            }
            let mono = if i == j {
                format!("{}^2", var_name(i, n))
            } else {
                format!("{}{}", var_name(i, n), var_name(j, n))
            };
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{mono}")?;
            } else {
                write!(f, "{sign}{mag}{mono}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Parses the polynomial syntax `x^2+2y^2+3z^2+6w^2+xw+yz`.
///
/// Variables are `x, y, z, w`; the arity is one more than the index of the
/// highest variable that occurs. Each term is an optional unsigned integer
/// coefficient followed by either `v^2` or a product `uv` of two variables.
/// Whitespace between tokens is ignored.
impl FromStr for QuadForm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().collect();
        let mut pos = 0;
        let mut terms: Vec<(usize, usize, i64)> = Vec::new();
        let err = |position: usize, message: &str| ParseError {
            position,
            message: message.to_string(),
        };
        let skip_ws = |pos: &mut usize| {
            while *pos < chars.len() && chars[*pos].is_whitespace() {
                *pos += 1;
            }
        };
        let var_at = |pos: usize| -> Option<usize> {
            chars.get(pos).and_then(|c| VARS.iter().position(|v| v == c))
        };

        skip_ws(&mut pos);
        if pos == chars.len() {
            return Err(err(pos, "empty form"));
        }
        if chars[pos] == '0' && chars[pos + 1..].iter().all(|c| c.is_whitespace()) {
            return Err(err(pos, "the zero form has no variables"));
        }
        let mut first = true;
        while pos < chars.len() {
            let mut sign = 1i64;
            if chars[pos] == '+' || chars[pos] == '-' {
                if chars[pos] == '-' {
                    sign = -1;
                }
                pos += 1;
                skip_ws(&mut pos);
            } else if !first {
                return Err(err(pos, "expected '+' or '-'"));
            }
            first = false;

            let start = pos;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            let coeff: i64 = if start == pos {
                1
            } else {
                let digits: String = chars[start..pos].iter().collect();
                digits
                    .parse()
                    .map_err(|_| err(start, "coefficient out of range"))?
            };
            skip_ws(&mut pos);
            let i = match var_at(pos) {
                Some(i) => i,
                None if pos < chars.len() && chars[pos].is_alphabetic() => {
                    return Err(err(pos, &format!("unknown variable '{}'", chars[pos])))
                }
                None => return Err(err(pos, "expected a variable")),
            };
            pos += 1;
            let j = if chars.get(pos) == Some(&'^') {
                if chars.get(pos + 1) != Some(&'2') {
                    return Err(err(pos + 1, "only '^2' exponents are allowed"));
                }
                pos += 2;
                i
            } else {
                match var_at(pos) {
                    Some(j) => {
                        pos += 1;
                        j
                    }
                    None if pos < chars.len() && chars[pos].is_alphabetic() => {
                        return Err(err(pos, &format!("unknown variable '{}'", chars[pos])))
                    }
                    None => return Err(err(pos, "expected '^2' or a second variable")),
                }
            };
            terms.push((i, j, sign * coeff));
            skip_ws(&mut pos);
        }
        let nvars = terms.iter().map(|&(i, j, _)| i.max(j) + 1).max().unwrap_or(0);
        Ok(QuadForm::from_terms(nvars, &terms))
    }
}

impl Serialize for QuadForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
