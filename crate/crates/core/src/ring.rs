//! Exact arithmetic in the ring of integers of an imaginary quadratic field.
//!
//! Elements are stored over the basis `(1, ω)` where `ω = √−m` when
//! `m ≢ 3 (mod 4)` and `ω = (1 + √−m)/2` otherwise. Multiplication uses the
//! minimal polynomial `ω² = trace_omega·ω − norm_omega`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("invalid field: m = {0} must be a positive squarefree integer")]
    InvalidField(i64),
    #[error("context mismatch: elements of Q(√-{left}) and Q(√-{right}) cannot be combined")]
    ContextMismatch { left: i64, right: i64 },
    #[error("integer overflow in ring arithmetic")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaKind {
    /// `ω = √−m`, used when `m ≢ 3 (mod 4)`.
    SqrtM,
    /// `ω = (1 + √−m)/2`, used when `m ≡ 3 (mod 4)`.
    HalfPlus,
}

/// The field `E = Q(√−m)` together with the data of its chosen generator `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldContext {
    m: i64,
    omega_kind: OmegaKind,
    trace_omega: i64,
    norm_omega: i64,
}

fn is_squarefree(m: i64) -> bool {
    let mut n = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl FieldContext {
    pub fn new(m: i64) -> Result<Self, RingError> {
        if m <= 0 || !is_squarefree(m) {
            return Err(RingError::InvalidField(m));
        }
        let ctx = if m % 4 == 3 {
            FieldContext {
                m,
                omega_kind: OmegaKind::HalfPlus,
                trace_omega: 1,
                norm_omega: (1 + m) / 4,
            }
        } else {
            FieldContext {
                m,
                omega_kind: OmegaKind::SqrtM,
                trace_omega: 0,
                norm_omega: m,
            }
        };
        Ok(ctx)
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn omega_kind(&self) -> OmegaKind {
        self.omega_kind
    }

    pub fn trace_omega(&self) -> i64 {
        self.trace_omega
    }

    pub fn norm_omega(&self) -> i64 {
        self.norm_omega
    }

    pub fn elem(&self, a: i64, b: i64) -> QuadInt {
        QuadInt { ctx: *self, a, b }
    }

    pub fn int(&self, a: i64) -> QuadInt {
        self.elem(a, 0)
    }

    pub fn zero(&self) -> QuadInt {
        self.elem(0, 0)
    }

    pub fn one(&self) -> QuadInt {
        self.elem(1, 0)
    }

    pub fn omega(&self) -> QuadInt {
        self.elem(0, 1)
    }

    /// The element `√−m`, which is `ω` or `2ω − 1` depending on the convention.
    pub fn sqrt_minus_m(&self) -> QuadInt {
        match self.omega_kind {
            OmegaKind::SqrtM => self.elem(0, 1),
            OmegaKind::HalfPlus => self.elem(-1, 2),
        }
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(√-{})", self.m)
    }
}

/// An element `a + bω` of the ring of integers of a fixed field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadInt {
    ctx: FieldContext,
    a: i64,
    b: i64,
}

fn add(x: i64, y: i64) -> Result<i64, RingError> {
    x.checked_add(y).ok_or(RingError::Overflow)
}

fn mul(x: i64, y: i64) -> Result<i64, RingError> {
    x.checked_mul(y).ok_or(RingError::Overflow)
}

impl QuadInt {
    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    /// Rational-integer coordinate.
    pub fn a(&self) -> i64 {
        self.a
    }

    /// Coordinate on `ω`.
    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Returns the value as a rational integer when the `ω` coordinate vanishes.
    pub fn as_integer(&self) -> Option<i64> {
        (self.b == 0).then_some(self.a)
    }

    fn same_field(&self, other: &QuadInt) -> Result<(), RingError> {
        if self.ctx.m != other.ctx.m {
            return Err(RingError::ContextMismatch {
                left: self.ctx.m,
                right: other.ctx.m,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &QuadInt) -> Result<QuadInt, RingError> {
        self.same_field(other)?;
        Ok(self.ctx.elem(add(self.a, other.a)?, add(self.b, other.b)?))
    }

    pub fn sub(&self, other: &QuadInt) -> Result<QuadInt, RingError> {
        self.same_field(other)?;
        let neg = other.neg()?;
        self.add(&neg)
    }

    pub fn neg(&self) -> Result<QuadInt, RingError> {
        let a = self.a.checked_neg().ok_or(RingError::Overflow)?;
        let b = self.b.checked_neg().ok_or(RingError::Overflow)?;
        Ok(self.ctx.elem(a, b))
    }

    /// `(a + bω)(c + dω) = ac − bd·N(ω) + (ad + bc + bd·T(ω))ω`.
    pub fn mul(&self, other: &QuadInt) -> Result<QuadInt, RingError> {
        self.same_field(other)?;
        let (a, b, c, d) = (self.a, self.b, other.a, other.b);
        let bd = mul(b, d)?;
        let re = add(mul(a, c)?, -mul(bd, self.ctx.norm_omega)?)?;
        let om = add(add(mul(a, d)?, mul(b, c)?)?, mul(bd, self.ctx.trace_omega)?)?;
        Ok(self.ctx.elem(re, om))
    }

    pub fn scale(&self, k: i64) -> Result<QuadInt, RingError> {
        Ok(self.ctx.elem(mul(self.a, k)?, mul(self.b, k)?))
    }

    pub fn conj(&self) -> Result<QuadInt, RingError> {
        let neg_b = self.b.checked_neg().ok_or(RingError::Overflow)?;
        match self.ctx.omega_kind {
            OmegaKind::SqrtM => Ok(self.ctx.elem(self.a, neg_b)),
            OmegaKind::HalfPlus => Ok(self.ctx.elem(add(self.a, self.b)?, neg_b)),
        }
    }

    /// `x + x̄`.
    pub fn trace(&self) -> Result<i64, RingError> {
        add(mul(2, self.a)?, mul(self.b, self.ctx.trace_omega)?)
    }

    /// `x·x̄ = a² + ab·T(ω) + b²·N(ω)`.
    pub fn norm(&self) -> Result<i64, RingError> {
        let ab = mul(mul(self.a, self.b)?, self.ctx.trace_omega)?;
        add(add(mul(self.a, self.a)?, ab)?, mul(mul(self.b, self.b)?, self.ctx.norm_omega)?)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => write!(f, "ω"),
            (0, -1) => write!(f, "-ω"),
            (0, b) => write!(f, "{b}ω"),
            (a, 1) => write!(f, "{a}+ω"),
            (a, -1) => write!(f, "{a}-ω"),
            (a, b) if b > 0 => write!(f, "{a}+{b}ω"),
            (a, b) => write!(f, "{a}{b}ω"),
        }
    }
}
