//! The trace transfer from Hermitian lattices to integral quadratic forms.
//!
//! Over a Z-basis `e_1, …, e_{2n}` of the lattice, the quadratic form
//! `Q(x) = H(Σ x_i e_i)` has diagonal coefficients `H(e_i)` and cross
//! coefficients `Tr H(e_i, e_j)`: the bilinear form `½·Tr H` doubled into a
//! polynomial coefficient, so odd cross terms appear whenever a trace is odd.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hermitian::{HermLattice, HermitianError};
use crate::qform::{represented_set, FormError, QuadForm, Substitution};
use crate::ring::QuadInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("transfer does not match {expected}: represented sets first differ at {first_difference}")]
    MatchFailed {
        expected: String,
        first_difference: u64,
    },
}

/// Ordered generators `(v₁, ωv₁, v₂, ωv₂)`, with a formal pair contributing
/// its two generators `(u₁, u₂)` in place of `(v, ωv)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferBasis {
    pub generators: Vec<Vec<QuadInt>>,
}

impl TransferBasis {
    pub fn of(lattice: &HermLattice) -> Self {
        TransferBasis {
            generators: lattice.z_basis(),
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

pub fn transfer(lattice: &HermLattice) -> Result<QuadForm, TransferError> {
    lattice.validate()?;
    let basis = TransferBasis::of(lattice).generators;
    let k = basis.len();
    let mut q = QuadForm::zero(k);
    for i in 0..k {
        q.set(i, i, lattice.value(&basis[i])?);
        for j in i + 1..k {
            let h = lattice.inner(&basis[i], &basis[j])?;
            q.set(i, j, h.trace().map_err(HermitianError::from)?);
        }
    }
    Ok(q)
}

/// The quaternary forms written out explicitly in the literature for the
/// catalog lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrintedForm {
    F72,
    F73,
    F11,
    F15,
    F19,
    F23,
    F31,
    Diagonal6,
    Diagonal10,
    OneClass7,
    OneClass11,
}

impl PrintedForm {
    pub const ALL: [PrintedForm; 11] = [
        PrintedForm::F72,
        PrintedForm::F73,
        PrintedForm::F11,
        PrintedForm::F15,
        PrintedForm::F19,
        PrintedForm::F23,
        PrintedForm::F31,
        PrintedForm::Diagonal6,
        PrintedForm::Diagonal10,
        PrintedForm::OneClass7,
        PrintedForm::OneClass11,
    ];

    pub fn text(self) -> &'static str {
        match self {
            PrintedForm::F72 => "x^2+2y^2+2z^2+4w^2+xy+2zw",
            PrintedForm::F73 => "x^2+2y^2+3z^2+6w^2+xy+3zw",
            PrintedForm::F11 => "x^2+y^2+3z^2+3w^2+xz+yw",
            PrintedForm::F15 => "x^2+2y^2+2z^2+4w^2+xw+yz",
            PrintedForm::F19 => "x^2+2y^2+5z^2+10w^2+xz+2yw",
            PrintedForm::F23 => "x^2+2y^2+3z^2+6w^2+xw+yz",
            PrintedForm::F31 => "x^2+2y^2+4z^2+8w^2+xw+yz",
            PrintedForm::Diagonal6 => "x^2+2y^2+3z^2+6w^2",
            PrintedForm::Diagonal10 => "x^2+2y^2+5z^2+10w^2",
            PrintedForm::OneClass7 => "x^2+y^2+2z^2+2w^2+xz+yw",
            PrintedForm::OneClass11 => "x^2+2y^2+3z^2+6w^2+xz+2yw",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PrintedForm::F72 => "f7,2",
            PrintedForm::F73 => "f7,3",
            PrintedForm::F11 => "f11",
            PrintedForm::F15 => "f15",
            PrintedForm::F19 => "f19",
            PrintedForm::F23 => "f23",
            PrintedForm::F31 => "f31",
            PrintedForm::Diagonal6 => "diag(1,2,3,6)",
            PrintedForm::Diagonal10 => "diag(1,2,5,10)",
            PrintedForm::OneClass7 => "one-class form for Q(√-7) ⟨1,1⟩",
            PrintedForm::OneClass11 => "one-class form for Q(√-11) ⟨1,2⟩",
        }
    }

    pub fn form(self) -> QuadForm {
        self.text().parse().expect("printed forms parse")
    }
}

impl fmt::Display for PrintedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatchReport {
    /// `transfer(P·x) = expected(x)` for the signed permutation matrix `P`.
    SignedPermutation { substitution: Substitution },
    /// Only the represented sets agree up to `limit`.
    RepresentedSets { limit: u64 },
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Searches all signed permutation matrices `P` with `Q(P·x) = R(x)`.
pub fn signed_permutation_match(q: &QuadForm, r: &QuadForm) -> Option<Substitution> {
    let n = q.nvars();
    if r.nvars() != n {
        return None;
    }
    for perm in permutations(n) {
        for signs in 0u32..(1 << n) {
            let mut rows = vec![vec![0i64; n]; n];
            for (col, &row) in perm.iter().enumerate() {
                rows[row][col] = if signs >> col & 1 == 1 { -1 } else { 1 };
            }
            let p = Substitution::from_rows(rows).expect("square");
            if q.pullback(&p).ok().as_ref() == Some(r) {
                return Some(p);
            }
        }
    }
    None
}

/// Compares `transfer(L)` with an expected form: signed-permutation
/// equivalence first, then equality of represented sets up to `limit`.
pub fn match_transfer(
    lattice: &HermLattice,
    expected: &QuadForm,
    limit: u64,
) -> Result<MatchReport, TransferError> {
    let q = transfer(lattice)?;
    if let Some(p) = signed_permutation_match(&q, expected) {
        return Ok(MatchReport::SignedPermutation { substitution: p });
    }
    let a = represented_set(&q, limit)?;
    let b = represented_set(expected, limit)?;
    match a.first_difference(&b) {
        None => Ok(MatchReport::RepresentedSets { limit }),
        Some(n) => Err(TransferError::MatchFailed {
            expected: expected.to_string(),
            first_difference: n,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::ring::FieldContext;

    fn q(s: &str) -> QuadForm {
        s.parse().unwrap()
    }

    fn lattice(sel: &str) -> HermLattice {
        Catalog::builtin().get(sel.parse().unwrap()).unwrap().clone()
    }

    #[test]
    fn unary_transfers() {
        let l = HermLattice::diagonal(FieldContext::new(1).unwrap(), &[1]);
        assert_eq!(transfer(&l).unwrap(), q("x^2+y^2"));
        assert_eq!(transfer(&lattice("7:2")).unwrap(), q("x^2+2y^2+2z^2+4w^2+xy+2zw"));
        assert_eq!(transfer(&lattice("15:1")).unwrap(), q("x^2+4y^2+2z^2+2w^2+xy+zw"));
        assert_eq!(transfer(&lattice("6:1")).unwrap(), q("x^2+6y^2+2z^2+3w^2"));
        assert_eq!(transfer(&lattice("23:2")).unwrap(), q("x^2+6y^2+2z^2+3w^2+xy-zw"));
    }

    #[test]
    fn basis_has_four_generators() {
        for e in Catalog::builtin().entries() {
            assert_eq!(TransferBasis::of(&e.lattice).len(), 4, "{}", e.selector);
        }
    }

    #[test]
    fn matches_against_printed_forms() {
        let m = match_transfer(&lattice("7:2"), &PrintedForm::F72.form(), 500).unwrap();
        let MatchReport::SignedPermutation { substitution } = m else {
            panic!("expected permutation match");
        };
        assert_eq!(
            transfer(&lattice("7:2")).unwrap().pullback(&substitution).unwrap(),
            PrintedForm::F72.form()
        );
        let m = match_transfer(&lattice("1:1"), &q("x^2+y^2+z^2+w^2"), 500).unwrap();
        assert!(matches!(m, MatchReport::SignedPermutation { .. }));
        // both Q(√-23) lattices match the same printed form
        for sel in ["23:1", "23:2"] {
            assert!(match_transfer(&lattice(sel), &PrintedForm::F23.form(), 500).is_ok());
        }
    }

    #[test]
    fn mismatch_is_reported() {
        let err = match_transfer(&lattice("1:1"), &q("x^2+y^2+z^2+8w^2"), 50).unwrap_err();
        assert!(matches!(
            err,
            TransferError::MatchFailed {
                first_difference: 7,
                ..
            }
        ));
    }

    #[test]
    fn represented_set_fallback() {
        let l = HermLattice::diagonal(FieldContext::new(3).unwrap(), &[1]);
        let other = q("x^2-xy+y^2");
        assert!(matches!(
            match_transfer(&l, &other, 100).unwrap(),
            MatchReport::SignedPermutation { .. }
        ));
        // (x, y) ↦ (x+y, y) is equivalent but not a signed permutation
        let sheared = q("x^2+3xy+3y^2");
        assert_eq!(
            match_transfer(&l, &sheared, 100).unwrap(),
            MatchReport::RepresentedSets { limit: 100 }
        );
    }
}
