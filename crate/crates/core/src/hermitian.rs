//! Binary Hermitian lattices given as orthogonal sums of blocks.
//!
//! A free rank-one block `⟨d⟩` contributes one formal generator `v` with
//! `H(v) = d`. A non-free rank-one component `A·v` is presented by two formal
//! generators `u₁ = αv`, `u₂ = βv` with the singular Gram block
//! `[[a, γ], [γ̄, c]]`, `ac = N(γ)`. Since `u₂ = μ·u₁` with `μ = γ̄/a`, the
//! component is `(Z + Zμ)·u₁`, and the pair `(u₁, u₂)` is used directly as its
//! Z-basis. Validation checks that this Z-span is closed under `ω`.

use std::fmt;

use thiserror::Error;

use crate::qform::Substitution;
use crate::ring::{FieldContext, QuadInt, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HermitianError {
    #[error("lattice is not integral: {0}")]
    NonIntegralLattice(String),
    #[error("lattice is not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("formal block is not singular: {a}·{c} ≠ N(γ) = {norm}")]
    FormalBlockNotSingular { a: i64, c: i64, norm: i64 },
    #[error("lattice is not a free diagonal lattice ⟨1, c⟩")]
    NotDiagonal,
    #[error("vector is not in the lattice: {0}")]
    NotInLattice(String),
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    /// The lattice `⟨d⟩`.
    Unary(i64),
    /// Formal Gram `[[a, γ], [γ̄, c]]` of a non-free rank-one component.
    FormalPair { a: i64, gamma: QuadInt, c: i64 },
}

impl Block {
    /// Number of formal generators the block contributes.
    pub fn formal_size(&self) -> usize {
        match self {
            Block::Unary(_) => 1,
            Block::FormalPair { .. } => 2,
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Unary(d) => write!(f, "⟨{d}⟩"),
            Block::FormalPair { a, gamma, c } => {
                let bar = gamma.conj().map_err(|_| fmt::Error)?;
                write!(f, "[[{a}, {gamma}], [{bar}, {c}]]")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermLattice {
    ctx: FieldContext,
    blocks: Vec<Block>,
    label: String,
}

impl HermLattice {
    pub fn new(ctx: FieldContext, blocks: Vec<Block>, label: impl Into<String>) -> Self {
        HermLattice {
            ctx,
            blocks,
            label: label.into(),
        }
    }

    /// The free diagonal lattice `⟨d₁, …, dₖ⟩`.
    pub fn diagonal(ctx: FieldContext, diag: &[i64]) -> Self {
        let label = format!(
            "⟨{}⟩",
            diag.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
        );
        HermLattice::new(ctx, diag.iter().map(|&d| Block::Unary(d)).collect(), label)
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Dimension over `E`.
    pub fn rank(&self) -> usize {
        self.blocks.len()
    }

    pub fn formal_size(&self) -> usize {
        self.blocks.iter().map(Block::formal_size).sum()
    }

    pub fn is_free_diagonal(&self) -> bool {
        self.blocks.iter().all(|b| matches!(b, Block::Unary(_)))
    }

    /// Offsets of each block within the formal coordinates.
    fn offsets(&self) -> Vec<usize> {
        let mut at = 0;
        self.blocks
            .iter()
            .map(|b| {
                let o = at;
                at += b.formal_size();
                o
            })
            .collect()
    }

    pub fn validate(&self) -> Result<(), HermitianError> {
        if self.blocks.is_empty() {
            return Err(HermitianError::NotPositiveDefinite("no blocks".into()));
        }
        for block in &self.blocks {
            match block {
                Block::Unary(d) => {
                    if *d < 1 {
                        return Err(HermitianError::NotPositiveDefinite(format!(
                            "unary block ⟨{d}⟩"
                        )));
                    }
                }
                Block::FormalPair { a, gamma, c } => {
                    if gamma.ctx().m() != self.ctx.m() {
                        return Err(RingError::ContextMismatch {
                            left: self.ctx.m(),
                            right: gamma.ctx().m(),
                        }
                        .into());
                    }
                    if *a < 1 || *c < 1 {
                        return Err(HermitianError::NotPositiveDefinite(format!(
                            "formal block with diagonal ({a}, {c})"
                        )));
                    }
                    let norm = gamma.norm()?;
                    if a.checked_mul(*c) != Some(norm) {
                        return Err(HermitianError::FormalBlockNotSingular {
                            a: *a,
                            c: *c,
                            norm,
                        });
                    }
                    if gamma.b() == 0 {
                        return Err(HermitianError::NotPositiveDefinite(
                            "formal generators are rationally dependent".into(),
                        ));
                    }
                    let omega = self.ctx.omega();
                    let zero = self.ctx.zero();
                    for (s, t) in [(omega, zero), (zero, omega)] {
                        pair_z_coords(*a, gamma, &s, &t).map_err(|_| {
                            HermitianError::NonIntegralLattice(format!(
                                "Z-span of the formal generators of {block} is not an O-module"
                            ))
                        })?;
                    }
                }
            }
        }
        Ok(())
    }

    /// The formal Gram matrix, block diagonal in the block order.
    pub fn formal_gram(&self) -> Result<Vec<Vec<QuadInt>>, HermitianError> {
        self.validate()?;
        let k = self.formal_size();
        let mut g = vec![vec![self.ctx.zero(); k]; k];
        for (block, o) in self.blocks.iter().zip(self.offsets()) {
            match block {
                Block::Unary(d) => g[o][o] = self.ctx.int(*d),
                Block::FormalPair { a, gamma, c } => {
                    g[o][o] = self.ctx.int(*a);
                    g[o][o + 1] = *gamma;
                    g[o + 1][o] = gamma.conj()?;
                    g[o + 1][o + 1] = self.ctx.int(*c);
                }
            }
        }
        Ok(g)
    }

    /// `H(u, v) = Σ u_i·M_ij·v̄_j` over formal coordinates.
    pub fn inner(&self, u: &[QuadInt], v: &[QuadInt]) -> Result<QuadInt, HermitianError> {
        let g = self.formal_gram()?;
        self.check_arity(u)?;
        self.check_arity(v)?;
        let mut acc = self.ctx.zero();
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if g[i][j].is_zero() {
                    continue;
                }
                acc = acc.add(&ui.mul(&g[i][j])?.mul(&vj.conj()?)?)?;
            }
        }
        Ok(acc)
    }

    /// `H(v)`, a non-negative rational integer.
    pub fn value(&self, v: &[QuadInt]) -> Result<i64, HermitianError> {
        let h = self.inner(v, v)?;
        h.as_integer().ok_or_else(|| {
            HermitianError::NonIntegralLattice(format!("H(v) = {h} is not rational"))
        })
    }

    fn check_arity(&self, v: &[QuadInt]) -> Result<(), HermitianError> {
        if v.len() != self.formal_size() {
            return Err(HermitianError::ArityMismatch {
                expected: self.formal_size(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Z-basis of the lattice in formal coordinates: `(v, ωv)` for each unary
    /// block and `(u₁, u₂)` for each formal pair.
    pub fn z_basis(&self) -> Vec<Vec<QuadInt>> {
        let k = self.formal_size();
        let unit = |i: usize, x: QuadInt| {
            let mut v = vec![self.ctx.zero(); k];
            v[i] = x;
            v
        };
        let mut basis = Vec::with_capacity(2 * self.blocks.len());
        for (block, o) in self.blocks.iter().zip(self.offsets()) {
            match block {
                Block::Unary(_) => {
                    basis.push(unit(o, self.ctx.one()));
                    basis.push(unit(o, self.ctx.omega()));
                }
                Block::FormalPair { .. } => {
                    basis.push(unit(o, self.ctx.one()));
                    basis.push(unit(o + 1, self.ctx.one()));
                }
            }
        }
        basis
    }

    /// The lattice vector with the given coordinates on [`z_basis`](Self::z_basis).
    pub fn element(&self, z: &[i64]) -> Result<Vec<QuadInt>, HermitianError> {
        let basis = self.z_basis();
        if z.len() != basis.len() {
            return Err(HermitianError::ArityMismatch {
                expected: basis.len(),
                got: z.len(),
            });
        }
        let mut v = vec![self.ctx.zero(); self.formal_size()];
        for (c, gen) in z.iter().zip(&basis) {
            for (slot, g) in v.iter_mut().zip(gen) {
                *slot = slot.add(&g.scale(*c)?)?;
            }
        }
        Ok(v)
    }

    /// Inverse of [`element`](Self::element); fails for vectors of `E ⊗ L`
    /// outside the Z-span of the basis.
    pub fn z_coords(&self, v: &[QuadInt]) -> Result<Vec<i64>, HermitianError> {
        self.check_arity(v)?;
        let mut z = Vec::with_capacity(2 * self.blocks.len());
        for (block, o) in self.blocks.iter().zip(self.offsets()) {
            match block {
                Block::Unary(_) => {
                    z.push(v[o].a());
                    z.push(v[o].b());
                }
                Block::FormalPair { a, gamma, .. } => {
                    let (p, q) = pair_z_coords(*a, gamma, &v[o], &v[o + 1])?;
                    z.push(p);
                    z.push(q);
                }
            }
        }
        Ok(z)
    }
}

/// Writes `s·u₁ + t·u₂` as `p·u₁ + q·u₂` with `p, q ∈ Z`.
///
/// With `u₂ = (γ̄/a)·u₁` this is `a·p + q·γ̄ = a·s + t·γ̄` in `O`.
fn pair_z_coords(
    a: i64,
    gamma: &QuadInt,
    s: &QuadInt,
    t: &QuadInt,
) -> Result<(i64, i64), HermitianError> {
    let gbar = gamma.conj()?;
    let x = s.scale(a)?.add(&t.mul(&gbar)?)?;
    let not_in = || HermitianError::NotInLattice(format!("{s}·u₁ + {t}·u₂"));
    if gbar.b() == 0 || x.b() % gbar.b() != 0 {
        return Err(not_in());
    }
    let q = x.b() / gbar.b();
    let rem = x.a() - q * gbar.a();
    if rem % a != 0 {
        return Err(not_in());
    }
    Ok((rem / a, q))
}

impl fmt::Display for HermLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.label, self.ctx)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapKind {
    /// `(x, y) ↦ (c·y, x)` on `⟨1, c⟩`.
    Swap { factor: i64 },
    /// Multiplication of every coordinate by a ring element.
    Multiply(QuadInt),
}

/// An O-linear self-map `φ` of a lattice with `H(φ(v)) = scale·H(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeMap {
    pub kind: MapKind,
    pub scale: i64,
    pub description: String,
}

impl LatticeMap {
    pub fn apply(&self, lattice: &HermLattice, v: &[QuadInt]) -> Result<Vec<QuadInt>, HermitianError> {
        lattice.check_arity(v)?;
        match &self.kind {
            MapKind::Swap { factor } => Ok(vec![v[1].scale(*factor)?, v[0]]),
            MapKind::Multiply(rho) => v
                .iter()
                .map(|x| rho.mul(x).map_err(HermitianError::from))
                .collect(),
        }
    }

    /// The induced integer substitution on Z-coordinates: column `j` holds the
    /// coordinates of `φ(e_j)`.
    pub fn substitution(&self, lattice: &HermLattice) -> Result<Substitution, HermitianError> {
        let columns = lattice
            .z_basis()
            .iter()
            .map(|e| lattice.z_coords(&self.apply(lattice, e)?))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Substitution::from_columns(&columns).expect("nonempty basis"))
    }
}

/// `(x, y) ↦ (c·y, x)` on `⟨1, c⟩`, scaling `H` by `c`.
pub fn diagonal_scaling_map(lattice: &HermLattice) -> Result<LatticeMap, HermitianError> {
    match lattice.blocks() {
        [Block::Unary(1), Block::Unary(c)] => Ok(LatticeMap {
            kind: MapKind::Swap { factor: *c },
            scale: *c,
            description: format!("(x, y) ↦ ({c}y, x)"),
        }),
        _ => Err(HermitianError::NotDiagonal),
    }
}

/// Multiplication by `√−m`, scaling `H` by `m`.
pub fn sqrtm_scaling_map(lattice: &HermLattice) -> Result<LatticeMap, HermitianError> {
    let pi = lattice.ctx().sqrt_minus_m();
    multiplication_map(pi)
}

/// Multiplication by `ρ`, scaling `H` by `N(ρ)`.
pub fn multiplication_map(rho: QuadInt) -> Result<LatticeMap, HermitianError> {
    Ok(LatticeMap {
        kind: MapKind::Multiply(rho),
        scale: rho.norm()?,
        description: format!("v ↦ ({rho})·v"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(m: i64) -> FieldContext {
        FieldContext::new(m).unwrap()
    }

    fn pair(m: i64, a: i64, g: (i64, i64), c: i64) -> HermLattice {
        let k = ctx(m);
        HermLattice::new(
            k,
            vec![
                Block::Unary(1),
                Block::FormalPair {
                    a,
                    gamma: k.elem(g.0, g.1),
                    c,
                },
            ],
            "test",
        )
    }

    #[test]
    fn validation_errors() {
        assert!(pair(15, 2, (0, 1), 2).validate().is_ok());
        assert_eq!(
            pair(15, 2, (0, 1), 3).validate(),
            Err(HermitianError::FormalBlockNotSingular { a: 2, c: 3, norm: 4 })
        );
        let zero = HermLattice::diagonal(ctx(1), &[1, 0]);
        assert!(matches!(zero.validate(), Err(HermitianError::NotPositiveDefinite(_))));
        // [[1, 1], [1, 1]] is singular but spans a rank-one Z-module
        assert!(matches!(
            pair(1, 1, (1, 0), 1).validate(),
            Err(HermitianError::NotPositiveDefinite(_))
        ));
        // [[2, 3ω], [-3ω, 9]] over Q(√-2): ω·u₁ is not in Z·u₁ + Z·u₂
        assert!(matches!(
            pair(2, 2, (0, 3), 9).validate(),
            Err(HermitianError::NonIntegralLattice(_))
        ));
    }

    #[test]
    fn gram_is_hermitian_and_block_singular() {
        let l = pair(23, 2, (0, 1), 3);
        let g = l.formal_gram().unwrap();
        assert_eq!(g.len(), 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g[i][j], g[j][i].conj().unwrap());
            }
        }
        assert_eq!(g[0][0], ctx(23).int(1));
        assert_eq!(g[1][2], ctx(23).omega());
        let det = g[1][1].mul(&g[2][2]).unwrap().sub(&g[1][2].mul(&g[2][1]).unwrap()).unwrap();
        assert!(det.is_zero());
        let d = HermLattice::diagonal(ctx(7), &[1, 2]).formal_gram().unwrap();
        assert_eq!(d, vec![vec![ctx(7).int(1), ctx(7).zero()], vec![ctx(7).zero(), ctx(7).int(2)]]);
    }

    #[test]
    fn coordinates_roundtrip() {
        let l = pair(5, 2, (-1, 1), 3);
        l.validate().unwrap();
        for z in [[1, 0, 0, 0], [0, 1, 0, 0], [2, -3, 1, 4], [0, 0, -5, 7]] {
            let v = l.element(&z).unwrap();
            assert_eq!(l.z_coords(&v).unwrap(), z.to_vec());
        }
    }

    #[test]
    fn scaling_maps_scale_values() {
        let l = HermLattice::diagonal(ctx(7), &[1, 3]);
        let phi = diagonal_scaling_map(&l).unwrap();
        assert_eq!(phi.scale, 3);
        let v = vec![ctx(7).zero(), ctx(7).one()];
        assert_eq!(l.value(&v).unwrap(), 3);
        let w = phi.apply(&l, &v).unwrap();
        assert_eq!(w, vec![ctx(7).int(3), ctx(7).zero()]);
        assert_eq!(l.value(&w).unwrap(), 9);

        let one_one = HermLattice::diagonal(ctx(1), &[1, 1]);
        assert_eq!(diagonal_scaling_map(&one_one).unwrap().scale, 1);
        assert_eq!(
            diagonal_scaling_map(&pair(15, 2, (0, 1), 2)),
            Err(HermitianError::NotDiagonal)
        );

        let f11 = HermLattice::diagonal(ctx(11), &[1, 1]);
        let pi = sqrtm_scaling_map(&f11).unwrap();
        assert_eq!(pi.scale, 11);
        let v = vec![ctx(11).one(), ctx(11).zero()];
        assert_eq!(f11.value(&pi.apply(&f11, &v).unwrap()).unwrap(), 11);
        assert_eq!(sqrtm_scaling_map(&HermLattice::diagonal(ctx(1), &[1, 1])).unwrap().scale, 1);
    }

    #[test]
    fn maps_preserve_the_lattice_and_scale_values() {
        let lattices = [
            HermLattice::diagonal(ctx(7), &[1, 2]),
            pair(15, 2, (0, 1), 2),
            pair(23, 2, (-1, 1), 3),
            pair(31, 2, (0, 1), 4),
        ];
        for l in &lattices {
            let mut maps = vec![sqrtm_scaling_map(l).unwrap()];
            if let Ok(d) = diagonal_scaling_map(l) {
                maps.push(d);
            }
            for phi in &maps {
                let t = phi.substitution(l).unwrap();
                for z in [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, -2, 3, 1]] {
                    let v = l.element(&z).unwrap();
                    let image = phi.apply(l, &v).unwrap();
                    assert_eq!(l.value(&image).unwrap(), phi.scale * l.value(&v).unwrap());
                    assert_eq!(l.z_coords(&image).unwrap(), t.apply(&z));
                }
            }
        }
    }
}
