//! Integral quadratic forms: evaluation, complete representation search,
//! represented-set sweeps and substitution identities.

mod enumerate;
mod filter;
mod form;
mod search;
mod substitution;

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use enumerate::PointEnumerator;
pub use filter::CongruenceFilter;
pub use form::QuadForm;
pub use search::{
    scaling_substitution_search, scaling_substitution_search_default, subform_search,
    subform_search_default, DEFAULT_SEARCH_BOUNDS,
};
pub use substitution::Substitution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("arity mismatch: expected {expected} variables, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("integer overflow while evaluating a form")]
    Overflow,
    #[error("no substitution found with entries bounded by {bound}")]
    SearchExhausted { bound: i64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Integer coordinates certifying `Q(x) = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Witness(pub Vec<i64>);

impl Witness {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Membership of `1..=limit` in the value set of a form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepSet {
    limit: u64,
    flags: Vec<bool>,
}

impl RepSet {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= 1 && n <= self.limit && self.flags[n as usize]
    }

    pub fn represented(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.limit).filter(|&n| self.flags[n as usize])
    }

    pub fn missing(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.limit).filter(|&n| !self.flags[n as usize])
    }

    pub fn first_missing(&self, filter: &CongruenceFilter) -> Option<u64> {
        self.missing().find(|&n| filter.accepts(n))
    }

    /// Both sets must share the same limit for the comparison to be meaningful.
    pub fn is_subset_of(&self, other: &RepSet) -> bool {
        self.represented().all(|n| other.contains(n))
    }

    pub fn first_difference(&self, other: &RepSet) -> Option<u64> {
        let limit = self.limit.min(other.limit);
        (1..=limit).find(|&n| self.contains(n) != other.contains(n))
    }
}

/// Lexicographically smallest witness for each `n ≤ limit`.
#[derive(Debug, Clone)]
pub struct WitnessTable {
    form: QuadForm,
    limit: u64,
    witnesses: Vec<Option<Witness>>,
}

impl WitnessTable {
    pub fn build(form: &QuadForm, limit: u64) -> Result<Self, FormError> {
        let witnesses = sweep(form, limit, true)?;
        Ok(WitnessTable {
            form: form.clone(),
            limit,
            witnesses: witnesses
                .into_iter()
                .map(|w| w.map(Witness))
                .collect(),
        })
    }

    pub fn form(&self) -> &QuadForm {
        &self.form
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn get(&self, n: u64) -> Option<&Witness> {
        if n == 0 || n > self.limit {
            return None;
        }
        self.witnesses[n as usize].as_ref()
    }

    /// Table lookup within the limit, complete search beyond it.
    pub fn witness(&self, n: u64) -> Result<Option<Witness>, FormError> {
        if n <= self.limit {
            Ok(self.get(n).cloned())
        } else {
            represents(&self.form, n)
        }
    }

    pub fn to_repset(&self) -> RepSet {
        RepSet {
            limit: self.limit,
            flags: self.witnesses.iter().map(Option::is_some).collect(),
        }
    }
}

type FirstHits = Vec<(u64, Vec<i64>)>;

fn sweep_slice(
    en: &PointEnumerator,
    limit: u64,
    x1: i64,
    with_witnesses: bool,
) -> Result<FirstHits, FormError> {
    let mut seen = vec![false; limit as usize + 1];
    let mut hits = Vec::new();
    let _ = en.for_each_with_first(limit, x1, |x, v| {
        if v >= 1 && !seen[v as usize] {
            seen[v as usize] = true;
            hits.push((v, if with_witnesses { x.to_vec() } else { Vec::new() }));
        }
        ControlFlow::Continue(())
    })?;
    Ok(hits)
}

/// One pass over all points of value `≤ limit`, partitioned by the first
/// coordinate. Slices are merged in ascending order of `x_1`, so the result is
/// the same as a sequential lexicographic sweep.
fn sweep(form: &QuadForm, limit: u64, with_witnesses: bool) -> Result<Vec<Option<Vec<i64>>>, FormError> {
    let en = PointEnumerator::new(form)?;
    let (lo, hi) = en.first_range(limit)?;

    #[cfg(feature = "parallel")]
    let slices: Vec<FirstHits> = {
        use rayon::prelude::*;
        (lo..=hi)
            .into_par_iter()
            .map(|x1| sweep_slice(&en, limit, x1, with_witnesses))
            .collect::<Result<_, _>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let slices: Vec<FirstHits> = (lo..=hi)
        .map(|x1| sweep_slice(&en, limit, x1, with_witnesses))
        .collect::<Result<_, _>>()?;

    let mut table: Vec<Option<Vec<i64>>> = vec![None; limit as usize + 1];
    for slice in slices {
        for (v, x) in slice {
            let slot = &mut table[v as usize];
            if slot.is_none() {
                *slot = Some(x);
            }
        }
    }
    Ok(table)
}

/// Complete search for a representation of `n`; returns the lexicographically
/// smallest witness, or `None` when `Q` does not represent `n`.
pub fn represents(form: &QuadForm, n: u64) -> Result<Option<Witness>, FormError> {
    let en = PointEnumerator::new(form)?;
    let mut found = None;
    let _ = en.for_each(n, |x, v| {
        if v == n {
            found = Some(Witness(x.to_vec()));
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

pub fn represented_set(form: &QuadForm, limit: u64) -> Result<RepSet, FormError> {
    let table = sweep(form, limit, false)?;
    Ok(RepSet {
        limit,
        flags: table.iter().map(Option::is_some).collect(),
    })
}

/// Smallest `n ≤ limit` accepted by `filter` that the form misses.
pub fn first_exception(
    form: &QuadForm,
    limit: u64,
    filter: &CongruenceFilter,
) -> Result<Option<u64>, FormError> {
    Ok(represented_set(form, limit)?.first_missing(filter))
}

/// Decides `Q(T·x) = λ·Q(x)` by comparing coefficients of the expanded form.
pub fn substitution_check(form: &QuadForm, t: &Substitution, lambda: i64) -> Result<bool, FormError> {
    if t.rows() != form.nvars() || t.cols() != form.nvars() {
        return Err(FormError::ArityMismatch {
            expected: form.nvars(),
            got: if t.rows() != form.nvars() { t.rows() } else { t.cols() },
        });
    }
    Ok(form.pullback(t)? == form.scaled(lambda))
}

pub fn repset_equal(a: &QuadForm, b: &QuadForm, limit: u64) -> Result<bool, FormError> {
    Ok(represented_set(a, limit)? == represented_set(b, limit)?)
}
