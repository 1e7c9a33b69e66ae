//! Exhaustive searches for integer substitutions `T` with `Q(T·x) = R(x)`.
//!
//! Columns of `T` are chosen one at a time from the vectors of a coordinate
//! box whose `Q`-value matches the corresponding diagonal coefficient of `R`;
//! each new column must also reproduce the cross coefficients of `R` against
//! every earlier column. Candidates are tried in ascending lexicographic
//! order, so results are deterministic.

use super::{FormError, QuadForm, Substitution};

/// Bounds tried in order by the `*_default` searches.
pub const DEFAULT_SEARCH_BOUNDS: [i64; 2] = [4, 8];

fn box_vectors(n: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * bound + 1) as usize;
    let count = side.pow(n as u32);
    (0..count).map(move |mut idx| {
        let mut v = vec![0i64; n];
        for slot in v.iter_mut().rev() {
            *slot = (idx % side) as i64 - bound;
            idx /= side;
        }
        v
    })
}

pub fn subform_search(q: &QuadForm, r: &QuadForm, bound: i64) -> Result<Substitution, FormError> {
    if r.nvars() > q.nvars() || r.nvars() == 0 {
        return Err(FormError::ArityMismatch {
            expected: q.nvars(),
            got: r.nvars(),
        });
    }
    if !q.is_positive_definite() {
        return Err(FormError::NotPositiveDefinite);
    }
    let k = r.nvars();
    let mut candidates: Vec<Vec<Vec<i64>>> = vec![Vec::new(); k];
    for v in box_vectors(q.nvars(), bound) {
        let value = q.eval(&v)?;
        for (i, bucket) in candidates.iter_mut().enumerate() {
            if value == r.coeff(i, i) as i128 {
                bucket.push(v.clone());
            }
        }
    }
    let mut chosen: Vec<Vec<i64>> = Vec::with_capacity(k);
    if backtrack(q, r, &candidates, &mut chosen) {
        Substitution::from_columns(&chosen)
    } else {
        Err(FormError::SearchExhausted { bound })
    }
}

fn backtrack(
    q: &QuadForm,
    r: &QuadForm,
    candidates: &[Vec<Vec<i64>>],
    chosen: &mut Vec<Vec<i64>>,
) -> bool {
    let i = chosen.len();
    if i == candidates.len() {
        return true;
    }
    for v in &candidates[i] {
        let fits = chosen
            .iter()
            .enumerate()
            .all(|(j, u)| q.polar(u, v) == r.coeff(j, i) as i128);
        if fits {
            chosen.push(v.clone());
            if backtrack(q, r, candidates, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Searches for `T` with `Q(T·x) = λ·Q(x)`.
pub fn scaling_substitution_search(
    q: &QuadForm,
    lambda: i64,
    bound: i64,
) -> Result<Substitution, FormError> {
    subform_search(q, &q.scaled(lambda), bound)
}

/// [`subform_search`] over [`DEFAULT_SEARCH_BOUNDS`], reporting the last bound on failure.
pub fn subform_search_default(q: &QuadForm, r: &QuadForm) -> Result<Substitution, FormError> {
    let mut last = Err(FormError::SearchExhausted { bound: 0 });
    for bound in DEFAULT_SEARCH_BOUNDS {
        last = subform_search(q, r, bound);
        match &last {
            Err(FormError::SearchExhausted { .. }) => continue,
            _ => return last,
        }
    }
    last
}

pub fn scaling_substitution_search_default(
    q: &QuadForm,
    lambda: i64,
) -> Result<Substitution, FormError> {
    subform_search_default(q, &q.scaled(lambda))
}
