//! Proof traces: a leaf certificate followed by scaling steps, replayable by
//! exact evaluation.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qform::{QuadForm, Substitution, Witness};

use super::cases::CaseId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("trace has no steps")]
    Empty,
    #[error("step {index} is out of place: only the first step may be a non-scaling step")]
    OutOfPlace { index: usize },
    #[error("step {index}: claimed value {claimed}, evaluation gives {actual}")]
    ValueMismatch { index: usize, claimed: u64, actual: i128 },
    #[error("step {index}: substitution has the wrong shape")]
    Shape { index: usize },
    #[error("trace ends at {reached}, target is {target}")]
    WrongTarget { reached: u64, target: u64 },
    #[error("replayed witness {replayed} differs from the stored witness")]
    WitnessMismatch { replayed: Witness },
}

/// Subtracting `k·w²` before representing by the carrier, then mapping
/// `(u, w)` into the quaternary form by `embedding`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shift {
    pub k: i64,
    pub w: i64,
    pub embedding: Substitution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    /// Witness from the case's base table.
    Base { value: u64, witness: Witness },
    /// Witness from a direct representation search.
    Scan { value: u64, witness: Witness },
    /// A ternary member of the genus represents `value − k·w²`.
    GenusMember {
        value: u64,
        member: String,
        member_form: QuadForm,
        member_witness: Witness,
        embedding: Substitution,
        shift: Option<Shift>,
    },
    /// A universal subform represents `value`.
    Sublattice {
        value: u64,
        subform: QuadForm,
        subform_witness: Witness,
        embedding: Substitution,
    },
    /// `Q(T·x) = λ·Q(x)` lifts the previous witness to `λ` times its value.
    Scale {
        value: u64,
        lambda: i64,
        substitution: Substitution,
    },
}

impl Step {
    pub fn value(&self) -> u64 {
        match self {
            Step::Base { value, .. }
            | Step::Scan { value, .. }
            | Step::GenusMember { value, .. }
            | Step::Sublattice { value, .. }
            | Step::Scale { value, .. } => *value,
        }
    }

    pub fn is_leaf(&self) -> bool {
        !matches!(self, Step::Scale { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Step::Base { .. } => "base",
            Step::Scan { .. } => "scan",
            Step::GenusMember { shift: Some(s), .. } if s.w != 0 => "shift",
            Step::GenusMember { .. } => "genus",
            Step::Sublattice { .. } => "sublattice",
            Step::Scale { .. } => "scale",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub case: CaseId,
    pub form: QuadForm,
    pub target: u64,
    /// A leaf step, then scaling steps in application order.
    pub steps: Vec<Step>,
    pub witness: Witness,
}

fn check(form: &QuadForm, x: &[i64], index: usize, claimed: u64) -> Result<(), ReplayError> {
    let shape = || ReplayError::Shape { index };
    let actual = form.eval(x).map_err(|_| shape())?;
    if actual != claimed as i128 {
        return Err(ReplayError::ValueMismatch {
            index,
            claimed,
            actual,
        });
    }
    Ok(())
}

fn apply(t: &Substitution, x: &[i64], index: usize) -> Result<Vec<i64>, ReplayError> {
    if t.cols() != x.len() {
        return Err(ReplayError::Shape { index });
    }
    Ok(t.apply(x))
}

/// Recomputes the witness from the steps alone, checking every claimed value
/// by exact evaluation.
pub fn replay(form: &QuadForm, target: u64, steps: &[Step]) -> Result<Witness, ReplayError> {
    let mut x: Option<Vec<i64>> = None;
    for (index, step) in steps.iter().enumerate() {
        if step.is_leaf() != (index == 0) {
            return Err(ReplayError::OutOfPlace { index });
        }
        let next = match step {
            Step::Base { witness, .. } | Step::Scan { witness, .. } => witness.0.clone(),
            Step::GenusMember {
                value,
                member_form,
                member_witness,
                embedding,
                shift,
                ..
            } => {
                let shifted = match shift {
                    Some(s) => value
                        .checked_sub((s.k * s.w * s.w) as u64)
                        .ok_or(ReplayError::Shape { index })?,
                    None => *value,
                };
                check(member_form, &member_witness.0, index, shifted)?;
                let u = apply(embedding, &member_witness.0, index)?;
                match shift {
                    Some(s) => {
                        let mut uw = u;
                        uw.push(s.w);
                        apply(&s.embedding, &uw, index)?
                    }
                    None => u,
                }
            }
            Step::Sublattice {
                value,
                subform,
                subform_witness,
                embedding,
            } => {
                check(subform, &subform_witness.0, index, *value)?;
                apply(embedding, &subform_witness.0, index)?
            }
            Step::Scale {
                value,
                lambda,
                substitution,
            } => {
                let prev = steps[index - 1].value();
                if prev as i128 * *lambda as i128 != *value as i128 {
                    return Err(ReplayError::ValueMismatch {
                        index,
                        claimed: *value,
                        actual: prev as i128 * *lambda as i128,
                    });
                }
                apply(substitution, x.as_ref().expect("leaf came first"), index)?
            }
        };
        check(form, &next, index, step.value())?;
        x = Some(next);
    }
    let x = x.ok_or(ReplayError::Empty)?;
    let reached = steps.last().map(Step::value).unwrap_or(0);
    if reached != target {
        return Err(ReplayError::WrongTarget { reached, target });
    }
    Ok(Witness(x))
}

impl ProofTrace {
    /// Replays the steps and checks that they reproduce the stored witness.
    pub fn replay(&self) -> Result<Witness, ReplayError> {
        let w = replay(&self.form, self.target, &self.steps)?;
        if w != self.witness {
            return Err(ReplayError::WitnessMismatch { replayed: w });
        }
        Ok(w)
    }

    /// The leaf step's kind: what finally certified the descended value.
    pub fn leaf_kind(&self) -> &'static str {
        self.steps.first().map(Step::kind).unwrap_or("empty")
    }

    pub fn scale_count(&self) -> usize {
        self.steps.iter().filter(|s| !s.is_leaf()).count()
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Base { value, witness } => write!(f, "{value}: base table, witness {witness}"),
            Step::Scan { value, witness } => write!(f, "{value}: direct search, witness {witness}"),
            Step::GenusMember {
                value,
                member,
                member_form,
                member_witness,
                embedding,
                shift,
            } => {
                let inner = match shift {
                    Some(s) if s.w != 0 => format!("{value} - {}·{}^2 = {}", s.k, s.w, value - (s.k * s.w * s.w) as u64),
                    _ => value.to_string(),
                };
                write!(
                    f,
                    "{inner}: {member} = {member_form} at {member_witness}, embedded by {embedding}"
                )?;
                if let Some(s) = shift {
                    write!(f, "; then g + {}w^2 at w = {} into f by {}", s.k, s.w, s.embedding)?;
                }
                Ok(())
            }
            Step::Sublattice {
                value,
                subform,
                subform_witness,
                embedding,
            } => write!(f, "{value}: subform {subform} at {subform_witness}, embedded by {embedding}"),
            Step::Scale {
                value,
                lambda,
                substitution,
            } => write!(f, "{value}: scale by {lambda} via {substitution}"),
        }
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "case {}: {} = {}", self.case, self.form, self.target)?;
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "  {}. {s}", i + 1)?;
        }
        write!(f, "witness {}", self.witness)
    }
}
