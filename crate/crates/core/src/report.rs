//! The machine-readable verification report (schema version 1).
//!
//! The layout is documented in `docs/report-schema.md`. Every field except
//! the `elapsed_ms` timings is a deterministic function of the catalog and
//! the configuration.

use serde::{Deserialize, Serialize};

use crate::prover::{CaseId, VerificationSummary};
use crate::qform::Substitution;

pub const SCHEMA_VERSION: u32 = 1;

/// A printed scaling substitution and the outcome of its symbolic check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrintedSubstitutionCheck {
    pub case: CaseId,
    pub lambda: i64,
    pub printed: Substitution,
    pub holds: bool,
    /// The substitution used by the prover: the printed one when it holds,
    /// otherwise the result of the search.
    pub used: Option<Substitution>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub generator: String,
    pub printed_substitutions: Vec<PrintedSubstitutionCheck>,
    #[serde(flatten)]
    pub summary: VerificationSummary,
}

impl Report {
    pub fn new(summary: VerificationSummary) -> Report {
        let printed_substitutions = summary
            .cases
            .iter()
            .flat_map(|c| {
                c.scalings.iter().filter_map(move |s| {
                    Some(PrintedSubstitutionCheck {
                        case: c.case,
                        lambda: s.lambda,
                        printed: s.printed.clone()?,
                        holds: s.printed_holds?,
                        used: s.substitution.clone(),
                    })
                })
            })
            .collect();
        Report {
            schema: SCHEMA_VERSION,
            generator: format!("hermform {}", env!("CARGO_PKG_VERSION")),
            printed_substitutions,
            summary,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Removes every `elapsed_ms` field, leaving the deterministic part.
pub fn strip_timing(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timing);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}
