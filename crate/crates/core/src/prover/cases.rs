//! Case identifiers and the per-case proof data.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::catalog::{Catalog, LatticeRef};
use crate::hermitian::HermLattice;
use crate::qform::CongruenceFilter;
use crate::transfer::PrintedForm;

use super::ProverError;

/// The seven lattices whose universality needs a descent argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HardCase {
    F72,
    F73,
    F11,
    F15,
    F19,
    F23,
    F31,
}

impl HardCase {
    pub const ALL: [HardCase; 7] = [
        HardCase::F72,
        HardCase::F73,
        HardCase::F11,
        HardCase::F15,
        HardCase::F19,
        HardCase::F23,
        HardCase::F31,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            HardCase::F72 => "f72",
            HardCase::F73 => "f73",
            HardCase::F11 => "f11",
            HardCase::F15 => "f15",
            HardCase::F19 => "f19",
            HardCase::F23 => "f23",
            HardCase::F31 => "f31",
        }
    }

    pub fn printed(self) -> PrintedForm {
        match self {
            HardCase::F72 => PrintedForm::F72,
            HardCase::F73 => PrintedForm::F73,
            HardCase::F11 => PrintedForm::F11,
            HardCase::F15 => PrintedForm::F15,
            HardCase::F19 => PrintedForm::F19,
            HardCase::F23 => PrintedForm::F23,
            HardCase::F31 => PrintedForm::F31,
        }
    }
}

/// How a catalog lattice is shown to be universal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    /// Descent through ternary subforms, shifts and scalings.
    Hard(HardCase),
    /// Diagonal transfer form, checked by direct scan.
    Ramanujan(LatticeRef),
    /// The transfer contains a universal diagonal quaternary subform.
    Sublattice(LatticeRef),
    /// Transfer in a one-class genus, checked by direct scan.
    OneClass(LatticeRef),
}

fn r(m: i64, index: usize) -> LatticeRef {
    LatticeRef { m, index }
}

impl CaseId {
    /// The case of a built-in catalog selector.
    pub fn for_selector(sel: LatticeRef) -> Option<CaseId> {
        use HardCase::*;
        let case = match (sel.m, sel.index) {
            (1, 1..=3) | (2, 1..=5) | (5, 1) | (6, 1) | (10, 1) => CaseId::Ramanujan(sel),
            (3, 1..=2) | (5, 2) => CaseId::Sublattice(sel),
            (7, 1) | (11, 2) => CaseId::OneClass(sel),
            (7, 2) => CaseId::Hard(F72),
            (7, 3) => CaseId::Hard(F73),
            (11, 1) => CaseId::Hard(F11),
            (15, 1) => CaseId::Hard(F15),
            (19, 1) => CaseId::Hard(F19),
            (23, 1..=2) => CaseId::Hard(F23),
            (31, 1..=2) => CaseId::Hard(F31),
            _ => return None,
        };
        Some(case)
    }

    /// The case of a lattice, matched by field and blocks against the built-in catalog.
    pub fn for_lattice(lattice: &HermLattice) -> Option<CaseId> {
        Catalog::builtin()
            .find(lattice)
            .and_then(|e| CaseId::for_selector(e.selector))
    }

    /// All distinct cases of the built-in catalog, in table order.
    pub fn all() -> Vec<CaseId> {
        let mut out: Vec<CaseId> = Vec::new();
        for e in Catalog::builtin().entries() {
            let c = CaseId::for_selector(e.selector).expect("every built-in entry has a case");
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    /// Built-in selectors covered by this case.
    pub fn lattices(self) -> Vec<LatticeRef> {
        match self {
            CaseId::Hard(h) => hard_spec(h).lattices,
            CaseId::Ramanujan(s) | CaseId::Sublattice(s) | CaseId::OneClass(s) => vec![s],
        }
    }

    /// The explicitly written quaternary form attached to this case, if any.
    pub fn printed(self) -> Option<PrintedForm> {
        match self {
            CaseId::Hard(h) => Some(h.printed()),
            CaseId::Ramanujan(s) if s == r(6, 1) => Some(PrintedForm::Diagonal6),
            CaseId::Ramanujan(s) if s == r(10, 1) => Some(PrintedForm::Diagonal10),
            CaseId::OneClass(s) if s == r(7, 1) => Some(PrintedForm::OneClass7),
            CaseId::OneClass(s) if s == r(11, 2) => Some(PrintedForm::OneClass11),
            _ => None,
        }
    }

    pub fn is_hard(self) -> bool {
        matches!(self, CaseId::Hard(_))
    }
}

/// The printed form of a case.
pub fn expected_form(case: CaseId) -> Result<crate::qform::QuadForm, ProverError> {
    case.printed()
        .map(PrintedForm::form)
        .ok_or_else(|| ProverError::UnknownCase(case.to_string()))
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseId::Hard(h) => f.write_str(h.tag()),
            CaseId::Ramanujan(s) => write!(f, "ramanujan {s}"),
            CaseId::Sublattice(s) => write!(f, "sublattice {s}"),
            CaseId::OneClass(s) => write!(f, "one-class {s}"),
        }
    }
}

impl FromStr for CaseId {
    type Err = ProverError;

    /// Accepts `f72`, `f7,2`, …, `f31`, a built-in selector such as `23:2`,
    /// or the displayed form `sublattice 3:1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        let unknown = || ProverError::UnknownCase(s.to_string());
        let compact: String = t.chars().filter(|c| !matches!(c, ',' | '_' | ' ')).collect();
        if let Some(h) = HardCase::ALL.iter().find(|h| h.tag() == compact) {
            return Ok(CaseId::Hard(*h));
        }
        let selector = t
            .rsplit(' ')
            .next()
            .and_then(|sel| sel.parse::<LatticeRef>().ok())
            .ok_or_else(unknown)?;
        let case = CaseId::for_selector(selector).ok_or_else(unknown)?;
        if t.contains(' ') && case.to_string() != t {
            return Err(unknown());
        }
        Ok(case)
    }
}

impl Serialize for CaseId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CaseId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Subtracting `k·w²` for `n` in `applies` with `n ≥ min_n`.
#[derive(Debug, Clone)]
pub(crate) struct ShiftRule {
    pub w: i64,
    pub applies: CongruenceFilter,
    pub min_n: u64,
}

#[derive(Debug, Clone)]
pub(crate) enum ScalingSource {
    /// Rows of an explicit substitution on the printed form.
    Printed([[i64; 4]; 4]),
    /// `(x, y) ↦ (c·y, x)` on a diagonal lattice `⟨1, c⟩`.
    Swap(LatticeRef),
    /// Multiplication by `√−m` on a lattice.
    SqrtM(LatticeRef),
}

#[derive(Debug, Clone)]
pub(crate) struct ScalingSpec {
    pub lambda: i64,
    pub source: ScalingSource,
}

#[derive(Debug, Clone)]
pub(crate) struct HardSpec {
    pub lattices: Vec<LatticeRef>,
    /// A ternary form `g` with `f ≥ g ⊥ ⟨k⟩`, or `None` when the members
    /// embed into `f` directly.
    pub carrier: Option<(&'static str, i64)>,
    pub members: Vec<&'static str>,
    pub genus: CongruenceFilter,
    pub shifts: Vec<ShiftRule>,
    pub scalings: Vec<ScalingSpec>,
    /// `f` is checked to represent every `n` up to this bound.
    pub base_bound: u64,
}

fn res(modulus: u64, residues: &[u64]) -> CongruenceFilter {
    CongruenceFilter::residues(modulus, residues)
}

pub(crate) fn hard_spec(case: HardCase) -> HardSpec {
    use ScalingSource::*;
    match case {
        HardCase::F72 => HardSpec {
            lattices: vec![r(7, 2)],
            carrier: Some(("x^2+2y^2+2z^2+xy", 14)),
            members: vec!["x^2+9y^2+15z^2+6yz", "3x^2+6y^2+7z^2"],
            genus: res(3, &[0, 1]).excluding(&[7]),
            shifts: vec![ShiftRule {
                w: 1,
                applies: res(3, &[2]).excluding(&[7]),
                min_n: 15,
            }],
            scalings: vec![ScalingSpec {
                lambda: 7,
                source: SqrtM(r(7, 2)),
            }],
            base_bound: 14,
        },
        HardCase::F73 => HardSpec {
            lattices: vec![r(7, 3)],
            carrier: None,
            members: vec!["x^2+3y^2+7z^2", "2x^2+3y^2+4z^2+2xz"],
            genus: CongruenceFilter::all().excluding(&[3]),
            shifts: vec![],
            scalings: vec![ScalingSpec {
                lambda: 3,
                source: Swap(r(7, 3)),
            }],
            base_bound: 0,
        },
        HardCase::F11 => HardSpec {
            lattices: vec![r(11, 1)],
            carrier: None,
            members: vec!["x^2+y^2+11z^2", "x^2+3y^2+4z^2+2yz"],
            genus: CongruenceFilter::all().excluding(&[11]),
            shifts: vec![],
            scalings: vec![ScalingSpec {
                lambda: 11,
                source: SqrtM(r(11, 1)),
            }],
            base_bound: 0,
        },
        HardCase::F15 => HardSpec {
            lattices: vec![r(15, 1)],
            carrier: None,
            members: vec!["x^2+2y^2+8z^2+2yz", "x^2+3y^2+5z^2"],
            genus: CongruenceFilter::all().excluding(&[5]),
            shifts: vec![],
            scalings: vec![ScalingSpec {
                lambda: 5,
                source: Printed([[0, 2, 3, 0], [1, 0, 0, 3], [1, 0, 0, -2], [0, 1, -1, 0]]),
            }],
            base_bound: 0,
        },
        HardCase::F19 => HardSpec {
            lattices: vec![r(19, 1)],
            carrier: Some(("x^2+2y^2+5z^2+xz", 38)),
            members: vec!["2x^2+5y^2+25z^2+5yz", "3x^2+7y^2+13z^2+3yz+xz+3xy"],
            // odd n with n mod 5 in {0, 2, 3}
            genus: res(10, &[3, 5, 7]),
            shifts: vec![
                ShiftRule {
                    w: 1,
                    applies: res(10, &[1]),
                    min_n: 41,
                },
                ShiftRule {
                    w: 2,
                    applies: res(10, &[9]),
                    min_n: 154,
                },
            ],
            scalings: vec![ScalingSpec {
                lambda: 2,
                source: Swap(r(19, 1)),
            }],
            base_bound: 154,
        },
        HardCase::F23 => HardSpec {
            lattices: vec![r(23, 1), r(23, 2)],
            carrier: Some(("x^2+2y^2+3z^2+yz", 23)),
            members: vec!["x^2+8y^2+12z^2+4yz", "4x^2+4y^2+9z^2+4yz+4xz+4xy"],
            genus: res(4, &[0, 1]).excluding(&[23]),
            shifts: vec![ShiftRule {
                w: 1,
                applies: res(4, &[3]).excluding(&[23]),
                min_n: 24,
            }],
            scalings: vec![
                ScalingSpec {
                    lambda: 2,
                    source: Printed([[0, 1, 0, 0], [0, 0, 2, 0], [2, 0, 0, 0], [0, 0, 0, 1]]),
                },
                ScalingSpec {
                    lambda: 23,
                    source: SqrtM(r(23, 1)),
                },
            ],
            base_bound: 23,
        },
        HardCase::F31 => HardSpec {
            lattices: vec![r(31, 1), r(31, 2)],
            carrier: Some(("x^2+2y^2+4z^2+yz", 31)),
            members: vec![
                "x^2+4y^2+32z^2+4yz",
                "x^2+8y^2+16z^2+4yz",
                "4x^2+5y^2+8z^2+4yz+4xz",
            ],
            genus: res(4, &[0, 1]).excluding(&[31]),
            shifts: vec![ShiftRule {
                w: 1,
                applies: res(4, &[3]).excluding(&[31]),
                min_n: 32,
            }],
            scalings: vec![
                ScalingSpec {
                    lambda: 2,
                    source: Printed([[0, 2, 0, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 0, 2, 0]]),
                },
                ScalingSpec {
                    lambda: 31,
                    source: SqrtM(r(31, 1)),
                },
            ],
            base_bound: 31,
        },
    }
}

/// The universal diagonal subform used by a sublattice case.
pub(crate) fn sublattice_subform(sel: LatticeRef) -> Option<&'static str> {
    match (sel.m, sel.index) {
        (3, 1) => Some("x^2+3y^2+z^2+3w^2"),
        (3, 2) => Some("x^2+3y^2+2z^2+6w^2"),
        (5, 2) => Some("x^2+5y^2+2z^2+10w^2"),
        _ => None,
    }
}
