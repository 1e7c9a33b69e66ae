//! The table of 25 universal binary Hermitian lattices, stored as plain text.
//!
//! Record grammar (one per line, `#` comments and blank lines ignored):
//!
//! ```text
//! record := "m=" INT ";" "blocks=" block ("," block)* ";" "label=" TEXT
//! block  := "U(" INT ")" | "F(" INT ";" INT "," INT ";" INT ")"
//! ```
//!
//! `U(d)` is the unary lattice `⟨d⟩`; `F(a; g_a,g_b; c)` is the formal block
//! `[[a, γ], [γ̄, c]]` with `γ = g_a + g_b·ω`. Whitespace around tokens is
//! ignored; the label runs to the end of the line.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::hermitian::{Block, HermLattice, HermitianError};
use crate::ring::{FieldContext, RingError};

const DEFAULT_CATALOG: &str = include_str!("../data/catalog.txt");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("catalog line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: HermitianError,
    },
    #[error("cannot read catalog: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid selector '{0}': expected <m>:<index>")]
    Selector(String),
    #[error("no catalog entry {0}")]
    UnknownSelector(LatticeRef),
}

/// Address of a catalog entry: field parameter `m` and 1-based index within the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeRef {
    pub m: i64,
    pub index: usize,
}

impl fmt::Display for LatticeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.m, self.index)
    }
}

impl FromStr for LatticeRef {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CatalogError::Selector(s.to_string());
        let (m, i) = s.trim().split_once(':').ok_or_else(bad)?;
        let m: i64 = m.trim().parse().map_err(|_| bad())?;
        let index: usize = i.trim().parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(LatticeRef { m, index })
    }
}

impl Serialize for LatticeRef {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LatticeRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub selector: LatticeRef,
    pub lattice: HermLattice,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

/// Splits at `sep` outside parentheses, producing at most `limit` pieces.
fn split_top_level(s: &str, sep: char, limit: usize) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 && parts.len() + 1 < limit => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_block(text: &str, ctx: &FieldContext) -> Result<Block, String> {
    let text = text.trim();
    let inner = |prefix: &str| {
        text.strip_prefix(prefix)
            .and_then(|r| r.trim_start().strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
    };
    let int = |s: &str| -> Result<i64, String> {
        s.trim()
            .parse()
            .map_err(|_| format!("expected an integer, found '{}'", s.trim()))
    };
    if let Some(body) = inner("U") {
        return Ok(Block::Unary(int(body)?));
    }
    if let Some(body) = inner("F") {
        let fields: Vec<&str> = body.split(';').collect();
        if fields.len() != 3 {
            return Err(format!("formal block '{text}' needs three ';'-separated fields"));
        }
        let (ga, gb) = fields[1]
            .split_once(',')
            .ok_or_else(|| format!("γ in '{text}' must be written g_a,g_b"))?;
        return Ok(Block::FormalPair {
            a: int(fields[0])?,
            gamma: ctx.elem(int(ga)?, int(gb)?),
            c: int(fields[2])?,
        });
    }
    Err(format!("unknown block '{text}'"))
}

fn parse_record(line: &str) -> Result<(FieldContext, Vec<Block>, String), String> {
    let fields = split_top_level(line, ';', 3);
    if fields.len() != 3 {
        return Err("expected 'm=…; blocks=…; label=…'".into());
    }
    let value = |field: &str, key: &str| -> Result<String, String> {
        field
            .trim()
            .strip_prefix(key)
            .and_then(|r| r.trim_start().strip_prefix('='))
            .map(|r| r.trim().to_string())
            .ok_or_else(|| format!("expected field '{key}='"))
    };
    let m_text = value(fields[0], "m")?;
    let m: i64 = m_text
        .parse()
        .map_err(|_| format!("m must be an integer, found '{m_text}'"))?;
    let ctx = FieldContext::new(m).map_err(|e: RingError| e.to_string())?;
    let blocks_text = value(fields[1], "blocks")?;
    let blocks = split_top_level(&blocks_text, ',', usize::MAX)
        .into_iter()
        .map(|b| parse_block(b, &ctx))
        .collect::<Result<Vec<_>, _>>()?;
    let label = value(fields[2], "label")?;
    Ok((ctx, blocks, label))
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let mut entries: Vec<CatalogEntry> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (ctx, blocks, label) = parse_record(line).map_err(|message| CatalogError::Syntax {
                line: i + 1,
                message,
            })?;
            let lattice = HermLattice::new(ctx, blocks, label);
            lattice
                .validate()
                .map_err(|source| CatalogError::Invalid { line: i + 1, source })?;
            let index = entries.iter().filter(|e| e.selector.m == ctx.m()).count() + 1;
            entries.push(CatalogEntry {
                selector: LatticeRef { m: ctx.m(), index },
                lattice,
            });
        }
        Ok(Catalog { entries })
    }

    pub fn load(path: &Path) -> Result<Catalog, CatalogError> {
        Catalog::parse(&std::fs::read_to_string(path)?)
    }

    /// The built-in table of 25 lattices.
    pub fn builtin() -> Catalog {
        Catalog::parse(DEFAULT_CATALOG).expect("built-in catalog is well formed")
    }

    pub fn builtin_text() -> &'static str {
        DEFAULT_CATALOG
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, selector: LatticeRef) -> Result<&HermLattice, CatalogError> {
        self.entries
            .iter()
            .find(|e| e.selector == selector)
            .map(|e| &e.lattice)
            .ok_or(CatalogError::UnknownSelector(selector))
    }

    /// Finds an entry with the same field and blocks (labels are ignored).
    pub fn find(&self, lattice: &HermLattice) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| {
            e.lattice.ctx().m() == lattice.ctx().m() && e.lattice.blocks() == lattice.blocks()
        })
    }
}

/// The 25 lattices of the built-in table, in table order.
pub fn catalog() -> Vec<HermLattice> {
    Catalog::builtin()
        .entries
        .into_iter()
        .map(|e| e.lattice)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_25_valid_binary_entries() {
        let cat = Catalog::builtin();
        assert_eq!(cat.len(), 25);
        for e in cat.entries() {
            assert!(e.lattice.validate().is_ok(), "{}", e.selector);
            assert_eq!(e.lattice.rank(), 2);
        }
        let per_field: Vec<(i64, usize)> = [1, 2, 3, 5, 6, 7, 10, 11, 15, 19, 23, 31]
            .iter()
            .map(|&m| (m, cat.entries().iter().filter(|e| e.selector.m == m).count()))
            .collect();
        assert_eq!(
            per_field,
            vec![(1, 3), (2, 5), (3, 2), (5, 2), (6, 1), (7, 3), (10, 1), (11, 2), (15, 1), (19, 1), (23, 2), (31, 2)]
        );
    }

    #[test]
    fn selected_entries() {
        let cat = Catalog::builtin();
        let l19 = cat.get("19:1".parse().unwrap()).unwrap();
        assert_eq!(l19.blocks(), &[Block::Unary(1), Block::Unary(2)]);
        let l15 = cat.get("15:1".parse().unwrap()).unwrap();
        match &l15.blocks()[1] {
            Block::FormalPair { a, gamma, c } => {
                assert_eq!(a * c, gamma.norm().unwrap());
                assert_eq!(gamma.norm().unwrap(), 4);
            }
            other => panic!("unexpected block {other}"),
        }
        let l31 = cat.get("31:2".parse().unwrap()).unwrap();
        assert_eq!(
            l31.blocks()[1],
            Block::FormalPair {
                a: 2,
                gamma: l31.ctx().elem(-1, 1),
                c: 4
            }
        );
        assert!(matches!(
            cat.get(LatticeRef { m: 19, index: 2 }),
            Err(CatalogError::UnknownSelector(_))
        ));
    }

    #[test]
    fn selectors() {
        assert_eq!("23:2".parse::<LatticeRef>().unwrap(), LatticeRef { m: 23, index: 2 });
        assert!("23".parse::<LatticeRef>().is_err());
        assert!("23:0".parse::<LatticeRef>().is_err());
        assert_eq!(LatticeRef { m: 7, index: 3 }.to_string(), "7:3");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Catalog::parse("# header\nm=15; blocks=U(1),F(2; 0,1; 3); label=bad").unwrap_err();
        assert!(matches!(
            err,
            CatalogError::Invalid {
                line: 2,
                source: HermitianError::FormalBlockNotSingular { a: 2, c: 3, norm: 4 }
            }
        ));
        let err = Catalog::parse("m=12; blocks=U(1); label=x").unwrap_err();
        assert!(matches!(err, CatalogError::Syntax { line: 1, .. }));
        let err = Catalog::parse("m=1; blocks=U(1),V(2); label=x").unwrap_err();
        assert!(matches!(err, CatalogError::Syntax { line: 1, .. }));
        let err = Catalog::parse("m=1; blocks=U(0); label=x").unwrap_err();
        assert!(matches!(
            err,
            CatalogError::Invalid {
                source: HermitianError::NotPositiveDefinite(_),
                ..
            }
        ));
    }

    #[test]
    fn labels_may_contain_separators() {
        let cat = Catalog::parse("m=5; blocks = U(1) , F( 2 ; -1 , 1 ; 3 ) ; label=a; b, c").unwrap();
        assert_eq!(cat.entries()[0].lattice.label(), "a; b, c");
    }
}
