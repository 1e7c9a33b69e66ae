//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string, so
//! the page needs no generated TypeScript types.

use std::cell::RefCell;
use std::collections::HashMap;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use hermform::catalog::{Catalog, LatticeRef};
use hermform::prover::{CaseId, CaseProver, ProverConfig};
use hermform::qform::{represented_set, CongruenceFilter, QuadForm};
use hermform::transfer::{match_transfer, transfer, MatchReport};

/// Largest bound accepted by [`represented_grid`].
pub const GRID_LIMIT: u32 = 5000;

/// Genus-scan bound for provers built in the browser; larger targets fall
/// back to direct searches for the ternary members.
const BROWSER_GENUS_LIMIT: u64 = 1000;

thread_local! {
    static PROVERS: RefCell<HashMap<CaseId, CaseProver>> = RefCell::new(HashMap::new());
}

fn err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn catalog_value() -> Value {
    let entries: Vec<Value> = Catalog::builtin()
        .entries()
        .iter()
        .map(|e| {
            json!({
                "selector": e.selector.to_string(),
                "m": e.lattice.ctx().m(),
                "label": e.lattice.label(),
                "case": CaseId::for_lattice(&e.lattice).map(|c| c.to_string()),
            })
        })
        .collect();
    Value::Array(entries)
}

/// The 25 built-in lattices as `[{selector, m, label, case}]`.
#[wasm_bindgen]
pub fn catalog_json() -> String {
    catalog_value().to_string()
}

pub fn transfer_value(selector: &str) -> Result<Value, String> {
    let sel: LatticeRef = selector.parse().map_err(|e| format!("{e}"))?;
    let catalog = Catalog::builtin();
    let lattice = catalog.get(sel).map_err(|e| e.to_string())?;
    let q = transfer(lattice).map_err(|e| e.to_string())?;
    let printed = CaseId::for_lattice(lattice).and_then(CaseId::printed);
    let matched = printed.map(|p| match match_transfer(lattice, &p.form(), 500) {
        Ok(MatchReport::SignedPermutation { substitution }) => json!({
            "name": p.name(),
            "form": p.text(),
            "kind": "signed permutation",
            "substitution": substitution.to_string(),
        }),
        Ok(MatchReport::RepresentedSets { limit }) => json!({
            "name": p.name(),
            "form": p.text(),
            "kind": format!("represented sets up to {limit}"),
        }),
        Err(e) => json!({ "name": p.name(), "form": p.text(), "error": e.to_string() }),
    });
    Ok(json!({
        "selector": sel.to_string(),
        "label": lattice.label(),
        "transfer": q.to_string(),
        "printed": matched,
    }))
}

/// Transfer form of a catalog entry and its match against the printed form.
#[wasm_bindgen]
pub fn transfer_form(selector: &str) -> Result<String, JsValue> {
    transfer_value(selector).map(|v| v.to_string()).map_err(err)
}

pub fn grid_value(form: &str, limit: u32) -> Result<Value, String> {
    if limit == 0 || limit > GRID_LIMIT {
        return Err(format!("limit must be between 1 and {GRID_LIMIT}"));
    }
    let q: QuadForm = form.parse().map_err(|e| format!("{e}"))?;
    let set = represented_set(&q, limit as u64).map_err(|e| e.to_string())?;
    let represented: Vec<bool> = (1..=limit as u64).map(|n| set.contains(n)).collect();
    Ok(json!({
        "form": q.to_string(),
        "limit": limit,
        "represented": represented,
        "first_exception": set.first_missing(&CongruenceFilter::all()),
    }))
}

/// Which of `1..=limit` a form represents.
#[wasm_bindgen]
pub fn represented_grid(form: &str, limit: u32) -> Result<String, JsValue> {
    grid_value(form, limit).map(|v| v.to_string()).map_err(err)
}

pub fn prove_value(case: &str, n: u32) -> Result<Value, String> {
    let case: CaseId = case.parse().map_err(|e| format!("{e}"))?;
    PROVERS.with(|cell| {
        let mut provers = cell.borrow_mut();
        if !provers.contains_key(&case) {
            let config = ProverConfig {
                limit: 1000,
                genus_limit: BROWSER_GENUS_LIMIT,
                ..ProverConfig::default()
            };
            let p = CaseProver::build(case, &config).map_err(|e| e.to_string())?;
            provers.insert(case, p);
        }
        let prover = &provers[&case];
        let trace = prover.prove(n as u64).map_err(|e| e.to_string())?;
        let witness = trace.replay().map_err(|e| e.to_string())?;
        Ok(json!({
            "text": trace.to_string(),
            "witness": witness.0,
            "trace": trace,
        }))
    })
}

/// Proof trace for `n` in a case (`f23`, `7:2`, ...), replayed before return.
#[wasm_bindgen]
pub fn prove_trace(case: &str, n: u32) -> Result<String, JsValue> {
    prove_value(case, n).map(|v| v.to_string()).map_err(err)
}
