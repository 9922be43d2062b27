//! Report assembly: stable machine-readable documents (versioned schema,
//! deterministic field order, rationals as strings) and plain-text tables.

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::linalg::Q;
use crate::model::Model;
use crate::resolution::{DimensionReport, LesReport};
use crate::suites::SuiteReport;
use crate::symbol::SymbolReport;
use crate::torus::{MonodromyInput, PairingReport};

pub const SCHEMA: &str = "sympcoh-report/1";

#[derive(Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelIdentity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    pub results: Value,
}

#[derive(Serialize)]
pub struct ModelIdentity {
    pub name: String,
    pub path: String,
    pub sha256: String,
}

pub fn identity(name: &str, path: &str, text: &str) -> ModelIdentity {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect::<String>();
    ModelIdentity {
        name: name.to_string(),
        path: path.to_string(),
        sha256,
    }
}

fn q_str(q: &Q) -> String {
    q.to_string()
}

impl Report {
    pub fn machine(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

/// Betti numbers, filtered tables for one or all p, and the primitive tables.
pub fn dims_report(m: &Model, p: Option<usize>, command: String, ident: ModelIdentity) -> Result<Report> {
    let betti = m.betti_numbers();
    let ps: Vec<usize> = match p {
        Some(p) => vec![p],
        None => (0..=m.n()).collect(),
    };
    let mut filtered = Vec::new();
    for p in ps {
        let f = crate::filtered::filtered_cohomology(m, p)?;
        // The minus row is reported top degree first, following the
        // direction of the bottom row of the complex.
        let minus_desc: Vec<usize> = f.minus_dims.iter().rev().copied().collect();
        filtered.push(json!({
            "p": p,
            "plus": f.plus_dims,
            "minus_descending": minus_desc,
        }));
    }
    let prim = crate::filtered::primitive_cohomologies(m)?;
    let results = json!({
        "betti": betti,
        "filtered": filtered,
        "primitive": {
            "ph_dplus": prim.ph_dplus,
            "ph_dminus": prim.ph_dminus,
            "ph_dd_lambda": prim.ph_dd_lambda,
            "ph_d_plus_d_lambda": prim.ph_d_plus_d_lambda,
        },
    });
    Ok(Report {
        schema: SCHEMA,
        command,
        model: Some(ident),
        passed: None,
        results,
    })
}

pub fn dims_text(report: &Report) -> String {
    let r = &report.results;
    let mut out = String::new();
    out.push_str(&format!("betti: {}\n", r["betti"]));
    for f in r["filtered"].as_array().unwrap() {
        out.push_str(&format!(
            "F^{} H+: {}  H-: {}\n",
            f["p"], f["plus"], f["minus_descending"]
        ));
    }
    let p = &r["primitive"];
    out.push_str(&format!("PH_d+      : {}\n", p["ph_dplus"]));
    out.push_str(&format!("PH_d-      : {}\n", p["ph_dminus"]));
    out.push_str(&format!("PH_ddL     : {}\n", p["ph_dd_lambda"]));
    out.push_str(&format!("PH_d+dL    : {}\n", p["ph_d_plus_d_lambda"]));
    out
}

pub fn ring_report(m: &Model, p: usize, command: String, ident: ModelIdentity) -> Result<Report> {
    let table = crate::ainfty::ring_table(m, p, 1)?;
    let blocks: Vec<Value> = table
        .blocks
        .iter()
        .map(|b| {
            let entries: Vec<Vec<Vec<String>>> = b
                .entries
                .iter()
                .map(|row| row.iter().map(|v| v.iter().map(q_str).collect()).collect())
                .collect();
            json!({
                "j": b.j,
                "k": b.k,
                "image_dim": b.image_dim,
                "products": entries,
            })
        })
        .collect();
    let results = json!({
        "p": p,
        "dims": table.dims,
        "bases": table.bases,
        "blocks": blocks,
    });
    Ok(Report {
        schema: SCHEMA,
        command,
        model: Some(ident),
        passed: None,
        results,
    })
}

pub fn ring_text(report: &Report) -> String {
    let r = &report.results;
    let mut out = String::new();
    out.push_str(&format!("p = {}, grading dims: {}\n", r["p"], r["dims"]));
    for b in r["blocks"].as_array().unwrap() {
        let products = b["products"].as_array().unwrap();
        let nonzero = products
            .iter()
            .flat_map(|row| row.as_array().unwrap())
            .any(|v| v.as_array().unwrap().iter().any(|c| c.as_str() != Some("0")));
        if nonzero {
            out.push_str(&format!(
                "block ({}, {}) -> {}: image dim {}\n",
                b["j"],
                b["k"],
                b["j"].as_u64().unwrap() + b["k"].as_u64().unwrap(),
                b["image_dim"]
            ));
        }
    }
    out
}

pub fn lefschetz_report(
    m: &Model,
    r: usize,
    command: String,
    ident: ModelIdentity,
) -> Result<Report> {
    let a = crate::resolution::lefschetz_map_analysis(m, r)?;
    let records: Vec<Value> = a
        .records
        .iter()
        .map(|rec| {
            json!({
                "k": rec.k,
                "rank": rec.rank,
                "kernel": rec.kernel_dim,
                "cokernel": rec.cokernel_dim,
            })
        })
        .collect();
    Ok(Report {
        schema: SCHEMA,
        command,
        model: Some(ident),
        passed: None,
        results: json!({"r": r, "records": records}),
    })
}

pub fn les_json(rep: &LesReport) -> Value {
    json!({
        "description": rep.description,
        "chain_ok": rep.chain_ok,
        "all_exact": rep.all_exact,
        "nodes": rep.nodes.iter().map(|n| json!({
            "label": n.label,
            "dim": n.dim,
            "incoming_rank": n.incoming_rank,
            "outgoing_nullity": n.outgoing_nullity,
            "exact": n.exact,
        })).collect::<Vec<_>>(),
        "arrows": rep.arrows.iter().map(|a| json!({
            "label": a.label,
            "rank": a.rank,
        })).collect::<Vec<_>>(),
    })
}

pub fn suite_json(rep: &SuiteReport) -> Value {
    json!({
        "name": rep.name,
        "samples": rep.samples,
        "skipped": rep.skipped,
        "failures": rep.failures,
        "passed": rep.passed(),
    })
}

pub fn dimensions_json(rep: &DimensionReport) -> Value {
    json!({
        "model": rep.model,
        "passed": rep.passed(),
        "failing": rep.failing().iter().map(|c| json!({
            "description": c.description,
            "expected": c.expected,
            "got": c.got,
        })).collect::<Vec<_>>(),
        "checks": rep.checks.len(),
    })
}

pub fn symbol_report(rep: &SymbolReport, command: String) -> Report {
    let positions: Vec<Value> = rep
        .positions
        .iter()
        .map(|p| {
            json!({
                "label": p.label,
                "dim": p.space_dim,
                "incoming_rank": p.incoming_rank,
                "outgoing_rank": p.outgoing_rank,
                "outgoing_nullity": p.outgoing_nullity,
                "exact": p.exact,
            })
        })
        .collect();
    Report {
        schema: SCHEMA,
        command,
        model: None,
        passed: Some(rep.all_exact),
        results: json!({
            "dim": rep.dim,
            "p": rep.p,
            "positions": positions,
        }),
    }
}

pub fn symbol_text(rep: &SymbolReport) -> String {
    let mut out = format!("symbol sequence 2n={} p={}\n", rep.dim, rep.p);
    for p in &rep.positions {
        out.push_str(&format!(
            "{:<22} dim {:>3}  in-rank {:>3}  out-nullity {:>3}  {}\n",
            p.label,
            p.space_dim,
            p.incoming_rank,
            p.outgoing_nullity,
            if p.exact { "exact" } else { "NOT EXACT" }
        ));
    }
    out
}

pub fn torus_report(
    input: &MonodromyInput,
    pairing: Option<&PairingReport>,
    command: String,
    ident: ModelIdentity,
) -> Report {
    let inv = &input.model.invariants;
    let dims = &input.model.dims;
    let mut results = json!({
        "p": inv.p,
        "q": inv.q,
        "dim_ker": inv.q_plus_p,
        "dim_ker_cap_im": inv.q_minus_p,
        "chains": inv.chains.iter().map(|c| c.len()).collect::<Vec<_>>(),
        "betti": dims.betti,
        "ph1": dims.ph1,
        "ph2": dims.ph2,
    });
    if let Some(p) = pairing {
        results["pairing"] = json!({
            "dual_basis": p.dual_labels,
            "image_dim": p.image_dim,
            "products": p.records.iter().map(|r| json!({
                "left": r.left,
                "right": r.right,
                "coords": r.coords.iter().map(q_str).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
    }
    Report {
        schema: SCHEMA,
        command,
        model: Some(ident),
        passed: None,
        results,
    }
}

pub fn torus_text(report: &Report) -> String {
    let r = &report.results;
    let mut out = String::new();
    out.push_str(&format!(
        "p = {}, q = {}; betti = {}; PH1 = {}, PH2 = {}\n",
        r["p"], r["q"], r["betti"], r["ph1"], r["ph2"]
    ));
    if let Some(p) = r.get("pairing") {
        out.push_str(&format!(
            "pairing image dim = {} against duals {}\n",
            p["image_dim"], p["dual_basis"]
        ));
        for rec in p["products"].as_array().unwrap() {
            let coords = rec["coords"].as_array().unwrap();
            if coords.iter().any(|c| c.as_str() != Some("0")) {
                out.push_str(&format!(
                    "  {} x {} -> {:?}\n",
                    rec["left"], rec["right"], coords
                ));
            }
        }
    }
    out
}
