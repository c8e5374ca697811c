//! The operations behind the CLI subcommands. Each returns a [`Report`]
//! whose `status` decides the process exit code; the binary and the C
//! bindings only add argument parsing and I/O around these.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::complex::{Ambient, SetFamily};
use crate::config::Caps;
use crate::corpus::{run_corpus, CorpusConfig};
use crate::error::{Error, Result};
use crate::helly::{fractional_helly_check, pq_condition, transversal_number};
use crate::homology::{betti_numbers_field, homology, HomologyResult};
use crate::io::family_to_json;
use crate::linalg::Characteristic;
use crate::nerve::{is_k_acyclic_family, leray_number, nerve, AcyclicityReport};
use crate::report::Status;
use crate::spectral::{nerve_theorem_report, spectral_report, FamilyContext};

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub report: Value,
}

impl Report {
    fn new(command: &str, status: Status, report: impl Serialize) -> Result<Self> {
        Ok(Report {
            command: command.into(),
            status,
            error: None,
            report: serde_json::to_value(report)?,
        })
    }

    pub fn from_error(command: &str, e: &Error) -> Self {
        Report {
            command: command.into(),
            status: Status::of_error(e),
            error: Some(e.to_string()),
            report: Value::Null,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn verdict_status(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::VerdictFailure
    }
}

#[derive(Serialize)]
struct HomologyEntry {
    name: String,
    cells: usize,
    homology: HomologyResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    field_betti: Option<Vec<usize>>,
}

/// Integer homology (unreduced) of the ambient complex, every member, and
/// the union; with `field`, also the Betti numbers over that field.
pub fn cmd_homology(family: &SetFamily, field: Option<Characteristic>, caps: &Caps) -> Result<Report> {
    let mut entries = Vec::new();
    let mut push = |name: String, cells: &crate::complex::CellSet| -> Result<()> {
        crate::error::check_cap("cells in one complex", cells.len(), caps.max_cells)?;
        let c = family.chain_complex(cells)?;
        entries.push(HomologyEntry {
            name,
            cells: cells.len(),
            homology: homology(&c, false)?,
            field_betti: field.map(|ch| betti_numbers_field(&c, ch)),
        });
        Ok(())
    };
    push("ambient".into(), &family.ambient().all_cells())?;
    for (name, m) in family.names().iter().zip(family.members()) {
        push(format!("member {name}"), m)?;
    }
    if !family.is_empty() {
        push("union".into(), &family.union_all())?;
    }
    Report::new("homology", Status::Ok, json!({ "field": field, "complexes": entries }))
}

pub fn cmd_nerve(family: &SetFamily, caps: &Caps) -> Result<Report> {
    let n = nerve(family, caps)?;
    let faces: Vec<Value> = n
        .faces()
        .map(|f| {
            let cells = n.witness(family, &f).map(|w| w.len()).unwrap_or(0);
            let witness = n.witness_cell(&f).map(|c| family.ambient().label(c));
            json!({
                "face": f,
                "members": f.iter().map(|&i| &family.names()[i]).collect::<Vec<_>>(),
                "intersection_cells": cells,
                "witness": witness,
            })
        })
        .collect();
    let k = n.complex();
    Report::new(
        "nerve",
        Status::Ok,
        json!({
            "dim": k.dim(),
            "vertices": k.vertices(),
            "facets": k.facets(),
            "faces": faces,
            "homology": homology(&k.chain_complex(), false)?,
        }),
    )
}

/// Leray number of the nerve; a simplicial document without members is
/// read as the complex itself.
pub fn cmd_leray(family: &SetFamily, caps: &Caps) -> Result<Report> {
    let (target, r) = match family.ambient() {
        Ambient::Simplicial(k) if family.is_empty() => ("ambient", leray_number(k, caps)?),
        _ => ("nerve", leray_number(nerve(family, caps)?.complex(), caps)?),
    };
    Report::new("leray", Status::Ok, json!({ "complex": target, "result": r }))
}

pub fn cmd_acyclic(family: &SetFamily, k: usize, caps: &Caps) -> Result<Report> {
    let r = is_k_acyclic_family(family, k, caps)?;
    Report::new("acyclic", verdict_status(r.verdict), r)
}

/// Fractional Helly statistics after checking the (k-|G|)-acyclicity
/// hypothesis (and k >= d).
pub fn cmd_fh(family: &SetFamily, k: usize, caps: &Caps) -> Result<Report> {
    let acyc = is_k_acyclic_family(family, k, caps)?;
    let d = family.ambient().homological_dim();
    let hypothesis = acyc.verdict && k >= d;
    let fh = fractional_helly_check(family, k, Some(hypothesis), caps)?;
    let status = if !hypothesis {
        Status::HypothesisFailure
    } else {
        verdict_status(fh.verdict)
    };
    let counterexample = (status == Status::VerdictFailure)
        .then(|| serde_json::from_str::<Value>(&family_to_json(family)).expect("valid json"));
    Report::new(
        "fh",
        status,
        json!({
            "homological_dim": d,
            "acyclicity": acyc,
            "fractional_helly": fh,
            "counterexample": counterexample,
        }),
    )
}

pub fn cmd_pq(family: &SetFamily, p: usize, q: usize, caps: &Caps) -> Result<Report> {
    let pq = pq_condition(family, p, q, caps)?;
    let tau = transversal_number(family, caps)?;
    Report::new("pq", verdict_status(pq.holds), json!({ "pq": pq, "transversal": tau }))
}

/// Spectral pages of the Mayer-Vietoris double complex. With `k`, claim
/// (ii) and the union/nerve comparison are evaluated when the family is
/// (k-|G|)-acyclic.
pub fn cmd_spectral(family: &SetFamily, k: Option<usize>, field: Characteristic, caps: &Caps) -> Result<Report> {
    let mut ctx = FamilyContext::new(family, caps)?;
    let acyclic = match k {
        Some(k) => Some(AcyclicityReport::from_table(ctx.table()?, k)),
        None => None,
    };
    let hypothesis = acyclic.as_ref().map(|a| a.verdict);
    let r = spectral_report(&ctx, k.filter(|_| hypothesis == Some(true)), field)?;
    let status = if !r.failures.is_empty() {
        Status::VerdictFailure
    } else if hypothesis == Some(false) {
        Status::HypothesisFailure
    } else {
        Status::Ok
    };
    Report::new("spectral", status, json!({ "acyclicity": acyclic, "spectral": r }))
}

pub fn cmd_nervethm(family: &SetFamily, k: usize, caps: &Caps) -> Result<Report> {
    let mut ctx = FamilyContext::new(family, caps)?;
    let r = nerve_theorem_report(&mut ctx, k)?;
    let status = match r.verdict {
        None => Status::HypothesisFailure,
        Some(ok) => verdict_status(ok),
    };
    Report::new("nervethm", status, r)
}

/// Runs a corpus; `seed_offset` shifts every group's base seed.
pub fn cmd_corpus(cfg: &CorpusConfig, seed_offset: u64, out: Option<&Path>) -> Result<Report> {
    let mut cfg = cfg.clone();
    for g in &mut cfg.groups {
        g.spec.seed = g.spec.seed.wrapping_add(seed_offset);
    }
    let m = run_corpus(&cfg, out)?;
    Report::new("corpus", m.status, m)
}
