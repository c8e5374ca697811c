//! Seeded corpus runs: generate every configured family, push it through
//! the full pipeline, and collect the results in a manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::SetFamily;
use crate::config::Caps;
use crate::error::{malformed, Error, Result};
use crate::generators::{generate, GeneratorSpec};
use crate::helly::{fractional_helly_check, intersection_depth, FractionalHellyReport};
use crate::io::write_family;
use crate::linalg::Characteristic;
use crate::nerve::{good_cover_from_table, leray_number, AcyclicityReport};
use crate::report::Status;
use crate::spectral::{
    lemma_check, nerve_theorem_report, spectral_report, FamilyContext, LemmaReport, NerveTheoremReport,
};

/// Which k an instance is checked at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KChoice {
    Fixed(usize),
    Rule(KRule),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KRule {
    /// The smallest k for which the family is (k-|G|)-acyclic.
    Tightest,
}

impl Default for KChoice {
    fn default() -> Self {
        KChoice::Rule(KRule::Tightest)
    }
}

/// `count` instances of one generator spec. Instance i uses seed
/// `spec.seed + i`, size `sizes[i % len]` and dimension `dims[i % len]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub label: String,
    pub spec: GeneratorSpec,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dims: Vec<usize>,
    #[serde(default)]
    pub k: KChoice,
    /// Overrides the corpus-wide caps for this group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<Caps>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusConfig {
    pub name: String,
    #[serde(default)]
    pub caps: Caps,
    /// Coefficient field of the spectral pages.
    #[serde(default)]
    pub field: Characteristic,
    /// Nerve-theorem levels checked on every instance.
    #[serde(default = "default_levels")]
    pub nerve_theorem_levels: Vec<usize>,
    pub groups: Vec<GroupConfig>,
}

fn default_levels() -> Vec<usize> {
    vec![0, 1, 2]
}

impl CorpusConfig {
    pub fn from_json(json: &str) -> Result<Self> {
        let cfg: CorpusConfig = serde_json::from_str(json)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// The configuration shipped with the crate.
    pub fn shipped() -> Self {
        Self::from_json(include_str!("../configs/default_corpus.json")).expect("shipped corpus config is valid")
    }

    fn validate(&self) -> Result<()> {
        self.caps.validate()?;
        let mut labels = std::collections::HashSet::new();
        for g in &self.groups {
            if !labels.insert(g.label.as_str()) {
                return Err(malformed(format!("duplicate group label {:?}", g.label)));
            }
            if let Some(c) = &g.caps {
                c.validate()?;
            }
        }
        Ok(())
    }

    /// Every instance of the corpus, in manifest order.
    pub fn instances(&self) -> Vec<InstanceSpec> {
        let mut out = Vec::new();
        for g in &self.groups {
            for i in 0..g.count {
                let mut spec = g.spec.clone();
                spec.seed = g.spec.seed.wrapping_add(i as u64);
                if !g.sizes.is_empty() {
                    spec.n = g.sizes[i % g.sizes.len()];
                }
                if !g.dims.is_empty() {
                    spec.dim = g.dims[i % g.dims.len()];
                }
                out.push(InstanceSpec {
                    id: format!("{}-{i:03}", g.label),
                    group: g.label.clone(),
                    spec,
                    k: g.k,
                    caps: g.caps.unwrap_or(self.caps),
                });
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub id: String,
    pub group: String,
    pub spec: GeneratorSpec,
    pub k: KChoice,
    pub caps: Caps,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralSummary {
    pub total_rank: usize,
    pub claim_i: bool,
    pub claim_ii: Option<bool>,
    pub convergence: bool,
    pub page_recurrence: bool,
    pub extension_trivial: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeraySummary {
    pub leray: usize,
    /// max(k, d).
    pub bound: usize,
    pub verdict: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransversalSummary {
    pub tau: usize,
    pub depth: usize,
    /// ⌈n / depth⌉.
    pub lower_bound: usize,
    pub verdict: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub id: String,
    pub group: String,
    pub spec: GeneratorSpec,
    pub status: Status,
    /// H_n of every subcomplex of the ambient vanishes for n >= this.
    pub homological_dim: usize,
    pub k: Option<usize>,
    pub tightest_k: Option<usize>,
    pub acyclic: Option<bool>,
    pub good_cover: Option<bool>,
    pub union_betti: Vec<usize>,
    pub nerve_betti: Vec<usize>,
    pub lemma: Option<LemmaReport>,
    pub spectral: Option<SpectralSummary>,
    pub leray: Option<LeraySummary>,
    pub fractional_helly: Option<FractionalHellyReport>,
    pub nerve_theorem: Vec<NerveTheoremReport>,
    pub transversal: Option<TransversalSummary>,
    /// Stages not run, with the reason.
    pub skipped: Vec<String>,
    pub failures: Vec<String>,
    pub error: Option<String>,
    pub counterexample: Option<String>,
}

impl InstanceReport {
    fn new(inst: &InstanceSpec) -> Self {
        InstanceReport {
            id: inst.id.clone(),
            group: inst.group.clone(),
            spec: inst.spec.clone(),
            status: Status::Ok,
            homological_dim: 0,
            k: None,
            tightest_k: None,
            acyclic: None,
            good_cover: None,
            union_betti: Vec::new(),
            nerve_betti: Vec::new(),
            lemma: None,
            spectral: None,
            leray: None,
            fractional_helly: None,
            nerve_theorem: Vec::new(),
            transversal: None,
            skipped: Vec::new(),
            failures: Vec::new(),
            error: None,
            counterexample: None,
        }
    }

    fn fail(&mut self, msg: String) {
        log::warn!("{}: {msg}", self.id);
        self.failures.push(msg);
    }

    /// Records a capped stage as skipped, any other error as fatal.
    fn stage<T>(&mut self, name: &str, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(Error::ResourceLimit { what, actual, cap }) => {
                self.skipped.push(format!("{name}: {what} is {actual}, cap is {cap}"));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
}

/// Runs the whole pipeline on one generated family.
pub fn run_instance(inst: &InstanceSpec, field: Characteristic, levels: &[usize]) -> (InstanceReport, Option<SetFamily>) {
    let mut rep = InstanceReport::new(inst);
    let family = match generate(&inst.spec, &inst.caps) {
        Ok(f) => f,
        Err(e) => {
            rep.status = Status::of_error(&e);
            rep.error = Some(format!("generation: {e}"));
            return (rep, None);
        }
    };
    if let Err(e) = pipeline(&family, inst, field, levels, &mut rep) {
        rep.status = Status::of_error(&e);
        rep.error = Some(e.to_string());
        return (rep, Some(family));
    }
    rep.status = if !rep.failures.is_empty() {
        Status::VerdictFailure
    } else if rep.acyclic == Some(false) {
        Status::HypothesisFailure
    } else {
        Status::Ok
    };
    (rep, Some(family))
}

fn pipeline(
    family: &SetFamily,
    inst: &InstanceSpec,
    field: Characteristic,
    levels: &[usize],
    rep: &mut InstanceReport,
) -> Result<()> {
    let caps = &inst.caps;
    let n = family.len();
    let d = family.ambient().homological_dim();
    rep.homological_dim = d;

    // τ and depth need no enumeration of subfamilies
    let depth = intersection_depth(family)?.depth;
    if let Some(t) = rep.stage("transversal", crate::helly::transversal_number(family, caps))? {
        let lower_bound = if depth == 0 { 0 } else { n.div_ceil(depth) };
        let verdict = t.tau >= lower_bound;
        if !verdict {
            rep.fail(format!("transversal: τ = {} below ⌈n/depth⌉ = {lower_bound}", t.tau));
        }
        rep.transversal = Some(TransversalSummary {
            tau: t.tau,
            depth,
            lower_bound,
            verdict,
        });
    }

    let Some(mut ctx) = rep.stage("intersections", FamilyContext::new(family, caps))? else {
        return Ok(());
    };
    rep.union_betti = ctx.union_betti();
    rep.nerve_betti = ctx.nerve_betti();
    let table = ctx.table()?.clone();
    let tightest = table.tightest_acyclic_k();
    rep.tightest_k = Some(tightest);
    rep.good_cover = Some(good_cover_from_table(&table).verdict);
    let k = match inst.k {
        KChoice::Fixed(k) => k,
        KChoice::Rule(KRule::Tightest) => tightest,
    };
    rep.k = Some(k);
    let acyclic = AcyclicityReport::from_table(&table, k).verdict;
    rep.acyclic = Some(acyclic);

    if acyclic {
        let lemma = lemma_check(&ctx, k);
        if !lemma.verdict {
            rep.fail(format!("lemma: union and nerve differ in degrees {:?}", lemma.mismatches));
        }
        rep.lemma = Some(lemma);
    }

    if let Some(s) = rep.stage("spectral", spectral_report(&ctx, acyclic.then_some(k), field))? {
        for f in &s.failures {
            rep.fail(format!("spectral: {f}"));
        }
        rep.spectral = Some(SpectralSummary {
            total_rank: s.total_ranks.iter().sum(),
            claim_i: s.claim_i,
            claim_ii: s.claim_ii,
            convergence: s.convergence_verdict,
            page_recurrence: s.page_recurrence,
            extension_trivial: s.extension_trivial,
            failures: s.failures,
        });
    }

    let bound = k.max(d);
    if let Some(l) = rep.stage("leray", leray_number(ctx.nerve.complex(), caps))? {
        let verdict = !acyclic || l.leray <= bound;
        if !verdict {
            rep.fail(format!("leray: {} exceeds max(k, d) = {bound}", l.leray));
        }
        rep.leray = Some(LeraySummary {
            leray: l.leray,
            bound,
            verdict,
        });
    }

    // the fractional Helly statement needs k >= d; acyclicity is monotone in k
    if bound < n {
        let fh_acyclic = AcyclicityReport::from_table(&table, bound).verdict;
        if let Some(r) = rep.stage("fractional helly", fractional_helly_check(family, bound, Some(fh_acyclic), caps))? {
            if fh_acyclic && !r.verdict {
                rep.fail(format!(
                    "fractional helly: depth {} below ⌊βn⌋ = {} at k = {bound}",
                    r.depth.depth, r.beta_n_floor
                ));
            }
            rep.fractional_helly = Some(r);
        }
    } else {
        rep.skipped.push(format!("fractional helly: max(k, d) + 1 = {} exceeds n = {n}", bound + 1));
    }

    for &level in levels {
        let r = nerve_theorem_report(&mut ctx, level)?;
        if r.verdict == Some(false) {
            rep.fail(format!("nerve theorem: Betti numbers differ up to degree {level}"));
        }
        rep.nerve_theorem.push(r);
    }
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub ok: usize,
    pub hypothesis_failures: usize,
    pub verdict_failures: usize,
    pub resource_limits: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub name: String,
    pub status: Status,
    /// Seconds since the epoch; the only field that differs between runs.
    pub timestamp: u64,
    pub field: Characteristic,
    pub summary: Summary,
    pub instances: Vec<InstanceReport>,
}

impl Manifest {
    /// JSON without the timestamp, for run-to-run comparison.
    pub fn stable_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("manifest serializes");
        v.as_object_mut().expect("object").remove("timestamp");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

/// Runs every instance (in parallel, results in configuration order). With
/// an output directory, each family is written as `families/<id>.json` and
/// failing ones again under `counterexamples/`, next to `manifest.json`.
pub fn run_corpus(cfg: &CorpusConfig, out: Option<&Path>) -> Result<Manifest> {
    cfg.validate()?;
    let instances = cfg.instances();
    log::info!("corpus {}: {} instances", cfg.name, instances.len());
    let results: Vec<(InstanceReport, Option<SetFamily>)> = instances
        .par_iter()
        .map(|inst| run_instance(inst, cfg.field, &cfg.nerve_theorem_levels))
        .collect();

    let mut reports = Vec::with_capacity(results.len());
    for (mut rep, family) in results {
        if let (Some(dir), Some(f)) = (out, &family) {
            write_family(&dir.join("families").join(format!("{}.json", rep.id)), f)?;
            if rep.status == Status::VerdictFailure {
                let rel = PathBuf::from("counterexamples").join(format!("{}.json", rep.id));
                write_family(&dir.join(&rel), f)?;
                rep.counterexample = Some(rel.to_string_lossy().into_owned());
            }
        }
        reports.push(rep);
    }

    let mut summary = Summary {
        instances: reports.len(),
        ..Summary::default()
    };
    for r in &reports {
        match r.status {
            Status::Ok => summary.ok += 1,
            Status::HypothesisFailure => summary.hypothesis_failures += 1,
            Status::VerdictFailure => summary.verdict_failures += 1,
            Status::ResourceLimit => summary.resource_limits += 1,
            _ => summary.errors += 1,
        }
    }
    let status = reports
        .iter()
        .map(|r| r.status)
        .filter(|s| *s != Status::HypothesisFailure)
        .max()
        .unwrap_or(Status::Ok);
    let manifest = Manifest {
        name: cfg.name.clone(),
        status,
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        field: cfg.field,
        summary,
        instances: reports,
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("manifest.json"), manifest.to_json())?;
    }
    Ok(manifest)
}
