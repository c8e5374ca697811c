//! Acceptance criteria 1-10, one line per criterion. Runs without the
//! libtest harness so the lines are always printed.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use topohelly::complex::SimplicialComplex;
use topohelly::config::Caps;
use topohelly::corpus::{run_corpus, CorpusConfig, InstanceReport, Manifest};
use topohelly::generators::{generate, AnnulusLayout, DiscretePattern, GeneratorKind, GeneratorSpec};
use topohelly::homology::{betti_numbers_field, reduced_homology};
use topohelly::linalg::Characteristic;
use topohelly::Status;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Duration, limit: Duration) -> std::result::Result<(), String> {
    ensure(t <= limit, format!("took {:.2}s, limit {}s", t.as_secs_f64(), limit.as_secs()))
}

fn homology_oracles() -> Check {
    let t = Instant::now();
    let q = Characteristic::RATIONALS;
    let f2 = Characteristic::new(2).unwrap();
    let point = SimplicialComplex::from_facets([[0]]).unwrap().chain_complex();
    ensure(reduced_homology(&point).unwrap().is_acyclic(), "point is not acyclic")?;

    let circle = SimplicialComplex::from_facets([[0, 1], [1, 2], [0, 2]]).unwrap().chain_complex();
    let h = reduced_homology(&circle).unwrap();
    ensure(h.betti_numbers() == [0, 1] && h.torsion(1).is_empty(), format!("circle: {:?}", h.betti_numbers()))?;

    let sphere = SimplicialComplex::from_facets([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap().chain_complex();
    let h = reduced_homology(&sphere).unwrap();
    ensure(h.betti_numbers() == [0, 0, 1] && (0..3).all(|p| h.torsion(p).is_empty()), "boundary of the 3-simplex")?;

    let rp2 = SimplicialComplex::from_facets([
        [1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6],
        [2, 3, 5], [2, 4, 5], [2, 4, 6], [3, 4, 6], [3, 5, 6],
    ])
    .unwrap()
    .chain_complex();
    let h = reduced_homology(&rp2).unwrap();
    ensure(h.betti(1) == 0 && h.torsion(1) == [BigInt::from(2)], "projective plane: H~_1 is not Z/2")?;
    ensure(betti_numbers_field(&rp2, q).get(2) == Some(&0), "projective plane: Betti_2 over Q")?;
    ensure(betti_numbers_field(&rp2, f2).get(2) == Some(&1), "projective plane: Betti_2 over F_2")?;
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("point, circle, sphere, projective plane exact in {:.3}s", t.elapsed().as_secs_f64()))
}

fn ring_family() -> Check {
    let t = Instant::now();
    let mut spec = GeneratorSpec::new(GeneratorKind::Annuli, 2, 16, 3, 0);
    spec.layout = Some(AnnulusLayout::Concentric);
    let f = generate(&spec, &Caps::default()).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for mask in 1u32..8 {
        let g: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 1).collect();
        let cells = f.intersection(&g).unwrap();
        let h = reduced_homology(&f.chain_complex(&cells).unwrap()).map_err(|e| e.to_string())?;
        let group = h.group(1).to_string();
        ensure(group == "Z" && h.betti_numbers().iter().sum::<usize>() == 1, format!("subfamily {g:?}: H~_1 = {group}"))?;
        checked += 1;
    }
    within(t.elapsed(), Duration::from_secs(5))?;
    Ok(format!("{checked} subfamilies with H~_1 = Z in {:.2}s", t.elapsed().as_secs_f64()))
}

fn is_mixed(r: &InstanceReport) -> bool {
    r.group == "mixed"
}

fn lemma(m: &Manifest, elapsed: Duration) -> Check {
    let checked: Vec<&InstanceReport> = m.instances.iter().filter(|r| is_mixed(r) && r.lemma.is_some()).collect();
    let dims: std::collections::BTreeSet<usize> = checked.iter().map(|r| r.spec.dim).collect();
    let bad: Vec<&str> = m.instances.iter().filter(|r| r.lemma.as_ref().is_some_and(|l| !l.verdict)).map(|r| r.id.as_str()).collect();
    ensure(bad.is_empty(), format!("Betti mismatch for n >= k on {bad:?}"))?;
    ensure(checked.len() >= 50, format!("only {} mixed families checked", checked.len()))?;
    ensure(checked.iter().all(|r| r.spec.n <= 8), "mixed family with n > 8")?;
    ensure(dims.contains(&2) && dims.contains(&3), "mixed families do not cover 2-D and 3-D")?;
    within(elapsed, Duration::from_secs(600))?;
    let all = m.instances.iter().filter(|r| r.lemma.is_some()).count();
    Ok(format!("{} mixed families (dims {dims:?}), {all} in the corpus, zero violations", checked.len()))
}

fn spectral_claims(m: &Manifest) -> Check {
    let mixed: Vec<&InstanceReport> = m.instances.iter().filter(|r| is_mixed(r)).collect();
    ensure(mixed.iter().all(|r| r.spectral.is_some()), "spectral pages skipped on a mixed family")?;
    let mut runs = 0;
    for r in &m.instances {
        let Some(s) = &r.spectral else { continue };
        ensure(s.claim_i, format!("{}: claim (i) fails", r.id))?;
        ensure(s.claim_ii != Some(false), format!("{}: claim (ii) fails", r.id))?;
        ensure(s.page_recurrence, format!("{}: page recurrence fails", r.id))?;
        if s.claim_ii.is_some() {
            runs += 1;
        }
    }
    Ok(format!("claims (i) and (ii) hold on {runs} instances ({} mixed)", mixed.len()))
}

fn convergence(m: &Manifest) -> Check {
    let mut runs = 0;
    for r in &m.instances {
        let Some(s) = &r.spectral else { continue };
        ensure(s.convergence, format!("{}: {:?}", r.id, s.failures))?;
        ensure(s.extension_trivial, format!("{}: extension check fails", r.id))?;
        runs += 1;
    }
    ensure(runs >= 50, format!("only {runs} spectral runs"))?;
    Ok(format!("both filtrations converge to Betti(union) on {runs} instances"))
}

fn leray(m: &Manifest, elapsed: Duration) -> Check {
    let good: Vec<&InstanceReport> = m
        .instances
        .iter()
        .filter(|r| r.group.starts_with("boxes") && r.good_cover == Some(true) && r.spec.n <= 10 && r.leray.is_some())
        .collect();
    for r in &good {
        let l = r.leray.as_ref().unwrap();
        ensure(l.leray <= r.spec.dim, format!("{}: leray {} > d = {}", r.id, l.leray, r.spec.dim))?;
    }
    let dims: std::collections::BTreeSet<usize> = good.iter().map(|r| r.spec.dim).collect();
    let acyclic: Vec<&InstanceReport> =
        m.instances.iter().filter(|r| r.good_cover == Some(false) && r.acyclic == Some(true) && r.leray.is_some()).collect();
    for r in &acyclic {
        ensure(r.leray.as_ref().unwrap().verdict, format!("{}: leray above max(k, d)", r.id))?;
    }
    ensure(good.len() >= 20, format!("only {} good-cover box families", good.len()))?;
    ensure(dims.contains(&2) && dims.contains(&3), "good covers do not cover d = 2 and 3")?;
    ensure(acyclic.len() >= 20, format!("only {} acyclic non-good-cover families", acyclic.len()))?;
    within(elapsed, Duration::from_secs(600))?;
    Ok(format!("{} good covers with leray <= d, {} acyclic families with leray <= max(k, d)", good.len(), acyclic.len()))
}

fn fractional_helly(m: &Manifest, elapsed: Duration) -> Check {
    let mut boxes = 0;
    let mut acyclic = 0;
    for r in &m.instances {
        let Some(fh) = &r.fractional_helly else { continue };
        if fh.hypothesis != Some(true) {
            continue;
        }
        ensure(fh.verdict, format!("{}: depth {} < {} (counterexample {:?})", r.id, fh.depth.depth, fh.beta_n_floor, r.counterexample))?;
        if r.group.starts_with("boxes") && r.spec.n <= 20 {
            boxes += 1;
        } else if r.spec.n <= 10 {
            acyclic += 1;
        }
    }
    let counterexamples = m.instances.iter().filter(|r| r.counterexample.is_some()).count();
    ensure(counterexamples == 0, format!("{counterexamples} counterexamples written"))?;
    ensure(boxes + acyclic >= 200, format!("only {} hypothesis-satisfying families", boxes + acyclic))?;
    within(elapsed, Duration::from_secs(900))?;
    Ok(format!("{} families ({boxes} box families, {acyclic} other acyclic), zero violations", boxes + acyclic))
}

fn nerve_theorem(m: &Manifest) -> Check {
    let mut per_level: BTreeMap<usize, usize> = BTreeMap::new();
    let mut families = 0;
    for r in &m.instances {
        let mut any = false;
        for t in &r.nerve_theorem {
            if t.hypothesis_holds {
                ensure(t.verdict == Some(true), format!("{}: Betti numbers differ up to {}", r.id, t.k))?;
                *per_level.entry(t.k).or_default() += 1;
                any = true;
            }
        }
        families += any as usize;
    }
    ensure(families >= 30, format!("only {families} families meet the hypothesis"))?;
    ensure((0..=2).all(|k| per_level.get(&k).copied().unwrap_or(0) > 0), format!("levels covered: {per_level:?}"))?;
    Ok(format!("{families} families, per level {per_level:?}, zero violations"))
}

fn transversals(m: &Manifest) -> Check {
    let caps = Caps::default();
    for n in 2..=8 {
        let mut spec = GeneratorSpec::new(GeneratorKind::DiscreteSets, 0, 0, n, 0);
        spec.pattern = Some(DiscretePattern::ComplementSingletons);
        let tau = topohelly::helly::transversal_number(&generate(&spec, &caps).unwrap(), &caps).unwrap().tau;
        ensure(tau == 2, format!("complement singletons, n = {n}: τ = {tau}"))?;
        spec.pattern = Some(DiscretePattern::Disjoint);
        let tau = topohelly::helly::transversal_number(&generate(&spec, &caps).unwrap(), &caps).unwrap().tau;
        ensure(tau == n, format!("disjoint, n = {n}: τ = {tau}"))?;
    }
    let mut checked = 0;
    for r in &m.instances {
        let t = r.transversal.as_ref().ok_or_else(|| format!("{}: no transversal", r.id))?;
        ensure(t.verdict && t.tau >= t.lower_bound, format!("{}: τ = {} < {}", r.id, t.tau, t.lower_bound))?;
        checked += 1;
    }
    Ok(format!("examples exact; τ >= ⌈n/depth⌉ on all {checked} corpus instances"))
}

fn determinism(cfg: &CorpusConfig, first: &Manifest) -> Check {
    let dir_a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir_b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = run_corpus(cfg, Some(dir_a.path())).map_err(|e| e.to_string())?;
    let b = run_corpus(cfg, Some(dir_b.path())).map_err(|e| e.to_string())?;
    ensure(a.stable_json() == b.stable_json(), "manifests differ")?;
    ensure(a.stable_json() == first.stable_json(), "manifest differs from the in-memory run")?;
    let mut files = 0;
    for entry in std::fs::read_dir(dir_a.path().join("families")).map_err(|e| e.to_string())? {
        let p = entry.map_err(|e| e.to_string())?.path();
        let other = dir_b.path().join("families").join(p.file_name().unwrap());
        ensure(std::fs::read(&p).ok() == std::fs::read(&other).ok(), format!("{} differs", p.display()))?;
        files += 1;
    }
    Ok(format!("two runs agree ({} instances, {files} family files byte-identical)", a.instances.len()))
}

fn main() -> ExitCode {
    // without --nocapture-style filtering support, accept and ignore libtest flags
    let mut lines = Vec::new();
    let mut report = |n: usize, name: &str, r: Check| {
        let ok = r.is_ok();
        let line = match r {
            Ok(msg) => format!("criterion {n:>2} PASS  {name}: {msg}"),
            Err(msg) => format!("criterion {n:>2} FAIL  {name}: {msg}"),
        };
        println!("{line}");
        lines.push(ok);
    };

    report(1, "homology oracles", homology_oracles());
    report(2, "concentric ring family", ring_family());

    let cfg = CorpusConfig::shipped();
    let t = Instant::now();
    let manifest = run_corpus(&cfg, None);
    let elapsed = t.elapsed();
    match &manifest {
        Ok(m) => println!(
            "corpus: {} instances in {:.1}s, status {:?}, {:?}",
            m.instances.len(),
            elapsed.as_secs_f64(),
            m.status,
            m.summary
        ),
        Err(e) => println!("corpus failed: {e}"),
    }
    match manifest {
        Ok(m) => {
            let corpus_ok = ensure(m.status == Status::Ok, format!("corpus status {:?}", m.status));
            report(3, "union vs nerve for n >= k", corpus_ok.clone().and_then(|_| lemma(&m, elapsed)));
            report(4, "spectral claims (i)/(ii)", spectral_claims(&m));
            report(5, "convergence", convergence(&m));
            report(6, "leray bounds", leray(&m, elapsed));
            report(7, "fractional helly bound", fractional_helly(&m, elapsed));
            report(8, "nerve theorem", nerve_theorem(&m));
            report(9, "transversal sanity", transversals(&m));
            report(10, "determinism", determinism(&cfg, &m));
        }
        Err(e) => {
            for (n, name) in (3..=10).zip(["lemma", "spectral", "convergence", "leray", "fh", "nerve theorem", "transversal", "determinism"]) {
                report(n, name, Err(format!("corpus did not run: {e}")));
            }
        }
    }
    let passed = lines.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", lines.len());
    if passed == lines.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
