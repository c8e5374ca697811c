use serde::Serialize;

use super::double::mayer_vietoris_from_intersections;
use super::sequence::{Coefficients, SpectralPage, SpectralSequence};
use super::total::{total_complex, Filtration};
use crate::complex::{CellSet, SetFamily};
use crate::config::Caps;
use crate::error::{check_cap, Result};
use crate::homology::{betti_numbers_field, homology, HomologyResult};
use crate::linalg::Characteristic;
use crate::nerve::{nerve_from_intersections, Connectivity, IntersectionTable, NerveComplex};

/// Everything derived once per family and shared by the checks below.
pub struct FamilyContext<'a> {
    pub family: &'a SetFamily,
    pub caps: Caps,
    pub intersections: Vec<(Vec<usize>, CellSet)>,
    pub nerve: NerveComplex,
    /// Unreduced integer homology of the union.
    pub union_homology: HomologyResult,
    /// Unreduced integer homology of the nerve.
    pub nerve_homology: HomologyResult,
    table: Option<IntersectionTable>,
}

impl<'a> FamilyContext<'a> {
    pub fn new(family: &'a SetFamily, caps: &Caps) -> Result<Self> {
        check_cap("family members", family.len(), caps.max_members)?;
        let intersections = family.nonempty_intersections(family.len(), caps.max_intersections)?;
        let nerve = nerve_from_intersections(&intersections);
        let union = family.union_all();
        check_cap("cells in the union", union.len(), caps.max_cells)?;
        let union_homology = homology(&family.chain_complex(&union)?, false)?;
        let nerve_homology = homology(&nerve.complex().chain_complex(), false)?;
        Ok(FamilyContext {
            family,
            caps: *caps,
            intersections,
            nerve,
            union_homology,
            nerve_homology,
            table: None,
        })
    }

    /// Reduced homology of every non-empty intersection (computed on first use).
    pub fn table(&mut self) -> Result<&IntersectionTable> {
        if self.table.is_none() {
            let t = IntersectionTable::from_intersections(self.family, &self.intersections, &self.caps)?;
            self.table = Some(t);
        }
        Ok(self.table.as_ref().expect("just filled"))
    }

    pub fn union_betti(&self) -> Vec<usize> {
        self.union_homology.betti_numbers()
    }

    pub fn nerve_betti(&self) -> Vec<usize> {
        self.nerve_homology.betti_numbers()
    }

    /// Betti numbers of union and nerve over a field.
    fn field_betti(&self, ch: Characteristic) -> Result<(Vec<usize>, Vec<usize>)> {
        let union = self.family.union_all();
        Ok((
            betti_numbers_field(&self.family.chain_complex(&union)?, ch),
            betti_numbers_field(&self.nerve.complex().chain_complex(), ch),
        ))
    }
}

fn at(v: &[usize], n: usize) -> usize {
    v.get(n).copied().unwrap_or(0)
}

fn span(a: &[usize], b: &[usize]) -> usize {
    a.len().max(b.len())
}

/// Integer Betti numbers of the union against those of the nerve for n >= k.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub k: usize,
    pub union_betti: Vec<usize>,
    pub nerve_betti: Vec<usize>,
    /// Dimensions n >= k where the two disagree.
    pub mismatches: Vec<usize>,
    pub verdict: bool,
}

pub fn lemma_check(ctx: &FamilyContext, k: usize) -> LemmaReport {
    let (u, v) = (ctx.union_betti(), ctx.nerve_betti());
    let mismatches: Vec<usize> = (k..span(&u, &v)).filter(|&n| at(&u, n) != at(&v, n)).collect();
    LemmaReport {
        k,
        verdict: mismatches.is_empty(),
        union_betti: u,
        nerve_betti: v,
        mismatches,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub total: usize,
    pub e_infinity_first: usize,
    pub e_infinity_second: usize,
    pub union_betti: usize,
    pub nerve_betti: usize,
}

/// Outcome of running both spectral sequences of the Mayer-Vietoris double
/// complex of a family.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub k: Option<usize>,
    pub characteristic: Characteristic,
    pub total_ranks: Vec<usize>,
    pub first_e1: SpectralPage,
    pub first_e2: SpectralPage,
    pub second_e1: SpectralPage,
    pub second_e2: SpectralPage,
    pub first_e_infinity: SpectralPage,
    pub second_e_infinity: SpectralPage,
    pub convergence: Vec<ConvergenceRow>,
    /// Σ_{p+q=n} E^∞ = dim H_n(Tot) = Betti_n(⋃F) for every n, both filtrations.
    pub convergence_verdict: bool,
    /// Betti_n(⋃F) = Betti_n(N(F)) for n >= k (over the working field).
    pub lemma_verdict: Option<bool>,
    /// First filtration: E^2 vanishes for q >= 1, E^2_{p,0} = Betti_p(⋃F).
    pub claim_i: bool,
    /// Second filtration: E^2 vanishes for p >= 1, p+q >= k-1, and
    /// E^2_{0,q} = Betti_q(N(F)) for q >= k. Only meaningful for families
    /// that are (k-|G|)-acyclic; `None` without k.
    pub claim_ii: Option<bool>,
    /// dim E^{r+1} = dim ker d^r - dim im d^r at every position and page.
    pub page_recurrence: bool,
    /// Where only one of E^∞_{n,0}, E^∞_{0,n} is non-zero (all other terms
    /// of the diagonal vanishing), H_n(Tot) has exactly that dimension.
    pub extension_trivial: bool,
    pub failures: Vec<String>,
}

/// Builds the double complex, runs both spectral sequences over the field
/// of characteristic `ch`, and evaluates every claim.
pub fn spectral_report(ctx: &FamilyContext, k: Option<usize>, ch: Characteristic) -> Result<SpectralReport> {
    let dc = mayer_vietoris_from_intersections(ctx.family, &ctx.intersections, &ctx.caps)?;
    let tot = total_complex(&dc)?;
    let coeffs = Coefficients::Field(ch);
    let first = SpectralSequence::new(&tot, Filtration::First, coeffs)?;
    let second = SpectralSequence::new(&tot, Filtration::Second, coeffs)?;
    let tot_betti = betti_numbers_field(&tot.chain_complex(), ch);
    let (union_betti, nerve_betti) = ctx.field_betti(ch)?;
    let mut failures = Vec::new();

    let first_inf = first.infinity_page();
    let second_inf = second.infinity_page();
    let degrees = tot.top_degree().map_or(0, |d| d + 1).max(union_betti.len()).max(nerve_betti.len());
    let convergence: Vec<ConvergenceRow> = (0..degrees)
        .map(|n| ConvergenceRow {
            n,
            total: at(&tot_betti, n),
            e_infinity_first: first_inf.diagonal_sum(n),
            e_infinity_second: second_inf.diagonal_sum(n),
            union_betti: at(&union_betti, n),
            nerve_betti: at(&nerve_betti, n),
        })
        .collect();
    for row in &convergence {
        if row.e_infinity_first != row.total || row.e_infinity_second != row.total || row.total != row.union_betti {
            failures.push(format!(
                "degree {}: E^∞ sums {} / {}, H(Tot) {}, union {}",
                row.n, row.e_infinity_first, row.e_infinity_second, row.total, row.union_betti
            ));
        }
    }
    let convergence_verdict = failures.is_empty();
    let lemma_verdict = k.map(|k| convergence.iter().filter(|r| r.n >= k).all(|r| r.union_betti == r.nerve_betti));

    let first_e2 = first.page(2)?;
    let mut claim_i = true;
    for (q, row) in first_e2.dims.iter().enumerate() {
        for (p, &d) in row.iter().enumerate() {
            let expected = if q == 0 { at(&union_betti, p) } else { 0 };
            if d != expected {
                claim_i = false;
                failures.push(format!("claim (i): E^2_{{{p},{q}}} = {d}, expected {expected}"));
            }
        }
    }
    for (p, &b) in union_betti.iter().enumerate() {
        if first_e2.dim(p, 0) != b {
            claim_i = false;
            failures.push(format!("claim (i): E^2_{{{p},0}} = {}, Betti {b}", first_e2.dim(p, 0)));
        }
    }
    let second_e2 = second.page(2)?;
    let claim_ii = k.map(|k| {
        let mut ok = true;
        for (q, row) in second_e2.dims.iter().enumerate() {
            for (p, &d) in row.iter().enumerate() {
                if p >= 1 && p + q + 1 >= k && d != 0 {
                    ok = false;
                    failures.push(format!("claim (ii): E~^2_{{{p},{q}}} = {d} above the anti-diagonal"));
                }
            }
        }
        let rows = second_e2.dims.len().max(nerve_betti.len());
        for q in k..rows {
            if second_e2.dim(0, q) != at(&nerve_betti, q) {
                ok = false;
                failures.push(format!(
                    "claim (ii): E~^2_{{0,{q}}} = {}, nerve Betti {}",
                    second_e2.dim(0, q),
                    at(&nerve_betti, q)
                ));
            }
        }
        ok
    });

    let mut page_recurrence = true;
    for seq in [&first, &second] {
        let mut page = seq.page(1)?;
        for r in 1..=seq.stable_page() {
            let next = seq.page(r + 1)?;
            let rows = page.dims.len().max(next.dims.len());
            let cols = page.dims.iter().chain(&next.dims).map(Vec::len).max().unwrap_or(0);
            for q in 0..rows {
                for p in 0..cols {
                    let homology = page.dim(p, q) as isize - page.rank_out(p, q) as isize - page.rank_in(p, q) as isize;
                    if homology != next.dim(p, q) as isize {
                        page_recurrence = false;
                        failures.push(format!(
                            "{:?} filtration: E^{} at ({p},{q}) is {}, homology of E^{r} gives {homology}",
                            seq.filtration(),
                            r + 1,
                            next.dim(p, q)
                        ));
                    }
                }
            }
            page = next;
        }
    }

    let mut extension_trivial = true;
    for inf in [&first_inf, &second_inf] {
        for row in &convergence {
            let n = row.n;
            let nonzero: Vec<usize> = (0..=n).filter(|&p| inf.dim(p, n - p) > 0).collect();
            if let [p] = nonzero[..] {
                let d = inf.dim(p, n - p);
                if (p == 0 || p == n) && d != row.total {
                    extension_trivial = false;
                    failures.push(format!("degree {n}: single E^∞ term {d} but H(Tot) {}", row.total));
                }
            }
        }
    }

    Ok(SpectralReport {
        k,
        characteristic: ch,
        total_ranks: tot.ranks(),
        first_e1: first.page(1)?,
        first_e2,
        second_e1: second.page(1)?,
        second_e2,
        first_e_infinity: first_inf,
        second_e_infinity: second_inf,
        convergence,
        convergence_verdict,
        lemma_verdict,
        claim_i,
        claim_ii,
        page_recurrence,
        extension_trivial,
        failures,
    })
}

/// Convenience wrapper computing the context on the fly.
pub fn convergence_check(family: &SetFamily, k: usize, caps: &Caps, ch: Characteristic) -> Result<SpectralReport> {
    spectral_report(&FamilyContext::new(family, caps)?, Some(k), ch)
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisFailure {
    pub subfamily: Vec<usize>,
    pub connectivity: Connectivity,
    pub required: isize,
}

#[derive(Debug, Clone, Serialize)]
pub struct NerveTheoremReport {
    pub k: usize,
    pub hypothesis_holds: bool,
    pub hypothesis_failure: Option<HypothesisFailure>,
    pub union_betti: Vec<usize>,
    pub nerve_betti: Vec<usize>,
    /// Betti_n(⋃F) = Betti_n(N(F)) for all n <= k; absent when the
    /// hypothesis fails.
    pub verdict: Option<bool>,
}

/// Highest level k at which every non-empty ⋂G is (k-|G|+1)-connected in
/// the homological sense, or `None` if even k = 0 fails.
pub fn connectivity_level(table: &IntersectionTable, max_k: usize) -> Option<usize> {
    (0..=max_k).rev().find(|&k| first_connectivity_failure(table, k).is_none())
}

fn first_connectivity_failure(table: &IntersectionTable, k: usize) -> Option<HypothesisFailure> {
    table.records.iter().find_map(|r| {
        let required = k as isize - r.subfamily.len() as isize + 1;
        let c = Connectivity::of(&r.homology);
        (!c.at_least(required)).then(|| HypothesisFailure {
            subfamily: r.subfamily.clone(),
            connectivity: c,
            required,
        })
    })
}

pub fn nerve_theorem_report(ctx: &mut FamilyContext, k: usize) -> Result<NerveTheoremReport> {
    let failure = first_connectivity_failure(ctx.table()?, k);
    let (u, v) = (ctx.union_betti(), ctx.nerve_betti());
    let verdict = failure
        .is_none()
        .then(|| (0..=k).all(|n| at(&u, n) == at(&v, n)));
    Ok(NerveTheoremReport {
        k,
        hypothesis_holds: failure.is_none(),
        hypothesis_failure: failure,
        union_betti: u,
        nerve_betti: v,
        verdict,
    })
}

/// Checks the homological nerve theorem at level k: if every non-empty ⋂G
/// has vanishing reduced homology up to dimension k-|G|+1, the union and
/// the nerve have the same Betti numbers up to dimension k.
pub fn nerve_theorem_check(family: &SetFamily, k: usize, caps: &Caps) -> Result<NerveTheoremReport> {
    nerve_theorem_report(&mut FamilyContext::new(family, caps)?, k)
}
