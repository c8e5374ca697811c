use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::complex::{CellLabel, SetFamily};
use crate::config::Caps;
use crate::error::{check_cap, malformed, Error, Result};

/// Exact rational written as `{"num": .., "den": ..}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fraction(pub BigRational);

impl Fraction {
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        for (key, v) in [("num", self.0.numer()), ("den", self.0.denom())] {
            match v.to_i64() {
                Some(x) => m.serialize_entry(key, &x)?,
                None => m.serialize_entry(key, &v.to_string())?,
            }
        }
        m.end()
    }
}

fn mask_limit(family: &SetFamily) -> Result<()> {
    check_cap("family members (bitmask width)", family.len(), 64)
}

/// Membership mask of every ambient cell (bit i set iff member i contains it).
fn cell_masks(family: &SetFamily) -> Vec<u64> {
    let mut masks = vec![0u64; family.ambient().num_cells()];
    for (i, m) in family.members().iter().enumerate() {
        for c in m.iter() {
            masks[c] |= 1 << i;
        }
    }
    masks
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Depth {
    pub depth: usize,
    pub cell: Option<usize>,
    pub label: Option<CellLabel>,
}

/// Largest number of members sharing one ambient cell, with the smallest
/// such cell.
pub fn intersection_depth(family: &SetFamily) -> Result<Depth> {
    mask_limit(family)?;
    let best = cell_masks(family)
        .iter()
        .enumerate()
        .map(|(c, m)| (m.count_ones() as usize, c))
        .filter(|&(d, _)| d > 0)
        .max_by_key(|&(d, c)| (d, std::cmp::Reverse(c)));
    Ok(match best {
        Some((depth, c)) => Depth {
            depth,
            cell: Some(c),
            label: Some(family.ambient().label(c)),
        },
        None => Depth {
            depth: 0,
            cell: None,
            label: None,
        },
    })
}

fn count_intersecting(family: &SetFamily, size: usize, caps: &Caps) -> Result<usize> {
    Ok(family
        .nonempty_intersections(size, caps.max_intersections)?
        .iter()
        .filter(|(g, _)| g.len() == size)
        .count())
}

/// Fraction of the (k+1)-subsets of the family with non-empty intersection.
pub fn alpha_fraction(family: &SetFamily, k: usize, caps: &Caps) -> Result<Fraction> {
    let (hits, total) = alpha_parts(family, k, caps)?;
    Ok(Fraction(BigRational::new(BigInt::from(hits), total)))
}

fn alpha_parts(family: &SetFamily, k: usize, caps: &Caps) -> Result<(usize, BigInt)> {
    let n = family.len();
    if k + 1 > n {
        return Err(malformed(format!("k + 1 = {} exceeds the family size {n}", k + 1)));
    }
    let hits = count_intersecting(family, k + 1, caps)?;
    Ok((hits, binomial(BigInt::from(n), BigInt::from(k + 1))))
}

/// ⌊(1 - (1 - α)^{1/(k+1)}) n⌋, computed exactly: the largest m <= n with
/// (1 - α) n^{k+1} <= (n - m)^{k+1}.
pub fn beta_n_floor(alpha: &BigRational, k: usize, n: usize) -> usize {
    let rest = BigRational::one() - alpha;
    let e = (k + 1) as u32;
    let lhs = rest.numer() * BigInt::from(n).pow(e);
    (0..=n)
        .rev()
        .find(|&m| lhs <= rest.denom() * BigInt::from(n - m).pow(e))
        .unwrap_or(0)
}

/// β(α) = 1 - (1 - α)^{1/(k+1)} as a float, for display.
pub fn beta(alpha: f64, k: usize) -> f64 {
    1.0 - (1.0 - alpha).powf(1.0 / (k + 1) as f64)
}

#[derive(Debug, Clone, Serialize)]
pub struct FractionalHellyReport {
    pub n: usize,
    pub k: usize,
    pub intersecting_subsets: usize,
    pub total_subsets: u64,
    pub alpha: Fraction,
    pub alpha_decimal: f64,
    pub beta_decimal: f64,
    pub beta_n_decimal: f64,
    pub beta_n_floor: usize,
    pub depth: Depth,
    /// Whether the family was verified to be (k-|G|)-acyclic.
    pub hypothesis: Option<bool>,
    pub verdict: bool,
}

/// Compares the depth of the family with ⌊β(α) n⌋. `hypothesis` records the
/// outcome of the acyclicity check, when the caller ran it.
pub fn fractional_helly_check(
    family: &SetFamily,
    k: usize,
    hypothesis: Option<bool>,
    caps: &Caps,
) -> Result<FractionalHellyReport> {
    let n = family.len();
    let (hits, total) = alpha_parts(family, k, caps)?;
    let alpha = Fraction(BigRational::new(BigInt::from(hits), total.clone()));
    let depth = intersection_depth(family)?;
    let floor = beta_n_floor(&alpha.0, k, n);
    let a = alpha.to_f64();
    let b = beta(a, k);
    Ok(FractionalHellyReport {
        n,
        k,
        intersecting_subsets: hits,
        total_subsets: total.to_u64().expect("C(n, k+1) fits in 64 bits for n <= 64"),
        alpha,
        alpha_decimal: a,
        beta_decimal: b,
        beta_n_decimal: b * n as f64,
        beta_n_floor: floor,
        verdict: depth.depth >= floor,
        depth,
        hypothesis,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PqReport {
    pub p: usize,
    pub q: usize,
    pub holds: bool,
    /// n < p, so there is nothing to check.
    pub vacuous: bool,
    /// A p-subset none of whose q-subsets intersect.
    pub witness: Option<Vec<usize>>,
}

/// Among any p members, do some q share a cell?
pub fn pq_condition(family: &SetFamily, p: usize, q: usize, caps: &Caps) -> Result<PqReport> {
    if q == 0 || p < q {
        return Err(malformed(format!("need p >= q >= 1, got p = {p}, q = {q}")));
    }
    mask_limit(family)?;
    let n = family.len();
    if n < p {
        return Ok(PqReport {
            p,
            q,
            holds: true,
            vacuous: true,
            witness: None,
        });
    }
    // intersecting q-sets, grouped by their largest index
    let mut by_max: Vec<Vec<u64>> = vec![Vec::new(); n];
    for (g, _) in family.nonempty_intersections(q, caps.max_intersections)? {
        if g.len() == q {
            by_max[*g.last().unwrap()].push(g.iter().fold(0, |m, &i| m | 1 << i));
        }
    }
    let mut chosen = Vec::with_capacity(p);
    let mut nodes = 0usize;
    let found = independent_set(&by_max, n, p, 0, 0, &mut chosen, &mut nodes, caps.max_search_nodes)?;
    Ok(PqReport {
        p,
        q,
        holds: !found,
        vacuous: false,
        witness: found.then_some(chosen),
    })
}

/// Depth-first search for p indices containing none of the forbidden sets;
/// indices are added in increasing order, so the first hit is the
/// lexicographically smallest.
#[allow(clippy::too_many_arguments)]
fn independent_set(
    by_max: &[Vec<u64>],
    n: usize,
    p: usize,
    start: usize,
    mask: u64,
    chosen: &mut Vec<usize>,
    nodes: &mut usize,
    budget: usize,
) -> Result<bool> {
    if chosen.len() == p {
        return Ok(true);
    }
    for j in start..n {
        if n - j < p - chosen.len() {
            break;
        }
        *nodes += 1;
        check_cap("(p,q) search nodes", *nodes, budget)?;
        let next = mask | 1 << j;
        if by_max[j].iter().any(|&f| f & !next == 0) {
            continue;
        }
        chosen.push(j);
        if independent_set(by_max, n, p, j + 1, next, chosen, nodes, budget)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMethod {
    Exhaustive,
    BranchAndBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransversalResult {
    pub tau: usize,
    pub cells: Vec<usize>,
    pub labels: Vec<CellLabel>,
    pub method: SearchMethod,
    pub nodes: usize,
}

/// Exact transversal number: the fewest ambient cells meeting every member.
pub fn transversal_number(family: &SetFamily, caps: &Caps) -> Result<TransversalResult> {
    mask_limit(family)?;
    if let Some(i) = family.members().iter().position(|m| m.is_empty()) {
        return Err(malformed(format!(
            "member {:?} is empty, so no transversal exists",
            family.names()[i]
        )));
    }
    let n = family.len();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let (cands, reps) = candidates(family);
    let mut nodes = 0usize;
    let done = |picks: &[usize], method, nodes| {
        let mut cells: Vec<usize> = picks.iter().map(|&i| reps[i]).collect();
        cells.sort_unstable();
        TransversalResult {
            tau: cells.len(),
            labels: cells.iter().map(|&c| family.ambient().label(c)).collect(),
            cells,
            method,
            nodes,
        }
    };
    if n == 0 {
        return Ok(done(&[], SearchMethod::Exhaustive, 0));
    }

    let m = cands.len();
    for size in 1..=3usize.min(m) {
        let combos = binomial(BigInt::from(m), BigInt::from(size));
        if combos > BigInt::from(caps.max_search_nodes) {
            break;
        }
        if let Some(picks) = exhaustive(&cands, size, full, &mut nodes) {
            return Ok(done(&picks, SearchMethod::Exhaustive, nodes));
        }
    }

    let mut best = greedy(&cands, full);
    let mut current = Vec::new();
    let widest = cands.iter().map(|c| c.count_ones()).max().unwrap_or(1);
    branch(&cands, full, 0, widest, &mut current, &mut best, &mut nodes, caps.max_search_nodes)?;
    Ok(done(&best, SearchMethod::BranchAndBound, nodes))
}

/// Distinct membership masks that are not strictly contained in another,
/// each with its smallest cell.
fn candidates(family: &SetFamily) -> (Vec<u64>, Vec<usize>) {
    let mut first: HashMap<u64, usize> = HashMap::new();
    for (c, m) in cell_masks(family).into_iter().enumerate() {
        if m != 0 {
            first.entry(m).or_insert(c);
        }
    }
    let mut masks: Vec<(u64, usize)> = first.into_iter().collect();
    masks.sort_by_key(|&(m, c)| (std::cmp::Reverse(m.count_ones()), c));
    let mut kept: Vec<(u64, usize)> = Vec::new();
    for (m, c) in masks {
        if !kept.iter().any(|&(k, _)| k & m == m) {
            kept.push((m, c));
        }
    }
    kept.into_iter().unzip()
}

fn exhaustive(cands: &[u64], size: usize, full: u64, nodes: &mut usize) -> Option<Vec<usize>> {
    let m = cands.len();
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        *nodes += 1;
        if idx.iter().fold(0, |acc, &i| acc | cands[i]) == full {
            return Some(idx);
        }
        // next combination in lexicographic order
        let mut i = size;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] < m - size + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn greedy(cands: &[u64], full: u64) -> Vec<usize> {
    let mut covered = 0u64;
    let mut picks = Vec::new();
    while covered != full {
        let (i, _) = cands
            .iter()
            .enumerate()
            .max_by_key(|&(i, &c)| ((c & !covered).count_ones(), std::cmp::Reverse(i)))
            .expect("every member meets some candidate");
        picks.push(i);
        covered |= cands[i];
    }
    picks
}

#[allow(clippy::too_many_arguments)]
fn branch(
    cands: &[u64],
    full: u64,
    covered: u64,
    widest: u32,
    current: &mut Vec<usize>,
    best: &mut Vec<usize>,
    nodes: &mut usize,
    budget: usize,
) -> Result<()> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::ResourceLimit {
            what: "transversal search nodes",
            actual: *nodes,
            cap: budget,
        });
    }
    if covered == full {
        if current.len() < best.len() {
            *best = current.clone();
        }
        return Ok(());
    }
    let missing = (full & !covered).count_ones();
    let lower = current.len() + missing.div_ceil(widest) as usize;
    if lower >= best.len() {
        return Ok(());
    }
    // branch on the uncovered member with the fewest candidates
    let member = (0..64)
        .filter(|&i| full & !covered & (1 << i) != 0)
        .min_by_key(|&i| cands.iter().filter(|&&c| c & (1 << i) != 0).count())
        .expect("something is uncovered");
    let mut options: Vec<usize> = (0..cands.len()).filter(|&j| cands[j] & (1 << member) != 0).collect();
    options.sort_by_key(|&j| (std::cmp::Reverse((cands[j] & !covered).count_ones()), j));
    for j in options {
        current.push(j);
        branch(cands, full, covered | cands[j], widest, current, best, nodes, budget)?;
        current.pop();
    }
    Ok(())
}
