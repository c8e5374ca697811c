use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::complex::{CellSet, SetFamily, SimplicialComplex, Vertex};
use crate::config::Caps;
use crate::error::{check_cap, Error, Result};
use crate::homology::{reduced_homology, GroupSummary, HomologyResult};

/// Nerve of a family: vertex `i` is member `i`, and a set of members spans a
/// face iff their intersection is non-empty.
#[derive(Debug, Clone)]
pub struct NerveComplex {
    complex: SimplicialComplex,
    /// Smallest ambient cell of each face's intersection, in face order.
    witness_cells: Vec<usize>,
}

impl NerveComplex {
    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// Member indices of every face, in the complex's face order.
    pub fn faces(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.complex
            .faces()
            .iter()
            .map(|f| f.iter().map(|&v| v as usize).collect())
    }

    /// The intersection carried by a face, recomputed from the family.
    pub fn witness(&self, family: &SetFamily, face: &[usize]) -> Result<CellSet> {
        let key: Vec<Vertex> = face.iter().map(|&i| i as Vertex).collect();
        if !self.complex.contains(&key) {
            return Err(crate::error::malformed(format!("{face:?} is not a face of the nerve")));
        }
        family.intersection(face)
    }

    /// One cell lying in every member of the face.
    pub fn witness_cell(&self, face: &[usize]) -> Option<usize> {
        let key: Vec<Vertex> = face.iter().map(|&i| i as Vertex).collect();
        self.complex.index_of(&key).map(|i| self.witness_cells[i])
    }

    /// Re-derives every face from the family and checks that no further
    /// subfamily intersects.
    pub fn verify(&self, family: &SetFamily) -> Result<()> {
        for (face, &cell) in self.faces().zip(&self.witness_cells) {
            let inter = family.intersection(&face)?;
            if !inter.contains(cell) {
                return Err(Error::Internal(format!("nerve face {face:?} lost its witness")));
            }
        }
        for facet in self.complex.facets() {
            let facet: Vec<usize> = facet.iter().map(|&v| v as usize).collect();
            for j in 0..family.len() {
                if facet.contains(&j) {
                    continue;
                }
                let mut g = facet.clone();
                g.push(j);
                if !family.intersection(&g)?.is_empty() {
                    return Err(Error::Internal(format!("nerve misses the face {g:?}")));
                }
            }
        }
        for i in 0..family.len() {
            if family.member(i).is_empty() == self.complex.contains(&[i as Vertex]) {
                return Err(Error::Internal(format!("nerve vertex {i} disagrees with the family")));
            }
        }
        Ok(())
    }
}

fn check_members(family: &SetFamily, caps: &Caps) -> Result<()> {
    check_cap("family members", family.len(), caps.max_members)
}

pub fn nerve(family: &SetFamily, caps: &Caps) -> Result<NerveComplex> {
    check_members(family, caps)?;
    let inters = family.nonempty_intersections(family.len(), caps.max_intersections)?;
    Ok(nerve_from_intersections(&inters))
}

pub(crate) fn nerve_from_intersections(inters: &[(Vec<usize>, CellSet)]) -> NerveComplex {
    let faces: BTreeSet<Vec<Vertex>> = inters
        .iter()
        .map(|(g, _)| g.iter().map(|&i| i as Vertex).collect())
        .collect();
    let complex = SimplicialComplex::from_closed(faces);
    let mut witness_cells = vec![0; complex.num_faces()];
    for (g, cells) in inters {
        let key: Vec<Vertex> = g.iter().map(|&i| i as Vertex).collect();
        let idx = complex.index_of(&key).expect("face was inserted");
        witness_cells[idx] = cells.iter().next().expect("intersection is non-empty");
    }
    NerveComplex {
        complex,
        witness_cells,
    }
}

/// Reduced integer homology of one non-empty subfamily intersection.
#[derive(Debug, Clone)]
pub struct IntersectionRecord {
    pub subfamily: Vec<usize>,
    pub cells: usize,
    pub homology: HomologyResult,
}

/// Every non-empty intersection of the family with its reduced homology,
/// ordered by subfamily size and then lexicographically.
///
/// This is the shared input of the acyclicity, good-cover, and
/// connectivity predicates.
#[derive(Debug, Clone)]
pub struct IntersectionTable {
    pub n: usize,
    pub records: Vec<IntersectionRecord>,
}

impl IntersectionTable {
    pub fn compute(family: &SetFamily, caps: &Caps) -> Result<Self> {
        check_members(family, caps)?;
        let inters = family.nonempty_intersections(family.len(), caps.max_intersections)?;
        Self::from_intersections(family, &inters, caps)
    }

    pub(crate) fn from_intersections(
        family: &SetFamily,
        inters: &[(Vec<usize>, CellSet)],
        caps: &Caps,
    ) -> Result<Self> {
        let records = inters
            .par_iter()
            .map(|(g, cells)| {
                check_cap("cells in one intersection", cells.len(), caps.max_cells)?;
                let homology = reduced_homology(&family.chain_complex(cells)?)?;
                Ok(IntersectionRecord {
                    subfamily: g.clone(),
                    cells: cells.len(),
                    homology,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntersectionTable {
            n: family.len(),
            records,
        })
    }

    /// Smallest k for which the family is (k-|G|)-acyclic; 0 for a good cover.
    pub fn tightest_acyclic_k(&self) -> usize {
        self.records
            .iter()
            .filter_map(|r| r.homology.top_nonvanishing().map(|t| t + r.subfamily.len() + 1))
            .max()
            .unwrap_or(0)
    }
}

/// A subfamily intersection carrying homology where the predicate forbids it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub subfamily: Vec<usize>,
    pub dim: usize,
    #[serde(serialize_with = "serialize_group")]
    pub group: GroupSummary,
}

fn serialize_group<S: Serializer>(g: &GroupSummary, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(3))?;
    m.serialize_entry("betti", &g.betti)?;
    m.serialize_entry("torsion", &g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>())?;
    m.serialize_entry("group", &g.to_string())?;
    m.end()
}

#[derive(Debug, Clone, Serialize)]
pub struct AcyclicityReport {
    pub k: usize,
    pub verdict: bool,
    pub subfamilies_checked: usize,
    pub violations: Vec<Violation>,
}

impl AcyclicityReport {
    pub fn from_table(table: &IntersectionTable, k: usize) -> Self {
        let mut violations = Vec::new();
        for r in &table.records {
            for (n, g) in r.homology.groups.iter().enumerate() {
                if !g.is_zero() && n + r.subfamily.len() >= k {
                    violations.push(Violation {
                        subfamily: r.subfamily.clone(),
                        dim: n,
                        group: g.clone(),
                    });
                }
            }
        }
        AcyclicityReport {
            k,
            verdict: violations.is_empty(),
            subfamilies_checked: table.records.len(),
            violations,
        }
    }
}

/// Checks that every non-empty subfamily intersection has vanishing reduced
/// homology in all dimensions n >= k - |G|.
pub fn is_k_acyclic_family(family: &SetFamily, k: usize, caps: &Caps) -> Result<AcyclicityReport> {
    Ok(AcyclicityReport::from_table(&IntersectionTable::compute(family, caps)?, k))
}

#[derive(Debug, Clone, Serialize)]
pub struct GoodCoverReport {
    pub verdict: bool,
    pub witness: Option<Violation>,
}

/// Homological stand-in for a good cover: every non-empty intersection is
/// Z-acyclic.
pub fn is_good_cover_homological(family: &SetFamily, caps: &Caps) -> Result<GoodCoverReport> {
    Ok(good_cover_from_table(&IntersectionTable::compute(family, caps)?))
}

pub fn good_cover_from_table(table: &IntersectionTable) -> GoodCoverReport {
    let witness = AcyclicityReport::from_table(table, 0).violations.into_iter().next();
    GoodCoverReport {
        verdict: witness.is_none(),
        witness,
    }
}

/// Homological connectivity: the largest c with H~_n = 0 for all n <= c.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    /// c in {-1, 0, 1, ...}; -1 means non-empty but disconnected.
    Level(isize),
    /// All reduced homology vanishes.
    Acyclic,
}

impl Connectivity {
    pub fn of(h: &HomologyResult) -> Self {
        match h.bottom_nonvanishing() {
            None => Connectivity::Acyclic,
            Some(b) => Connectivity::Level(b as isize - 1),
        }
    }

    pub fn at_least(self, level: isize) -> bool {
        match self {
            Connectivity::Acyclic => true,
            Connectivity::Level(c) => c >= level,
        }
    }
}

impl Serialize for Connectivity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Connectivity::Level(c) => s.serialize_i64(*c as i64),
            Connectivity::Acyclic => s.serialize_str("acyclic"),
        }
    }
}

pub fn homological_connectivity(family: &SetFamily, cells: &CellSet) -> Result<Connectivity> {
    let c = family.chain_complex(cells)?;
    Ok(Connectivity::of(&reduced_homology(&c)?))
}

/// An induced subcomplex realizing the Leray number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LerayWitness {
    pub vertices: Vec<Vertex>,
    pub dim: usize,
    pub group: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LerayResult {
    pub leray: usize,
    pub induced_subcomplexes: usize,
    /// Worst induced subcomplex, absent when the number is 0.
    pub witness: Option<LerayWitness>,
}

/// Smallest d such that every induced subcomplex L has H~_n(L) = 0 for all
/// n >= d, by enumerating all vertex subsets.
pub fn leray_number(k: &SimplicialComplex, caps: &Caps) -> Result<LerayResult> {
    let verts = k.vertices();
    let v = verts.len();
    check_cap("vertices for induced-subcomplex enumeration", v, caps.max_vertices.min(30))?;
    let masks: Vec<u32> = k
        .faces()
        .iter()
        .map(|f| {
            f.iter()
                .map(|x| 1u32 << verts.binary_search(x).unwrap())
                .fold(0, |a, b| a | b)
        })
        .collect();
    let best = (1u32..(1u32 << v))
        .into_par_iter()
        .map(|s| -> Result<Option<(usize, u32, String)>> {
            let faces: BTreeSet<Vec<Vertex>> = masks
                .iter()
                .zip(k.faces())
                .filter(|(m, _)| *m & s == **m)
                .map(|(_, f)| f.clone())
                .collect();
            // a full simplex is acyclic
            if faces.len() as u64 == (1u64 << s.count_ones()) - 1 {
                return Ok(None);
            }
            let l = SimplicialComplex::from_closed(faces);
            let h = reduced_homology(&l.chain_complex())?;
            Ok(h.top_nonvanishing().map(|t| (t + 1, s, h.group(t).to_string())))
        })
        .try_fold(
            || None,
            |acc: Option<(usize, u32, String)>, x| x.map(|x| better(acc, x)),
        )
        .try_reduce(|| None, |a, b| Ok(better(a, b)))?;
    Ok(LerayResult {
        leray: best.as_ref().map_or(0, |b| b.0),
        induced_subcomplexes: (1usize << v) - 1,
        witness: best.map(|(d, s, group)| LerayWitness {
            vertices: (0..v).filter(|i| s >> i & 1 == 1).map(|i| verts[i]).collect(),
            dim: d - 1,
            group,
        }),
    })
}

// Deterministic choice: larger Leray bound first, then the smaller mask.
fn better(
    a: Option<(usize, u32, String)>,
    b: Option<(usize, u32, String)>,
) -> Option<(usize, u32, String)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if (b.0, std::cmp::Reverse(b.1)) > (a.0, std::cmp::Reverse(a.1)) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}
