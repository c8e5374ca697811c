//! JSON documents for complexes and families.
//!
//! ```json
//! {
//!   "ambient": {"kind": "cubical", "dim": 2, "cells": [[[0, 4], [0, 4]]]},
//!   "members": {"A": [[[0, 2], [0, 2]]], "B": [[[1, 3], [1, 3]]]}
//! }
//! ```
//!
//! A cubical ambient lists closed integer boxes (one `[lo, hi]` per axis);
//! a simplicial ambient (`"kind": "simplicial"`) lists facets as vertex
//! lists. Member entries are boxes or simplices of the ambient, and each
//! member is the closure of its entries.

use std::path::Path;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::complex::{Ambient, CellSet, CubicalComplex, SetFamily, SimplicialComplex, Vertex};
use crate::config::Caps;
use crate::error::{check_cap, malformed, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AmbientDoc {
    Simplicial { facets: Vec<Vec<Vertex>> },
    Cubical { dim: usize, cells: Vec<Vec<[i64; 2]>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellDoc {
    Simplex(Vec<Vertex>),
    Box(Vec<[i64; 2]>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub ambient: AmbientDoc,
    #[serde(default)]
    pub members: IndexMap<String, Vec<CellDoc>>,
}

fn to_pairs(b: &[[i64; 2]]) -> Vec<(i64, i64)> {
    b.iter().map(|&[lo, hi]| (lo, hi)).collect()
}

impl AmbientDoc {
    pub fn build(&self, caps: &Caps) -> Result<Ambient> {
        match self {
            AmbientDoc::Simplicial { facets } => {
                let k = SimplicialComplex::from_facets(facets.iter().cloned())?;
                check_cap("cells in the ambient complex", k.num_faces(), caps.max_cells)?;
                Ok(Ambient::Simplicial(k))
            }
            AmbientDoc::Cubical { dim, cells } => {
                let mut estimate = 0usize;
                for b in cells {
                    if b.len() != *dim {
                        return Err(malformed(format!("box {b:?} does not have {dim} intervals")));
                    }
                    if b.iter().any(|&[lo, hi]| hi < lo || hi - lo > caps.max_extent as i64) {
                        return Err(malformed(format!("box {b:?} is empty or wider than the extent cap")));
                    }
                    let size = b.iter().map(|&[lo, hi]| (2 * (hi - lo) + 1) as usize).product::<usize>();
                    estimate = estimate.saturating_add(size);
                    check_cap("cells in the ambient complex", estimate, caps.max_cells)?;
                }
                let boxes: Vec<Vec<(i64, i64)>> = cells.iter().map(|b| to_pairs(b)).collect();
                Ok(Ambient::Cubical(CubicalComplex::from_boxes(*dim, &boxes)?))
            }
        }
    }

    pub fn from_ambient(a: &Ambient) -> Self {
        match a {
            Ambient::Simplicial(k) => AmbientDoc::Simplicial { facets: k.facets() },
            Ambient::Cubical(k) => {
                let all = a.all_cells();
                AmbientDoc::Cubical {
                    dim: k.ambient_dim(),
                    cells: describe_cubical(a, &all),
                }
            }
        }
    }
}

/// A single box when the set is a full box, otherwise its maximal cubes.
fn describe_cubical(a: &Ambient, cells: &CellSet) -> Vec<Vec<[i64; 2]>> {
    let labels: Vec<Vec<[i64; 2]>> = cells
        .iter()
        .map(|c| match a.label(c) {
            crate::complex::CellLabel::Cube(iv) => iv,
            crate::complex::CellLabel::Simplex(_) => unreachable!("cubical ambient"),
        })
        .collect();
    if let Some(first) = labels.first() {
        let bbox: Vec<[i64; 2]> = (0..first.len())
            .map(|i| {
                let lo = labels.iter().map(|b| b[i][0]).min().unwrap();
                let hi = labels.iter().map(|b| b[i][1]).max().unwrap();
                [lo, hi]
            })
            .collect();
        if let Ok(full) = a.box_cells(&to_pairs(&bbox)) {
            if full.len() == cells.len() {
                return vec![bbox];
            }
        }
    }
    maximal_cells(a, cells).into_iter().map(|c| labels[cells.position(c).unwrap()].clone()).collect()
}

fn maximal_cells(a: &Ambient, cells: &CellSet) -> Vec<usize> {
    let mut is_face = vec![false; cells.len()];
    for c in cells.iter() {
        for (f, _) in a.boundary(c) {
            if let Some(pos) = cells.position(f) {
                is_face[pos] = true;
            }
        }
    }
    cells.iter().zip(is_face).filter(|(_, f)| !f).map(|(c, _)| c).collect()
}

impl FamilyDoc {
    pub fn build(&self, caps: &Caps) -> Result<SetFamily> {
        let ambient = Arc::new(self.ambient.build(caps)?);
        let mut members = Vec::with_capacity(self.members.len());
        for (name, entries) in &self.members {
            let mut cells = Vec::new();
            for e in entries {
                let found = match e {
                    CellDoc::Simplex(s) => ambient.simplex_cells(s),
                    CellDoc::Box(b) => ambient.box_cells(&to_pairs(b)),
                }
                .map_err(|err| malformed(format!("member {name:?}: {err}")))?;
                cells.extend(found.into_iter().map(|c| c as u32));
            }
            members.push((name.clone(), CellSet::from_unsorted(cells)));
        }
        SetFamily::new(ambient, members)
    }

    pub fn from_family(f: &SetFamily) -> Self {
        let a = f.ambient();
        let members = f
            .names()
            .iter()
            .zip(f.members())
            .map(|(name, cells)| {
                let entries = match a {
                    Ambient::Simplicial(_) => maximal_cells(a, cells)
                        .into_iter()
                        .map(|c| match a.label(c) {
                            crate::complex::CellLabel::Simplex(s) => CellDoc::Simplex(s),
                            crate::complex::CellLabel::Cube(_) => unreachable!("simplicial ambient"),
                        })
                        .collect(),
                    Ambient::Cubical(_) => describe_cubical(a, cells).into_iter().map(CellDoc::Box).collect(),
                };
                (name.clone(), entries)
            })
            .collect();
        FamilyDoc {
            ambient: AmbientDoc::from_ambient(a),
            members,
        }
    }
}

pub fn parse_family(json: &str, caps: &Caps) -> Result<SetFamily> {
    let doc: FamilyDoc = serde_json::from_str(json)?;
    doc.build(caps)
}

pub fn read_family(path: &Path, caps: &Caps) -> Result<SetFamily> {
    parse_family(&std::fs::read_to_string(path)?, caps)
}

pub fn family_to_json(f: &SetFamily) -> String {
    serde_json::to_string_pretty(&FamilyDoc::from_family(f)).expect("documents always serialize")
}

/// Writes the family document, creating missing parent directories.
pub fn write_family(path: &Path, f: &SetFamily) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, family_to_json(f) + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubical_round_trip() {
        let json = r#"{
            "ambient": {"kind": "cubical", "dim": 2, "cells": [[[0, 4], [0, 4]]]},
            "members": {
                "A": [[[0, 2], [0, 2]]],
                "B": [[[1, 3], [1, 3]]],
                "L": [[[0, 2], [0, 0]], [[0, 0], [0, 2]]]
            }
        }"#;
        let f = parse_family(json, &Caps::default()).unwrap();
        assert_eq!(f.len(), 3);
        let doc = FamilyDoc::from_family(&f);
        assert_eq!(doc.members["A"], vec![CellDoc::Box(vec![[0, 2], [0, 2]])]);
        assert_eq!(doc.members["L"].len(), 4);
        let again = doc.build(&Caps::default()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn simplicial_round_trip() {
        let json = r#"{
            "ambient": {"kind": "simplicial", "facets": [[1, 2, 3], [3, 4]]},
            "members": {"e": [[1, 2]], "t": [[1, 2, 3]], "v": [[4]]}
        }"#;
        let f = parse_family(json, &Caps::default()).unwrap();
        let again = FamilyDoc::from_family(&f).build(&Caps::default()).unwrap();
        assert_eq!(again, f);
        assert_eq!(f.member(1).len(), 7);
    }

    #[test]
    fn bad_documents() {
        let caps = Caps::default();
        let outside = r#"{"ambient": {"kind": "cubical", "dim": 1, "cells": [[[0, 2]]]},
                          "members": {"x": [[[1, 5]]]}}"#;
        assert!(parse_family(outside, &caps).is_err());
        let unknown = r#"{"ambient": {"kind": "simplicial", "facets": [[1, 2]]},
                          "members": {"x": [[3]]}}"#;
        assert!(parse_family(unknown, &caps).is_err());
        let wrong_dim = r#"{"ambient": {"kind": "cubical", "dim": 2, "cells": [[[0, 2]]]}}"#;
        assert!(parse_family(wrong_dim, &caps).is_err());
        assert!(parse_family("{", &caps).is_err());
    }
}
