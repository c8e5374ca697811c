use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::linalg::{integer_invariants, rank_over, Characteristic, SparseMatrix};

/// One homology group: free rank plus torsion invariant factors.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GroupSummary {
    pub betti: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

impl GroupSummary {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for GroupSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Integer homology of a chain complex, indexed by dimension.
///
/// Dimensions past the end of `groups` are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyResult {
    pub reduced: bool,
    pub groups: Vec<GroupSummary>,
}

impl HomologyResult {
    pub fn group(&self, p: usize) -> GroupSummary {
        self.groups.get(p).cloned().unwrap_or_default()
    }

    pub fn betti(&self, p: usize) -> usize {
        self.groups.get(p).map_or(0, |g| g.betti)
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    pub fn torsion(&self, p: usize) -> &[BigInt] {
        self.groups.get(p).map_or(&[], |g| &g.torsion)
    }

    pub fn is_zero_at(&self, p: usize) -> bool {
        self.groups.get(p).is_none_or(|g| g.is_zero())
    }

    /// Every group vanishes.
    pub fn is_acyclic(&self) -> bool {
        self.groups.iter().all(GroupSummary::is_zero)
    }

    /// Highest dimension with a non-zero group.
    pub fn top_nonvanishing(&self) -> Option<usize> {
        self.groups.iter().rposition(|g| !g.is_zero())
    }

    /// Lowest dimension with a non-zero group.
    pub fn bottom_nonvanishing(&self) -> Option<usize> {
        self.groups.iter().position(|g| !g.is_zero())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .enumerate()
            .map(|(p, g)| if p % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) })
            .sum()
    }
}

impl Serialize for HomologyResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Groups<'a>(&'a [GroupSummary]);
        impl Serialize for Groups<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (p, g) in self.0.iter().enumerate() {
                    m.serialize_entry(&p.to_string(), g)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("reduced", &self.reduced)?;
        m.serialize_entry("groups", &Groups(&self.groups))?;
        m.end()
    }
}

/// Integers that fit in 64 bits are written as JSON numbers, larger ones as
/// decimal strings.
pub(crate) fn serialize_bigints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_i64() {
            Some(small) => seq.serialize_element(&small)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

fn degree_maps(c: &ChainComplex, reduced: bool) -> Vec<SparseMatrix> {
    // maps[p] is the map leaving degree p; degree 0 goes to Z when reduced
    let top = c.top_dim().map_or(0, |t| t + 1);
    (0..=top)
        .map(|p| {
            if p == 0 && reduced {
                c.augmentation()
            } else {
                c.boundary(p)
            }
        })
        .collect()
}

/// Integer homology, reduced via the augmented complex when `reduced` is set.
///
/// Reduced homology of the empty complex is reported as [`Error::EmptySpace`];
/// unreduced homology of it is simply all zero.
pub fn homology(c: &ChainComplex, reduced: bool) -> Result<HomologyResult> {
    if c.is_empty() {
        return if reduced {
            Err(Error::EmptySpace)
        } else {
            Ok(HomologyResult {
                reduced,
                groups: Vec::new(),
            })
        };
    }
    c.verify()?;
    let maps = degree_maps(c, reduced);
    let inv: Vec<_> = maps.iter().map(integer_invariants).collect();
    let groups = (0..c.ranks().len())
        .map(|p| GroupSummary {
            betti: c.rank(p) - inv[p].rank - inv[p + 1].rank,
            torsion: inv[p + 1].torsion.clone(),
        })
        .collect();
    Ok(HomologyResult { reduced, groups })
}

pub fn reduced_homology(c: &ChainComplex) -> Result<HomologyResult> {
    homology(c, true)
}

/// Unreduced Betti numbers over Q (characteristic 0) or F_p.
pub fn betti_numbers_field(c: &ChainComplex, ch: Characteristic) -> Vec<usize> {
    field_betti(c, ch, false)
}

/// Reduced Betti numbers over a field; the empty complex gives an empty list.
pub fn reduced_betti_field(c: &ChainComplex, ch: Characteristic) -> Vec<usize> {
    field_betti(c, ch, true)
}

fn field_betti(c: &ChainComplex, ch: Characteristic, reduced: bool) -> Vec<usize> {
    if c.is_empty() {
        return Vec::new();
    }
    let ranks: Vec<usize> = degree_maps(c, reduced).iter().map(|m| rank_over(ch, m)).collect();
    (0..c.ranks().len())
        .map(|p| c.rank(p) - ranks[p] - ranks[p + 1])
        .collect()
}

/// Betti numbers as a sparse `{dim: betti}` map holding only the non-zero ones.
pub fn nonzero_betti(b: &[usize]) -> BTreeMap<usize, usize> {
    b.iter().enumerate().filter(|(_, &v)| v > 0).map(|(p, &v)| (p, v)).collect()
}
