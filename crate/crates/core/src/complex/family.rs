use std::collections::HashSet;
use std::sync::Arc;

use super::chain::ChainComplex;
use super::cubical::{Cube, CubicalComplex};
use super::simplicial::{SimplicialComplex, Vertex};
use crate::error::{check_cap, malformed, Error, Result};
use crate::linalg::SparseMatrix;

/// The complex every member of a family lives in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ambient {
    Simplicial(SimplicialComplex),
    Cubical(CubicalComplex),
}

/// Human-readable name of one ambient cell.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(untagged)]
pub enum CellLabel {
    Simplex(Vec<Vertex>),
    Cube(Vec<[i64; 2]>),
}

impl Ambient {
    pub fn num_cells(&self) -> usize {
        match self {
            Ambient::Simplicial(k) => k.num_faces(),
            Ambient::Cubical(k) => k.len(),
        }
    }

    pub fn cell_dim(&self, i: usize) -> usize {
        match self {
            Ambient::Simplicial(k) => k.faces()[i].len() - 1,
            Ambient::Cubical(k) => k.cubes()[i].dim(),
        }
    }

    /// Largest cell dimension, -1 when empty.
    pub fn dim(&self) -> isize {
        match self {
            Ambient::Simplicial(k) => k.dim(),
            Ambient::Cubical(k) => k.dim(),
        }
    }

    /// Dimension of the Euclidean space the complex sits in (grid dimension
    /// for cubical complexes, own dimension for simplicial ones).
    pub fn embedding_dim(&self) -> usize {
        match self {
            Ambient::Simplicial(k) => k.dim().max(0) as usize,
            Ambient::Cubical(k) => k.ambient_dim(),
        }
    }

    /// Smallest d such that every subcomplex has H_n = 0 for n >= d. A
    /// cubical complex in R^d has no d-cycles; a simplicial complex can
    /// carry cycles in its top dimension.
    pub fn homological_dim(&self) -> usize {
        match self {
            Ambient::Simplicial(k) => (k.dim() + 1).max(0) as usize,
            Ambient::Cubical(k) => k.ambient_dim(),
        }
    }

    pub(crate) fn boundary(&self, i: usize) -> Vec<(usize, i64)> {
        match self {
            Ambient::Simplicial(k) => k.boundary_of_index(i),
            Ambient::Cubical(k) => k.boundary_of_index(i).to_vec(),
        }
    }

    pub fn label(&self, i: usize) -> CellLabel {
        match self {
            Ambient::Simplicial(k) => CellLabel::Simplex(k.faces()[i].clone()),
            Ambient::Cubical(k) => CellLabel::Cube(
                k.cubes()[i].intervals().into_iter().map(|(a, b)| [a, b]).collect(),
            ),
        }
    }

    pub fn all_cells(&self) -> CellSet {
        CellSet::from_sorted((0..self.num_cells() as u32).collect())
    }

    pub fn chain_complex(&self) -> ChainComplex {
        match self {
            Ambient::Simplicial(k) => k.chain_complex(),
            Ambient::Cubical(k) => k.chain_complex(),
        }
    }

    /// Cell indices of the closure of one simplex / one cube.
    pub fn simplex_cells(&self, simplex: &[Vertex]) -> Result<Vec<usize>> {
        let Ambient::Simplicial(k) = self else {
            return Err(malformed("simplex given for a cubical ambient"));
        };
        let mut s = simplex.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.is_empty() {
            return Err(malformed("empty simplex"));
        }
        if !k.contains(&s) {
            return Err(malformed(format!("simplex {s:?} is not in the ambient complex")));
        }
        let sub = SimplicialComplex::from_facets([s])?;
        Ok(sub.faces().iter().map(|f| k.index_of(f).unwrap()).collect())
    }

    pub fn box_cells(&self, b: &[(i64, i64)]) -> Result<Vec<usize>> {
        let Ambient::Cubical(k) = self else {
            return Err(malformed("box given for a simplicial ambient"));
        };
        super::cubical::box_cells(k.ambient_dim(), b)?
            .iter()
            .map(|c| {
                k.index_of(c).ok_or_else(|| {
                    malformed(format!("cube {:?} is not in the ambient complex", c.intervals()))
                })
            })
            .collect()
    }

    pub fn cube_index(&self, c: &Cube) -> Option<usize> {
        match self {
            Ambient::Cubical(k) => k.index_of(c),
            Ambient::Simplicial(_) => None,
        }
    }

    /// Downward closure of a set of ambient cells.
    pub fn closure(&self, cells: impl IntoIterator<Item = usize>) -> CellSet {
        let mut seen = HashSet::new();
        let mut stack: Vec<usize> = cells.into_iter().collect();
        while let Some(c) = stack.pop() {
            if seen.insert(c) {
                stack.extend(self.boundary(c).into_iter().map(|(f, _)| f));
            }
        }
        CellSet::from_unsorted(seen.into_iter().map(|c| c as u32).collect())
    }
}

/// A set of ambient cells, kept sorted by ambient index. Because ambient
/// cells are ordered by dimension, the cells of each dimension are contiguous.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CellSet {
    cells: Vec<u32>,
}

impl CellSet {
    pub fn from_sorted(cells: Vec<u32>) -> Self {
        debug_assert!(cells.windows(2).all(|w| w[0] < w[1]));
        CellSet { cells }
    }

    pub fn from_unsorted(mut cells: Vec<u32>) -> Self {
        cells.sort_unstable();
        cells.dedup();
        CellSet { cells }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().map(|&c| c as usize)
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.position(cell).is_some()
    }

    /// Index of `cell` within the sorted set.
    pub fn position(&self, cell: usize) -> Option<usize> {
        self.cells.binary_search(&(cell as u32)).ok()
    }

    pub fn cell_at(&self, pos: usize) -> usize {
        self.cells[pos] as usize
    }

    /// `offsets[p]..offsets[p + 1]` are the positions of the p-cells.
    pub fn dim_offsets(&self, ambient: &Ambient) -> Vec<usize> {
        let top = self.cells.last().map_or(0, |&c| ambient.cell_dim(c as usize) + 1);
        let mut offsets = vec![0usize; top + 1];
        for c in self.iter() {
            offsets[ambient.cell_dim(c) + 1] += 1;
        }
        for p in 0..top {
            offsets[p + 1] += offsets[p];
        }
        offsets
    }

    pub fn intersection(&self, other: &CellSet) -> CellSet {
        let (a, b) = (&self.cells, &other.cells);
        let mut out = Vec::with_capacity(a.len().min(b.len()));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        CellSet { cells: out }
    }

    pub fn intersects(&self, other: &CellSet) -> bool {
        let (a, b) = (&self.cells, &other.cells);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        let mut cells: Vec<u32> = self.cells.iter().chain(&other.cells).copied().collect();
        cells.sort_unstable();
        cells.dedup();
        CellSet { cells }
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.intersection(other).len() == self.len()
    }

    /// True when every face of every cell is in the set.
    pub fn is_closed_in(&self, ambient: &Ambient) -> bool {
        self.iter()
            .all(|c| ambient.boundary(c).iter().all(|&(f, _)| self.contains(f)))
    }

    /// Cellular chain complex of the subcomplex.
    pub fn chain_complex(&self, ambient: &Ambient) -> Result<ChainComplex> {
        let start = self.dim_offsets(ambient);
        let top = start.len() - 1;
        let ranks: Vec<usize> = (0..top).map(|p| start[p + 1] - start[p]).collect();
        let mut boundaries = Vec::with_capacity(top.saturating_sub(1));
        for p in 1..top {
            let mut triplets = Vec::new();
            for pos in start[p]..start[p + 1] {
                for (f, s) in ambient.boundary(self.cells[pos] as usize) {
                    let fpos = self.position(f).ok_or_else(|| {
                        Error::Internal(format!("cell set is not closed: face {f} missing"))
                    })?;
                    triplets.push((fpos - start[p - 1], pos - start[p], s));
                }
            }
            boundaries.push(SparseMatrix::from_triplets(ranks[p - 1], ranks[p], triplets)?);
        }
        Ok(ChainComplex::from_parts_unchecked(ranks, boundaries))
    }
}

/// A named, ordered family of subcomplexes F_0, ..., F_{n-1} of one ambient complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    ambient: Arc<Ambient>,
    names: Vec<String>,
    members: Vec<CellSet>,
}

impl SetFamily {
    pub fn new(ambient: Arc<Ambient>, members: Vec<(String, CellSet)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let n = ambient.num_cells();
        for (name, cells) in &members {
            if !seen.insert(name.as_str()) {
                return Err(malformed(format!("duplicate member name {name:?}")));
            }
            if cells.iter().any(|c| c >= n) {
                return Err(malformed(format!("member {name:?} uses cells outside the ambient")));
            }
            if !cells.is_closed_in(&ambient) {
                return Err(malformed(format!("member {name:?} is not closed under faces")));
            }
        }
        let (names, members) = members.into_iter().unzip();
        Ok(SetFamily {
            ambient,
            names,
            members,
        })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn ambient_arc(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn members(&self) -> &[CellSet] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &CellSet {
        &self.members[i]
    }

    fn check_index_set(&self, indices: &[usize]) -> Result<()> {
        if indices.is_empty() {
            return Err(malformed("index set must be non-empty"));
        }
        if let Some(&i) = indices.iter().find(|&&i| i >= self.len()) {
            return Err(malformed(format!("member index {i} out of range (n = {})", self.len())));
        }
        Ok(())
    }

    /// Cells common to all members indexed by `indices`.
    pub fn intersection(&self, indices: &[usize]) -> Result<CellSet> {
        self.check_index_set(indices)?;
        let mut acc = self.members[indices[0]].clone();
        for &i in &indices[1..] {
            acc = acc.intersection(&self.members[i]);
        }
        Ok(acc)
    }

    pub fn union(&self, indices: &[usize]) -> Result<CellSet> {
        self.check_index_set(indices)?;
        Ok(self.union_of(indices))
    }

    fn union_of(&self, indices: &[usize]) -> CellSet {
        let cells = indices
            .iter()
            .flat_map(|&i| self.members[i].cells.iter().copied())
            .collect();
        CellSet::from_unsorted(cells)
    }

    /// Union of every member (empty for the empty family).
    pub fn union_all(&self) -> CellSet {
        self.union_of(&(0..self.len()).collect::<Vec<_>>())
    }

    pub fn subfamily(&self, indices: &[usize]) -> Result<SetFamily> {
        if let Some(&i) = indices.iter().find(|&&i| i >= self.len()) {
            return Err(malformed(format!("member index {i} out of range")));
        }
        Ok(SetFamily {
            ambient: Arc::clone(&self.ambient),
            names: indices.iter().map(|&i| self.names[i].clone()).collect(),
            members: indices.iter().map(|&i| self.members[i].clone()).collect(),
        })
    }

    pub fn chain_complex(&self, cells: &CellSet) -> Result<ChainComplex> {
        cells.chain_complex(&self.ambient)
    }

    /// Every non-empty intersection of at most `max_size` members, by
    /// increasing subfamily size and lexicographically within a size.
    /// Supersets of an empty intersection are never visited.
    pub fn nonempty_intersections(
        &self,
        max_size: usize,
        cap: usize,
    ) -> Result<Vec<(Vec<usize>, CellSet)>> {
        let mut out = Vec::new();
        let mut level: Vec<(Vec<usize>, CellSet)> = self
            .members
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_empty())
            .map(|(i, m)| (vec![i], m.clone()))
            .collect();
        let mut size = 1;
        while !level.is_empty() && size <= max_size {
            check_cap("non-empty subfamily intersections", out.len() + level.len(), cap)?;
            let mut next = Vec::new();
            if size < max_size {
                for (g, cells) in &level {
                    for j in g.last().unwrap() + 1..self.len() {
                        let inter = cells.intersection(&self.members[j]);
                        if !inter.is_empty() {
                            let mut h = g.clone();
                            h.push(j);
                            next.push((h, inter));
                        }
                    }
                }
            }
            out.append(&mut level);
            level = next;
            size += 1;
        }
        Ok(out)
    }
}
