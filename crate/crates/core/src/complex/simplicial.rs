use std::collections::{BTreeSet, HashMap};

use super::chain::ChainComplex;
use crate::error::{malformed, Result};
use crate::linalg::SparseMatrix;

pub type Vertex = i64;

/// Largest facet accepted; closing it produces 2^size - 1 faces.
pub const MAX_FACET_SIZE: usize = 24;

/// A finite abstract simplicial complex.
///
/// Faces are stored sorted by (size, lexicographic vertex order) and each
/// face keeps its vertices ascending, which fixes the boundary signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<Vertex>,
    faces: Vec<Vec<Vertex>>,
    /// `dim_start[p]..dim_start[p + 1]` are the p-faces.
    dim_start: Vec<usize>,
    index: HashMap<Vec<Vertex>, usize>,
}

impl Default for SimplicialComplex {
    fn default() -> Self {
        Self::from_closed(BTreeSet::new())
    }
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Downward closure of the given facets.
    pub fn from_facets<I, F>(facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = Vertex>,
    {
        let mut closed = BTreeSet::new();
        for facet in facets {
            let mut f: Vec<Vertex> = facet.into_iter().collect();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                return Err(malformed("empty vertex set among the facets"));
            }
            if f.len() > MAX_FACET_SIZE {
                return Err(malformed(format!(
                    "facet with {} vertices exceeds the supported {MAX_FACET_SIZE}",
                    f.len()
                )));
            }
            if closed.contains(&f) {
                continue;
            }
            for mask in 1u32..(1 << f.len()) {
                let face: Vec<Vertex> = f
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                closed.insert(face);
            }
        }
        Ok(Self::from_closed(closed))
    }

    /// The full simplex on `vertices` (every non-empty subset is a face).
    pub fn simplex(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let v: Vec<Vertex> = vertices.into_iter().collect();
        if v.is_empty() {
            return Ok(Self::empty());
        }
        Self::from_facets([v])
    }

    /// `faces` must already be downward closed with sorted entries.
    pub(crate) fn from_closed(faces: BTreeSet<Vec<Vertex>>) -> Self {
        let mut faces: Vec<Vec<Vertex>> = faces.into_iter().collect();
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let vertices: Vec<Vertex> = faces.iter().filter(|f| f.len() == 1).map(|f| f[0]).collect();
        let top = faces.last().map_or(0, Vec::len);
        let mut dim_start = vec![0; top + 1];
        for p in 0..top {
            dim_start[p + 1] = dim_start[p] + faces.iter().filter(|f| f.len() == p + 1).count();
        }
        let index = faces.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        SimplicialComplex {
            vertices,
            faces,
            dim_start,
            index,
        }
    }

    /// Dimension, -1 for the empty complex.
    pub fn dim(&self) -> isize {
        self.dim_start.len() as isize - 2
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Vec<Vertex>] {
        &self.faces
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn faces_of_dim(&self, p: usize) -> &[Vec<Vertex>] {
        if p + 1 >= self.dim_start.len() {
            return &[];
        }
        &self.faces[self.dim_start[p]..self.dim_start[p + 1]]
    }

    pub fn index_of(&self, face: &[Vertex]) -> Option<usize> {
        self.index.get(face).copied()
    }

    pub fn contains(&self, face: &[Vertex]) -> bool {
        self.index.contains_key(face)
    }

    /// Maximal faces, in storage order.
    pub fn facets(&self) -> Vec<Vec<Vertex>> {
        let mut covered = vec![false; self.faces.len()];
        for f in &self.faces {
            for (i, _) in self.boundary(f) {
                covered[i] = true;
            }
        }
        self.faces
            .iter()
            .zip(covered)
            .filter(|(_, c)| !c)
            .map(|(f, _)| f.clone())
            .collect()
    }

    /// Codimension-one faces of `face` with their signs (-1)^position.
    pub(crate) fn boundary(&self, face: &[Vertex]) -> Vec<(usize, i64)> {
        if face.len() < 2 {
            return Vec::new();
        }
        (0..face.len())
            .map(|t| {
                let sub: Vec<Vertex> = face
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != t)
                    .map(|(_, &v)| v)
                    .collect();
                let sign = if t % 2 == 0 { 1 } else { -1 };
                (self.index[&sub], sign)
            })
            .collect()
    }

    pub(crate) fn boundary_of_index(&self, i: usize) -> Vec<(usize, i64)> {
        self.boundary(&self.faces[i])
    }

    /// Faces whose vertices all lie in `s`.
    pub fn induced(&self, s: &[Vertex]) -> Result<SimplicialComplex> {
        for v in s {
            if self.vertices.binary_search(v).is_err() {
                return Err(malformed(format!("vertex {v} is not in the complex")));
            }
        }
        Ok(self.induced_unchecked(s))
    }

    pub(crate) fn induced_unchecked(&self, s: &[Vertex]) -> SimplicialComplex {
        let keep: BTreeSet<Vertex> = s.iter().copied().collect();
        let faces = self
            .faces
            .iter()
            .filter(|f| f.iter().all(|v| keep.contains(v)))
            .cloned()
            .collect();
        Self::from_closed(faces)
    }

    /// Simplicial chain complex with ascending-vertex orientation.
    pub fn chain_complex(&self) -> ChainComplex {
        let top = self.dim_start.len().saturating_sub(1);
        let ranks: Vec<usize> = (0..top).map(|p| self.faces_of_dim(p).len()).collect();
        let mut boundaries = Vec::with_capacity(top.saturating_sub(1));
        for p in 1..top {
            let (lo, cur) = (self.dim_start[p - 1], self.dim_start[p]);
            let triplets = self.faces_of_dim(p).iter().enumerate().flat_map(|(j, f)| {
                self.boundary(f)
                    .into_iter()
                    .map(move |(i, s)| (i - lo, j, s))
            });
            let m = SparseMatrix::from_triplets(cur - lo, ranks[p], triplets)
                .expect("face indices are in range");
            boundaries.push(m);
        }
        ChainComplex::from_parts_unchecked(ranks, boundaries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_gives_empty_complex() {
        let k = SimplicialComplex::from_facets(Vec::<Vec<Vertex>>::new()).unwrap();
        assert_eq!(k.dim(), -1);
        assert_eq!(k.num_faces(), 0);
    }

    #[test]
    fn triangle_closure() {
        let k = SimplicialComplex::from_facets([[1, 2, 3]]).unwrap();
        assert_eq!(k.num_faces(), 7);
        assert_eq!(k.dim(), 2);
        assert_eq!(k.facets(), vec![vec![1, 2, 3]]);
    }

    #[test]
    fn hollow_triangle() {
        let k = SimplicialComplex::from_facets([[1, 2], [2, 3], [1, 3]]).unwrap();
        assert_eq!(k.num_faces(), 6);
        assert_eq!(k.dim(), 1);
    }

    #[test]
    fn empty_facet_is_rejected() {
        assert!(SimplicialComplex::from_facets([vec![1, 2], vec![]]).is_err());
    }

    #[test]
    fn induced_subcomplexes() {
        let full = SimplicialComplex::from_facets([[1, 2, 3]]).unwrap();
        let e = full.induced(&[1, 2]).unwrap();
        assert_eq!(e.faces(), &[vec![1], vec![2], vec![1, 2]]);
        assert!(full.induced(&[]).unwrap().is_empty());
        assert!(full.induced(&[4]).is_err());

        let circle = SimplicialComplex::from_facets([[1, 2], [2, 3], [1, 3]]).unwrap();
        let e = circle.induced(&[1, 3]).unwrap();
        assert_eq!(e.faces(), &[vec![1], vec![3], vec![1, 3]]);
    }

    #[test]
    fn induced_is_idempotent() {
        let k = SimplicialComplex::from_facets([vec![1, 2, 3], vec![3, 4], vec![4, 5, 6]]).unwrap();
        let once = k.induced(&[2, 3, 4, 6]).unwrap();
        let twice = once.induced(&[2, 3, 4, 6]).unwrap();
        assert_eq!(once, twice);
    }
}
