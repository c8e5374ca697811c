use std::collections::{BTreeSet, HashMap};

use super::chain::ChainComplex;
use super::simplicial::{SimplicialComplex, Vertex};
use crate::error::{malformed, Result};
use crate::linalg::SparseMatrix;

/// An elementary cube in Z^d, stored in doubled coordinates: an even entry
/// `2a` is the degenerate interval [a, a], an odd entry `2a + 1` is [a, a + 1].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    coords: Vec<i64>,
}

impl Cube {
    pub fn from_intervals(intervals: &[(i64, i64)]) -> Result<Self> {
        let coords = intervals
            .iter()
            .map(|&(a, b)| match b - a {
                0 => Ok(2 * a),
                1 => Ok(2 * a + 1),
                _ => Err(malformed(format!("[{a}, {b}] is not an elementary interval"))),
            })
            .collect::<Result<_>>()?;
        Ok(Cube { coords })
    }

    pub fn vertex(point: &[i64]) -> Self {
        Cube {
            coords: point.iter().map(|&x| 2 * x).collect(),
        }
    }

    pub(crate) fn from_doubled(coords: Vec<i64>) -> Self {
        Cube { coords }
    }

    pub fn doubled(&self) -> &[i64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.iter().filter(|c| c.rem_euclid(2) == 1).count()
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn intervals(&self) -> Vec<(i64, i64)> {
        self.coords
            .iter()
            .map(|&c| {
                let a = c.div_euclid(2);
                (a, a + c.rem_euclid(2))
            })
            .collect()
    }

    /// Codimension-one faces with the cubical boundary coefficients:
    /// the k-th non-degenerate axis contributes (-1)^k (upper - lower).
    pub fn faces(&self) -> Vec<(Cube, i64)> {
        let mut out = Vec::with_capacity(2 * self.dim());
        let mut k = 0;
        for (axis, &c) in self.coords.iter().enumerate() {
            if c.rem_euclid(2) == 0 {
                continue;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let mut lower = self.coords.clone();
            lower[axis] = c - 1;
            let mut upper = self.coords.clone();
            upper[axis] = c + 1;
            out.push((Cube { coords: upper }, sign));
            out.push((Cube { coords: lower }, -sign));
            k += 1;
        }
        out
    }

    /// Lower corner of the cube and its non-degenerate axes.
    fn corner_and_axes(&self) -> (Vec<i64>, Vec<usize>) {
        let corner = self.coords.iter().map(|c| c.div_euclid(2)).collect();
        let axes = (0..self.coords.len())
            .filter(|&i| self.coords[i].rem_euclid(2) == 1)
            .collect();
        (corner, axes)
    }
}

/// A finite cubical complex in Z^d, always stored closed under faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicalComplex {
    dim: usize,
    cubes: Vec<Cube>,
    index: HashMap<Cube, usize>,
    boundaries: Vec<Vec<(usize, i64)>>,
}

impl CubicalComplex {
    /// Closure of the given elementary cubes.
    pub fn from_cubes(dim: usize, cubes: impl IntoIterator<Item = Cube>) -> Result<Self> {
        let mut closed = BTreeSet::new();
        let mut stack: Vec<Cube> = Vec::new();
        for c in cubes {
            if c.ambient_dim() != dim {
                return Err(malformed(format!(
                    "cube of ambient dimension {} in a {dim}-dimensional complex",
                    c.ambient_dim()
                )));
            }
            stack.push(c);
        }
        while let Some(c) = stack.pop() {
            if closed.contains(&c) {
                continue;
            }
            stack.extend(c.faces().into_iter().map(|(f, _)| f));
            closed.insert(c);
        }
        Ok(Self::from_closed(dim, closed))
    }

    /// All elementary cubes inside the closed boxes `[lo_i, hi_i]`.
    pub fn from_boxes(dim: usize, boxes: &[Vec<(i64, i64)>]) -> Result<Self> {
        let mut closed = BTreeSet::new();
        for b in boxes {
            closed.extend(box_cells(dim, b)?);
        }
        Ok(Self::from_closed(dim, closed))
    }

    /// The full grid [0, extent]^dim.
    pub fn grid(dim: usize, extent: i64) -> Result<Self> {
        Self::from_boxes(dim, &[vec![(0, extent); dim]])
    }

    fn from_closed(dim: usize, closed: BTreeSet<Cube>) -> Self {
        let mut cubes: Vec<Cube> = closed.into_iter().collect();
        cubes.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
        let index: HashMap<Cube, usize> =
            cubes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let boundaries = cubes
            .iter()
            .map(|c| c.faces().into_iter().map(|(f, s)| (index[&f], s)).collect())
            .collect();
        CubicalComplex {
            dim,
            cubes,
            index,
            boundaries,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Largest cube dimension, -1 when empty.
    pub fn dim(&self) -> isize {
        self.cubes.last().map_or(-1, |c| c.dim() as isize)
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn index_of(&self, c: &Cube) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub(crate) fn boundary_of_index(&self, i: usize) -> &[(usize, i64)] {
        &self.boundaries[i]
    }

    pub fn chain_complex(&self) -> ChainComplex {
        let top = (self.dim() + 1).max(0) as usize;
        let mut start = vec![0; top + 1];
        for p in 0..top {
            start[p + 1] = start[p] + self.cubes.iter().filter(|c| c.dim() == p).count();
        }
        let ranks: Vec<usize> = (0..top).map(|p| start[p + 1] - start[p]).collect();
        let boundaries = (1..top)
            .map(|p| {
                let (lo, lo_prev) = (start[p], start[p - 1]);
                let triplets = (lo..start[p + 1]).flat_map(|g| {
                    self.boundaries[g]
                        .iter()
                        .map(move |&(f, s)| (f - lo_prev, g - lo, s))
                });
                SparseMatrix::from_triplets(ranks[p - 1], ranks[p], triplets)
                    .expect("face indices are in range")
            })
            .collect();
        ChainComplex::from_parts_unchecked(ranks, boundaries)
    }

    /// Standard (Freudenthal) triangulation: the cube with lower corner v and
    /// axes A is cut into the simplices v, v+e_{a1}, v+e_{a1}+e_{a2}, ... for
    /// every ordering of A. Neighbouring cubes triangulate shared faces alike.
    pub fn triangulate(&self) -> SimplicialComplex {
        let mut faces = BTreeSet::new();
        let id = |p: &[i64]| -> Vertex {
            // Mixed radix over a 2^20-wide window per axis.
            p.iter()
                .fold(0i64, |acc, &x| acc * (1 << 20) + (x + (1 << 19)))
        };
        for c in &self.cubes {
            let (corner, axes) = c.corner_and_axes();
            for perm in permutations(&axes) {
                let mut p = corner.clone();
                let mut simplex = vec![id(&p)];
                for &a in &perm {
                    p[a] += 1;
                    simplex.push(id(&p));
                }
                simplex.sort_unstable();
                faces.insert(simplex);
            }
        }
        SimplicialComplex::from_facets(faces).expect("triangulation facets are non-empty")
    }
}

pub(crate) fn box_cells(dim: usize, b: &[(i64, i64)]) -> Result<Vec<Cube>> {
    if b.len() != dim {
        return Err(malformed(format!(
            "box with {} intervals in a {dim}-dimensional complex",
            b.len()
        )));
    }
    if let Some(&(lo, hi)) = b.iter().find(|(lo, hi)| hi < lo) {
        return Err(malformed(format!("interval [{lo}, {hi}] is reversed")));
    }
    let mut out = vec![Vec::with_capacity(dim)];
    for &(lo, hi) in b {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (2 * lo..=2 * hi).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(Cube::from_doubled).collect())
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_round_trip() {
        let c = Cube::from_intervals(&[(0, 1), (3, 3), (-2, -1)]).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.intervals(), vec![(0, 1), (3, 3), (-2, -1)]);
        assert!(Cube::from_intervals(&[(0, 2)]).is_err());
    }

    #[test]
    fn unit_square_closure() {
        let sq = Cube::from_intervals(&[(0, 1), (0, 1)]).unwrap();
        let k = CubicalComplex::from_cubes(2, [sq]).unwrap();
        assert_eq!(k.len(), 9);
        assert_eq!(k.dim(), 2);
    }

    #[test]
    fn box_cell_count() {
        let k = CubicalComplex::from_boxes(2, &[vec![(0, 2), (0, 3)]]).unwrap();
        // (2*2+1) * (2*3+1)
        assert_eq!(k.len(), 35);
        let g = CubicalComplex::grid(3, 2).unwrap();
        assert_eq!(g.len(), 125);
    }

    #[test]
    fn cubical_boundary_squares_to_zero() {
        let k = CubicalComplex::grid(3, 2).unwrap();
        k.chain_complex().verify().unwrap();
    }

    #[test]
    fn triangulated_square_has_two_triangles() {
        let k = CubicalComplex::from_boxes(2, &[vec![(0, 1), (0, 1)]]).unwrap();
        let t = k.triangulate();
        assert_eq!(t.faces_of_dim(2).len(), 2);
        assert_eq!(t.faces_of_dim(0).len(), 4);
        assert_eq!(t.faces_of_dim(1).len(), 5);
    }
}
