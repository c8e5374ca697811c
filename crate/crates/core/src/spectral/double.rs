use std::collections::HashMap;

use crate::complex::{CellSet, SetFamily};
use crate::config::Caps;
use crate::error::{check_cap, Error, Result};
use crate::linalg::SparseMatrix;

/// Where a basis element of a Mayer-Vietoris double complex comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisLabel {
    pub subfamily: Vec<usize>,
    pub cell: usize,
}

#[derive(Debug, Clone)]
struct Summand {
    subfamily: Vec<usize>,
    cells: CellSet,
    dim_offsets: Vec<usize>,
    /// Start of this summand's p-cells inside C_{p,q}, per p.
    block_offsets: Vec<usize>,
}

impl Summand {
    fn count(&self, p: usize) -> usize {
        match (self.dim_offsets.get(p), self.dim_offsets.get(p + 1)) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }
}

/// First-quadrant double complex of finite free modules C_{p,q} with a
/// horizontal differential (p,q) -> (p-1,q) and a vertical one
/// (p,q) -> (p,q-1).
#[derive(Debug, Clone)]
pub struct DoubleComplex {
    /// `ranks[q][p]`; every row has the same length.
    ranks: Vec<Vec<usize>>,
    horizontal: Vec<Vec<SparseMatrix>>,
    vertical: Vec<Vec<SparseMatrix>>,
    summands: Option<Vec<Vec<Summand>>>,
}

impl DoubleComplex {
    /// Validates shapes and the three identities ∂∂ = 0, ∂̃∂̃ = 0,
    /// ∂∂̃ + ∂̃∂ = 0.
    ///
    /// `horizontal[q][p]` maps C_{p,q} to C_{p-1,q} and `vertical[q][p]` maps
    /// C_{p,q} to C_{p,q-1}; entries for p = 0 (resp. q = 0) are ignored and
    /// may be omitted by passing zero-width matrices.
    pub fn new(
        ranks: Vec<Vec<usize>>,
        horizontal: Vec<Vec<SparseMatrix>>,
        vertical: Vec<Vec<SparseMatrix>>,
    ) -> Result<Self> {
        let width = ranks.first().map_or(0, Vec::len);
        if ranks.iter().any(|row| row.len() != width)
            || horizontal.len() != ranks.len()
            || vertical.len() != ranks.len()
            || horizontal.iter().chain(&vertical).any(|row| row.len() != width)
        {
            return Err(Error::Internal("double complex blocks do not form a grid".into()));
        }
        let d = DoubleComplex {
            ranks,
            horizontal,
            vertical,
            summands: None,
        };
        d.check_shapes()?;
        d.verify()?;
        Ok(d)
    }

    pub fn zero() -> Self {
        DoubleComplex {
            ranks: Vec::new(),
            horizontal: Vec::new(),
            vertical: Vec::new(),
            summands: None,
        }
    }

    fn check_shapes(&self) -> Result<()> {
        for q in 0..self.rows() {
            for p in 0..self.cols() {
                let r = self.rank(p, q);
                let h = &self.horizontal[q][p];
                let v = &self.vertical[q][p];
                let h_ok = h.ncols() == r && h.nrows() == if p == 0 { 0 } else { self.rank(p - 1, q) };
                let v_ok = v.ncols() == r && v.nrows() == if q == 0 { 0 } else { self.rank(p, q - 1) };
                if !h_ok || !v_ok {
                    return Err(Error::Internal(format!("differential shapes wrong at ({p},{q})")));
                }
            }
        }
        Ok(())
    }

    /// Number of columns p in the bounding box.
    pub fn cols(&self) -> usize {
        self.ranks.first().map_or(0, Vec::len)
    }

    /// Number of rows q in the bounding box.
    pub fn rows(&self) -> usize {
        self.ranks.len()
    }

    pub fn rank(&self, p: usize, q: usize) -> usize {
        self.ranks.get(q).and_then(|r| r.get(p)).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[Vec<usize>] {
        &self.ranks
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().flatten().sum()
    }

    /// Horizontal differential leaving (p, q).
    pub fn horizontal(&self, p: usize, q: usize) -> &SparseMatrix {
        &self.horizontal[q][p]
    }

    /// Vertical differential leaving (p, q).
    pub fn vertical(&self, p: usize, q: usize) -> &SparseMatrix {
        &self.vertical[q][p]
    }

    /// Exact check of ∂∂ = 0, ∂̃∂̃ = 0 and ∂∂̃ + ∂̃∂ = 0.
    pub fn verify(&self) -> Result<()> {
        for q in 0..self.rows() {
            for p in 0..self.cols() {
                if p >= 2 && !self.horizontal[q][p - 1].mul(&self.horizontal[q][p])?.is_zero() {
                    return Err(Error::Internal(format!("horizontal ∂∂ ≠ 0 at ({p},{q})")));
                }
                if q >= 2 && !self.vertical[q - 1][p].mul(&self.vertical[q][p])?.is_zero() {
                    return Err(Error::Internal(format!("vertical ∂̃∂̃ ≠ 0 at ({p},{q})")));
                }
                if p >= 1 && q >= 1 {
                    let a = self.horizontal[q - 1][p].mul(&self.vertical[q][p])?;
                    let b = self.vertical[q][p - 1].mul(&self.horizontal[q][p])?;
                    if !a.add(&b)?.is_zero() {
                        return Err(Error::Internal(format!(
                            "differentials do not anticommute at ({p},{q})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Origin of basis element `i` of C_{p,q}, for Mayer-Vietoris complexes.
    pub fn label(&self, p: usize, q: usize, i: usize) -> Option<BasisLabel> {
        let row = self.summands.as_ref()?.get(q)?;
        let s = row
            .iter()
            .rev()
            .find(|s| s.block_offsets.get(p).is_some_and(|&o| o <= i) && s.count(p) > 0)?;
        let local = i - s.block_offsets[p];
        if local >= s.count(p) {
            return None;
        }
        Some(BasisLabel {
            subfamily: s.subfamily.clone(),
            cell: s.cells.cell_at(s.dim_offsets[p] + local),
        })
    }
}

/// The Mayer-Vietoris double complex of a family:
/// C_{p,q} = ⊕_{|J| = q+1} C_p(⋂_J F_j), with ∂ the cellular boundary in
/// each summand and ∂̃ = (-1)^p Σ_i (-1)^i (inclusion into ⋂ J_i), where
/// J_i drops the i-th smallest index of J.
pub fn mayer_vietoris_double_complex(family: &SetFamily, caps: &Caps) -> Result<DoubleComplex> {
    check_cap("family members", family.len(), caps.max_members)?;
    let inters = family.nonempty_intersections(family.len(), caps.max_intersections)?;
    mayer_vietoris_from_intersections(family, &inters, caps)
}

pub(crate) fn mayer_vietoris_from_intersections(
    family: &SetFamily,
    inters: &[(Vec<usize>, CellSet)],
    caps: &Caps,
) -> Result<DoubleComplex> {
    let total: usize = inters.iter().map(|(_, c)| c.len()).sum();
    check_cap("total rank of the double complex", total, caps.max_total_rank)?;
    let ambient = family.ambient();
    let rows = inters.iter().map(|(g, _)| g.len()).max().unwrap_or(0);
    let cols = inters
        .iter()
        .map(|(_, c)| c.dim_offsets(ambient).len() - 1)
        .max()
        .unwrap_or(0);

    let mut summands: Vec<Vec<Summand>> = vec![Vec::new(); rows];
    let mut ranks = vec![vec![0usize; cols]; rows];
    for (g, cells) in inters {
        let q = g.len() - 1;
        let dim_offsets = cells.dim_offsets(ambient);
        let block_offsets = ranks[q].clone();
        for p in 0..cols {
            let n = dim_offsets.get(p + 1).map_or(0, |b| b - dim_offsets[p]);
            ranks[q][p] += n;
        }
        summands[q].push(Summand {
            subfamily: g.clone(),
            cells: cells.clone(),
            dim_offsets,
            block_offsets,
        });
    }
    let lookup: Vec<HashMap<&[usize], usize>> = summands
        .iter()
        .map(|row| row.iter().enumerate().map(|(i, s)| (s.subfamily.as_slice(), i)).collect())
        .collect();

    let mut horizontal = Vec::with_capacity(rows);
    let mut vertical = Vec::with_capacity(rows);
    for q in 0..rows {
        let mut h_row = Vec::with_capacity(cols);
        let mut v_row = Vec::with_capacity(cols);
        for p in 0..cols {
            let mut h = Vec::new();
            let mut v = Vec::new();
            for s in &summands[q] {
                for local in 0..s.count(p) {
                    let col = s.block_offsets[p] + local;
                    let cell = s.cells.cell_at(s.dim_offsets[p] + local);
                    if p > 0 {
                        for (f, sign) in ambient.boundary(cell) {
                            let pos = s.cells.position(f).ok_or_else(|| {
                                Error::Internal("intersection is not closed".into())
                            })?;
                            let row = s.block_offsets[p - 1] + pos - s.dim_offsets[p - 1];
                            h.push((row, col, sign));
                        }
                    }
                    if q > 0 {
                        let base = if p % 2 == 0 { 1 } else { -1 };
                        for i in 0..=q {
                            let mut face = s.subfamily.clone();
                            face.remove(i);
                            let t = &summands[q - 1][lookup[q - 1][face.as_slice()]];
                            let pos = t.cells.position(cell).ok_or_else(|| {
                                Error::Internal("cell missing from a larger intersection".into())
                            })?;
                            let row = t.block_offsets[p] + pos - t.dim_offsets[p];
                            let sign = if i % 2 == 0 { base } else { -base };
                            v.push((row, col, sign));
                        }
                    }
                }
            }
            let h_rows = if p == 0 { 0 } else { ranks[q][p - 1] };
            let v_rows = if q == 0 { 0 } else { ranks[q - 1][p] };
            h_row.push(SparseMatrix::from_triplets(h_rows, ranks[q][p], h)?);
            v_row.push(SparseMatrix::from_triplets(v_rows, ranks[q][p], v)?);
        }
        horizontal.push(h_row);
        vertical.push(v_row);
    }
    Ok(DoubleComplex {
        ranks,
        horizontal,
        vertical,
        summands: Some(summands),
    })
}
