use super::double::DoubleComplex;
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

/// Which of the two canonical filtrations of a total complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Filtration {
    /// F_m = ⊕_{p <= m} C_{p,*}; its E^1 is the vertical homology.
    First,
    /// F̃_m = ⊕_{q <= m} C_{*,q}; its E^1 is the horizontal homology.
    Second,
}

/// Tot_n = ⊕_{p+q=n} C_{p,q} with d = ∂ + ∂̃.
///
/// The basis of Tot_n lists C_{0,n}, C_{1,n-1}, ..., C_{n,0} in that order.
#[derive(Debug, Clone)]
pub struct TotalComplex {
    /// `p_of[n][i]` is the column index p of basis element i of Tot_n.
    p_of: Vec<Vec<usize>>,
    /// `d[n]` maps Tot_n to Tot_{n-1}; `d[0]` has no rows.
    d: Vec<SparseMatrix>,
}

pub fn total_complex(dc: &DoubleComplex) -> Result<TotalComplex> {
    dc.verify()?;
    let top = dc.rows() + dc.cols();
    // offsets[n][p]: start of C_{p,n-p} inside Tot_n
    let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(top);
    let mut p_of = Vec::with_capacity(top);
    for n in 0..top {
        let mut off = Vec::with_capacity(n + 1);
        let mut ps = Vec::new();
        for p in 0..=n {
            off.push(ps.len());
            ps.extend(std::iter::repeat_n(p, dc.rank(p, n - p)));
        }
        offsets.push(off);
        p_of.push(ps);
    }
    let mut d = Vec::with_capacity(top);
    for n in 0..top {
        let nrows = if n == 0 { 0 } else { p_of[n - 1].len() };
        let mut triplets = Vec::new();
        if n > 0 {
            for p in 0..=n {
                let q = n - p;
                if dc.rank(p, q) == 0 {
                    continue;
                }
                let col0 = offsets[n][p];
                if p > 0 {
                    let row0 = offsets[n - 1][p - 1];
                    for (j, col) in dc.horizontal(p, q).columns().enumerate() {
                        triplets.extend(col.iter().map(|&(i, v)| (row0 + i, col0 + j, v)));
                    }
                }
                if q > 0 {
                    let row0 = offsets[n - 1][p];
                    for (j, col) in dc.vertical(p, q).columns().enumerate() {
                        triplets.extend(col.iter().map(|&(i, v)| (row0 + i, col0 + j, v)));
                    }
                }
            }
        }
        d.push(SparseMatrix::from_triplets(nrows, p_of[n].len(), triplets)?);
    }
    while p_of.last().is_some_and(Vec::is_empty) {
        p_of.pop();
        d.pop();
    }
    let t = TotalComplex { p_of, d };
    t.verify()?;
    Ok(t)
}

impl TotalComplex {
    pub fn top_degree(&self) -> Option<usize> {
        self.p_of.len().checked_sub(1)
    }

    pub fn rank(&self, n: usize) -> usize {
        self.p_of.get(n).map_or(0, Vec::len)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.p_of.iter().map(Vec::len).collect()
    }

    /// Total differential leaving degree n.
    pub fn differential(&self, n: usize) -> SparseMatrix {
        match self.d.get(n) {
            Some(m) => m.clone(),
            None => SparseMatrix::zeros(self.rank(n.saturating_sub(1)), 0),
        }
    }

    pub(crate) fn differential_ref(&self, n: usize) -> Option<&SparseMatrix> {
        self.d.get(n)
    }

    /// Filtration index of every basis element of Tot_n.
    pub fn filtration_values(&self, n: usize, which: Filtration) -> Vec<usize> {
        let ps = self.p_of.get(n).map_or(&[][..], Vec::as_slice);
        match which {
            Filtration::First => ps.to_vec(),
            Filtration::Second => ps.iter().map(|&p| n - p).collect(),
        }
    }

    /// Largest filtration index carried by any basis element.
    pub fn max_filtration(&self, which: Filtration) -> usize {
        (0..self.p_of.len())
            .flat_map(|n| self.filtration_values(n, which))
            .max()
            .unwrap_or(0)
    }

    /// Checks d∘d = 0 and that d never raises either filtration.
    pub fn verify(&self) -> Result<()> {
        for n in 2..self.d.len() {
            if !self.d[n - 1].mul(&self.d[n])?.is_zero() {
                return Err(Error::Internal(format!("total d∘d ≠ 0 in degree {n}")));
            }
        }
        for which in [Filtration::First, Filtration::Second] {
            for n in 1..self.d.len() {
                let src = self.filtration_values(n, which);
                let dst = self.filtration_values(n - 1, which);
                for (j, col) in self.d[n].columns().enumerate() {
                    if col.iter().any(|&(i, _)| dst[i] > src[j]) {
                        return Err(Error::Internal(format!(
                            "total differential raises the {which:?} filtration in degree {n}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The underlying chain complex (forgetting the bigrading).
    pub fn chain_complex(&self) -> ChainComplex {
        let ranks = self.ranks();
        let boundaries = self.d.iter().skip(1).cloned().collect();
        ChainComplex::from_parts_unchecked(ranks, boundaries)
    }
}
