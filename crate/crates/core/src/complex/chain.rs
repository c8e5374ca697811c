use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

/// Cellular chain complex C_top -> ... -> C_1 -> C_0 with integer boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    /// `boundaries[p - 1]` is the boundary C_p -> C_{p-1}.
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Validates shapes and the boundary condition.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self> {
        if boundaries.len() + 1 != ranks.len() && !(ranks.is_empty() && boundaries.is_empty()) {
            return Err(Error::Internal(format!(
                "{} chain groups need {} boundary maps, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        for (p, m) in boundaries.iter().enumerate() {
            let p = p + 1;
            if m.ncols() != ranks[p] || m.nrows() != ranks[p - 1] {
                return Err(Error::Internal(format!(
                    "boundary {p} is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    ranks[p - 1],
                    ranks[p]
                )));
            }
        }
        let c = Self::from_parts_unchecked(ranks, boundaries);
        c.verify()?;
        Ok(c)
    }

    pub(crate) fn from_parts_unchecked(mut ranks: Vec<usize>, mut boundaries: Vec<SparseMatrix>) -> Self {
        while ranks.last() == Some(&0) {
            ranks.pop();
            boundaries.pop();
        }
        boundaries.truncate(ranks.len().saturating_sub(1));
        ChainComplex { ranks, boundaries }
    }

    pub fn empty() -> Self {
        ChainComplex {
            ranks: Vec::new(),
            boundaries: Vec::new(),
        }
    }

    /// Checks that every composite of consecutive boundaries is exactly zero.
    pub fn verify(&self) -> Result<()> {
        for p in 1..self.boundaries.len() {
            let composite = self.boundaries[p - 1].mul(&self.boundaries[p])?;
            if !composite.is_zero() {
                return Err(Error::Internal(format!(
                    "boundary of boundary is non-zero in degree {}",
                    p + 1
                )));
            }
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, p: usize) -> usize {
        self.ranks.get(p).copied().unwrap_or(0)
    }

    /// Highest non-zero degree, or `None` for the empty complex.
    pub fn top_dim(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    /// The boundary map leaving degree `p`; degree 0 maps to the zero group.
    pub fn boundary(&self, p: usize) -> SparseMatrix {
        if p == 0 {
            return SparseMatrix::zeros(0, self.rank(0));
        }
        match self.boundaries.get(p - 1) {
            Some(m) => m.clone(),
            None => SparseMatrix::zeros(self.rank(p - 1), self.rank(p)),
        }
    }


    /// Augmentation C_0 -> Z sending every vertex to 1.
    pub fn augmentation(&self) -> SparseMatrix {
        let n = self.rank(0);
        SparseMatrix::from_triplets(1, n, (0..n).map(|j| (0, j, 1))).expect("in range")
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(p, &r)| if p % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }
}
