use crate::error::{Error, Result};

/// Column-major sparse integer matrix. Each column is sorted by row index
/// and never stores explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    /// Builds a matrix from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); ncols];
        for (r, c, v) in triplets {
            if r >= nrows || c >= ncols {
                return Err(Error::Internal(format!(
                    "entry ({r},{c}) outside a {nrows}x{ncols} matrix"
                )));
            }
            cols[c].push((r, v));
        }
        for col in &mut cols {
            normalize(col)?;
        }
        Ok(SparseMatrix { nrows, ncols, cols })
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut cols = vec![Vec::new(); ncols];
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    cols[c].push((r, v));
                }
            }
        }
        SparseMatrix { nrows, ncols, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.cols[j]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[(usize, i64)]> {
        self.cols.iter().map(Vec::as_slice)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.cols[c]
            .binary_search_by_key(&r, |&(row, _)| row)
            .map_or(0, |i| self.cols[c][i].1)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.ncols]; self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                out[r][c] = v;
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols = vec![Vec::new(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                cols[r].push((c, v));
            }
        }
        SparseMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            cols,
        }
    }

    /// Exact product `self * rhs`; overflow is reported, never wrapped.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols != rhs.nrows {
            return Err(Error::Internal(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        let mut cols = Vec::with_capacity(rhs.ncols);
        for rcol in &rhs.cols {
            let mut acc: Vec<(usize, i64)> = Vec::new();
            for &(k, b) in rcol {
                for &(i, a) in &self.cols[k] {
                    let v = a.checked_mul(b).ok_or_else(overflow)?;
                    acc.push((i, v));
                }
            }
            normalize(&mut acc)?;
            cols.push(acc);
        }
        Ok(SparseMatrix {
            nrows: self.nrows,
            ncols: rhs.ncols,
            cols,
        })
    }

    pub fn add(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.nrows != rhs.nrows || self.ncols != rhs.ncols {
            return Err(Error::Internal(format!(
                "cannot add {}x{} and {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(a, b)| {
                let mut col: Vec<_> = a.iter().chain(b).copied().collect();
                normalize(&mut col).map(|_| col)
            })
            .collect::<Result<_>>()?;
        Ok(SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            cols,
        })
    }

    /// Keeps the listed rows and columns (in the given order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut row_map = vec![usize::MAX; self.nrows];
        for (new, &old) in rows.iter().enumerate() {
            row_map[old] = new;
        }
        let cols = cols
            .iter()
            .map(|&c| {
                let mut col: Vec<(usize, i64)> = self.cols[c]
                    .iter()
                    .filter(|&&(r, _)| row_map[r] != usize::MAX)
                    .map(|&(r, v)| (row_map[r], v))
                    .collect();
                col.sort_unstable_by_key(|&(r, _)| r);
                col
            })
            .collect::<Vec<_>>();
        SparseMatrix {
            nrows: rows.len(),
            ncols: cols.len(),
            cols,
        }
    }
}

fn overflow() -> Error {
    Error::Internal("integer overflow in sparse matrix arithmetic".into())
}

fn normalize(col: &mut Vec<(usize, i64)>) -> Result<()> {
    col.sort_unstable_by_key(|&(r, _)| r);
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(col.len());
    for &(r, v) in col.iter() {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 = last.1.checked_add(v).ok_or_else(overflow)?,
            _ => out.push((r, v)),
        }
    }
    out.retain(|&(_, v)| v != 0);
    *col = out;
    Ok(())
}
