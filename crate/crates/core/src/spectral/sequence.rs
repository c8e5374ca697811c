use serde::{Deserialize, Serialize};

use super::total::{Filtration, TotalComplex};
use crate::error::{Error, Result};
use crate::linalg::field::{convert_column, reduce_lows};
use crate::linalg::{Characteristic, Field, PrimeField, Rationals};

/// Coefficient ring requested for a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Integers,
    Field(Characteristic),
}

/// A non-zero block of the differential d^r on page r.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DifferentialBlock {
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub rank: usize,
}

impl DifferentialBlock {
    /// Matrix of the block (rows: target, columns: source) in representative
    /// bases listing the paired classes first, where it is a partial identity.
    pub fn matrix(&self, page: &SpectralPage) -> Vec<Vec<u8>> {
        let rows = page.dim(self.target.0, self.target.1);
        let cols = page.dim(self.source.0, self.source.1);
        (0..rows)
            .map(|i| (0..cols).map(|j| u8::from(i == j && i < self.rank)).collect())
            .collect()
    }
}

/// Page E^r of one of the two spectral sequences, in the double complex's
/// own (p, q) coordinates regardless of the filtration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralPage {
    pub r: usize,
    pub filtration: Filtration,
    /// `dims[q][p]` = dim E^r_{p,q}.
    pub dims: Vec<Vec<usize>>,
    pub differentials: Vec<DifferentialBlock>,
}

impl SpectralPage {
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.dims.get(q).and_then(|row| row.get(p)).copied().unwrap_or(0)
    }

    /// Σ_{p+q=n} dim E^r_{p,q}.
    pub fn diagonal_sum(&self, n: usize) -> usize {
        (0..=n).map(|p| self.dim(p, n - p)).sum()
    }

    /// Rank of d^r leaving (p, q).
    pub fn rank_out(&self, p: usize, q: usize) -> usize {
        self.differentials
            .iter()
            .filter(|b| b.source == (p, q))
            .map(|b| b.rank)
            .sum()
    }

    /// Rank of d^r arriving at (p, q).
    pub fn rank_in(&self, p: usize, q: usize) -> usize {
        self.differentials
            .iter()
            .filter(|b| b.target == (p, q))
            .map(|b| b.rank)
            .sum()
    }
}

/// One filtration's spectral sequence, reduced to what every page needs.
///
/// Basis elements of each Tot_n are sorted by filtration index and d_n is
/// column-reduced once. For that ordering the rank of any block
/// "rows with filtration > a, columns with filtration <= b" of d_n equals
/// the number of pivots inside it, which is all the Z^r / B^r formulas need.
#[derive(Debug, Clone)]
pub struct SpectralSequence {
    filtration: Filtration,
    /// `sizes[n][m]` = dim of the filtration-m part of Tot_n (not cumulative).
    sizes: Vec<Vec<usize>>,
    /// `pivots[n]`: (column filtration, row filtration) of each pivot of d_n.
    pivots: Vec<Vec<(usize, usize)>>,
    max_filt: usize,
}

impl SpectralSequence {
    pub fn new(t: &TotalComplex, filtration: Filtration, coeffs: Coefficients) -> Result<Self> {
        let Coefficients::Field(ch) = coeffs else {
            return Err(Error::UnsupportedCoefficients);
        };
        match ch.get() {
            0 => Ok(Self::over(&Rationals, t, filtration)),
            p => Ok(Self::over(&PrimeField::new(p)?, t, filtration)),
        }
    }

    fn over<F: Field>(field: &F, t: &TotalComplex, filtration: Filtration) -> Self {
        let top = t.top_degree().map_or(0, |d| d + 1);
        let max_filt = t.max_filtration(filtration);
        let filts: Vec<Vec<usize>> = (0..top).map(|n| t.filtration_values(n, filtration)).collect();
        let sizes = filts
            .iter()
            .map(|f| {
                let mut s = vec![0; max_filt + 1];
                for &m in f {
                    s[m] += 1;
                }
                s
            })
            .collect();
        let pivots = (0..top)
            .map(|n| {
                if n == 0 {
                    return Vec::new();
                }
                let d = t.differential_ref(n).expect("degree in range");
                let col_order = sorted_by_filtration(&filts[n]);
                let row_order = sorted_by_filtration(&filts[n - 1]);
                let mut row_pos = vec![0; row_order.len()];
                for (pos, &r) in row_order.iter().enumerate() {
                    row_pos[r] = pos;
                }
                let columns = col_order.iter().map(|&j| {
                    let mut c: Vec<(usize, i64)> =
                        d.column(j).iter().map(|&(i, v)| (row_pos[i], v)).collect();
                    c.sort_unstable_by_key(|e| e.0);
                    convert_column(field, &c)
                });
                let lows = reduce_lows(field, row_order.len(), columns);
                lows.iter()
                    .zip(&col_order)
                    .filter_map(|(low, &j)| low.map(|l| (filts[n][j], filts[n - 1][row_order[l]])))
                    .collect()
            })
            .collect();
        SpectralSequence {
            filtration,
            sizes,
            pivots,
            max_filt,
        }
    }

    pub fn filtration(&self) -> Filtration {
        self.filtration
    }

    pub fn max_filtration(&self) -> usize {
        self.max_filt
    }

    /// First page index from which every page equals E^∞.
    pub fn stable_page(&self) -> usize {
        self.max_filt + 1
    }

    fn degrees(&self) -> usize {
        self.sizes.len()
    }

    /// dim F_m Tot_n (cumulative).
    fn filtered_dim(&self, n: usize, m: isize) -> usize {
        if m < 0 {
            return 0;
        }
        self.sizes
            .get(n)
            .map_or(0, |s| s.iter().take(m as usize + 1).sum())
    }

    /// Pivots of d_n with column filtration <= b and row filtration > a.
    fn block_rank(&self, n: usize, a: isize, b: isize) -> usize {
        self.pivots.get(n).map_or(0, |pv| {
            pv.iter()
                .filter(|&&(c, r)| (c as isize) <= b && (r as isize) > a)
                .count()
        })
    }

    /// dim Z^r_p = dim { x ∈ F_p Tot_n : dx ∈ F_{p-r} Tot_{n-1} }.
    fn z(&self, n: usize, p: isize, r: isize) -> usize {
        if p < 0 {
            return 0;
        }
        self.filtered_dim(n, p) - self.block_rank(n, p - r, p)
    }

    /// dim B^r_p = dim ( F_p Tot_n ∩ d(F_{p+r} Tot_{n+1}) ).
    fn b(&self, n: usize, p: isize, r: isize) -> usize {
        if p < 0 {
            return 0;
        }
        let all = self.block_rank(n + 1, -1, p + r);
        all - self.block_rank(n + 1, p, p + r)
    }

    /// dim E^r_p in degree n from E^r = Z^r_p / (Z^{r-1}_{p-1} + B^{r-1}_p),
    /// using Z^{r-1}_{p-1} ∩ B^{r-1}_p = B^r_{p-1}.
    fn e(&self, n: usize, p: usize, r: usize) -> usize {
        let (p, r) = (p as isize, r as isize);
        self.z(n, p, r) + self.b(n, p - 1, r) - self.z(n, p - 1, r - 1) - self.b(n, p, r - 1)
    }

    fn to_pq(&self, filt: usize, n: usize) -> (usize, usize) {
        match self.filtration {
            Filtration::First => (filt, n - filt),
            Filtration::Second => (n - filt, filt),
        }
    }

    /// Page E^r for r >= 1.
    pub fn page(&self, r: usize) -> Result<SpectralPage> {
        if r == 0 {
            return Err(crate::error::malformed("pages start at r = 1"));
        }
        let r_eff = r.min(self.stable_page() + 1);
        let mut cells = Vec::new();
        for n in 0..self.degrees() {
            for m in 0..=self.max_filt.min(n) {
                let dim = self.e(n, m, r_eff);
                if dim > 0 {
                    cells.push((self.to_pq(m, n), dim));
                }
            }
        }
        let mut differentials = Vec::new();
        for n in 1..self.degrees() {
            for m in r..=self.max_filt.min(n) {
                let rank = self.pivots[n]
                    .iter()
                    .filter(|&&(c, row)| c == m && c - row == r)
                    .count();
                if rank > 0 {
                    differentials.push(DifferentialBlock {
                        source: self.to_pq(m, n),
                        target: self.to_pq(m - r, n - 1),
                        rank,
                    });
                }
            }
        }
        Ok(SpectralPage {
            r,
            filtration: self.filtration,
            dims: grid(&cells),
            differentials,
        })
    }

    /// E^∞, i.e. the page from which the sequence is stationary.
    pub fn infinity_page(&self) -> SpectralPage {
        self.page(self.stable_page() + 1).expect("r >= 1")
    }
}

fn sorted_by_filtration(filt: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..filt.len()).collect();
    order.sort_by_key(|&i| filt[i]);
    order
}

fn grid(cells: &[((usize, usize), usize)]) -> Vec<Vec<usize>> {
    let cols = cells.iter().map(|((p, _), _)| p + 1).max().unwrap_or(0);
    let rows = cells.iter().map(|((_, q), _)| q + 1).max().unwrap_or(0);
    let mut dims = vec![vec![0; cols]; rows];
    for &((p, q), d) in cells {
        dims[q][p] = d;
    }
    dims
}

/// Page r of the spectral sequence of `t` for the chosen filtration.
pub fn spectral_page(
    t: &TotalComplex,
    filtration: Filtration,
    r: usize,
    coeffs: Coefficients,
) -> Result<SpectralPage> {
    SpectralSequence::new(t, filtration, coeffs)?.page(r)
}
