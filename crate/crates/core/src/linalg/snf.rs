use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Dense row-major integer matrix with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::from(1);
        }
        m
    }

    /// `rows` must be rectangular; an empty slice gives a 0x0 matrix.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row.iter().map(|&v| BigInt::from(v)));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    /// A `rows x cols` matrix, for shapes with a zero dimension.
    pub fn empty(rows: usize, cols: usize) -> Self {
        Self::zeros(rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let delta = q * s;
                self.data[dst * self.cols + j] -= delta;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn col_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let delta = q * s;
                self.data[i * self.cols + dst] -= delta;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -v;
        }
    }
}

/// Unimodular witnesses with `left * input * right == diagonal`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithWitnesses {
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub diagonal: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub shape: (usize, usize),
    pub rank: usize,
    /// d_1 | d_2 | ... | d_rank, all positive.
    pub invariant_factors: Vec<BigInt>,
    pub witnesses: Option<SmithWitnesses>,
}

impl SmithDecomposition {
    /// Invariant factors strictly greater than one (the torsion part).
    pub fn torsion(&self) -> impl Iterator<Item = &BigInt> {
        self.invariant_factors.iter().filter(|d| *d > &BigInt::from(1))
    }
}

struct Work {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Work {
    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        if let Some(u) = &mut self.u {
            u.swap_rows(x, y);
        }
    }
    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        if let Some(v) = &mut self.v {
            v.swap_cols(x, y);
        }
    }
    fn row_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.row_sub(dst, src, q);
        if let Some(u) = &mut self.u {
            u.row_sub(dst, src, q);
        }
    }
    fn col_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.col_sub(dst, src, q);
        if let Some(v) = &mut self.v {
            v.col_sub(dst, src, q);
        }
    }
    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }
}

/// Smith normal form by Euclidean row/column reduction, always pivoting on
/// an entry of minimal absolute value.
pub fn smith_normal_form(m: &IntMatrix, with_witnesses: bool) -> SmithDecomposition {
    let (r, c) = (m.rows, m.cols);
    let mut w = Work {
        a: m.clone(),
        u: with_witnesses.then(|| IntMatrix::identity(r)),
        v: with_witnesses.then(|| IntMatrix::identity(c)),
    };
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = min_abs_entry(&w.a, t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let pivot = w.a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..r {
                if !w.a.get(i, t).is_zero() {
                    let q = w.a.get(i, t) / &pivot;
                    if !q.is_zero() {
                        w.row_sub(i, t, &q);
                    }
                    clean &= w.a.get(i, t).is_zero();
                }
            }
            for j in t + 1..c {
                if !w.a.get(t, j).is_zero() {
                    let q = w.a.get(t, j) / &pivot;
                    if !q.is_zero() {
                        w.col_sub(j, t, &q);
                    }
                    clean &= w.a.get(t, j).is_zero();
                }
            }
            if !clean {
                // Some remainder is now strictly smaller than the pivot.
                let mut best: Option<(BigInt, bool, usize)> = None;
                for i in t + 1..r {
                    let v = w.a.get(i, t).abs();
                    if !v.is_zero() && best.as_ref().is_none_or(|b| v < b.0) {
                        best = Some((v, true, i));
                    }
                }
                for j in t + 1..c {
                    let v = w.a.get(t, j).abs();
                    if !v.is_zero() && best.as_ref().is_none_or(|b| v < b.0) {
                        best = Some((v, false, j));
                    }
                }
                match best {
                    Some((_, true, i)) => w.swap_rows(t, i),
                    Some((_, false, j)) => w.swap_cols(t, j),
                    None => unreachable!("unclean pivot row/column without entries"),
                }
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let offender = (t + 1..r).find(|&i| {
                (t + 1..c).any(|j| !w.a.get(i, j).is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    // row_t += row_i
                    w.row_sub(t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let invariant_factors: Vec<BigInt> = (0..t).map(|i| w.a.get(i, i).clone()).collect();
    let witnesses = match (w.u, w.v) {
        (Some(left), Some(right)) => Some(SmithWitnesses {
            left,
            right,
            diagonal: w.a,
        }),
        _ => None,
    };
    SmithDecomposition {
        shape: (r, c),
        rank: invariant_factors.len(),
        invariant_factors,
        witnesses,
    }
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let v = v.abs();
            if best.as_ref().is_none_or(|b| v < b.0) {
                let one = v == BigInt::from(1);
                best = Some((v, i, j));
                if one {
                    return best.map(|b| (b.1, b.2));
                }
            }
        }
    }
    best.map(|b| (b.1, b.2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(rows: &[Vec<i64>]) -> Vec<i64> {
        let d = smith_normal_form(&IntMatrix::from_rows(rows), false);
        d.invariant_factors
            .iter()
            .map(|f| i64::try_from(f).unwrap())
            .collect()
    }

    #[test]
    fn identity_has_unit_factors() {
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(factors(&id), vec![1, 1, 1]);
    }

    #[test]
    fn zero_and_empty_matrices() {
        assert!(factors(&[vec![0, 0], vec![0, 0]]).is_empty());
        let d = smith_normal_form(&IntMatrix::empty(0, 4), true);
        assert_eq!(d.rank, 0);
        let d = smith_normal_form(&IntMatrix::empty(3, 0), false);
        assert_eq!(d.rank, 0);
    }

    #[test]
    fn diag_two_three() {
        // gcd 1, lcm 6
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }

    #[test]
    fn classic_four_by_four() {
        let m = vec![
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ];
        assert_eq!(factors(&m), vec![1, 3, 21]);
    }

    #[test]
    fn witnesses_reproduce_diagonal() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let d = smith_normal_form(&m, true);
        let w = d.witnesses.as_ref().unwrap();
        assert_eq!(w.left.mul(&m).mul(&w.right), w.diagonal);
        assert_eq!(
            d.invariant_factors,
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
    }
}
