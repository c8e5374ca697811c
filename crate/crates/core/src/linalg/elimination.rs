use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;

use super::snf::{smith_normal_form, IntMatrix};
use super::SparseMatrix;

/// Rank and torsion coefficients (invariant factors > 1) of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct IntegerInvariants {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Invariant factors of a sparse integer matrix.
///
/// Entries equal to +-1 are eliminated first (a unit pivot splits off a 1x1
/// block without changing the remaining invariant factors); whatever is left
/// goes through the dense Smith normal form. On i64 overflow the whole matrix
/// is handed to the dense arbitrary-precision path instead.
pub(crate) fn integer_invariants(m: &SparseMatrix) -> IntegerInvariants {
    let (units, rest) = match eliminate_units(m) {
        Some(split) => split,
        None => (0, dense(m)),
    };
    let d = smith_normal_form(&rest, false);
    IntegerInvariants {
        rank: units + d.rank,
        torsion: d.torsion().cloned().collect(),
    }
}

fn dense(m: &SparseMatrix) -> IntMatrix {
    let mut out = IntMatrix::zeros(m.nrows(), m.ncols());
    for (j, col) in m.columns().enumerate() {
        for &(i, v) in col {
            out.set(i, j, BigInt::from(v));
        }
    }
    out
}

fn eliminate_units(m: &SparseMatrix) -> Option<(usize, IntMatrix)> {
    let mut cols: Vec<HashMap<usize, i64>> = m
        .columns()
        .map(|c| c.iter().copied().collect())
        .collect();
    let mut rows: Vec<HashSet<usize>> = vec![HashSet::new(); m.nrows()];
    for (j, col) in cols.iter().enumerate() {
        for &i in col.keys() {
            rows[i].insert(j);
        }
    }

    let mut units = 0;
    loop {
        let mut progress = false;
        for j in 0..cols.len() {
            let Some((pi, pu)) = cols[j]
                .iter()
                .filter(|(_, v)| v.abs() == 1)
                .min_by_key(|(r, _)| (rows[**r].len(), **r))
                .map(|(&r, &v)| (r, v))
            else {
                continue;
            };
            let pivot_col: Vec<(usize, i64)> = cols[j].iter().map(|(&r, &v)| (r, v)).collect();
            let others: Vec<usize> = rows[pi].iter().copied().filter(|&k| k != j).collect();
            for k in others {
                // col_k -= (a_k / u) * col_j, and 1/u == u for a unit.
                let f = cols[k][&pi].checked_mul(pu)?;
                for &(r, v) in &pivot_col {
                    let entry = cols[k].entry(r).or_insert(0);
                    let was_zero = *entry == 0;
                    *entry = entry.checked_sub(f.checked_mul(v)?)?;
                    if *entry == 0 {
                        cols[k].remove(&r);
                        rows[r].remove(&k);
                    } else if was_zero {
                        rows[r].insert(k);
                    }
                }
            }
            for &(r, _) in &pivot_col {
                rows[r].remove(&j);
            }
            cols[j].clear();
            debug_assert!(rows[pi].is_empty());
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }

    let live_rows: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    let live_cols: Vec<usize> = (0..cols.len()).filter(|&j| !cols[j].is_empty()).collect();
    let mut row_pos = vec![usize::MAX; rows.len()];
    for (p, &i) in live_rows.iter().enumerate() {
        row_pos[i] = p;
    }
    let mut rest = IntMatrix::zeros(live_rows.len(), live_cols.len());
    for (q, &j) in live_cols.iter().enumerate() {
        for (&i, &v) in &cols[j] {
            rest.set(row_pos[i], q, BigInt::from(v));
        }
    }
    Some((units, rest))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_factors(rows: &[Vec<i64>]) -> (usize, Vec<BigInt>) {
        let d = smith_normal_form(&IntMatrix::from_rows(rows), false);
        (d.rank, d.torsion().cloned().collect())
    }

    #[test]
    fn agrees_with_dense_snf() {
        let cases = vec![
            vec![vec![2, 0], vec![0, 3]],
            vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]],
            vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]],
            vec![vec![1, -1, 0, 0], vec![-1, 0, 1, 2], vec![0, 1, -1, -2]],
            vec![vec![0, 0], vec![0, 0]],
        ];
        for rows in cases {
            let sparse = SparseMatrix::from_dense(&rows);
            let got = integer_invariants(&sparse);
            let (rank, torsion) = dense_factors(&rows);
            assert_eq!(got.rank, rank, "{rows:?}");
            assert_eq!(got.torsion, torsion, "{rows:?}");
        }
    }

    #[test]
    fn overflow_falls_back_to_dense() {
        let big = i64::MAX / 2;
        let rows = vec![vec![1, big], vec![big, 1], vec![1, 1]];
        let got = integer_invariants(&SparseMatrix::from_dense(&rows));
        let (rank, torsion) = dense_factors(&rows);
        assert_eq!((got.rank, got.torsion), (rank, torsion));
    }
}
