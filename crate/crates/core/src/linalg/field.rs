use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::SparseMatrix;
use crate::error::{malformed, Result};

/// Coefficient field selector: `0` for the rationals, otherwise a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Characteristic(u64);

impl Characteristic {
    pub const RATIONALS: Characteristic = Characteristic(0);

    pub fn new(p: u64) -> Result<Self> {
        if p == 0 || is_prime(p) {
            if p >= 1 << 32 {
                return Err(malformed(format!("prime {p} is too large (must be < 2^32)")));
            }
            Ok(Characteristic(p))
        } else {
            Err(malformed(format!("characteristic {p} is neither 0 nor a prime")))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl Default for Characteristic {
    fn default() -> Self {
        Characteristic::RATIONALS
    }
}

impl TryFrom<u64> for Characteristic {
    type Error = crate::Error;
    fn try_from(p: u64) -> Result<Self> {
        Characteristic::new(p)
    }
}

impl From<Characteristic> for u64 {
    fn from(c: Characteristic) -> u64 {
        c.0
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "Q"),
            p => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A field given by runtime context (the prime, or nothing for Q).
pub trait Field: Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn embed(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `a` must be non-zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

#[derive(Debug, Clone, Copy)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p == 0 {
            return Err(malformed("prime field needs a prime, got 0"));
        }
        let c = Characteristic::new(p)?;
        Ok(PrimeField { p: c.get() })
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn embed(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        // Fermat: a^(p-2)
        let (mut base, mut exp, mut acc) = (*a, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn embed(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        BigRational::one() / a
    }
}

/// Sparse column over a field, sorted by row.
pub(crate) type FieldColumn<F> = Vec<(usize, <F as Field>::Elem)>;

pub(crate) fn convert_column<F: Field>(field: &F, col: &[(usize, i64)]) -> FieldColumn<F> {
    col.iter().map(|&(r, v)| (r, field.embed(v))).collect()
}

/// `a - factor * b`, both sorted by row.
fn axpy<F: Field>(field: &F, a: &[(usize, F::Elem)], factor: &F::Elem, b: &[(usize, F::Elem)]) -> FieldColumn<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map_or(usize::MAX, |e| e.0);
        let rb = b.get(j).map_or(usize::MAX, |e| e.0);
        if ra < rb {
            out.push(a[i].clone());
            i += 1;
        } else if rb < ra {
            let v = field.sub(&field.zero(), &field.mul(factor, &b[j].1));
            out.push((rb, v));
            j += 1;
        } else {
            let v = field.sub(&a[i].1, &field.mul(factor, &b[j].1));
            if !field.is_zero(&v) {
                out.push((ra, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Left-to-right column reduction by lowest non-zero entry.
///
/// Columns are supplied in processing order with rows already expressed in
/// the caller's row order. Returns, per column, the lowest row of the
/// reduced column (`None` when it reduced to zero). The lows are pairwise
/// distinct, so the rank of any "bottom rows x leading columns" block is the
/// number of lows inside that block.
pub(crate) fn reduce_lows<F: Field>(
    field: &F,
    nrows: usize,
    columns: impl IntoIterator<Item = FieldColumn<F>>,
) -> Vec<Option<usize>> {
    let mut pivot_cols: Vec<Option<FieldColumn<F>>> = vec![None; nrows];
    let mut lows = Vec::new();
    for mut col in columns {
        let low = loop {
            let Some((low, lead)) = col.last().cloned() else {
                break None;
            };
            match &pivot_cols[low] {
                Some(pivot) => {
                    let factor = field.mul(&lead, &field.inv(&pivot.last().unwrap().1));
                    col = axpy(field, &col, &factor, pivot);
                }
                None => {
                    pivot_cols[low] = Some(col);
                    break Some(low);
                }
            }
        };
        lows.push(low);
    }
    lows
}

/// Rank of an integer matrix over `field`.
pub fn rank<F: Field>(field: &F, m: &SparseMatrix) -> usize {
    let cols = m.columns().map(|c| convert_column(field, c));
    reduce_lows(field, m.nrows(), cols).iter().flatten().count()
}

/// Rank over the field of the given characteristic.
pub fn rank_over(ch: Characteristic, m: &SparseMatrix) -> usize {
    match ch.get() {
        0 => rank(&Rationals, m),
        p => rank(&PrimeField { p }, m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_validation() {
        assert!(Characteristic::new(0).is_ok());
        assert!(Characteristic::new(2).is_ok());
        assert!(Characteristic::new(101).is_ok());
        assert!(Characteristic::new(1).is_err());
        assert!(Characteristic::new(4).is_err());
        assert!(Characteristic::new(91).is_err());
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.embed(-1), 6);
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // det = 2
        let m = SparseMatrix::from_dense(&[vec![1, 1], vec![1, -1]]);
        assert_eq!(rank_over(Characteristic::RATIONALS, &m), 2);
        assert_eq!(rank_over(Characteristic::new(2).unwrap(), &m), 1);
        assert_eq!(rank_over(Characteristic::new(3).unwrap(), &m), 2);
    }

    #[test]
    fn rank_of_dependent_columns() {
        let m = SparseMatrix::from_dense(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        assert_eq!(rank(&Rationals, &m), 2);
        assert_eq!(rank(&PrimeField::new(5).unwrap(), &m), 2);
        assert_eq!(rank(&PrimeField::new(3).unwrap(), &m), 1);
    }
}
