//! Exact linear algebra: sparse integer matrices, prime and rational fields,
//! dense Smith normal form and a sparse unit-pivot eliminator feeding it.

mod elimination;
pub mod field;
pub mod snf;
mod sparse;

pub(crate) use elimination::integer_invariants;
pub use field::{rank, rank_over, Characteristic, Field, PrimeField, Rationals};
pub use snf::{smith_normal_form, IntMatrix, SmithDecomposition};
pub use sparse::SparseMatrix;
