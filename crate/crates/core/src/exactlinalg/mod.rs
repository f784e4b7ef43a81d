//! Exact linear algebra over `Z`, `Q` and prime fields.
//!
//! Matrices are generic over a [`Ring`] value. Rank and kernels need a
//! [`Field`]; over `Q` the rank goes through fraction-free elimination on a
//! denominator-cleared copy, over `GF(p)` through plain Gauss–Jordan.
//! [`smith_normal_form`] certifies ranks over all primes simultaneously.

mod bareiss;
mod field;
mod matrix;
mod snf;

use thiserror::Error;

pub use bareiss::{
    bareiss_rank, clear_denominators, integer_rank, random_62bit_prime, rank_mod, BAREISS_MAX_DIM,
};
pub use field::{Field, Integers, PrimeField, Rationals, Reals, Ring, LARGE_PRIME};
pub use matrix::{stack_rank, Echelon, KernelBasis, KernelSide, Matrix, RowSpan};
pub use snf::{serialize_bigints, smith_normal_form, SnfResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cannot combine matrices over {0} and {1}")]
    RingMismatch(String, String),
    #[error("stack of zero matrices")]
    EmptyStack,
    #[error("malformed matrix dump: {0}")]
    Parse(String),
}
