//! Exact linear algebra over Q and GF(p).

mod arith;
mod field;
mod matrix;
mod sparse;

pub use field::{format_decimal, format_rational, is_prime, parse_rational, Field, Scalar};
pub use matrix::{Echelon, Matrix};
pub use sparse::{row_quotient, SparseBuilder, SparseMatrix};
