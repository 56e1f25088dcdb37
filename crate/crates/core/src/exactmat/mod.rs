//! Exact arithmetic: arbitrary-precision scalars, integer matrices with Smith
//! normal form, dense and sparse linear algebra over a field, and sparse
//! multivariate polynomials.

pub mod field;
pub mod intmat;
pub mod linalg;
pub mod poly;

pub use field::{gauss_i, int, rat, Field, GaussRat, Int, Rat};
pub use intmat::{smith_normal_form, IntMatrix, SmithForm};
pub use linalg::{inverse, kernel, rank, rat_kernel, sparse_rank, SparseVec};
pub use poly::{default_names, poly_add, poly_mul, poly_partial, Exponents, Poly};
