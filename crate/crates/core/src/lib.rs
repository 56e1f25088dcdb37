//! Exact computations around homological mirror symmetry for invertible
//! polynomials of types A and D: grading groups, graded matrix
//! factorizations and their Ext tables, directed Dynkin quiver models, and
//! the transposition calculus for diagonal symmetry groups.

pub mod error;
pub mod exactmat;
pub mod grading;
pub mod matfac;
pub mod polyforms;
pub mod quivercat;
pub mod symmetry;

pub use error::{Error, Result};
