//! Exact dense linear algebra over prime fields.

mod field;
mod mat;

pub use field::Fp;
pub use mat::{Mat, Rref};
