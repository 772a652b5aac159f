//! Higher tau-tilting toolkit for bound quiver algebras over prime fields.
//!
//! The crate computes in `mod A` for `A = KQ/I` with `K = F_p`: Hom and Ext
//! spaces, syzygies, the higher Auslander-Reiten translates `tau_d`, the
//! indecomposables of representation-finite algebras, 2-cluster-tilting
//! subcategories, 2-functorially finite torsion pairs and support
//! tau_2-tilting modules, and checks the correspondence between the last two
//! by exhaustive enumeration.

pub mod algebra;
pub mod arknit;
pub mod error;
pub mod exactlin;
pub mod highercat;
pub mod modcat;
pub mod tautilt;
pub mod torsion;

pub use error::{Error, Result};
