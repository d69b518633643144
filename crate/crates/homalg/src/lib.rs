//! Exact rational graded linear algebra.
//!
//! Everything here is tolerance-free: equality checks compare reduced
//! rationals entry by entry.

pub mod check;
pub mod complex;
pub mod error;
pub mod graded;
pub mod json;
pub mod matrix;
pub mod modp;
pub mod rank;
pub mod scalar;
pub mod sign;

pub use complex::{
    check_homotopy, cohomology_dims, cohomology_dims_exact, cohomology_with_method, cone, identity_of,
    internal_hom_differential, is_acyclic, is_cochain_map, shift, LadderComplex, RankMethod,
};
pub use check::{all_passed, CheckResult};
pub use error::HomalgError;
pub use graded::{CausalClass, Cochain, GradedMap, GradedSpace};
pub use matrix::{EntryMismatch, SparseMatrix};
pub use scalar::Scalar;
