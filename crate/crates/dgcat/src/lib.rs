//! Diagrams of complexes over finite posets: cosimplicial mapping complexes,
//! their dg-composition, homotopy colimits as total complexes of the
//! simplicial replacement, and the `hocolim ⊣ Δ` adjunction.
//!
//! Chains are strictly increasing sequences `c₀ < … < c_q`. Faces of strict
//! chains are strict, so the normalized (co)chains, which vanish on every
//! chain with a repeated object, form finite subcomplexes of the full
//! constructions and every formula restricts to them unchanged.

pub mod diagram;
pub mod error;
pub mod hocolim;
pub mod mapping;
pub mod poset;
pub mod random;
pub mod suite;

pub use diagram::FiniteDiagram;
pub use error::DgError;
pub use hocolim::HocolimComplex;
pub use mapping::{MappingCochain, MappingSpace};
pub use poset::{Chain, Poset};
pub use suite::verify_dgcat;
