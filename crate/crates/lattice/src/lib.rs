//! Finite causal lattices.
//!
//! The slab has non-periodic time `0..n_time` and periodic space. Causal
//! cones have unit slope, so every support claim about a stencil that moves at
//! most one step per time step is an exact set inclusion.

pub mod dec;
pub mod field;
pub mod geometry;
pub mod region;
pub mod stencil;

pub use field::{FieldSpace, LocalOperator};
pub use geometry::{cell_label, masks_of_degree, CausalLattice, Cell, CellIndex, Coord, LatticeError};
pub use region::{
    causal_future, causal_past, chronological_future, sigma_map, CauchySlice, PartitionOfUnity, Region,
    RegionCoordinates,
};
pub use stencil::{Stencil, Term};
