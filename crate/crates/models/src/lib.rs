//! Lattice field models: complexes `(F, Q)`, Green's witnesses `W` and
//! differential pairings, each with a validator.

pub mod bilinear;
pub mod model;
pub mod pairing;
pub mod selfadj;

pub use bilinear::{BiTerm, Bilinear};
pub use model::{
    build_complex, build_witness, chern_simons_is_shifted_de_rham, witness_of, GreenWitness, Model, ModelError,
    ModelKind, ModelSpec,
};
pub use pairing::{build_pairing, validate_pairing, DifferentialPairing};
pub use selfadj::{integrate_top, validate_self_adjoint_witness};
