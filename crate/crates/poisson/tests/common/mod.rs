#![allow(dead_code)]

use ghc_homalg::Scalar;
use ghc_lattice::CausalLattice;
use ghc_models::{Model, ModelKind, ModelSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn default_lattice() -> CausalLattice {
    CausalLattice::new(2, 24, vec![12], 2).unwrap()
}

pub fn model(kind: ModelKind, lat: &CausalLattice) -> Model {
    Model::build(&ModelSpec::new(kind, lat.clone()).unwrap()).unwrap()
}

pub fn klein_gordon() -> ModelKind {
    ModelKind::KleinGordon { mass: Scalar::one() }
}

pub fn maxwell() -> ModelKind {
    ModelKind::MaxwellP { p: 1 }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(len: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    (0..len).map(|_| if rng.gen_bool(0.3) { Scalar::from_int(rng.gen_range(-3..=3)) } else { Scalar::zero() }).collect()
}
