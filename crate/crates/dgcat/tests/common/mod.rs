#![allow(dead_code)]

use ghc_dgcat::random::{random_diagram, random_poset, DiagramShape};
use ghc_dgcat::{FiniteDiagram, Poset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CASES: u64 = 20;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small() -> DiagramShape {
    DiagramShape { lo: -1, span: 3, pieces: 4, acyclic: false }
}

/// A random poset on 2 to 4 objects.
pub fn poset(rng: &mut ChaCha8Rng) -> Poset {
    let n = rng.gen_range(2..=4);
    random_poset(rng, n, 0.7, false)
}

/// Two random diagrams over one random poset.
pub fn pair(seed: u64) -> (ChaCha8Rng, FiniteDiagram, FiniteDiagram) {
    let mut r = rng(seed);
    let p = poset(&mut r);
    let v = random_diagram(&mut r, p.clone(), &small());
    let w = random_diagram(&mut r, p, &small());
    assert!(v.total_dim() <= 40 && w.total_dim() <= 40);
    (r, v, w)
}
