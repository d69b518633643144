//! Causal certification of degree-preserving operators and their exact
//! retarded/advanced Green's operators on a finite slab.

pub mod certify;
pub mod identities;
pub mod solve;

pub use certify::{certify_causal, CausalOperator, CertificationFailure, Direction, Issue, SolveStep, Sweep};
pub use identities::{
    admissible_cells, formal_adjoint_check, test_sections, verify_green_identities, IdentityOptions, Sampling, Support,
};
pub use solve::{GreenError, GreenOperators, INITIAL_BUFFER};

use ghc_homalg::Scalar;
use ghc_lattice::{dec::hodge_sign, FieldSpace};

/// `⟨⟨a, b⟩⟩ = Σ_c s(c) a(c) b(c)` with the diagonal Hodge signs.
pub fn hodge_pairing(fields: &FieldSpace) -> impl Fn(i64, &[Scalar], &[Scalar]) -> Scalar + '_ {
    move |n, a, b| {
        let mut acc = Scalar::zero();
        for i in 0..a.len() {
            if a[i].is_zero() || b[i].is_zero() {
                continue;
            }
            let s = Scalar::from_int(hodge_sign(fields.cell(n, i).mask));
            acc += &(&a[i] * &b[i]) * &s;
        }
        acc
    }
}
