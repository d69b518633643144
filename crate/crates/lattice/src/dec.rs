//! Cubical exterior calculus with diagonal Lorentzian Hodge weights.
//!
//! Unit steps make every Hodge weight ±1; cells spanning the time axis carry
//! −1 (mostly-plus signature). With `δ = S⁻¹ dᵀ S` one gets `δ² = 0` on any
//! slab and `□ = dδ + δd` with leading time coefficient +1.

use crate::geometry::{axes_of, masks_of_degree};
use crate::stencil::{unit, Stencil, Term};
use ghc_homalg::Scalar;

/// Hodge sign of a cell type.
pub fn hodge_sign(mask: u8) -> i64 {
    if mask & 1 == 1 {
        -1
    } else {
        1
    }
}

/// `(dω)(I, v) = Σ_k (−1)^k [ω(I∖i_k, v + e_{i_k}) − ω(I∖i_k, v)]`.
pub fn exterior_d(m: usize, p: usize) -> Stencil {
    let mut terms = Vec::new();
    for dst in masks_of_degree(m, p + 1) {
        for (k, &a) in axes_of(dst).iter().enumerate() {
            let src = dst & !(1 << a);
            let sgn = if k % 2 == 0 { 1 } else { -1 };
            terms.push(Term { dst, src, offset: unit(a), coeff: Scalar::from_int(sgn) });
            terms.push(Term { dst, src, offset: [0; 3], coeff: Scalar::from_int(-sgn) });
        }
    }
    Stencil::new(p, p + 1, terms)
}

/// `δ: Λ^p → Λ^{p−1}`, `δ = S_{p−1} dᵀ S_p`.
pub fn codifferential(m: usize, p: usize) -> Stencil {
    assert!(p >= 1);
    let w = |k: u8| Scalar::from_int(hodge_sign(k));
    exterior_d(m, p - 1).transpose().weight_rows(w).weight_cols(w)
}

/// `□ = dδ + δd` on `p`-forms.
pub fn dalembertian(m: usize, p: usize) -> Stencil {
    let mut b = Stencil::zero(p, p);
    if p >= 1 {
        b = b.add(&exterior_d(m, p - 1).compose(&codifferential(m, p)));
    }
    if p < m {
        b = b.add(&codifferential(m, p + 1).compose(&exterior_d(m, p)));
    }
    b
}
