//! Fixed-time Poisson structures `σ_Σ` on spacelike-compact sections, and the
//! homotopy comparing two Cauchy slices through the quasi-inverse `Θ`.
//!
//! With `Δσ = σ_Σ − σ_Σ′`, `ΛΘ = id − ∂Υ` and `∂(λ − λ′) = Δσ∘Λ^{⊗2}`:
//! `h = (λ − λ′)∘Θ^{⊗2} + Δσ∘(Υ ⊗ id) + Δσ∘(ΛΘ ⊗ Υ)` has `∂h = Δσ`,
//! and so does `λ_ΣΣ′ = asym(h)` since `Δσ` is antisymmetric.

use crate::eval::ev_sigma_matrix;
use crate::form::BilinearForm;
use crate::structures::PoissonSetup;
use ghc_homalg::{identity_of, GradedMap, LadderComplex, Scalar, SparseMatrix};
use ghc_lattice::CauchySlice;
use ghc_models::DifferentialPairing;
use ghc_rma::{Certificate, Window};
use rayon::prelude::*;
use serde_json::Value;
use std::collections::BTreeMap;

/// `σ_Σ(ψ₁ ⊗ ψ₂) = (−1)^{m−1} ∫_Σ ι*(ψ₁, ψ₂)` on the sections of a window.
pub fn sigma(pairing: &DifferentialPairing, window: &Window, slice: &CauchySlice) -> BilinearForm {
    let s = Scalar::sign(pairing.dim() as i64 - 1);
    let mut out = BilinearForm::zero(window.complex.space(), 0);
    for (n1, n2) in out.pairs() {
        let m = ev_sigma_matrix(pairing, n1, n2, slice).select(window.cells(n1), window.cells(n2));
        out.insert(n1, n2, m.scale(&s));
    }
    out
}

pub struct CauchyComparison<'c, 'a> {
    cert: &'c Certificate<'a>,
    setup: PoissonSetup<'a>,
    theta: GradedMap,
    upsilon: GradedMap,
}

impl<'c, 'a> CauchyComparison<'c, 'a> {
    /// Fails with a witness when `Θ` does not land in the compact window.
    pub fn new(cert: &'c Certificate<'a>, pairing: &'a DifferentialPairing) -> Result<Self, Value> {
        let setup = PoissonSetup::new(cert.homotopy(), pairing, cert.compact().clone());
        let theta = cert.theta_map()?;
        let upsilon = upsilon_map(cert);
        Ok(CauchyComparison { cert, setup, theta, upsilon })
    }

    pub fn setup(&self) -> &PoissonSetup<'a> {
        &self.setup
    }

    pub fn theta(&self) -> &GradedMap {
        &self.theta
    }

    pub fn upsilon(&self) -> &GradedMap {
        &self.upsilon
    }

    /// The slab window complex `S`.
    pub fn slab_complex(&self) -> &LadderComplex {
        &self.cert.slab().complex
    }

    /// `Λ: C[1] → S`.
    pub fn lambda_map(&self) -> &GradedMap {
        self.cert.lambda_map()
    }

    pub fn sigma(&self, slice: &CauchySlice) -> BilinearForm {
        sigma(self.setup.pairing(), self.cert.slab(), slice)
    }

    /// `ΛΘ` as an endomorphism of the slab window.
    pub fn lambda_theta(&self) -> GradedMap {
        self.cert.lambda_map().compose(&self.theta).expect("Θ lands in the domain of Λ")
    }

    /// `λ_ΣΣ′ = asym(h)`.
    pub fn lambda_between(&self, s1: &CauchySlice, s2: &CauchySlice) -> BilinearForm {
        let delta = self.sigma(s1).sub(&self.sigma(s2));
        let lam = self.setup.lambda_compat(s1).sub(&self.setup.lambda_compat(s2));
        let id = identity_of(&self.cert.slab().complex);
        let h = lam
            .pullback(&self.theta)
            .add(&delta.precompose(&self.upsilon, &id))
            .add(&delta.precompose(&self.lambda_theta(), &self.upsilon));
        h.asym()
    }
}

/// `Υ` as a degree `−1` endomorphism of the slab window: column `k` of degree `n`
/// is `Υ` of the `k`-th window cell, restricted to the window.
fn upsilon_map(cert: &Certificate) -> GradedMap {
    let f = cert.homotopy().fields();
    let slab = cert.slab();
    let space = slab.complex.space();
    let mut blocks = BTreeMap::new();
    for n in space.degrees() {
        if !space.degrees().contains(&(n - 1)) {
            continue;
        }
        let len = slab.cells(n).len();
        let cols: Vec<Vec<Scalar>> = (0..len)
            .into_par_iter()
            .map(|k| {
                let mut e = vec![Scalar::zero(); len];
                e[k] = Scalar::one();
                slab.restrict(n - 1, &cert.upsilon(n, &slab.extend(f, n, &e)))
            })
            .collect();
        blocks.insert(n, SparseMatrix::from_columns(space.dim(n - 1), &cols));
    }
    GradedMap::new(space, space, -1, blocks).expect("shapes follow the window")
}
