//! Covariant Poisson structures and their comparison homotopies on `C[1]`.
//!
//! `C` is a finite window of compactly supported sections and `C[1]` its shift,
//! with differential `−Q`. An element of `C[1]` of degree `a` is a field of degree
//! `a + 1`; `Λ±` send it to a slab field of degree `a`. Every form below is a
//! matrix assembly from the columns `Λ±e_j` and the integration matrices.

use crate::eval::{ev_matrix, ev_sigma_matrix, stokes_matrix, Domain};
use crate::form::BilinearForm;
use ghc_green::Direction;
use ghc_homalg::{shift, GradedSpace, HomalgError, LadderComplex, Scalar, SparseMatrix};
use ghc_lattice::{CauchySlice, LocalOperator, Stencil, Term};
use ghc_models::{DifferentialPairing, Model};
use ghc_rma::{windowed, GreenHomotopy, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Sections built from cells with every vertex time in `[lo, hi]`, closed under `Q`.
pub fn compact_band(h: &GreenHomotopy, lo: i64, hi: i64) -> Result<Window, HomalgError> {
    let f = h.fields();
    let lat = f.lattice();
    windowed(
        f,
        h.model().q_local(),
        |_, c| {
            let (x, y) = lat.time_span(c);
            x >= lo && y <= hi
        },
        |_| true,
    )
}

#[derive(Clone)]
pub struct PoissonSetup<'a> {
    h: &'a GreenHomotopy,
    pairing: &'a DifferentialPairing,
    compact: Window,
    shifted: LadderComplex,
    /// Per `C[1]` degree `a`: slab matrix `dim_a × dim C[1]^a` with columns `Λ±e_j`.
    plus: BTreeMap<i64, SparseMatrix>,
    minus: BTreeMap<i64, SparseMatrix>,
}

fn unit(dim: usize, j: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    v[j] = Scalar::one();
    v
}

impl<'a> PoissonSetup<'a> {
    pub fn new(h: &'a GreenHomotopy, pairing: &'a DifferentialPairing, compact: Window) -> Self {
        let shifted = shift(&compact.complex, 1);
        let f = h.fields();
        let columns = |dir: Direction| -> BTreeMap<i64, SparseMatrix> {
            shifted
                .space()
                .degrees()
                .filter(|a| f.has_degree(*a))
                .map(|a| {
                    let cols: Vec<Vec<Scalar>> =
                        compact.cells(a + 1).par_iter().map(|&j| h.lambda(dir, a + 1, &unit(f.dim(a + 1), j))).collect();
                    (a, SparseMatrix::from_columns(f.dim(a), &cols))
                })
                .collect()
        };
        let plus = columns(Direction::Retarded);
        let minus = columns(Direction::Advanced);
        PoissonSetup { h, pairing, compact, shifted, plus, minus }
    }

    /// The same windows with `Λ′± = Λ± + Qμ± − μ±Q` for degree `−2` maps `μ±`.
    pub fn perturbed(&self, mu_plus: &LocalOperator, mu_minus: &LocalOperator) -> Self {
        assert_eq!(mu_plus.degree(), -2);
        assert_eq!(mu_minus.degree(), -2);
        let mut out = self.clone();
        for (mu, target) in [(mu_plus, &mut out.plus), (mu_minus, &mut out.minus)] {
            for (a, m) in target.iter_mut() {
                let delta = self.d_mu(mu, *a + 1).mul(&self.embedding(*a));
                *m = m.add(&delta);
            }
        }
        out
    }

    /// `Qμ − μQ` on slab fields of degree `n`, landing in degree `n − 1`.
    fn d_mu(&self, mu: &LocalOperator, n: i64) -> SparseMatrix {
        let f = self.h.fields();
        let q = self.h.model().q_local();
        let a = q.slab_block(f, f, n - 2).mul(&mu.slab_block(f, f, n));
        let b = mu.slab_block(f, f, n + 1).mul(&q.slab_block(f, f, n));
        a.sub(&b)
    }

    pub fn homotopy(&self) -> &GreenHomotopy {
        self.h
    }

    pub fn pairing(&self) -> &DifferentialPairing {
        self.pairing
    }

    pub fn compact(&self) -> &Window {
        &self.compact
    }

    /// `C[1]`, with differential `−Q`.
    pub fn shifted(&self) -> &LadderComplex {
        &self.shifted
    }

    pub fn space(&self) -> &GradedSpace {
        self.shifted.space()
    }

    /// Slab columns of `Λ±` on `C[1]^a`.
    pub fn lambda_columns(&self, dir: Direction, a: i64) -> SparseMatrix {
        let map = match dir {
            Direction::Retarded => &self.plus,
            Direction::Advanced => &self.minus,
        };
        map.get(&a).cloned().unwrap_or_else(|| SparseMatrix::zeros(self.h.fields().dim(a), self.space().dim(a)))
    }

    /// Slab columns of `Λ = Λ₊ − Λ₋` on `C[1]^a`.
    pub fn rma_columns(&self, a: i64) -> SparseMatrix {
        self.lambda_columns(Direction::Retarded, a).sub(&self.lambda_columns(Direction::Advanced, a))
    }

    /// Zero extension `C[1]^a → F^{a+1}` as a slab matrix.
    pub fn embedding(&self, a: i64) -> SparseMatrix {
        let f = self.h.fields();
        let cells = self.compact.cells(a + 1);
        SparseMatrix::from_triplets(f.dim(a + 1), cells.len(), cells.iter().enumerate().map(|(k, &i)| (i, k, Scalar::one())))
    }

    /// `Q` on slab fields of degree `n`.
    fn q(&self, n: i64) -> SparseMatrix {
        let f = self.h.fields();
        self.h.model().q_local().slab_block(f, f, n)
    }

    fn sign_m(&self) -> Scalar {
        Scalar::sign(self.pairing.dim() as i64 - 1)
    }

    /// `∫_dom (φ₁, Λ_col φ₂)` with `φ₁ ∈ C[1]^{a₁}`: block `Eᵀ M L`.
    fn ev_against(&self, a1: i64, a2: i64, cols: &SparseMatrix, dom: Domain) -> SparseMatrix {
        self.embedding(a1).transpose().mul(&ev_matrix(self.pairing, a1 + 1, a2, dom)).mul(cols)
    }

    /// `τ̃(φ₁ ⊗ φ₂) = ∫_M (φ₁, Λφ₂)`.
    pub fn tau_tilde(&self) -> BilinearForm {
        let mut out = BilinearForm::zero(self.space(), 0);
        for (a1, a2) in out.pairs() {
            out.insert(a1, a2, self.ev_against(a1, a2, &self.rma_columns(a2), Domain::All));
        }
        out
    }

    /// `τ± = ±∫(φ₁, Λ±φ₂) ∓ (−1)^{|φ₁||φ₂|} ∫(φ₂, Λ±φ₁)`.
    pub fn tau_pm(&self, dir: Direction) -> BilinearForm {
        let mut half = BilinearForm::zero(self.space(), 0);
        for (a1, a2) in half.pairs() {
            half.insert(a1, a2, self.ev_against(a1, a2, &self.lambda_columns(dir, a2), Domain::All));
        }
        let s = match dir {
            Direction::Retarded => Scalar::one(),
            Direction::Advanced => -Scalar::one(),
        };
        half.sub(&half.swap()).scale(&s)
    }

    /// `τ = asym(τ̃)`.
    pub fn tau(&self) -> BilinearForm {
        self.tau_tilde().asym()
    }

    /// `λ̃_M(φ₁ ⊗ φ₂) = −∫_M (Λ₊φ₁, Λ₋φ₂)`, degree `−1`.
    pub fn lambda_m_tilde(&self) -> BilinearForm {
        let mut out = BilinearForm::zero(self.space(), -1);
        for (a1, a2) in out.pairs() {
            let m = ev_matrix(self.pairing, a1, a2, Domain::All);
            let block = self.lambda_columns(Direction::Retarded, a1).transpose().mul(&m).mul(&self.lambda_columns(Direction::Advanced, a2));
            out.insert(a1, a2, block.neg());
        }
        out
    }

    /// `λ_M = asym(λ̃_M)`.
    pub fn lambda_m(&self) -> BilinearForm {
        self.lambda_m_tilde().asym()
    }

    /// `σ_Σ ∘ Λ^{⊗2}`: `(−1)^{m−1} ∫_Σ ι*(Λφ₁, Λφ₂)`.
    pub fn sigma_lambda(&self, slice: &CauchySlice) -> BilinearForm {
        let mut out = BilinearForm::zero(self.space(), 0);
        for (a1, a2) in out.pairs() {
            let n = ev_sigma_matrix(self.pairing, a1, a2, slice);
            out.insert(a1, a2, self.rma_columns(a1).transpose().mul(&n).mul(&self.rma_columns(a2)).scale(&self.sign_m()));
        }
        out
    }

    /// `λ̃(φ₁ ⊗ φ₂) = ∫_{Σ⁺}(Λ₋φ₁, Λφ₂) + ∫_{Σ⁻}(Λ₊φ₁, Λφ₂)`, degree `−1`.
    pub fn lambda_compat_tilde(&self, slice: &CauchySlice) -> BilinearForm {
        let mut out = BilinearForm::zero(self.space(), -1);
        for (a1, a2) in out.pairs() {
            let l = self.rma_columns(a2);
            let fut = self.lambda_columns(Direction::Advanced, a1).transpose().mul(&ev_matrix(self.pairing, a1, a2, Domain::Future(*slice))).mul(&l);
            let past = self.lambda_columns(Direction::Retarded, a1).transpose().mul(&ev_matrix(self.pairing, a1, a2, Domain::Past(*slice))).mul(&l);
            out.insert(a1, a2, fut.add(&past));
        }
        out
    }

    /// `λ = asym(λ̃)`.
    pub fn lambda_compat(&self, slice: &CauchySlice) -> BilinearForm {
        self.lambda_compat_tilde(slice).asym()
    }

    /// The chain from `∂λ̃` to `σ_Σ∘Λ^{⊗2} − τ̃`, one form per line:
    /// 1. `∂λ̃`;
    /// 2. `∫_{Σ⁺}(QΛ₋φ₁ − φ₁, Λφ₂) + (−1)^{|φ₁|}∫_{Σ⁺}(Λ₋φ₁, QΛφ₂)` plus the same over `Σ⁻` with `Λ₊`;
    /// 3. `(−1)^{m−1}(∫_{Σ⁺} d(Λ₋φ₁, Λφ₂) + ∫_{Σ⁻} d(Λ₊φ₁, Λφ₂)) − ∫_M(φ₁, Λφ₂)`;
    /// 4. `(−1)^{m−1}∫_Σ(Λφ₁, Λφ₂) − ∫_M(φ₁, Λφ₂)`.
    pub fn compat_lines(&self, slice: &CauchySlice) -> [BilinearForm; 4] {
        let line1 = self.lambda_compat_tilde(slice).boundary(&self.shifted);
        let mut line2 = BilinearForm::zero(self.space(), 0);
        let mut line3 = BilinearForm::zero(self.space(), 0);
        for (a1, a2) in line2.pairs() {
            let l = self.rma_columns(a2);
            let ql = self.q(a2).mul(&l);
            let e = self.embedding(a1);
            let mut b2 = SparseMatrix::zeros(self.space().dim(a1), self.space().dim(a2));
            let mut b3 = b2.clone();
            for (dom, dir) in [(Domain::Future(*slice), Direction::Advanced), (Domain::Past(*slice), Direction::Retarded)] {
                let lam = self.lambda_columns(dir, a1);
                let first = self.q(a1).mul(&lam).sub(&e);
                b2 = b2.add(&first.transpose().mul(&ev_matrix(self.pairing, a1 + 1, a2, dom)).mul(&l));
                b2 = b2.add(&lam.transpose().mul(&ev_matrix(self.pairing, a1, a2 + 1, dom)).mul(&ql).scale(&Scalar::sign(a1)));
                b3 = b3.add(&lam.transpose().mul(&stokes_matrix(self.pairing, a1, a2, dom)).mul(&l).scale(&self.sign_m()));
            }
            line2.insert(a1, a2, b2);
            line3.insert(a1, a2, b3.sub(&self.ev_against(a1, a2, &l, Domain::All)));
        }
        let line4 = self.sigma_lambda(slice).sub(&self.tau_tilde());
        [line1, line2, line3, line4]
    }
}

/// A random local map of degree `−2` with integer coefficients, zero-order in space and time.
pub fn random_mu(model: &Model, seed: u64) -> LocalOperator {
    let f = model.fields();
    let m = model.lattice().dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stencils = BTreeMap::new();
    for n in f.degrees() {
        if !f.has_degree(n - 2) {
            continue;
        }
        let (p, q) = (f.form_degree(n), f.form_degree(n - 2));
        let mut terms = Vec::new();
        for src in ghc_lattice::masks_of_degree(m, p) {
            for dst in ghc_lattice::masks_of_degree(m, q) {
                let c = rng.gen_range(-2..=2);
                if c != 0 {
                    terms.push(Term { dst, src, offset: [0; 3], coeff: Scalar::from_int(c) });
                }
            }
        }
        stencils.insert(n, Stencil::new(p, q, terms));
    }
    LocalOperator::new(-2, stencils)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ghc_homalg::all_passed;
    use ghc_lattice::CausalLattice;
    use ghc_models::{build_pairing, ModelKind, ModelSpec};

    #[test]
    fn identities_on_a_small_maxwell_slab() {
        let lat = CausalLattice::new(2, 16, vec![4], 2).unwrap();
        let m = Model::build(&ModelSpec::new(ModelKind::MaxwellP { p: 1 }, lat.clone()).unwrap()).unwrap();
        let p = build_pairing(&m).unwrap();
        let h = GreenHomotopy::new(&m).unwrap();
        let setup = PoissonSetup::new(&h, &p, compact_band(&h, 5, 10).unwrap());
        let s = CauchySlice::new(&lat, 8).unwrap();
        let checks: Vec<_> = crate::verify_covariant(&setup, true).into_iter().chain(crate::verify_compat(&setup, &s)).collect();
        assert!(all_passed(&checks), "{checks:#?}");
    }

    #[test]
    fn random_mu_has_degree_minus_two() {
        let lat = CausalLattice::new(2, 8, vec![4], 2).unwrap();
        let m = Model::build(&ModelSpec::new(ModelKind::MaxwellP { p: 1 }, lat).unwrap()).unwrap();
        let mu = random_mu(&m, 4);
        assert_eq!(mu.degree(), -2);
        assert!(!mu.is_zero());
        assert_eq!(mu.stencils().keys().copied().collect::<Vec<_>>(), vec![1, 2]);
    }
}
