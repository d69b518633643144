//! Integration of pairings over the slab, over the two halves cut out by a
//! Cauchy slice, and over the slice itself.
//!
//! The slice at time `T` consists of the purely spatial `(m−1)`-cells based at
//! `T`. The future half is every top cell based at or after `T`, the past half
//! every top cell based before `T`. With these choices discrete Stokes reads
//! `∫_{t≥T} dω = −∫_Σ ω` and `∫_{t<T} dω = ∫_Σ ω` for compactly supported `ω`.

use ghc_homalg::{sign, CheckResult, Scalar, SparseMatrix};
use ghc_lattice::dec::exterior_d;
use ghc_lattice::{CauchySlice, CausalLattice, Cell};
use ghc_models::{DifferentialPairing, Model};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::time::Instant;

/// A set of top cells to integrate over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    All,
    /// Top cells based at or after the slice time.
    Future(CauchySlice),
    /// Top cells based before the slice time.
    Past(CauchySlice),
}

impl Domain {
    fn contains(&self, c: &Cell) -> bool {
        match self {
            Domain::All => true,
            Domain::Future(s) => c.base[0] >= s.time(),
            Domain::Past(s) => c.base[0] < s.time(),
        }
    }
}

pub fn top_cells(lat: &CausalLattice, dom: Domain) -> Vec<Cell> {
    lat.cell_index(lat.dim()).cells(lat).into_iter().filter(|c| dom.contains(c)).collect()
}

pub fn slice_cells(lat: &CausalLattice, slice: &CauchySlice) -> Vec<Cell> {
    lat.cell_index(lat.dim() - 1).cells(lat).into_iter().filter(|c| !c.has_time() && c.base[0] == slice.time()).collect()
}

/// Slab matrix of `(φ₁, φ₂) ↦ ∫_dom (φ₁, φ₂)` for field degrees with `n₁ + n₂ = 1`.
pub fn ev_matrix(pairing: &DifferentialPairing, n1: i64, n2: i64, dom: Domain) -> SparseMatrix {
    let f = pairing.fields();
    let lat = f.lattice();
    match pairing.component(n1, n2) {
        Some(b) if pairing.out_degree(n1, n2) == Some(lat.dim()) => b.integrate_matrix(lat, &top_cells(lat, dom)),
        _ => SparseMatrix::zeros(f.dim(n1), f.dim(n2)),
    }
}

/// Slab matrix of `(ψ₁, ψ₂) ↦ ∫_Σ ι*(ψ₁, ψ₂)` for field degrees with `n₁ + n₂ = 0`.
pub fn ev_sigma_matrix(pairing: &DifferentialPairing, n1: i64, n2: i64, slice: &CauchySlice) -> SparseMatrix {
    let f = pairing.fields();
    let lat = f.lattice();
    match pairing.component(n1, n2) {
        Some(b) if pairing.out_degree(n1, n2) == Some(lat.dim() - 1) => b.integrate_matrix(lat, &slice_cells(lat, slice)),
        _ => SparseMatrix::zeros(f.dim(n1), f.dim(n2)),
    }
}

/// Slab matrix of `(φ₁, φ₂) ↦ ∫_dom d(φ₁, φ₂)` for field degrees with `n₁ + n₂ = 0`.
pub fn stokes_matrix(pairing: &DifferentialPairing, n1: i64, n2: i64, dom: Domain) -> SparseMatrix {
    let f = pairing.fields();
    let lat = f.lattice();
    match pairing.component(n1, n2) {
        Some(b) if pairing.out_degree(n1, n2) == Some(lat.dim() - 1) => {
            b.exterior_d(lat.dim()).integrate_matrix(lat, &top_cells(lat, dom))
        }
        _ => SparseMatrix::zeros(f.dim(n1), f.dim(n2)),
    }
}

fn bilinear(m: &SparseMatrix, a: &[Scalar], b: &[Scalar]) -> Scalar {
    m.mul_vec(b).iter().zip(a).map(|(x, y)| x * y).sum()
}

/// `ev_M(φ₁ ⊗ φ₂) = ∫_M (φ₁, φ₂)`.
pub fn ev_m(pairing: &DifferentialPairing, n1: i64, a: &[Scalar], n2: i64, b: &[Scalar]) -> Scalar {
    bilinear(&ev_matrix(pairing, n1, n2, Domain::All), a, b)
}

/// `ev_Σ(ψ₁ ⊗ ψ₂) = ∫_Σ ι*(ψ₁, ψ₂)`.
pub fn ev_sigma(pairing: &DifferentialPairing, slice: &CauchySlice, n1: i64, a: &[Scalar], n2: i64, b: &[Scalar]) -> Scalar {
    bilinear(&ev_sigma_matrix(pairing, n1, n2, slice), a, b)
}

fn random_section(model: &Model, n: i64, band: (i64, i64), rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    let f = model.fields();
    let mut v = vec![Scalar::zero(); f.dim(n)];
    for j in f.time_window(n, band.0, band.1) {
        if rng.gen_bool(0.4) {
            v[j] = Scalar::from_int(rng.gen_range(-4..=4));
        }
    }
    v
}

fn q(model: &Model, n: i64, v: &[Scalar]) -> Vec<Scalar> {
    let f = model.fields();
    model.q_local().slab_block(f, f, n).mul_vec(v)
}

/// Degree pairs `(n₁, n₂)` with `n₁ + n₂ = total` that carry a pairing component.
fn paired(pairing: &DifferentialPairing, total: i64) -> Vec<(i64, i64)> {
    let f = pairing.fields();
    f.degrees().map(|n1| (n1, total - n1)).filter(|&(n1, n2)| f.has_degree(n2) && pairing.component(n1, n2).is_some()).collect()
}

/// `ev_M ∘ Q_⊗ = 0` on compactly supported pairs.
pub fn check_ev_m_cochain(model: &Model, pairing: &DifferentialPairing, samples: usize, seed: u64) -> CheckResult {
    let t0 = Instant::now();
    let name = "ev_M_cochain";
    let anchor = "int_M (Q a, b) + (-1)^|a| int_M (a, Q b) = 0";
    let (lo, hi) = model.lattice().interior();
    let pairs = paired(pairing, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcome = Ok(());
    for s in 0..samples {
        if pairs.is_empty() {
            break;
        }
        let (n1, n2) = pairs[s % pairs.len()];
        let a = random_section(model, n1, (lo + 1, hi - 1), &mut rng);
        let b = random_section(model, n2, (lo + 1, hi - 1), &mut rng);
        let v = ev_m(pairing, n1 + 1, &q(model, n1, &a), n2, &b)
            + ev_m(pairing, n1, &a, n2 + 1, &q(model, n2, &b)) * Scalar::sign(n1);
        if !v.is_zero() {
            outcome = Err(json!({ "sample": s, "degrees": [n1, n2], "value": v }));
            break;
        }
    }
    CheckResult::from_outcome(name, anchor, outcome).with_note(format!("{samples} random pairs")).timed(t0)
}

/// `ev_Σ ∘ Q_⊗ = 0` on sections supported across the whole interior.
pub fn check_ev_sigma_cochain(model: &Model, pairing: &DifferentialPairing, slice: &CauchySlice, samples: usize, seed: u64) -> CheckResult {
    let t0 = Instant::now();
    let name = "ev_Sigma_cochain";
    let anchor = "int_S (Q a, b) + (-1)^|a| int_S (a, Q b) = 0";
    let lat = model.lattice();
    let pairs = paired(pairing, -1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcome = Ok(());
    for s in 0..samples {
        if pairs.is_empty() {
            break;
        }
        let (n1, n2) = pairs[s % pairs.len()];
        let band = (0, lat.n_time() as i64 - 1);
        let a = random_section(model, n1, band, &mut rng);
        let b = random_section(model, n2, band, &mut rng);
        let v = ev_sigma(pairing, slice, n1 + 1, &q(model, n1, &a), n2, &b)
            + ev_sigma(pairing, slice, n1, &a, n2 + 1, &q(model, n2, &b)) * Scalar::sign(n1);
        if !v.is_zero() {
            outcome = Err(json!({ "sample": s, "degrees": [n1, n2], "value": v }));
            break;
        }
    }
    CheckResult::from_outcome(name, anchor, outcome).with_note(format!("{samples} random pairs, slice t = {}", slice.time())).timed(t0)
}

/// Discrete Stokes for `ω = (φ₁, φ₂)` of degree `m − 1` with compact support:
/// `∫_M dω = 0`, `∫_{t≥T} dω = −∫_Σ ω`, `∫_{t<T} dω = ∫_Σ ω`; and the pairing
/// compatibility `(Qφ₁, φ₂) + (−1)^{|φ₁|}(φ₁, Qφ₂) = (−1)^{m−1} d(φ₁, φ₂)` integrated over each half.
pub fn check_stokes(model: &Model, pairing: &DifferentialPairing, slice: &CauchySlice, samples: usize, seed: u64) -> CheckResult {
    let t0 = Instant::now();
    let name = "stokes_split";
    let anchor = "int_{t>=T} dw = -int_S w, int_{t<T} dw = int_S w";
    let lat = model.lattice();
    let m = lat.dim() as i64;
    let (lo, hi) = lat.interior();
    let pairs = paired(pairing, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcome = Ok(());
    let d = exterior_d(lat.dim(), lat.dim() - 1).slab_matrix(lat);
    for s in 0..samples {
        let w = {
            let idx = lat.cell_index(lat.dim() - 1);
            let mut w = vec![Scalar::zero(); idx.len()];
            for (i, c) in idx.cells(lat).iter().enumerate() {
                let (x, y) = lat.time_span(c);
                if x > lo && y < hi && rng.gen_bool(0.4) {
                    w[i] = Scalar::from_int(rng.gen_range(-4..=4));
                }
            }
            w
        };
        let dw = d.mul_vec(&w);
        let sum = |dom: Domain| -> Scalar {
            let idx = lat.cell_index(lat.dim());
            top_cells(lat, dom).iter().map(|c| dw[idx.index_of(lat, c).expect("top cell")].clone()).sum()
        };
        let on_slice: Scalar = {
            let idx = lat.cell_index(lat.dim() - 1);
            slice_cells(lat, slice).iter().map(|c| w[idx.index_of(lat, c).expect("slice cell")].clone()).sum()
        };
        let (all, fut, past) = (sum(Domain::All), sum(Domain::Future(*slice)), sum(Domain::Past(*slice)));
        if !all.is_zero() || fut != -on_slice.clone() || past != on_slice {
            outcome = Err(json!({ "sample": s, "form": "random", "total": all, "future": fut, "past": past, "slice": on_slice }));
            break;
        }
        if pairs.is_empty() {
            continue;
        }
        let (n1, n2) = pairs[s % pairs.len()];
        let a = random_section(model, n1, (lo + 1, hi - 1), &mut rng);
        let b = random_section(model, n2, (lo + 1, hi - 1), &mut rng);
        for dom in [Domain::Future(*slice), Domain::Past(*slice)] {
            let lhs = bilinear(&ev_matrix(pairing, n1 + 1, n2, dom), &q(model, n1, &a), &b)
                + bilinear(&ev_matrix(pairing, n1, n2 + 1, dom), &a, &q(model, n2, &b)) * Scalar::sign(n1);
            let rhs = bilinear(&stokes_matrix(pairing, n1, n2, dom), &a, &b) * Scalar::from_int(sign::parity(m - 1));
            if lhs != rhs {
                outcome = Err(json!({ "sample": s, "form": "pairing", "degrees": [n1, n2], "domain": format!("{dom:?}"), "lhs": lhs, "rhs": rhs }));
                break;
            }
        }
        if outcome.is_err() {
            break;
        }
    }
    CheckResult::from_outcome(name, anchor, outcome).with_note(format!("{samples} random forms, slice t = {}", slice.time())).timed(t0)
}
