//! Evaluation pairings, covariant and fixed-time Poisson structures, and the
//! homotopies comparing them, as exact bilinear forms on finite windows.

pub mod cauchy;
pub mod eval;
pub mod form;
pub mod structures;

pub use cauchy::{sigma, CauchyComparison};
pub use eval::{check_ev_m_cochain, check_ev_sigma_cochain, check_stokes, ev_m, ev_sigma, Domain};
pub use form::{BilinearForm, FormTriplets};
pub use structures::{compact_band, random_mu, PoissonSetup};

use ghc_green::Direction;
use ghc_homalg::{CheckResult, LadderComplex};
use ghc_lattice::CauchySlice;
use ghc_rma::Window;
use serde_json::json;
use std::time::Instant;

/// Exact equality of two forms, with the first differing entry as witness.
pub fn compare(name: &str, anchor: &str, left: &BilinearForm, right: &BilinearForm) -> CheckResult {
    let t0 = Instant::now();
    let outcome = match left.first_mismatch(right) {
        None => Ok(()),
        Some(m) => Err(left.describe(&m)),
    };
    CheckResult::from_outcome(name, anchor, outcome).with_note(format!("nnz {} / {}", left.nnz(), right.nnz())).timed(t0)
}

/// Exact graded antisymmetry and the cochain property `∂f = 0`.
pub fn check_poisson_structure(name: &str, f: &BilinearForm, v: &LadderComplex) -> Vec<CheckResult> {
    let t0 = Instant::now();
    let anti = match f.antisymmetry_defect() {
        None => Ok(()),
        Some(m) => Err(f.describe(&m)),
    };
    let anti = CheckResult::from_outcome(format!("{name}_antisymmetric"), "f o gamma = -f", anti).timed(t0);
    let t1 = Instant::now();
    let b = f.boundary(v);
    let closed = match b.pairs().into_iter().find(|&(x, y)| !b.block(x, y).is_zero()) {
        None => Ok(()),
        Some((x, y)) => Err(json!({ "degrees": [x, y], "nnz": b.block(x, y).nnz() })),
    };
    let closed = CheckResult::from_outcome(format!("{name}_cochain"), "f o d = 0", closed).timed(t1);
    vec![anti, closed]
}

/// `τ`, `τ±` as Poisson structures and `∂λ_M = τ⁺ − τ = τ − τ⁻`. With a
/// self-adjoint witness also `τ⁺ = τ⁻ = τ`.
pub fn verify_covariant(setup: &PoissonSetup, self_adjoint: bool) -> Vec<CheckResult> {
    let v = setup.shifted();
    let tau = setup.tau();
    let plus = setup.tau_pm(Direction::Retarded);
    let minus = setup.tau_pm(Direction::Advanced);
    let mut out = Vec::new();
    out.extend(check_poisson_structure("tau", &tau, v));
    out.extend(check_poisson_structure("tau_plus", &plus, v));
    out.extend(check_poisson_structure("tau_minus", &minus, v));
    if self_adjoint {
        out.push(compare("tau_tilde_antisymmetric", "tau~ = tau", &setup.tau_tilde(), &tau));
        out.push(compare("tau_plus_coincides", "tau+ = tau", &plus, &tau));
        out.push(compare("tau_minus_coincides", "tau- = tau", &minus, &tau));
    }
    let lm_tilde = setup.lambda_m_tilde();
    let lm = setup.lambda_m();
    out.push(compare("lambda_M_asym", "lambda_M = asym(lambda~_M)", &lm, &lm_tilde.asym()));
    let d = lm.boundary(v);
    out.push(compare("lambda_M_plus", "d lambda_M = tau+ - tau", &d, &plus.sub(&tau)));
    out.push(compare("lambda_M_minus", "d lambda_M = tau - tau-", &d, &tau.sub(&minus)));
    out
}

/// `σ_Σ` as a Poisson structure on a window of spacelike-compact sections.
pub fn verify_sigma(pairing: &ghc_models::DifferentialPairing, window: &Window, slice: &CauchySlice) -> Vec<CheckResult> {
    check_poisson_structure("sigma", &sigma(pairing, window, slice), &window.complex)
}

/// `∂λ = σ_Σ∘Λ^{⊗2} − τ`, with every line of the Stokes computation asserted.
pub fn verify_compat(setup: &PoissonSetup, slice: &CauchySlice) -> Vec<CheckResult> {
    let [l1, l2, l3, l4] = setup.compat_lines(slice);
    let mut out = vec![
        compare("lambda_compat_step1", "d lambda~ = Green identities inserted", &l1, &l2),
        compare("lambda_compat_step2", "pairing compatibility on each half", &l2, &l3),
        compare("lambda_compat_stokes", "Stokes over J+(S) and J-(S)", &l3, &l4),
    ];
    let sl = setup.sigma_lambda(slice);
    out.extend(check_poisson_structure("sigma_lambda", &sl, setup.shifted()));
    let d = setup.lambda_compat(slice).boundary(setup.shifted());
    out.push(compare("lambda_compat", "d lambda = sigma o L^2 - tau", &d, &sl.sub(&setup.tau())));
    out
}

/// `∂λ_ΣΣ′ = σ_Σ − σ_Σ′` on the slab window of the certificate, and `σ_Σ`
/// on that window pulled back along `Λ` agreeing with `σ_Σ∘Λ^{⊗2}` on `C[1]`.
pub fn verify_cauchy(cmp: &CauchyComparison, s1: &CauchySlice, s2: &CauchySlice) -> Vec<CheckResult> {
    let d = cmp.lambda_between(s1, s2).boundary(cmp.slab_complex());
    let delta = cmp.sigma(s1).sub(&cmp.sigma(s2));
    let restricted = cmp.sigma(s1).pullback(cmp.lambda_map());
    vec![
        compare("sigma_restricts", "sigma_S o L^2 on C[1]", &restricted, &cmp.setup().sigma_lambda(s1)),
        compare("cauchy_independence", "d lambda_SS' = sigma_S - sigma_S'", &d, &delta),
    ]
}
