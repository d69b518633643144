//! The verification suites. Each returns its checks in a fixed order so that
//! reports are reproducible whatever the scheduling.

use crate::config::{Suite, Validated};
use ghc_green::{certify_causal, formal_adjoint_check, hodge_pairing, verify_green_identities, Direction, IdentityOptions};
use ghc_homalg::{all_passed, CheckResult, Scalar};
use ghc_lattice::CauchySlice;
use ghc_models::{build_pairing, chern_simons_is_shifted_de_rham, validate_pairing, validate_self_adjoint_witness, ModelKind};
use ghc_poisson::{
    check_ev_m_cochain, check_ev_sigma_cochain, check_stokes, random_mu, verify_cauchy, verify_compat, verify_covariant, verify_sigma,
    CauchyComparison, PoissonSetup,
};
use ghc_rma::{verify_acyclicity, verify_certificate, verify_homotopies, Certificate, GreenHomotopy, HomotopyOptions};
use serde::Serialize;
use serde_json::json;
use std::time::Instant;

/// Distance from the terminal boundary kept by the `G±Q = QG±` comparison.
pub const COMMUTE_BUFFER: i64 = 3;
/// Distance from the terminal boundary kept by homotopy comparisons.
pub const HOMOTOPY_BUFFER: i64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub checks: Vec<CheckResult>,
    pub wall_ms: u64,
}

impl SuiteReport {
    fn finish(suite: Suite, checks: Vec<CheckResult>, started: Instant) -> Self {
        let status = if all_passed(&checks) { Status::Pass } else { Status::Fail };
        SuiteReport { name: suite.name(), status, reason: None, checks, wall_ms: started.elapsed().as_millis() as u64 }
    }

    fn skipped(suite: Suite, reason: String, started: Instant) -> Self {
        SuiteReport { name: suite.name(), status: Status::Skipped, reason: Some(reason), checks: Vec::new(), wall_ms: started.elapsed().as_millis() as u64 }
    }
}

fn error_check(name: &str, anchor: &str, e: impl std::fmt::Display) -> CheckResult {
    CheckResult::fail(name, anchor, json!({ "error": e.to_string() }))
}

/// Every selected suite, run concurrently, in `Suite::ALL` order.
pub fn run_suites(v: &Validated, h: Option<&GreenHomotopy>) -> Vec<SuiteReport> {
    let mut selected = v.config.suites.clone();
    selected.sort();
    selected.dedup();
    std::thread::scope(|s| {
        let handles: Vec<_> = selected.iter().map(|&suite| s.spawn(move || run_suite(suite, v, h))).collect();
        handles.into_iter().map(|t| t.join().expect("suite thread panicked")).collect()
    })
}

pub fn run_suite(suite: Suite, v: &Validated, h: Option<&GreenHomotopy>) -> SuiteReport {
    let t0 = Instant::now();
    if suite == Suite::Dgcat {
        return SuiteReport::finish(suite, ghc_dgcat::verify_dgcat(v.config.seed, v.config.sampling.dgcat_cases), t0);
    }
    let Some(h) = h else {
        let e = GreenHomotopy::new(&v.model).err().map_or_else(String::new, |e| e.to_string());
        return match suite {
            Suite::Witness => SuiteReport::finish(suite, witness(v, None, Some(e)), t0),
            _ => SuiteReport::skipped(suite, format!("no certified Green's operators: {e}"), t0),
        };
    };
    let checks = match suite {
        Suite::Witness => witness(v, Some(h), None),
        Suite::Green => green(v, h),
        Suite::Rma => rma(v, h),
        Suite::Poisson => match poisson(v, h) {
            Ok(c) => c,
            Err(reason) => return SuiteReport::skipped(suite, reason, t0),
        },
        Suite::Models => models(v, h),
        Suite::Dgcat => unreachable!(),
    };
    SuiteReport::finish(suite, checks, t0)
}

fn witness(v: &Validated, h: Option<&GreenHomotopy>, failure: Option<String>) -> Vec<CheckResult> {
    let m = &v.model;
    let t0 = Instant::now();
    let qq = m.q_local().compose(m.q_local());
    let slab = match m.complex() {
        Ok(_) => "slab truncation is a complex".to_string(),
        Err(e) => format!("slab truncation is not a complex: {e}"),
    };
    let mut out = vec![CheckResult::from_outcome(
        "q_squared_zero",
        "Q Q = 0",
        if qq.is_zero() { Ok(()) } else { Err(json!({ "radius": qq.radius() })) },
    )
    .with_note(slab)
    .timed(t0)];
    let t0 = Instant::now();
    out.push(
        CheckResult::from_outcome(
            "p_certified_causal",
            "P = Q W + W Q is Green hyperbolic",
            match failure {
                Some(e) => Err(json!({ "error": e })),
                None => certify_causal(&m.p_map(), m.fields()).map(|_| ()).map_err(|e| json!({ "error": e.to_string() })),
            },
        )
        .timed(t0),
    );
    if let Some(h) = h {
        out.extend(verify_homotopies(h, &HomotopyOptions { sampling: v.witness_sampling, buffer: HOMOTOPY_BUFFER }));
    }
    out
}

fn green(v: &Validated, h: &GreenHomotopy) -> Vec<CheckResult> {
    let opts = IdentityOptions { sampling: v.witness_sampling, commute_buffer: COMMUTE_BUFFER };
    let q = v.model.q_map();
    let mut out = verify_green_identities(h.ops(), Some(&q), &opts);
    let pairing = hodge_pairing(v.model.fields());
    out.extend(formal_adjoint_check(h.ops(), &pairing, v.adjoint_sampling));
    out
}

fn unit(len: usize, j: usize) -> Vec<Scalar> {
    let mut e = vec![Scalar::zero(); len];
    e[j] = Scalar::one();
    e
}

/// Klein–Gordon only: `Λ` from degree 1 to degree 0 is `G₊ − G₋`, column by column.
fn rma_is_causal_propagator(h: &GreenHomotopy) -> CheckResult {
    let t0 = Instant::now();
    let f = h.fields();
    let g = h.ops().causal_propagator();
    let block = g.block(1);
    let dim = f.dim(1);
    let mut outcome = Ok(());
    'cols: for j in 0..dim {
        let col = h.rma(1, &unit(dim, j));
        for (i, x) in col.iter().enumerate() {
            let y = block.get(i, j);
            if *x != y {
                outcome = Err(json!({ "source": f.label(1, j), "cell": f.label(0, i), "rma": x.to_string(), "propagator": y.to_string() }));
                break 'cols;
            }
        }
    }
    CheckResult::from_outcome("rma_is_causal_propagator", "L = G+ - G- entrywise", outcome).with_note(format!("{dim} columns")).timed(t0)
}

fn rma(v: &Validated, h: &GreenHomotopy) -> Vec<CheckResult> {
    let mut out = match Certificate::build(h, v.geometry) {
        Ok(cert) => verify_certificate(&cert, v.certificate_samples),
        Err(e) => vec![error_check("rma_certificate", "quasi-inverse certificate", e)],
    };
    let s = &v.config.sampling;
    out.extend(verify_acyclicity(h, s.acyclic_compacts, v.acyclic_samples, HOMOTOPY_BUFFER, v.config.seed));
    if matches!(v.spec.kind, ModelKind::KleinGordon { .. }) {
        out.push(rma_is_causal_propagator(h));
    }
    out
}

/// Klein–Gordon only: `τ(x, y) = ⟨x, G y⟩` entrywise on the compact window.
fn tau_is_propagator_pairing(setup: &PoissonSetup, h: &GreenHomotopy) -> CheckResult {
    let t0 = Instant::now();
    let tau = setup.tau();
    let block = tau.block(0, 0);
    let cells = setup.compact().cells(1).to_vec();
    let dim = h.fields().dim(1);
    let mut outcome = Ok(());
    'cols: for (j, &cj) in cells.iter().enumerate() {
        let e = unit(dim, cj);
        let plus = h.ops().solve_unchecked(Direction::Retarded, 1, &e);
        let minus = h.ops().solve_unchecked(Direction::Advanced, 1, &e);
        for (i, &ci) in cells.iter().enumerate() {
            let expected = &plus[ci] - &minus[ci];
            if block.get(i, j) != expected {
                outcome = Err(json!({ "entry": [i, j], "tau": block.get(i, j).to_string(), "propagator": expected.to_string() }));
                break 'cols;
            }
        }
    }
    let mut c = CheckResult::from_outcome("tau_is_propagator_pairing", "tau = <<-, G(-)>>", outcome).timed(t0);
    if tau.is_zero() {
        c = CheckResult::fail(c.name, c.anchor, json!({ "reason": "tau vanishes" }));
    }
    c
}

fn slice(v: &Validated, t: i64) -> Result<CauchySlice, String> {
    CauchySlice::new(&v.spec.lattice, t).map_err(|e| e.to_string())
}

fn poisson(v: &Validated, h: &GreenHomotopy) -> Result<Vec<CheckResult>, String> {
    let m = &v.model;
    let pairing = build_pairing(m).map_err(|e| e.to_string())?;
    let cert = Certificate::build(h, v.geometry).map_err(|e| e.to_string())?;
    let s = &v.config.sampling;
    let seed = v.config.seed;
    let self_adjoint = all_passed(&validate_self_adjoint_witness(m, h.witness(), &pairing, None, s.pairing_samples, seed));
    let setup = PoissonSetup::new(h, &pairing, cert.compact().clone());
    let mut out = verify_covariant(&setup, self_adjoint);
    let (mu_plus, mu_minus) = (random_mu(m, 2 * seed + 1), random_mu(m, 2 * seed + 2));
    if !mu_plus.is_zero() && !mu_minus.is_zero() {
        let perturbed = setup.perturbed(&mu_plus, &mu_minus);
        out.extend(verify_covariant(&perturbed, false).into_iter().map(|mut c| {
            c.name = format!("perturbed_{}", c.name);
            c
        }));
        let t0 = Instant::now();
        let tau = perturbed.tau();
        let plus = perturbed.tau_pm(Direction::Retarded).sub(&tau);
        let minus = tau.sub(&perturbed.tau_pm(Direction::Advanced));
        out.push(
            CheckResult::from_outcome(
                "perturbed_sides_nonzero",
                "tau+ - tau != 0 and tau - tau- != 0",
                if !plus.is_zero() && !minus.is_zero() {
                    Ok(())
                } else {
                    Err(json!({ "plus_nnz": plus.nnz(), "minus_nnz": minus.nnz() }))
                },
            )
            .timed(t0),
        );
    }
    if matches!(v.spec.kind, ModelKind::KleinGordon { .. }) {
        out.push(tau_is_propagator_pairing(&setup, h));
    }
    let sl = v.config.slices;
    let slices = [slice(v, sl.past)?, slice(v, sl.present)?, slice(v, sl.future)?];
    for (k, s_k) in slices.iter().enumerate() {
        let tag = |mut c: CheckResult| {
            c.name = format!("{}[t={}]", c.name, s_k.time());
            c
        };
        out.extend(verify_sigma(&pairing, cert.slab(), s_k).into_iter().map(tag));
        out.extend(verify_compat(&setup, s_k).into_iter().map(tag));
        out.push(tag(check_ev_sigma_cochain(m, &pairing, s_k, s.ev_samples, seed + k as u64)));
        out.push(tag(check_stokes(m, &pairing, s_k, s.ev_samples, seed + k as u64)));
    }
    out.push(check_ev_m_cochain(m, &pairing, s.ev_samples, seed));
    match CauchyComparison::new(&cert, &pairing) {
        Ok(cmp) => {
            for (a, b) in [(0, 1), (1, 2)] {
                out.extend(verify_cauchy(&cmp, &slices[a], &slices[b]).into_iter().map(|mut c| {
                    c.name = format!("{}[{}->{}]", c.name, slices[a].time(), slices[b].time());
                    c
                }));
            }
        }
        Err(w) => out.push(CheckResult::fail("cauchy_comparison", "slice comparison setup", w)),
    }
    Ok(out)
}

fn models(v: &Validated, h: &GreenHomotopy) -> Vec<CheckResult> {
    let m = &v.model;
    let s = &v.config.sampling;
    let mut out = Vec::new();
    match build_pairing(m) {
        Ok(p) => {
            out.extend(validate_pairing(m, &p, s.pairing_samples, v.config.seed));
            out.extend(validate_self_adjoint_witness(m, h.witness(), &p, Some(h.ops()), s.pairing_samples, v.config.seed));
        }
        Err(e) => out.push(CheckResult::pass("pairing_available", "differential pairing").with_note(format!("none: {e}"))),
    }
    if v.spec.lattice.dim() == 3 {
        let t0 = Instant::now();
        out.push(
            CheckResult::from_outcome(
                "chern_simons_is_shifted_de_rham",
                "CS complex = de Rham complex shifted by one",
                match chern_simons_is_shifted_de_rham(&v.spec.lattice) {
                    Ok(true) => Ok(()),
                    Ok(false) => Err(json!({ "reason": "complexes differ" })),
                    Err(e) => Err(json!({ "error": e.to_string() })),
                },
            )
            .timed(t0),
        );
    }
    out
}
