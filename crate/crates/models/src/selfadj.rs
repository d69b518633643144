//! Formal self-adjointness of a Green's witness with respect to a pairing.

use crate::model::Model;
use crate::pairing::DifferentialPairing;
use ghc_green::{Direction, GreenOperators};
use ghc_homalg::{sign, CheckResult, Scalar};
use ghc_lattice::LocalOperator;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::time::Instant;

/// `∫_M (φ₁, φ₂)`: the sum over top cells, zero when the component vanishes.
pub fn integrate_top(pairing: &DifferentialPairing, n1: i64, a: &[Scalar], n2: i64, b: &[Scalar]) -> Scalar {
    if pairing.out_degree(n1, n2) != Some(pairing.dim()) {
        return Scalar::zero();
    }
    pairing.evaluate(n1, a, n2, b).map(|v| v.into_iter().sum()).unwrap_or_default()
}

fn random_compact(model: &Model, n: i64, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    let f = model.fields();
    let (lo, hi) = f.lattice().interior();
    let mut v = vec![Scalar::zero(); f.dim(n)];
    for j in f.time_window(n, lo, hi) {
        if rng.gen_bool(0.4) {
            v[j] = Scalar::from_int(rng.gen_range(-4..=4));
        }
    }
    v
}

fn apply(op: &LocalOperator, model: &Model, n: i64, v: &[Scalar]) -> Vec<Scalar> {
    let f = model.fields();
    op.slab_block(f, f, n).mul_vec(v)
}

/// Checks `QWW = WWQ` and `∫(Wφ₁, φ₂) = (−1)^{|φ₁|} ∫(φ₁, Wφ₂)`, and the
/// consequences `PW = WP`, `G±W = WG±` (when `green` is given) and
/// `∫(Pφ₁, φ₂) = ∫(φ₁, Pφ₂)`.
pub fn validate_self_adjoint_witness(
    model: &Model,
    w: &LocalOperator,
    pairing: &DifferentialPairing,
    green: Option<&GreenOperators>,
    samples: usize,
    seed: u64,
) -> Vec<CheckResult> {
    let q = model.q_local();
    let f = model.fields();
    let mut out = Vec::new();
    let t0 = Instant::now();
    let qww = q.compose(w).compose(w);
    let wwq = w.compose(w).compose(q);
    out.push(
        CheckResult::from_outcome(
            "witness_qww",
            "Q W W = W W Q",
            if qww.equals(&wwq) { Ok(()) } else { Err(json!({ "difference_radius": qww.sub(&wwq).radius() })) },
        )
        .timed(t0),
    );
    let p = q.compose(w).add(&w.compose(q));
    let t0 = Instant::now();
    let (pw, wp) = (p.compose(w), w.compose(&p));
    out.push(
        CheckResult::from_outcome(
            "witness_commutes_with_p",
            "P W = W P",
            if pw.equals(&wp) { Ok(()) } else { Err(json!({ "difference_radius": pw.sub(&wp).radius() })) },
        )
        .timed(t0),
    );

    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cond = Ok(());
    let mut p_adj = Ok(());
    for k in 0..samples {
        for n1 in f.degrees() {
            for n2 in f.degrees() {
                let a = random_compact(model, n1, &mut rng);
                let b = random_compact(model, n2, &mut rng);
                if n1 + n2 == 2 && cond.is_ok() {
                    let wa = apply(w, model, n1, &a);
                    let wb = apply(w, model, n2, &b);
                    let l = integrate_top(pairing, n1 - 1, &wa, n2, &b);
                    let r = &integrate_top(pairing, n1, &a, n2 - 1, &wb) * &Scalar::from_int(sign::parity(n1));
                    if l != r {
                        cond = Err(json!({ "sample": k, "degrees": [n1, n2], "left": l.to_string(), "right": r.to_string() }));
                    }
                }
                if n1 + n2 == 1 && p_adj.is_ok() {
                    let l = integrate_top(pairing, n1, &apply(&p, model, n1, &a), n2, &b);
                    let r = integrate_top(pairing, n1, &a, n2, &apply(&p, model, n2, &b));
                    if l != r {
                        p_adj = Err(json!({ "sample": k, "degrees": [n1, n2], "left": l.to_string(), "right": r.to_string() }));
                    }
                }
            }
        }
    }
    out.push(CheckResult::from_outcome("witness_formally_self_adjoint", "int (W a, b) = (-1)^{|a|} int (a, W b)", cond).timed(t0));
    out.push(CheckResult::from_outcome("p_formally_self_adjoint", "int (P a, b) = int (a, P b)", p_adj).timed(t0));

    if let Some(g) = green {
        let t0 = Instant::now();
        let last = f.lattice().n_time() as i64 - 1;
        let buffer = 2 * w.radius().max(1) as i64;
        let mut res = Ok(());
        'dirs: for dir in [Direction::Retarded, Direction::Advanced] {
            for n in f.degrees().filter(|n| f.has_degree(n - 1)) {
                let window = match dir {
                    Direction::Retarded => f.time_window(n - 1, 0, last - buffer),
                    Direction::Advanced => f.time_window(n - 1, buffer, last),
                };
                for k in 0..samples {
                    let phi = random_compact(model, n, &mut rng);
                    let l = g.solve_unchecked(dir, n - 1, &apply(w, model, n, &phi));
                    let r = apply(w, model, n, &g.solve_unchecked(dir, n, &phi));
                    if let Some(&i) = window.iter().find(|&&i| l[i] != r[i]) {
                        res = Err(json!({
                            "direction": dir.name(), "degree": n, "sample": k, "cell": f.label(n - 1, i),
                            "left": l[i].to_string(), "right": r[i].to_string(),
                        }));
                        break 'dirs;
                    }
                }
            }
        }
        out.push(CheckResult::from_outcome("green_commutes_with_witness", "G± W = W G± away from the terminal boundary", res).timed(t0));
    }
    out
}
