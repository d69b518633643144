//! Test-space checks of the Green's-operator identities on a finite slab.
//!
//! Slab truncation means the identities hold on restricted spaces only:
//! `G±P = id` on past/future-compact sections (support at least `margin`
//! levels away from the initial side), `PG± = id` on rows that are not
//! terminal, and `G±Q = QG±` away from the terminal boundary.

use crate::certify::Direction;
use crate::solve::GreenOperators;
use ghc_homalg::{CheckResult, GradedMap, Scalar};
use ghc_lattice::{causal_future, causal_past, FieldSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::time::Instant;

/// Support class of a test section.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    PastCompact,
    FutureCompact,
    Compact,
}

/// How test sections are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// Every basis vector of the admissible subspace.
    Basis,
    /// `count` random integer combinations, seeded.
    Random { count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug)]
pub struct IdentityOptions {
    pub sampling: Sampling,
    /// Distance kept from the terminal boundary when comparing `G±Q` with `QG±`.
    pub commute_buffer: i64,
}

impl Default for IdentityOptions {
    fn default() -> Self {
        IdentityOptions { sampling: Sampling::Basis, commute_buffer: 2 }
    }
}

/// Admissible cell indices of a support class in degree `n`.
pub fn admissible_cells(fields: &FieldSpace, n: i64, support: Support) -> Vec<usize> {
    let lat = fields.lattice();
    let (lo, hi) = lat.interior();
    let last = lat.n_time() as i64 - 1;
    match support {
        Support::PastCompact => fields.time_window(n, lo, last),
        Support::FutureCompact => fields.time_window(n, 0, hi),
        Support::Compact => fields.time_window(n, lo, hi),
    }
}

/// Dense test sections of a support class.
pub fn test_sections(fields: &FieldSpace, n: i64, support: Support, sampling: Sampling) -> Vec<Vec<Scalar>> {
    let cells = admissible_cells(fields, n, support);
    let dim = fields.dim(n);
    match sampling {
        Sampling::Basis => cells
            .iter()
            .map(|&j| {
                let mut v = vec![Scalar::zero(); dim];
                v[j] = Scalar::one();
                v
            })
            .collect(),
        Sampling::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9));
            (0..count)
                .map(|_| {
                    let mut v = vec![Scalar::zero(); dim];
                    for &j in &cells {
                        if rng.gen_bool(0.25) {
                            v[j] = Scalar::from_int(rng.gen_range(-3..=3));
                        }
                    }
                    v
                })
                .collect()
        }
    }
}

fn mat_vec(m: &ghc_homalg::SparseMatrix, v: &[Scalar]) -> Vec<Scalar> {
    m.mul_vec(v)
}

/// First index in `rows` where `a` and `b` differ.
fn mismatch(fields: &FieldSpace, n: i64, a: &[Scalar], b: &[Scalar], rows: impl Iterator<Item = usize>) -> Option<serde_json::Value> {
    for i in rows {
        if a[i] != b[i] {
            return Some(json!({
                "degree": n,
                "cell": fields.label(n, i),
                "left": a[i].to_string(),
                "right": b[i].to_string(),
            }));
        }
    }
    None
}

fn first_failure<T>(items: &[T], f: impl Fn(usize, &T) -> Option<serde_json::Value>) -> Result<(), serde_json::Value> {
    for (k, it) in items.iter().enumerate() {
        if let Some(mut w) = f(k, it) {
            w["test_vector"] = json!(k);
            return Err(w);
        }
    }
    Ok(())
}

fn support_of(dir: Direction) -> Support {
    match dir {
        Direction::Retarded => Support::PastCompact,
        Direction::Advanced => Support::FutureCompact,
    }
}

fn sign_name(dir: Direction) -> &'static str {
    match dir {
        Direction::Retarded => "+",
        Direction::Advanced => "-",
    }
}

/// `G±Pφ = φ` on the whole slab for admissible `φ`.
pub fn left_inverse(ops: &GreenOperators, dir: Direction, opts: &IdentityOptions) -> CheckResult {
    let t0 = Instant::now();
    let f = ops.operator().fields();
    let p = ops.operator().p();
    let outcome = f.degrees().try_for_each(|n| {
        let tests = test_sections(f, n, support_of(dir), opts.sampling);
        let pb = p.block(n);
        first_failure(&tests, |_, phi| {
            let back = ops.solve_unchecked(dir, n, &mat_vec(&pb, phi));
            mismatch(f, n, &back, phi, 0..phi.len())
        })
    });
    let s = sign_name(dir);
    CheckResult::from_outcome(format!("green_left_inverse{s}"), format!("G{s} P = id on admissible sections"), outcome).timed(t0)
}

/// `PG±φ = φ` away from the terminal rows.
pub fn right_inverse(ops: &GreenOperators, dir: Direction, opts: &IdentityOptions) -> CheckResult {
    let t0 = Instant::now();
    let f = ops.operator().fields();
    let p = ops.operator().p();
    let outcome = f.degrees().try_for_each(|n| {
        let tests = test_sections(f, n, support_of(dir), opts.sampling);
        let terminal = &ops.operator().sweep(dir, n).terminal;
        let mut keep = vec![true; f.dim(n)];
        for &r in terminal {
            keep[r] = false;
        }
        let pb = p.block(n);
        first_failure(&tests, |_, phi| {
            let fwd = mat_vec(&pb, &ops.solve_unchecked(dir, n, phi));
            mismatch(f, n, &fwd, phi, (0..phi.len()).filter(|&i| keep[i]))
        })
    });
    let s = sign_name(dir);
    CheckResult::from_outcome(format!("green_right_inverse{s}"), format!("P G{s} = id off the terminal rows"), outcome).timed(t0)
}

/// `supp G±φ ⊆ J±(supp φ)`.
pub fn support_propagation(ops: &GreenOperators, dir: Direction, opts: &IdentityOptions) -> CheckResult {
    let t0 = Instant::now();
    let f = ops.operator().fields();
    let lat = f.lattice();
    let outcome = f.degrees().try_for_each(|n| {
        let tests = test_sections(f, n, support_of(dir), opts.sampling);
        first_failure(&tests, |_, phi| {
            let psi = ops.solve_unchecked(dir, n, phi);
            let src = f.support(n, phi);
            let cone = match dir {
                Direction::Retarded => causal_future(lat, &src),
                Direction::Advanced => causal_past(lat, &src),
            };
            (0..psi.len())
                .find(|&i| !psi[i].is_zero() && !cone.contains_cell(lat, &f.cell(n, i)))
                .map(|i| json!({ "degree": n, "cell": f.label(n, i), "value": psi[i].to_string() }))
        })
    });
    let s = sign_name(dir);
    CheckResult::from_outcome(format!("green_support{s}"), format!("supp G{s} phi within J{s}(supp phi)"), outcome).timed(t0)
}

/// `G±Qφ = QG±φ` on cells at least `commute_buffer` levels from the terminal boundary.
pub fn commutes_with(ops: &GreenOperators, q: &GradedMap, dir: Direction, opts: &IdentityOptions) -> CheckResult {
    let t0 = Instant::now();
    let f = ops.operator().fields();
    let last = f.lattice().n_time() as i64 - 1;
    let b = opts.commute_buffer;
    let outcome = f.degrees().filter(|n| f.has_degree(n + 1)).try_for_each(|n| {
        let tests = test_sections(f, n, support_of(dir), opts.sampling);
        let qb = q.block(n);
        let window = match dir {
            Direction::Retarded => f.time_window(n + 1, 0, last - b),
            Direction::Advanced => f.time_window(n + 1, b, last),
        };
        first_failure(&tests, |_, phi| {
            let left = ops.solve_unchecked(dir, n + 1, &mat_vec(&qb, phi));
            let right = mat_vec(&qb, &ops.solve_unchecked(dir, n, phi));
            mismatch(f, n + 1, &left, &right, window.iter().copied())
        })
    });
    let s = sign_name(dir);
    CheckResult::from_outcome(format!("green_commutes_q{s}"), format!("G{s} Q = Q G{s} away from the terminal boundary"), outcome)
        .timed(t0)
}

/// Every identity above, both directions; commutation only when `q` is given.
pub fn verify_green_identities(ops: &GreenOperators, q: Option<&GradedMap>, opts: &IdentityOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for dir in [Direction::Retarded, Direction::Advanced] {
        out.push(left_inverse(ops, dir, opts));
        out.push(right_inverse(ops, dir, opts));
        out.push(support_propagation(ops, dir, opts));
        if let Some(q) = q {
            out.push(commutes_with(ops, q, dir, opts));
        }
    }
    out
}

/// Formal adjointness under a degree-wise pairing `⟨⟨a, b⟩⟩`, on compact sections:
/// `P` is formally self-adjoint, `⟨⟨φ, G₊φ̃⟩⟩ = ⟨⟨G₋φ, φ̃⟩⟩`, and `G = G₊ − G₋` is skew.
pub fn formal_adjoint_check(
    ops: &GreenOperators,
    pairing: &dyn Fn(i64, &[Scalar], &[Scalar]) -> Scalar,
    sampling: Sampling,
) -> Vec<CheckResult> {
    let f = ops.operator().fields();
    let p = ops.operator().p();
    let mut self_adj = Ok(());
    let mut swap = Ok(());
    let mut skew = Ok(());
    let mut nontrivial = false;
    let t0 = Instant::now();
    for n in f.degrees() {
        let tests = test_sections(f, n, Support::Compact, sampling);
        let pb = p.block(n);
        let gp: Vec<_> = tests.iter().map(|v| ops.solve_unchecked(Direction::Retarded, n, v)).collect();
        let gm: Vec<_> = tests.iter().map(|v| ops.solve_unchecked(Direction::Advanced, n, v)).collect();
        let pv: Vec<_> = tests.iter().map(|v| mat_vec(&pb, v)).collect();
        for i in 0..tests.len() {
            for j in 0..tests.len() {
                let w = |l: &Scalar, r: &Scalar| json!({ "degree": n, "pair": [i, j], "left": l.to_string(), "right": r.to_string() });
                let a = pairing(n, &tests[i], &pv[j]);
                let b = pairing(n, &pv[i], &tests[j]);
                if a != b && self_adj.is_ok() {
                    self_adj = Err(w(&a, &b));
                }
                let a = pairing(n, &tests[i], &gp[j]);
                let b = pairing(n, &gm[i], &tests[j]);
                nontrivial |= !a.is_zero();
                if a != b && swap.is_ok() {
                    swap = Err(w(&a, &b));
                }
                let g_ij = pairing(n, &tests[i], &(0..gp[j].len()).map(|k| &gp[j][k] - &gm[j][k]).collect::<Vec<_>>());
                let g_ji = pairing(n, &(0..gp[i].len()).map(|k| &gp[i][k] - &gm[i][k]).collect::<Vec<_>>(), &tests[j]);
                if g_ij != -g_ji.clone() && skew.is_ok() {
                    skew = Err(w(&g_ij, &g_ji));
                }
            }
        }
    }
    let mut swap_res = CheckResult::from_outcome("green_adjoint_swap", "<<phi, G+ psi>> = <<G- phi, psi>>", swap);
    if !nontrivial {
        swap_res = swap_res.with_note("pairing vanished on every sampled pair");
    }
    vec![
        CheckResult::from_outcome("p_formally_self_adjoint", "<<phi, P psi>> = <<P phi, psi>>", self_adj).timed(t0),
        swap_res.timed(t0),
        CheckResult::from_outcome("causal_propagator_skew", "<<phi, G psi>> = -<<G phi, psi>>", skew).timed(t0),
    ]
}
