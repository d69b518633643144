//! Green's homotopies `Λ± = W G±`, the alternatives `Λ̃± = G± W`, the
//! 2-homotopies `λ± = W G± G± W` and the retarded-minus-advanced map.

use ghc_green::{certify_causal, test_sections, Direction, GreenOperators, Sampling, Support};
use ghc_homalg::{CheckResult, Scalar, SparseMatrix};
use ghc_lattice::stencil::Term;
use ghc_lattice::{causal_future, causal_past, masks_of_degree, FieldSpace, LocalOperator, Stencil};
use ghc_models::{Model, ModelError};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::time::Instant;

/// A model together with a certified witness and its Green's operators.
pub struct GreenHomotopy {
    model: Model,
    w: LocalOperator,
    ops: GreenOperators,
    q_blocks: BTreeMap<i64, SparseMatrix>,
    w_blocks: BTreeMap<i64, SparseMatrix>,
}

pub(crate) fn zeros(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

pub(crate) fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn neg(a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| -x.clone()).collect()
}

pub(crate) fn sign_name(dir: Direction) -> &'static str {
    match dir {
        Direction::Retarded => "+",
        Direction::Advanced => "-",
    }
}

fn support_of(dir: Direction) -> Support {
    match dir {
        Direction::Retarded => Support::PastCompact,
        Direction::Advanced => Support::FutureCompact,
    }
}

impl GreenHomotopy {
    /// Uses the model's own witness.
    pub fn new(model: &Model) -> Result<Self, ModelError> {
        Self::with_witness(model, model.w_local().clone())
    }

    /// Certifies `P = QW + WQ` for an arbitrary degree −1 witness.
    pub fn with_witness(model: &Model, w: LocalOperator) -> Result<Self, ModelError> {
        let f = model.fields();
        let q = model.q_local();
        let p = q.compose(&w).add(&w.compose(q)).to_graded_map(f, f);
        let op = certify_causal(&p, f)?;
        let mut q_blocks = BTreeMap::new();
        let mut w_blocks = BTreeMap::new();
        for n in f.degrees() {
            if f.has_degree(n + 1) {
                q_blocks.insert(n, q.slab_block(f, f, n));
            }
            if f.has_degree(n - 1) {
                w_blocks.insert(n, w.slab_block(f, f, n));
            }
        }
        Ok(GreenHomotopy { model: model.clone(), w, ops: GreenOperators::new(op), q_blocks, w_blocks })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn fields(&self) -> &FieldSpace {
        self.model.fields()
    }

    pub fn witness(&self) -> &LocalOperator {
        &self.w
    }

    pub fn ops(&self) -> &GreenOperators {
        &self.ops
    }

    fn dim(&self, n: i64) -> usize {
        if self.fields().has_degree(n) {
            self.fields().dim(n)
        } else {
            0
        }
    }

    /// `Qφ` for `φ` of degree `n`; empty outside the field degrees.
    pub fn q(&self, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        self.q_blocks.get(&n).map_or_else(|| zeros(self.dim(n + 1)), |m| m.mul_vec(v))
    }

    /// `Wφ` for `φ` of degree `n`.
    pub fn w(&self, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        self.w_blocks.get(&n).map_or_else(|| zeros(self.dim(n - 1)), |m| m.mul_vec(v))
    }

    pub fn green(&self, dir: Direction, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        if v.is_empty() {
            return Vec::new();
        }
        self.ops.solve_unchecked(dir, n, v)
    }

    /// `Λ± φ = W G± φ`, degree `n → n − 1`.
    pub fn lambda(&self, dir: Direction, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        if !self.w_blocks.contains_key(&n) {
            return zeros(self.dim(n - 1));
        }
        self.w(n, &self.green(dir, n, v))
    }

    /// `Λ̃± φ = G± W φ`.
    pub fn lambda_tilde(&self, dir: Direction, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        if !self.w_blocks.contains_key(&n) {
            return zeros(self.dim(n - 1));
        }
        self.green(dir, n - 1, &self.w(n, v))
    }

    /// `λ± φ = W G± G± W φ`, degree `n → n − 2`.
    pub fn two_homotopy(&self, dir: Direction, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        if !self.w_blocks.contains_key(&n) || !self.w_blocks.contains_key(&(n - 1)) {
            return zeros(self.dim(n - 2));
        }
        let g = self.green(dir, n - 1, &self.w(n, v));
        self.w(n - 1, &self.green(dir, n - 1, &g))
    }

    /// `Λ = Λ₊ − Λ₋`.
    pub fn rma(&self, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        sub(&self.lambda(Direction::Retarded, n, v), &self.lambda(Direction::Advanced, n, v))
    }

    /// Observation window for a direction: cells at least `buffer` levels from the terminal boundary.
    pub fn window(&self, dir: Direction, n: i64, buffer: i64) -> Vec<usize> {
        let f = self.fields();
        let last = f.lattice().n_time() as i64 - 1;
        match dir {
            Direction::Retarded => f.time_window(n, 0, last - buffer),
            Direction::Advanced => f.time_window(n, buffer, last),
        }
    }

    fn tests(&self, dir: Direction, n: i64, sampling: Sampling) -> Vec<Vec<Scalar>> {
        test_sections(self.fields(), n, support_of(dir), sampling)
    }
}

pub(crate) fn mismatch(f: &FieldSpace, n: i64, a: &[Scalar], b: &[Scalar], rows: &[usize]) -> Option<Value> {
    rows.iter().find(|&&i| a[i] != b[i]).map(|&i| {
        json!({ "degree": n, "cell": f.label(n, i), "left": a[i].to_string(), "right": b[i].to_string() })
    })
}

/// Options for the homotopy checks.
#[derive(Clone, Copy, Debug)]
pub struct HomotopyOptions {
    pub sampling: Sampling,
    /// Levels kept from the terminal boundary when comparing.
    pub buffer: i64,
}

impl Default for HomotopyOptions {
    fn default() -> Self {
        HomotopyOptions { sampling: Sampling::Basis, buffer: 4 }
    }
}

fn for_each_test(
    h: &GreenHomotopy,
    dir: Direction,
    opts: &HomotopyOptions,
    mut f: impl FnMut(i64, usize, &[Scalar]) -> Option<Value>,
) -> Result<(), Value> {
    for n in h.fields().degrees() {
        for (k, phi) in h.tests(dir, n, opts.sampling).iter().enumerate() {
            if let Some(mut w) = f(n, k, phi) {
                w["test_vector"] = json!(k);
                return Err(w);
            }
        }
    }
    Ok(())
}

/// `∂Λ± = QΛ± + Λ±Q = id` on admissible sections, compared away from the terminal boundary.
pub fn check_contracting(h: &GreenHomotopy, dir: Direction, opts: &HomotopyOptions) -> CheckResult {
    let t0 = Instant::now();
    let f = h.fields();
    let outcome = for_each_test(h, dir, opts, |n, _, phi| {
        let left = add(&h.q(n - 1, &h.lambda(dir, n, phi)), &h.lambda(dir, n + 1, &h.q(n, phi)));
        mismatch(f, n, &left, phi, &h.window(dir, n, opts.buffer))
    });
    let s = sign_name(dir);
    CheckResult::from_outcome(format!("green_homotopy{s}"), format!("Q L{s} + L{s} Q = id on admissible sections"), outcome)
        .timed(t0)
}

/// `supp Λ±φ ⊆ J±(supp φ)`.
pub fn check_homotopy_support(h: &GreenHomotopy, dir: Direction, opts: &HomotopyOptions) -> CheckResult {
    let t0 = Instant::now();
    let f = h.fields();
    let lat = f.lattice();
    let outcome = for_each_test(h, dir, opts, |n, _, phi| {
        if !f.has_degree(n - 1) {
            return None;
        }
        let out = h.lambda(dir, n, phi);
        let src = f.support(n, phi);
        let cone = match dir {
            Direction::Retarded => causal_future(lat, &src),
            Direction::Advanced => causal_past(lat, &src),
        };
        (0..out.len())
            .find(|&i| !out[i].is_zero() && !cone.contains_cell(lat, &f.cell(n - 1, i)))
            .map(|i| json!({ "degree": n - 1, "cell": f.label(n - 1, i), "value": out[i].to_string() }))
    });
    let s = sign_name(dir);
    CheckResult::from_outcome(format!("green_homotopy_support{s}"), format!("supp L{s} phi within J{s}(supp phi)"), outcome)
        .timed(t0)
}

/// `∂λ± = Qλ± − λ±Q = Λ̃± − Λ±`. Reports in its note whether both sides vanished on every test.
pub fn check_two_homotopy(h: &GreenHomotopy, dir: Direction, opts: &HomotopyOptions) -> CheckResult {
    let t0 = Instant::now();
    let f = h.fields();
    let mut nonzero = 0usize;
    let mut total = 0usize;
    let outcome = for_each_test(h, dir, opts, |n, _, phi| {
        if !f.has_degree(n - 1) {
            return None;
        }
        let left = sub(&h.q(n - 2, &h.two_homotopy(dir, n, phi)), &h.two_homotopy(dir, n + 1, &h.q(n, phi)));
        let right = sub(&h.lambda_tilde(dir, n, phi), &h.lambda(dir, n, phi));
        let window = h.window(dir, n - 1, opts.buffer);
        total += 1;
        if window.iter().any(|&i| !right[i].is_zero()) {
            nonzero += 1;
        }
        mismatch(f, n - 1, &left, &right, &window)
    });
    let s = sign_name(dir);
    CheckResult::from_outcome(format!("two_homotopy{s}"), format!("Q l{s} - l{s} Q = L~{s} - L{s}"), outcome)
        .with_note(format!("right side nonzero on {nonzero} of {total} test sections"))
        .timed(t0)
}

/// `Λ̃± = Λ±` on the observation window.
pub fn check_tilde_coincides(h: &GreenHomotopy, dir: Direction, opts: &HomotopyOptions) -> CheckResult {
    let t0 = Instant::now();
    let f = h.fields();
    let outcome = for_each_test(h, dir, opts, |n, _, phi| {
        if !f.has_degree(n - 1) {
            return None;
        }
        let a = h.lambda_tilde(dir, n, phi);
        let b = h.lambda(dir, n, phi);
        mismatch(f, n - 1, &a, &b, &h.window(dir, n - 1, opts.buffer))
    });
    let s = sign_name(dir);
    CheckResult::from_outcome(format!("tilde_coincides{s}"), format!("G{s} W = W G{s}"), outcome).timed(t0)
}

/// Contraction, support and 2-homotopy checks in both directions.
pub fn verify_homotopies(h: &GreenHomotopy, opts: &HomotopyOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for dir in [Direction::Retarded, Direction::Advanced] {
        out.push(check_contracting(h, dir, opts));
        out.push(check_homotopy_support(h, dir, opts));
        out.push(check_two_homotopy(h, dir, opts));
    }
    out
}

/// Contraction with the time direction, `p`-cochains to `(p − 1)`-cochains at the same base.
pub fn time_contraction(m: usize, p: usize) -> Stencil {
    let terms = masks_of_degree(m, p)
        .into_iter()
        .filter(|k| k & 1 == 1)
        .map(|k| Term { dst: k & !1, src: k, offset: [0; 3], coeff: Scalar::one() })
        .collect();
    Stencil::new(p, p - 1, terms)
}

/// `W + sK` with `K` the time contraction on top-degree forms only. `QK + KQ`
/// is first order in time, so `P` stays causal, but it no longer commutes with `W`.
pub fn perturbed_witness(model: &Model, s: &Scalar) -> LocalOperator {
    let m = model.lattice().dim();
    let mut st = model.w_local().stencils().clone();
    for stencil in st.values_mut() {
        if stencil.src_degree == m && stencil.dst_degree + 1 == m {
            *stencil = stencil.add(&time_contraction(m, m).scale(s));
        }
    }
    LocalOperator::new(-1, st)
}
