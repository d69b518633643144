//! Differential pairings `(−,−)` as bilinear stencils, synthesised level by level.
//!
//! The pairing of degrees `(n₁, n₂)` takes values in forms of degree
//! `m − 1 + n₁ + n₂`. Top-degree components are fixed by the model. Lower
//! components are the local primitives forced by compatibility
//! `(Qφ₁, φ₂) + (−1)^{|φ₁|}(φ₁, Qφ₂) = (−1)^{m−1} d(φ₁, φ₂)`, then made
//! graded antisymmetric.

use crate::bilinear::{flux_primitive, time_primitive, BiTerm, Bilinear};
use crate::model::{Model, ModelError, ModelKind};
use ghc_homalg::{sign, CheckResult, Scalar};
use ghc_lattice::dec::{exterior_d, hodge_sign};
use ghc_lattice::{masks_of_degree, FieldSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct DifferentialPairing {
    m: usize,
    fields: FieldSpace,
    components: BTreeMap<(i64, i64), Bilinear>,
}

/// `−(−1)^{n₁n₂}`, the factor relating `(φ₂, φ₁)` to `(φ₁, φ₂)`.
fn antisym_factor(n1: i64, n2: i64) -> Scalar {
    Scalar::from_int(-sign::koszul(n1, n2))
}

impl DifferentialPairing {
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn fields(&self) -> &FieldSpace {
        &self.fields
    }

    pub fn components(&self) -> &BTreeMap<(i64, i64), Bilinear> {
        &self.components
    }

    pub fn component(&self, n1: i64, n2: i64) -> Option<&Bilinear> {
        self.components.get(&(n1, n2))
    }

    /// Form degree of `(φ₁, φ₂)`, if it is a valid form degree.
    pub fn out_degree(&self, n1: i64, n2: i64) -> Option<usize> {
        let k = self.m as i64 - 1 + n1 + n2;
        (0..=self.m as i64).contains(&k).then_some(k as usize)
    }

    pub fn radius(&self) -> u32 {
        self.components.values().map(Bilinear::radius).max().unwrap_or(0)
    }

    /// `(φ₁, φ₂)` on slab cochains; `None` when the component vanishes identically.
    pub fn evaluate(&self, n1: i64, a: &[Scalar], n2: i64, b: &[Scalar]) -> Option<Vec<Scalar>> {
        self.component(n1, n2).map(|c| c.evaluate(self.fields.lattice(), a, b))
    }

    fn insert(&mut self, n1: i64, n2: i64, b: Bilinear) {
        if !b.is_zero() {
            if n1 != n2 {
                self.components.insert((n2, n1), b.swap().scale(&antisym_factor(n1, n2)));
            }
            self.components.insert((n1, n2), b);
        }
    }

    /// `(Qφ₁, φ₂) + (−1)^{n₁}(φ₁, Qφ₂)` as a bilinear stencil, if both sides are defined.
    pub fn compatibility_lhs(&self, model: &Model, n1: i64, n2: i64) -> Option<Bilinear> {
        let f = &self.fields;
        let out = self.out_degree(n1, n2 + 1)?;
        let mut acc = Bilinear::zero(f.form_degree(n1), f.form_degree(n2), out);
        if let (Some(b), Some(q)) = (self.component(n1 + 1, n2), model.q_local().stencil(n1)) {
            acc = acc.add(&b.compose_a(q));
        }
        if let (Some(b), Some(q)) = (self.component(n1, n2 + 1), model.q_local().stencil(n2)) {
            acc = acc.add(&b.compose_b(q).scale(&Scalar::from_int(sign::parity(n1))));
        }
        Some(acc)
    }
}

/// Pairs `{(n₁, n₂) : n₁ ≤ n₂, n₁ + n₂ = total}` of field degrees.
fn ordered_pairs(fields: &FieldSpace, total: i64) -> Vec<(i64, i64)> {
    fields.degrees().filter_map(|n1| {
        let n2 = total - n1;
        (n1 <= n2 && fields.has_degree(n2)).then_some((n1, n2))
    }).collect()
}

fn hodge_product(m: usize, p: usize) -> Bilinear {
    let full = (1u8 << m) - 1;
    let terms = masks_of_degree(m, p)
        .into_iter()
        .map(|k| BiTerm { out: full, a_mask: k, a_off: [0; 3], b_mask: k, b_off: [0; 3], coeff: Scalar::from_int(hodge_sign(k)) })
        .collect();
    Bilinear::new(p, p, m, terms)
}

/// The model's top-degree components, keyed by `(n₁, n₂)` with `n₁ > n₂`.
fn top_components(model: &Model) -> Result<Vec<((i64, i64), Bilinear)>, ModelError> {
    let m = model.lattice().dim();
    match model.spec().kind {
        ModelKind::KleinGordon { .. } => Ok(vec![((1, 0), hodge_product(m, 0))]),
        ModelKind::MaxwellP { .. } => Ok(vec![((1, 0), hodge_product(m, 1)), ((2, -1), hodge_product(m, 0))]),
        ModelKind::ChernSimons => Err(ModelError::PairingUnsupported(
            "chern_simons: cochain-level wedge products are not graded commutative".into(),
        )),
        ModelKind::DeRham => Err(ModelError::PairingUnsupported("de_rham".into())),
    }
}

pub fn build_pairing(model: &Model) -> Result<DifferentialPairing, ModelError> {
    let m = model.lattice().dim();
    let fields = model.fields().clone();
    let mut pairing = DifferentialPairing { m, fields: fields.clone(), components: BTreeMap::new() };
    for ((n1, n2), b) in top_components(model)? {
        pairing.insert(n1, n2, b);
    }
    let lo = 2 * fields.degrees().start;
    for total in (lo..=0).rev() {
        let Some(level) = pairing.out_degree(0, total) else { continue };
        for (n1, n2) in ordered_pairs(&fields, total) {
            let Some(lhs) = pairing.compatibility_lhs(model, n1, n2) else { continue };
            let target = lhs.scale(&Scalar::from_int(sign::parity(m as i64 - 1)));
            if target.is_zero() {
                continue;
            }
            let prim = if level + 1 == m {
                flux_primitive(&target, m)
            } else if level == 0 {
                time_primitive(&target)
            } else {
                return Err(ModelError::Synthesis(format!("no primitive rule for form degree {level}")));
            }
            .map_err(|r| ModelError::Synthesis(format!("({n1},{n2}) is not exact: {r:?}")))?;
            if prim.exterior_d(m) != target {
                return Err(ModelError::Synthesis(format!("({n1},{n2}) has no primitive with these lower components")));
            }
            let prim = if n1 == n2 {
                prim.add(&prim.swap().scale(&antisym_factor(n1, n2))).scale(&Scalar::new(1, 2))
            } else {
                prim
            };
            pairing.insert(n1, n2, prim);
        }
    }
    Ok(pairing)
}

/// Random integer sections with time support in `[lo, hi]`.
fn random_section(fields: &FieldSpace, n: i64, rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); fields.dim(n)];
    for j in fields.time_window(n, lo, hi) {
        if rng.gen_bool(0.4) {
            v[j] = Scalar::from_int(rng.gen_range(-4..=4));
        }
    }
    v
}

/// Symbolic antisymmetry and compatibility, plus evaluation on random compact pairs.
pub fn validate_pairing(model: &Model, pairing: &DifferentialPairing, samples: usize, seed: u64) -> Vec<CheckResult> {
    let m = pairing.m;
    let f = &pairing.fields;
    let t0 = Instant::now();
    let mut antisym = Ok(());
    for (&(n1, n2), b) in &pairing.components {
        let other = pairing.component(n2, n1).map(|o| o.swap().scale(&antisym_factor(n1, n2)));
        if other.as_ref() != Some(b) && antisym.is_ok() {
            antisym = Err(json!({ "component": [n1, n2] }));
        }
    }
    let mut compat = Ok(());
    let pm = Scalar::from_int(sign::parity(m as i64 - 1));
    for n1 in f.degrees() {
        for n2 in f.degrees() {
            let Some(lhs) = pairing.compatibility_lhs(model, n1, n2) else { continue };
            let rhs = pairing.component(n1, n2).map(|b| b.exterior_d(m).scale(&pm));
            let ok = match &rhs {
                Some(r) => *r == lhs,
                None => lhs.is_zero(),
            };
            if !ok && compat.is_ok() {
                compat = Err(json!({ "component": [n1, n2] }));
            }
        }
    }
    let symbolic = [
        CheckResult::from_outcome("pairing_antisymmetric", "(a, b) = -(-1)^{|a||b|} (b, a)", antisym).timed(t0),
        CheckResult::from_outcome("pairing_compatible", "(Qa, b) + (-1)^{|a|} (a, Qb) = (-1)^{m-1} d(a, b)", compat).timed(t0),
    ];
    let t1 = Instant::now();
    let lat = f.lattice();
    let (lo, hi) = lat.interior();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = model.q_map();
    let mut sampled = Ok(());
    'outer: for k in 0..samples {
        for n1 in f.degrees() {
            for n2 in f.degrees() {
                let Some(out) = pairing.out_degree(n1, n2 + 1) else { continue };
                let a = random_section(f, n1, &mut rng, lo, hi);
                let b = random_section(f, n2, &mut rng, lo, hi);
                let ia = lat.cell_index(out).len();
                let zero = || vec![Scalar::zero(); ia];
                let qa = q.block(n1).mul_vec(&a);
                let qb = q.block(n2).mul_vec(&b);
                let l1 = f.has_degree(n1 + 1).then(|| pairing.evaluate(n1 + 1, &qa, n2, &b)).flatten().unwrap_or_else(zero);
                let l2 = f.has_degree(n2 + 1).then(|| pairing.evaluate(n1, &a, n2 + 1, &qb)).flatten().unwrap_or_else(zero);
                let s = Scalar::from_int(sign::parity(n1));
                let lhs: Vec<Scalar> = l1.iter().zip(&l2).map(|(x, y)| x + &(y * &s)).collect();
                let rhs = match pairing.evaluate(n1, &a, n2, &b) {
                    Some(v) if out >= 1 => exterior_d(m, out - 1).slab_matrix(lat).mul_vec(&v).into_iter().map(|x| x * &pm).collect(),
                    _ => zero(),
                };
                if let Some(i) = (0..ia).find(|&i| lhs[i] != rhs[i]) {
                    let ix = lat.cell_index(out);
                    sampled = Err(json!({
                        "sample": k, "component": [n1, n2],
                        "cell": ghc_lattice::cell_label(lat, &ix.cell_at(lat, i)),
                        "left": lhs[i].to_string(), "right": rhs[i].to_string(),
                    }));
                    break 'outer;
                }
            }
        }
    }
    let mut out = symbolic.to_vec();
    out.push(
        CheckResult::from_outcome("pairing_compatible_sampled", "(Qa, b) + (-1)^{|a|} (a, Qb) = (-1)^{m-1} d(a, b)", sampled)
            .with_note(format!("{samples} random compact pairs per degree pair"))
            .timed(t1),
    );
    out
}
