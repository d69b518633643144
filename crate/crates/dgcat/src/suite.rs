//! The randomized dgcat identities as named checks, one per identity, each
//! aggregated over `cases` seeded instances.

use crate::diagram::FiniteDiagram;
use crate::hocolim::HocolimComplex;
use crate::mapping::MappingSpace;
use crate::random::{random_cochain, random_complex, random_diagram, random_graded_map, random_poset, DiagramShape};
use crate::Poset;
use ghc_homalg::{cohomology_dims, internal_hom_differential, CheckResult, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::time::Instant;

/// Largest total dimension of any diagram drawn by the suite.
pub const MAX_TOTAL_DIM: usize = 40;

fn shape() -> DiagramShape {
    DiagramShape { lo: -1, span: 3, pieces: 4, acyclic: false }
}

fn poset(r: &mut ChaCha8Rng) -> Poset {
    let n = r.gen_range(2..=4);
    random_poset(r, n, 0.7, false)
}

fn diagrams(r: &mut ChaCha8Rng, count: usize) -> Vec<FiniteDiagram> {
    let p = poset(r);
    (0..count).map(|_| random_diagram(r, p.clone(), &shape())).collect()
}

/// Runs `case` for every seed; the first failure becomes the witness.
fn over_cases(
    name: &str,
    anchor: &str,
    seed: u64,
    cases: usize,
    case: impl Fn(&mut ChaCha8Rng) -> Result<bool, Value>,
) -> CheckResult {
    let t0 = Instant::now();
    let mut nonzero = 0;
    let mut outcome = Ok(());
    for i in 0..cases {
        let s = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
        let mut r = ChaCha8Rng::seed_from_u64(s);
        match case(&mut r) {
            Ok(nz) => nonzero += usize::from(nz),
            Err(mut w) => {
                w["case_seed"] = json!(s);
                outcome = Err(w);
                break;
            }
        }
    }
    CheckResult::from_outcome(name, anchor, outcome).with_note(format!("{cases} cases, {nonzero} with nonzero data")).timed(t0)
}

fn fail(what: &str) -> Value {
    json!({ "reason": what })
}

pub fn verify_dgcat(seed: u64, cases: usize) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(over_cases("dg_delta_squared", "delta o delta = 0 on map(V, W)", seed, cases, |r| {
        let d = diagrams(r, 2);
        let s = MappingSpace::new(&d[0], &d[1]).map_err(|e| fail(&e.to_string()))?;
        let n = r.gen_range(-1..=1);
        let eta = random_cochain(r, &s, n, 0.6);
        let de = s.differential(&eta).map_err(|e| fail(&e.to_string()))?;
        let dde = s.differential(&de).map_err(|e| fail(&e.to_string()))?;
        if dde.is_zero() { Ok(!de.is_zero()) } else { Err(json!({ "degree": n, "reason": "delta^2 != 0" })) }
    }));
    out.push(over_cases("dg_hocolim_d_squared", "d = -d_h + d_v squares to zero", seed, cases, |r| {
        let d = diagrams(r, 1);
        let h = HocolimComplex::new(&d[0]).map_err(|e| fail(&e.to_string()))?;
        let q = h.complex().q();
        Ok(!q.is_zero() && q.compose(q).is_ok_and(|x| x.is_zero()))
    }));
    out.push(over_cases("dg_compose_associative", "(h o g) o f = h o (g o f)", seed, cases, |r| {
        let d = diagrams(r, 4);
        let sp: Vec<MappingSpace> = (0..3).map(|i| MappingSpace::new(&d[i], &d[i + 1]).unwrap()).collect();
        let c: Vec<_> = sp.iter().map(|s| { let n = r.gen_range(-1..=1); random_cochain(r, s, n, 0.6) }).collect();
        let left = c[2].compose(&c[1]).and_then(|x| x.compose(&c[0])).map_err(|e| fail(&e.to_string()))?;
        let right = c[1].compose(&c[0]).and_then(|x| c[2].compose(&x)).map_err(|e| fail(&e.to_string()))?;
        if left.equals(&right) { Ok(!left.is_zero()) } else { Err(fail("parenthesizations differ")) }
    }));
    out.push(over_cases("dg_compose_leibniz", "delta(g o f) = delta g o f + (-1)^|g| g o delta f", seed, cases, |r| {
        let d = diagrams(r, 3);
        let (sab, sbc, sac) = (MappingSpace::new(&d[0], &d[1]).unwrap(), MappingSpace::new(&d[1], &d[2]).unwrap(), MappingSpace::new(&d[0], &d[2]).unwrap());
        let (m1, m2) = (r.gen_range(-1..=1), r.gen_range(-1..=1));
        let f = random_cochain(r, &sab, m1, 0.6);
        let g = random_cochain(r, &sbc, m2, 0.6);
        let e = |x: crate::DgError| fail(&x.to_string());
        let left = sac.differential(&g.compose(&f).map_err(e)?).map_err(e)?;
        let a = sbc.differential(&g).map_err(e)?.compose(&f).map_err(e)?;
        let b = g.compose(&sab.differential(&f).map_err(e)?).map_err(e)?.scale(&Scalar::sign(m2));
        if left.equals(&a.add(&b).map_err(e)?) { Ok(!left.is_zero()) } else { Err(json!({ "degrees": [m1, m2], "reason": "Leibniz fails" })) }
    }));
    out.push(over_cases("dg_adjunction_roundtrip", "map(V, Delta X) <-> [hocolim V, X] both ways", seed, cases, |r| {
        let v = diagrams(r, 1).remove(0);
        let x = random_complex(r, &shape());
        let dx = FiniteDiagram::constant(v.poset().clone(), &x);
        let h = HocolimComplex::new(&v).map_err(|e| fail(&e.to_string()))?;
        let s = MappingSpace::new(&v, &dx).unwrap();
        let m = r.gen_range(-1..=1);
        let eta = random_cochain(r, &s, m, 0.6);
        let f = random_graded_map(r, h.space(), x.space(), m, 0.5);
        let back = h.adjunct_inverse(&h.adjunct(&eta, &x)).map_err(|e| fail(&e.to_string()))?;
        let forth = h.adjunct(&h.adjunct_inverse(&f).map_err(|e| fail(&e.to_string()))?, &x);
        if !back.equals(&eta) {
            return Err(fail("adjunct_inverse o adjunct != id"));
        }
        if !forth.equals(&f) {
            return Err(fail("adjunct o adjunct_inverse != id"));
        }
        let left = h.adjunct(&s.differential(&eta).unwrap(), &x);
        let right = internal_hom_differential(&h.adjunct(&eta, &x), h.complex(), &x).map_err(|e| fail(&e.to_string()))?;
        if left.equals(&right) { Ok(!eta.is_zero()) } else { Err(fail("adjunct is not a cochain map")) }
    }));
    out.push(over_cases("dg_hocolim_functor", "hocolim(g o f) = hocolim g o hocolim f, commutes with d", seed, cases, |r| {
        let d = diagrams(r, 3);
        let (sab, sbc) = (MappingSpace::new(&d[0], &d[1]).unwrap(), MappingSpace::new(&d[1], &d[2]).unwrap());
        let (m1, m2) = (r.gen_range(-1..=1), r.gen_range(-1..=1));
        let f = random_cochain(r, &sab, m1, 0.6);
        let g = random_cochain(r, &sbc, m2, 0.6);
        let h: Vec<HocolimComplex> = d.iter().map(|x| HocolimComplex::new(x).unwrap()).collect();
        let composite = h[0].on_morphism(&g.compose(&f).map_err(|e| fail(&e.to_string()))?, &h[2]);
        let stepwise = h[1].on_morphism(&g, &h[2]).compose(&h[0].on_morphism(&f, &h[1])).map_err(|e| fail(&e.to_string()))?;
        if !composite.equals(&stepwise) {
            return Err(fail("hocolim is not functorial"));
        }
        let hf = h[0].on_morphism(&f, &h[1]);
        let d_hf = internal_hom_differential(&hf, h[0].complex(), h[1].complex()).map_err(|e| fail(&e.to_string()))?;
        if h[0].on_morphism(&sab.differential(&f).unwrap(), &h[1]).equals(&d_hf) { Ok(!composite.is_zero()) } else { Err(fail("hocolim does not commute with differentials")) }
    }));
    out.push(over_cases("dg_map_acyclic", "map(V, W) acyclic for acyclic W", seed, cases, |r| {
        let p = poset(r);
        let v = random_diagram(r, p.clone(), &shape());
        let w = random_diagram(r, p, &DiagramShape { acyclic: true, pieces: 3, ..shape() });
        let cx = MappingSpace::new(&v, &w).and_then(|s| s.complex()).map_err(|e| fail(&e.to_string()))?;
        let dims = cohomology_dims(&cx);
        if dims.values().all(|&h| h == 0) { Ok(cx.space().total_dim() > 0) } else { Err(json!({ "cohomology": dims })) }
    }));
    out.push(over_cases("dg_colim_comparison", "hocolim -> colim quasi-iso over posets with a top", seed, cases, |r| {
        let n = r.gen_range(1..=4);
        let p = random_poset(r, n, 0.5, true);
        let v = random_diagram(r, p, &shape());
        let top = v.value(v.poset().top().unwrap());
        let h = HocolimComplex::new(&v).map_err(|e| fail(&e.to_string()))?;
        let f = h.to_colim(&v).map_err(|e| fail(&e.to_string()))?;
        let c = ghc_homalg::cone(&f, h.complex(), top).map_err(|e| fail(&e.to_string()))?;
        if ghc_homalg::is_acyclic(&c) { Ok(top.space().total_dim() > 0) } else { Err(fail("cone of the comparison is not acyclic")) }
    }));
    out
}
