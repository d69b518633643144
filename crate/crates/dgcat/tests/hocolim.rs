mod common;

use common::{pair, rng, small, CASES};
use ghc_dgcat::random::{random_cochain, random_complex, random_diagram, random_graded_map, random_poset, unimodular};
use ghc_dgcat::{FiniteDiagram, HocolimComplex, MappingCochain, MappingSpace, Poset};
use ghc_homalg::{cohomology_dims, cone, identity_of, internal_hom_differential, is_acyclic, is_cochain_map, GradedMap, LadderComplex};
use rand::Rng;
use std::collections::BTreeMap;

fn betti(v: &LadderComplex) -> BTreeMap<i64, usize> {
    cohomology_dims(v).into_iter().filter(|&(_, h)| h > 0).collect()
}

fn comparison_is_quasi_iso(v: &FiniteDiagram) -> bool {
    let h = HocolimComplex::new(v).unwrap();
    let f = h.to_colim(v).unwrap();
    let top = v.value(v.poset().top().unwrap());
    is_cochain_map(&f, h.complex(), top).unwrap() && is_acyclic(&cone(&f, h.complex(), top).unwrap())
}

#[test]
fn total_differential_squares_to_zero() {
    for seed in 0..CASES {
        let (_, v, _) = pair(seed);
        let h = HocolimComplex::new(&v).unwrap();
        let q = h.complex().q();
        assert!(q.compose(q).unwrap().is_zero());
        let expected: usize = h.chains().iter().map(|c| v.value(c[0]).space().total_dim()).sum();
        assert_eq!(h.space().total_dim(), expected);
    }
}

#[test]
fn one_object_hocolim_is_the_value() {
    for seed in 0..CASES {
        let mut r = rng(100 + seed);
        let x = random_complex(&mut r, &small());
        let v = FiniteDiagram::constant(Poset::discrete(1), &x);
        let h = HocolimComplex::new(&v).unwrap();
        let f = h.to_colim(&v).unwrap();
        assert!(f.equals(&identity_of(&x)));
        assert_eq!(h.complex().q().block(0), x.differential(0));
    }
}

#[test]
fn isomorphism_arrow_gives_a_quasi_iso_comparison() {
    for seed in 0..CASES {
        let mut r = rng(200 + seed);
        let x = random_complex(&mut r, &small());
        let mut blocks = BTreeMap::new();
        let mut inv = BTreeMap::new();
        for n in x.space().degrees() {
            let (p, pi) = unimodular(&mut r, x.dim(n));
            blocks.insert(n, p);
            inv.insert(n, pi);
        }
        let p = GradedMap::new(x.space(), x.space(), 0, blocks).unwrap();
        let pi = GradedMap::new(x.space(), x.space(), 0, inv).unwrap();
        let y = LadderComplex::new(x.space().clone(), p.compose(x.q()).unwrap().compose(&pi).unwrap()).unwrap();
        let v = FiniteDiagram::new(Poset::linear(2), vec![x.clone(), y.clone()], BTreeMap::from([((0, 1), p)])).unwrap();
        assert!(comparison_is_quasi_iso(&v));
        let h = HocolimComplex::new(&v).unwrap();
        assert_eq!(betti(h.complex()), betti(&y));
    }
}

#[test]
fn comparison_is_a_quasi_iso_over_posets_with_a_top() {
    for seed in 0..CASES {
        let mut r = rng(300 + seed);
        let n = r.gen_range(1..=4);
        let p = random_poset(&mut r, n, 0.5, true);
        let v = random_diagram(&mut r, p, &small());
        assert!(comparison_is_quasi_iso(&v), "seed {seed}");
    }
}

/// Without a top the comparison is undefined; the hocolim of two
/// disjoint objects is their direct sum.
#[test]
fn discrete_poset_hocolim_is_the_sum() {
    let mut r = rng(400);
    let v = random_diagram(&mut r, Poset::discrete(2), &small());
    let h = HocolimComplex::new(&v).unwrap();
    assert!(h.to_colim(&v).is_err());
    let sum: BTreeMap<i64, usize> = h
        .space()
        .degrees()
        .map(|n| (n, cohomology_dims(v.value(0)).get(&n).unwrap_or(&0) + cohomology_dims(v.value(1)).get(&n).unwrap_or(&0)))
        .filter(|&(_, d)| d > 0)
        .collect();
    assert_eq!(betti(h.complex()), sum);
}

/// Random `V` with a target complex `X` and `map(V, ΔX)`.
fn adjunction_case(seed: u64) -> (rand_chacha::ChaCha8Rng, FiniteDiagram, LadderComplex, FiniteDiagram) {
    let (mut r, v, _) = pair(seed);
    let x = random_complex(&mut r, &small());
    let dx = FiniteDiagram::constant(v.poset().clone(), &x);
    (r, v, x, dx)
}

#[test]
fn adjunction_round_trips() {
    for seed in 0..CASES {
        let (mut r, v, x, dx) = adjunction_case(500 + seed);
        let h = HocolimComplex::new(&v).unwrap();
        let s = MappingSpace::new(&v, &dx).unwrap();
        let m = r.gen_range(-1..=1);
        let eta = random_cochain(&mut r, &s, m, 0.6);
        assert!(h.adjunct_inverse(&h.adjunct(&eta, &x)).unwrap().equals(&eta));
        let f = random_graded_map(&mut r, h.space(), x.space(), m, 0.5);
        assert!(h.adjunct(&h.adjunct_inverse(&f).unwrap(), &x).equals(&f));
    }
}

#[test]
fn adjunction_is_a_cochain_map_in_both_directions() {
    for seed in 0..CASES {
        let (mut r, v, x, dx) = adjunction_case(600 + seed);
        let h = HocolimComplex::new(&v).unwrap();
        let s = MappingSpace::new(&v, &dx).unwrap();
        let m = r.gen_range(-1..=1);
        let eta = random_cochain(&mut r, &s, m, 0.6);
        let left = h.adjunct(&s.differential(&eta).unwrap(), &x);
        let right = internal_hom_differential(&h.adjunct(&eta, &x), h.complex(), &x).unwrap();
        assert!(left.equals(&right), "seed {seed}");
        let f = random_graded_map(&mut r, h.space(), x.space(), m, 0.5);
        let df = internal_hom_differential(&f, h.complex(), &x).unwrap();
        assert!(h.adjunct_inverse(&df).unwrap().equals(&s.differential(&h.adjunct_inverse(&f).unwrap()).unwrap()));
    }
}

#[test]
fn exact_cochains_have_exact_adjuncts() {
    for seed in 0..CASES {
        let (mut r, v, x, dx) = adjunction_case(700 + seed);
        let h = HocolimComplex::new(&v).unwrap();
        let s = MappingSpace::new(&v, &dx).unwrap();
        let beta = random_cochain(&mut r, &s, -1, 0.6);
        let eta = s.differential(&beta).unwrap();
        let primitive = h.adjunct(&beta, &x);
        assert!(h.adjunct(&eta, &x).equals(&internal_hom_differential(&primitive, h.complex(), &x).unwrap()));
    }
}

#[test]
fn adjunct_of_a_constant_map_factors_through_the_collapse() {
    for seed in 0..CASES {
        let mut r = rng(800 + seed);
        let p = common::poset(&mut r);
        let a = random_complex(&mut r, &small());
        let x = random_complex(&mut r, &small());
        let f = random_graded_map(&mut r, a.space(), x.space(), 0, 0.5);
        let (da, dx) = (FiniteDiagram::constant(p.clone(), &a), FiniteDiagram::constant(p, &x));
        let delta_f = MappingCochain::from_family(0, vec![f.clone(); da.poset().len()]).unwrap();
        let h = HocolimComplex::new(&da).unwrap();
        assert!(h.adjunct(&delta_f, &x).equals(&f.compose(&h.collapse(&a)).unwrap()));
        let _ = dx;
    }
}

#[test]
fn hocolim_of_the_identity_is_the_identity() {
    for seed in 0..CASES {
        let (_, v, _) = pair(900 + seed);
        let h = HocolimComplex::new(&v).unwrap();
        let id = MappingSpace::new(&v, &v).unwrap().identity();
        assert!(h.on_morphism(&id, &h).equals(&identity_of(h.complex())));
    }
}

#[test]
fn hocolim_is_a_dg_functor() {
    let mut nonzero = 0;
    for seed in 0..CASES {
        let mut r = rng(1000 + seed);
        let p = common::poset(&mut r);
        let [a, b, c] = [(); 3].map(|_| random_diagram(&mut r, p.clone(), &small()));
        let (sab, sbc) = (MappingSpace::new(&a, &b).unwrap(), MappingSpace::new(&b, &c).unwrap());
        let (m1, m2) = (r.gen_range(-1..=1), r.gen_range(-1..=1));
        let f = random_cochain(&mut r, &sab, m1, 0.6);
        let g = random_cochain(&mut r, &sbc, m2, 0.6);
        let [ha, hb, hc] = [&a, &b, &c].map(|d| HocolimComplex::new(d).unwrap());
        let composite = ha.on_morphism(&g.compose(&f).unwrap(), &hc);
        let stepwise = hb.on_morphism(&g, &hc).compose(&ha.on_morphism(&f, &hb)).unwrap();
        assert!(composite.equals(&stepwise), "seed {seed}");
        nonzero += usize::from(!composite.is_zero());
        let hf = ha.on_morphism(&f, &hb);
        let d = ha.on_morphism(&sab.differential(&f).unwrap(), &hb);
        assert!(d.equals(&internal_hom_differential(&hf, ha.complex(), hb.complex()).unwrap()), "seed {seed}");
    }
    assert!(nonzero as u64 > CASES / 2);
}

/// The adjunct is `hocolim(η)` followed by the collapse of `hocolim ΔX`.
#[test]
fn adjunct_is_hocolim_then_collapse() {
    for seed in 0..CASES {
        let (mut r, v, x, dx) = adjunction_case(1100 + seed);
        let (h, hx) = (HocolimComplex::new(&v).unwrap(), HocolimComplex::new(&dx).unwrap());
        let s = MappingSpace::new(&v, &dx).unwrap();
        let m = r.gen_range(-1..=1);
        let eta = random_cochain(&mut r, &s, m, 0.6);
        let via = hx.collapse(&x).compose(&h.on_morphism(&eta, &hx)).unwrap();
        assert!(via.equals(&h.adjunct(&eta, &x)), "seed {seed}");
    }
}
