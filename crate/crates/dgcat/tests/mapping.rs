mod common;

use common::{pair, rng, small, CASES};
use ghc_dgcat::poset::is_degenerate;
use ghc_dgcat::random::{random_cochain, random_complex, random_diagram, random_graded_map};
use ghc_dgcat::{FiniteDiagram, MappingCochain, MappingSpace, Poset};
use ghc_homalg::{cohomology_dims, internal_hom_differential, is_acyclic, Scalar};
use rand::Rng;

fn some_cochain(r: &mut rand_chacha::ChaCha8Rng, s: &MappingSpace) -> MappingCochain {
    let n = r.gen_range(-1..=1);
    random_cochain(r, s, n, 0.6)
}

#[test]
fn identity_transformation_is_a_cocycle() {
    for seed in 0..CASES {
        let (_, v, _) = pair(seed);
        let s = MappingSpace::new(&v, &v).unwrap();
        assert!(s.differential(&s.identity()).unwrap().is_zero());
    }
}

#[test]
fn delta_squares_to_zero() {
    let mut nonzero = 0;
    for seed in 0..CASES {
        let (mut r, v, w) = pair(100 + seed);
        let s = MappingSpace::new(&v, &w).unwrap();
        let n = r.gen_range(-1..=2);
        let eta = random_cochain(&mut r, &s, n, 0.6);
        let d = s.differential(&eta).unwrap();
        assert_eq!(d.degree(), n + 1);
        assert!(s.differential(&d).unwrap().is_zero(), "seed {seed}");
        nonzero += usize::from(!d.is_zero());
    }
    assert!(nonzero as u64 > CASES / 2, "only {nonzero} nonzero differentials");
}

#[test]
fn delta_squares_to_zero_on_a_three_chain() {
    for seed in 0..CASES {
        let mut r = rng(200 + seed);
        let v = random_diagram(&mut r, Poset::linear(3), &small());
        let w = random_diagram(&mut r, Poset::linear(3), &small());
        let s = MappingSpace::new(&v, &w).unwrap();
        let eta = random_cochain(&mut r, &s, 0, 0.5);
        assert!(!eta.is_zero());
        assert!(s.differential(&s.differential(&eta).unwrap()).unwrap().is_zero());
    }
}

#[test]
fn delta_on_a_family_is_the_naturality_defect() {
    for seed in 0..CASES {
        let (mut r, v, w) = pair(300 + seed);
        let s = MappingSpace::new(&v, &w).unwrap();
        let family = (0..v.poset().len())
            .map(|c| random_graded_map(&mut r, v.value(c).space(), w.value(c).space(), 0, 0.5))
            .collect();
        let eta = MappingCochain::from_family(0, family).unwrap();
        let d = s.differential(&eta).unwrap();
        for (a, b) in v.poset().relations() {
            let got = d.component(&[a, b]).cloned().unwrap_or_else(|| s.zero_component(&[a, b], 0));
            assert!(got.equals(&s.naturality_defect(&eta, a, b).unwrap()), "seed {seed}, {a} < {b}");
        }
        for c in 0..v.poset().len() {
            let want = internal_hom_differential(eta.component(&[c]).unwrap_or(&s.zero_component(&[c], 0)), v.value(c), w.value(c)).unwrap();
            let got = d.component(&[c]).cloned().unwrap_or_else(|| s.zero_component(&[c], 1));
            assert!(got.equals(&want));
        }
        assert!(s.chains().iter().filter(|c| c.len() > 2).all(|c| d.component(c).is_none()));
    }
}

/// For a strictly natural family the mapping differential is the enriched-hom one.
#[test]
fn strictly_natural_families_see_only_the_hom_differential() {
    for seed in 0..CASES {
        let mut r = rng(400 + seed);
        let p = common::poset(&mut r);
        let (x, y) = (random_complex(&mut r, &small()), random_complex(&mut r, &small()));
        let (v, w) = (FiniteDiagram::constant(p.clone(), &x), FiniteDiagram::constant(p, &y));
        let s = MappingSpace::new(&v, &w).unwrap();
        let m = r.gen_range(-1..=1);
        let f = random_graded_map(&mut r, x.space(), y.space(), m, 0.5);
        let eta = MappingCochain::from_family(m, vec![f.clone(); v.poset().len()]).unwrap();
        let df = internal_hom_differential(&f, &x, &y).unwrap();
        let want = MappingCochain::from_family(m + 1, vec![df; v.poset().len()]).unwrap();
        assert!(s.differential(&eta).unwrap().equals(&want));
    }
}

/// The full formula on chains with repeats gives zero for normalized input.
#[test]
fn normalized_cochains_stay_normalized() {
    for seed in 0..CASES {
        let (mut r, v, w) = pair(500 + seed);
        let s = MappingSpace::new(&v, &w).unwrap();
        let eta = random_cochain(&mut r, &s, 1, 0.5);
        for q in 1..=3 {
            for c in v.poset().weak_chains(q).into_iter().filter(|c| is_degenerate(c)) {
                assert!(s.differential_at(&eta, &c).unwrap().is_zero(), "seed {seed}, chain {c:?}");
            }
        }
    }
}

#[test]
fn identity_is_a_unit_for_composition() {
    for seed in 0..CASES {
        let (mut r, v, w) = pair(600 + seed);
        let s = MappingSpace::new(&v, &w).unwrap();
        let f = some_cochain(&mut r, &s);
        let idv = MappingSpace::new(&v, &v).unwrap().identity();
        let idw = MappingSpace::new(&w, &w).unwrap().identity();
        assert!(f.compose(&idv).unwrap().equals(&f));
        assert!(idw.compose(&f).unwrap().equals(&f));
    }
}

fn triple(seed: u64) -> (rand_chacha::ChaCha8Rng, [FiniteDiagram; 4]) {
    let mut r = rng(seed);
    let p = common::poset(&mut r);
    let ds = [(); 4].map(|_| random_diagram(&mut r, p.clone(), &small()));
    (r, ds)
}

#[test]
fn composition_is_associative() {
    for seed in 0..CASES {
        let (mut r, [a, b, c, d]) = triple(700 + seed);
        let f = some_cochain(&mut r, &MappingSpace::new(&a, &b).unwrap());
        let g = some_cochain(&mut r, &MappingSpace::new(&b, &c).unwrap());
        let h = some_cochain(&mut r, &MappingSpace::new(&c, &d).unwrap());
        let left = h.compose(&g).unwrap().compose(&f).unwrap();
        let right = h.compose(&g.compose(&f).unwrap()).unwrap();
        assert!(left.equals(&right), "seed {seed}");
    }
}

#[test]
fn delta_is_a_graded_derivation() {
    let mut nonzero = 0;
    for seed in 0..CASES {
        let (mut r, [a, b, c, _]) = triple(800 + seed);
        let (sab, sbc, sac) = (MappingSpace::new(&a, &b).unwrap(), MappingSpace::new(&b, &c).unwrap(), MappingSpace::new(&a, &c).unwrap());
        let f = some_cochain(&mut r, &sab);
        let g = some_cochain(&mut r, &sbc);
        let left = sac.differential(&g.compose(&f).unwrap()).unwrap();
        let dg_f = sbc.differential(&g).unwrap().compose(&f).unwrap();
        let g_df = g.compose(&sab.differential(&f).unwrap()).unwrap().scale(&Scalar::sign(g.degree()));
        assert!(left.equals(&dg_f.add(&g_df).unwrap()), "seed {seed}");
        nonzero += usize::from(!left.is_zero());
    }
    assert!(nonzero as u64 > CASES / 2, "only {nonzero} nonzero cases");
}

#[test]
fn composition_rejects_mismatched_diagrams() {
    let (mut r, v, w) = pair(900);
    let f = random_cochain(&mut r, &MappingSpace::new(&v, &w).unwrap(), 0, 1.0);
    let g = random_cochain(&mut r, &MappingSpace::new(&v, &w).unwrap(), 0, 1.0);
    if !v.value(0).space().same_shape(w.value(0).space()) {
        assert!(g.compose(&f).is_err());
    }
    let q = Poset::linear(2);
    let x = random_diagram(&mut r, q.clone(), &small());
    let y = random_diagram(&mut r, Poset::discrete(2), &small());
    assert!(MappingSpace::new(&x, &y).is_err());
}

/// Into a diagram of acyclic complexes the mapping complex is acyclic.
#[test]
fn mapping_into_acyclic_diagrams_is_acyclic() {
    for seed in 0..CASES {
        let mut r = rng(1000 + seed);
        let p = common::poset(&mut r);
        let v = random_diagram(&mut r, p.clone(), &small());
        let acyclic = ghc_dgcat::random::DiagramShape { acyclic: true, pieces: 3, ..small() };
        let w = random_diagram(&mut r, p, &acyclic);
        assert!(w.values().iter().all(is_acyclic));
        let s = MappingSpace::new(&v, &w).unwrap();
        let cx = s.complex().unwrap();
        assert!(cohomology_dims(&cx).values().all(|&h| h == 0), "seed {seed}");
    }
}

/// The flattened complex computes the same differential and has nonzero
/// cohomology when the target is not acyclic.
#[test]
fn flattened_complex_matches_the_differential() {
    for seed in 0..CASES {
        let (mut r, v, w) = pair(1100 + seed);
        let s = MappingSpace::new(&v, &w).unwrap();
        let cx = s.complex().unwrap();
        let n = r.gen_range(-1..=1);
        let eta = random_cochain(&mut r, &s, n, 0.5);
        let x = s.to_vector(&eta);
        assert!(s.from_vector(n, &x).equals(&eta));
        assert_eq!(cx.differential(n).mul_vec(&x), s.to_vector(&s.differential(&eta).unwrap()));
    }
}

/// One object: `map(V, W)` is `[V, W]`, so the complex is the internal hom.
#[test]
fn one_object_mapping_complex_is_the_internal_hom() {
    let mut r = rng(1200);
    let x = random_complex(&mut r, &small());
    let v = FiniteDiagram::constant(Poset::discrete(1), &x);
    let s = MappingSpace::new(&v, &v).unwrap();
    let cx = s.complex().unwrap();
    let h: usize = cohomology_dims(&cx).values().sum();
    let hx: usize = cohomology_dims(&x).values().sum();
    assert_eq!(h, hx * hx);
}
