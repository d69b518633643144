//! `Λ` on nested compact windows, as a strictly natural cochain into the
//! constant diagram on the slab window, descends along the comparison map.

use ghc_dgcat::{FiniteDiagram, HocolimComplex, MappingCochain, MappingSpace, Poset};
use ghc_homalg::{is_cochain_map, shift, GradedMap, LadderComplex, Scalar, SparseMatrix};
use ghc_lattice::CausalLattice;
use ghc_models::{Model, ModelKind, ModelSpec};
use ghc_rma::{windowed, Certificate, CertificateGeometry, GreenHomotopy, Window};
use std::collections::BTreeMap;

fn band(h: &GreenHomotopy, lo: i64, hi: i64) -> Window {
    let lat = h.fields().lattice();
    windowed(
        h.fields(),
        h.model().q_local(),
        |_, c| {
            let (x, y) = lat.time_span(c);
            x >= lo && y <= hi
        },
        |_| true,
    )
    .unwrap()
}

/// `C_small[1] → C_big[1]` by window cell positions.
fn inclusion(small: &Window, big: &Window, vs: &LadderComplex, vb: &LadderComplex) -> GradedMap {
    let blocks = vs
        .space()
        .degrees()
        .map(|a| {
            let pos = big.positions(a + 1);
            let cells = small.cells(a + 1);
            let entries: Vec<_> = cells.iter().enumerate().map(|(k, i)| (pos[i], k, Scalar::one())).collect();
            (a, SparseMatrix::from_triplets(vb.dim(a), vs.dim(a), entries))
        })
        .collect();
    GradedMap::new(vs.space(), vb.space(), 0, blocks).unwrap()
}

#[test]
fn hocolim_of_lambda_matches_the_colimit_lambda() {
    let lat = CausalLattice::new(2, 20, vec![4], 2).unwrap();
    let spec = ModelSpec::new(ModelKind::KleinGordon { mass: Scalar::one() }, lat).unwrap();
    let model = Model::build(&spec).unwrap();
    let h = GreenHomotopy::new(&model).unwrap();
    let cert = Certificate::build(&h, CertificateGeometry::new(8, 10)).unwrap();
    let top = cert.compact().clone();
    let windows = [band(&h, 8, 10), band(&h, 7, 11), top.clone()];
    let values: Vec<LadderComplex> = windows.iter().map(|w| shift(&w.complex, 1)).collect();
    assert!(values[2].space().same_shape(cert.shifted_compact().space()));
    assert!(values[0].space().total_dim() < values[1].space().total_dim());

    let arrows = BTreeMap::from([
        ((0, 1), inclusion(&windows[0], &windows[1], &values[0], &values[1])),
        ((1, 2), inclusion(&windows[1], &windows[2], &values[1], &values[2])),
    ]);
    let v = FiniteDiagram::new(Poset::linear(3), values.clone(), arrows).unwrap();
    let slab = &cert.slab().complex;
    let ds = FiniteDiagram::constant(Poset::linear(3), slab);
    let lambda = cert.lambda_map();
    assert!(is_cochain_map(lambda, &values[2], slab).unwrap());

    let family = (0..3).map(|c| lambda.compose(&v.arrow(c, 2)).unwrap()).collect();
    let eta = MappingCochain::from_family(0, family).unwrap();
    let s = MappingSpace::new(&v, &ds).unwrap();
    assert!(s.differential(&eta).unwrap().is_zero(), "Λ is a strictly natural cochain map");

    let hv = HocolimComplex::new(&v).unwrap();
    let hs = HocolimComplex::new(&ds).unwrap();
    let descended = lambda.compose(&hv.to_colim(&v).unwrap()).unwrap();
    let via_hocolim = hs.collapse(slab).compose(&hv.on_morphism(&eta, &hs)).unwrap();
    assert!(!descended.is_zero());
    assert!(via_hocolim.equals(&descended));
    assert!(hv.adjunct(&eta, slab).equals(&descended));
    assert!(is_cochain_map(&descended, hv.complex(), slab).unwrap());
}
