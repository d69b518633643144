use ghc_homalg::{all_passed, Scalar};
use ghc_lattice::CausalLattice;
use ghc_models::{Model, ModelKind, ModelSpec};
use ghc_rma::*;

fn model(kind: ModelKind, lat: CausalLattice) -> Model {
    Model::build(&ModelSpec::new(kind, lat).unwrap()).unwrap()
}

#[test]
fn cone_subcomplexes_are_acyclic() {
    let l2 = CausalLattice::new(2, 24, vec![12], 2).unwrap();
    let l3 = CausalLattice::new(3, 12, vec![8, 8], 2).unwrap();
    let cases = [
        (model(ModelKind::KleinGordon { mass: Scalar::zero() }, l2.clone()), None),
        (model(ModelKind::KleinGordon { mass: Scalar::one() }, l2.clone()), None),
        (model(ModelKind::DeRham, l2.clone()), None),
        (model(ModelKind::MaxwellP { p: 1 }, l2), None),
        (model(ModelKind::ChernSimons, l3), Some(3)),
    ];
    for (m, samples) in cases {
        let h = GreenHomotopy::new(&m).unwrap();
        let checks = verify_acyclicity(&h, 10, samples, 4, 7);
        assert!(all_passed(&checks), "{:#?}", checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
    }
}
