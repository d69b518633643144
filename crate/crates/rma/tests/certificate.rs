use ghc_homalg::{all_passed, Scalar};
use ghc_lattice::CausalLattice;
use ghc_models::{Model, ModelKind, ModelSpec};
use ghc_rma::*;

fn model(kind: ModelKind, lat: CausalLattice) -> Model {
    Model::build(&ModelSpec::new(kind, lat).unwrap()).unwrap()
}

#[test]
fn certificate_on_default_lattice() {
    for kind in [ModelKind::KleinGordon { mass: Scalar::one() }, ModelKind::MaxwellP { p: 1 }] {
        let m = model(kind, CausalLattice::new(2, 24, vec![12], 2).unwrap());
        let h = GreenHomotopy::new(&m).unwrap();
        let cert = Certificate::build(&h, CertificateGeometry::new(8, 14)).unwrap();
        let checks = verify_certificate(&cert, None);
        assert!(all_passed(&checks), "{checks:#?}");
    }
}
