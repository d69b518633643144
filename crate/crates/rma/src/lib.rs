//! Green's homotopies, the retarded-minus-advanced map `Λ` and an explicit
//! quasi-inverse certificate on finite windowed complexes.

pub mod acyclic;
pub mod certificate;
pub mod homotopy;
pub mod windows;

pub use acyclic::{check_cone_acyclic, cone_window, random_compact, verify_acyclicity};
pub use certificate::{verify_certificate, Certificate, CertificateError, CertificateGeometry};
pub use homotopy::{
    check_contracting, check_homotopy_support, check_tilde_coincides, check_two_homotopy, perturbed_witness,
    time_contraction, verify_homotopies, GreenHomotopy, HomotopyOptions,
};
pub use windows::{windowed, Window};

#[cfg(test)]
mod tests {
    use super::*;
    use ghc_green::{Direction, Sampling};
    use ghc_homalg::{all_passed, Scalar};
    use ghc_lattice::CausalLattice;
    use ghc_models::{Model, ModelKind, ModelSpec};

    fn model(kind: ModelKind) -> Model {
        let lat = CausalLattice::new(2, 12, vec![5], 2).unwrap();
        Model::build(&ModelSpec::new(kind, lat).unwrap()).unwrap()
    }

    #[test]
    fn homotopies_contract_for_every_2d_model() {
        for kind in [ModelKind::KleinGordon { mass: Scalar::new(1, 2) }, ModelKind::MaxwellP { p: 1 }, ModelKind::DeRham] {
            let h = GreenHomotopy::new(&model(kind)).unwrap();
            let opts = HomotopyOptions::default();
            let checks = verify_homotopies(&h, &opts);
            assert!(all_passed(&checks), "{checks:#?}");
            for dir in [Direction::Retarded, Direction::Advanced] {
                assert!(check_tilde_coincides(&h, dir, &opts).passed);
            }
        }
    }

    #[test]
    fn perturbed_witness_keeps_the_two_homotopy_identity() {
        let m = model(ModelKind::DeRham);
        let w = perturbed_witness(&m, &Scalar::new(1, 2));
        let h = GreenHomotopy::with_witness(&m, w).unwrap();
        let opts = HomotopyOptions { sampling: Sampling::Random { count: 6, seed: 5 }, buffer: 4 };
        let checks = verify_homotopies(&h, &opts);
        assert!(all_passed(&checks), "{checks:#?}");
        assert!(!check_tilde_coincides(&h, Direction::Retarded, &opts).passed);
    }

    #[test]
    fn klein_gordon_certificate_on_a_small_slab() {
        let lat = CausalLattice::new(2, 20, vec![5], 2).unwrap();
        let m = Model::build(&ModelSpec::new(ModelKind::KleinGordon { mass: Scalar::one() }, lat).unwrap()).unwrap();
        let h = GreenHomotopy::new(&m).unwrap();
        let cert = Certificate::build(&h, CertificateGeometry::new(8, 11)).unwrap();
        let checks = verify_certificate(&cert, None);
        assert!(all_passed(&checks), "{checks:#?}");
    }
}
