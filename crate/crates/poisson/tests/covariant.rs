mod common;

use common::*;
use ghc_green::Direction;
use ghc_homalg::{all_passed, sign, Scalar};
use ghc_models::build_pairing;
use ghc_poisson::*;
use ghc_rma::GreenHomotopy;
use rand::Rng;

fn setup_for<'a>(h: &'a GreenHomotopy, p: &'a ghc_models::DifferentialPairing) -> PoissonSetup<'a> {
    PoissonSetup::new(h, p, compact_band(h, 6, 16).unwrap())
}

#[test]
fn covariant_structures_on_the_default_lattice() {
    let lat = default_lattice();
    for kind in [klein_gordon(), maxwell()] {
        let m = model(kind, &lat);
        let p = build_pairing(&m).unwrap();
        let h = GreenHomotopy::new(&m).unwrap();
        let setup = setup_for(&h, &p);
        let checks = verify_covariant(&setup, true);
        assert!(all_passed(&checks), "{checks:#?}");
        assert!(!setup.tau().is_zero());
    }
}

/// The Klein–Gordon `τ` is the pairing of a source with the causal propagator of another.
#[test]
fn klein_gordon_tau_is_the_propagator_pairing() {
    let lat = default_lattice();
    let m = model(klein_gordon(), &lat);
    let p = build_pairing(&m).unwrap();
    let h = GreenHomotopy::new(&m).unwrap();
    let setup = setup_for(&h, &p);
    let tau = setup.tau();
    let cells = setup.compact().cells(1).to_vec();
    let dim = m.fields().dim(1);
    for (j, &cj) in cells.iter().enumerate() {
        let mut e = vec![Scalar::zero(); dim];
        e[cj] = Scalar::one();
        let plus = h.ops().solve_unchecked(Direction::Retarded, 1, &e);
        let minus = h.ops().solve_unchecked(Direction::Advanced, 1, &e);
        for (i, &ci) in cells.iter().enumerate() {
            assert_eq!(tau.block(0, 0).get(i, j), &plus[ci] - &minus[ci], "entry ({i}, {j})");
        }
    }
}

/// `τ` by direct evaluation from vectors, against the assembled matrix, in both orders.
#[test]
fn tau_antisymmetry_on_random_pairs() {
    let lat = default_lattice();
    let m = model(maxwell(), &lat);
    let p = build_pairing(&m).unwrap();
    let h = GreenHomotopy::new(&m).unwrap();
    let setup = setup_for(&h, &p);
    let tau = setup.tau();
    let space = setup.space().clone();
    let f = m.fields();
    let direct = |a: i64, x: &[Scalar], b: i64, y: &[Scalar]| -> Scalar {
        let xf = setup.compact().extend(f, a + 1, x);
        let yf = setup.compact().extend(f, b + 1, y);
        ev_m(&p, a + 1, &xf, b, &h.rma(b + 1, &yf))
    };
    let degrees: Vec<i64> = space.degrees().filter(|a| space.degrees().contains(&-a)).collect();
    let mut r = rng(11);
    for _ in 0..50 {
        let a = degrees[r.gen_range(0..degrees.len())];
        let b = -a;
        let x = random_vector(space.dim(a), &mut r);
        let y = random_vector(space.dim(b), &mut r);
        let s = Scalar::from_int(sign::koszul(a, b));
        let t_xy = (direct(a, &x, b, &y) - &s * &direct(b, &y, a, &x)) * Scalar::new(1, 2);
        let t_yx = (direct(b, &y, a, &x) - &s * &direct(a, &x, b, &y)) * Scalar::new(1, 2);
        assert_eq!(t_xy, tau.eval(a, &x, b, &y));
        assert_eq!(t_xy, -(&s * &t_yx));
        if a == 0 {
            assert!(tau.eval(0, &x, 0, &x).is_zero());
        }
    }
}

#[test]
fn tau_pm_vanish_on_zero() {
    let lat = default_lattice();
    let m = model(maxwell(), &lat);
    let p = build_pairing(&m).unwrap();
    let h = GreenHomotopy::new(&m).unwrap();
    let setup = setup_for(&h, &p);
    let d = setup.space().dim(0);
    let zero = vec![Scalar::zero(); d];
    let mut r = rng(3);
    let y = random_vector(d, &mut r);
    for dir in [Direction::Retarded, Direction::Advanced] {
        assert!(setup.tau_pm(dir).eval(0, &zero, 0, &y).is_zero());
    }
}

/// Self-adjoint witness: `∂λ_M = 0` while `λ_M` itself does not vanish.
#[test]
fn lambda_m_is_a_nonzero_cocycle_for_maxwell() {
    let lat = default_lattice();
    let m = model(maxwell(), &lat);
    let p = build_pairing(&m).unwrap();
    let h = GreenHomotopy::new(&m).unwrap();
    let setup = setup_for(&h, &p);
    let lm = setup.lambda_m();
    assert!(!lm.is_zero());
    assert!(lm.boundary(setup.shifted()).is_zero());
    assert!(lm.equals(&setup.lambda_m_tilde().asym()));
}

/// `Λ′± = Λ± + ∂μ±`: `τ⁺ ≠ τ ≠ τ⁻`, and `∂λ_M` tracks both differences.
#[test]
fn perturbed_homotopies_keep_the_lambda_m_relation() {
    let lat = default_lattice();
    let m = model(maxwell(), &lat);
    let p = build_pairing(&m).unwrap();
    let h = GreenHomotopy::new(&m).unwrap();
    let base = setup_for(&h, &p);
    for seed in [1u64, 2, 3] {
        let setup = base.perturbed(&random_mu(&m, 2 * seed), &random_mu(&m, 2 * seed + 1));
        let checks = verify_covariant(&setup, false);
        assert!(all_passed(&checks), "{checks:#?}");
        let tau = setup.tau();
        let plus = setup.tau_pm(Direction::Retarded).sub(&tau);
        let minus = tau.sub(&setup.tau_pm(Direction::Advanced));
        assert!(!plus.is_zero() && !minus.is_zero(), "seed {seed}");
        assert!(!base.tau_pm(Direction::Retarded).equals(&setup.tau_pm(Direction::Retarded)));
    }
}

#[test]
fn evaluation_over_m_is_a_cochain_map() {
    let lat = default_lattice();
    for kind in [klein_gordon(), maxwell()] {
        let m = model(kind, &lat);
        let p = build_pairing(&m).unwrap();
        let c = check_ev_m_cochain(&m, &p, 50, 17);
        assert!(c.passed, "{c:#?}");
    }
}
