use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use xxz_ness::fisher::{qfi_dense, sld};
use xxz_ness::lindblad::{build_liouvillian, steady_state_nullspace};
use xxz_ness::model::{eta_from_delta, embed, hamiltonian_xxz, hs_norm, magnetization_z, pauli, Axis};
use xxz_ness::mpo::{build_aux_a, contract_to_dense};
use xxz_ness::transfer::{bracket_ltnr, build_transfer, jordan_decompose, LogMode, RationalEta};
use xxz_ness::{ChainParams, Complex64, DenseOperator};

fn random_state(seed: u64, dim: usize) -> (DenseOperator, DenseOperator) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |dim: usize| {
        DMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    };
    let g = draw(dim);
    let mut rho = &g * g.adjoint() + DMatrix::identity(dim, dim) * Complex64::new(0.1, 0.0);
    let tr = rho.trace();
    rho /= tr;
    let h = draw(dim);
    let mut tangent = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let shift = tangent.trace() / Complex64::new(dim as f64, 0.0);
    for k in 0..dim {
        tangent[(k, k)] -= shift;
    }
    (
        DenseOperator::new(rho).unwrap().hermitian_part(),
        DenseOperator::new(tangent).unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hamiltonian_is_hermitian_and_conserves_magnetization(n in 2usize..7, delta in -3.0f64..3.0, j in 0.1f64..3.0) {
        let p = ChainParams::new(n, j, delta, 0.1, 0.5, 0.0).unwrap();
        let h = hamiltonian_xxz(&p).unwrap();
        let m = magnetization_z(n).unwrap();
        prop_assert!(h.hermiticity_defect() < 1e-12);
        prop_assert!(m.hermiticity_defect() < 1e-12);
        prop_assert!(hs_norm(&h.commutator(&m)) < 1e-12 * hs_norm(&h));
    }

    #[test]
    fn embedding_scales_the_norm(n in 1usize..8, site_seed in 0usize..100, axis in 0usize..3) {
        let site = 1 + site_seed % n;
        let op = pauli([Axis::X, Axis::Y, Axis::Z][axis]);
        let e = embed(n, site, &op).unwrap();
        let want = hs_norm(&op) * 2f64.powi(n as i32 - 1).sqrt();
        prop_assert!((hs_norm(&e) - want).abs() < 1e-12 * want);
    }

    #[test]
    fn z_is_traceless_and_conserves_magnetization(n in 2usize..8, delta in -3.0f64..3.0) {
        let z = contract_to_dense(&build_aux_a(n, eta_from_delta(delta)).unwrap(), n).unwrap();
        let m = magnetization_z(n).unwrap();
        prop_assert!(z.trace().norm() < 1e-12 * hs_norm(&z).max(1.0));
        prop_assert!(hs_norm(&z.commutator(&m)) < 1e-10 * hs_norm(&z).max(1.0));
    }

    #[test]
    fn steady_state_ignores_the_field(
        n in 2usize..4,
        delta in -2.5f64..2.5,
        lambda in 0.05f64..2.0,
        mu in -1.0f64..1.0,
        omega in -3.0f64..3.0,
    ) {
        let p = ChainParams::new(n, 1.0, delta, lambda, mu, omega).unwrap();
        let with = steady_state_nullspace(&build_liouvillian(&p, true).unwrap()).unwrap();
        let without = steady_state_nullspace(&build_liouvillian(&p, false).unwrap()).unwrap();
        prop_assert!(with.hs_distance(&without) < 1e-10);
    }

    #[test]
    fn reversed_driving_is_the_spin_flip(n in 2usize..5, delta in -2.5f64..2.5, lambda in 0.05f64..2.0, mu in -1.0f64..1.0) {
        let dim = 1usize << n;
        let flip = (1..=n).fold(DenseOperator::identity(dim), |acc, j| &acc * &embed(n, j, &pauli(Axis::X)).unwrap());
        let state = |mu: f64| {
            let p = ChainParams::unit_coupling(n, delta, lambda, mu).unwrap();
            steady_state_nullspace(&build_liouvillian(&p, false).unwrap()).unwrap()
        };
        let (a, b) = (state(mu), state(-mu));
        prop_assert!((&(&flip * &a) * &flip).hs_distance(&b) < 1e-10);
    }

    #[test]
    fn sld_eigenbasis_measurement_saturates(seed in 0u64..10_000, dim in 2usize..7) {
        let (rho, tangent) = random_state(seed, dim);
        let f = qfi_dense(&rho, &tangent).unwrap();
        let l = sld(&rho, &tangent).unwrap();
        let basis = l.matrix().clone().symmetric_eigen().eigenvectors;
        let mut classical = 0.0;
        for k in 0..dim {
            let e = basis.column(k);
            let p = (e.adjoint() * rho.matrix() * e)[(0, 0)].re;
            let dp = (e.adjoint() * tangent.matrix() * e)[(0, 0)].re;
            classical += dp * dp / p;
        }
        prop_assert!((classical - f).abs() < 1e-8 * f);
    }

    #[test]
    fn zero_derivative_carries_no_information(seed in 0u64..10_000, dim in 2usize..7) {
        let (rho, _) = random_state(seed, dim);
        prop_assert_eq!(qfi_dense(&rho, &DenseOperator::zeros(dim)).unwrap(), 0.0);
    }

    #[test]
    fn rational_truncation_is_exact(p in 3u32..12, q_seed in 1u32..12, n in 2usize..80) {
        let q = 1 + q_seed % (p - 1);
        prop_assume!(RationalEta::new(p, q).is_ok());
        let r = RationalEta::new(p, q).unwrap();
        let e = Complex64::new(r.eta(), 0.0);
        let small = bracket_ltnr(n, e, r.truncation(), LogMode::Off).unwrap().to_f64();
        let full = bracket_ltnr(n, e, (n / 2).max(1), LogMode::Off).unwrap().to_f64();
        prop_assert!((small - full).abs() <= 1e-12 * full.abs());
    }

    #[test]
    fn log_and_linear_brackets_agree(n in 2usize..150, delta in -3.0f64..3.0) {
        prop_assume!((delta.abs() - 1.0).abs() > 1e-6);
        let e = eta_from_delta(delta);
        let d = (n / 2).max(1);
        if let Ok(linear) = bracket_ltnr(n, e, d, LogMode::Off) {
            let log = bracket_ltnr(n, e, d, LogMode::On).unwrap();
            prop_assert!((log.ln_abs() - linear.ln_abs()).abs() < 1e-12 * linear.ln_abs().abs().max(1.0));
            prop_assert_eq!(log.sign(), linear.sign());
        }
    }

    #[test]
    fn jordan_powers_reproduce_transfer_powers(p in 3u32..10, q_seed in 1u32..10) {
        let q = 1 + q_seed % (p - 1);
        prop_assume!(RationalEta::new(p, q).is_ok());
        let r = RationalEta::new(p, q).unwrap();
        let ts = build_transfer(r.truncation(), Complex64::new(r.eta(), 0.0)).unwrap();
        let jd = jordan_decompose(&ts).unwrap();
        let t = ts.to_dense();
        let mut tk = t.clone();
        for k in 1..=20u32 {
            if k > 1 {
                tk = &t * &tk;
            }
            if [1, 5, 20].contains(&k) {
                prop_assert!((jd.power(k) - &tk).amax() < 1e-8 * tk.amax());
            }
        }
    }
}
