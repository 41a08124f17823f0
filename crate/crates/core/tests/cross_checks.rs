use xxz_ness::fisher::{optimal_estimator_variance, qfi_parametric, StateBuilder};
use xxz_ness::lindblad::{calibrate_epsilon, ness_perturbative};
use xxz_ness::model::eta_from_delta;
use xxz_ness::mpo::{build_aux_a, contract_to_dense};
use xxz_ness::transfer::{f0_delta, f0_x, linear_fit, xi_coefficient};
use xxz_ness::{ChainParams, Complex64, Parameter};

fn params(n: usize, delta: f64, lambda: f64, mu: f64) -> ChainParams {
    ChainParams::unit_coupling(n, delta, lambda, mu).unwrap()
}

#[test]
fn calibrated_epsilon_is_linear_in_lambda() {
    let lambdas = [1e-3, 2e-3, 4e-3];
    let eps: Vec<f64> = lambdas
        .iter()
        .map(|&l| calibrate_epsilon(&params(3, 2.0, l, 1.0)).unwrap().epsilon)
        .collect();
    let fit = linear_fit(&lambdas, &eps);
    for (l, e) in lambdas.iter().zip(&eps) {
        assert!((fit.slope * l + fit.intercept - e).abs() < 1e-6 * e, "{l}: {e}");
    }
    assert!(fit.intercept.abs() < 1e-9);
}

#[test]
fn calibrated_epsilon_ignores_anisotropy() {
    let eps: Vec<f64> = [1.5, 2.0, 4.0]
        .iter()
        .map(|&d| calibrate_epsilon(&params(3, d, 2e-3, 1.0)).unwrap().epsilon)
        .collect();
    let (lo, hi) = eps.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!((hi - lo) / lo < 1e-6);
}

#[test]
fn current_estimator_saturates_the_leading_bound() {
    let (n, delta, mu) = (4, 0.5, 1.0);
    let z = contract_to_dense(&build_aux_a(n, eta_from_delta(delta)).unwrap(), n).unwrap();
    let zeta = (&z - &z.adjoint()).scale(Complex64::new(0.0, 1.0));
    let lambda = 1e-4;
    let expectation = |l: f64| {
        let rho = ness_perturbative(&params(n, delta, l, mu)).unwrap().state;
        (&zeta * &rho).trace().re
    };
    let h = 1e-6;
    let slope = (expectation(lambda + h) - expectation(lambda - h)) / (2.0 * h);
    let p = params(n, delta, lambda, mu);
    let rho = ness_perturbative(&p).unwrap().state;
    let var = optimal_estimator_variance(&rho, &zeta, 1).unwrap();
    let bound = 1.0 / f0_x(&p, Parameter::Lambda).unwrap().value.to_f64();
    let got = var / (slope * slope);
    assert!((got - bound).abs() < 1e-3 * bound, "{got} vs {bound}");
}

#[test]
fn dense_anisotropy_information_matches_leading_order() {
    let p = params(4, 0.5, 1e-3, 1.0);
    let exact = qfi_parametric(&p, Parameter::Delta, StateBuilder::Mu1 { epsilon_ratio: 1.0 })
        .unwrap()
        .value
        .to_f64();
    let leading = f0_delta(&p).unwrap().value.to_f64();
    assert!((exact / leading - 1.0).abs() < 1e-4);
}

fn local_exponent(delta: f64, n: usize) -> f64 {
    let at = |m: usize| xi_coefficient(delta, m, None).unwrap().xi_times_n.ln();
    (at(2 * n) - at(n)) / 2f64.ln()
}

#[test]
fn near_rational_growth_starts_quadratic() {
    for n in [100, 400, 1600, 5000] {
        let a = local_exponent(0.4999, n);
        assert!((a - 2.0).abs() < 0.06, "n={n}: {a}");
    }
    // further from the rational point the quadratic stretch ends sooner
    assert!((local_exponent(0.49, 300) - 2.0).abs() < 0.02);
    assert!(local_exponent(0.49, 5000) > 2.4);
}
