//! Leading-order Fisher information from transfer-matrix path sums.

use alloc::vec::Vec;


use super::{bracket_ltnr, build_transfer, LogMode, PathSums, Regime};
use crate::error::{Error, Result};
use crate::fisher::{Coefficients, FisherEstimate, Method};
use crate::logscalar::LogScalar;
use crate::model::{ChainParams, Parameter};
use num_complex::Complex64;

/// `(d/dx (λμ/J))²·⟨L|T^n|R⟩/2` for `x ∈ {J, λ, μ}`.
pub fn f0_x(params: &ChainParams, parameter: Parameter) -> Result<FisherEstimate> {
    let (lambda, mu, j) = (params.lambda(), params.mu(), params.j_coupling());
    let prefactor = match parameter {
        Parameter::Lambda => mu / j,
        Parameter::Mu => lambda / j,
        Parameter::J => -lambda * mu / (j * j),
        Parameter::Delta => return Err(Error::DeltaRouting),
    };
    let n = params.n();
    let bracket = bracket_ltnr(n, params.eta(), (n / 2).max(1), LogMode::Auto)?;
    Ok(FisherEstimate {
        value: bracket * LogScalar::from_f64(prefactor * prefactor / 2.0),
        method: Method::LeadingOrder,
        parameter,
        params: *params,
        coefficients: Coefficients::default(),
    })
}

/// Per-length coefficients of the anisotropy Fisher information.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSeries {
    /// `⟨L|T^m|R⟩`.
    pub bracket: Vec<LogScalar>,
    /// Vertex sum in the gauge the series was evaluated in (literal in the
    /// easy plane, positive gauge in the easy axis).
    pub defect: Vec<LogScalar>,
    /// `d²/dη² ⟨L|T^m|R⟩`.
    pub d2_eta: Vec<LogScalar>,
    /// `G(m)` with `F_Δ^(0) = (λμ/J)²·G(m)`.
    pub coefficient: Vec<LogScalar>,
}

/// `G(m) = [Σ_k ⟨L|T^{k−1} D T^{m−k}|R⟩ + ¼ d²/dη² ⟨L|T^m|R⟩] / (2(1 − Δ²))`
/// for all `m ≤ n_max` in one sweep.
///
/// In the easy axis the literal entries of `T` are negative off the
/// diagonal and the expression is evaluated in the positive gauge, where it
/// reads `[Σ T D T + ¼ d²/dθ²]/(2(Δ² − 1))` with `θ = Im η`.
/// `exit_term` adds the one-step excursion to level `d + 1` used by the
/// truncated rational route.
pub fn delta_coefficient_series(eta: Complex64, n_max: usize, d: usize, exit_term: bool) -> Result<DeltaSeries> {
    let literal = build_transfer(d, eta)?;
    let regime = literal.regime();
    if regime == Regime::Isotropic {
        return Err(Error::IsotropicPrefactor);
    }
    let ts = if regime == Regime::EasyAxis {
        literal.positive_gauge()
    } else {
        literal
    };
    let mut sums = PathSums::new(&ts).with_derivatives().with_defect();
    if exit_term {
        sums = sums.with_exit_term();
    }
    let series = sums.run(n_max)?;
    // |1 − Δ²| = |sin η|², accurate close to the isotropic point
    let gap = eta.sin().norm_sqr();
    let pref = LogScalar::from_f64(1.0 / (2.0 * gap));
    let quarter = LogScalar::from_f64(0.25);
    let coefficient = series
        .defect
        .iter()
        .zip(&series.d2_theta)
        .map(|(&s, &c)| (s + quarter * c) * pref)
        .collect();
    let d2_eta = (0..=n_max).map(|m| series.d2_eta(m)).collect();
    Ok(DeltaSeries {
        bracket: series.bracket,
        defect: series.defect,
        d2_eta,
        coefficient,
    })
}

/// Leading-order `F_Δ^(0) = (λμ/J)²·G(n)` with the full truncation `d = ⌊n/2⌋`.
pub fn f0_delta(params: &ChainParams) -> Result<FisherEstimate> {
    if Regime::of_delta(params.delta()) == Regime::Isotropic {
        return Err(Error::IsotropicPrefactor);
    }
    let n = params.n();
    let series = delta_coefficient_series(params.eta(), n, (n / 2).max(1), false)?;
    let g = series.coefficient[n];
    let coupling = params.lambda() * params.mu() / params.j_coupling();
    let xi = g.scale(1.0 / n as f64).to_f64_checked();
    Ok(FisherEstimate {
        value: g * LogScalar::from_f64(coupling * coupling),
        method: Method::LeadingOrder,
        parameter: Parameter::Delta,
        params: *params,
        coefficients: Coefficients { chi: None, xi },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::eta_from_delta;
    use crate::mpo::{build_aux_a, contract_to_dense};
    use crate::model::hs_norm;
    use proptest::prelude::*;

    fn params(n: usize, delta: f64) -> ChainParams {
        ChainParams::unit_coupling(n, delta, 1e-3, 1.0).unwrap()
    }

    #[test]
    fn f0_x_examples() {
        let p = ChainParams::unit_coupling(2, 0.7, 0.3, 1.0).unwrap();
        assert!((f0_x(&p, Parameter::Lambda).unwrap().value.to_f64() - 0.125).abs() < 1e-15);
        let p0 = ChainParams::unit_coupling(6, 0.7, 0.3, 0.0).unwrap();
        assert!(f0_x(&p0, Parameter::Mu).unwrap().value.to_f64() > 0.0);
        assert_eq!(f0_x(&p0, Parameter::Lambda).unwrap().value.to_f64(), 0.0);
        assert_eq!(f0_x(&p, Parameter::Delta), Err(Error::DeltaRouting));
        let j1 = ChainParams::new(8, 1.0, 0.4, 0.2, 0.5, 0.0).unwrap();
        let j2 = ChainParams::new(8, 2.0, 0.4, 0.2, 0.5, 0.0).unwrap();
        let r = f0_x(&j1, Parameter::J).unwrap().value.to_f64() / f0_x(&j2, Parameter::J).unwrap().value.to_f64();
        assert!((r - 16.0).abs() < 1e-12);
    }

    /// ‖dZ/dΔ‖²_HS/2^{n+1} by central differences on the dense MPO.
    fn dense_f_delta(n: usize, delta: f64) -> f64 {
        let h = 1e-5;
        let z = |x: f64| contract_to_dense(&build_aux_a(n, eta_from_delta(x)).unwrap(), n).unwrap();
        let dz = (&z(delta + h) - &z(delta - h)).scale_real(1.0 / (2.0 * h));
        hs_norm(&dz).powi(2) / 2f64.powi(n as i32 + 1)
    }

    #[test]
    fn f0_delta_matches_dense_mpo_derivative() {
        for delta in [0.3, 0.5, 0.9, -0.6, 1.5, 2.0, -2.0] {
            for n in 2..=7 {
                let exact = dense_f_delta(n, delta);
                let got = f0_delta(&ChainParams::unit_coupling(n, delta, 1.0, 1.0).unwrap())
                    .unwrap()
                    .value
                    .to_f64();
                assert!((got - exact).abs() <= 1e-7 * exact.max(1e-12), "n={n} Δ={delta}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn f0_delta_rejects_isotropic_point() {
        assert_eq!(f0_delta(&params(6, 1.0)), Err(Error::IsotropicPrefactor));
        assert_eq!(f0_delta(&params(6, -1.0)), Err(Error::IsotropicPrefactor));
    }

    #[test]
    fn easy_axis_values_stay_finite_in_log_domain() {
        let f = f0_delta(&params(400, 3.0)).unwrap();
        assert!(f.value.sign() == 1 && f.value.log10_abs() > 300.0);
    }

    proptest! {
        #[test]
        fn f0_delta_is_positive(n in 2usize..60, delta in -3.0f64..3.0) {
            prop_assume!((delta.abs() - 1.0).abs() > 1e-3);
            let f = f0_delta(&params(n, delta)).unwrap();
            prop_assert!(f.value.sign() >= 0);
            if n >= 3 {
                prop_assert!(f.value.sign() == 1);
            }
        }
    }
}
