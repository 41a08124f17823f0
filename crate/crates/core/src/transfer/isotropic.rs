//! Small-η expansions around the isotropic point.


use crate::error::{Error, Result};
use crate::model::ChainParams;

fn check_regime(n: usize, eta_abs: f64) -> Result<()> {
    let x = eta_abs * n as f64;
    if !(x < 0.2) {
        return Err(Error::SeriesRegime(x));
    }
    Ok(())
}

/// `⟨L|T^n|R⟩` through `η⁶`:
/// `n(n−1)/8 − n(n−1)(n−2)/24·(η² − η⁴(3n−7)/6 + η⁶(989 + 3n(36n−217))/180)`.
pub fn isotropic_bracket_series(n: usize, eta: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewSites(n));
    }
    check_regime(n, eta.abs())?;
    let nf = n as f64;
    let e2 = eta * eta;
    let inner = e2 - e2 * e2 * (3.0 * nf - 7.0) / 6.0 + e2 * e2 * e2 * (989.0 + 3.0 * nf * (36.0 * nf - 217.0)) / 180.0;
    Ok(nf * (nf - 1.0) / 8.0 - nf * (nf - 1.0) * (nf - 2.0) / 24.0 * inner)
}

/// `λ²μ²/(96J²)·n(n−1)(n−2)·(3n − 7 − η²(n−3)(261n−799)/30)`.
///
/// `η²` is taken as the real square, negative on the easy-axis side.
pub fn isotropic_f_delta(params: &ChainParams) -> Result<f64> {
    let eta = params.eta();
    check_regime(params.n(), eta.norm())?;
    let e2 = (eta * eta).re;
    let nf = params.n() as f64;
    let coupling = params.lambda() * params.mu() / params.j_coupling();
    let shape = 3.0 * nf - 7.0 - e2 / 30.0 * (nf - 3.0) * (261.0 * nf - 799.0);
    Ok(coupling * coupling / 96.0 * nf * (nf - 1.0) * (nf - 2.0) * shape)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::{bracket_ltnr, f0_delta, LogMode};
    use num_complex::Complex64;

    fn exact(n: usize, eta: f64) -> f64 {
        bracket_ltnr(n, Complex64::new(eta, 0.0), n / 2, LogMode::Off).unwrap().to_f64()
    }

    #[test]
    fn leading_terms() {
        assert_eq!(isotropic_bracket_series(4, 0.0).unwrap(), 1.5);
        assert_eq!(isotropic_bracket_series(6, 0.0).unwrap(), 3.75);
        let p4 = ChainParams::unit_coupling(4, 1.0, 1.0, 1.0).unwrap();
        assert!((isotropic_f_delta(&p4).unwrap() - 1.25).abs() < 1e-15);
        let p3 = ChainParams::unit_coupling(3, 1.0, 1.0, 1.0).unwrap();
        assert!((isotropic_f_delta(&p3).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn regime_is_enforced() {
        assert!(matches!(isotropic_bracket_series(30, 0.01), Err(Error::SeriesRegime(_))));
        let far = ChainParams::unit_coupling(10, 0.5, 1.0, 1.0).unwrap();
        assert!(matches!(isotropic_f_delta(&far), Err(Error::SeriesRegime(_))));
    }

    #[test]
    fn series_matches_banded_powers() {
        let (s, e) = (isotropic_bracket_series(6, 0.01).unwrap(), exact(6, 0.01));
        assert!((s - e).abs() < 1e-8 * e);
        for n in [5usize, 12, 40] {
            let eta = 0.05 / n as f64;
            let (s, e) = (isotropic_bracket_series(n, eta).unwrap(), exact(n, eta));
            // truncation error is O((ηn)⁸)
            assert!((s - e).abs() < 1e-9 * e, "n={n}");
        }
    }

    #[test]
    fn eta4_coefficient_by_regression() {
        // remove the known η⁰, η² terms, fit η⁴ against the exact bracket
        let n = 5usize;
        let nf = n as f64;
        let base = nf * (nf - 1.0) * (nf - 2.0) / 24.0;
        let etas = [2e-3, 4e-3, 6e-3, 8e-3];
        let coeffs: alloc::vec::Vec<f64> = etas
            .iter()
            .map(|&e| {
                let rem = exact(n, e) - nf * (nf - 1.0) / 8.0 + base * e * e;
                rem / e.powi(4)
            })
            .collect();
        let expected = base * (3.0 * nf - 7.0) / 6.0;
        for c in coeffs {
            assert!((c - expected).abs() < 1e-3 * expected, "{c} vs {expected}");
        }
    }

    #[test]
    fn f_delta_matches_exact_near_isotropy() {
        for n in [3usize, 6, 20] {
            let p = ChainParams::unit_coupling(n, 1.0 - 1e-8, 1e-3, 1.0).unwrap();
            let series = isotropic_f_delta(&p).unwrap();
            let exact = f0_delta(&p).unwrap().value.to_f64();
            assert!((series - exact).abs() < 1e-3 * exact, "n={n}: {series} vs {exact}");
        }
    }
}
