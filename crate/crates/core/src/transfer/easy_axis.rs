//! Superexponential lower bound on `⟨L|T^n|R⟩` for `|Δ| > 1`.

use num_complex::Complex64;
use num_traits::Float;

use super::Regime;
use crate::error::{Error, Result};

/// Natural logarithms of the single-path product and its factorial bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EasyAxisBound {
    /// `ln[2^{−n} Π_{k=1}^{n/2−1} sinh²(ky) sinh²((k+1)y)]`, `y = Im η`.
    pub ln_path: f64,
    /// `ln[y^{2(n−2)} 2^{−n} ((n/2)!(n/2−1)!)²]`.
    pub ln_bound: f64,
}

fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|k| (k as f64).ln()).sum()
}

pub fn easy_axis_lower_bound(n: usize, eta: Complex64) -> Result<EasyAxisBound> {
    let delta = eta.cos().re;
    if Regime::of_delta(delta) != Regime::EasyAxis {
        return Err(Error::NotEasyAxis(delta));
    }
    if n % 2 == 1 {
        return Err(Error::OddLength(n));
    }
    if n < 2 {
        return Err(Error::TooFewSites(n));
    }
    let y = eta.im.abs();
    let half = n / 2;
    let ln2n = n as f64 * core::f64::consts::LN_2;
    let ln_path = (1..half)
        .map(|k| 2.0 * ((k as f64 * y).sinh().ln() + ((k + 1) as f64 * y).sinh().ln()))
        .sum::<f64>()
        - ln2n;
    let ln_bound = 2.0 * (n as f64 - 2.0) * y.ln() - ln2n + 2.0 * (ln_factorial(half) + ln_factorial(half - 1));
    Ok(EasyAxisBound { ln_path, ln_bound })
}
