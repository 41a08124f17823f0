//! Transfer-matrix machinery for the leading-order Fisher information.
//!
//! Vectors on the auxiliary space use the layout `[L, R, 1, …, d]`.

mod contfrac;
mod easy_axis;
mod isotropic;
mod jordan;
mod leading;
mod paths;

pub use contfrac::{continued_fraction_c, continued_fraction_c_convergent, continued_fraction_c_recurrence};
pub use easy_axis::{easy_axis_lower_bound, EasyAxisBound};
pub use isotropic::{isotropic_bracket_series, isotropic_f_delta};
pub use jordan::{
    chi_closed_form, chi_coefficient, chi_coefficient_with_dmax, defective_vector, jordan_decompose,
    toeplitz_eigs_check, xi_coefficient, xi_rational_jordan, ChiCoefficients, DefectiveVector, JordanData,
    RationalEta, ToeplitzSpectrum, XiEstimate, XiRoute, DEFAULT_D_MAX,
};
pub use leading::{delta_coefficient_series, f0_delta, f0_x, DeltaSeries};
pub use paths::{linear_fit, LinearFit, PathSeries, PathSums};

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::logscalar::LogScalar;

/// Interaction regime set by `|Δ|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    EasyPlane,
    Isotropic,
    EasyAxis,
}

impl Regime {
    pub fn of_delta(delta: f64) -> Regime {
        let a = delta.abs();
        if a < 1.0 {
            Regime::EasyPlane
        } else if a > 1.0 {
            Regime::EasyAxis
        } else {
            Regime::Isotropic
        }
    }

    /// `sign(1 − Δ²)`.
    pub fn sign(&self) -> f64 {
        match self {
            Regime::EasyPlane => 1.0,
            Regime::Isotropic => 0.0,
            Regime::EasyAxis => -1.0,
        }
    }
}

/// Whether banded products run in linear or `(sign, ln|x|)` arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogMode {
    /// Log domain for `|Δ| > 1`, otherwise linear with fallback on overflow.
    #[default]
    Auto,
    On,
    Off,
}

/// Level-to-level couplings are either the literal entries or their moduli.
///
/// In the easy axis `sin²(kη) = −sinh²(k·Im η)`, so the literal
/// off-diagonal entries are negative. Conjugating by
/// `G = diag(1, 1, +1, −1, +1, …)` makes them positive without changing
/// `⟨L|T^n|R⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    Literal,
    Positive,
}

/// Tridiagonal block on the levels `1..=d`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelBand {
    /// `⟨k|·|k⟩`, index `k − 1`.
    pub diag: Vec<f64>,
    /// `⟨k+1|·|k⟩`, index `k − 1`, length `d − 1`.
    pub lower: Vec<f64>,
    /// `⟨k|·|k+1⟩`, index `k − 1`, length `d − 1`.
    pub upper: Vec<f64>,
}

impl LevelBand {
    fn zeros(d: usize) -> Self {
        LevelBand {
            diag: vec![0.0; d],
            lower: vec![0.0; d.saturating_sub(1)],
            upper: vec![0.0; d.saturating_sub(1)],
        }
    }

    pub fn d(&self) -> usize {
        self.diag.len()
    }

    /// Adds `self · v[levels]` into `out[levels]` (layout `[L, R, 1..d]`).
    fn apply_levels(&self, v: &[f64], out: &mut [f64]) {
        let d = self.d();
        for k in 0..d {
            let mut acc = self.diag[k] * v[k + 2];
            if k > 0 {
                acc += self.lower[k - 1] * v[k + 1];
            }
            if k + 1 < d {
                acc += self.upper[k] * v[k + 3];
            }
            out[k + 2] += acc;
        }
    }

    fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let d = self.d();
        let mut m = nalgebra::DMatrix::zeros(d, d);
        for k in 0..d {
            m[(k, k)] = self.diag[k];
            if k + 1 < d {
                m[(k + 1, k)] = self.lower[k];
                m[(k, k + 1)] = self.upper[k];
            }
        }
        m
    }
}

/// Banded transfer matrix `T^(d)` and vertex matrix `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferSystem {
    d: usize,
    eta: Complex64,
    regime: Regime,
    gauge: Gauge,
    t: LevelBand,
    vertex: LevelBand,
    /// `⟨d|D|d+1⟩ = (d+1)²/4`, the one vertex entry leaving the truncation.
    vertex_exit: f64,
    /// `⟨d+1|T|d⟩ = sin²(dη)/2`, the transfer entry into level `d + 1`.
    t_exit: f64,
}

fn sin_sq(eta: Complex64, k: f64) -> f64 {
    let s = (eta * k).sin();
    (s * s).re
}

fn cos_sq(eta: Complex64, k: f64) -> f64 {
    let c = (eta * k).cos();
    (c * c).re
}

/// Builds `T^(d)` on `{L, R, 1..d}` and the vertex `D` with the
/// `sign(1 − Δ²)` factor on its diagonal.
pub fn build_transfer(d: usize, eta: Complex64) -> Result<TransferSystem> {
    if d < 1 {
        return Err(Error::EmptyTruncation);
    }
    let delta = eta.cos().re;
    let regime = Regime::of_delta(delta);
    let mut t = LevelBand::zeros(d);
    let mut vertex = LevelBand::zeros(d);
    for k in 1..=d {
        let kf = k as f64;
        t.diag[k - 1] = cos_sq(eta, kf);
        vertex.diag[k - 1] = regime.sign() * kf * kf / 2.0;
        if k < d {
            t.lower[k - 1] = sin_sq(eta, kf) / 2.0;
            t.upper[k - 1] = sin_sq(eta, kf + 1.0) / 2.0;
            vertex.lower[k - 1] = kf * kf / 4.0;
            vertex.upper[k - 1] = (kf + 1.0) * (kf + 1.0) / 4.0;
        }
    }
    let df = d as f64;
    Ok(TransferSystem {
        d,
        eta,
        regime,
        gauge: Gauge::Literal,
        t,
        vertex,
        vertex_exit: (df + 1.0) * (df + 1.0) / 4.0,
        t_exit: sin_sq(eta, df) / 2.0,
    })
}

impl TransferSystem {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    /// `Δ = cos η`.
    pub fn delta(&self) -> f64 {
        self.eta.cos().re
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn gauge(&self) -> Gauge {
        self.gauge
    }

    pub fn levels(&self) -> &LevelBand {
        &self.t
    }

    pub fn vertex(&self) -> &LevelBand {
        &self.vertex
    }

    pub fn vertex_exit(&self) -> f64 {
        self.vertex_exit
    }

    pub fn transfer_exit(&self) -> f64 {
        self.t_exit
    }

    /// Auxiliary dimension `d + 2`.
    pub fn dim(&self) -> usize {
        self.d + 2
    }

    /// Same system with level couplings replaced by their moduli.
    pub fn positive_gauge(&self) -> TransferSystem {
        let mut s = self.clone();
        for x in s.t.lower.iter_mut().chain(s.t.upper.iter_mut()) {
            *x = x.abs();
        }
        s.t_exit = s.t_exit.abs();
        s.gauge = Gauge::Positive;
        s
    }

    /// `T · v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.apply_into(v, &mut out);
        out
    }

    pub(crate) fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        out[0] = v[0] + 0.5 * v[2];
        out[1] = v[1];
        for x in out[2..].iter_mut() {
            *x = 0.0;
        }
        out[2] += 0.5 * v[1];
        self.t.apply_levels(v, out);
    }

    /// `D · v` (zero on `L` and `R`).
    pub fn apply_vertex(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.vertex.apply_levels(v, &mut out);
        out
    }

    /// Dense `(d+2)×(d+2)` copy of `T`.
    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        m[(0, 0)] = 1.0;
        m[(1, 1)] = 1.0;
        m[(0, 2)] = 0.5;
        m[(2, 1)] = 0.5;
        m.view_mut((2, 2), (self.d, self.d)).copy_from(&self.t.to_dense());
        m
    }

    /// Dense copy of `D`.
    pub fn vertex_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        m.view_mut((2, 2), (self.d, self.d)).copy_from(&self.vertex.to_dense());
        m
    }

    /// The bulk block `T'^(d)` on the levels.
    pub fn bulk_dense(&self) -> nalgebra::DMatrix<f64> {
        self.t.to_dense()
    }
}

/// Unit vector `|R⟩` in the layout `[L, R, 1..d]`.
pub(crate) fn right_boundary(dim: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[1] = 1.0;
    v
}

/// `⟨L|T^n|R⟩` by iterated banded products in `O(n·d)`.
pub fn bracket_ltnr(n: usize, eta: Complex64, d: usize, mode: LogMode) -> Result<LogScalar> {
    let ts = build_transfer(d, eta)?;
    bracket_with(&ts, n, mode)
}

/// `⟨L|T^n|R⟩` for a prebuilt system.
pub fn bracket_with(ts: &TransferSystem, n: usize, mode: LogMode) -> Result<LogScalar> {
    let use_log = match mode {
        LogMode::On => true,
        LogMode::Off => false,
        LogMode::Auto => ts.regime() == Regime::EasyAxis,
    };
    if use_log {
        return Ok(bracket_log_domain(ts, n));
    }
    match bracket_linear(ts, n) {
        Some(x) => Ok(LogScalar::from_f64(x)),
        None if mode == LogMode::Auto => Ok(bracket_log_domain(ts, n)),
        None => Err(Error::Overflow),
    }
}

fn bracket_linear(ts: &TransferSystem, n: usize) -> Option<f64> {
    let mut v = right_boundary(ts.dim());
    let mut next = vec![0.0; ts.dim()];
    for _ in 0..n {
        ts.apply_into(&v, &mut next);
        core::mem::swap(&mut v, &mut next);
    }
    if v.iter().all(|x| x.is_finite()) {
        Some(v[0])
    } else {
        None
    }
}

/// Banded product with every component stored as `(sign, ln|x|)`.
fn bracket_log_domain(ts: &TransferSystem, n: usize) -> LogScalar {
    let d = ts.d();
    let band = ts.levels();
    let lg = |x: f64| LogScalar::from_f64(x);
    let diag: Vec<LogScalar> = band.diag.iter().map(|&x| lg(x)).collect();
    let lower: Vec<LogScalar> = band.lower.iter().map(|&x| lg(x)).collect();
    let upper: Vec<LogScalar> = band.upper.iter().map(|&x| lg(x)).collect();
    let half = lg(0.5);
    let mut v = vec![LogScalar::ZERO; d + 2];
    v[1] = LogScalar::ONE;
    let mut next = v.clone();
    for _ in 0..n {
        next[0] = v[0] + half * v[2];
        next[1] = v[1];
        for k in 0..d {
            let mut acc = diag[k] * v[k + 2];
            if k == 0 {
                acc = acc + half * v[1];
            } else {
                acc = acc + lower[k - 1] * v[k + 1];
            }
            if k + 1 < d {
                acc = acc + upper[k] * v[k + 3];
            }
            next[k + 2] = acc;
        }
        core::mem::swap(&mut v, &mut next);
    }
    v[0]
}

/// `Σ_{k=1}^n ⟨L|T^{k−1} D T^{n−k}|R⟩` with `T`, `D` as built.
pub fn sum_defect(n: usize, eta: Complex64, d: usize) -> Result<LogScalar> {
    let ts = build_transfer(d, eta)?;
    let series = PathSums::new(&ts).with_defect().run(n)?;
    Ok(series.defect[n])
}

/// `d²/dη² ⟨L|T^n|R⟩` by exact forward-mode differentiation of the
/// banded product.
pub fn bracket_eta_second_derivative(n: usize, eta: Complex64, d: usize) -> Result<LogScalar> {
    let ts = build_transfer(d, eta)?;
    let series = PathSums::new(&ts).with_derivatives().run(n)?;
    Ok(series.d2_eta(n))
}
