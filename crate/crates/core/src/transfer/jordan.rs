//! Jordan structure of `T^(d)` and the growth coefficients χ and ξ.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_traits::Float;

use super::{build_transfer, delta_coefficient_series, linear_fit, PathSums, Regime, TransferSystem};
use crate::error::{Error, Result};

/// Truncation used for irrational `η/π` when no chain length is given.
pub const DEFAULT_D_MAX: usize = 400;

/// `η = qπ/p` with coprime `1 ≤ q < p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalEta {
    p: u32,
    q: u32,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RationalEta {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p < 2 || q == 0 || q >= p || gcd(p, q) != 1 {
            return Err(Error::InconsistentRational { p, q });
        }
        Ok(RationalEta { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn eta(&self) -> f64 {
        PI * f64::from(self.q) / f64::from(self.p)
    }

    pub fn delta(&self) -> f64 {
        self.eta().cos()
    }

    /// `d = p − 1`: level `p` is unreachable because `sin(pη) = 0`.
    pub fn truncation(&self) -> usize {
        (self.p - 1) as usize
    }

    fn check_delta(&self, delta: f64) -> Result<()> {
        if (self.delta() - delta).abs() > 1e-12 {
            Err(Error::InconsistentRational { p: self.p, q: self.q })
        } else {
            Ok(())
        }
    }
}

/// Generalised eigenvector `ψ` with `(T − 𝟙)ψ = |L⟩` and `ψ_L = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectiveVector {
    pub psi_r: f64,
    /// `ψ_1..ψ_d`.
    pub levels: Vec<f64>,
}

impl DefectiveVector {
    /// Components in the layout `[L, R, 1..d]`.
    pub fn to_column(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.levels.len() + 2);
        v.push(0.0);
        v.push(self.psi_r);
        v.extend_from_slice(&self.levels);
        v
    }
}

/// Closed-form defective vector:
/// `ψ_1 = 2`, `ψ_R = 2(d+1)/d·(1 − T_11)`,
/// `ψ_k = 2(d−k+1)/(d−k+2)·T_{k,k−1}/(1 − T_kk)·ψ_{k−1}`.
pub fn defective_vector(ts: &TransferSystem) -> Result<DefectiveVector> {
    let d = ts.d();
    let band = ts.levels();
    let gap = |k: usize| 1.0 - band.diag[k - 1];
    if gap(1).abs() < 1e-14 {
        return Err(Error::DegenerateLevel(1));
    }
    let df = d as f64;
    let psi_r = 2.0 * (df + 1.0) / df * gap(1);
    let mut levels = vec![0.0; d];
    levels[0] = 2.0;
    for k in 2..=d {
        let g = gap(k);
        if g.abs() < 1e-14 {
            return Err(Error::DegenerateLevel(k));
        }
        let kf = k as f64;
        let ratio = 2.0 * (df - kf + 1.0) / (df - kf + 2.0);
        levels[k - 1] = ratio * band.lower[k - 2] / g * levels[k - 2];
    }
    Ok(DefectiveVector { psi_r, levels })
}

/// Jordan decomposition `V⁻¹ T V = [[1,1],[0,1]] ⊕ diag(τ_1..τ_d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanData {
    /// Bulk eigenvalues sorted by decreasing modulus. The bulk block is
    /// similar to a symmetric matrix, so they are real.
    pub taus: Vec<f64>,
    pub v: DMatrix<f64>,
    pub v_inv: DMatrix<f64>,
    pub psi: DefectiveVector,
    /// `⟨R|V⁻¹|R⟩ = 1/ψ_R`.
    pub chi: f64,
    /// `⟨L|V⁻¹|R⟩`.
    pub chi1: f64,
}

impl JordanData {
    pub fn jordan_form(&self) -> DMatrix<f64> {
        let n = self.taus.len() + 2;
        let mut j = DMatrix::zeros(n, n);
        j[(0, 0)] = 1.0;
        j[(0, 1)] = 1.0;
        j[(1, 1)] = 1.0;
        for (i, &t) in self.taus.iter().enumerate() {
            j[(i + 2, i + 2)] = t;
        }
        j
    }

    /// `V·J^k·V⁻¹`.
    pub fn power(&self, k: u32) -> DMatrix<f64> {
        let n = self.taus.len() + 2;
        let mut jk = DMatrix::zeros(n, n);
        jk[(0, 0)] = 1.0;
        jk[(0, 1)] = f64::from(k);
        jk[(1, 1)] = 1.0;
        for (i, &t) in self.taus.iter().enumerate() {
            jk[(i + 2, i + 2)] = t.powi(k as i32);
        }
        &self.v * jk * &self.v_inv
    }

    /// Largest entry of `V⁻¹ T V − J`.
    pub fn similarity_residual(&self, ts: &TransferSystem) -> f64 {
        (&self.v_inv * ts.to_dense() * &self.v - self.jordan_form()).amax()
    }
}

/// Eigen-decomposes the bulk block `T'` by the diagonal similarity
/// `P = diag|sin η / sin kη|` that makes it symmetric, then assembles `V`.
pub fn jordan_decompose(ts: &TransferSystem) -> Result<JordanData> {
    let d = ts.d();
    let band = ts.levels();
    let mut scale = vec![1.0; d];
    let mut sym = DMatrix::<f64>::zeros(d, d);
    for k in 0..d {
        sym[(k, k)] = band.diag[k];
    }
    for k in 0..d.saturating_sub(1) {
        let (lo, up) = (band.lower[k], band.upper[k]);
        let prod = lo * up;
        if !(prod > 0.0) {
            // a vanishing coupling means sin(kη) = 0 for some k ≤ d, where cos²(kη) = 1
            return Err(Error::UnitBulkEigenvalue);
        }
        scale[k + 1] = scale[k] * (lo / up).sqrt();
        let off = lo.signum() * prod.sqrt();
        sym[(k + 1, k)] = off;
        sym[(k, k + 1)] = off;
    }
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .abs()
            .partial_cmp(&eig.eigenvalues[a].abs())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let taus: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    if taus.iter().any(|t| (t - 1.0).abs() < 1e-12) {
        return Err(Error::UnitBulkEigenvalue);
    }

    let psi = defective_vector(ts)?;
    let dim = d + 2;
    let mut v = DMatrix::<f64>::zeros(dim, dim);
    v[(0, 0)] = 1.0;
    for (i, x) in psi.to_column().into_iter().enumerate() {
        v[(i, 1)] = x;
    }
    for (col, &idx) in order.iter().enumerate() {
        let tau = taus[col];
        for k in 0..d {
            v[(k + 2, col + 2)] = scale[k] * eig.eigenvectors[(k, idx)];
        }
        v[(0, col + 2)] = v[(2, col + 2)] / (2.0 * tau - 2.0);
    }
    let v_inv = v.clone().try_inverse().ok_or(Error::SingularSimilarity)?;
    Ok(JordanData {
        taus,
        chi: 1.0 / psi.psi_r,
        chi1: v_inv[(0, 1)],
        v,
        v_inv,
        psi,
    })
}

/// Row `⟨ℓ_1|` of `V⁻¹` in `O(d)`: `⟨ℓ_1|(T − 𝟙) = ⟨R|/ψ_R`,
/// `⟨ℓ_1|L⟩ = 1`, `⟨ℓ_1|ψ⟩ = 0`. Layout `[L, R, 1..d]`.
pub(crate) fn left_jordan_row(ts: &TransferSystem, psi: &DefectiveVector) -> Result<Vec<f64>> {
    let d = ts.d();
    let band = ts.levels();
    // (T' − 𝟙)ᵀ x = −½ e_1 by the Thomas algorithm
    let diag: Vec<f64> = band.diag.iter().map(|t| t - 1.0).collect();
    let sub: Vec<f64> = band.upper.clone(); // (T'ᵀ)_{k+1,k} = T'_{k,k+1}
    let sup: Vec<f64> = band.lower.clone();
    let mut rhs = vec![0.0; d];
    rhs[0] = -0.5;
    let mut c = vec![0.0; d];
    let mut x = vec![0.0; d];
    let mut denom = diag[0];
    if denom == 0.0 {
        return Err(Error::UnitBulkEigenvalue);
    }
    x[0] = rhs[0] / denom;
    for k in 1..d {
        c[k - 1] = sup[k - 1] / denom;
        denom = diag[k] - sub[k - 1] * c[k - 1];
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::UnitBulkEigenvalue);
        }
        x[k] = (rhs[k] - sub[k - 1] * x[k - 1]) / denom;
    }
    for k in (0..d.saturating_sub(1)).rev() {
        x[k] -= c[k] * x[k + 1];
    }
    let overlap: f64 = x.iter().zip(&psi.levels).map(|(a, b)| a * b).sum();
    let mut row = Vec::with_capacity(d + 2);
    row.push(1.0);
    row.push(-overlap / psi.psi_r);
    row.extend(x);
    Ok(row)
}

/// `χ = d / (2(d+1)(1 − Δ²))`.
pub fn chi_closed_form(d: usize, delta: f64) -> f64 {
    let df = d as f64;
    df / (2.0 * (df + 1.0) * (1.0 - delta * delta))
}

/// `d²χ/dη² = d/(d+1)·(2Δ² + 1)/(1 − Δ²)²` at fixed truncation.
pub fn chi_curvature(d: usize, delta: f64) -> f64 {
    let df = d as f64;
    let g = 1.0 - delta * delta;
    df / (df + 1.0) * (2.0 * delta * delta + 1.0) / (g * g)
}

/// Second derivative by central differences with one Richardson level;
/// fails when the two step sizes disagree beyond `1e−6` relative.
pub(crate) fn second_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> Result<f64> {
    let fx = f(x);
    let central = |h: f64| (f(x + h) - 2.0 * fx + f(x - h)) / (h * h);
    let (coarse, fine) = (central(h), central(h / 2.0));
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    let relative = (extrapolated - fine).abs() / extrapolated.abs().max(1e-300);
    if relative > 1e-6 {
        return Err(Error::DerivativeNotConverged { relative });
    }
    Ok(extrapolated)
}

/// Linear-growth coefficients of `⟨L|T^n|R⟩ = χn + χ_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiCoefficients {
    pub chi: f64,
    pub chi1: f64,
    pub d: usize,
}

/// χ and χ_1 with `d = p − 1` for rational `η/π`, else [`DEFAULT_D_MAX`].
pub fn chi_coefficient(delta: f64, rational: Option<RationalEta>) -> Result<ChiCoefficients> {
    chi_coefficient_with_dmax(delta, rational, DEFAULT_D_MAX)
}

pub fn chi_coefficient_with_dmax(delta: f64, rational: Option<RationalEta>, d_max: usize) -> Result<ChiCoefficients> {
    if !(delta.abs() < 1.0) {
        return Err(Error::NotEasyPlane(delta));
    }
    let (d, eta) = match rational {
        Some(r) => {
            r.check_delta(delta)?;
            (r.truncation(), r.eta())
        }
        None => (d_max.max(1), delta.acos()),
    };
    let ts = build_transfer(d, Complex64::new(eta, 0.0))?;
    let psi = defective_vector(&ts)?;
    let row = left_jordan_row(&ts, &psi)?;
    Ok(ChiCoefficients {
        chi: chi_closed_form(d, delta),
        chi1: row[1],
        d,
    })
}

/// How ξ was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiRoute {
    /// Slope of the truncated vertex sum over a window `[n, 2n]`.
    TruncatedSlope,
    /// `G(n)/n` from the full path sum with `d = ⌊n/2⌋`.
    Exact,
    /// Left Jordan vector contracted with `D` and `ψ`.
    Jordan,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiEstimate {
    pub xi: f64,
    pub xi_times_n: f64,
    pub n: usize,
    pub d: usize,
    pub route: XiRoute,
    pub r_squared: Option<f64>,
}

/// ξ with `F_Δ^(0) = (λμ/J)²·ξ·n`.
///
/// Rational `η/π`: `ξ = (ξ_1 + ¼ d²χ/dη²)/(2(1 − Δ²))` with `ξ_1` the
/// least-squares slope of the truncated vertex sum over `m ∈ [N, 2N]`,
/// `N = max(n, 20d, ⌈40/ln(1/τ_max)⌉)` so the bulk transient has died out.
/// Irrational: `ξ(n) = G(n)/n` from the exact path sum.
pub fn xi_coefficient(delta: f64, n: usize, rational: Option<RationalEta>) -> Result<XiEstimate> {
    if !(delta.abs() < 1.0) {
        return Err(Error::NotEasyPlane(delta));
    }
    if n < 2 {
        return Err(Error::TooFewSites(n));
    }
    match rational {
        Some(r) => {
            r.check_delta(delta)?;
            let d = r.truncation();
            let ts = build_transfer(d, Complex64::new(r.eta(), 0.0))?;
            // the bulk transient decays like τ_max^m; start the window well past it
            let tau_max = jordan_decompose(&ts)?.taus.iter().fold(0.0f64, |m, t| m.max(t.abs()));
            let decay = if tau_max > 0.0 { (40.0 / -tau_max.ln()).ceil() as usize } else { 0 };
            let start = n.max(20 * d).max(decay);
            let series = PathSums::new(&ts).with_exit_term().run(2 * start)?;
            let xs: Vec<f64> = (start..=2 * start).map(|m| m as f64).collect();
            let ys: Vec<f64> = (start..=2 * start).map(|m| series.defect[m].to_f64()).collect();
            let fit = linear_fit(&xs, &ys);
            if fit.r_squared < 1.0 - 1e-9 {
                return Err(Error::SlopeNotConverged {
                    r_squared: fit.r_squared,
                });
            }
            let curvature = second_derivative(|e| chi_closed_form(d, e.cos()), r.eta(), 1e-4)?;
            let xi = (fit.slope + 0.25 * curvature) / (2.0 * (1.0 - delta * delta));
            Ok(XiEstimate {
                xi,
                xi_times_n: xi * n as f64,
                n,
                d,
                route: XiRoute::TruncatedSlope,
                r_squared: Some(fit.r_squared),
            })
        }
        None => {
            let d = (n / 2).max(1);
            let series = delta_coefficient_series(Complex64::new(delta.acos(), 0.0), n, d, false)?;
            let g = series.coefficient[n].to_f64_checked().ok_or(Error::Overflow)?;
            Ok(XiEstimate {
                xi: g / n as f64,
                xi_times_n: g,
                n,
                d,
                route: XiRoute::Exact,
                r_squared: None,
            })
        }
    }
}

/// ξ for rational `η/π` from the Jordan chain in `O(p)`:
/// `ξ_1 = χ·(⟨ℓ_1|D|ψ⟩ + ⟨d|D|d+1⟩⟨d+1|T|d⟩·⟨ℓ_1|d⟩ψ_d)`.
pub fn xi_rational_jordan(r: RationalEta) -> Result<XiEstimate> {
    let d = r.truncation();
    let delta = r.delta();
    let ts = build_transfer(d, Complex64::new(r.eta(), 0.0))?;
    let psi = defective_vector(&ts)?;
    let row = left_jordan_row(&ts, &psi)?;
    let d_psi = ts.apply_vertex(&psi.to_column());
    let bulk: f64 = row.iter().zip(&d_psi).map(|(a, b)| a * b).sum();
    let exit = ts.vertex_exit() * ts.transfer_exit() * row[d + 1] * psi.levels[d - 1];
    let chi = 1.0 / psi.psi_r;
    let xi1 = chi * (bulk + exit);
    let xi = (xi1 + 0.25 * chi_curvature(d, delta)) / (2.0 * (1.0 - delta * delta));
    Ok(XiEstimate {
        xi,
        xi_times_n: f64::NAN,
        n: 0,
        d,
        route: XiRoute::Jordan,
        r_squared: None,
    })
}

/// Spectrum of `A = 𝟙 − ½(S + Sᵀ)` (S the shift) against `1 − cos(jπ/(d+1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSpectrum {
    pub numeric: Vec<f64>,
    pub analytic: Vec<f64>,
    pub max_abs_error: f64,
}

pub fn toeplitz_eigs_check(d: usize) -> ToeplitzSpectrum {
    let mut a = DMatrix::<f64>::identity(d, d);
    for k in 0..d.saturating_sub(1) {
        a[(k, k + 1)] = -0.5;
        a[(k + 1, k)] = -0.5;
    }
    let mut numeric: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
    numeric.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
    let analytic: Vec<f64> = (1..=d).map(|j| 1.0 - (j as f64 * PI / (d as f64 + 1.0)).cos()).collect();
    let max_abs_error = numeric
        .iter()
        .zip(&analytic)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    ToeplitzSpectrum {
        numeric,
        analytic,
        max_abs_error,
    }
}

/// Regime check shared by callers that need `|Δ| ≠ 1`.
#[allow(dead_code)]
pub(crate) fn require_anisotropic(ts: &TransferSystem) -> Result<()> {
    if ts.regime() == Regime::Isotropic {
        Err(Error::UnitBulkEigenvalue)
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::eta_from_delta;
    use crate::transfer::{bracket_ltnr, LogMode};
    use proptest::prelude::*;

    fn system(d: usize, delta: f64) -> TransferSystem {
        build_transfer(d, eta_from_delta(delta)).unwrap()
    }

    #[test]
    fn defective_vector_examples() {
        let psi = defective_vector(&system(1, 0.0)).unwrap();
        assert!((psi.psi_r - 4.0).abs() < 1e-15);
        assert_eq!(psi.levels, vec![2.0]);
        for d in 1..=20 {
            let ts = system(d, 0.4);
            let psi = defective_vector(&ts).unwrap();
            assert_eq!(psi.levels[0], 2.0);
            let col = psi.to_column();
            let mut r = ts.apply(&col);
            for (a, b) in r.iter_mut().zip(&col) {
                *a -= b;
            }
            r[0] -= 1.0;
            assert!(r.iter().all(|x| x.abs() < 1e-10), "d={d}");
        }
        assert_eq!(defective_vector(&system(3, 0.0)), Err(Error::DegenerateLevel(2)));
    }

    #[test]
    fn jordan_reconstruction() {
        for delta in [0.3, 0.7] {
            for d in [1usize, 2, 5, 12, 30] {
                let ts = system(d, delta);
                let jd = jordan_decompose(&ts).unwrap();
                assert!(jd.similarity_residual(&ts) < 1e-8, "Δ={delta} d={d}");
                assert!(jd.taus.iter().all(|t| t.abs() < 1.0));
                assert!(jd.taus.windows(2).all(|w| w[0].abs() >= w[1].abs()));
                let t = ts.to_dense();
                let mut tk = DMatrix::<f64>::identity(d + 2, d + 2);
                for k in 1..=20u32 {
                    tk = &t * tk;
                    if [1, 5, 20].contains(&k) {
                        let err = (jd.power(k) - &tk).amax();
                        assert!(err < 1e-8 * tk.amax());
                    }
                }
            }
        }
        let jd = jordan_decompose(&system(6, 2.0)).unwrap();
        assert!(jd.taus.iter().all(|t| t.abs() > 1.0));
        let jd = jordan_decompose(&system(1, 0.0)).unwrap();
        assert!(jd.taus.len() == 1 && jd.taus[0].abs() < 1e-15);
    }

    #[test]
    fn unit_bulk_eigenvalue_is_reported() {
        // η = π/3 with d ≥ 3 reaches level 3 where cos²(π) = 1
        let ts = build_transfer(4, Complex64::new(PI / 3.0, 0.0)).unwrap();
        assert_eq!(jordan_decompose(&ts), Err(Error::UnitBulkEigenvalue));
    }

    #[test]
    fn left_row_matches_inverse() {
        for (d, delta) in [(4usize, 0.35), (9, -0.6), (1, 0.0), (7, 1.8)] {
            let ts = system(d, delta);
            let jd = jordan_decompose(&ts).unwrap();
            let row = left_jordan_row(&ts, &jd.psi).unwrap();
            for (k, x) in row.iter().enumerate() {
                assert!((x - jd.v_inv[(0, k)]).abs() < 1e-9 * (1.0 + x.abs()), "d={d} k={k}");
            }
            assert!((row[2] - 2.0 / jd.psi.psi_r).abs() < 1e-12 * row[2].abs());
        }
    }

    #[test]
    fn chi_examples() {
        let half = RationalEta::new(2, 1).unwrap();
        let c = chi_coefficient(0.0, Some(half)).unwrap();
        assert!((c.chi - 0.25).abs() < 1e-15);
        let third = RationalEta::new(3, 1).unwrap();
        let c = chi_coefficient(0.5, Some(third)).unwrap();
        assert!((c.chi - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(c.d, 2);
        assert_eq!(
            chi_coefficient(0.4, Some(third)),
            Err(Error::InconsistentRational { p: 3, q: 1 })
        );
        assert_eq!(RationalEta::new(4, 2), Err(Error::InconsistentRational { p: 4, q: 2 }));
        assert_eq!(chi_coefficient(1.2, None), Err(Error::NotEasyPlane(1.2)));
    }

    #[test]
    fn chi_slope_and_intercept_match_banded_powers() {
        for (p, q) in [(2u32, 1u32), (3, 1), (4, 1), (7, 2)] {
            let r = RationalEta::new(p, q).unwrap();
            let c = chi_coefficient(r.delta(), Some(r)).unwrap();
            let e = Complex64::new(r.eta(), 0.0);
            // far beyond the transient the bracket is exactly χn + χ_1
            let n = 4000;
            let b = bracket_ltnr(n, e, c.d, LogMode::Off).unwrap().to_f64();
            assert!((b - (c.chi * n as f64 + c.chi1)).abs() < 1e-9 * b, "p={p}");
        }
    }

    #[test]
    fn chi_curvature_matches_differences() {
        for (d, delta) in [(2usize, 0.5), (6, 0.1), (1, 0.0)] {
            let fd = second_derivative(|e| chi_closed_form(d, e.cos()), delta.acos(), 1e-4).unwrap();
            let exact = chi_curvature(d, delta);
            assert!((fd - exact).abs() < 1e-6 * exact);
        }
    }

    #[test]
    fn xi_routes_agree() {
        for (p, q) in [(3u32, 1u32), (5, 2), (7, 3), (11, 4)] {
            let r = RationalEta::new(p, q).unwrap();
            let slope = xi_coefficient(r.delta(), 800, Some(r)).unwrap();
            let jordan = xi_rational_jordan(r).unwrap();
            assert!((slope.xi - jordan.xi).abs() < 1e-6 * jordan.xi.abs(), "{p}/{q}: {} vs {}", slope.xi, jordan.xi);
        }
    }

    #[test]
    fn xi_irrational_equals_exact_coefficient() {
        let x = xi_coefficient(0.1, 50, None).unwrap();
        let series = delta_coefficient_series(eta_from_delta(0.1), 50, 25, false).unwrap();
        assert!((x.xi_times_n - series.coefficient[50].to_f64()).abs() < 1e-12 * x.xi_times_n);
    }

    #[test]
    fn toeplitz_examples() {
        assert!((toeplitz_eigs_check(1).numeric[0] - 1.0).abs() < 1e-15);
        let t2 = toeplitz_eigs_check(2);
        assert!((t2.numeric[0] - 0.5).abs() < 1e-15 && (t2.numeric[1] - 1.5).abs() < 1e-15);
        assert!(toeplitz_eigs_check(50).max_abs_error < 1e-12);
    }

    proptest! {
        #[test]
        fn chi_positive_and_bounded(delta in -0.99f64..0.99, d in 1usize..200) {
            let c = chi_closed_form(d, delta);
            prop_assert!(c > 0.0);
            let scaled = c * (1.0 - delta * delta);
            prop_assert!(scaled > 0.25 - 1e-12 && scaled < 0.5);
        }

        #[test]
        fn defective_residual(delta in -0.95f64..0.95, d in 1usize..25) {
            let ts = system(d, delta);
            if let Ok(psi) = defective_vector(&ts) {
                let col = psi.to_column();
                let tv = ts.apply(&col);
                let scale = col.iter().fold(1.0f64, |m, x| m.max(x.abs()));
                for (k, (a, b)) in tv.iter().zip(&col).enumerate() {
                    let target = if k == 0 { 1.0 } else { 0.0 };
                    prop_assert!((a - b - target).abs() < 1e-10 * scale);
                }
            }
        }
    }
}
