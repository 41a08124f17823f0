//! Symmetric logarithmic derivatives and quantum Fisher information.

use alloc::vec::Vec;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::lindblad::{build_liouvillian, ness_mu1, ness_perturbative, steady_state_nullspace};
use crate::logscalar::LogScalar;
use crate::model::{frobenius, ChainParams, DenseOperator, Parameter};
use crate::CMatrix;

/// Pairs with `p_k + p_l` below this fraction of the largest weight are
/// outside the support.
pub const SUPPORT_TOLERANCE: f64 = 1e-12;
/// Off-support derivative components above this magnitude are reported
/// instead of dropped.
pub const OFF_SUPPORT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ExactDense,
    LeadingOrder,
}

/// Growth coefficients attached to leading-order estimates.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Coefficients {
    pub chi: Option<f64>,
    pub xi: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherEstimate {
    pub value: LogScalar,
    pub method: Method,
    pub parameter: Parameter,
    pub params: ChainParams,
    pub coefficients: Coefficients,
}

/// `ρ` and `dρ` expressed in the eigenbasis of `ρ`.
struct Eigenframe {
    weights: Vec<f64>,
    basis: CMatrix,
    cutoff: f64,
}

impl Eigenframe {
    fn new(rho: &DenseOperator) -> Result<Self> {
        if !rho.all_finite() {
            return Err(Error::Eigendecomposition);
        }
        let eig = SymmetricEigen::try_new(rho.matrix().clone(), 1e-15, 0).ok_or(Error::Eigendecomposition)?;
        let weights: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let top = weights.iter().fold(0.0f64, |m, &p| m.max(p));
        Ok(Eigenframe {
            weights,
            basis: eig.eigenvectors,
            cutoff: SUPPORT_TOLERANCE * top,
        })
    }

    /// `U† dρ U` with the off-support check applied.
    fn rotate(&self, drho: &DenseOperator) -> Result<CMatrix> {
        if drho.dim() != self.basis.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.nrows(),
                found: drho.dim(),
            });
        }
        let d = self.basis.adjoint() * drho.matrix() * &self.basis;
        for k in 0..d.nrows() {
            for l in 0..d.ncols() {
                if self.weights[k] + self.weights[l] < self.cutoff && d[(k, l)].norm() > OFF_SUPPORT_TOLERANCE {
                    return Err(Error::RankPathology {
                        magnitude: d[(k, l)].norm(),
                    });
                }
            }
        }
        Ok(d)
    }

    fn supported(&self, k: usize, l: usize) -> Option<f64> {
        let s = self.weights[k] + self.weights[l];
        (s >= self.cutoff && s > 0.0).then_some(s)
    }
}

/// `L` with `dρ = ½(Lρ + ρL)`: `L_kl = 2 dρ_kl/(p_k + p_l)` in the eigenbasis of `ρ`.
pub fn sld(rho: &DenseOperator, drho: &DenseOperator) -> Result<DenseOperator> {
    let frame = Eigenframe::new(rho)?;
    let mut d = frame.rotate(drho)?;
    for k in 0..d.nrows() {
        for l in 0..d.ncols() {
            d[(k, l)] = match frame.supported(k, l) {
                Some(s) => d[(k, l)] * (2.0 / s),
                None => Complex64::new(0.0, 0.0),
            };
        }
    }
    Ok(DenseOperator::new(&frame.basis * d * frame.basis.adjoint())?.hermitian_part())
}

/// `F = Tr(L²ρ) = 2 Σ |dρ_kl|²/(p_k + p_l)`.
pub fn qfi_dense(rho: &DenseOperator, drho: &DenseOperator) -> Result<f64> {
    fisher_cross(rho, drho, drho)
}

/// `F_xy = ½ Tr(ρ{L_x, L_y}) = 2 Σ Re(dρˣ_kl conj(dρʸ_kl))/(p_k + p_l)`.
pub fn fisher_cross(rho: &DenseOperator, drho_x: &DenseOperator, drho_y: &DenseOperator) -> Result<f64> {
    let frame = Eigenframe::new(rho)?;
    let dx = frame.rotate(drho_x)?;
    let dy = frame.rotate(drho_y)?;
    let mut total = 0.0;
    for k in 0..dx.nrows() {
        for l in 0..dx.ncols() {
            if let Some(s) = frame.supported(k, l) {
                total += 2.0 * (dx[(k, l)] * dy[(k, l)].conj()).re / s;
            }
        }
    }
    Ok(total)
}

/// How the steady state is produced at each finite-difference point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateBuilder {
    /// Null space of the dense Liouvillian.
    Oracle,
    /// Second-order perturbative state.
    Perturbative,
    /// `μ = 1` matrix product state with `ε = ratio·λ/J`, so the derivative
    /// follows the calibrated `ε(λ, J)` map.
    Mu1 { epsilon_ratio: f64 },
}

impl StateBuilder {
    pub fn build(&self, params: &ChainParams) -> Result<DenseOperator> {
        match *self {
            StateBuilder::Oracle => steady_state_nullspace(&build_liouvillian(params, false)?),
            StateBuilder::Perturbative => Ok(ness_perturbative(params)?.state),
            StateBuilder::Mu1 { epsilon_ratio } => {
                ness_mu1(params, epsilon_ratio * params.lambda() / params.j_coupling())
            }
        }
    }
}

/// `dρ/dx` by central differences with one Richardson level,
/// `h = 1e−4·max(|x|, 1)`. The estimates from `(h, h/2)` and `(h/2, h/4)`
/// must agree to `1e−6` relative.
pub fn state_derivative(params: &ChainParams, parameter: Parameter, builder: StateBuilder) -> Result<DenseOperator> {
    if matches!(builder, StateBuilder::Mu1 { .. }) && parameter == Parameter::Mu {
        return Err(Error::UnsupportedParameter(parameter));
    }
    let x = params.get(parameter);
    let h = 1e-4 * x.abs().max(1.0);
    let at = |v: f64| -> Result<DenseOperator> {
        let shifted = params.with(parameter, v).map_err(|_| Error::StepOutOfDomain(parameter))?;
        builder.build(&shifted)
    };
    let central = |step: f64| -> Result<DenseOperator> {
        Ok((&at(x + step)? - &at(x - step)?).scale_real(0.5 / step))
    };
    let richardson = |coarse: &DenseOperator, fine: &DenseOperator| (&fine.scale_real(4.0) - coarse).scale_real(1.0 / 3.0);
    let (c1, c2, c3) = (central(h)?, central(h / 2.0)?, central(h / 4.0)?);
    let first = richardson(&c1, &c2);
    let extrapolated = richardson(&c2, &c3);
    let size = frobenius(extrapolated.matrix());
    let gap = extrapolated.hs_distance(&first);
    if size == 0.0 && gap == 0.0 {
        return Ok(extrapolated);
    }
    let relative = gap / size;
    if !(relative <= 1e-6) {
        return Err(Error::DerivativeNotConverged { relative });
    }
    Ok(extrapolated)
}

/// Exact QFI of the dense steady state with respect to one parameter.
pub fn qfi_parametric(params: &ChainParams, parameter: Parameter, builder: StateBuilder) -> Result<FisherEstimate> {
    let rho = builder.build(params)?;
    let drho = state_derivative(params, parameter, builder)?;
    let f = qfi_dense(&rho, &drho)?;
    Ok(FisherEstimate {
        value: LogScalar::from_f64(f.max(0.0)),
        method: Method::ExactDense,
        parameter,
        params: *params,
        coefficients: Coefficients::default(),
    })
}

/// `(Tr(ζ²ρ) − Tr(ζρ)²)/m`.
pub fn optimal_estimator_variance(rho: &DenseOperator, zeta: &DenseOperator, m: usize) -> Result<f64> {
    if rho.dim() != zeta.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: zeta.dim(),
        });
    }
    let zr = zeta * rho;
    let second = (zeta * &zr).trace().re;
    let first = zr.trace().re;
    Ok((second - first * first) / m.max(1) as f64)
}

/// `1/(x·sqrt(m·F))`, evaluated in the log domain.
pub fn relative_error(x_value: f64, fisher: &FisherEstimate, m: usize) -> Result<f64> {
    if x_value == 0.0 {
        return Err(Error::ZeroParameter);
    }
    if fisher.value.sign() <= 0 {
        return Err(Error::ZeroFisher);
    }
    let ln = -x_value.abs().ln() - 0.5 * ((m.max(1) as f64).ln() + fisher.value.ln_abs());
    Ok(ln.exp())
}
