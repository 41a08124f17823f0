use thiserror::Error;

use crate::model::Parameter;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("chain length n = {0} is below the minimum of 2")]
    TooFewSites(usize),
    #[error("coupling J = {0} must be positive and finite")]
    InvalidCoupling(f64),
    #[error("dissipation rate lambda = {0} must be non-negative and finite")]
    InvalidRate(f64),
    #[error("driving mu = {0} lies outside [-1, 1]")]
    DrivingOutOfRange(f64),
    #[error("parameter {name} = {value} is not finite")]
    NotFinite { name: &'static str, value: f64 },
    #[error("unknown Pauli axis label {0:?}")]
    UnknownAxis(char),
    #[error("site {site} outside 1..={n}")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("{n} sites exceed the dense cap of {cap}")]
    DimensionCap { n: usize, cap: usize },
    #[error("operator dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eta is isotropic (sin eta = 0); the B-family is undefined")]
    IsotropicEta,
    #[error("mu = 0 makes the validity condition vacuous")]
    ZeroDriving,
    #[error("mu = {0} but the non-perturbative state requires mu = 1")]
    RequiresFullDriving(f64),
    #[error("lambda = 0 leaves the steady state non-unique")]
    NoDissipation,
    #[error("steady state not unique: pivot ratio {pivot_ratio:e}")]
    NonUniqueSteadyState { pivot_ratio: f64 },
    #[error("no epsilon reached residual below 1e-8 (best epsilon {epsilon}, residual {residual:e})")]
    CalibrationFailed { epsilon: f64, residual: f64 },
    #[error("off-support derivative component {magnitude:e} exceeds tolerance")]
    RankPathology { magnitude: f64 },
    #[error("density matrix eigendecomposition failed")]
    Eigendecomposition,
    #[error("finite-difference estimates disagree by {relative:e} (relative)")]
    DerivativeNotConverged { relative: f64 },
    #[error("parameter {0:?} leaves the valid domain under the finite-difference step")]
    StepOutOfDomain(Parameter),
    #[error("derivative with respect to {0:?} is not available for this state builder")]
    UnsupportedParameter(Parameter),
    #[error("the Delta Fisher information needs f0_delta, not f0_x")]
    DeltaRouting,
    #[error("|Delta| = 1 makes the prefactor 1/(1 - Delta^2) singular")]
    IsotropicPrefactor,
    #[error("|Delta| = {0} outside the easy-plane interval (-1, 1)")]
    NotEasyPlane(f64),
    #[error("|Delta| = {0} is not in the easy-axis regime")]
    NotEasyAxis(f64),
    #[error("series regime violated: |eta| n = {0} is not below 0.2")]
    SeriesRegime(f64),
    #[error("truncation index d must be at least 1")]
    EmptyTruncation,
    #[error("transfer eigenvalue equal to 1 in the bulk block")]
    UnitBulkEigenvalue,
    #[error("1 - T_kk vanishes at level {0}")]
    DegenerateLevel(usize),
    #[error("singular similarity matrix in the Jordan decomposition")]
    SingularSimilarity,
    #[error("rational eta q/p = {q}/{p} is invalid or inconsistent with Delta")]
    InconsistentRational { p: u32, q: u32 },
    #[error("chain length {0} is odd; the easy-axis path bound needs even n")]
    OddLength(usize),
    #[error("Fisher information is zero; the parameter cannot be estimated")]
    ZeroFisher,
    #[error("parameter value is zero; relative error undefined")]
    ZeroParameter,
    #[error("slope window not converged: R^2 = {r_squared}")]
    SlopeNotConverged { r_squared: f64 },
    #[error("linear-domain overflow in banded product")]
    Overflow,
    #[error("invalid window [{start}, {end}]")]
    InvalidWindow { start: usize, end: usize },
}
