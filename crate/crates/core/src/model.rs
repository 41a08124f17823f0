//! Chain parameters and dense spin operators on the `2^n` Hilbert space.
//!
//! Basis convention: `σ^z = diag(1, -1)` so `|↑⟩` is index 0, and
//! `σ^+ = |↑⟩⟨↓|`. Site 1 is the most significant qubit of the Kronecker
//! product.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::ops::{Add, Deref, Mul, Sub};

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::CMatrix;

/// Largest chain handled by dense `2^n`-dimensional operators.
pub const DENSE_MAX_SITES: usize = 12;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Parameters that the Fisher information can be taken with respect to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parameter {
    J,
    Delta,
    Lambda,
    Mu,
}

impl Parameter {
    pub fn label(&self) -> &'static str {
        match self {
            Parameter::J => "J",
            Parameter::Delta => "Delta",
            Parameter::Lambda => "lambda",
            Parameter::Mu => "mu",
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Anisotropy angle with `cos η = Δ`.
///
/// Real for `|Δ| ≤ 1`, `i·arccosh Δ` for `Δ > 1` and `π + i·arccosh(-Δ)`
/// for `Δ < -1`.
pub fn eta_from_delta(delta: f64) -> Complex64 {
    if delta > 1.0 {
        Complex64::new(0.0, delta.acosh())
    } else if delta < -1.0 {
        Complex64::new(PI, (-delta).acosh())
    } else {
        Complex64::new(delta.acos(), 0.0)
    }
}

/// Physical parameters of the driven chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    n: usize,
    j_coupling: f64,
    delta: f64,
    lambda: f64,
    mu: f64,
    omega: f64,
    eta: Complex64,
}

impl ChainParams {
    pub fn new(n: usize, j_coupling: f64, delta: f64, lambda: f64, mu: f64, omega: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewSites(n));
        }
        for (name, value) in [("Delta", delta), ("Omega", omega), ("mu", mu)] {
            if !value.is_finite() {
                return Err(Error::NotFinite { name, value });
            }
        }
        if !(j_coupling.is_finite() && j_coupling > 0.0) {
            return Err(Error::InvalidCoupling(j_coupling));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidRate(lambda));
        }
        if !(-1.0..=1.0).contains(&mu) {
            return Err(Error::DrivingOutOfRange(mu));
        }
        Ok(ChainParams {
            n,
            j_coupling,
            delta,
            lambda,
            mu,
            omega,
            eta: eta_from_delta(delta),
        })
    }

    /// `J = 1`, `Ω = 0` with the given length, anisotropy, rate and driving.
    pub fn unit_coupling(n: usize, delta: f64, lambda: f64, mu: f64) -> Result<Self> {
        Self::new(n, 1.0, delta, lambda, mu, 0.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn j_coupling(&self) -> f64 {
        self.j_coupling
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    /// `λ/J`, the perturbative expansion parameter.
    pub fn coupling_ratio(&self) -> f64 {
        self.lambda / self.j_coupling
    }

    pub fn get(&self, p: Parameter) -> f64 {
        match p {
            Parameter::J => self.j_coupling,
            Parameter::Delta => self.delta,
            Parameter::Lambda => self.lambda,
            Parameter::Mu => self.mu,
        }
    }

    /// Copy with one parameter replaced, re-validated.
    pub fn with(&self, p: Parameter, value: f64) -> Result<Self> {
        let mut q = *self;
        match p {
            Parameter::J => q.j_coupling = value,
            Parameter::Delta => q.delta = value,
            Parameter::Lambda => q.lambda = value,
            Parameter::Mu => q.mu = value,
        }
        Self::new(q.n, q.j_coupling, q.delta, q.lambda, q.mu, q.omega)
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(n, self.j_coupling, self.delta, self.lambda, self.mu, self.omega)
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.n, self.j_coupling, self.delta, self.lambda, self.mu, omega)
    }
}

pub(crate) fn check_dense(n: usize) -> Result<()> {
    if n > DENSE_MAX_SITES {
        Err(Error::DimensionCap {
            n,
            cap: DENSE_MAX_SITES,
        })
    } else {
        Ok(())
    }
}

/// Complex square matrix acting on a spin Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    entries: CMatrix,
}

impl DenseOperator {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        Ok(DenseOperator { entries })
    }

    pub(crate) fn from_square(entries: CMatrix) -> Self {
        debug_assert!(entries.is_square());
        DenseOperator { entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_square(CMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_square(CMatrix::zeros(dim, dim))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = CMatrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        Self::from_square(m)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self::from_square(self.entries.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self::from_square(self.entries.transpose())
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_square(&self.entries * c)
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(Complex64::new(x, 0.0))
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &DenseOperator) -> Self {
        Self::from_square(&self.entries * &other.entries - &other.entries * &self.entries)
    }

    /// Largest entry of `self − self†` in modulus.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(ρ + ρ†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_square((&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0))
    }

    pub fn all_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Kronecker product with `self` as the more significant factor.
    pub fn kron(&self, other: &DenseOperator) -> Self {
        Self::from_square(self.entries.kronecker(&other.entries))
    }

    /// `‖self − other‖_HS`.
    pub fn hs_distance(&self, other: &DenseOperator) -> f64 {
        frobenius(&(&self.entries - &other.entries))
    }
}

impl Deref for DenseOperator {
    type Target = CMatrix;
    fn deref(&self) -> &CMatrix {
        &self.entries
    }
}

impl<'a> Add<&'a DenseOperator> for &'a DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator::from_square(&self.entries + &rhs.entries)
    }
}

impl<'a> Sub<&'a DenseOperator> for &'a DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator::from_square(&self.entries - &rhs.entries)
    }
}

impl<'a> Mul<&'a DenseOperator> for &'a DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator::from_square(&self.entries * &rhs.entries)
    }
}

pub(crate) fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Single-site operator labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

impl Axis {
    pub fn from_label(c: char) -> Result<Self> {
        match c {
            'x' | 'X' => Ok(Axis::X),
            'y' | 'Y' => Ok(Axis::Y),
            'z' | 'Z' => Ok(Axis::Z),
            '+' => Ok(Axis::Plus),
            '-' | '−' => Ok(Axis::Minus),
            other => Err(Error::UnknownAxis(other)),
        }
    }
}

/// 2×2 Pauli matrix; `σ^± = (σ^x ± iσ^y)/2`.
pub fn pauli(axis: Axis) -> DenseOperator {
    let i = Complex64::new(0.0, 1.0);
    let entries = match axis {
        Axis::X => [C0, C1, C1, C0],
        Axis::Y => [C0, -i, i, C0],
        Axis::Z => [C1, C0, C0, -C1],
        Axis::Plus => [C0, C1, C0, C0],
        Axis::Minus => [C0, C0, C1, C0],
    };
    DenseOperator::from_square(CMatrix::from_row_slice(2, 2, &entries))
}

/// `𝟙 ⊗ … ⊗ op ⊗ … ⊗ 𝟙` with `op` at `site` (1-based).
pub fn embed(n: usize, site: usize, op: &DenseOperator) -> Result<DenseOperator> {
    if op.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: op.dim(),
        });
    }
    if site == 0 || site > n {
        return Err(Error::SiteOutOfRange { site, n });
    }
    check_dense(n)?;
    let dim = 1usize << n;
    let shift = n - site;
    let mut m = CMatrix::zeros(dim, dim);
    for row in 0..dim {
        let a = (row >> shift) & 1;
        for b in 0..2 {
            let col = (row & !(1 << shift)) | (b << shift);
            m[(row, col)] = op[(a, b)];
        }
    }
    Ok(DenseOperator::from_square(m))
}

fn spin_z(state: usize, n: usize, site: usize) -> f64 {
    if (state >> (n - site)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `H = Σ_j (σ^x_j σ^x_{j+1} + σ^y_j σ^y_{j+1} + Δ σ^z_j σ^z_{j+1})`.
pub fn hamiltonian_xxz(params: &ChainParams) -> Result<DenseOperator> {
    let n = params.n();
    check_dense(n)?;
    let dim = 1usize << n;
    let mut h = CMatrix::zeros(dim, dim);
    for state in 0..dim {
        let mut diag = 0.0;
        for j in 1..n {
            let (a, b) = (spin_z(state, n, j), spin_z(state, n, j + 1));
            diag += params.delta() * a * b;
            if a != b {
                // σ^xσ^x + σ^yσ^y = 2(σ^+σ^- + σ^-σ^+) swaps antiparallel neighbours.
                let flipped = state ^ (0b11 << (n - j - 1));
                h[(flipped, state)] += Complex64::new(2.0, 0.0);
            }
        }
        h[(state, state)] += Complex64::new(diag, 0.0);
    }
    Ok(DenseOperator::from_square(h))
}

/// `M_z = Σ_j σ^z_j`.
pub fn magnetization_z(n: usize) -> Result<DenseOperator> {
    check_dense(n)?;
    let diag: Vec<f64> = (0..1usize << n)
        .map(|s| (1..=n).map(|j| spin_z(s, n, j)).sum())
        .collect();
    Ok(DenseOperator::from_diagonal(&diag))
}

/// Boundary jump operators `[L_1, L_2, L_3, L_4]`:
/// `L_{1,2} = sqrt((1±μ)/2) σ_1^±`, `L_{3,4} = sqrt((1∓μ)/2) σ_n^±`.
pub fn lindblad_jump_ops(params: &ChainParams) -> Result<[DenseOperator; 4]> {
    let (n, mu) = (params.n(), params.mu());
    if !(-1.0..=1.0).contains(&mu) {
        return Err(Error::DrivingOutOfRange(mu));
    }
    let up = ((1.0 + mu) / 2.0).sqrt();
    let down = ((1.0 - mu) / 2.0).sqrt();
    let plus = pauli(Axis::Plus);
    let minus = pauli(Axis::Minus);
    Ok([
        embed(n, 1, &plus)?.scale_real(up),
        embed(n, 1, &minus)?.scale_real(down),
        embed(n, n, &plus)?.scale_real(down),
        embed(n, n, &minus)?.scale_real(up),
    ])
}

/// Hilbert–Schmidt norm `sqrt(Tr(O O†))`.
pub fn hs_norm(op: &DenseOperator) -> f64 {
    frobenius(op.matrix())
}
