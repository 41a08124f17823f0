//! Auxiliary-space matrices of the two matrix product operators and their
//! contraction to dense operators.
//!
//! A-family basis layout: `[L, R, 1..⌊n/2⌋]`. B-family: `[0..⌊n/2⌋]`.
//! The product `⟨left|A_{s_1}⋯A_{s_n}|right⟩` multiplies `σ^{s_1}⊗⋯⊗σ^{s_n}`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::logscalar::LogScalar;
use crate::model::{check_dense, DenseOperator};
use crate::transfer::{bracket_ltnr, LogMode};
use crate::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    A,
    B,
}

/// Local Pauli factor attached to an auxiliary step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Zero,
    Plus,
    Minus,
}

/// Label of an auxiliary basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxLabel {
    L,
    R,
    Level(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuxMatrices {
    family: Family,
    levels: usize,
    a0: CMatrix,
    a_plus: CMatrix,
    a_minus: CMatrix,
}

impl AuxMatrices {
    fn zeros(family: Family, levels: usize) -> Self {
        let dim = match family {
            Family::A => levels + 2,
            Family::B => levels + 1,
        };
        AuxMatrices {
            family,
            levels,
            a0: CMatrix::zeros(dim, dim),
            a_plus: CMatrix::zeros(dim, dim),
            a_minus: CMatrix::zeros(dim, dim),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dim_aux(&self) -> usize {
        self.a0.nrows()
    }

    /// Highest level index kept.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn a0(&self) -> &CMatrix {
        &self.a0
    }

    pub fn a_plus(&self) -> &CMatrix {
        &self.a_plus
    }

    pub fn a_minus(&self) -> &CMatrix {
        &self.a_minus
    }

    pub fn matrix(&self, step: Step) -> &CMatrix {
        match step {
            Step::Zero => &self.a0,
            Step::Plus => &self.a_plus,
            Step::Minus => &self.a_minus,
        }
    }

    pub fn boundary_left(&self) -> AuxLabel {
        match self.family {
            Family::A => AuxLabel::L,
            Family::B => AuxLabel::Level(0),
        }
    }

    pub fn boundary_right(&self) -> AuxLabel {
        match self.family {
            Family::A => AuxLabel::R,
            Family::B => AuxLabel::Level(0),
        }
    }

    /// Row/column index of a label, `None` if it is not in this basis.
    pub fn index_of(&self, label: AuxLabel) -> Option<usize> {
        match (self.family, label) {
            (Family::A, AuxLabel::L) => Some(0),
            (Family::A, AuxLabel::R) => Some(1),
            (Family::A, AuxLabel::Level(k)) if (1..=self.levels).contains(&k) => Some(k + 1),
            (Family::B, AuxLabel::Level(k)) if k <= self.levels => Some(k),
            _ => None,
        }
    }

    fn at(&self, step: Step, row: AuxLabel, col: AuxLabel) -> Complex64 {
        match (self.index_of(row), self.index_of(col)) {
            (Some(r), Some(c)) => self.matrix(step)[(r, c)],
            _ => Complex64::zero(),
        }
    }

    /// `⟨row|A_step|col⟩` by label; zero outside the basis.
    pub fn entry(&self, step: Step, row: AuxLabel, col: AuxLabel) -> Complex64 {
        self.at(step, row, col)
    }
}

fn sin_c(z: Complex64) -> Complex64 {
    z.sin()
}

/// A-family matrices with `⌊n/2⌋` levels.
pub fn build_aux_a(n: usize, eta: Complex64) -> Result<AuxMatrices> {
    if n < 2 {
        return Err(Error::TooFewSites(n));
    }
    Ok(build_aux_a_levels(n / 2, eta))
}

/// A-family matrices with an explicit number of levels; terms pointing
/// past the top level are dropped.
pub fn build_aux_a_levels(levels: usize, eta: Complex64) -> AuxMatrices {
    let mut aux = AuxMatrices::zeros(Family::A, levels);
    let one = Complex64::new(1.0, 0.0);
    aux.a0[(0, 0)] = one;
    aux.a0[(1, 1)] = one;
    for k in 1..=levels {
        let kf = k as f64;
        aux.a0[(k + 1, k + 1)] = (eta * kf).cos();
        if k < levels {
            aux.a_plus[(k + 2, k + 1)] = -sin_c(eta * kf);
            aux.a_minus[(k + 1, k + 2)] = sin_c(eta * (kf + 1.0));
        }
    }
    if levels >= 1 {
        aux.a_plus[(2, 1)] = one;
        aux.a_minus[(0, 2)] = one;
    }
    aux
}

fn check_anisotropic(eta: Complex64) -> Result<()> {
    if eta.sin().norm() < 1e-14 {
        Err(Error::IsotropicEta)
    } else {
        Ok(())
    }
}

/// B-family matrices on `|0⟩..|⌊n/2⌋⟩`.
pub fn build_aux_b(n: usize, eta: Complex64, s: Complex64) -> Result<AuxMatrices> {
    if n < 2 {
        return Err(Error::TooFewSites(n));
    }
    check_anisotropic(eta)?;
    let levels = n / 2;
    let mut aux = AuxMatrices::zeros(Family::B, levels);
    for k in 0..=levels {
        let kf = k as f64;
        aux.a0[(k, k)] = sin_c(eta * (s - kf));
        if k < levels {
            aux.a_plus[(k, k + 1)] = sin_c(eta * (kf - s * 2.0));
            aux.a_minus[(k + 1, k)] = sin_c(eta * (kf + 1.0));
        }
    }
    Ok(aux)
}

/// `s` with `cot(sη) = ε/(4i sin η)` on the branch `sη = π/2 − arctan(ε/(4i sin η))`,
/// continuous in `ε` from `sη = π/2`.
pub fn solve_s(epsilon: f64, eta: Complex64) -> Result<Complex64> {
    check_anisotropic(eta)?;
    if !epsilon.is_finite() {
        return Err(Error::NotFinite {
            name: "epsilon",
            value: epsilon,
        });
    }
    let c = Complex64::new(epsilon, 0.0) / (Complex64::new(0.0, 4.0) * eta.sin());
    Ok((Complex64::new(FRAC_PI_2, 0.0) - c.atan()) / eta)
}

/// Contracts the MPO to a dense `2^n × 2^n` operator.
///
/// Sweeps from the last site to the first carrying, for every auxiliary
/// index `a`, the partial operator `Σ ⟨a|A_{s_j}⋯A_{s_n}|right⟩ σ^{s_j}⊗⋯⊗σ^{s_n}`.
/// Indices that cannot reach the left boundary in the remaining steps are
/// skipped.
pub fn contract_to_dense(aux: &AuxMatrices, n: usize) -> Result<DenseOperator> {
    check_dense(n)?;
    if n < 1 {
        return Err(Error::TooFewSites(n));
    }
    let dim = aux.dim_aux();
    let left = aux.index_of(aux.boundary_left()).ok_or(Error::EmptyTruncation)?;
    let right = aux.index_of(aux.boundary_right()).ok_or(Error::EmptyTruncation)?;
    let steps = [Step::Zero, Step::Plus, Step::Minus];

    // steps needed from the left boundary to reach each index
    let mut dist = vec![usize::MAX; dim];
    dist[left] = 0;
    let mut frontier = vec![left];
    while let Some(a) = frontier.pop() {
        for step in steps {
            let m = aux.matrix(step);
            for b in 0..dim {
                if m[(a, b)] != Complex64::zero() && dist[b] > dist[a] + 1 {
                    dist[b] = dist[a] + 1;
                    frontier.push(b);
                }
            }
        }
    }

    let mut partial: Vec<Option<CMatrix>> = vec![None; dim];
    partial[right] = Some(CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)));
    for site in (1..=n).rev() {
        let sub = 1usize << (n - site);
        let mut next: Vec<Option<CMatrix>> = vec![None; dim];
        for a in 0..dim {
            if dist[a] > site - 1 {
                continue;
            }
            let mut block: Option<CMatrix> = None;
            for (step, (r0, c0)) in [(Step::Zero, (0, 0)), (Step::Plus, (0, 1)), (Step::Minus, (1, 0))] {
                let m = aux.matrix(step);
                for b in 0..dim {
                    let coeff = m[(a, b)];
                    let Some(p) = partial[b].as_ref() else { continue };
                    if coeff == Complex64::zero() {
                        continue;
                    }
                    let out = block.get_or_insert_with(|| CMatrix::zeros(2 * sub, 2 * sub));
                    let mut view = out.view_mut((r0 * sub, c0 * sub), (sub, sub));
                    view.zip_apply(p, |x, y| *x += coeff * y);
                    if step == Step::Zero {
                        let mut view = out.view_mut((sub, sub), (sub, sub));
                        view.zip_apply(p, |x, y| *x += coeff * y);
                    }
                }
            }
            next[a] = block;
        }
        partial = next;
    }
    let full = 1usize << n;
    Ok(DenseOperator::from_square(
        partial[left].take().unwrap_or_else(|| CMatrix::zeros(full, full)),
    ))
}

/// `‖Z‖²_HS = 2^n ⟨L|T^n|R⟩`.
pub fn hs_norm_sq_via_transfer(n: usize, eta: Complex64) -> Result<LogScalar> {
    let bracket = bracket_ltnr(n, eta, (n / 2).max(1), LogMode::Auto)?;
    Ok(bracket * LogScalar::from_parts(1, n as f64 * core::f64::consts::LN_2))
}

/// Largest `λ/J` for which the perturbative expansion is trusted:
/// `sqrt(2^{n+1})/(|μ|·‖Z‖_HS)`.
pub fn validity_threshold(n: usize, eta: Complex64, mu: f64) -> Result<LogScalar> {
    if mu == 0.0 {
        return Err(Error::ZeroDriving);
    }
    let norm_sq = hs_norm_sq_via_transfer(n, eta)?;
    let ratio = LogScalar::from_parts(1, (n as f64 + 1.0) * core::f64::consts::LN_2) * norm_sq.recip();
    Ok(ratio.sqrt().scale(1.0 / mu.abs()))
}
