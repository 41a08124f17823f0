//! Lindblad generator, dense Liouvillian and the steady states built from it
//! or from the matrix product operators.
//!
//! Vectorization stacks columns: `vec(XρY) = (Yᵀ ⊗ X) vec(ρ)`.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::model::{check_dense, hamiltonian_xxz, hs_norm, lindblad_jump_ops, magnetization_z, ChainParams, DenseOperator};
use crate::mpo::{build_aux_a, build_aux_b, contract_to_dense, solve_s, validity_threshold};
use crate::CMatrix;

/// Largest chain for which the `4^n × 4^n` superoperator is assembled.
pub const LIOUVILLIAN_MAX_SITES: usize = 6;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `ρ ↦ −i[(Ω/2)M_z + J H, ρ] + λ Σ_k (L_k ρ L_k† − ½{L_k†L_k, ρ})` acting on
/// dense operators without forming the superoperator.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    params: ChainParams,
    hamiltonian: DenseOperator,
    jumps: Vec<DenseOperator>,
    /// `Σ_k L_k†L_k` including the rate.
    decay: DenseOperator,
}

impl LindbladGenerator {
    pub fn new(params: &ChainParams, include_omega: bool) -> Result<Self> {
        let n = params.n();
        check_dense(n)?;
        let mut h = hamiltonian_xxz(params)?.scale_real(params.j_coupling());
        if include_omega && params.omega() != 0.0 {
            h = &h + &magnetization_z(n)?.scale_real(params.omega() / 2.0);
        }
        let rate = params.lambda().sqrt();
        let jumps: Vec<DenseOperator> = lindblad_jump_ops(params)?
            .into_iter()
            .map(|l| l.scale_real(rate))
            .collect();
        let dim = 1usize << n;
        let decay = jumps
            .iter()
            .fold(DenseOperator::zeros(dim), |acc, l| &acc + &(&l.adjoint() * l));
        Ok(LindbladGenerator {
            params: *params,
            hamiltonian: h,
            jumps,
            decay,
        })
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn hamiltonian(&self) -> &DenseOperator {
        &self.hamiltonian
    }

    pub fn apply(&self, rho: &DenseOperator) -> Result<DenseOperator> {
        let dim = self.hamiltonian.dim();
        if rho.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: rho.dim(),
            });
        }
        let h = self.hamiltonian.matrix();
        let r = rho.matrix();
        let g = self.decay.matrix();
        let mut out = (h * r - r * h) * (-I) - (g * r + r * g) * Complex64::new(0.5, 0.0);
        for l in &self.jumps {
            out += l.matrix() * r * l.matrix().adjoint();
        }
        DenseOperator::new(out)
    }

    /// `‖L(ρ)‖_HS`.
    pub fn residual(&self, rho: &DenseOperator) -> Result<f64> {
        Ok(hs_norm(&self.apply(rho)?))
    }
}

/// Dense superoperator on column-stacked density matrices.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    n: usize,
    matrix: CMatrix,
    params: ChainParams,
}

impl Liouvillian {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn apply(&self, rho: &DenseOperator) -> DenseOperator {
        let dim = rho.dim();
        let v = CMatrix::from_column_slice(dim * dim, 1, rho.as_slice());
        let out = &self.matrix * v;
        DenseOperator::new(CMatrix::from_column_slice(dim, dim, out.as_slice())).expect("square by construction")
    }
}

pub fn build_liouvillian(params: &ChainParams, include_omega: bool) -> Result<Liouvillian> {
    let n = params.n();
    if n > LIOUVILLIAN_MAX_SITES {
        return Err(Error::DimensionCap {
            n,
            cap: LIOUVILLIAN_MAX_SITES,
        });
    }
    let gen = LindbladGenerator::new(params, include_omega)?;
    let dim = 1usize << n;
    let id = CMatrix::identity(dim, dim);
    let h = gen.hamiltonian.matrix();
    let g = gen.decay.matrix();
    let mut m = (id.kronecker(h) - h.transpose().kronecker(&id)) * (-I);
    m -= (id.kronecker(g) + g.transpose().kronecker(&id)) * Complex64::new(0.5, 0.0);
    for l in &gen.jumps {
        m += l.matrix().conjugate().kronecker(l.matrix());
    }
    Ok(Liouvillian {
        n,
        matrix: m,
        params: *params,
    })
}

/// The unique unit-trace null vector of the Liouvillian.
///
/// Solves the bordered system `[[𝓛, vec 𝟙], [vec(𝟙)ᵀ, 0]]·(vec ρ, c) = (0, 1)`,
/// which is nonsingular exactly when the kernel is one-dimensional; the
/// ratio of smallest to largest LU pivot decides uniqueness.
pub fn steady_state_nullspace(liouvillian: &Liouvillian) -> Result<DenseOperator> {
    if liouvillian.params.lambda() == 0.0 {
        return Err(Error::NoDissipation);
    }
    let dim = 1usize << liouvillian.n;
    let size = dim * dim;
    let mut bordered = CMatrix::zeros(size + 1, size + 1);
    bordered.view_mut((0, 0), (size, size)).copy_from(&liouvillian.matrix);
    let one = Complex64::new(1.0, 0.0);
    for k in 0..dim {
        let diag = k * dim + k;
        bordered[(diag, size)] = one;
        bordered[(size, diag)] = one;
    }
    let lu = bordered.lu();
    let u = lu.u();
    let pivots: Vec<f64> = (0..=size).map(|k| u[(k, k)].norm()).collect();
    let largest = pivots.iter().fold(0.0f64, |m, &x| m.max(x));
    let smallest = pivots.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    let pivot_ratio = smallest / largest;
    if !(pivot_ratio > 1e-12) {
        return Err(Error::NonUniqueSteadyState { pivot_ratio });
    }
    let mut rhs = CMatrix::zeros(size + 1, 1);
    rhs[(size, 0)] = one;
    let x = lu.solve(&rhs).ok_or(Error::NonUniqueSteadyState { pivot_ratio })?;
    let rho = DenseOperator::new(CMatrix::from_column_slice(dim, dim, &x.as_slice()[..size]))?.hermitian_part();
    let tr = rho.trace().re;
    Ok(rho.scale_real(1.0 / tr))
}

/// Second-order perturbative state with its diagnostics.
#[derive(Debug, Clone)]
pub struct PerturbativeNess {
    /// Trace-normalised state.
    pub state: DenseOperator,
    /// `Tr ρ − 1` before normalisation, `O((λ/J)²)`.
    pub trace_defect: f64,
    /// Whether `λ/J` lies below the validity threshold.
    pub within_validity: bool,
}

/// `ρ = 2^{−n}(𝟙 − i(λ/2J)μ(Z − Z†) + (λ²/8J²)(−μ[Z, Z†] − μ²(Z − Z†)²))`,
/// renormalised to unit trace.
///
/// With `σ^+ = |↑⟩⟨↓|` and `L_1 ∝ σ_1^+` this orientation of the `μ`-odd
/// terms is the one annihilated by the generator up to `O((λ/J)³)`.
pub fn ness_perturbative(params: &ChainParams) -> Result<PerturbativeNess> {
    let n = params.n();
    check_dense(n)?;
    let eta = params.eta();
    let z = contract_to_dense(&build_aux_a(n, eta)?, n)?;
    let zd = z.adjoint();
    let diff = &z - &zd;
    let g = params.lambda() / params.j_coupling();
    let mu = params.mu();
    let dim = 1usize << n;
    let first = diff.scale(Complex64::new(0.0, -g * mu / 2.0));
    let second = (&z.commutator(&zd).scale_real(-mu) - &(&diff * &diff).scale_real(mu * mu)).scale_real(g * g / 8.0);
    let raw = (&(&DenseOperator::identity(dim) + &first) + &second).scale_real(1.0 / dim as f64);
    let trace = raw.trace().re;
    let within_validity = if mu == 0.0 {
        true
    } else {
        validity_threshold(n, eta, mu)?.to_f64() > g
    };
    Ok(PerturbativeNess {
        state: raw.hermitian_part().scale_real(1.0 / trace),
        trace_defect: trace - 1.0,
        within_validity,
    })
}

/// `SS†/Tr(SS†)` with `S` contracted from the B-family at `s = solve_s(ε, η)`.
pub fn ness_mu1(params: &ChainParams, epsilon: f64) -> Result<DenseOperator> {
    if params.mu() != 1.0 {
        return Err(Error::RequiresFullDriving(params.mu()));
    }
    let n = params.n();
    check_dense(n)?;
    let eta = params.eta();
    let s = solve_s(epsilon, eta)?;
    let mut op = contract_to_dense(&build_aux_b(n, eta, s)?, n)?.into_matrix();
    let peak = op.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(Error::NotFinite {
            name: "S",
            value: peak,
        });
    }
    op /= Complex64::new(peak, 0.0);
    let gram = &op * op.adjoint();
    let tr = gram.trace().re;
    Ok(DenseOperator::new(gram / Complex64::new(tr, 0.0))?.hermitian_part())
}

/// Outcome of the `ε` search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonCalibration {
    pub epsilon: f64,
    /// `ε J / λ`.
    pub ratio: f64,
    /// `‖𝓛(ρ)‖_HS` at the returned `ε`.
    pub residual: f64,
}

/// Finds the `ε` whose `μ = 1` state is a fixed point of the generator.
///
/// Seeds `λ/J`, `λ/2J`, `2λ/J` are tried first; a golden-section search
/// then refines around the best seed.
pub fn calibrate_epsilon(params: &ChainParams) -> Result<EpsilonCalibration> {
    if params.mu() != 1.0 {
        return Err(Error::RequiresFullDriving(params.mu()));
    }
    if params.lambda() == 0.0 {
        return Err(Error::NoDissipation);
    }
    let gen = LindbladGenerator::new(params, false)?;
    let residual = |eps: f64| -> f64 {
        ness_mu1(params, eps)
            .and_then(|rho| gen.residual(&rho))
            .unwrap_or(f64::INFINITY)
    };
    let g = params.lambda() / params.j_coupling();
    let mut best = (g, residual(g));
    for seed in [g / 2.0, 2.0 * g] {
        let r = residual(seed);
        if r < best.1 {
            best = (seed, r);
        }
    }
    if best.1 >= 1e-13 {
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (best.0 * 0.5, best.0 * 1.5);
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let (mut fc, mut fd) = (residual(c), residual(d));
        for _ in 0..90 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = residual(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = residual(d);
            }
        }
        for (x, r) in [(c, fc), (d, fd)] {
            if r < best.1 {
                best = (x, r);
            }
        }
    }
    let (epsilon, residual) = best;
    if !(residual < 1e-8) {
        return Err(Error::CalibrationFailed { epsilon, residual });
    }
    Ok(EpsilonCalibration {
        epsilon,
        ratio: epsilon / g,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{embed, pauli, Axis};
    use proptest::prelude::*;

    fn params(n: usize, delta: f64, lambda: f64, mu: f64) -> ChainParams {
        ChainParams::unit_coupling(n, delta, lambda, mu).unwrap()
    }

    #[test]
    fn superoperator_matches_generator() {
        let p = ChainParams::new(3, 1.3, 0.4, 0.7, 0.3, 0.9).unwrap();
        let gen = LindbladGenerator::new(&p, true).unwrap();
        let l = build_liouvillian(&p, true).unwrap();
        let mut rho = CMatrix::zeros(8, 8);
        for (k, z) in rho.iter_mut().enumerate() {
            *z = Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos());
        }
        let rho = DenseOperator::new(rho).unwrap();
        assert!(l.apply(&rho).hs_distance(&gen.apply(&rho).unwrap()) < 1e-12);
    }

    #[test]
    fn trace_functional_is_left_null() {
        let l = build_liouvillian(&ChainParams::new(3, 0.8, -0.4, 0.6, 0.2, 1.1).unwrap(), true).unwrap();
        let dim = 8;
        let mut worst = 0.0f64;
        for col in 0..dim * dim {
            let s: Complex64 = (0..dim).map(|k| l.matrix()[(k * dim + k, col)]).sum();
            worst = worst.max(s.norm());
        }
        assert!(worst < 1e-12);
    }

    #[test]
    fn unitary_limit_has_imaginary_spectrum() {
        let l = build_liouvillian(&params(2, 0.5, 0.0, 0.3), false).unwrap();
        let eig = l.matrix().clone().eigenvalues();
        // the generator is anti-hermitian when λ = 0
        assert!(crate::model::frobenius(&(l.matrix() + l.matrix().adjoint())) < 1e-14);
        assert!(eig.is_none() || eig.unwrap().iter().all(|z| z.re.abs() < 1e-12));
        assert_eq!(steady_state_nullspace(&l).unwrap_err(), Error::NoDissipation);
    }

    #[test]
    fn unbiased_driving_gives_maximally_mixed_state() {
        for n in 2..=3 {
            let l = build_liouvillian(&params(n, 0.5, 0.7, 0.0), true).unwrap();
            let rho = steady_state_nullspace(&l).unwrap();
            let dim = 1usize << n;
            assert!(rho.hs_distance(&DenseOperator::identity(dim).scale_real(1.0 / dim as f64)) < 1e-12);
            assert!(hs_norm(&l.apply(&DenseOperator::identity(dim))) < 1e-14);
        }
    }

    #[test]
    fn nullspace_state_is_a_normalised_fixed_point() {
        let p = ChainParams::new(3, 1.0, 0.5, 0.2, 0.8, 0.0).unwrap();
        let l = build_liouvillian(&p, false).unwrap();
        let rho = steady_state_nullspace(&l).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(rho.is_hermitian(1e-12));
        let scale = crate::model::frobenius(l.matrix());
        assert!(hs_norm(&l.apply(&rho)) < 1e-10 * scale);
    }

    #[test]
    fn omega_does_not_change_the_state() {
        for n in 2..=4 {
            let p = ChainParams::new(n, 1.0, 0.7, 0.3, 0.6, 2.5).unwrap();
            let with = steady_state_nullspace(&build_liouvillian(&p, true).unwrap()).unwrap();
            let without = steady_state_nullspace(&build_liouvillian(&p, false).unwrap()).unwrap();
            assert!(with.hs_distance(&without) < 1e-10);
        }
    }

    #[test]
    fn perturbative_state_properties() {
        let p0 = params(4, 0.5, 0.0, 1.0);
        let r0 = ness_perturbative(&p0).unwrap();
        assert!(r0.state.hs_distance(&DenseOperator::identity(16).scale_real(1.0 / 16.0)) < 1e-15);
        let p = params(4, 0.5, 1e-2, 1.0);
        let r = ness_perturbative(&p).unwrap();
        assert!((r.state.trace().re - 1.0).abs() < 1e-14);
        assert!(r.within_validity);
        assert!(r.trace_defect.abs() < 1e-3 && r.trace_defect != 0.0);
        assert!(!ness_perturbative(&params(4, 0.5, 50.0, 1.0)).unwrap().within_validity);
    }

    #[test]
    fn perturbative_state_converges_at_third_order() {
        // two sites close the expansion at second order, leaving only rounding
        let p2 = params(2, 0.5, 1e-2, 1.0);
        let r2 = LindbladGenerator::new(&p2, false).unwrap().residual(&ness_perturbative(&p2).unwrap().state).unwrap();
        assert!(r2 < 1e-14);
        for n in 3..=4 {
            let res: Vec<f64> = [1e-2, 1e-3]
                .iter()
                .map(|&g| {
                    let p = params(n, 0.5, g, 1.0);
                    let rho = ness_perturbative(&p).unwrap().state;
                    LindbladGenerator::new(&p, false).unwrap().residual(&rho).unwrap()
                })
                .collect();
            let slope = (res[0] / res[1]).log10();
            assert!((slope - 3.0).abs() < 0.2, "n={n} slope={slope}");
        }
    }

    #[test]
    fn perturbative_state_matches_oracle() {
        let p = params(2, 0.5, 1e-3, 1.0);
        let oracle = steady_state_nullspace(&build_liouvillian(&p, false).unwrap()).unwrap();
        let pert = ness_perturbative(&p).unwrap().state;
        assert!(oracle.hs_distance(&pert) < 1e-8);
    }

    #[test]
    fn mu1_state_is_exact() {
        for n in 2..=4 {
            for delta in [1.5, 2.0, 0.6] {
                let p = params(n, delta, 0.3, 1.0);
                let rho = ness_mu1(&p, 0.3).unwrap();
                assert!((rho.trace().re - 1.0).abs() < 1e-14);
                let eig = rho.matrix().clone().symmetric_eigenvalues();
                assert!(eig.iter().all(|&x| x > -1e-12));
                let r = LindbladGenerator::new(&p, false).unwrap().residual(&rho).unwrap();
                assert!(r < 1e-12, "n={n} Δ={delta}: {r:e}");
            }
        }
        assert_eq!(ness_mu1(&params(3, 2.0, 0.1, 0.5), 0.1).unwrap_err(), Error::RequiresFullDriving(0.5));
        assert_eq!(ness_mu1(&params(3, 1.0, 0.1, 1.0), 0.1).unwrap_err(), Error::IsotropicEta);
    }

    #[test]
    fn calibration_recovers_unit_ratio() {
        for delta in [1.5, 2.0, 4.0] {
            let c = calibrate_epsilon(&params(3, delta, 2e-3, 1.0)).unwrap();
            assert!((c.ratio - 1.0).abs() < 1e-6, "Δ={delta}");
            assert!(c.residual < 1e-10);
        }
        assert_eq!(calibrate_epsilon(&params(3, 2.0, 0.0, 1.0)).unwrap_err(), Error::NoDissipation);
    }

    #[test]
    fn mu_reversal_is_a_spin_flip() {
        let n = 3;
        let dim = 1usize << n;
        let flip = (1..=n).fold(DenseOperator::identity(dim), |acc, j| &acc * &embed(n, j, &pauli(Axis::X)).unwrap());
        let state = |mu: f64| {
            steady_state_nullspace(&build_liouvillian(&params(n, 0.4, 0.8, mu), false).unwrap()).unwrap()
        };
        let (a, b) = (state(0.6), state(-0.6));
        assert!((&(&flip * &a) * &flip).hs_distance(&b) < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn steady_state_is_unique_and_fixed(delta in -2.5f64..2.5, lambda in 0.05f64..2.0, mu in -1.0f64..1.0) {
            let p = params(2, delta, lambda, mu);
            let l = build_liouvillian(&p, true).unwrap();
            let rho = steady_state_nullspace(&l).unwrap();
            prop_assert!(hs_norm(&l.apply(&rho)) < 1e-10);
            let sv = l.matrix().clone().singular_values();
            let mut s: Vec<f64> = sv.iter().copied().collect();
            s.sort_by(|a, b| a.partial_cmp(b).unwrap());
            prop_assert!(s[0] < 1e-10 && s[1] > 1e-6);
        }
    }
}
