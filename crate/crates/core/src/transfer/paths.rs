//! Forward accumulation of path sums from `|R⟩` to `⟨L|`.
//!
//! One sweep over `m = 0..=n` produces `⟨L|T^m|R⟩`, its second derivative
//! in the anisotropy angle and the vertex sum `Σ_k ⟨L|T^{k−1} D T^{m−k}|R⟩`
//! for every `m`, in `O(n·d)` time and `O(d)` memory. Easy-plane sweeps
//! share one running log-scale; easy-axis sweeps keep every component in
//! log form because level components grow at different exponential rates.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul};

use num_traits::Float;

use super::{right_boundary, Gauge, LevelBand, Regime, TransferSystem};
use crate::error::{Error, Result};
use crate::logscalar::LogScalar;

const RESCALE_HIGH: f64 = 1e150;
const RESCALE_LOW: f64 = 1e-150;

/// Builder for a path-sum sweep over a [`TransferSystem`].
#[derive(Debug, Clone)]
pub struct PathSums<'a> {
    ts: &'a TransferSystem,
    derivatives: bool,
    defect: bool,
    exit_term: bool,
}

/// Per-length results of a sweep; index `m` holds the value for `T^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSeries {
    pub bracket: Vec<LogScalar>,
    /// `d²/dθ² ⟨L|T^m|R⟩` with θ the real angle coordinate
    /// (`θ = η` in the easy plane, `θ = Im η` in the easy axis).
    pub d2_theta: Vec<LogScalar>,
    pub defect: Vec<LogScalar>,
    /// `d²/dη² = eta_curvature · d²/dθ²`.
    pub eta_curvature: f64,
}

impl PathSeries {
    /// `d²/dη² ⟨L|T^m|R⟩`.
    pub fn d2_eta(&self, m: usize) -> LogScalar {
        self.d2_theta[m].scale(self.eta_curvature)
    }
}

impl<'a> PathSums<'a> {
    pub fn new(ts: &'a TransferSystem) -> Self {
        PathSums {
            ts,
            derivatives: false,
            defect: false,
            exit_term: false,
        }
    }

    pub fn with_derivatives(mut self) -> Self {
        self.derivatives = true;
        self
    }

    pub fn with_defect(mut self) -> Self {
        self.defect = true;
        self
    }

    /// Adds the two-step vertex `⟨d|D|d+1⟩⟨d+1|T|d⟩ |d⟩⟨d|` that leaves the
    /// truncated space for one step and returns through `D`.
    pub fn with_exit_term(mut self) -> Self {
        self.defect = true;
        self.exit_term = true;
        self
    }

    pub fn run(&self, n_max: usize) -> Result<PathSeries> {
        // easy-axis level components spread beyond one shared exponent
        if self.ts.regime() == Regime::EasyAxis {
            self.sweep::<LogScalar>(n_max)
        } else {
            self.sweep::<f64>(n_max)
        }
    }

    fn sweep<S: Accumulator>(&self, n_max: usize) -> Result<PathSeries> {
        let ts = self.ts;
        let dim = ts.dim();
        let curvature = if ts.regime() == Regime::EasyAxis { -1.0 } else { 1.0 };
        let Bands { t, first, second, exit } = S::bands(ts);
        let vertex = Band::<S>::from_levels(ts.vertex());
        let half = S::from(0.5);
        let two = S::from(2.0);

        let apply_t = |v: &[S], out: &mut [S]| {
            out[0] = v[0] + half * v[2];
            out[1] = v[1];
            for x in out[2..].iter_mut() {
                *x = S::ZERO;
            }
            out[2] = half * v[1];
            t.add_into(v, out);
        };

        let mut v: Vec<S> = right_boundary(dim).into_iter().map(S::from).collect();
        let mut v_prev = vec![S::ZERO; dim];
        let mut v1 = vec![S::ZERO; dim];
        let mut v2 = vec![S::ZERO; dim];
        let mut u = vec![S::ZERO; dim];
        let mut next = vec![S::ZERO; dim];
        let mut scratch = vec![S::ZERO; dim];
        let mut ln_scale = 0.0f64;

        let mut series = PathSeries {
            bracket: Vec::with_capacity(n_max + 1),
            d2_theta: Vec::new(),
            defect: Vec::new(),
            eta_curvature: curvature,
        };
        series.bracket.push(LogScalar::ZERO);
        if self.derivatives {
            series.d2_theta.push(LogScalar::ZERO);
        }
        if self.defect {
            series.defect.push(LogScalar::ZERO);
        }

        for _ in 0..n_max {
            if self.derivatives {
                // v2 ← T v2 + 2 T' v1 + T'' v
                apply_t(&v2, &mut next);
                scratch.iter_mut().for_each(|x| *x = S::ZERO);
                first.add_into(&v1, &mut scratch);
                for (a, b) in next.iter_mut().zip(&scratch) {
                    *a = *a + two * *b;
                }
                second.add_into(&v, &mut next);
                core::mem::swap(&mut v2, &mut next);
                // v1 ← T v1 + T' v
                apply_t(&v1, &mut next);
                first.add_into(&v, &mut next);
                core::mem::swap(&mut v1, &mut next);
            }
            if self.defect {
                apply_t(&u, &mut next);
                vertex.add_into(&v, &mut next);
                if self.exit_term {
                    next[dim - 1] = next[dim - 1] + exit * v_prev[dim - 1];
                }
                core::mem::swap(&mut u, &mut next);
            }
            apply_t(&v, &mut next);
            core::mem::swap(&mut v_prev, &mut v);
            core::mem::swap(&mut v, &mut next);

            ln_scale += S::rescale(&mut [&mut v, &mut v_prev, &mut v1, &mut v2, &mut u])?;
            series.bracket.push(v[0].to_log(ln_scale));
            if self.derivatives {
                series.d2_theta.push(v2[0].to_log(ln_scale));
            }
            if self.defect {
                series.defect.push(u[0].to_log(ln_scale));
            }
        }
        Ok(series)
    }
}

/// Scalar type carried through a sweep.
trait Accumulator: Copy + Add<Output = Self> + Mul<Output = Self> + From<f64> {
    const ZERO: Self;
    fn bands(ts: &TransferSystem) -> Bands<Self>;
    fn to_log(self, ln_scale: f64) -> LogScalar;
    /// Renormalises the buffers in place and returns the log of the factor removed.
    fn rescale(bufs: &mut [&mut Vec<Self>]) -> Result<f64>;
}

impl Accumulator for f64 {
    const ZERO: f64 = 0.0;

    fn bands(ts: &TransferSystem) -> Bands<f64> {
        let (first, second, _) = angle_derivatives(ts);
        Bands {
            t: Band::from_levels(ts.levels()),
            first: Band::from_levels(&first),
            second: Band::from_levels(&second),
            exit: ts.vertex_exit() * ts.transfer_exit(),
        }
    }

    fn to_log(self, ln_scale: f64) -> LogScalar {
        if self == 0.0 {
            LogScalar::ZERO
        } else {
            LogScalar::from_parts(if self > 0.0 { 1 } else { -1 }, self.abs().ln() + ln_scale)
        }
    }

    fn rescale(bufs: &mut [&mut Vec<f64>]) -> Result<f64> {
        let mut peak = 0.0f64;
        for x in bufs.iter().flat_map(|b| b.iter()) {
            if !x.is_finite() {
                return Err(Error::Overflow);
            }
            peak = peak.max(x.abs());
        }
        if peak > RESCALE_HIGH || (peak > 0.0 && peak < RESCALE_LOW) {
            let inv = peak.recip();
            for x in bufs.iter_mut().flat_map(|b| b.iter_mut()) {
                *x *= inv;
            }
            Ok(peak.ln())
        } else {
            Ok(0.0)
        }
    }
}

impl Accumulator for LogScalar {
    const ZERO: LogScalar = LogScalar::ZERO;

    fn bands(ts: &TransferSystem) -> Bands<LogScalar> {
        if ts.regime() == Regime::EasyAxis {
            return easy_axis_log_bands(ts);
        }
        let (first, second, _) = angle_derivatives(ts);
        Bands {
            t: Band::from_levels(ts.levels()),
            first: Band::from_levels(&first),
            second: Band::from_levels(&second),
            exit: LogScalar::from_f64(ts.vertex_exit() * ts.transfer_exit()),
        }
    }

    fn to_log(self, ln_scale: f64) -> LogScalar {
        self * LogScalar::from_parts(1, ln_scale)
    }

    fn rescale(bufs: &mut [&mut Vec<LogScalar>]) -> Result<f64> {
        if bufs.iter().flat_map(|b| b.iter()).any(|x| x.ln_abs().is_nan() || x.ln_abs() == f64::INFINITY) {
            return Err(Error::Overflow);
        }
        Ok(0.0)
    }
}

/// Transfer block, its angle derivatives and the exit weight.
struct Bands<S> {
    t: Band<S>,
    first: Band<S>,
    second: Band<S>,
    exit: S,
}

/// `ln cosh x`.
fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - core::f64::consts::LN_2
}

/// `ln sinh x` for `x > 0`.
fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp()).ln_1p() - core::f64::consts::LN_2
}

/// Easy-axis bands with every coefficient built from its logarithm, so
/// `cosh²(kθ)` stays representable for any level.
fn easy_axis_log_bands(ts: &TransferSystem) -> Bands<LogScalar> {
    let d = ts.d();
    let theta = ts.eta().im.abs();
    let sign: i8 = if ts.gauge() == Gauge::Literal { -1 } else { 1 };
    // orientation of θ; the first derivative is odd in it
    let odd: i8 = if ts.eta().im < 0.0 { -1 } else { 1 };
    let ln2 = core::f64::consts::LN_2;
    let coupling = |j: f64| LogScalar::from_parts(sign, 2.0 * ln_sinh(j * theta) - ln2);
    let coupling1 = |j: f64| LogScalar::from_parts(sign * odd, j.ln() + ln_sinh(2.0 * j * theta) - ln2);
    let coupling2 = |j: f64| LogScalar::from_parts(sign, 2.0 * j.ln() + ln_cosh(2.0 * j * theta));
    let mut t = Band { diag: Vec::with_capacity(d), lower: Vec::new(), upper: Vec::new() };
    let mut first = Band { diag: Vec::with_capacity(d), lower: Vec::new(), upper: Vec::new() };
    let mut second = Band { diag: Vec::with_capacity(d), lower: Vec::new(), upper: Vec::new() };
    for k in 1..=d {
        let kf = k as f64;
        t.diag.push(LogScalar::from_parts(1, 2.0 * ln_cosh(kf * theta)));
        first.diag.push(LogScalar::from_parts(odd, kf.ln() + ln_sinh(2.0 * kf * theta)));
        second.diag.push(LogScalar::from_parts(1, ln2 + 2.0 * kf.ln() + ln_cosh(2.0 * kf * theta)));
        if k < d {
            t.lower.push(coupling(kf));
            t.upper.push(coupling(kf + 1.0));
            first.lower.push(coupling1(kf));
            first.upper.push(coupling1(kf + 1.0));
            second.lower.push(coupling2(kf));
            second.upper.push(coupling2(kf + 1.0));
        }
    }
    let exit = LogScalar::from_f64(ts.vertex_exit()) * coupling(d as f64);
    Bands { t, first, second, exit }
}

/// Level block converted to the sweep scalar.
struct Band<S> {
    diag: Vec<S>,
    lower: Vec<S>,
    upper: Vec<S>,
}

impl<S: Accumulator> Band<S> {
    fn from_levels(b: &LevelBand) -> Self {
        let conv = |xs: &[f64]| xs.iter().map(|&x| S::from(x)).collect();
        Band {
            diag: conv(&b.diag),
            lower: conv(&b.lower),
            upper: conv(&b.upper),
        }
    }

    /// Adds `self · v[levels]` into `out[levels]` (layout `[L, R, 1..d]`).
    fn add_into(&self, v: &[S], out: &mut [S]) {
        let d = self.diag.len();
        for k in 0..d {
            let mut acc = self.diag[k] * v[k + 2];
            if k > 0 {
                acc = acc + self.lower[k - 1] * v[k + 1];
            }
            if k + 1 < d {
                acc = acc + self.upper[k] * v[k + 3];
            }
            out[k + 2] = out[k + 2] + acc;
        }
    }
}

/// First and second derivatives of the level block of `T` with respect to
/// the real angle coordinate, and the factor converting `d²/dθ²` to `d²/dη²`.
fn angle_derivatives(ts: &TransferSystem) -> (LevelBand, LevelBand, f64) {
    let d = ts.d();
    let mut first = LevelBand::zeros(d);
    let mut second = LevelBand::zeros(d);
    let eta = ts.eta();
    let easy_axis = ts.regime() == Regime::EasyAxis;
    let theta = if easy_axis { eta.im } else { eta.re };
    // literal easy-axis couplings are −sinh²/2; the positive gauge flips them
    let coupling_sign = if easy_axis && ts.gauge() == Gauge::Literal {
        -1.0
    } else {
        1.0
    };
    let trig = |x: f64| -> (f64, f64) {
        if easy_axis {
            (x.sinh(), x.cosh())
        } else {
            (x.sin(), x.cos())
        }
    };
    for k in 1..=d {
        let kf = k as f64;
        // cos²(kη) → (−k sin 2kθ, −2k² cos 2kθ); easy axis cosh² → (k sinh, 2k² cosh)
        let (sk, ck) = trig(2.0 * kf * theta);
        if easy_axis {
            first.diag[k - 1] = kf * sk;
            second.diag[k - 1] = 2.0 * kf * kf * ck;
        } else {
            first.diag[k - 1] = -kf * sk;
            second.diag[k - 1] = -2.0 * kf * kf * ck;
        }
        if k < d {
            for (j, slot) in [(kf, 0usize), (kf + 1.0, 1usize)] {
                let (sj, cj) = trig(2.0 * j * theta);
                // sin²(jθ)/2 → (j sin 2jθ /2, j² cos 2jθ); sinh² alike
                let (f1, f2) = (coupling_sign * j * sj / 2.0, coupling_sign * j * j * cj);
                if slot == 0 {
                    first.lower[k - 1] = f1;
                    second.lower[k - 1] = f2;
                } else {
                    first.upper[k - 1] = f1;
                    second.upper[k - 1] = f2;
                }
            }
        }
    }
    let curvature = if easy_axis { -1.0 } else { 1.0 };
    (first, second, curvature)
}

/// Ordinary least-squares line `y ≈ slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    }
}
