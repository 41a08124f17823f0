//! The six scans. Every grid point becomes one row; points run on the rayon
//! pool and rows keep grid order.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde_json::{json, Map, Value as Json};

use xxz_ness::fisher::{qfi_parametric, StateBuilder};
use xxz_ness::lindblad::calibrate_epsilon;
use xxz_ness::model::eta_from_delta;
use xxz_ness::mpo::validity_threshold;
use xxz_ness::transfer::{
    bracket_ltnr, chi_coefficient, delta_coefficient_series, f0_delta, f0_x, isotropic_bracket_series,
    isotropic_f_delta, xi_coefficient, xi_rational_jordan, LogMode, RationalEta, Regime, XiRoute,
};
use xxz_ness::{ChainParams, Complex64, LogScalar, Parameter};

use crate::config::{LogDomain, ScanKind, Settings};
use crate::grid::{irrational_eta_fractions, linear_range, log_range, rational_grid};
use crate::output::Row;

/// Rows plus scan-level facts for the manifest.
#[derive(Debug, Clone, Default)]
pub struct ScanOutput {
    pub rows: Vec<Row>,
    pub notes: Map<String, Json>,
}

impl ScanOutput {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.failed()).count()
    }
}

/// Rejected settings (bad usage, not a numerical failure).
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

/// Row with the inputs filled in, completed by `f` or marked failed.
fn point(inputs: Row, f: impl FnOnce(&mut Row) -> xxz_ness::Result<()>) -> Row {
    let mut row = inputs;
    let keep = row.cells.len();
    if let Err(e) = f(&mut row) {
        row.cells.truncate(keep);
        row.error = Some(e.to_string());
    }
    row
}

fn n_values(s: &Settings) -> Result<Vec<usize>, UsageError> {
    let ns = match (s.n_range, s.n_log) {
        (Some([a, b, step]), _) => {
            if step == 0 || a > b {
                return usage(format!("n-range {a} {b} {step} is empty"));
            }
            linear_range(a, b, step)
        }
        (None, Some([a, b])) => {
            if a > b || a == 0 {
                return usage(format!("n-log {a} {b} is empty"));
            }
            log_range(a, b, s.n_points.unwrap_or(25))
        }
        (None, None) => return usage("no n range given"),
    };
    if ns[0] < 2 {
        return usage("chains need at least 2 sites");
    }
    Ok(ns)
}

fn deltas(s: &Settings) -> Result<Vec<f64>, UsageError> {
    match &s.delta {
        Some(d) if !d.is_empty() => {
            if let Some(bad) = d.iter().find(|x| !x.is_finite()) {
                return usage(format!("Δ = {bad} is not finite"));
            }
            Ok(d.clone())
        }
        _ => usage("no Δ given"),
    }
}

fn p_max(s: &Settings) -> Result<(u32, u32), UsageError> {
    let p = s.p_max.unwrap_or(0);
    if p < 2 {
        return usage("p-max must be at least 2");
    }
    Ok((p, s.q_max.unwrap_or(p)))
}

fn rational(s: &Settings) -> Result<Option<RationalEta>, UsageError> {
    match s.eta_rational {
        None => Ok(None),
        Some([p, q]) => RationalEta::new(p, q)
            .map(Some)
            .map_err(|_| UsageError(format!("eta-rational {p} {q}: need coprime 0 < q < p"))),
    }
}

fn route_name(r: XiRoute) -> &'static str {
    match r {
        XiRoute::TruncatedSlope => "truncated-slope",
        XiRoute::Exact => "exact",
        XiRoute::Jordan => "jordan",
    }
}

fn regime_name(delta: f64) -> &'static str {
    match Regime::of_delta(delta) {
        Regime::EasyPlane => "easy-plane",
        Regime::Isotropic => "isotropic",
        Regime::EasyAxis => "easy-axis",
    }
}

pub fn run(kind: ScanKind, s: &Settings) -> Result<ScanOutput, UsageError> {
    match kind {
        ScanKind::ChiVsDelta => chi_vs_delta(s),
        ScanKind::XiVsEtaRational => xi_vs_eta_rational(s),
        ScanKind::XiNVsN => xi_n_vs_n(s),
        ScanKind::FLambdaNonpert => f_lambda_nonpert(s),
        ScanKind::ValidityReport => validity_report(s),
        ScanKind::IsotropicCheck => isotropic_check(s),
    }
}

/// `(p, q)` when rational, `η/π`, `Δ`.
type ChiPoint = (Option<(u32, u32)>, f64, f64);

fn chi_vs_delta(s: &Settings) -> Result<ScanOutput, UsageError> {
    let (p_max, q_max) = p_max(s)?;
    let mut points: Vec<ChiPoint> = rational_grid(p_max, q_max)
        .into_iter()
        .map(|(p, q, d)| (Some((p, q)), q as f64 / p as f64, d))
        .collect();
    for x in irrational_eta_fractions(s.delta_points.unwrap_or(0)) {
        points.push((None, x, (x * PI).cos()));
    }
    let rows = points
        .par_iter()
        .map(|&(pq, x, delta)| {
            let mut r = Row::new();
            r.push("family", if pq.is_some() { "rational" } else { "irrational" })
                .push("p", pq.map(|v| v.0))
                .push("q", pq.map(|v| v.1))
                .push("eta_over_pi", x)
                .push("delta", delta);
            point(r, |r| {
                let rat = pq.map(|(p, q)| RationalEta::new(p, q)).transpose()?;
                let c = chi_coefficient(delta, rat)?;
                r.push("d", c.d)
                    .push("chi", c.chi)
                    .push("chi1", c.chi1)
                    .push("chi_times_gap", c.chi * (1.0 - delta * delta));
                Ok(())
            })
        })
        .collect();
    Ok(ScanOutput {
        rows,
        notes: Map::new(),
    })
}

fn xi_vs_eta_rational(s: &Settings) -> Result<ScanOutput, UsageError> {
    let (p_max, q_max) = p_max(s)?;
    let exact_n = s.exact_n;
    if exact_n.is_some_and(|n| n < 2) {
        return usage("exact-n must be at least 2");
    }
    let rows = rational_grid(p_max, q_max)
        .par_iter()
        .map(|&(p, q, delta)| {
            let mut r = Row::new();
            r.push("p", p)
                .push("q", q)
                .push("eta_over_pi", q as f64 / p as f64)
                .push("delta", delta);
            point(r, |r| {
                let rat = RationalEta::new(p, q)?;
                let x = xi_rational_jordan(rat)?;
                r.push("d", x.d).push("xi", x.xi);
                if let Some(n) = exact_n {
                    let series = delta_coefficient_series(Complex64::new(rat.eta(), 0.0), n, n / 2, false)?;
                    r.push("exact_g_over_n", series.coefficient[n].scale(1.0 / n as f64));
                }
                Ok(())
            })
        })
        .collect();
    let mut notes = Map::new();
    notes.insert("xi_route".into(), json!("jordan"));
    Ok(ScanOutput { rows, notes })
}

fn xi_n_vs_n(s: &Settings) -> Result<ScanOutput, UsageError> {
    let ns = n_values(s)?;
    let rat = rational(s)?;
    let ds = match rat {
        Some(r) => vec![r.delta()],
        None => deltas(s)?,
    };
    if let Some(bad) = ds.iter().find(|d| d.abs() >= 1.0) {
        return usage(format!("xi-n-vs-n needs |Δ| < 1, got {bad}"));
    }
    let points: Vec<(f64, usize)> = ds.iter().flat_map(|&d| ns.iter().map(move |&n| (d, n))).collect();
    let rows = points
        .par_iter()
        .map(|&(delta, n)| {
            let mut r = Row::new();
            r.push("delta", delta)
                .push("p", rat.map(|r| r.p()))
                .push("q", rat.map(|r| r.q()))
                .push("n", n);
            point(r, |r| {
                let x = xi_coefficient(delta, n, rat)?;
                r.push("d", x.d)
                    .push("route", route_name(x.route))
                    .push("xi", x.xi)
                    .push("xi_times_n", x.xi_times_n)
                    .push("r_squared", x.r_squared);
                Ok(())
            })
        })
        .collect();
    Ok(ScanOutput {
        rows,
        notes: Map::new(),
    })
}

fn f_lambda_nonpert(s: &Settings) -> Result<ScanOutput, UsageError> {
    let ns = n_values(s)?;
    let ds = deltas(s)?;
    let lambdas = s.lambda_over_j.clone().unwrap_or_default();
    if lambdas.is_empty() || lambdas.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
        return usage("lambda-over-j needs finite values ≥ 0");
    }
    if s.mu != Some(1.0) {
        return usage("f-lambda-nonpert uses the μ = 1 steady state; set mu = 1");
    }
    if ns.iter().any(|&n| n > xxz_ness::model::DENSE_MAX_SITES) {
        return usage(format!("dense steady states stop at n = {}", xxz_ness::model::DENSE_MAX_SITES));
    }
    if ds.iter().any(|d| d.abs() == 1.0) {
        return usage("the μ = 1 state is not defined at |Δ| = 1");
    }
    // ε J/λ per Δ, from the flag or a three-site calibration
    let probe = lambdas.iter().copied().find(|&l| l > 0.0).unwrap_or(1e-3);
    let mut calibration = Map::new();
    let mut ratios = Vec::with_capacity(ds.len());
    for &delta in &ds {
        let ratio = match s.epsilon_ratio {
            Some(r) => r,
            None => {
                let p = ChainParams::unit_coupling(3, delta, probe, 1.0).map_err(|e| UsageError(e.to_string()))?;
                let c = calibrate_epsilon(&p).map_err(|e| UsageError(format!("ε calibration at Δ = {delta}: {e}")))?;
                calibration.insert(
                    format!("{delta}"),
                    json!({ "ratio": c.ratio, "residual": c.residual, "n": 3, "lambda_over_j": probe }),
                );
                c.ratio
            }
        };
        ratios.push(ratio);
    }
    let mut points = Vec::new();
    for (&delta, &ratio) in ds.iter().zip(&ratios) {
        for &l in &lambdas {
            for &n in &ns {
                points.push((delta, ratio, l, n));
            }
        }
    }
    let rows = points
        .par_iter()
        .map(|&(delta, ratio, lambda, n)| {
            let mut r = Row::new();
            r.push("delta", delta).push("lambda_over_j", lambda).push("n", n);
            point(r, |r| {
                let p = ChainParams::unit_coupling(n, delta, lambda, 1.0)?;
                let (method, f) = if lambda == 0.0 {
                    ("leading-order", f0_x(&p, Parameter::Lambda)?.value)
                } else {
                    let builder = StateBuilder::Mu1 { epsilon_ratio: ratio };
                    ("exact-dense", qfi_parametric(&p, Parameter::Lambda, builder)?.value)
                };
                r.push("method", method)
                    .push("epsilon_ratio", if lambda == 0.0 { None } else { Some(ratio) })
                    .push("j2_f_lambda", f);
                Ok(())
            })
        })
        .collect();
    let mut notes = Map::new();
    match s.epsilon_ratio {
        Some(r) => {
            notes.insert("epsilon_ratio".into(), json!(r));
        }
        None => {
            notes.insert("epsilon_calibration".into(), Json::Object(calibration));
        }
    }
    Ok(ScanOutput { rows, notes })
}

fn log_flag(mode: LogDomain, delta: f64, value: &LogScalar) -> &'static str {
    match mode {
        LogDomain::On => "on",
        LogDomain::Off => "off",
        LogDomain::Auto => {
            if Regime::of_delta(delta) == Regime::EasyAxis || value.to_f64_checked().is_none() {
                "on"
            } else {
                "off"
            }
        }
    }
}

fn validity_report(s: &Settings) -> Result<ScanOutput, UsageError> {
    let ns = n_values(s)?;
    let ds = deltas(s)?;
    let mu = s.mu.unwrap_or(1.0);
    if mu == 0.0 || !(-1.0..=1.0).contains(&mu) {
        return usage("validity-report needs 0 < |μ| ≤ 1");
    }
    let mode = s.log_domain.unwrap_or(LogDomain::Auto);
    let points: Vec<(f64, usize)> = ds.iter().flat_map(|&d| ns.iter().map(move |&n| (d, n))).collect();
    let rows = points
        .par_iter()
        .map(|&(delta, n)| {
            let mut r = Row::new();
            r.push("delta", delta).push("mu", mu).push("n", n).push("regime", regime_name(delta));
            point(r, |r| {
                let eta = eta_from_delta(delta);
                let bracket = bracket_ltnr(n, eta, n / 2, mode.into())?;
                let norm_sq = bracket * LogScalar::from_parts(1, n as f64 * std::f64::consts::LN_2);
                let threshold = validity_threshold(n, eta, mu)?;
                r.push("bracket", bracket)
                    .push("z_norm_sq", norm_sq)
                    .push("lambda_over_j_max", threshold)
                    .push("log_domain", log_flag(mode, delta, &bracket));
                Ok(())
            })
        })
        .collect();
    Ok(ScanOutput {
        rows,
        notes: Map::new(),
    })
}

fn rel(a: f64, b: f64) -> Option<f64> {
    (b != 0.0).then(|| (a - b).abs() / b.abs())
}

fn isotropic_check(s: &Settings) -> Result<ScanOutput, UsageError> {
    let ns = n_values(s)?;
    let eta = s.eta.unwrap_or(1e-4);
    if !(eta.is_finite() && eta > 0.0 && eta < 1.0) {
        return usage("isotropic-check probe η must lie in (0, 1)");
    }
    let lambda = s.lambda_over_j.as_ref().and_then(|l| l.first().copied()).unwrap_or(1e-3);
    let mu = s.mu.unwrap_or(1.0);
    let mode: LogMode = s.log_domain.unwrap_or(LogDomain::Auto).into();
    let rows = ns
        .par_iter()
        .map(|&n| {
            let mut r = Row::new();
            r.push("n", n).push("eta", eta);
            point(r, |r| {
                let nf = n as f64;
                let at_zero = bracket_ltnr(n, Complex64::new(0.0, 0.0), n / 2, mode)?.to_f64();
                let closed = nf * (nf - 1.0) / 8.0;
                let exact = bracket_ltnr(n, Complex64::new(eta, 0.0), n / 2, mode)?.to_f64();
                let series = isotropic_bracket_series(n, eta).ok();
                let iso = ChainParams::unit_coupling(n, 1.0, lambda, mu)?;
                let formula = lambda * lambda * mu * mu * nf * (nf - 1.0) * (nf - 2.0) * (3.0 * nf - 7.0) / 96.0;
                let near = ChainParams::unit_coupling(n, eta.cos(), lambda, mu)?;
                let f_series = isotropic_f_delta(&near)?;
                let f_exact = f0_delta(&near)?.value.to_f64();
                r.push("bracket_eta0", at_zero)
                    .push("closed_form", closed)
                    .push("rel_err_eta0", rel(at_zero, closed))
                    .push("bracket_exact", exact)
                    .push("bracket_series", series)
                    .push("rel_err_series", series.and_then(|v| rel(v, exact)))
                    .push("f_delta_eta0", isotropic_f_delta(&iso)?)
                    .push("f_delta_formula", formula)
                    .push("f_delta_series", f_series)
                    .push("f_delta_exact", f_exact)
                    .push("rel_err_f_delta", rel(f_series, f_exact));
                Ok(())
            })
        })
        .collect();
    Ok(ScanOutput {
        rows,
        notes: Map::new(),
    })
}
