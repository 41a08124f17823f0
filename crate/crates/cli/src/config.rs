//! Scan settings: built-in defaults, a TOML file and command-line flags.
//!
//! Later layers win: built-in < `[defaults]` < `[scan.<kind>]` < flags.
//!
//! ```toml
//! [defaults]
//! format = "json"
//! mu = 1.0
//!
//! [scan.xi-n-vs-n]
//! delta = [0.1, 0.4999]
//! n-log = [10, 10000]
//! n-points = 30
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    ChiVsDelta,
    XiVsEtaRational,
    XiNVsN,
    FLambdaNonpert,
    ValidityReport,
    IsotropicCheck,
}

impl ScanKind {
    pub fn name(self) -> &'static str {
        match self {
            ScanKind::ChiVsDelta => "chi-vs-delta",
            ScanKind::XiVsEtaRational => "xi-vs-eta-rational",
            ScanKind::XiNVsN => "xi-n-vs-n",
            ScanKind::FLambdaNonpert => "f-lambda-nonpert",
            ScanKind::ValidityReport => "validity-report",
            ScanKind::IsotropicCheck => "isotropic-check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogDomain {
    Auto,
    On,
    Off,
}

impl From<LogDomain> for xxz_ness::transfer::LogMode {
    fn from(l: LogDomain) -> Self {
        use xxz_ness::transfer::LogMode;
        match l {
            LogDomain::Auto => LogMode::Auto,
            LogDomain::On => LogMode::On,
            LogDomain::Off => LogMode::Off,
        }
    }
}

/// One layer of settings; unset fields fall through to the layer below.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    /// `[a, b, step]`, linear in `n`.
    pub n_range: Option<[usize; 3]>,
    /// `[min, max]`, log-spaced with `n-points` values.
    pub n_log: Option<[usize; 2]>,
    pub n_points: Option<usize>,
    pub delta: Option<Vec<f64>>,
    pub eta_rational: Option<[u32; 2]>,
    pub lambda_over_j: Option<Vec<f64>>,
    pub mu: Option<f64>,
    pub p_max: Option<u32>,
    pub q_max: Option<u32>,
    /// Size of the irrational `η/π` grid in `chi-vs-delta`.
    pub delta_points: Option<usize>,
    /// Extra untruncated `F_Δ^(0)/n` column at this length in `xi-vs-eta-rational`.
    pub exact_n: Option<usize>,
    /// `εJ/λ` for the `μ = 1` states; calibrated per `Δ` when unset.
    pub epsilon_ratio: Option<f64>,
    /// Probe angle of `isotropic-check`.
    pub eta: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub log_domain: Option<LogDomain>,
    pub threads: Option<usize>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

impl Settings {
    /// `self` with every field set in `top` replaced.
    pub fn overlay(mut self, top: &Settings) -> Settings {
        overlay!(
            self, top, n_range, n_log, n_points, delta, eta_rational, lambda_over_j, mu, p_max, q_max,
            delta_points, exact_n, epsilon_ratio, eta, format, out, log_domain, threads
        );
        // the two ways of giving n exclude each other
        if top.n_range.is_some() && top.n_log.is_none() {
            self.n_log = None;
        }
        if top.n_log.is_some() && top.n_range.is_none() {
            self.n_range = None;
        }
        if top.eta_rational.is_some() && top.delta.is_none() {
            self.delta = None;
        }
        self
    }

    /// Built-in defaults for one scan.
    pub fn builtin(kind: ScanKind) -> Settings {
        let mut s = Settings {
            format: Some(Format::Csv),
            log_domain: Some(LogDomain::Auto),
            mu: Some(1.0),
            ..Settings::default()
        };
        match kind {
            ScanKind::ChiVsDelta => {
                s.p_max = Some(50);
                s.delta_points = Some(400);
            }
            ScanKind::XiVsEtaRational => {
                s.p_max = Some(100);
            }
            ScanKind::XiNVsN => {
                s.delta = Some(vec![0.1]);
                s.n_log = Some([10, 10_000]);
                s.n_points = Some(25);
            }
            ScanKind::FLambdaNonpert => {
                s.delta = Some(vec![2.0, 10.0, 100.0]);
                s.lambda_over_j = Some(vec![0.0, 1e-3, 1e-2]);
                s.n_range = Some([2, 10, 1]);
            }
            ScanKind::ValidityReport => {
                s.delta = Some(vec![0.5, 1.0, 2.0]);
                s.n_range = Some([2, 50, 1]);
            }
            ScanKind::IsotropicCheck => {
                s.n_range = Some([2, 200, 1]);
                s.eta = Some(1e-4);
                s.lambda_over_j = Some(vec![1e-3]);
            }
        }
        s
    }
}

/// Contents of a config file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub defaults: Settings,
    #[serde(default)]
    pub scan: BTreeMap<ScanKind, Settings>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Built-in defaults overlaid with the config file and then the flags.
pub fn resolve(kind: ScanKind, file: Option<&ConfigFile>, flags: &Settings) -> Settings {
    let mut s = Settings::builtin(kind);
    if let Some(f) = file {
        s = s.overlay(&f.defaults);
        if let Some(section) = f.scan.get(&kind) {
            s = s.overlay(section);
        }
    }
    s = s.overlay(flags);
    if s.out.is_none() {
        let ext = s.format.unwrap_or(Format::Csv).extension();
        s.out = Some(PathBuf::from(format!("{}.{ext}", kind.name())));
    }
    s
}
