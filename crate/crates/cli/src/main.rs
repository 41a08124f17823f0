use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use xxz_ness_cli::config::{resolve, ConfigFile, Format, LogDomain, ScanKind, Settings};
use xxz_ness_cli::{manifest, scan};

const EXIT_PARTIAL: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 1;

#[derive(Parser)]
#[command(name = "xxz-ness", version = manifest::VERSION, about = "Parameter scans for boundary-driven XXZ steady states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scan and write its data file and manifest.
    Scan(ScanArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ScanArgs {
    kind: ScanKind,
    /// TOML file with `[defaults]` and `[scan.<kind>]` tables.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, num_args = 3, value_names = ["A", "B", "STEP"], conflicts_with = "n_log")]
    n_range: Option<Vec<usize>>,
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"])]
    n_log: Option<Vec<usize>>,
    #[arg(long)]
    n_points: Option<usize>,
    #[arg(long, num_args = 1.., conflicts_with = "eta_rational")]
    delta: Option<Vec<f64>>,
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    eta_rational: Option<Vec<u32>>,
    #[arg(long, num_args = 1..)]
    lambda_over_j: Option<Vec<f64>>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    p_max: Option<u32>,
    #[arg(long)]
    q_max: Option<u32>,
    #[arg(long)]
    delta_points: Option<usize>,
    #[arg(long)]
    exact_n: Option<usize>,
    #[arg(long)]
    epsilon_ratio: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    log_domain: Option<LogDomain>,
    #[arg(long)]
    threads: Option<usize>,
}

impl ScanArgs {
    fn flags(&self) -> Settings {
        Settings {
            n_range: self.n_range.as_deref().map(|v| [v[0], v[1], v[2]]),
            n_log: self.n_log.as_deref().map(|v| [v[0], v[1]]),
            n_points: self.n_points,
            delta: self.delta.clone(),
            eta_rational: self.eta_rational.as_deref().map(|v| [v[0], v[1]]),
            lambda_over_j: self.lambda_over_j.clone(),
            mu: self.mu,
            p_max: self.p_max,
            q_max: self.q_max,
            delta_points: self.delta_points,
            exact_n: self.exact_n,
            epsilon_ratio: self.epsilon_ratio,
            eta: self.eta,
            format: self.format,
            out: self.out.clone(),
            log_domain: self.log_domain,
            threads: self.threads,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let Command::Scan(args) = cli.command;
    let file = match args.config.as_deref().map(ConfigFile::load).transpose() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let settings = resolve(args.kind, file.as_ref(), &args.flags());
    if let Some(t) = settings.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let start = Instant::now();
    let out = match scan::run(args.kind, &settings) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let path = settings.out.clone().expect("resolve sets an output path");
    match manifest::write_all(args.kind, &settings, &out, &path, start.elapsed()) {
        Ok(digest) => {
            eprintln!(
                "{}: {} rows, {} failed, sha256 {digest}",
                path.display(),
                out.rows.len(),
                out.failures()
            );
        }
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_IO);
        }
    }
    if out.failures() > 0 {
        ExitCode::from(EXIT_PARTIAL)
    } else {
        ExitCode::SUCCESS
    }
}
