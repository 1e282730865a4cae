//! `dunkl`: run verification suites, emit convergence tables and evaluate the
//! kernel or transform at a point.
//!
//! Exit codes: 0 pass, 1 a check or table row failed, 2 bad configuration,
//! 3 internal or numerical error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dunkl_core::suites::{emit_table, eval_kernel, eval_transform, run_suite, Config, TableKind};
use dunkl_core::DunklError;

#[derive(Parser)]
#[command(name = "dunkl", version, about = "Rational Dunkl calculus verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON configuration; `seed` is mandatory.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Replaces a top-level configuration key, `key=<json>`.
    #[arg(long = "set", value_name = "KEY=JSON")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite (poly, transform, supports, parametrix, sobolev, riesz, all)
    /// and write its JSON report.
    Verify {
        suite: String,
        #[command(flatten)]
        common: Common,
        /// Report path; defaults to `output.report`, then stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a convergence table as CSV (mehta_convergence,
    /// plancherel_convergence, kernel_truncation).
    Table {
        kind: String,
        #[command(flatten)]
        common: Common,
        /// CSV path; defaults to `output.table`, then stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the kernel `E(λ, x)` or the transform of the configured test
    /// function at a point.
    Eval {
        what: EvalKind,
        #[command(flatten)]
        common: Common,
        /// Comma-separated coordinates, e.g. `1.0,-0.5`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalKind {
    Kernel,
    Transform,
}

fn exit_code(e: &DunklError) -> u8 {
    match e {
        DunklError::Config(_)
        | DunklError::Parse(_)
        | DunklError::Json(_)
        | DunklError::Io(_)
        | DunklError::InvalidRootSystem(_)
        | DunklError::InvalidMultiplicity(_) => 2,
        _ => 3,
    }
}

fn load(common: &Common) -> Result<Config, DunklError> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| DunklError::Config(format!("cannot read {}: {e}", common.config.display())))?;
    let mut overrides = Vec::new();
    for s in &common.set {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| DunklError::Config(format!("--set expects key=value, got {s:?}")))?;
        overrides.push((k.trim().to_string(), v.to_string()));
    }
    if let Some(seed) = common.seed {
        overrides.push(("seed".into(), seed.to_string()));
    }
    Config::from_json(&text, &overrides)
}

fn parse_point(s: &str) -> Result<Vec<f64>, DunklError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| DunklError::Config(format!("bad coordinate {t:?} in --point")))
        })
        .collect()
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), DunklError> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(DunklError::from),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}").and_then(|_| out.flush()) {
                // a closed pipe (e.g. `| head`) is not an error of the run
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn configure_threads() -> Result<(), DunklError> {
    let Ok(v) = std::env::var("DUNKL_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| DunklError::Config(format!("DUNKL_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| DunklError::Config(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<bool, DunklError> {
    configure_threads()?;
    match cli.command {
        Command::Verify { suite, common, out } => {
            let cfg = load(&common)?;
            let report = run_suite(&suite, &cfg)?;
            let path = out.or_else(|| cfg.output.report.as_ref().map(PathBuf::from));
            write_output(path.as_deref(), &report.to_json())?;
            let failed: Vec<_> = report.failures().map(|c| c.id.as_str()).collect();
            eprintln!(
                "{}: {} checks, {} failed",
                report.suite,
                report.checks.len(),
                failed.len()
            );
            for id in &failed {
                eprintln!("  FAIL {id}");
            }
            Ok(report.pass)
        }
        Command::Table { kind, common, out } => {
            let cfg = load(&common)?;
            let kind: TableKind = kind.parse()?;
            let table = emit_table(kind, &cfg)?;
            let path = out.or_else(|| cfg.output.table.as_ref().map(PathBuf::from));
            write_output(path.as_deref(), table.to_csv().trim_end())?;
            if !table.pass {
                eprintln!("{}: some rows are flagged", kind.name());
            }
            Ok(table.pass)
        }
        Command::Eval { what, common, point } => {
            let cfg = load(&common)?;
            let x = parse_point(&point)?;
            let v = match what {
                EvalKind::Kernel => eval_kernel(&cfg, &x)?,
                EvalKind::Transform => eval_transform(&cfg, &x)?,
            };
            write_output(None, &serde_json::to_string_pretty(&v)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
