//! Named verification suites, convergence tables and point evaluation.
//!
//! Every suite returns a [`SuiteReport`] whose records are sorted by id.
//! Randomness comes from ChaCha8 streams derived from the configured seed, so
//! reports are reproducible byte for byte.

mod analysis;
mod config;
mod eval;
mod poly;
mod riesz;
mod tables;
mod transform;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use crate::error::{DunklError, Result};
use crate::report::{CheckRecord, SuiteReport};
use crate::root_system::RootSystemDoc;

pub use config::{
    Config, EvalSettings, GridSettings, OutputSettings, ParametrixSettings, PolySettings, RieszCase,
    RieszSettings, SobolevSettings, SupportSettings, TableSettings, TestFnDoc, TransformSettings,
};
pub use eval::{eval_kernel, eval_transform};
pub use tables::{emit_table, Table, TableKind, TableRow};

pub const SUITES: [&str; 6] = ["poly", "transform", "supports", "parametrix", "sobolev", "riesz"];

/// Runs one suite, or all of them for `"all"`. Numerical failures inside a
/// check become failed records; internal arithmetic errors abort.
pub fn run_suite(name: &str, cfg: &Config) -> Result<SuiteReport> {
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        n if SUITES.contains(&n) => vec![n],
        other => return Err(DunklError::Config(format!("unknown suite {other:?}"))),
    };
    let parts = names
        .par_iter()
        .map(|n| match *n {
            "poly" => poly::run(cfg),
            "transform" => transform::run(cfg),
            "supports" => analysis::run_supports(cfg),
            "parametrix" => analysis::run_parametrix(cfg),
            "sobolev" => analysis::run_sobolev(cfg),
            "riesz" => riesz::run(cfg),
            _ => unreachable!(),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new(name, cfg.seed, parts.into_iter().flatten().collect()))
}

/// Independent stream `tag` of the configured generator.
pub(crate) fn rng(seed: u64, tag: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(tag);
    r
}

/// `A(2):k=1/2` style label.
pub(crate) fn label(d: &RootSystemDoc) -> Result<String> {
    let name = d.to_name()?.label();
    Ok(if d.k_by_orbit.is_empty() {
        format!("{name}:k=0")
    } else {
        format!("{name}:k={}", d.k_by_orbit.join(","))
    })
}

/// Turns a recoverable error into a failed record.
pub(crate) fn guard(id: &str, params: &Value, r: Result<CheckRecord>) -> Result<CheckRecord> {
    match r {
        Ok(c) => Ok(c),
        Err(e) if e.is_internal() => Err(e),
        Err(e) => Ok(CheckRecord::failed(id, params.clone(), e.to_string())),
    }
}

/// Same as [`guard`] for checks producing several records.
pub(crate) fn guard_many(id: &str, params: &Value, r: Result<Vec<CheckRecord>>) -> Result<Vec<CheckRecord>> {
    match r {
        Ok(c) => Ok(c),
        Err(e) if e.is_internal() => Err(e),
        Err(e) => Ok(vec![CheckRecord::failed(id, params.clone(), e.to_string())]),
    }
}

/// `|a − b| / |b|`, absolute when `b = 0`.
/// Maximum that keeps NaN, so a broken sample cannot look like a pass.
pub(crate) fn max_nan(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

pub(crate) fn rel_err(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    let d = (a - b).norm();
    if b.norm() == 0.0 {
        d
    } else {
        d / b.norm()
    }
}
