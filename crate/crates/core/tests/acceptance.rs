//! End-to-end acceptance: every criterion is evaluated from the suite reports
//! under the default configuration, with the criterion's own tolerance and
//! time budget. One line per criterion goes straight to stdout, past the test
//! harness capture, so it shows up in a plain `cargo test` run.

use std::collections::HashMap;
use std::io::Write;
use std::time::{Duration, Instant};

use dunkl_core::dunkl_poly::{DunklContext, Intertwiner};
use dunkl_core::rational::qi;
use dunkl_core::report::{CheckRecord, SuiteReport};
use dunkl_core::suites::{run_suite, Config};
use dunkl_core::{Multiplicity, RootSystem, RootSystemName};

/// The tolerance is a rigorous error bound computed alongside the value.
const BOUND: f64 = f64::INFINITY;

struct Criterion {
    id: u32,
    title: &'static str,
    /// Check families (id up to the bracket) with the loosest tolerance the
    /// criterion allows for each; `0` means exact, `BOUND` a computed bound.
    checks: &'static [(&'static str, f64)],
    suites: &'static [&'static str],
    budget_s: u64,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "exact commutation",
        checks: &[("poly.commutation", 0.0)],
        suites: &["poly"],
        budget_s: 30,
    },
    Criterion {
        id: 2,
        title: "intertwiner relations",
        checks: &[
            ("poly.intertwiner.unit", 0.0),
            ("poly.intertwiner.graded", 0.0),
            ("poly.intertwiner.relation", 0.0),
        ],
        suites: &["poly"],
        budget_s: 60,
    },
    Criterion {
        id: 3,
        title: "kernel oracle and tail bounds",
        checks: &[("transform.kernel.oracle", 1e-10), ("transform.kernel.tail", BOUND)],
        suites: &["transform"],
        budget_s: 5,
    },
    Criterion {
        id: 4,
        title: "Macdonald-Mehta constant",
        checks: &[("transform.mehta", 1e-6)],
        suites: &["transform"],
        budget_s: 60,
    },
    Criterion {
        id: 5,
        title: "Plancherel",
        checks: &[("transform.plancherel", 1e-3)],
        suites: &["transform"],
        budget_s: 60,
    },
    Criterion {
        id: 6,
        title: "translation support",
        checks: &[("supports.translation", 1e-4)],
        suites: &["supports"],
        budget_s: 30,
    },
    Criterion {
        id: 7,
        title: "convolution support and hull variant",
        checks: &[("supports.convolution", 1e-4), ("supports.convolution_hull", 1e-4)],
        suites: &["supports"],
        budget_s: 60,
    },
    Criterion {
        id: 8,
        title: "parametrix identity",
        checks: &[("parametrix.identity", 1e-3), ("parametrix.remainder_smooth", 0.0)],
        suites: &["parametrix"],
        budget_s: 60,
    },
    Criterion {
        id: 9,
        title: "elliptic regularity",
        checks: &[
            ("sobolev.regularity.residual", 1e-3),
            ("sobolev.regularity.ratio", 1.0 + 1e-3),
        ],
        suites: &["sobolev"],
        budget_s: 30,
    },
    Criterion {
        id: 10,
        title: "Riesz identities",
        checks: &[
            ("riesz.classical.r1_r1_is_r2", 1e-6),
            ("riesz.delta", 1e-6),
            ("riesz.laplace", 1e-3),
            ("riesz.convolution.laplace", 1e-3),
            ("riesz.convolution.direct", 1e-4),
            ("riesz.raising", 1e-6),
            ("riesz.lowering", 1e-6),
        ],
        suites: &["riesz"],
        budget_s: 180,
    },
    Criterion {
        id: 11,
        title: "k=0 reduces to the classical calculus",
        checks: &[
            ("transform.classical.fourier", 1e-6),
            ("transform.classical.translation", 1e-6),
            ("transform.classical.convolution", 1e-6),
            ("riesz.classical.family", 1e-6),
        ],
        suites: &["transform", "riesz"],
        budget_s: 60,
    },
];

fn family(id: &str) -> &str {
    id.split('[').next().unwrap_or(id)
}

/// `e(1 + e^{−2})/2 = cosh 1`, the rank-one `k = 1` kernel at `λ = x = 1`.
fn kernel_oracle() -> (bool, String) {
    let rs = RootSystem::new(RootSystemName::Rank1).unwrap();
    let k = Multiplicity::uniform(&rs, qi(1)).unwrap();
    let v = Intertwiner::build(&DunklContext::new(&rs, &k), 30).unwrap();
    let want = std::f64::consts::E * (1.0 + (-2.0f64).exp()) / 2.0;
    let mut ok = true;
    let mut worst = 0.0f64;
    for n in [5, 10, 20, 30] {
        let s = v.kernel_series(&[1.0], &[1.0], n).unwrap();
        let err = (s.value - want).norm();
        ok &= err <= s.tail_bound() + 4.0 * f64::EPSILON;
        if n == 30 {
            ok &= err <= 1e-10;
            worst = err;
        }
    }
    (ok, format!("direct |E_30 - e(1+e^-2)/2| = {worst:.1e}"))
}

fn line(s: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}");
    let _ = out.flush();
}

#[test]
fn acceptance() {
    let cfg = Config::with_seed(20240517);
    let mut reports: HashMap<&str, (SuiteReport, Duration)> = HashMap::new();
    for name in ["poly", "transform", "supports", "parametrix", "sobolev", "riesz"] {
        let t = Instant::now();
        let r = run_suite(name, &cfg).unwrap_or_else(|e| panic!("suite {name}: {e}"));
        reports.insert(name, (r, t.elapsed()));
    }

    let mut failures = Vec::new();
    for c in CRITERIA {
        let records: Vec<&CheckRecord> = c
            .suites
            .iter()
            .flat_map(|s| reports[s].0.checks.iter())
            .filter(|r| c.checks.iter().any(|(f, _)| *f == family(&r.id)))
            .collect();
        let mut elapsed: Duration = c.suites.iter().map(|s| reports[s].1).sum();
        let mut reasons = Vec::new();
        for (fam, _) in c.checks {
            if !records.iter().any(|r| family(&r.id) == *fam) {
                reasons.push(format!("no {fam} checks"));
            }
        }
        for r in &records {
            if !r.pass {
                reasons.push(format!("{} measured {:.3e}", r.id, r.measured));
            }
            let tol = c.checks.iter().find(|(f, _)| *f == family(&r.id)).map_or(0.0, |(_, t)| *t);
            // computed tolerances (e.g. a spectral sup equal to 1) carry roundoff
            if r.tolerance > tol * (1.0 + 1e-12) {
                reasons.push(format!("{} tolerance {:.3e} looser than {:.3e}", r.id, r.tolerance, tol));
            }
            if tol.is_finite() && (r.measured.is_nan() || r.measured > tol) {
                reasons.push(format!("{} measured {:.3e} above {:.3e}", r.id, r.measured, tol));
            }
        }
        let mut extra = String::new();
        if c.id == 3 {
            // the kernel work alone; the rest of its suite belongs to 4, 5, 11
            let t = Instant::now();
            let (ok, msg) = kernel_oracle();
            elapsed = t.elapsed();
            if !ok {
                reasons.push(msg.clone());
            }
            extra = format!(", {msg}");
        }
        if elapsed > Duration::from_secs(c.budget_s) {
            reasons.push(format!("took {elapsed:.1?}, budget {}s", c.budget_s));
        }
        let worst = records.iter().map(|r| r.measured).fold(0.0f64, f64::max);
        if reasons.is_empty() {
            line(format!(
                "criterion {:>2}: PASS  {} ({} checks, worst {:.1e}, {:.1?}{extra})",
                c.id,
                c.title,
                records.len(),
                worst,
                elapsed
            ));
        } else {
            line(format!("criterion {:>2}: FAIL  {}: {}", c.id, c.title, reasons.join("; ")));
            failures.push(c.id);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
