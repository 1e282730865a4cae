//! Riesz distribution identities.

use num_complex::Complex64;
use rand::RngExt;
use rayon::prelude::*;
use serde_json::json;

use super::{guard_many, max_nan, rel_err, rng, Config, RieszCase};
use crate::error::Result;
use crate::numeric::special::gamma_complex;
use crate::poly::Poly;
use crate::rational::{parse_q, qi, Q};
use crate::report::CheckRecord;
use crate::riesz::{
    convolution_identity_check, gaussian_pair_1d, kernel_multiplicativity, laplace_identity, lowering_check,
    raising_check, RieszFamily,
};
use crate::testfn::TestFn;

const TAG_RIESZ: u64 = 1 << 21;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(super) fn run(cfg: &Config) -> Result<Vec<CheckRecord>> {
    let parts = cfg
        .riesz
        .cases
        .par_iter()
        .enumerate()
        .map(|(i, case)| case_checks(cfg, i as u64, case))
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// Samples `z ∈ ℂⁿ` with `Re zⱼ ∈ [1, 3]`, `Im zⱼ ∈ [−2, 2]`.
pub(crate) fn z_samples(seed: u64, tag: u64, n: usize, count: usize) -> Vec<Vec<Complex64>> {
    let mut r = rng(seed, tag);
    (0..count)
        .map(|_| {
            (0..n)
                .map(|_| c(1.0 + 2.0 * r.random::<f64>(), 4.0 * r.random::<f64>() - 2.0))
                .collect()
        })
        .collect()
}

fn max_rel(s: &[crate::riesz::LaplaceSample]) -> f64 {
    s.iter().map(|v| v.rel_err).fold(0.0, max_nan)
}

fn case_checks(cfg: &Config, tag: u64, case: &RieszCase) -> Result<Vec<CheckRecord>> {
    let rc = &cfg.riesz;
    let lbl = format!("n={}:k={}", case.n, case.k);
    let id = format!("riesz.setup[{lbl}]");
    let params = json!({ "n": case.n, "k": case.k });
    let body = || -> Result<Vec<CheckRecord>> {
        let k: Q = parse_q(&case.k)?;
        let fam = RieszFamily::new(case.n, k.clone())?;
        let n = case.n;
        let mu0 = fam.mu0();
        let zs = z_samples(cfg.seed, TAG_RIESZ + tag, n, rc.z_samples);
        let p = |extra: serde_json::Value| {
            let mut v = json!({ "n": n, "k": case.k, "z_samples": rc.z_samples });
            if let (Some(o), Some(e)) = (v.as_object_mut(), extra.as_object()) {
                o.extend(e.clone());
            }
            v
        };
        let mut out = Vec::new();

        let mu = c(mu0 + 1.0, 0.5);
        let s = laplace_identity(&fam, mu, &zs)?;
        out.push(CheckRecord::at_most(
            format!("riesz.laplace[{lbl}]"),
            p(json!({ "mu": [mu.re, mu.im] })),
            max_rel(&s),
            rc.laplace_tol,
        ));

        let nu = c(mu0 + 1.0, -0.3);
        let s = convolution_identity_check(&fam, mu, nu, rc.shift, &zs)?;
        out.push(CheckRecord::at_most(
            format!("riesz.convolution.laplace[{lbl}]"),
            p(json!({ "mu": [mu.re, mu.im], "nu": [nu.re, nu.im], "shift": rc.shift })),
            max_rel(&s),
            rc.laplace_tol,
        ));

        let x0 = Poly::var(n, 0);
        let phi = TestFn::new(&Poly::one(n) + &(&x0 * &x0), qi(1))?;
        let mu_r = c(mu0 + 1.3, 0.2);
        let r = raising_check(&fam, mu_r, &phi)?;
        out.push(CheckRecord::at_most(
            format!("riesz.raising[{lbl}]"),
            p(json!({ "mu": [mu_r.re, mu_r.im], "phi": "(1 + x1^2) exp(-|x|^2/2)" })),
            r.err,
            rc.pair_tol,
        ));

        let mut lower: f64 = 0.0;
        for (m, a, b) in [(c(mu0 + 0.6, 0.0), 0, 2), (c(mu0 - 0.7, 0.3), 1, 2)] {
            lower = max_nan(lower, lowering_check(&fam, m, &phi, a, b)?.err);
        }
        out.push(CheckRecord::at_most(
            format!("riesz.lowering[{lbl}]"),
            p(json!({ "cases": [[mu0 + 0.6, 0.0, 0, 2], [mu0 - 0.7, 0.3, 1, 2]] })),
            lower,
            rc.pair_tol,
        ));

        let gauss = TestFn::gaussian(n, qi(1))?;
        let wallach = &(&k * qi(n as i64 - 1)) + &crate::rational::q(1, 2);
        let wv = crate::rational::to_f64(&wallach);
        let mut pos = true;
        for (mq, mv) in [(qi(0), 0.0), (wallach.clone(), wv)] {
            pos &= fam.wallach_contains(&mq) && fam.pair(c(mv, 0.0), &gauss)?.re >= 0.0;
        }
        out.push(CheckRecord::exact(
            format!("riesz.positivity[{lbl}]"),
            p(json!({ "mu": [0.0, wv] })),
            pos,
        ));

        if n == 1 {
            let xs = [0.3, 1.0, 4.0];
            let mut worst: f64 = 0.0;
            for x in xs {
                let v = fam.convolve_densities_1d(c(1.0, 0.0), c(1.0, 0.0), x)?;
                worst = max_nan(worst, rel_err(v, fam.density(c(2.0, 0.0), &[x])?));
            }
            out.push(CheckRecord::at_most(
                format!("riesz.classical.r1_r1_is_r2[{lbl}]"),
                p(json!({ "x": xs })),
                worst,
                rc.pair_tol,
            ));

            let phi0 = TestFn::new(&(&Poly::one(1) + &x0) + &(&x0 * &x0), qi(1))?;
            let v = fam.pair(c(0.0, 0.0), &phi0)?;
            out.push(CheckRecord::at_most(
                format!("riesz.delta[{lbl}]"),
                p(json!({ "phi": "(1 + x + x^2) exp(-x^2/2)" })),
                rel_err(v, c(1.0, 0.0)),
                rc.pair_tol,
            ));

            let (a, b) = (c(1.5, 0.5), c(2.2, 0.0));
            let mut worst: f64 = 0.0;
            for x in xs {
                let v = fam.convolve_densities_1d(a, b, x)?;
                worst = max_nan(worst, rel_err(v, fam.density(a + b, &[x])?));
            }
            out.push(CheckRecord::at_most(
                format!("riesz.convolution.direct[{lbl}]"),
                p(json!({ "mu": [a.re, a.im], "nu": [b.re, b.im], "x": xs })),
                worst,
                rc.direct_tol,
            ));
        }

        if k == qi(0) {
            // half-line family: x^{μ−1}/Γ(μ) per coordinate
            let mut worst: f64 = 0.0;
            let m = c(1.7, 0.4);
            for x in [0.4, 1.3, 2.9] {
                let pt: Vec<f64> = (0..n).map(|j| x + 0.5 * j as f64).collect();
                let want: Complex64 = pt.iter().map(|t| c(*t, 0.0).powc(m - 1.0) / gamma_complex(m)).product();
                worst = max_nan(worst, rel_err(fam.density(m, &pt)?, want));
            }
            let want = gaussian_pair_1d(m).powu(n as u32);
            worst = max_nan(worst, rel_err(fam.pair(m, &gauss)?, want));
            out.push(CheckRecord::at_most(
                format!("riesz.classical.family[{lbl}]"),
                p(json!({ "mu": [m.re, m.im] })),
                worst,
                rc.pair_tol,
            ));
        }

        if n == 2 {
            let ctx = fam.context()?;
            let ok = kernel_multiplicativity(&ctx, &[qi(-1), crate::rational::q(-2, 3)], 4)?;
            out.push(CheckRecord::exact(
                format!("riesz.kernel_multiplicativity[{lbl}]"),
                p(json!({ "lambda": ["-1", "-2/3"], "degree": 4 })),
                ok,
            ));
        }
        Ok(out)
    };
    guard_many(&id, &params, body())
}
