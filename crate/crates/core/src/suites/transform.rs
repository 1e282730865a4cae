//! Kernel, Macdonald–Mehta constant, Plancherel and `k = 0` reductions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::RngExt;
use rayon::prelude::*;
use serde_json::json;

use super::poly::random_poly;
use super::{guard, guard_many, label, max_nan, rel_err, rng, Config};
use crate::dunkl_poly::{DunklContext, Intertwiner};
use crate::error::Result;
use crate::numeric::{mehta_closed_form, mehta_constant, DunklTransform, Frame, QuadratureGrid};
use crate::rational::{q, qi};
use crate::report::CheckRecord;
use crate::root_system::{Multiplicity, RootSystem, RootSystemDoc, RootSystemName};
use crate::testfn::TestFn;

/// Stream tags; distinct from the poly suite's per-system tags.
const TAG_PLANCHEREL: u64 = 1 << 20;

pub(super) fn run(cfg: &Config) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    out.extend(kernel_oracle(cfg)?);
    let mehta = cfg
        .transform
        .mehta_systems
        .par_iter()
        .map(|d| mehta_check(cfg, d))
        .collect::<Result<Vec<_>>>()?;
    out.extend(mehta);
    let planch = cfg
        .transform
        .plancherel_systems
        .par_iter()
        .enumerate()
        .map(|(i, d)| plancherel_checks(cfg, i as u64, d))
        .collect::<Result<Vec<_>>>()?;
    out.extend(planch.into_iter().flatten());
    for name in [RootSystemName::Rank1, RootSystemName::A(1)] {
        out.extend(classical_checks(cfg, name)?);
    }
    Ok(out)
}

/// `E_1(1, 1) = cosh 1` for rank one, `k = 1`.
pub(crate) fn rank1_k1_oracle() -> f64 {
    1f64.cosh()
}

fn kernel_oracle(cfg: &Config) -> Result<Vec<CheckRecord>> {
    let t = &cfg.transform;
    let id = "transform.kernel.oracle";
    let params = json!({ "system": "rank1:k=1", "lambda": 1.0, "x": 1.0, "n_max": t.kernel_degree });
    let body = || -> Result<Vec<CheckRecord>> {
        let rs = RootSystem::new(RootSystemName::Rank1)?;
        let k = Multiplicity::uniform(&rs, qi(1))?;
        let tw = Intertwiner::build(&DunklContext::new(&rs, &k), t.kernel_degree)?;
        let want = rank1_k1_oracle();
        let mut out = Vec::new();
        for n in [5, 10, 20, 30].into_iter().filter(|n| *n <= t.kernel_degree) {
            let v = tw.kernel_series(&[1.0], &[1.0], n)?;
            let err = (v.value.re - want).abs() + v.value.im.abs();
            out.push(CheckRecord::at_most(
                format!("transform.kernel.tail[N={n:02}]"),
                json!({ "n": n, "value": v.value.re }),
                err,
                v.tail_bound(),
            ));
        }
        let v = tw.kernel_series(&[1.0], &[1.0], t.kernel_degree)?;
        out.push(CheckRecord::at_most(id, params.clone(), (v.value.re - want).abs(), t.kernel_tol));
        Ok(out)
    };
    guard_many(id, &params, body())
}

fn mehta_check(cfg: &Config, d: &RootSystemDoc) -> Result<CheckRecord> {
    let t = &cfg.transform;
    let lbl = label(d)?;
    let id = format!("transform.mehta[{lbl}]");
    let params = json!({ "system": lbl, "half_width": t.grid.half_width, "n": t.grid.n });
    let body = || -> Result<CheckRecord> {
        let (rs, k) = d.build()?;
        let frame = Frame::new(&rs, &k)?;
        let g = QuadratureGrid::symmetric(&frame, t.grid.half_width, t.grid.n)?;
        let est = mehta_constant(&g, 1e-2 * t.mehta_tol)?;
        let exact = mehta_closed_form(&rs, &k)?;
        let mut p = params.clone();
        p["numeric"] = json!(est.value);
        p["closed_form"] = json!(exact);
        Ok(CheckRecord::at_most(&id, p, (est.value - exact).abs() / exact, t.mehta_tol))
    };
    guard(&id, &params, body())
}

fn plancherel_checks(cfg: &Config, tag: u64, d: &RootSystemDoc) -> Result<Vec<CheckRecord>> {
    let t = &cfg.transform;
    let lbl = label(d)?;
    let id = format!("transform.plancherel[{lbl}]");
    let params = json!({ "system": lbl, "samples": t.plancherel_samples, "n": t.grid.n });
    let body = || -> Result<Vec<CheckRecord>> {
        let (rs, k) = d.build()?;
        let tr = DunklTransform::new(&rs, &k, cfg.kernel.clone())?;
        let space = tr.grid(t.grid.half_width, t.grid.n)?;
        let spectral = tr.grid(t.spectral.half_width, t.spectral.n)?;
        let dim = rs.ambient_dim();
        let mut r = rng(cfg.seed, TAG_PLANCHEREL + tag);
        let mut defect: f64 = 0.0;
        let mut inversion: f64 = 0.0;
        for _ in 0..t.plancherel_samples {
            let mut p = random_poly(&mut r, dim, 3, 3);
            if p.is_zero() {
                p = crate::poly::Poly::one(dim);
            }
            let a = q(r.random_range(1..=4), 2);
            let phi = TestFn::new(p, a)?;
            let f = space.sample(|x| phi.eval_complex(x));
            let fh = tr.forward(&f, &spectral)?;
            let n0 = f.norm_l2();
            defect = max_nan(defect, (fh.norm_l2() - n0).abs() / n0);
            let back = tr.inverse(&fh, &space)?;
            inversion = max_nan(inversion, back.sub(&f).norm_l2() / n0);
        }
        Ok(vec![
            CheckRecord::at_most(&id, params.clone(), defect, t.plancherel_tol),
            CheckRecord::at_most(
                format!("transform.inversion[{lbl}]"),
                params.clone(),
                inversion,
                t.plancherel_tol,
            ),
        ])
    };
    guard_many(&id, &params, body())
}

fn sample_points(dim: usize) -> Vec<Vec<f64>> {
    let base = [0.0, 0.3, -1.1, 2.0, -2.7];
    (0..base.len())
        .map(|i| (0..dim).map(|j| base[(i + 2 * j) % base.len()]).collect())
        .collect()
}

/// `k = 0`: transform, translation and convolution against the classical
/// formulas for `φ = (1 + x₁)e^{−|x|²/2}` and the Gaussian.
fn classical_checks(cfg: &Config, name: RootSystemName) -> Result<Vec<CheckRecord>> {
    let t = &cfg.transform;
    let lbl = format!("{}:k=0", name.label());
    let id = format!("transform.classical[{lbl}]");
    let params = json!({ "system": lbl });
    let body = || -> Result<Vec<CheckRecord>> {
        let rs = RootSystem::new(name.clone())?;
        let k = Multiplicity::uniform(&rs, qi(0))?;
        let tr = DunklTransform::new(&rs, &k, cfg.kernel.clone())?;
        let dim = rs.ambient_dim();
        let space = tr.grid(t.grid.half_width, t.grid.n)?;
        let spectral = tr.grid(t.spectral.half_width, t.spectral.n)?;
        let phi = |x: &[f64]| (1.0 + x[0]) * (-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp();
        let gauss = |x: &[f64]| (-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp();
        let f = space.sample(|x| Complex64::new(phi(x), 0.0));
        let g = space.sample(|x| Complex64::new(gauss(x), 0.0));
        let pts = sample_points(dim);

        let got = tr.forward_at(&f, &pts)?;
        let fourier = pts
            .iter()
            .zip(&got)
            .map(|(xi, v)| {
                let want = Complex64::new(1.0, -xi[0]) * gauss(xi);
                (v - want).norm()
            })
            .fold(0.0, max_nan);

        let shift: Vec<f64> = (0..dim).map(|j| 0.7 - 0.4 * j as f64).collect();
        let got = tr.translate_at(&shift, &f, &spectral, &pts)?;
        let translation = pts
            .iter()
            .zip(&got)
            .map(|(y, v)| {
                let xy: Vec<f64> = y.iter().zip(&shift).map(|(a, b)| a + b).collect();
                (v - phi(&xy)).norm()
            })
            .fold(0.0, max_nan);

        // c_0 F⁻¹(ĝ²) = π^{d/2} e^{−|y|²/4}
        let gh = tr.forward(&g, &spectral)?;
        let prod = gh.mul(&gh).scale(Complex64::new(tr.c_k(), 0.0));
        let got = tr.inverse_at(&prod, &pts)?;
        let convolution = pts
            .iter()
            .zip(&got)
            .map(|(y, v)| {
                let r2: f64 = y.iter().map(|a| a * a).sum();
                let want = PI.powf(0.5 * dim as f64) * (-0.25 * r2).exp();
                rel_err(*v, Complex64::new(want, 0.0))
            })
            .fold(0.0, max_nan);

        let p = |what: &str| json!({ "system": lbl, "quantity": what, "points": pts.len() });
        Ok(vec![
            CheckRecord::at_most(format!("transform.classical.fourier[{lbl}]"), p("fourier"), fourier, t.classical_tol),
            CheckRecord::at_most(
                format!("transform.classical.translation[{lbl}]"),
                p("shift"),
                translation,
                t.classical_tol,
            ),
            CheckRecord::at_most(
                format!("transform.classical.convolution[{lbl}]"),
                p("convolution"),
                convolution,
                t.classical_tol,
            ),
        ])
    };
    guard_many(&id, &params, body())
}
