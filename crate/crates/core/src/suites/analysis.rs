//! Support, parametrix and Sobolev suites.

use std::sync::Arc;

use num_complex::Complex64;
use serde_json::json;

use super::{guard, guard_many, max_nan, Config, GridSettings};
use crate::dunkl_poly::{DunklContext, GroupRationalFn};
use crate::error::Result;
use crate::numeric::support::{ball_grid, bump, bump_profile, mollifier};
use crate::numeric::{
    verify_support, Domain, DunklTransform, FactorSpec, Frame, QuadratureGrid, SupportKind,
};
use crate::poly::Poly;
use crate::rational::qi;
use crate::report::CheckRecord;
use crate::root_system::{Multiplicity, RootSystem, RootSystemName, SupportGeometry};
use crate::symbols::{
    certify_elliptic, embedding_constant, parametrix_identity, regularity_experiment, sobolev_norm,
    sobolev_norm_derivatives, verify_symbol_estimate, ReciprocalSymbol, SymbolFn,
};
use crate::testfn::TestFn;

fn system(name: RootSystemName, k: i64) -> Result<(RootSystem, Multiplicity)> {
    let rs = RootSystem::new(name)?;
    let k = Multiplicity::uniform(&rs, qi(k))?;
    Ok((rs, k))
}

/// Box grid `[−L, L]` per frame factor with `n` nodes each.
fn box_grid(frame: &Frame, g: &GridSettings) -> Result<Arc<QuadratureGrid>> {
    let specs: Vec<FactorSpec> = frame
        .factors()
        .iter()
        .map(|_| FactorSpec::Interval {
            lo: -g.half_width,
            hi: g.half_width,
            n: g.n,
        })
        .collect();
    Ok(Arc::new(QuadratureGrid::new(frame, &specs, Domain::Box)?))
}

/// `1 − |x|²`, the operator `1 − Δ_k` with symbol `1 + |ξ|²`.
pub(crate) fn one_minus_norm(d: usize) -> Poly {
    &Poly::one(d) - &Poly::norm_sq(d)
}

pub(super) fn run_supports(cfg: &Config) -> Result<Vec<CheckRecord>> {
    let s = &cfg.supports;
    let mut out = Vec::new();

    let id = "supports.translation[rank1:k=1]";
    let params = json!({
        "x": s.translation_x, "radius": 1.0, "spectral": s.translation_spectral.n,
        "output": s.translation_output.n, "threshold": s.threshold,
    });
    let translation = || -> Result<CheckRecord> {
        let (rs, k) = system(RootSystemName::Rank1, 1)?;
        let tr = DunklTransform::new(&rs, &k, cfg.kernel.clone())?;
        let frame = tr.frame().clone();
        let fg = ball_grid(&frame, &[vec![0.0]], 1.0, s.input_n)?;
        let f = fg.sample(|x| Complex64::new(bump(x, &[0.0], 1.0, s.bump_power), 0.0));
        let spectral = box_grid(&frame, &s.translation_spectral)?;
        let outg = box_grid(&frame, &s.translation_output)?;
        let tf = tr.translate(&[s.translation_x], &f, &spectral, &outg)?;
        let geom = SupportGeometry::new(&rs)?;
        let delta = outg.spacing();
        let kind = SupportKind::Translation {
            x: vec![s.translation_x],
            r: 1.0,
        };
        let rep = verify_support(&geom, &kind, &tf, delta, s.threshold)?;
        let mut p = params.clone();
        p["delta"] = json!(delta);
        Ok(CheckRecord::at_most(id, p, rep.outside_mass_ratio, s.threshold))
    };
    out.push(guard(id, &params, translation())?);

    let id = "supports.convolution[A(1):k=1]";
    let params = json!({
        "radius": s.convolution_radius, "g_center": s.convolution_center,
        "spectral": s.convolution_spectral.n, "output": s.convolution_output.n, "threshold": s.threshold,
    });
    let convolution = || -> Result<Vec<CheckRecord>> {
        let (rs, k) = system(RootSystemName::A(1), 1)?;
        let tr = DunklTransform::new(&rs, &k, cfg.kernel.clone())?;
        let frame = tr.frame().clone();
        let r = s.convolution_radius;
        let c = s.convolution_center.clone();
        let local = |x: &[f64]| -> Vec<Vec<f64>> { frame.factors().iter().map(|f| f.project(x)).collect() };
        let fg = ball_grid(&frame, &local(&[0.0, 0.0]), r, s.input_n)?;
        let f = fg.sample(|x| Complex64::new(bump(x, &[0.0, 0.0], r, s.bump_power), 0.0));
        let gg = ball_grid(&frame, &local(&c), r, s.input_n)?;
        let g = gg.sample(|x| Complex64::new(bump(x, &c, r, s.bump_power), 0.0));
        let spectral = box_grid(&frame, &s.convolution_spectral)?;
        let outg = box_grid(&frame, &s.convolution_output)?;
        let h = tr.convolve(&f, &g, &spectral, &outg)?;
        let geom = SupportGeometry::new(&rs)?;
        let delta = outg.spacing();
        let mut p = params.clone();
        p["delta"] = json!(delta);
        let plain = verify_support(
            &geom,
            &SupportKind::Convolution {
                r,
                g_center: c.clone(),
                g_radius: r,
            },
            &h,
            delta,
            s.threshold,
        )?;
        let hull = verify_support(
            &geom,
            &SupportKind::ConvolutionHull {
                f_center: vec![0.0, 0.0],
                f_radius: r,
                g_center: c.clone(),
                g_radius: r,
            },
            &h,
            delta,
            s.threshold,
        )?;
        Ok(vec![
            CheckRecord::at_most(id, p.clone(), plain.outside_mass_ratio, s.threshold),
            CheckRecord::at_most("supports.convolution_hull[A(1):k=1]", p, hull.outside_mass_ratio, s.threshold),
        ])
    };
    out.extend(guard_many(id, &params, convolution())?);

    for (name, lbl) in [(RootSystemName::Rank1, "rank1:k=1"), (RootSystemName::A(1), "A(1):k=1")] {
        let id = format!("supports.mollifier_mass[{lbl}]");
        let params = json!({ "system": lbl, "eps": [0.5, 0.1], "power": s.bump_power });
        let body = || -> Result<CheckRecord> {
            let (rs, k) = system(name.clone(), 1)?;
            let frame = Frame::new(&rs, &k)?;
            let psi = bump_profile(&frame, s.bump_power, s.input_n)?;
            let mut worst: f64 = 0.0;
            for eps in [0.5, 0.1] {
                worst = max_nan(worst, (mollifier(&psi, eps, s.mollifier_tol)?.norm_l1() - 1.0).abs());
            }
            Ok(CheckRecord::at_most(&id, params.clone(), worst, s.mollifier_tol))
        };
        out.push(guard(&id, &params, body())?);
    }
    Ok(out)
}

pub(super) fn run_parametrix(cfg: &Config) -> Result<Vec<CheckRecord>> {
    let pm = &cfg.parametrix;
    let mut out = Vec::new();

    for d in 1..=3usize {
        let id = format!("parametrix.certificate.laplacian[dim={d}]");
        let params = json!({ "dim": d, "operator": "|x|^2" });
        let body = || -> Result<CheckRecord> {
            let lap = Poly::norm_sq(d);
            let a = certify_elliptic(&lap)?;
            let b = certify_elliptic(&lap.scale(&qi(3)))?;
            let ok = match (a.symbol(), b.symbol()) {
                (Some(a), Some(b)) => {
                    a.c > 0.0 && a.c <= 1.0 && (b.c - 3.0 * a.c).abs() <= 1e-12 * b.c.max(1.0)
                }
                _ => false,
            };
            Ok(CheckRecord::exact(&id, params.clone(), ok))
        };
        out.push(guard(&id, &params, body())?);
    }

    let id = "parametrix.certificate.rejects_hyperbolic";
    let params = json!({ "operator": "x1^2 - x2^2" });
    let hyper = || -> Result<CheckRecord> {
        let x1 = Poly::var(2, 0);
        let x2 = Poly::var(2, 1);
        let p = &(&x1 * &x1) - &(&x2 * &x2);
        Ok(CheckRecord::exact(id, params.clone(), certify_elliptic(&p)?.symbol().is_none()))
    };
    out.push(guard(id, &params, hyper())?);

    let (rs, k) = system(RootSystemName::Rank1, 1)?;
    let ctx = DunklContext::new(&rs, &k);
    let p = one_minus_norm(1);

    let id = "parametrix.reciprocal_exact[rank1:k=1]";
    let params = json!({ "operator": "1 - x1^2" });
    let recip = || -> Result<Vec<CheckRecord>> {
        let sym = certify_elliptic(&p)?
            .symbol()
            .cloned()
            .ok_or_else(|| crate::DunklError::Precondition("not elliptic".into()))?;
        let r = ReciprocalSymbol::new(&sym)?;
        let mut worst: f64 = 0.0;
        for j in 0..200 {
            let x = r.r_out + 0.37 * j as f64;
            for xi in [x, -x] {
                worst = max_nan(worst, (r.eval(&[xi]) * r.sigma(&[xi]) - 1.0).norm());
            }
        }
        let q: GroupRationalFn = r.as_rational()?;
        let pts: Vec<Vec<f64>> = (1..=200).map(|j| vec![0.25 * j as f64]).collect();
        let rows = verify_symbol_estimate(&ctx, &SymbolFn::Rational(q), -2.0, pm.symbol_order, &pts)?;
        let cmax = rows.iter().map(|r| r.constant).fold(0.0, max_nan);
        let mut p2 = params.clone();
        p2["order"] = json!(-2);
        p2["derivatives"] = json!(pm.symbol_order);
        p2["constants"] = json!(rows.iter().map(|r| r.constant).collect::<Vec<_>>());
        Ok(vec![
            CheckRecord::at_most(id, params.clone(), worst, 1e-12),
            CheckRecord::exact("parametrix.symbol_class[rank1:k=1]", p2, cmax.is_finite() && cmax < 1e6),
        ])
    };
    out.extend(guard_many(id, &params, recip())?);

    let id = "parametrix.identity[rank1:k=1]";
    let params = json!({ "operator": "1 - x1^2", "phi": "exp(-x^2/2)", "space": pm.space.n, "spectral": pm.spectral.n });
    let ident = || -> Result<Vec<CheckRecord>> {
        let tr = DunklTransform::new(&rs, &k, cfg.kernel.clone())?;
        let space = tr.grid(pm.space.half_width, pm.space.n)?;
        let spectral = tr.grid(pm.spectral.half_width, pm.spectral.n)?;
        let phi = TestFn::gaussian(1, qi(1))?;
        let rep = parametrix_identity(&tr, &ctx, &p, &phi, &space, &spectral)?;
        let mut p2 = params.clone();
        p2["r_out"] = json!(rep.r_out);
        let mut p3 = p2.clone();
        p3["h8_norm"] = json!(rep.remainder_h8);
        Ok(vec![
            CheckRecord::at_most(id, p2, rep.defect_sup, pm.identity_tol),
            CheckRecord::exact(
                "parametrix.remainder_smooth[rank1:k=1]",
                p3,
                rep.remainder_h8.is_finite(),
            ),
        ])
    };
    out.extend(guard_many(id, &params, ident())?);
    Ok(out)
}

pub(super) fn run_sobolev(cfg: &Config) -> Result<Vec<CheckRecord>> {
    let so = &cfg.sobolev;
    let (rs, k) = system(RootSystemName::Rank1, 1)?;
    let ctx = DunklContext::new(&rs, &k);
    let p = one_minus_norm(1);
    let mut out = Vec::new();

    let id = "sobolev.setup[rank1:k=1]";
    let params = json!({ "space": so.space.n, "spectral": so.spectral.n });
    let body = || -> Result<Vec<CheckRecord>> {
        let tr = DunklTransform::new(&rs, &k, cfg.kernel.clone())?;
        let space = tr.grid(so.space.half_width, so.space.n)?;
        let spectral = tr.grid(so.spectral.half_width, so.spectral.n)?;
        let phi = TestFn::gaussian(1, qi(1))?;
        let f = space.sample(|x| phi.eval_complex(x));
        let mut recs = Vec::new();

        for &s in &so.orders {
            let r = regularity_experiment(&tr, &p, &f, s, &spectral)?;
            let base = json!({ "operator": r.operator, "s": s, "m": r.m });
            let mut pr = base.clone();
            pr["norm_f"] = json!(r.norm_f);
            pr["norm_u"] = json!(r.norm_u);
            recs.push(CheckRecord::at_most(
                format!("sobolev.regularity.residual[s={s}]"),
                base,
                r.residual,
                so.residual_tol,
            ));
            recs.push(CheckRecord::at_most(
                format!("sobolev.regularity.ratio[s={s}]"),
                pr,
                r.ratio,
                r.ratio_bound + so.ratio_slack,
            ));
        }

        let l2 = f.norm_l2();
        let h0 = sobolev_norm(&tr, &f, 0.0, &spectral)?;
        recs.push(CheckRecord::at_most(
            "sobolev.h0_is_l2",
            json!({ "l2": l2, "h0": h0 }),
            (h0 - l2).abs() / l2,
            so.norm_tol,
        ));

        let norms: Vec<f64> = [0.0, 1.0, 2.0, 3.0]
            .iter()
            .map(|s| sobolev_norm(&tr, &f, *s, &spectral))
            .collect::<Result<_>>()?;
        let monotone = norms.windows(2).all(|w| w[0] <= w[1]);
        recs.push(CheckRecord::exact("sobolev.monotone_in_s", json!({ "norms": norms }), monotone));

        // Σ_{j≤s} ξ^{2j} ≤ (1+ξ²)^s ≤ C(s,⌊s/2⌋) Σ_{j≤s} ξ^{2j}
        for s in [1u32, 2] {
            let hs = norms[s as usize];
            let ds = sobolev_norm_derivatives(&ctx, &phi, s, &space)?;
            let binom: f64 = if s == 1 { 1.0 } else { 2.0 };
            let lower = (ds - hs) / hs;
            let upper = (hs - binom.sqrt() * ds) / hs;
            recs.push(CheckRecord::at_most(
                format!("sobolev.derivative_equivalence[s={s}]"),
                json!({ "spectral": hs, "derivatives": ds, "constant": binom }),
                max_nan(max_nan(lower, upper), 0.0),
                so.norm_tol,
            ));
        }

        let s_emb = 2.0;
        let c = embedding_constant(tr.frame(), tr.c_k(), s_emb)?;
        let sup = f.sup_norm();
        let hs = norms[2];
        recs.push(CheckRecord::exact(
            "sobolev.embedding[s=2]",
            json!({ "sup": sup, "constant": c, "h2": hs }),
            sup <= c * hs,
        ));
        Ok(recs)
    };
    out.extend(guard_many(id, &params, body())?);
    Ok(out)
}
