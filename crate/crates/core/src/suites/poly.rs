//! Exact identities for Dunkl operators and the intertwiner.

use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{guard, guard_many, label, rng, Config};
use crate::dunkl_poly::{DunklContext, Intertwiner};
use crate::error::Result;
use crate::poly::{monomials_of_degree, Monomial, Poly};
use crate::rational::{q, qi, Q};
use crate::report::CheckRecord;
use crate::riesz::kernel_multiplicativity;

/// Sparse random polynomial of degree at most `max_degree` with small
/// rational coefficients.
pub(crate) fn random_poly(rng: &mut ChaCha8Rng, dim: usize, max_degree: u32, terms: usize) -> Poly {
    let mut p = Poly::zero(dim);
    for _ in 0..terms {
        let deg = rng.random_range(0..=max_degree);
        let mut e = vec![0u32; dim];
        for _ in 0..deg {
            e[rng.random_range(0..dim)] += 1;
        }
        let num: i64 = rng.random_range(-9..=9);
        let den: i64 = rng.random_range(1..=4);
        p.add_term(Monomial(e), q(num, den));
    }
    p
}

/// Nonzero integer direction with entries in `[−3, 3]`.
pub(crate) fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Q> {
    loop {
        let v: Vec<i64> = (0..dim).map(|_| rng.random_range(-3..=3)).collect();
        if v.iter().any(|x| *x != 0) {
            return v.into_iter().map(|x| q(x, 1)).collect();
        }
    }
}

pub(super) fn run(cfg: &Config) -> Result<Vec<CheckRecord>> {
    let parts = cfg
        .poly
        .systems
        .par_iter()
        .enumerate()
        .map(|(i, d)| system_checks(cfg, i as u64, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().flatten().collect())
}

fn system_checks(cfg: &Config, tag: u64, d: &crate::root_system::RootSystemDoc) -> Result<Vec<CheckRecord>> {
    let s = &cfg.poly;
    let lbl = label(d)?;
    let (rs, k) = d.build()?;
    let ctx = DunklContext::new(&rs, &k);
    let dim = ctx.dim();
    let mut r = rng(cfg.seed, tag);
    let mut out = Vec::new();

    let id = format!("poly.commutation[{lbl}]");
    let params = json!({ "system": lbl, "samples": s.samples, "max_degree": s.max_degree });
    let samples: Vec<(Poly, Vec<Q>, Vec<Q>)> = (0..s.samples)
        .map(|_| {
            let p = random_poly(&mut r, dim, s.max_degree, 6);
            let a = random_direction(&mut r, dim);
            let b = random_direction(&mut r, dim);
            (p, a, b)
        })
        .collect();
    let comm = || -> Result<CheckRecord> {
        let mut bad = 0usize;
        for (p, a, b) in &samples {
            let ab = ctx.dunkl_t(a, &ctx.dunkl_t(b, p)?)?;
            let ba = ctx.dunkl_t(b, &ctx.dunkl_t(a, p)?)?;
            if !(&ab - &ba).is_zero() {
                bad += 1;
            }
        }
        Ok(CheckRecord::exact(&id, params.clone(), bad == 0))
    };
    out.push(guard(&id, &params, comm())?);

    let id = format!("poly.laplacian[{lbl}]");
    let params = json!({ "system": lbl, "samples": samples.len().min(10) });
    let lap = || -> Result<CheckRecord> {
        let mut ok = true;
        for (p, _, _) in samples.iter().take(10) {
            ok &= ctx.laplacian(p)? == ctx.laplacian_explicit(p)?;
        }
        Ok(CheckRecord::exact(&id, params.clone(), ok))
    };
    out.push(guard(&id, &params, lap())?);

    let id = format!("poly.intertwiner[{lbl}]");
    let params = json!({ "system": lbl, "degree": s.intertwiner_degree });
    out.extend(guard_many(&id, &params, intertwiner_checks(&ctx, &lbl, s.intertwiner_degree))?);

    if dim <= 2 {
        let id = format!("poly.kernel_multiplicativity[{lbl}]");
        let lambda = random_direction(&mut r, dim);
        let params = json!({ "system": lbl, "degree": s.multiplicativity_degree });
        let ok = kernel_multiplicativity(&ctx, &lambda, s.multiplicativity_degree)
            .map(|ok| CheckRecord::exact(&id, params.clone(), ok));
        out.push(guard(&id, &params, ok)?);
    }
    Ok(out)
}

/// `V1 = 1`, `V(𝒫_n) ⊆ 𝒫_n` and `T_i V = V ∂_i` on every monomial.
fn intertwiner_checks(ctx: &DunklContext, lbl: &str, n_max: usize) -> Result<Vec<CheckRecord>> {
    let tw = Intertwiner::build(ctx, n_max)?;
    let dim = ctx.dim();
    let params = json!({ "system": lbl, "degree": n_max });
    let one = tw.apply(&Poly::one(dim))? == Poly::one(dim);
    let mut graded = true;
    let mut intertwines = true;
    for n in 0..=n_max as u32 {
        for m in monomials_of_degree(dim, n) {
            let p = Poly::monomial(m, qi(1));
            let vp = tw.apply(&p)?;
            graded &= vp.is_zero() || (vp.is_homogeneous() && vp.degree() == Some(n));
            for i in 0..dim {
                intertwines &= ctx.dunkl_t_axis(i, &vp)? == tw.apply(&p.partial(i))?;
            }
        }
    }
    Ok(vec![
        CheckRecord::exact(format!("poly.intertwiner.unit[{lbl}]"), params.clone(), one),
        CheckRecord::exact(format!("poly.intertwiner.graded[{lbl}]"), params.clone(), graded),
        CheckRecord::exact(format!("poly.intertwiner.relation[{lbl}]"), params, intertwines),
    ])
}
