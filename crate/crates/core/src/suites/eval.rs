//! Point evaluation of the kernel and the transform.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::Config;
use crate::error::{DunklError, Result};
use crate::numeric::{DunklTransform, KernelEvaluator};
use crate::rational::qi;
use crate::testfn::TestFn;

pub(super) fn lambda_of(cfg: &Config, dim: usize) -> Result<Vec<Complex64>> {
    let l = &cfg.eval.lambda;
    if l.is_empty() {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[0] = Complex64::new(1.0, 0.0);
        return Ok(v);
    }
    if l.len() != dim {
        return Err(DunklError::Config(format!("eval.lambda needs {dim} entries")));
    }
    Ok(l.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
}

pub(super) fn test_function_of(cfg: &Config, dim: usize) -> Result<TestFn> {
    match &cfg.eval.test_function {
        Some(t) => t.build(dim),
        None => TestFn::gaussian(dim, qi(1)),
    }
}

fn check_point(point: &[f64], dim: usize) -> Result<()> {
    if point.len() != dim {
        return Err(DunklError::Config(format!(
            "point has {} coordinates, the root system lives in dimension {dim}",
            point.len()
        )));
    }
    Ok(())
}

/// `E(λ, x)` with `λ` from the configuration and `x = point`.
pub fn eval_kernel(cfg: &Config, point: &[f64]) -> Result<Value> {
    let (rs, k) = cfg.root_system.build()?;
    let dim = rs.ambient_dim();
    check_point(point, dim)?;
    let lambda = lambda_of(cfg, dim)?;
    let ev = KernelEvaluator::new(&rs, &k, cfg.kernel.clone())?;
    let v = ev.eval(&lambda, point)?;
    Ok(json!({
        "system": super::label(&cfg.root_system)?,
        "lambda": lambda.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "x": point,
        "value": [v.value.re, v.value.im],
        "error_bound": v.error_bound,
    }))
}

/// `F_k φ(ξ)` for the configured test function at `ξ = point`.
pub fn eval_transform(cfg: &Config, point: &[f64]) -> Result<Value> {
    let (rs, k) = cfg.root_system.build()?;
    let dim = rs.ambient_dim();
    check_point(point, dim)?;
    let phi = test_function_of(cfg, dim)?;
    let tr = DunklTransform::new(&rs, &k, cfg.kernel.clone())?;
    let g = tr.grid(cfg.eval.grid.half_width, cfg.eval.grid.n)?;
    let f = g.sample(|x| phi.eval_complex(x));
    let v = tr.forward_at(&f, &[point.to_vec()])?[0];
    Ok(json!({
        "system": super::label(&cfg.root_system)?,
        "xi": point,
        "value": [v.re, v.im],
        "grid": { "half_width": cfg.eval.grid.half_width, "n": cfg.eval.grid.n },
    }))
}
