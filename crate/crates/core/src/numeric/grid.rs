//! Tensor-product quadrature grids whose weights include `ω`, and sampled
//! functions on them.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::frame::{FactorKind, Frame, FrameFactor};
use super::quadrature::{gauss_jacobi, gauss_legendre, pairwise_sum, pairwise_sum_complex};
use crate::error::{DunklError, Result};

/// Per-factor rule request.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorSpec {
    /// One-dimensional factor on `[lo, hi]` with about `n` nodes.
    Interval { lo: f64, hi: f64, n: usize },
    /// Rank-two factor on the disk of the given radius: `n_r` radial nodes
    /// and `n_theta` angular nodes per sector between root lines.
    Disk { radius: f64, n_r: usize, n_theta: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Box,
    PositiveOrthant,
    TruncatedSpace { radius: f64 },
}

/// Rule for one frame factor: local nodes and weights (weights include the
/// factor weight).
#[derive(Clone, Debug)]
pub struct FactorRule {
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    /// Largest gap between consecutive nodes (1D) or radial/arc spacing (2D).
    pub spacing: f64,
}

#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    frame: Frame,
    rules: Vec<FactorRule>,
    shape: Vec<usize>,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    domain: Domain,
    specs: Vec<FactorSpec>,
}

impl QuadratureGrid {
    pub fn new(frame: &Frame, specs: &[FactorSpec], domain: Domain) -> Result<Self> {
        if specs.len() != frame.factors().len() {
            return Err(DunklError::Config(format!(
                "{} factor specs for {} frame factors",
                specs.len(),
                frame.factors().len()
            )));
        }
        let rules = frame
            .factors()
            .iter()
            .zip(specs)
            .map(|(f, s)| factor_rule(f, s))
            .collect::<Result<Vec<_>>>()?;
        let shape: Vec<usize> = rules.iter().map(|r| r.weights.len()).collect();
        let total: usize = shape.iter().product();
        let mut nodes = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        let mut idx = vec![0usize; rules.len()];
        for _ in 0..total {
            let local: Vec<&[f64]> = rules.iter().zip(&idx).map(|(r, &i)| r.nodes[i].as_slice()).collect();
            nodes.push(frame.embed(&local));
            weights.push(rules.iter().zip(&idx).map(|(r, &i)| r.weights[i]).product());
            for a in (0..idx.len()).rev() {
                idx[a] += 1;
                if idx[a] < shape[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        Ok(QuadratureGrid {
            frame: frame.clone(),
            rules,
            shape,
            nodes,
            weights,
            domain,
            specs: specs.to_vec(),
        })
    }

    /// Grid on `[−L, L]` in every frame direction (disk of radius `L` for
    /// rank-two factors) with `n` nodes per unit of half-width scale:
    /// one-dimensional factors get `2n` nodes.
    pub fn symmetric(frame: &Frame, half_width: f64, n: usize) -> Result<Self> {
        let specs: Vec<FactorSpec> = frame
            .factors()
            .iter()
            .map(|f| match f.kind {
                FactorKind::Plane { .. } => FactorSpec::Disk {
                    radius: half_width,
                    n_r: n,
                    n_theta: (n / 3).max(8),
                },
                _ => FactorSpec::Interval {
                    lo: -half_width,
                    hi: half_width,
                    n: 2 * n,
                },
            })
            .collect();
        QuadratureGrid::new(frame, &specs, Domain::TruncatedSpace { radius: half_width })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn rules(&self) -> &[FactorRule] {
        &self.rules
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn specs(&self) -> &[FactorSpec] {
        &self.specs
    }

    /// Diagonal of the coarsest cell: `√(Σ spacing_f²)`.
    pub fn spacing(&self) -> f64 {
        self.rules.iter().map(|r| r.spacing * r.spacing).sum::<f64>().sqrt()
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        let v: Vec<f64> = self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(x)).collect();
        pairwise_sum(&v)
    }

    pub fn sample(self: &Arc<Self>, f: impl Fn(&[f64]) -> Complex64 + Sync) -> GridFn {
        use rayon::prelude::*;
        let values = self.nodes.par_iter().map(|x| f(x)).collect();
        GridFn {
            grid: self.clone(),
            values,
        }
    }
}

fn factor_rule(f: &FrameFactor, spec: &FactorSpec) -> Result<FactorRule> {
    match (&f.kind, spec) {
        (FactorKind::Plane { roots }, FactorSpec::Disk { radius, n_r, n_theta }) => {
            Ok(disk_rule(roots, *radius, *n_r, *n_theta))
        }
        (FactorKind::Plane { .. }, _) => Err(DunklError::Config(
            "rank-two factors need a disk rule".into(),
        )),
        (_, FactorSpec::Interval { lo, hi, n }) => {
            if hi.is_nan() || lo.is_nan() || hi <= lo || *n < 2 {
                return Err(DunklError::Config(format!(
                    "invalid interval [{lo}, {hi}] with {n} nodes"
                )));
            }
            let (k, an) = match f.kind {
                FactorKind::Line { k, alpha_norm } => (k, alpha_norm),
                _ => (0.0, 1.0),
            };
            Ok(line_rule(*lo, *hi, *n, k, an))
        }
        (_, FactorSpec::Disk { .. }) => Err(DunklError::Config(
            "one-dimensional factors need an interval rule".into(),
        )),
    }
}

/// `∫_lo^hi f(t)(|α||t|)^{2k} dt`. An interval containing the origin is
/// split there and each half gets a Gauss–Jacobi rule with the power at `0`.
fn line_rule(lo: f64, hi: f64, n: usize, k: f64, an: f64) -> FactorRule {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let pref = an.powf(2.0 * k);
    if k > 0.0 && lo < 0.0 && hi > 0.0 {
        let nl = ((n as f64 * -lo / (hi - lo)).round() as usize).max(2);
        let nr = (n.saturating_sub(nl)).max(2);
        let left = gauss_jacobi(nl, 2.0 * k, 0.0).mapped(lo, 0.0, 2.0 * k, 0.0);
        let right = gauss_jacobi(nr, 0.0, 2.0 * k).mapped(0.0, hi, 0.0, 2.0 * k);
        for r in [left, right] {
            for (x, w) in r.nodes.iter().zip(&r.weights) {
                nodes.push(vec![*x]);
                weights.push(w * pref);
            }
        }
    } else {
        let r = gauss_legendre(n).mapped(lo, hi, 0.0, 0.0);
        for (x, w) in r.nodes.iter().zip(&r.weights) {
            nodes.push(vec![*x]);
            weights.push(w * (an * x.abs()).powf(2.0 * k));
        }
    }
    let mut gap: f64 = 0.0;
    for i in 1..nodes.len() {
        gap = gap.max(nodes[i][0] - nodes[i - 1][0]);
    }
    gap = gap.max(nodes[0][0] - lo).max(hi - nodes[nodes.len() - 1][0]);
    FactorRule {
        nodes,
        weights,
        spacing: gap,
    }
}

/// Polar rule on sectors between root lines: angular Gauss–Jacobi with the
/// power `2k` at each bounding line, radial Gauss–Jacobi with `r^{1+γ}`.
fn disk_rule(roots: &[([f64; 2], f64)], radius: f64, n_r: usize, n_theta: usize) -> FactorRule {
    use std::f64::consts::PI;
    let mut lines: Vec<(f64, f64)> = Vec::new();
    for (a, k) in roots {
        let phi = a[1].atan2(a[0]) + PI / 2.0;
        for off in [0.0, PI] {
            let t = (phi + off).rem_euclid(2.0 * PI);
            lines.push((t, *k));
        }
    }
    lines.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let gamma: f64 = roots.iter().map(|(_, k)| 2.0 * k).sum();
    let rr = gauss_jacobi(n_r, 0.0, 1.0 + gamma).mapped(0.0, radius, 0.0, 1.0 + gamma);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let m = lines.len();
    let mut max_arc: f64 = 0.0;
    for s in 0..m {
        let (t0, k0) = lines[s];
        let (mut t1, k1) = lines[(s + 1) % m];
        if s + 1 == m {
            t1 += 2.0 * PI;
        }
        max_arc = max_arc.max((t1 - t0) / n_theta as f64);
        let th = gauss_jacobi(n_theta, 2.0 * k1, 2.0 * k0).mapped(t0, t1, 2.0 * k1, 2.0 * k0);
        for (t, wt) in th.nodes.iter().zip(&th.weights) {
            let u = [t.cos(), t.sin()];
            // angular weight divided by the powers already in the rule
            let omega: f64 = roots
                .iter()
                .map(|(a, k)| (a[0] * u[0] + a[1] * u[1]).abs().powf(2.0 * k))
                .product();
            let denom = (t - t0).powf(2.0 * k0) * (t1 - t).powf(2.0 * k1);
            let ang = wt * omega / denom;
            for (r, wr) in rr.nodes.iter().zip(&rr.weights) {
                nodes.push(vec![r * u[0], r * u[1]]);
                weights.push(wr * ang);
            }
        }
    }
    FactorRule {
        nodes,
        weights,
        spacing: (radius / n_r as f64).hypot(radius * max_arc),
    }
}

/// Complex samples aligned with a grid.
#[derive(Clone, Debug)]
pub struct GridFn {
    pub grid: Arc<QuadratureGrid>,
    pub values: Vec<Complex64>,
}

impl GridFn {
    pub fn new(grid: Arc<QuadratureGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(DunklError::Precondition(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(GridFn { grid, values })
    }

    /// `∫ f ω`.
    pub fn integral(&self) -> Complex64 {
        let v: Vec<Complex64> = self
            .values
            .iter()
            .zip(self.grid.weights())
            .map(|(f, w)| f * w)
            .collect();
        pairwise_sum_complex(&v)
    }

    /// `‖f‖_{L^p(ω)}` for `p ∈ {1, 2}`.
    pub fn norm_l2(&self) -> f64 {
        let v: Vec<f64> = self
            .values
            .iter()
            .zip(self.grid.weights())
            .map(|(f, w)| f.norm_sqr() * w)
            .collect();
        pairwise_sum(&v).sqrt()
    }

    pub fn norm_l1(&self) -> f64 {
        let v: Vec<f64> = self
            .values
            .iter()
            .zip(self.grid.weights())
            .map(|(f, w)| f.norm() * w)
            .collect();
        pairwise_sum(&v)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(&[f64], Complex64) -> Complex64) -> GridFn {
        GridFn {
            grid: self.grid.clone(),
            values: self
                .grid
                .nodes()
                .iter()
                .zip(&self.values)
                .map(|(x, v)| f(x, *v))
                .collect(),
        }
    }

    pub fn sub(&self, other: &GridFn) -> GridFn {
        GridFn {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &GridFn) -> GridFn {
        GridFn {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul(&self, other: &GridFn) -> GridFn {
        GridFn {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> GridFn {
        GridFn {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// JSON `{nodes, weights, values: [[re, im]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "nodes": self.grid.nodes(),
            "weights": self.grid.weights(),
            "values": self.values.iter().map(|v| [v.re, v.im]).collect::<Vec<_>>(),
        })
    }

    /// CSV with columns `x_1..x_n, weight, re, im`.
    pub fn to_csv(&self) -> String {
        let d = self.grid.frame().dim();
        let mut s = String::new();
        for i in 0..d {
            s.push_str(&format!("x{},", i + 1));
        }
        s.push_str("weight,re,im\n");
        for ((x, w), v) in self.grid.nodes().iter().zip(self.grid.weights()).zip(&self.values) {
            for xi in x {
                s.push_str(&format!("{xi:.17e},"));
            }
            s.push_str(&format!("{w:.17e},{:.17e},{:.17e}\n", v.re, v.im));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::root_system::{Multiplicity, RootSystem, RootSystemName};

    fn frame(name: RootSystemName, k: crate::Q) -> Frame {
        let rs = RootSystem::new(name).unwrap();
        let k = Multiplicity::uniform(&rs, k).unwrap();
        Frame::new(&rs, &k).unwrap()
    }

    #[test]
    fn rank1_moment() {
        let f = frame(RootSystemName::Rank1, qi(1));
        let g = QuadratureGrid::symmetric(&f, 12.0, 40).unwrap();
        // ∫ e^{−x²/2} x² dx = √(2π)
        let v = g.integrate(|x| (-0.5 * x[0] * x[0]).exp());
        assert!((v - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
        assert!(g.weights().iter().all(|w| *w > 0.0));
    }

    #[test]
    fn a2_disk_weight_sum() {
        let f = frame(RootSystemName::A(2), q(1, 2));
        let g = QuadratureGrid::symmetric(&f, 10.0, 30).unwrap();
        let v = g.integrate(|x| {
            let r2: f64 = x.iter().map(|t| t * t).sum();
            (-0.5 * r2).exp()
        });
        // (2π)^{3/2} Γ(1+k)Γ(1+2k)Γ(1+3k)/Γ(1+k)³ at k = 1/2
        use crate::numeric::special::gamma;
        let want = (2.0 * std::f64::consts::PI).powf(1.5) * gamma(2.0) * gamma(2.5) / gamma(1.5).powi(2);
        assert!((v - want).abs() / want < 1e-10, "{v} vs {want}");
    }

    #[test]
    fn bad_specs() {
        let f = frame(RootSystemName::Rank1, qi(1));
        let bad = [FactorSpec::Interval { lo: 1.0, hi: 0.0, n: 4 }];
        assert!(QuadratureGrid::new(&f, &bad, Domain::Box).is_err());
    }
}
