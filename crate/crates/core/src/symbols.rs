//! Elliptic symbols, reciprocal symbols, parametrices and Sobolev norms.
//!
//! Sign convention: `F(T_ξ f) = iξ·F f`, so the operator `p(T)` acts on the
//! spectral side as multiplication by `σ(ξ) = p(iξ)`. The operator
//! `1 − Δ_k` corresponds to `p = 1 − |x|²` and has symbol `1 + |ξ|²`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dunkl_poly::{DunklContext, GroupRationalFn};
use crate::error::{DunklError, Result};
use crate::numeric::grid::{GridFn, QuadratureGrid};
use crate::numeric::special::ln_gamma;
use crate::numeric::transform::DunklTransform;
use crate::numeric::Frame;
use crate::poly::{monomials_of_degree, Poly};
use crate::rational::{to_f64, Q};
use crate::testfn::TestFn;

/// Number of sphere samples used by ellipticity certificates.
pub const SPHERE_SAMPLES: usize = 10_000;

/// `⟨x⟩ = (1 + |x|²)^{1/2}`.
pub fn bracket(x: &[f64]) -> f64 {
    (1.0 + x.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// `σ(ξ) = p(iξ)`.
pub fn symbol_value(p: &Poly, xi: &[f64]) -> Complex64 {
    let z: Vec<Complex64> = xi.iter().map(|v| Complex64::new(0.0, *v)).collect();
    p.eval_complex(&z)
}

/// Quasi-uniform points on the unit sphere of `ℝ^dim` together with a bound
/// on the distance from any sphere point to the nearest sample.
pub fn sphere_samples(dim: usize, n: usize) -> Result<(Vec<Vec<f64>>, f64)> {
    match dim {
        1 => Ok((vec![vec![1.0], vec![-1.0]], 0.0)),
        2 => {
            let pts = (0..n)
                .map(|j| {
                    let t = 2.0 * PI * j as f64 / n as f64;
                    vec![t.cos(), t.sin()]
                })
                .collect();
            Ok((pts, PI / n as f64))
        }
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            let pts = (0..n)
                .map(|j| {
                    let z = 1.0 - (2.0 * j as f64 + 1.0) / n as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * j as f64;
                    vec![r * t.cos(), r * t.sin(), z]
                })
                .collect();
            Ok((pts, 2.0 * (4.0 * PI / n as f64).sqrt()))
        }
        _ => Err(DunklError::Unsupported(format!(
            "sphere sampling in dimension {dim}"
        ))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EllipticSymbol {
    #[serde(skip)]
    pub p: Poly,
    pub m: u32,
    /// Certified lower bound of `|p_m|` on the unit sphere.
    pub c: f64,
    pub sampled_min: f64,
    pub margin: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Ellipticity {
    Elliptic(EllipticSymbol),
    Rejected { m: u32, sampled_min: f64, margin: f64 },
}

impl Ellipticity {
    pub fn symbol(&self) -> Option<&EllipticSymbol> {
        match self {
            Ellipticity::Elliptic(s) => Some(s),
            Ellipticity::Rejected { .. } => None,
        }
    }
}

/// Certifies `min_{|x|=1} |p_m(x)| > 0` by sampling and subtracting the
/// Lipschitz margin `L·h`, with `L = Σ|c_β||β|` bounding `|∇p_m|` on the unit
/// ball and `h` the covering radius of the sample.
pub fn certify_elliptic(p: &Poly) -> Result<Ellipticity> {
    let m = p
        .degree()
        .ok_or_else(|| DunklError::Precondition("zero polynomial".into()))?;
    let pm = p.homogeneous_part(m);
    let (pts, h) = sphere_samples(p.dim(), SPHERE_SAMPLES)?;
    let sampled_min = pts
        .iter()
        .map(|x| pm.eval_f64(x).abs())
        .fold(f64::INFINITY, f64::min);
    let lip: f64 = pm
        .terms()
        .map(|(mono, c)| to_f64(c).abs() * mono.degree() as f64)
        .sum();
    let margin = lip * h;
    let c = sampled_min - margin;
    Ok(if c > 0.0 {
        Ellipticity::Elliptic(EllipticSymbol {
            p: p.clone(),
            m,
            c,
            sampled_min,
            margin,
            samples: pts.len(),
        })
    } else {
        Ellipticity::Rejected {
            m,
            sampled_min,
            margin,
        }
    })
}

/// `θ(t)`: `0` on `t ≤ ½`, `1` on `t ≥ 1`, smooth in between.
pub fn smooth_step(t: f64) -> f64 {
    fn f(x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            (-1.0 / x).exp()
        }
    }
    let s = 2.0 * t - 1.0;
    let a = f(s);
    let b = f(1.0 - s);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// `q = θ(|ξ|/R_out)/σ(ξ)`: smooth, equal to `1/σ` outside `B_{R_out}` and
/// zero on `B_{R_out/2}`. `R_out = 2R` where `R ≥ 1` satisfies
/// `(c/2)R^m > Σ_{j<m} B_j R^j` with `B_j` the absolute coefficient sum of the
/// degree-`j` part; then `|σ(ξ)| > (c/2)|ξ|^m` for `|ξ| ≥ R`.
#[derive(Clone, Debug, Serialize)]
pub struct ReciprocalSymbol {
    pub symbol: EllipticSymbol,
    pub r_bound: f64,
    pub r_out: f64,
}

impl ReciprocalSymbol {
    pub fn new(symbol: &EllipticSymbol) -> Result<Self> {
        let m = symbol.m;
        let b: Vec<f64> = (0..m).map(|j| symbol.p.abs_coeff_sum(j)).collect();
        let ok = |r: f64| 0.5 * symbol.c * r.powi(m as i32) > b.iter().enumerate().map(|(j, bj)| bj * r.powi(j as i32)).sum::<f64>();
        let mut hi = 1.0;
        while !ok(hi) {
            hi *= 2.0;
            if hi > 1e8 {
                return Err(DunklError::NotConverged("no radius found for the symbol lower bound".into()));
            }
        }
        if hi > 1.0 {
            let mut lo = hi / 2.0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if ok(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        }
        Ok(ReciprocalSymbol {
            symbol: symbol.clone(),
            r_bound: hi,
            r_out: 2.0 * hi,
        })
    }

    pub fn sigma(&self, xi: &[f64]) -> Complex64 {
        symbol_value(&self.symbol.p, xi)
    }

    pub fn eval(&self, xi: &[f64]) -> Complex64 {
        let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        let t = smooth_step(r / self.r_out);
        if t == 0.0 {
            return Complex64::zero();
        }
        let s = self.sigma(xi);
        // 1/σ written out to keep full precision for complex σ
        let d = s.norm_sqr();
        Complex64::new(s.re / d, -s.im / d) * t
    }

    /// `1/σ` as an exact rational function; needs a real symbol, i.e. only
    /// even-degree terms in `p`.
    pub fn as_rational(&self) -> Result<GroupRationalFn> {
        let p = &self.symbol.p;
        let mut sigma = Poly::zero(p.dim());
        for (mono, c) in p.terms() {
            let d = mono.degree();
            if d % 2 == 1 {
                return Err(DunklError::Unsupported("complex symbol has no real rational form".into()));
            }
            let sign = if d % 4 == 0 { Q::one() } else { -Q::one() };
            sigma.add_term(mono.clone(), c * sign);
        }
        Ok(GroupRationalFn::quotient(Poly::one(p.dim()), sigma))
    }
}

/// A symbol given either as a polynomial or as an exact rational function.
#[derive(Clone, Debug)]
pub enum SymbolFn {
    Polynomial(Poly),
    Rational(GroupRationalFn),
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolRow {
    pub beta: Vec<u32>,
    /// `sup_x |T^β a(x)| ⟨x⟩^{|β| − order}` over the sample points.
    pub constant: f64,
}

/// Empirical constants of the symbol-class estimate
/// `|T^β a(x)| ≤ C_β ⟨x⟩^{order − |β|}`. Derivatives are exact; only the
/// supremum is sampled.
pub fn verify_symbol_estimate(
    ctx: &DunklContext,
    a: &SymbolFn,
    order: f64,
    b_max: u32,
    points: &[Vec<f64>],
) -> Result<Vec<SymbolRow>> {
    let d = ctx.dim();
    let mut rows = Vec::new();
    for n in 0..=b_max {
        for mono in monomials_of_degree(d, n) {
            let beta = mono.0.clone();
            let eval: Box<dyn Fn(&[f64]) -> f64> = match a {
                SymbolFn::Polynomial(p) => {
                    let mut f = p.clone();
                    for (i, &e) in beta.iter().enumerate() {
                        for _ in 0..e {
                            f = ctx.dunkl_t_axis(i, &f)?;
                        }
                    }
                    Box::new(move |x| f.eval_f64(x))
                }
                SymbolFn::Rational(r) => {
                    let f = r.dunkl_t_multi(ctx, &beta)?;
                    Box::new(move |x| f.eval_f64(x))
                }
            };
            let constant = points
                .iter()
                .map(|x| eval(x).abs() * bracket(x).powf(n as f64 - order))
                .fold(0.0, f64::max);
            rows.push(SymbolRow { beta, constant });
        }
    }
    Ok(rows)
}

/// Spectral parametrix: `F E = q/c_k` and `F R = (1 − σq)/c_k`, so that
/// `E ∗ p(T)φ + R ∗ φ = φ` with `F(f ∗ g) = c_k F f · F g`.
#[derive(Clone, Debug)]
pub struct Parametrix {
    pub reciprocal: ReciprocalSymbol,
    pub spectral_e: GridFn,
    pub remainder_hat: GridFn,
    c_k: f64,
}

impl Parametrix {
    pub fn build(tr: &DunklTransform, reciprocal: &ReciprocalSymbol, spectral: &Arc<QuadratureGrid>) -> Result<Self> {
        let c = tr.c_k();
        let spectral_e = spectral.sample(|xi| reciprocal.eval(xi) / c);
        let remainder_hat = spectral.sample(|xi| (Complex64::new(1.0, 0.0) - reciprocal.sigma(xi) * reciprocal.eval(xi)) / c);
        Ok(Parametrix {
            reciprocal: reciprocal.clone(),
            spectral_e,
            remainder_hat,
            c_k: c,
        })
    }

    /// `R = F⁻¹(F R)` on the given grid.
    pub fn remainder_density(&self, tr: &DunklTransform, out: &Arc<QuadratureGrid>) -> Result<GridFn> {
        tr.inverse(&self.remainder_hat, out)
    }

    /// `‖R‖_{H^s}` from its transform, which vanishes outside `B_{R_out}`.
    pub fn remainder_sobolev(&self, s: f64) -> f64 {
        sobolev_norm_spectral(&self.remainder_hat, s)
    }

    /// `E ∗ g + R ∗ f` for `g = p(T)φ` and `f = φ` sampled on space grids.
    pub fn apply(&self, tr: &DunklTransform, g: &GridFn, f: &GridFn, out: &Arc<QuadratureGrid>) -> Result<GridFn> {
        let spectral = self.spectral_e.grid.clone();
        let gh = tr.forward(g, &spectral)?;
        let fh = tr.forward(f, &spectral)?;
        let c = Complex64::new(self.c_k, 0.0);
        let total = gh.mul(&self.spectral_e).add(&fh.mul(&self.remainder_hat)).scale(c);
        tr.inverse(&total, out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParametrixReport {
    pub r_out: f64,
    pub defect_sup: f64,
    pub remainder_h8: f64,
}

/// Identity defect `sup|φ − E ∗ p(T)φ − R ∗ φ|` with `p(T)φ` computed exactly
/// in the polynomial-times-Gaussian class.
pub fn parametrix_identity(
    tr: &DunklTransform,
    ctx: &DunklContext,
    p: &Poly,
    phi: &TestFn,
    space: &Arc<QuadratureGrid>,
    spectral: &Arc<QuadratureGrid>,
) -> Result<ParametrixReport> {
    let sym = certify_elliptic(p)?
        .symbol()
        .cloned()
        .ok_or_else(|| DunklError::Precondition("operator is not elliptic".into()))?;
    let recip = ReciprocalSymbol::new(&sym)?;
    let par = Parametrix::build(tr, &recip, spectral)?;
    let pt_phi = phi.apply_poly_op(ctx, p)?;
    let g = space.sample(|x| pt_phi.eval_complex(x));
    let f = space.sample(|x| phi.eval_complex(x));
    let back = par.apply(tr, &g, &f, space)?;
    Ok(ParametrixReport {
        r_out: recip.r_out,
        defect_sup: back.sub(&f).sup_norm(),
        remainder_h8: par.remainder_sobolev(8.0),
    })
}

/// `(∫ ⟨ξ⟩^{2s} |ĝ(ξ)|² ω(ξ) dξ)^{1/2}` for a function given on a spectral grid.
pub fn sobolev_norm_spectral(fh: &GridFn, s: f64) -> f64 {
    fh.map(|xi, v| v * bracket(xi).powf(s)).norm_l2()
}

/// `‖f‖_{H^s}` through the forward transform on `spectral`.
pub fn sobolev_norm(tr: &DunklTransform, f: &GridFn, s: f64, spectral: &Arc<QuadratureGrid>) -> Result<f64> {
    Ok(sobolev_norm_spectral(&tr.forward(f, spectral)?, s))
}

/// `(Σ_{|α|≤s} ‖T^α φ‖²_{L²(ω)})^{1/2}` with `T^α φ` exact.
pub fn sobolev_norm_derivatives(ctx: &DunklContext, phi: &TestFn, s: u32, grid: &Arc<QuadratureGrid>) -> Result<f64> {
    let mut total = 0.0;
    for n in 0..=s {
        for mono in monomials_of_degree(ctx.dim(), n) {
            let mut f = phi.clone();
            for (i, &e) in mono.0.iter().enumerate() {
                for _ in 0..e {
                    f = f.dunkl_t_axis(ctx, i)?;
                }
            }
            total += grid.sample(|x| f.eval_complex(x)).norm_l2().powi(2);
        }
    }
    Ok(total.sqrt())
}

/// `C_s = c_k⁻¹ (∫⟨ξ⟩^{−2s} ω)^{1/2}`, so that `sup|u| ≤ C_s ‖u‖_{H^s}`
/// whenever `2s > dim + γ` (`γ` the homogeneity of `ω`).
pub fn embedding_constant(frame: &Frame, c_k: f64, s: f64) -> Result<f64> {
    let a = 0.5 * (frame.dim() as f64 + frame.homogeneity());
    if s <= a {
        return Err(DunklError::Precondition(format!("order {s} must exceed {a}")));
    }
    // ∫_S ω from c_k = ∫_S ω · 2^{a−1} Γ(a)
    let sphere = c_k / ((a - 1.0) * std::f64::consts::LN_2 + ln_gamma(a)).exp();
    // ∫_0^∞ r^{2a−1}(1+r²)^{−s} dr = ½ B(a, s−a)
    let radial = 0.5 * (ln_gamma(a) + ln_gamma(s - a) - ln_gamma(s)).exp();
    Ok((sphere * radial).sqrt() / c_k)
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub operator: String,
    pub s: f64,
    pub m: u32,
    pub norm_f: f64,
    pub norm_u: f64,
    pub ratio: f64,
    /// `sup ⟨ξ⟩^m/|σ(ξ)|` over the spectral grid.
    pub ratio_bound: f64,
    pub residual: f64,
}

/// Solves `p(T)u = f` spectrally (`û = f̂/σ`) and compares `‖u‖_{H^{s+m}}`
/// with `‖f‖_{H^s}`. The residual `‖p(T)u − f‖` recomputes `F u` from the
/// sampled solution.
pub fn regularity_experiment(
    tr: &DunklTransform,
    p: &Poly,
    f: &GridFn,
    s: f64,
    spectral: &Arc<QuadratureGrid>,
) -> Result<RegularityReport> {
    let m = p
        .degree()
        .ok_or_else(|| DunklError::Precondition("zero polynomial".into()))?;
    let sig: Vec<Complex64> = spectral.nodes().iter().map(|xi| symbol_value(p, xi)).collect();
    let c0 = sig.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    if c0 <= 1e-12 {
        return Err(DunklError::Precondition(
            "symbol vanishes on the spectral grid; use the parametrix route".into(),
        ));
    }
    let ratio_bound = spectral
        .nodes()
        .iter()
        .zip(&sig)
        .map(|(xi, v)| bracket(xi).powi(m as i32) / v.norm())
        .fold(0.0, f64::max);
    let fh = tr.forward(f, spectral)?;
    let uh = GridFn::new(spectral.clone(), fh.values.iter().zip(&sig).map(|(a, b)| a / b).collect())?;
    let u = tr.inverse(&uh, &f.grid)?;
    let uh2 = tr.forward(&u, spectral)?;
    let put = GridFn::new(spectral.clone(), uh2.values.iter().zip(&sig).map(|(a, b)| a * b).collect())?;
    let residual = tr.inverse(&put, &f.grid)?.sub(f).norm_l2();
    let norm_f = sobolev_norm_spectral(&fh, s);
    let norm_u = sobolev_norm_spectral(&uh2, s + m as f64);
    Ok(RegularityReport {
        operator: describe_poly(p),
        s,
        m,
        norm_f,
        norm_u,
        ratio: norm_u / norm_f,
        ratio_bound,
        residual,
    })
}

/// Compact human-readable form, e.g. `1 - x1^2 - x2^2`.
pub fn describe_poly(p: &Poly) -> String {
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(b.0 .0.cmp(&a.0 .0)));
    let mut out = String::new();
    for (i, (mono, c)) in terms.iter().enumerate() {
        let neg = *c < &Q::zero();
        let mag = if neg { -(*c).clone() } else { (*c).clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let vars: Vec<String> = mono
            .0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(j, e)| if *e == 1 { format!("x{}", j + 1) } else { format!("x{}^{}", j + 1, e) })
            .collect();
        if vars.is_empty() || !mag.is_one() {
            out.push_str(&crate::rational::format_q(&mag));
            if !vars.is_empty() {
                out.push('*');
            }
        }
        out.push_str(&vars.join("*"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::KernelStrategy;
    use crate::rational::{q, qi};
    use crate::root_system::{Multiplicity, RootSystem, RootSystemName};

    fn one_minus_norm(d: usize) -> Poly {
        &Poly::one(d) - &Poly::norm_sq(d)
    }

    #[test]
    fn certificates() {
        let lap = Poly::norm_sq(2);
        let e = certify_elliptic(&lap).unwrap();
        let s = e.symbol().unwrap();
        assert!((s.sampled_min - 1.0).abs() < 1e-15);
        assert!(s.c > 0.99 && s.c <= 1.0);
        let x1 = Poly::var(2, 0);
        let x2 = Poly::var(2, 1);
        let hyper = &(&x1 * &x1) - &(&x2 * &x2);
        assert!(certify_elliptic(&hyper).unwrap().symbol().is_none());
        let lower = &lap + &x1;
        assert_eq!(certify_elliptic(&lower).unwrap().symbol().unwrap().m, 2);
        let one_d = certify_elliptic(&Poly::norm_sq(1)).unwrap();
        assert_eq!(one_d.symbol().unwrap().c, 1.0);
    }

    #[test]
    fn certificate_scales() {
        let lap = Poly::norm_sq(3);
        let a = certify_elliptic(&lap).unwrap().symbol().unwrap().c;
        let b = certify_elliptic(&lap.scale(&qi(3))).unwrap().symbol().unwrap().c;
        assert!((b - 3.0 * a).abs() < 1e-12);
    }

    #[test]
    fn reciprocal_is_exact_outside() {
        let p = one_minus_norm(1);
        let sym = certify_elliptic(&p).unwrap().symbol().cloned().unwrap();
        let r = ReciprocalSymbol::new(&sym).unwrap();
        // (c/2)R² > 1 with c = 1 gives R > √2
        assert!((r.r_bound - 2f64.sqrt()).abs() < 1e-9);
        for x in [r.r_out, 5.0, 40.0, -7.5] {
            let v = r.eval(&[x]) * r.sigma(&[x]);
            assert!((v - 1.0).norm() < 1e-12);
        }
        assert_eq!(r.eval(&[0.5]), Complex64::zero());
    }

    #[test]
    fn symbol_table_rank1() {
        let rs = RootSystem::new(RootSystemName::Rank1).unwrap();
        for kk in [qi(0), q(1, 2), qi(1)] {
            let k = Multiplicity::uniform(&rs, kk.clone()).unwrap();
            let ctx = DunklContext::new(&rs, &k);
            let pts: Vec<Vec<f64>> = (1..50).map(|j| vec![j as f64 * 0.3]).collect();
            let rows = verify_symbol_estimate(&ctx, &SymbolFn::Polynomial(Poly::var(1, 0)), 1.0, 1, &pts).unwrap();
            let want = 1.0 + 2.0 * to_f64(&kk);
            assert!((rows[1].constant - want).abs() < 1e-12);
        }
    }

    #[test]
    fn regularity_rank1() {
        let rs = RootSystem::new(RootSystemName::Rank1).unwrap();
        let k = Multiplicity::uniform(&rs, qi(1)).unwrap();
        let tr = DunklTransform::new(&rs, &k, KernelStrategy::Auto).unwrap();
        let g = tr.grid(24.0, 120).unwrap();
        let spec = tr.grid(10.0, 120).unwrap();
        let f = g.sample(|x| Complex64::new((-0.5 * x[0] * x[0]).exp(), 0.0));
        for s in [0.0, 1.0, 2.0] {
            let r = regularity_experiment(&tr, &one_minus_norm(1), &f, s, &spec).unwrap();
            assert!(r.residual < 1e-6, "{r:?}");
            assert!(r.ratio <= 1.0 + 1e-9);
            assert!((r.ratio_bound - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn embedding_constant_k0_line() {
        // k = 0, n = 1, s = 1: ∫(1+ξ²)^{−1} = π, c = √(2π)
        let rs = RootSystem::new(RootSystemName::Empty(1)).unwrap();
        let k = Multiplicity::uniform(&rs, qi(0)).unwrap();
        let frame = Frame::new(&rs, &k).unwrap();
        let c = (2.0 * PI).sqrt();
        let want = PI.sqrt() / c;
        assert!((embedding_constant(&frame, c, 1.0).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn describe() {
        assert_eq!(describe_poly(&one_minus_norm(2)), "1 - x1^2 - x2^2");
    }
}
