//! Riesz distributions of type `A_{n−1}` on the orthant `ℝ₊ⁿ`.
//!
//! `R_μ` has density `Δ(x)^{μ−μ₀−1} ω(x) / Γₙ(μ)` for `Re μ > μ₀ = k(n−1)`,
//! with `Δ(x) = x₁⋯xₙ` and `ω(x) = ∏_{i<j}|x_i − x_j|^{2k}`. Other parameters
//! are reached through `Δ(T)R_{μ+1} = R_μ`, which in weak form reads
//! `⟨R_μ, φ⟩ = (−1)ⁿ⟨R_{μ+1}, Δ(T)φ⟩`.
//!
//! Direct quadratures are available for `n ≤ 2`. For `n = 2` the orthant is
//! parametrized as `x = r(a, 1−a)`, and the `A₁` kernel factors as
//! `E(−z, x) = e^{−(z₁+z₂)(x₁+x₂)/2} E_k(−(z₁−z₂)(x₁−x₂)/2)`.

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dunkl_poly::{DunklContext, Intertwiner};
use crate::error::{DunklError, Result};
use crate::numeric::kernel::rank1_kernel;
use crate::numeric::quadrature::{gauss_jacobi, graded_power_rule, pairwise_sum_complex, GaussRule};
use crate::numeric::special::{gamma_complex, gamma_ur, is_gamma_pole, ln_gamma};
use crate::poly::{Monomial, Poly};
use crate::rational::{qi, to_f64, Q};
use crate::root_system::{Multiplicity, RootSystem, RootSystemName};
use crate::testfn::TestFn;

/// Radial and angular node counts for `n = 2` quadratures.
const RADIAL_NODES: usize = 160;
const ANGULAR_NODES: usize = 48;

/// The pair `(n, k)` fixing the family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RieszFamily {
    pub n: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub k: Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GammaN {
    Value { re: f64, im: f64 },
    Pole,
}

impl GammaN {
    pub fn value(&self) -> Option<Complex64> {
        match self {
            GammaN::Value { re, im } => Some(Complex64::new(*re, *im)),
            GammaN::Pole => None,
        }
    }
}

impl RieszFamily {
    pub fn new(n: usize, k: Q) -> Result<Self> {
        if n == 0 {
            return Err(DunklError::Precondition("dimension must be positive".into()));
        }
        if k.is_negative() {
            return Err(DunklError::InvalidMultiplicity("k must be nonnegative".into()));
        }
        Ok(RieszFamily { n, k })
    }

    pub fn k_f64(&self) -> f64 {
        to_f64(&self.k)
    }

    /// `μ₀ = k(n−1)`.
    pub fn mu0(&self) -> f64 {
        self.k_f64() * (self.n as f64 - 1.0)
    }

    /// `A_{n−1}` in `ℝⁿ` (`{0}` in `ℝ¹` for `n = 1`) with multiplicity `k`.
    pub fn root_system(&self) -> Result<(RootSystem, Multiplicity)> {
        let rs = if self.n == 1 {
            RootSystem::new(RootSystemName::Empty(1))?
        } else {
            RootSystem::new(RootSystemName::A(self.n - 1))?
        };
        let k = Multiplicity::uniform(&rs, self.k.clone())?;
        Ok((rs, k))
    }

    pub fn context(&self) -> Result<DunklContext> {
        let (rs, k) = self.root_system()?;
        Ok(DunklContext::new(&rs, &k))
    }

    /// `c_k / (2π)^{n/2} = ∏_{j=1}^{n} Γ(1+jk)/Γ(1+k)`.
    fn mehta_ratio(&self) -> f64 {
        let k = self.k_f64();
        (1..=self.n)
            .map(|j| ln_gamma(1.0 + j as f64 * k) - ln_gamma(1.0 + k))
            .sum::<f64>()
            .exp()
    }

    /// `Γₙ(μ) = c_k (2π)^{−n/2} ∏_{j=1}^{n} Γ(μ − k(j−1))`.
    pub fn gamma_n(&self, mu: Complex64) -> GammaN {
        let k = self.k_f64();
        let mut v = Complex64::new(self.mehta_ratio(), 0.0);
        for j in 0..self.n {
            let a = mu - k * j as f64;
            if is_gamma_pole(a) {
                return GammaN::Pole;
            }
            v *= gamma_complex(a);
        }
        GammaN::Value { re: v.re, im: v.im }
    }

    fn gamma_n_value(&self, mu: Complex64) -> Result<Complex64> {
        self.gamma_n(mu)
            .value()
            .ok_or_else(|| DunklError::Precondition(format!("Γₙ has a pole at μ = {mu}")))
    }

    /// `{0, k, …, k(n−1)} ∪ (k(n−1), ∞)`, decided exactly.
    pub fn wallach_contains(&self, mu: &Q) -> bool {
        let top = &self.k * qi(self.n as i64 - 1);
        if *mu > top {
            return true;
        }
        (0..self.n).any(|j| *mu == &self.k * qi(j as i64))
    }

    /// Density `Δ^{μ−μ₀−1} ω / Γₙ(μ)` at a point of the open orthant.
    pub fn density(&self, mu: Complex64, x: &[f64]) -> Result<Complex64> {
        self.check_direct(mu)?;
        if x.len() != self.n || x.iter().any(|v| *v <= 0.0) {
            return Err(DunklError::Precondition("point must lie in the open orthant".into()));
        }
        let k = self.k_f64();
        let delta: f64 = x.iter().product();
        let mut omega = 1.0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                omega *= (x[i] - x[j]).abs().powf(2.0 * k);
            }
        }
        let e = mu - self.mu0() - 1.0;
        Ok(Complex64::new(delta, 0.0).powc(e) * omega / self.gamma_n_value(mu)?)
    }

    fn check_direct(&self, mu: Complex64) -> Result<()> {
        if mu.re <= self.mu0() {
            return Err(DunklError::Precondition(format!(
                "density needs Re μ > μ₀ = {}",
                self.mu0()
            )));
        }
        Ok(())
    }

    /// Smallest `m ≥ 0` with `Re μ + m > μ₀`.
    pub fn lowering_depth(&self, mu: Complex64) -> usize {
        let gap = self.mu0() - mu.re;
        if gap < 0.0 {
            0
        } else {
            gap.floor() as usize + 1
        }
    }

    /// `⟨R_μ, φ⟩` by direct quadrature (`Re μ > μ₀`, `n ≤ 2`).
    pub fn pair_direct(&self, mu: Complex64, phi: &TestFn) -> Result<Complex64> {
        self.check_direct(mu)?;
        if phi.dim() != self.n {
            return Err(DunklError::Precondition("test function has the wrong dimension".into()));
        }
        let a = to_f64(phi.scale());
        let g = self.gamma_n_value(mu)?;
        match self.n {
            1 => {
                // ∫_0^∞ x^{μ−1+j} e^{−a x²/2} dx = ½(2/a)^{(μ+j)/2} Γ((μ+j)/2)
                let mut s = Complex64::zero();
                for (m, c) in phi.poly().terms() {
                    let e = mu + m.0[0] as f64;
                    s += half_gaussian_moment(e - 1.0, a) * to_f64(c);
                }
                Ok(s / g)
            }
            2 => {
                let c = mu - self.mu0() - 1.0;
                let k = self.k_f64();
                let terms: Vec<(u32, u32, f64)> =
                    phi.poly().terms().map(|(m, c)| (m.0[0], m.0[1], to_f64(c))).collect();
                // for fixed a the radial integral is a Gaussian moment
                let inner = |aa: f64, bb: f64| -> Complex64 {
                    let gs = a * (aa * aa + bb * bb);
                    let base = Complex64::new(aa * bb, 0.0).powc(c - c.re);
                    terms
                        .iter()
                        .map(|(i, j, cf)| {
                            let e = 2.0 * c + 2.0 * k + 1.0 + (*i + *j) as f64;
                            half_gaussian_moment(e, gs) * aa.powi(*i as i32) * bb.powi(*j as i32) * *cf
                        })
                        .sum::<Complex64>()
                        * base
                };
                Ok(chamber_integral(c, k, inner) / g)
            }
            _ => Err(DunklError::Unsupported("direct pairing needs n ≤ 2".into())),
        }
    }

    /// `⟨R_μ, φ⟩ = (−1)^{nm} ⟨R_{μ+m}, Δ(T)^m φ⟩` for a given admissible `m`.
    pub fn pair_lowered(&self, mu: Complex64, phi: &TestFn, m: usize) -> Result<Complex64> {
        if mu.re + m as f64 <= self.mu0() {
            return Err(DunklError::Precondition(format!("lowering depth {m} is too small")));
        }
        let ctx = self.context()?;
        let delta = delta_poly(self.n);
        let mut f = phi.clone();
        for _ in 0..m {
            f = f.apply_poly_op(&ctx, &delta)?;
        }
        let sign = if (self.n * m).is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(self.pair_direct(mu + m as f64, &f)? * sign)
    }

    /// `⟨R_μ, φ⟩` with the minimal lowering depth.
    pub fn pair(&self, mu: Complex64, phi: &TestFn) -> Result<Complex64> {
        self.pair_lowered(mu, phi, self.lowering_depth(mu))
    }

    /// `L R_μ(z) = ∫ E(−z, x) dR_μ(x)` by quadrature, with
    /// `L R_μ(z) = Δ(z)^m L R_{μ+m}(z)` below `μ₀`.
    pub fn laplace(&self, mu: Complex64, z: &[Complex64]) -> Result<LaplaceValue> {
        if z.len() != self.n || z.iter().any(|v| v.re <= 0.0) {
            return Err(DunklError::Precondition("need Re z > 0 componentwise".into()));
        }
        let m = self.lowering_depth(mu);
        let lifted = mu + m as f64;
        let (v, tail) = self.laplace_direct(lifted, z)?;
        let dz: Complex64 = z.iter().product();
        let f = dz.powi(m as i32);
        Ok(LaplaceValue {
            value: v * f,
            tail_bound: tail * f.norm(),
            lowered_by: m,
        })
    }

    fn laplace_direct(&self, mu: Complex64, z: &[Complex64]) -> Result<(Complex64, f64)> {
        let s = z.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
        let g = self.gamma_n_value(mu)?;
        match self.n {
            1 => {
                // ∫_0^∞ e^{−zx} x^{μ−1} dx on [0, L] plus a gamma tail
                let b = mu.re - 1.0;
                let len = (b.max(0.0) + 45.0) / s;
                let rule = radial_rule(b, mu.im, s, len);
                let terms: Vec<Complex64> = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| (-z[0] * x).exp() * Complex64::new(*x, 0.0).powc(mu - mu.re) * w)
                    .collect();
                let tail = gamma_tail(b, s, len);
                Ok((pairwise_sum_complex(&terms) / g, tail / g.norm()))
            }
            2 => {
                let k = self.k_f64();
                let c = mu - self.mu0() - 1.0;
                let beta = 2.0 * c.re + 2.0 * k + 1.0;
                let len = (beta + 45.0) / s;
                let rule = radial_rule(beta, 2.0 * c.im, s, len);
                let zp = (z[0] + z[1]) * 0.5;
                let zm = (z[0] - z[1]) * 0.5;
                let inner = |aa: f64, bb: f64| -> Complex64 {
                    let d = aa - bb;
                    let base = Complex64::new(aa * bb, 0.0).powc(c - c.re);
                    let terms: Vec<Complex64> = rule
                        .nodes
                        .iter()
                        .zip(&rule.weights)
                        .map(|(r, w)| {
                            let rr = Complex64::new(*r, 0.0);
                            (-zp * r).exp() * rank1_kernel(k, -zm * (r * d)) * rr.powc(2.0 * (c - c.re)) * w
                        })
                        .collect();
                    pairwise_sum_complex(&terms) * base
                };
                let v = chamber_integral(c, k, inner);
                // |E(−z,x)| ≤ e^{−s(x₁+x₂)} and the angular weight integrates to ≤ 1
                let tail = gamma_tail(beta, s, len);
                Ok((v / g, tail / g.norm()))
            }
            _ => Err(DunklError::Unsupported("Laplace quadrature needs n ≤ 2".into())),
        }
    }

    /// `Δ(z)^{−μ}` with principal powers.
    pub fn laplace_closed_form(&self, mu: Complex64, z: &[Complex64]) -> Complex64 {
        z.iter().map(|v| v.powc(-mu)).product()
    }

    /// `∫_0^x R_μ(x−t) R_ν(t) dt` for `n = 1`.
    pub fn convolve_densities_1d(&self, mu: Complex64, nu: Complex64, x: f64) -> Result<Complex64> {
        if self.n != 1 {
            return Err(DunklError::Unsupported("direct convolution needs n = 1".into()));
        }
        self.check_direct(mu)?;
        self.check_direct(nu)?;
        let (a, b) = (mu.re - 1.0, nu.re - 1.0);
        let f = |t: f64| Complex64::new(x - t, 0.0).powc(mu - mu.re) * Complex64::new(t, 0.0).powc(nu - nu.re);
        let terms: Vec<Complex64> = if mu.im == 0.0 && nu.im == 0.0 {
            let rule = gauss_jacobi(ANGULAR_NODES, a, b).mapped(0.0, x, a, b);
            rule.nodes.iter().zip(&rule.weights).map(|(t, w)| f(*t) * w).collect()
        } else {
            // graded towards both endpoints; t^b near 0 and (x−t)^a near x
            let h = 0.5 * x;
            let left = graded_power_rule(b, h, h, GRADED_TOL, 0);
            let right = graded_power_rule(a, h, h, GRADED_TOL, 0);
            let l = left.nodes.iter().zip(&left.weights).map(|(t, w)| f(*t) * ((x - t).powf(a) * w));
            let r = right.nodes.iter().zip(&right.weights).map(|(u, w)| f(x - u) * ((x - u).powf(b) * w));
            l.chain(r).collect()
        };
        Ok(pairwise_sum_complex(&terms) / (gamma_complex(mu) * gamma_complex(nu)))
    }
}

/// `∫_0^∞ x^e e^{−a x²/2} dx = ½ (2/a)^{(e+1)/2} Γ((e+1)/2)`.
fn half_gaussian_moment(e: Complex64, a: f64) -> Complex64 {
    let h = (e + 1.0) * 0.5;
    Complex64::new(2.0 / a, 0.0).powc(h) * gamma_complex(h) * 0.5
}

/// `∫_L^∞ r^b e^{−s r} dr`.
fn gamma_tail(b: f64, s: f64, len: f64) -> f64 {
    (ln_gamma(b + 1.0) - (b + 1.0) * s.ln()).exp() * gamma_ur(b + 1.0, s * len)
}

/// Relative mass left unresolved next to an oscillating endpoint.
const GRADED_TOL: f64 = 1e-14;

/// Rule for `∫_0^len r^β g(r) dr` where `g` decays like `e^{−s r}` and carries
/// `r^{iτ}`; graded towards the origin when `τ ≠ 0`.
fn radial_rule(beta: f64, tau: f64, s: f64, len: f64) -> GaussRule {
    if tau == 0.0 {
        gauss_jacobi(RADIAL_NODES, 0.0, beta).mapped(0.0, len, 0.0, beta)
    } else {
        graded_power_rule(beta, (1.0 / s).min(len), len, GRADED_TOL, RADIAL_NODES)
    }
}

/// `∫_0^1 (a(1−a))^{Re c} |2a−1|^{2k} f(a) da` split at `a = ½`, with the
/// endpoint powers absorbed by the weights. `f` carries `(a(1−a))^{i Im c}`;
/// when `Im c ≠ 0` the rule is graded towards `a = 0` and `a = 1`. `f`
/// receives `(a, 1−a)` so that both stay accurate near the endpoints.
fn chamber_integral(c: Complex64, k: f64, f: impl Fn(f64, f64) -> Complex64) -> Complex64 {
    let scale = 4f64.powf(k);
    let cr = c.re;
    let mut terms = Vec::new();
    if c.im == 0.0 {
        // (½, 1): weight (1−a)^c (a−½)^{2k}; remainder a^c 2^{2k}
        let r1 = gauss_jacobi(ANGULAR_NODES, cr, 2.0 * k).mapped(0.5, 1.0, cr, 2.0 * k);
        // (0, ½): weight (½−a)^{2k} a^c; remainder (1−a)^c 2^{2k}
        let r0 = gauss_jacobi(ANGULAR_NODES, 2.0 * k, cr).mapped(0.0, 0.5, 2.0 * k, cr);
        for (a, w) in r1.nodes.iter().zip(&r1.weights) {
            terms.push(f(*a, 1.0 - a) * (a.powf(cr) * scale * w));
        }
        for (a, w) in r0.nodes.iter().zip(&r0.weights) {
            terms.push(f(*a, 1.0 - a) * ((1.0 - a).powf(cr) * scale * w));
        }
        return pairwise_sum_complex(&terms);
    }
    let half = ANGULAR_NODES / 2;
    let inner = gauss_jacobi(half, 0.0, 2.0 * k).mapped(0.5, 0.75, 0.0, 2.0 * k);
    let edge = graded_power_rule(cr, 0.25, 0.25, GRADED_TOL, 0);
    // a and 1 − a contribute symmetrically in the weight; only f differs
    for (d, w) in inner.nodes.iter().zip(&inner.weights) {
        let wt = (d * (1.0 - d)).powf(cr) * scale * w;
        terms.push(f(*d, 1.0 - d) * wt);
        terms.push(f(1.0 - d, *d) * wt);
    }
    for (t, w) in edge.nodes.iter().zip(&edge.weights) {
        let a = 1.0 - t;
        let wt = (a - 0.5).powf(2.0 * k) * a.powf(cr) * scale * w;
        terms.push(f(a, *t) * wt);
        terms.push(f(*t, a) * wt);
    }
    pairwise_sum_complex(&terms)
}

/// `Δ(x) = x₁⋯xₙ`.
pub fn delta_poly(n: usize) -> Poly {
    Poly::monomial(Monomial(vec![1; n]), qi(1))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LaplaceValue {
    pub value: Complex64,
    pub tail_bound: f64,
    pub lowered_by: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LaplaceSample {
    pub z: Vec<[f64; 2]>,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub rel_err: f64,
}

fn cpair(v: Complex64) -> [f64; 2] {
    [v.re, v.im]
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// `L R_μ(z)` by quadrature against `Δ(z)^{−μ}` at each sample.
pub fn laplace_identity(fam: &RieszFamily, mu: Complex64, zs: &[Vec<Complex64>]) -> Result<Vec<LaplaceSample>> {
    zs.par_iter()
        .map(|z| {
            let lhs = fam.laplace(mu, z)?.value;
            let rhs = fam.laplace_closed_form(mu, z);
            Ok(LaplaceSample {
                z: z.iter().map(|v| cpair(*v)).collect(),
                lhs: cpair(lhs),
                rhs: cpair(rhs),
                rel_err: rel(lhs, rhs),
            })
        })
        .collect()
}

/// Laplace route of `R_μ ∗ R_ν = R_{μ+ν}`: the product
/// `L R_μ(s̲+z) · L R_ν(s̲+z)` against `L R_{μ+ν}(s̲+z)`, each factor by its
/// own quadrature, with `s̲ = (s, …, s)`.
pub fn convolution_identity_check(
    fam: &RieszFamily,
    mu: Complex64,
    nu: Complex64,
    s: f64,
    zs: &[Vec<Complex64>],
) -> Result<Vec<LaplaceSample>> {
    if s <= 0.0 {
        return Err(DunklError::Precondition("shift s must be positive".into()));
    }
    zs.par_iter()
        .map(|z| {
            let w: Vec<Complex64> = z.iter().map(|v| v + s).collect();
            let lhs = fam.laplace(mu, &w)?.value * fam.laplace(nu, &w)?.value;
            let rhs = fam.laplace(mu + nu, &w)?.value;
            Ok(LaplaceSample {
                z: z.iter().map(|v| cpair(*v)).collect(),
                lhs: cpair(lhs),
                rhs: cpair(rhs),
                rel_err: rel(lhs, rhs),
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    /// Relative error, or absolute error when the right side vanishes.
    pub err: f64,
}

fn pair_check(lhs: Complex64, rhs: Complex64) -> PairCheck {
    let err = if rhs.norm() == 0.0 { lhs.norm() } else { rel(lhs, rhs) };
    PairCheck {
        lhs: cpair(lhs),
        rhs: cpair(rhs),
        err,
    }
}

/// `⟨R_μ, Δφ⟩` against `∏_{j=1}^{n} (μ − k(j−1)) ⟨R_{μ+1}, φ⟩`.
pub fn raising_check(fam: &RieszFamily, mu: Complex64, phi: &TestFn) -> Result<PairCheck> {
    let lhs = fam.pair(mu, &phi.mul_poly(&delta_poly(fam.n)))?;
    let k = fam.k_f64();
    let factor: Complex64 = (0..fam.n).map(|j| mu - k * j as f64).product();
    let rhs = if factor.is_zero() {
        Complex64::zero()
    } else {
        factor * fam.pair(mu + 1.0, phi)?
    };
    Ok(pair_check(lhs, rhs))
}

/// `⟨R_μ, φ⟩` at two lowering depths.
pub fn lowering_check(fam: &RieszFamily, mu: Complex64, phi: &TestFn, m1: usize, m2: usize) -> Result<PairCheck> {
    Ok(pair_check(fam.pair_lowered(mu, phi, m1)?, fam.pair_lowered(mu, phi, m2)?))
}

/// Exact check of `τ_x E(λ,·)(y) = E(λ,x)E(λ,y)` on truncations: the
/// translate of `Σ_{j≤N} V(⟨λ,·⟩^j/j!)` equals `Σ_{a+b≤N} K_a(x) K_b(y)`.
pub fn kernel_multiplicativity(ctx: &DunklContext, lambda: &[Q], n_max: usize) -> Result<bool> {
    let tw = Intertwiner::build(ctx, n_max)?;
    let d = ctx.dim();
    let lhs = tw.translate_poly(&tw.kernel_poly(lambda, n_max)?)?;
    let parts: Vec<Poly> = (0..=n_max)
        .map(|j| tw.kernel_poly_degree(lambda, j))
        .collect::<Result<_>>()?;
    let mut rhs = Poly::zero(2 * d);
    for (a, pa) in parts.iter().enumerate() {
        for pb in parts.iter().take(n_max - a + 1) {
            rhs = &rhs + &(&embed(pa, 0, 2 * d) * &embed(pb, d, 2 * d));
        }
    }
    Ok(lhs == rhs)
}

/// Re-index a polynomial in `d` variables into `total` variables at `offset`.
fn embed(p: &Poly, offset: usize, total: usize) -> Poly {
    Poly::from_terms(
        total,
        p.terms().map(|(m, c)| {
            let mut e = vec![0; total];
            e[offset..offset + m.0.len()].copy_from_slice(&m.0);
            (Monomial(e), c.clone())
        }),
    )
}

/// `⟨R_μ, φ⟩` for the Gaussian `φ = e^{−|x|²/2}` at `n = 1`:
/// `2^{μ/2−1} Γ(μ/2) / Γ(μ)`.
pub fn gaussian_pair_1d(mu: Complex64) -> Complex64 {
    Complex64::new(2.0, 0.0).powc(mu * 0.5 - 1.0) * gamma_complex(mu * 0.5) / gamma_complex(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn gamma_n_reductions() {
        let f1 = RieszFamily::new(1, qi(0)).unwrap();
        let v = f1.gamma_n(c(3.5)).value().unwrap();
        assert!((v.re - gamma_complex(c(3.5)).re).abs() < 1e-13);
        assert_eq!(f1.gamma_n(c(0.0)), GammaN::Pole);
        let f2 = RieszFamily::new(2, qi(0)).unwrap();
        let v = f2.gamma_n(c(2.5)).value().unwrap();
        assert!((v.re - gamma_complex(c(2.5)).re.powi(2)).abs() < 1e-12);
    }

    #[test]
    fn wallach() {
        assert!(RieszFamily::new(3, q(1, 2)).unwrap().wallach_contains(&qi(0)));
        assert!(RieszFamily::new(2, q(1, 2)).unwrap().wallach_contains(&q(1, 2)));
        assert!(!RieszFamily::new(3, q(1, 2)).unwrap().wallach_contains(&q(7, 10)));
        assert!(RieszFamily::new(3, q(1, 2)).unwrap().wallach_contains(&q(11, 10)));
    }

    #[test]
    fn density_example() {
        let f = RieszFamily::new(2, qi(1)).unwrap();
        let v = f.density(c(3.0), &[1.0, 2.0]).unwrap();
        let g = f.gamma_n(c(3.0)).value().unwrap();
        assert!((v - c(2.0) / g).norm() < 1e-14);
    }

    #[test]
    fn delta_pairing_is_evaluation() {
        let f = RieszFamily::new(1, qi(0)).unwrap();
        let phi = TestFn::gaussian(1, qi(1)).unwrap();
        let v = f.pair(c(0.0), &phi).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
        let w = f.pair(c(1.7), &phi).unwrap();
        assert!((w - gaussian_pair_1d(c(1.7))).norm() < 1e-14);
    }

    #[test]
    fn k0_plane_pairing_separates() {
        let f = RieszFamily::new(2, qi(0)).unwrap();
        let phi = TestFn::gaussian(2, qi(1)).unwrap();
        let v = f.pair_direct(c(1.3), &phi).unwrap();
        let want = gaussian_pair_1d(c(1.3)).powi(2);
        assert!((v - want).norm() / want.norm() < 1e-12, "{v} vs {want}");
    }

    #[test]
    fn laplace_matches_closed_form() {
        let f = RieszFamily::new(1, qi(0)).unwrap();
        let z = [Complex64::new(1.5, 0.7)];
        let v = f.laplace(c(2.3), &z).unwrap().value;
        assert!(rel(v, f.laplace_closed_form(c(2.3), &z)) < 1e-12);
        let f2 = RieszFamily::new(2, q(1, 2)).unwrap();
        let z2 = [Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0)];
        let mu = c(f2.mu0() + 1.0);
        let v = f2.laplace(mu, &z2).unwrap().value;
        assert!(rel(v, c(6f64.powf(-1.5))) < 1e-10, "{v}");
    }

    #[test]
    fn half_line_convolution() {
        let f = RieszFamily::new(1, qi(0)).unwrap();
        for x in [0.3, 1.0, 4.0] {
            let v = f.convolve_densities_1d(c(1.0), c(1.0), x).unwrap();
            assert!((v.re - x).abs() < 1e-13);
        }
    }

    #[test]
    fn raising_and_lowering() {
        let f = RieszFamily::new(2, q(1, 2)).unwrap();
        let x = Poly::var(2, 0);
        let phi = TestFn::new(&Poly::one(2) + &(&x * &x), qi(1)).unwrap();
        let r = raising_check(&f, c(1.8), &phi).unwrap();
        assert!(r.err < 1e-10, "{r:?}");
        let l = lowering_check(&f, c(1.8), &phi, 0, 2).unwrap();
        assert!(l.err < 1e-10, "{l:?}");
    }

    #[test]
    fn multiplicativity_rank1() {
        let f = RieszFamily::new(2, q(1, 2)).unwrap();
        let ctx = f.context().unwrap();
        assert!(kernel_multiplicativity(&ctx, &[qi(-1), q(-2, 3)], 4).unwrap());
    }
}
