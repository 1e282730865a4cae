//! Gauss–Jacobi rules for `∫_{−1}^{1} f(t)(1−t)^α(1+t)^β dt`.
//!
//! Nodes come from the Golub–Welsch eigenproblem and are polished by Newton
//! steps on `P_n^{(α,β)}`; weights use the closed form in `P_n'`, which keeps
//! relative accuracy in the tails, normalized to the exact zeroth moment.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use super::special::ln_gamma;

#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Rule for `∫_a^b f(x)(b−x)^α(x−a)^β dx` from the reference rule.
    pub fn mapped(&self, a: f64, b: f64, alpha: f64, beta: f64) -> GaussRule {
        let h = 0.5 * (b - a);
        let scale = h.powf(alpha + beta + 1.0);
        GaussRule {
            nodes: self.nodes.iter().map(|t| a + h * (t + 1.0)).collect(),
            weights: self.weights.iter().map(|w| w * scale).collect(),
        }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        pairwise_sum(
            &self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * f(x))
                .collect::<Vec<_>>(),
        )
    }
}

/// Deterministic pairwise summation.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let m = v.len() / 2;
    pairwise_sum(&v[..m]) + pairwise_sum(&v[m..])
}

pub fn pairwise_sum_complex(v: &[num_complex::Complex64]) -> num_complex::Complex64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let m = v.len() / 2;
    pairwise_sum_complex(&v[..m]) + pairwise_sum_complex(&v[m..])
}

/// Rule for `∫_0^len x^β g(x) dx` when `g` may oscillate like `x^{iτ}` near
/// the origin. Gauss–Jacobi covers `[0, ε]`, Gauss–Legendre panels growing by
/// a factor 4 cover `[ε, split]` and `tail_nodes` Legendre nodes cover
/// `[split, len]`. `ε = split·tol^{1/(β+1)}`, so the part where `g` is not
/// resolved carries relative mass `tol`. A panel `[a, 4a]` sees the origin
/// through a Bernstein ellipse of parameter 3, which fixes its order. Weights
/// include `x^β`.
pub fn graded_power_rule(beta: f64, split: f64, len: f64, tol: f64, tail_nodes: usize) -> GaussRule {
    assert!(beta > -1.0 && split > 0.0 && len >= split && tol > 0.0 && tol < 1.0);
    let eps = split * tol.powf(1.0 / (beta + 1.0));
    let order = ((-tol.ln()) / (2.0 * 3f64.ln())).ceil().clamp(8.0, 24.0) as usize;
    let mut rule = gauss_jacobi(order, 0.0, beta).mapped(0.0, eps, 0.0, beta);
    let leg = gauss_legendre(order);
    let push = |a: f64, b: f64, r: &GaussRule, nodes: &mut Vec<f64>, weights: &mut Vec<f64>| {
        let m = r.mapped(a, b, 0.0, 0.0);
        for (x, w) in m.nodes.iter().zip(&m.weights) {
            nodes.push(*x);
            weights.push(w * x.powf(beta));
        }
    };
    let (mut nodes, mut weights) = (std::mem::take(&mut rule.nodes), std::mem::take(&mut rule.weights));
    let mut a = eps;
    while a < split {
        let b = (4.0 * a).min(split);
        push(a, b, &leg, &mut nodes, &mut weights);
        a = b;
    }
    if len > split && tail_nodes > 0 {
        push(split, len, &gauss_legendre(tail_nodes), &mut nodes, &mut weights);
    }
    GaussRule { nodes, weights }
}

type Key = (usize, u64, u64);

fn cache() -> &'static Mutex<HashMap<Key, Arc<GaussRule>>> {
    static C: OnceLock<Mutex<HashMap<Key, Arc<GaussRule>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Arc<GaussRule> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Gauss–Jacobi rule on `[−1, 1]` for weight `(1−t)^α(1+t)^β`, `α, β > −1`.
/// Rules are cached.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Arc<GaussRule> {
    assert!(n >= 1, "rule needs at least one node");
    assert!(alpha > -1.0 && beta > -1.0, "Jacobi exponents must exceed −1");
    let key = (n, alpha.to_bits(), beta.to_bits());
    if let Some(r) = cache().lock().unwrap().get(&key) {
        return r.clone();
    }
    let rule = Arc::new(compute_jacobi(n, alpha, beta));
    cache().lock().unwrap().insert(key, rule.clone());
    rule
}

fn compute_jacobi(n: usize, a: f64, b: f64) -> GaussRule {
    let ab = a + b;
    // monic recurrence coefficients
    let diag: Vec<f64> = (0..n)
        .map(|j| {
            let j = j as f64;
            let s = 2.0 * j + ab;
            if j == 0.0 {
                (b - a) / (ab + 2.0)
            } else {
                (b * b - a * a) / (s * (s + 2.0))
            }
        })
        .collect();
    let off: Vec<f64> = (1..n)
        .map(|j| {
            let jf = j as f64;
            let s = 2.0 * jf + ab;
            let v = if j == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * jf * (jf + a) * (jf + b) * (jf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            v.sqrt()
        })
        .collect();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag[i];
        if i + 1 < n {
            m[(i, i + 1)] = off[i];
            m[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::new(m);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());

    // ln of 2^{α+β+1} Γ(n+α+1)Γ(n+β+1) / (Γ(n+α+β+1) n!)
    let nf = n as f64;
    let ln_c = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(nf + a + 1.0) + ln_gamma(nf + b + 1.0)
        - ln_gamma(nf + ab + 1.0)
        - ln_gamma(nf + 1.0);
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = jacobi_p(n, a, b, *x);
            if dp == 0.0 || !dp.is_finite() {
                break;
            }
            let step = p / dp;
            let nx = *x - step;
            if nx <= -1.0 || nx >= 1.0 {
                break;
            }
            *x = nx;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = jacobi_p(n, a, b, *x);
        weights.push((ln_c - (1.0 - *x * *x).ln() - 2.0 * dp.abs().ln()).exp());
    }
    // The prefactor inherits the absolute error of ln Γ at large arguments;
    // rescale to the zeroth moment, which only needs Γ near the origin.
    let m0 = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(ab + 2.0);
    let s = pairwise_sum(&weights);
    let f = m0.exp() / s;
    weights.iter_mut().for_each(|w| *w *= f);
    GaussRule { nodes, weights }
}

/// `P_n^{(α,β)}(x)` and its derivative by the three-term recurrence.
fn jacobi_p(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let p = |n: usize, a: f64, b: f64| -> f64 {
        let mut p0 = 1.0;
        if n == 0 {
            return p0;
        }
        let mut p1 = 0.5 * (a - b + (a + b + 2.0) * x);
        for k in 2..=n {
            let k = k as f64;
            let s = 2.0 * k + a + b;
            let c1 = 2.0 * k * (k + a + b) * (s - 2.0);
            let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
            let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
            let p2 = (c2 * p1 - c3 * p0) / c1;
            p0 = p1;
            p1 = p2;
        }
        p1
    };
    let val = p(n, a, b);
    let der = if n == 0 {
        0.0
    } else {
        0.5 * (n as f64 + a + b + 1.0) * p(n - 1, a + 1.0, b + 1.0)
    };
    (val, der)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::special::gamma;

    #[test]
    fn legendre_polynomials_exact() {
        let r = gauss_legendre(10);
        for deg in 0..20 {
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((r.integrate(|x| x.powi(deg)) - exact).abs() < 1e-14, "deg {deg}");
        }
    }

    #[test]
    fn jacobi_moments() {
        let (a, b) = (0.5, 2.0);
        let r = gauss_jacobi(12, a, b);
        // ∫(1−t)^a(1+t)^b dt = 2^{a+b+1}Γ(a+1)Γ(b+1)/Γ(a+b+2)
        let m0 = 2f64.powf(a + b + 1.0) * gamma(a + 1.0) * gamma(b + 1.0) / gamma(a + b + 2.0);
        assert!((r.integrate(|_| 1.0) - m0).abs() / m0 < 1e-14);
        // ∫(1+t)·w = 2^{a+b+2}Γ(a+1)Γ(b+2)/Γ(a+b+3)
        let m1 = 2f64.powf(a + b + 2.0) * gamma(a + 1.0) * gamma(b + 2.0) / gamma(a + b + 3.0);
        assert!((r.integrate(|t| 1.0 + t) - m1).abs() / m1 < 1e-14);
    }

    #[test]
    fn large_rule_weights_sum() {
        let r = gauss_jacobi(300, 0.0, 2.0);
        let m0 = 8.0 / 3.0;
        assert!((r.integrate(|_| 1.0) - m0).abs() < 1e-12);
        assert!(r.weights.iter().all(|w| *w > 0.0));
    }

    #[test]
    fn graded_rule_resolves_complex_powers() {
        // ∫_0^1 x^{β+iτ} dx = 1/(β+1+iτ)
        let (b, tau) = (-0.4, 0.8);
        let r = graded_power_rule(b, 1.0, 1.0, 1e-15, 0);
        let v: num_complex::Complex64 = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(x, w)| num_complex::Complex64::new(0.0, tau * x.ln()).exp() * w)
            .sum();
        let want = num_complex::Complex64::new(1.0, 0.0) / num_complex::Complex64::new(b + 1.0, tau);
        assert!((v - want).norm() < 1e-13, "{v} vs {want}");
    }

    #[test]
    fn mapped_interval() {
        let r = gauss_jacobi(8, 0.0, 1.5).mapped(0.0, 3.0, 0.0, 1.5);
        // ∫_0^3 x^{1.5} dx
        let exact = 3f64.powf(2.5) / 2.5;
        assert!((r.integrate(|_| 1.0) - exact).abs() < 1e-13);
    }
}
