//! Numerical Dunkl kernel `E(λ, x)` for complex `λ` and real `x`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::frame::{FactorKind, Frame};
use super::planar::PlanarIntertwiner;
use super::quadrature::gauss_jacobi;
use crate::dunkl_poly::{DunklContext, Intertwiner};
use crate::error::{DunklError, Result};
use crate::root_system::{Multiplicity, RootSystem};

/// Rank-one kernel `E_k(w)` with `E_k(λx)` the kernel of `{±1}`:
/// `E_k(w) = c ∫_{−1}^{1} e^{wt}(1−t)^{k−1}(1+t)^k dt`,
/// `c = Γ(k+½)/(Γ(½)Γ(k))`, and `E_0(w) = e^w`.
pub fn rank1_kernel(k: f64, w: Complex64) -> Complex64 {
    if k == 0.0 {
        return w.exp();
    }
    let n = ((0.6 * w.norm()) as usize + 24).div_ceil(8) * 8;
    let rule = gauss_jacobi(n, k - 1.0, k);
    // c is the reciprocal of the weight mass, since E_k(0) = 1
    let mut s = Complex64::new(0.0, 0.0);
    let mut m = 0.0;
    for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
        s += (w * t).exp() * wt;
        m += wt;
    }
    s / m
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelStrategy {
    /// Closed forms on free and rank-one factors; rank-two factors use a
    /// floating-point series in the plane of the factor.
    Auto,
    /// Truncated series `Σ_{n≤N} V(⟨λ,·⟩ⁿ/n!)`; fails when the tail bound
    /// exceeds `tol`.
    Series { n_max: usize, tol: f64 },
    /// Product of rank-one closed forms; fails on rank-two components.
    Rank1ClosedForm,
    /// `e^{⟨λ,x⟩}`; requires `k = 0`.
    ExponentialK0,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct KernelValue {
    pub value: Complex64,
    pub error_bound: f64,
}

/// Evaluates `E(λ, x)` with a chosen strategy and reports an error bound.
#[derive(Clone, Debug)]
pub struct KernelEvaluator {
    strategy: KernelStrategy,
    frame: Frame,
    intertwiner: Option<Arc<Intertwiner>>,
    planar: Vec<Option<Arc<PlanarIntertwiner>>>,
    series_n: usize,
    series_tol: f64,
}

/// Highest degree of the planar series used for rank-two factors under `Auto`.
const AUTO_PLANAR_DEGREE: usize = 120;
/// Target error of the planar series under `Auto`.
const AUTO_PLANAR_TOL: f64 = 1e-10;

impl KernelEvaluator {
    pub fn new(rs: &RootSystem, k: &Multiplicity, strategy: KernelStrategy) -> Result<Self> {
        let frame = Frame::new(rs, k)?;
        let has_plane = frame
            .factors()
            .iter()
            .any(|f| matches!(f.kind, FactorKind::Plane { .. }));
        let (intertwiner, series_n, series_tol) = match &strategy {
            KernelStrategy::Series { n_max, tol } => (
                Some(Arc::new(Intertwiner::build(&DunklContext::new(rs, k), *n_max)?)),
                *n_max,
                *tol,
            ),
            KernelStrategy::Rank1ClosedForm if has_plane => {
                return Err(DunklError::Unsupported(
                    "rank-one closed form needs every component of rank one".into(),
                ))
            }
            KernelStrategy::ExponentialK0 if !k.is_zero() => {
                return Err(DunklError::Precondition(
                    "exponential kernel requires k = 0".into(),
                ))
            }
            _ => (None, 0, 0.0),
        };
        let mut planar = Vec::new();
        for f in frame.factors() {
            planar.push(match (&strategy, &f.kind) {
                (KernelStrategy::Auto, FactorKind::Plane { roots }) => {
                    Some(Arc::new(PlanarIntertwiner::build(roots, AUTO_PLANAR_DEGREE)?))
                }
                _ => None,
            });
        }
        Ok(KernelEvaluator {
            strategy,
            frame,
            intertwiner,
            planar,
            series_n,
            series_tol,
        })
    }

    pub fn strategy(&self) -> &KernelStrategy {
        &self.strategy
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn eval(&self, lambda: &[Complex64], x: &[f64]) -> Result<KernelValue> {
        match &self.strategy {
            KernelStrategy::ExponentialK0 => {
                let v: Complex64 = lambda.iter().zip(x).map(|(l, xi)| l * xi).sum();
                Ok(KernelValue {
                    value: v.exp(),
                    error_bound: 4.0 * f64::EPSILON * v.exp().norm(),
                })
            }
            KernelStrategy::Series { .. } => self.series(lambda, x),
            KernelStrategy::Auto | KernelStrategy::Rank1ClosedForm => {
                let mut value = Complex64::new(1.0, 0.0);
                let mut rel = 0.0;
                for (fi, f) in self.frame.factors().iter().enumerate() {
                    let v = self.eval_factor(fi, &f.project_complex(lambda), &f.project(x))?;
                    rel += v.error_bound / v.value.norm().max(f64::MIN_POSITIVE);
                    value *= v.value;
                }
                Ok(KernelValue {
                    value,
                    error_bound: rel * value.norm(),
                })
            }
        }
    }

    /// Kernel of one frame factor at local coordinates.
    pub fn eval_factor(&self, factor: usize, lambda_local: &[Complex64], x_local: &[f64]) -> Result<KernelValue> {
        let f = &self.frame.factors()[factor];
        if let KernelStrategy::Series { .. } = self.strategy {
            // embed the factor's coordinates and run the ambient series
            let lam: Vec<Complex64> = (0..self.frame.dim())
                .map(|j| f.basis.iter().zip(lambda_local).map(|(u, l)| l * u[j]).sum())
                .collect();
            let xa: Vec<f64> = (0..self.frame.dim())
                .map(|j| f.basis.iter().zip(x_local).map(|(u, t)| t * u[j]).sum())
                .collect();
            return self.series(&lam, &xa);
        }
        match &f.kind {
            FactorKind::Free => {
                let v = (lambda_local[0] * x_local[0]).exp();
                Ok(KernelValue {
                    value: v,
                    error_bound: 4.0 * f64::EPSILON * v.norm(),
                })
            }
            FactorKind::Line { k, .. } => {
                let v = rank1_kernel(*k, lambda_local[0] * x_local[0]);
                Ok(KernelValue {
                    value: v,
                    error_bound: 64.0 * f64::EPSILON * v.norm().max(1e-300),
                })
            }
            FactorKind::Plane { .. } => {
                let pi = self.planar[factor]
                    .as_ref()
                    .ok_or_else(|| DunklError::Unsupported("closed form on a rank-two factor".into()))?;
                let (value, error_bound) = pi.kernel(
                    [lambda_local[0], lambda_local[1]],
                    [x_local[0], x_local[1]],
                    AUTO_PLANAR_TOL,
                )?;
                Ok(KernelValue { value, error_bound })
            }
        }
    }

    fn series(&self, lambda: &[Complex64], x: &[f64]) -> Result<KernelValue> {
        let tw = self.intertwiner.as_ref().expect("series needs an intertwiner");
        let s = tw.kernel_series_complex(lambda, x, self.series_n)?;
        if s.tail_bound() > self.series_tol {
            return Err(DunklError::NotConverged(format!(
                "kernel series tail bound {:.3e} exceeds {:.1e} at N = {}",
                s.tail_bound(),
                self.series_tol,
                self.series_n
            )));
        }
        Ok(KernelValue {
            value: s.value,
            error_bound: s.tail_bound(),
        })
    }
}

impl super::frame::FrameFactor {
    pub fn project_complex(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.basis
            .iter()
            .map(|u| u.iter().zip(x).map(|(a, b)| b * a).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::root_system::RootSystemName;

    #[test]
    fn rank1_closed_form_k1() {
        // E_1(w) = cosh-type oracle at w = 1
        let e = std::f64::consts::E;
        let want = e * (1.0 + (-2.0f64).exp()) / 2.0;
        let v = rank1_kernel(1.0, Complex64::new(1.0, 0.0));
        assert!((v.re - want).abs() < 1e-14);
        // E_k(0) = 1
        assert!((rank1_kernel(0.7, Complex64::new(0.0, 0.0)).re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank1_half_is_bessel_like() {
        // k = 1/2: E(iy) = j_{0}(y)·… ; check E(w) + E(−w) = 2 Γ(k+½)(2/w)^{k−½} I_{k−½}(w) via series
        let k = 0.5;
        let w = 2.5f64;
        let mut i_sum = 0.0;
        let mut term = 1.0;
        for m in 0..40 {
            if m > 0 {
                term *= (w / 2.0).powi(2) / (m as f64 * (m as f64 + k - 0.5));
            }
            i_sum += term;
        }
        let e = rank1_kernel(k, Complex64::new(w, 0.0)) + rank1_kernel(k, Complex64::new(-w, 0.0));
        assert!((e.re / 2.0 - i_sum).abs() < 1e-13);
    }

    #[test]
    fn series_matches_closed_form() {
        let rs = RootSystem::new(RootSystemName::Rank1).unwrap();
        let k = Multiplicity::uniform(&rs, qi(1)).unwrap();
        let a = KernelEvaluator::new(&rs, &k, KernelStrategy::Rank1ClosedForm).unwrap();
        let s = KernelEvaluator::new(&rs, &k, KernelStrategy::Series { n_max: 40, tol: 1e-10 }).unwrap();
        let lam = [Complex64::new(0.3, -1.2)];
        let x = [1.7];
        let va = a.eval(&lam, &x).unwrap().value;
        let vs = s.eval(&lam, &x).unwrap().value;
        assert!((va - vs).norm() < 1e-12);
    }

    #[test]
    fn a2_auto_matches_series() {
        let rs = RootSystem::new(RootSystemName::A(2)).unwrap();
        let k = Multiplicity::uniform(&rs, q(1, 2)).unwrap();
        let a = KernelEvaluator::new(&rs, &k, KernelStrategy::Auto).unwrap();
        let s = KernelEvaluator::new(&rs, &k, KernelStrategy::Series { n_max: 14, tol: 1e-9 }).unwrap();
        let lam = [Complex64::new(0.5, 0.1), Complex64::new(-0.2, 0.3), Complex64::new(0.4, 0.0)];
        let x = [0.3, 0.9, -0.4];
        let va = a.eval(&lam, &x).unwrap().value;
        let vs = s.eval(&lam, &x).unwrap().value;
        assert!((va - vs).norm() < 1e-9, "{va} vs {vs}");
    }

    #[test]
    fn exponential_requires_k0() {
        let rs = RootSystem::new(RootSystemName::Rank1).unwrap();
        let k = Multiplicity::uniform(&rs, qi(1)).unwrap();
        assert!(KernelEvaluator::new(&rs, &k, KernelStrategy::ExponentialK0).is_err());
    }
}
