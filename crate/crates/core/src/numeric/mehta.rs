//! Macdonald–Mehta constant `c_k = ∫ e^{−|x|²/2} ω(x) dx`.

use std::f64::consts::PI;

use num_traits::Zero;
use serde::Serialize;

use super::frame::{FactorKind, Frame};
use super::grid::{FactorSpec, QuadratureGrid};
use super::quadrature::gauss_jacobi;
use super::special::{gamma, gamma_ur, ln_gamma};
use crate::error::{DunklError, Result};
use crate::rational::to_f64;
use crate::root_system::{Multiplicity, RootSystem, RootSystemName};

/// `c_k` as a product over frame factors. Free factors give `√(2π)`,
/// rank-one factors `|α|^{2k} 2^{k+½} Γ(k+½)`, rank-two factors
/// `2^{γ/2}Γ(1+γ/2)·∫_0^{2π} ω(cos θ, sin θ) dθ` with the angular integral by
/// high-order sector rules.
pub fn mehta_factorized(frame: &Frame) -> f64 {
    frame
        .factors()
        .iter()
        .map(|f| match &f.kind {
            FactorKind::Free => (2.0 * PI).sqrt(),
            FactorKind::Line { k, alpha_norm } => {
                alpha_norm.powf(2.0 * k) * 2f64.powf(k + 0.5) * gamma(k + 0.5)
            }
            FactorKind::Plane { roots } => {
                let g: f64 = roots.iter().map(|(_, k)| 2.0 * k).sum();
                let radial = (0.5 * g * std::f64::consts::LN_2 + ln_gamma(1.0 + 0.5 * g)).exp();
                radial * angular_integral(roots)
            }
        })
        .product()
}

fn angular_integral(roots: &[([f64; 2], f64)]) -> f64 {
    // A unit-radius disk rule with one radial node would carry r-weights;
    // integrate the angle directly instead.
    let mut lines: Vec<(f64, f64)> = Vec::new();
    for (a, k) in roots {
        let phi = a[1].atan2(a[0]) + PI / 2.0;
        for off in [0.0, PI] {
            lines.push(((phi + off).rem_euclid(2.0 * PI), *k));
        }
    }
    lines.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let m = lines.len();
    let mut total = 0.0;
    for s in 0..m {
        let (t0, k0) = lines[s];
        let (mut t1, k1) = lines[(s + 1) % m];
        if s + 1 == m {
            t1 += 2.0 * PI;
        }
        let r = gauss_jacobi(64, 2.0 * k1, 2.0 * k0).mapped(t0, t1, 2.0 * k1, 2.0 * k0);
        total += r.integrate(|t| {
            let u = [t.cos(), t.sin()];
            let om: f64 = roots
                .iter()
                .map(|(a, k)| (a[0] * u[0] + a[1] * u[1]).abs().powf(2.0 * k))
                .product();
            om / ((t - t0).powf(2.0 * k0) * (t1 - t).powf(2.0 * k1))
        });
    }
    total
}

/// Closed form from the root-system name: `A_{n−1}` in `ℝⁿ` gives
/// `(2π)^{n/2} ∏_{j=1}^{n} Γ(1+jk)/Γ(1+k)`, `{±1}` gives `2^{k+½}Γ(k+½)`,
/// `empty(n)` gives `(2π)^{n/2}`, and direct sums multiply.
pub fn mehta_closed_form(rs: &RootSystem, k: &Multiplicity) -> Result<f64> {
    fn rec(name: &RootSystemName, offset: usize, rs: &RootSystem, k: &Multiplicity) -> Result<(f64, usize)> {
        // multiplicity of the first root supported in this block
        let block_k = |dim: usize| -> f64 {
            rs.roots()
                .iter()
                .enumerate()
                .find(|(_, r)| {
                    r.iter()
                        .enumerate()
                        .any(|(j, c)| !c.is_zero() && j >= offset && j < offset + dim)
                })
                .map(|(i, _)| to_f64(k.of_root(rs, i)))
                .unwrap_or(0.0)
        };
        match name {
            RootSystemName::A(n) => {
                let m = n + 1;
                let kk = block_k(m);
                let mut v = (2.0 * PI).powf(m as f64 / 2.0);
                for j in 1..=m {
                    v *= (ln_gamma(1.0 + j as f64 * kk) - ln_gamma(1.0 + kk)).exp();
                }
                Ok((v, m))
            }
            RootSystemName::Rank1 => {
                let kk = block_k(1);
                Ok((2f64.powf(kk + 0.5) * gamma(kk + 0.5), 1))
            }
            RootSystemName::Empty(n) => Ok(((2.0 * PI).powf(*n as f64 / 2.0), *n)),
            RootSystemName::DirectSum(parts) => {
                let mut v = 1.0;
                let mut off = offset;
                for p in parts {
                    let (pv, d) = rec(p, off, rs, k)?;
                    v *= pv;
                    off += d;
                }
                Ok((v, off - offset))
            }
        }
    }
    let (v, d) = rec(rs.name(), 0, rs, k)?;
    if d != rs.ambient_dim() {
        return Err(DunklError::Unsupported("closed form for this root system".into()));
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MehtaEstimate {
    pub value: f64,
    /// Relative Gaussian mass outside the grid domain.
    pub tail_bound: f64,
}

/// `Σ e^{−|x|²/2} w(x)` over the grid, with the Gaussian tail outside the
/// domain bounded through regularized incomplete gamma functions.
pub fn mehta_constant(grid: &QuadratureGrid, tol: f64) -> Result<MehtaEstimate> {
    let value = grid.integrate(|x| (-0.5 * x.iter().map(|t| t * t).sum::<f64>()).exp());
    let mut tail = 0.0;
    for (f, spec) in grid.frame().factors().iter().zip(grid.specs()) {
        let (radius, ld) = match spec {
            FactorSpec::Interval { lo, hi, .. } => {
                if *lo >= 0.0 || *hi <= 0.0 {
                    (0.0, 1.0)
                } else {
                    ((-lo).min(*hi), 1.0)
                }
            }
            FactorSpec::Disk { radius, .. } => (*radius, 2.0),
        };
        let a = 0.5 * (ld + f.homogeneity());
        tail += if radius <= 0.0 { 1.0 } else { gamma_ur(a, 0.5 * radius * radius) };
    }
    if tail > tol {
        return Err(DunklError::NotConverged(format!(
            "Gaussian mass outside the grid is {tail:.3e}, above {tol:.1e}"
        )));
    }
    Ok(MehtaEstimate {
        value,
        tail_bound: tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn setup(name: RootSystemName, k: crate::Q) -> (RootSystem, Multiplicity, Frame) {
        let rs = RootSystem::new(name).unwrap();
        let k = Multiplicity::uniform(&rs, k).unwrap();
        let f = Frame::new(&rs, &k).unwrap();
        (rs, k, f)
    }

    #[test]
    fn factorized_matches_closed_form() {
        for name in [RootSystemName::Rank1, RootSystemName::A(1), RootSystemName::A(2)] {
            for kk in [qi(0), q(1, 2), qi(1)] {
                let (rs, k, f) = setup(name.clone(), kk);
                let a = mehta_factorized(&f);
                let b = mehta_closed_form(&rs, &k).unwrap();
                assert!((a - b).abs() / b < 1e-12, "{name:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn a1_k1_is_4pi() {
        let (rs, k, _) = setup(RootSystemName::A(1), qi(1));
        assert!((mehta_closed_form(&rs, &k).unwrap() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn small_grid_reports_tail() {
        let (_, _, f) = setup(RootSystemName::Rank1, qi(1));
        let g = QuadratureGrid::symmetric(&f, 2.0, 20).unwrap();
        assert!(mehta_constant(&g, 1e-10).is_err());
    }
}
