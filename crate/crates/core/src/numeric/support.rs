//! Mollifiers and support diagnostics.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::frame::{FactorKind, Frame};
use super::grid::{Domain, FactorSpec, GridFn, QuadratureGrid};
use super::quadrature::pairwise_sum;
use crate::error::{DunklError, Result};
use crate::root_system::{norm, ConvexHull, SupportGeometry};

/// Scaling exponent making `ε^{−γ}ψ(·/ε)` mass preserving in `L¹(ω)`:
/// `γ = dim 𝔞 + Σ_{α∈R} k_α`, the dimension plus the homogeneity of `ω`.
pub fn mollifier_exponent(frame: &Frame) -> f64 {
    frame.dim() as f64 + frame.homogeneity()
}

impl QuadratureGrid {
    /// The image grid under `x ↦ s x`; weights pick up `s^{dim + γ_ω}`.
    pub fn scaled(&self, s: f64) -> Result<QuadratureGrid> {
        if s <= 0.0 {
            return Err(DunklError::Precondition("scale must be positive".into()));
        }
        let specs: Vec<FactorSpec> = self
            .specs()
            .iter()
            .map(|sp| match sp {
                FactorSpec::Interval { lo, hi, n } => FactorSpec::Interval {
                    lo: lo * s,
                    hi: hi * s,
                    n: *n,
                },
                FactorSpec::Disk { radius, n_r, n_theta } => FactorSpec::Disk {
                    radius: radius * s,
                    n_r: *n_r,
                    n_theta: *n_theta,
                },
            })
            .collect();
        QuadratureGrid::new(self.frame(), &specs, self.domain().clone())
    }
}

/// Box grid `[−r, r]` per one-dimensional factor (disk for rank-two factors)
/// centred at `center` in frame coordinates.
pub fn ball_grid(frame: &Frame, center_local: &[Vec<f64>], r: f64, n: usize) -> Result<Arc<QuadratureGrid>> {
    let specs: Vec<FactorSpec> = frame
        .factors()
        .iter()
        .zip(center_local)
        .map(|(f, c)| match f.kind {
            FactorKind::Plane { .. } => FactorSpec::Disk {
                radius: r,
                n_r: n,
                n_theta: (n / 3).max(8),
            },
            _ => FactorSpec::Interval {
                lo: c[0] - r,
                hi: c[0] + r,
                n,
            },
        })
        .collect();
    Ok(Arc::new(QuadratureGrid::new(frame, &specs, Domain::Box)?))
}

/// Polynomial bump `(1 − |x−c|²/r²)^p` on `|x−c| < r`, zero outside.
pub fn bump(x: &[f64], center: &[f64], r: f64, p: i32) -> f64 {
    let d2 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / (r * r);
    if d2 >= 1.0 {
        0.0
    } else {
        (1.0 - d2).powi(p)
    }
}

/// `ψ_ε = ε^{−γ} ψ(·/ε)` on the grid scaled by `ε`. The profile must be
/// nonnegative, vanish outside the unit ball and have unit `L¹(ω)` norm.
pub fn mollifier(profile: &GridFn, eps: f64, tol: f64) -> Result<GridFn> {
    if eps <= 0.0 {
        return Err(DunklError::Precondition("ε must be positive".into()));
    }
    for (x, v) in profile.grid.nodes().iter().zip(&profile.values) {
        if v.re < 0.0 || v.im.abs() > tol {
            return Err(DunklError::Precondition("profile must be nonnegative".into()));
        }
        if norm(x) > 1.0 && v.norm() > 0.0 {
            return Err(DunklError::Precondition("profile not supported in the unit ball".into()));
        }
    }
    let mass = profile.norm_l1();
    if (mass - 1.0).abs() > tol {
        return Err(DunklError::Precondition(format!(
            "profile has L¹(ω) norm {mass}, expected 1"
        )));
    }
    let gamma = mollifier_exponent(profile.grid.frame());
    let grid = Arc::new(profile.grid.scaled(eps)?);
    let s = eps.powf(-gamma);
    GridFn::new(grid, profile.values.iter().map(|v| v * s).collect())
}

/// Normalized bump profile `(1−|x|²)^p / ‖·‖_{L¹(ω)}` on a unit-ball grid.
pub fn bump_profile(frame: &Frame, p: i32, n: usize) -> Result<GridFn> {
    let zero: Vec<Vec<f64>> = frame.factors().iter().map(|f| vec![0.0; f.local_dim()]).collect();
    let g = ball_grid(frame, &zero, 1.0, n)?;
    let origin = vec![0.0; frame.dim()];
    let raw = g.sample(|x| Complex64::new(bump(x, &origin, 1.0, p), 0.0));
    let m = raw.norm_l1();
    Ok(raw.scale(Complex64::new(1.0 / m, 0.0)))
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportReport {
    pub check: String,
    pub outside_mass_ratio: f64,
    pub threshold: f64,
    pub inflation: f64,
    pub pass: bool,
}

/// `Σ_{outside}|f|w / Σ|f|w` for the given allowed region.
pub fn outside_mass_ratio(f: &GridFn, allowed: impl Fn(&[f64]) -> bool) -> f64 {
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for ((x, w), v) in f.grid.nodes().iter().zip(f.grid.weights()).zip(&f.values) {
        let m = v.norm() * w;
        if allowed(x) {
            inside.push(m);
        } else {
            outside.push(m);
        }
    }
    let o = pairwise_sum(&outside);
    o / (o + pairwise_sum(&inside))
}

#[derive(Clone, Debug)]
pub enum SupportKind {
    /// `supp τ_x f ⊆ W.B_r(−x)` for `supp f ⊆ B_r(0)`.
    Translation { x: Vec<f64>, r: f64 },
    /// `supp f∗g ⊆ B_r(0) + W.B_ρ(c)` for `supp f ⊆ B_r(0)`, `supp g ⊆ B_ρ(c)`.
    Convolution { r: f64, g_center: Vec<f64>, g_radius: f64 },
    /// `supp f∗g ⊆ co(W.B_{r_f}(c_f)) + co(W.B_{r_g}(c_g))`, integral `R`.
    ConvolutionHull {
        f_center: Vec<f64>,
        f_radius: f64,
        g_center: Vec<f64>,
        g_radius: f64,
    },
}

/// Measures the mass of `values` outside the allowed region inflated by `δ`.
pub fn verify_support(
    geom: &SupportGeometry,
    kind: &SupportKind,
    values: &GridFn,
    delta: f64,
    threshold: f64,
) -> Result<SupportReport> {
    let (name, ratio) = match kind {
        SupportKind::Translation { x, r } => {
            let mx: Vec<f64> = x.iter().map(|v| -v).collect();
            (
                "translation",
                outside_mass_ratio(values, |y| geom.in_orbit_of_ball(y, &mx, r + delta)),
            )
        }
        SupportKind::Convolution { r, g_center, g_radius } => (
            "convolution",
            outside_mass_ratio(values, |y| geom.in_orbit_of_ball(y, g_center, r + g_radius + delta)),
        ),
        SupportKind::ConvolutionHull {
            f_center,
            f_radius,
            g_center,
            g_radius,
        } => {
            if !geom.is_integral() {
                return Err(DunklError::Precondition("hull variant needs an integral root system".into()));
            }
            let hull: ConvexHull = geom.hull_sum(&geom.orbit_hull(f_center), &geom.orbit_hull(g_center));
            let infl = f_radius + g_radius + delta;
            ("convolution_hull", outside_mass_ratio(values, |y| hull.contains(y, infl)))
        }
    };
    Ok(SupportReport {
        check: name.into(),
        outside_mass_ratio: ratio,
        threshold,
        inflation: delta,
        pass: ratio <= threshold,
    })
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
    fn exponents() {
        assert_eq!(mollifier_exponent(&frame(RootSystemName::Rank1, qi(1))), 3.0);
        assert_eq!(mollifier_exponent(&frame(RootSystemName::Empty(2), qi(0))), 2.0);
        assert_eq!(mollifier_exponent(&frame(RootSystemName::A(2), q(1, 2))), 6.0);
    }

    #[test]
    fn mollifier_keeps_mass() {
        let f = frame(RootSystemName::Rank1, qi(1));
        let psi = bump_profile(&f, 6, 40).unwrap();
        for eps in [0.5, 0.1] {
            let m = mollifier(&psi, eps, 1e-10).unwrap();
            assert!((m.norm_l1() - 1.0).abs() < 1e-12);
            assert!(m.grid.nodes().iter().all(|x| x[0].abs() <= eps));
        }
        let bad = psi.scale(Complex64::new(2.0, 0.0));
        assert!(mollifier(&bad, 0.5, 1e-10).is_err());
    }
}
