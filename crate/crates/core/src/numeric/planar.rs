//! Floating-point intertwiner for a rank-two factor in its own plane.
//!
//! Degree `n` blocks satisfy `A_n V_n = Σ_i X_i V_{n−1} D_i` with
//! `A_n = n + Σ_{α>0} k_α(1 − s_α)`, where `D_i` differentiates and `X_i`
//! multiplies by a coordinate. Working in two local variables keeps each
//! block `(n+1)×(n+1)`, so high degrees are cheap.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dunkl_poly::kernel_tail_bound;
use crate::error::{DunklError, Result};

/// Basis of degree `n`: `y₁^{n−j} y₂^j`, `j = 0..=n`.
#[derive(Clone, Debug)]
pub struct PlanarIntertwiner {
    blocks: Vec<DMatrix<f64>>,
}

/// Coefficients of `(a y₁ + b y₂)^m` in the degree-`m` basis.
fn linear_power(a: f64, b: f64, m: usize) -> Vec<f64> {
    let mut c = vec![1.0];
    for _ in 0..m {
        let mut next = vec![0.0; c.len() + 1];
        for (j, v) in c.iter().enumerate() {
            next[j] += a * v;
            next[j + 1] += b * v;
        }
        c = next;
    }
    c
}

/// Matrix of `p ↦ p∘s` on degree-`n` polynomials for the reflection `s`.
fn reflection_block(s: [[f64; 2]; 2], n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n + 1, n + 1);
    for j in 0..=n {
        let u = linear_power(s[0][0], s[0][1], n - j);
        let v = linear_power(s[1][0], s[1][1], j);
        for (a, ua) in u.iter().enumerate() {
            for (b, vb) in v.iter().enumerate() {
                m[(a + b, j)] += ua * vb;
            }
        }
    }
    m
}

impl PlanarIntertwiner {
    /// Blocks up to degree `n_max` for positive roots `(α, k_α)` in the plane.
    pub fn build(roots: &[([f64; 2], f64)], n_max: usize) -> Result<Self> {
        let refl: Vec<([[f64; 2]; 2], f64)> = roots
            .iter()
            .map(|(a, k)| {
                let n2 = a[0] * a[0] + a[1] * a[1];
                let s = [
                    [1.0 - 2.0 * a[0] * a[0] / n2, -2.0 * a[0] * a[1] / n2],
                    [-2.0 * a[1] * a[0] / n2, 1.0 - 2.0 * a[1] * a[1] / n2],
                ];
                (s, *k)
            })
            .collect();
        let mut blocks = vec![DMatrix::from_element(1, 1, 1.0)];
        for n in 1..=n_max {
            let mut a = DMatrix::<f64>::identity(n + 1, n + 1) * n as f64;
            for (s, k) in &refl {
                a += (DMatrix::<f64>::identity(n + 1, n + 1) - reflection_block(*s, n)) * *k;
            }
            // right-hand side, column j = Σ_i x_i V_{n−1}(∂_i y^{(j)})
            let prev = &blocks[n - 1];
            let mut rhs = DMatrix::<f64>::zeros(n + 1, n + 1);
            for j in 0..=n {
                // ∂₁ y₁^{n−j}y₂^j = (n−j) y₁^{n−1−j}y₂^j  (index j in degree n−1)
                if j < n {
                    let c = (n - j) as f64;
                    for r in 0..n {
                        rhs[(r, j)] += c * prev[(r, j)];
                    }
                }
                // ∂₂ gives j y₁^{n−j}y₂^{j−1}, index j−1; x₂ shifts by one
                if j > 0 {
                    let c = j as f64;
                    for r in 0..n {
                        rhs[(r + 1, j)] += c * prev[(r, j - 1)];
                    }
                }
            }
            let v = a
                .lu()
                .solve(&rhs)
                .ok_or(DunklError::SingularSystem { degree: n })?;
            blocks.push(v);
        }
        Ok(PlanarIntertwiner { blocks })
    }

    pub fn max_degree(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn block(&self, n: usize) -> &DMatrix<f64> {
        &self.blocks[n]
    }

    /// `Σ_{n≤N} V(⟨λ,·⟩ⁿ/n!)(x)` with the smallest `N` whose truncation and
    /// roundoff bounds fall below `tol`.
    pub fn kernel(&self, lambda: [Complex64; 2], x: [f64; 2], tol: f64) -> Result<(Complex64, f64)> {
        let t = (lambda[0].norm_sqr() + lambda[1].norm_sqr()).sqrt() * (x[0] * x[0] + x[1] * x[1]).sqrt();
        let mut value = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        let mut a = vec![Complex64::new(1.0, 0.0)];
        let mut u = vec![1.0];
        let mut last = f64::INFINITY;
        for n in 0..=self.max_degree() {
            if n > 0 {
                // a ← coefficients of ⟨λ,y⟩ⁿ/n!, u ← (x₁^{n−j}x₂^j)_j
                let mut na = vec![Complex64::new(0.0, 0.0); n + 1];
                for (j, v) in a.iter().enumerate() {
                    na[j] += v * lambda[0];
                    na[j + 1] += v * lambda[1];
                }
                let inv = 1.0 / n as f64;
                a = na.into_iter().map(|v| v * inv).collect();
                let top = u[n - 1] * x[1];
                u.iter_mut().for_each(|v| *v *= x[0]);
                u.push(top);
            }
            let blk = &self.blocks[n];
            for (i, ui) in u.iter().enumerate() {
                if *ui == 0.0 {
                    continue;
                }
                for (j, aj) in a.iter().enumerate() {
                    let term = aj * (blk[(i, j)] * ui);
                    value += term;
                    magnitude += term.norm();
                }
            }
            let trunc = kernel_tail_bound(t, n);
            let round = 8.0 * (n as f64 + 2.0) * f64::EPSILON * magnitude.max(1.0);
            last = trunc + round;
            if n as f64 > t && last <= tol {
                return Ok((value, last));
            }
        }
        Err(DunklError::NotConverged(format!(
            "planar kernel series bound {last:.3e} above {tol:.1e} at degree {}",
            self.max_degree()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k0_is_identity() {
        let v = PlanarIntertwiner::build(&[([1.0, 0.0], 0.0)], 6).unwrap();
        for n in 0..=6 {
            let b = v.block(n);
            assert!((b - DMatrix::identity(n + 1, n + 1)).abs().max() < 1e-14);
        }
    }

    #[test]
    fn product_of_rank_one_kernels() {
        // two orthogonal roots: E = E_{k₁}(λ₁x₁)·E_{k₂}(λ₂x₂)
        let (k1, k2) = (0.5, 1.5);
        let v = PlanarIntertwiner::build(&[([1.0, 0.0], k1), ([0.0, 2.0], k2)], 80).unwrap();
        let lam = [Complex64::new(0.4, 1.1), Complex64::new(-0.3, 0.7)];
        let x = [1.3, -2.1];
        let (e, err) = v.kernel(lam, x, 1e-12).unwrap();
        let want = crate::numeric::kernel::rank1_kernel(k1, lam[0] * x[0])
            * crate::numeric::kernel::rank1_kernel(k2, lam[1] * x[1]);
        assert!((e - want).norm() < 1e-12 + err, "{e} vs {want}");
    }
}
