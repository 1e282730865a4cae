//! Dunkl transform, generalized translation and convolution on grids.
//!
//! `F f(ξ) = c⁻¹ ∫ E(−iξ, x) f(x) ω(x) dx`, `F⁻¹g(y) = c⁻¹ ∫ E(iy, ξ) g(ξ) ω(ξ) dξ`.
//! Between grids of the same frame the kernel factors, so both transforms are
//! applied one frame factor at a time.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::frame::{FactorKind, Frame};
use super::grid::{GridFn, QuadratureGrid};
use super::kernel::{KernelEvaluator, KernelStrategy};
use super::mehta::mehta_factorized;
use super::quadrature::pairwise_sum_complex;
use crate::error::{DunklError, Result};
use crate::root_system::{Multiplicity, RootSystem};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Debug)]
pub struct DunklTransform {
    kernel: KernelEvaluator,
    c_k: f64,
    /// Largest kernel error bound accepted during a transform.
    kernel_tol: f64,
}

impl DunklTransform {
    pub fn new(rs: &RootSystem, k: &Multiplicity, strategy: KernelStrategy) -> Result<Self> {
        let kernel = KernelEvaluator::new(rs, k, strategy)?;
        let c_k = mehta_factorized(kernel.frame());
        Ok(DunklTransform {
            kernel,
            c_k,
            kernel_tol: 1e-8,
        })
    }

    pub fn with_kernel_tolerance(mut self, tol: f64) -> Self {
        self.kernel_tol = tol;
        self
    }

    pub fn frame(&self) -> &Frame {
        self.kernel.frame()
    }

    pub fn kernel(&self) -> &KernelEvaluator {
        &self.kernel
    }

    /// Macdonald–Mehta constant used for normalization.
    pub fn c_k(&self) -> f64 {
        self.c_k
    }

    pub fn grid(&self, half_width: f64, n: usize) -> Result<Arc<QuadratureGrid>> {
        Ok(Arc::new(QuadratureGrid::symmetric(self.frame(), half_width, n)?))
    }

    /// Kernel matrix of one factor: `K[o][i] = E_f(sign·i·out_o, in_i)`.
    fn factor_matrix(&self, factor: usize, out: &[Vec<f64>], inp: &[Vec<f64>], sign: f64) -> Result<Vec<Vec<Complex64>>> {
        let rows: Vec<Result<Vec<Complex64>>> = out
            .par_iter()
            .map(|o| {
                let lam: Vec<Complex64> = o.iter().map(|v| I * (sign * v)).collect();
                inp.iter()
                    .map(|x| {
                        let kv = self.kernel.eval_factor(factor, &lam, x)?;
                        if kv.error_bound > self.kernel_tol * kv.value.norm().max(1.0) {
                            return Err(DunklError::NotConverged(format!(
                                "kernel error bound {:.2e} above tolerance",
                                kv.error_bound
                            )));
                        }
                        Ok(kv.value)
                    })
                    .collect()
            })
            .collect();
        rows.into_iter().collect()
    }

    fn check_frame(&self, g: &QuadratureGrid) -> Result<()> {
        if g.frame().factors().len() != self.frame().factors().len() {
            return Err(DunklError::Precondition("grid built for a different frame".into()));
        }
        Ok(())
    }

    /// Separable transform between grids; `sign = −1` forward, `+1` inverse.
    fn separable(&self, f: &GridFn, out: &Arc<QuadratureGrid>, sign: f64) -> Result<GridFn> {
        self.check_frame(&f.grid)?;
        self.check_frame(out)?;
        let mut data: Vec<Complex64> = f
            .values
            .iter()
            .zip(f.grid.weights())
            .map(|(v, w)| v * w)
            .collect();
        let mut shape = f.grid.shape().to_vec();
        for a in 0..shape.len() {
            let m = self.factor_matrix(a, &out.rules()[a].nodes, &f.grid.rules()[a].nodes, sign)?;
            data = apply_axis(&data, &shape, a, &m);
            shape[a] = m.len();
        }
        let s = 1.0 / self.c_k;
        GridFn::new(out.clone(), data.into_iter().map(|v| v * s).collect())
    }

    pub fn forward(&self, f: &GridFn, out: &Arc<QuadratureGrid>) -> Result<GridFn> {
        self.separable(f, out, -1.0)
    }

    pub fn inverse(&self, g: &GridFn, out: &Arc<QuadratureGrid>) -> Result<GridFn> {
        self.separable(g, out, 1.0)
    }

    fn pointwise(&self, f: &GridFn, pts: &[Vec<f64>], sign: f64) -> Result<Vec<Complex64>> {
        pts.par_iter()
            .map(|p| {
                let lam: Vec<Complex64> = p.iter().map(|v| I * (sign * v)).collect();
                let terms = f
                    .grid
                    .nodes()
                    .iter()
                    .zip(f.grid.weights())
                    .zip(&f.values)
                    .map(|((x, w), v)| Ok(self.kernel.eval(&lam, x)?.value * v * w))
                    .collect::<Result<Vec<_>>>()?;
                Ok(pairwise_sum_complex(&terms) / self.c_k)
            })
            .collect()
    }

    /// Forward transform at arbitrary points.
    pub fn forward_at(&self, f: &GridFn, pts: &[Vec<f64>]) -> Result<Vec<Complex64>> {
        self.pointwise(f, pts, -1.0)
    }

    /// Inverse transform at arbitrary points.
    pub fn inverse_at(&self, g: &GridFn, pts: &[Vec<f64>]) -> Result<Vec<Complex64>> {
        self.pointwise(g, pts, 1.0)
    }

    /// `E(ix, ·) F f` on the spectral grid.
    fn translated_spectrum(&self, x: &[f64], f: &GridFn, spectral: &Arc<QuadratureGrid>) -> Result<GridFn> {
        let fh = self.forward(f, spectral)?;
        let lam: Vec<Complex64> = x.iter().map(|v| I * v).collect();
        let vals = spectral
            .nodes()
            .par_iter()
            .zip(&fh.values)
            .map(|(xi, v)| Ok(self.kernel.eval(&lam, xi)?.value * v))
            .collect::<Result<Vec<_>>>()?;
        GridFn::new(spectral.clone(), vals)
    }

    /// `τ_x f = F⁻¹(E(ix,·) F f)` on the output grid.
    pub fn translate(
        &self,
        x: &[f64],
        f: &GridFn,
        spectral: &Arc<QuadratureGrid>,
        out: &Arc<QuadratureGrid>,
    ) -> Result<GridFn> {
        let g = self.translated_spectrum(x, f, spectral)?;
        self.inverse(&g, out)
    }

    /// `τ_x f` at arbitrary points.
    pub fn translate_at(
        &self,
        x: &[f64],
        f: &GridFn,
        spectral: &Arc<QuadratureGrid>,
        pts: &[Vec<f64>],
    ) -> Result<Vec<Complex64>> {
        let g = self.translated_spectrum(x, f, spectral)?;
        self.inverse_at(&g, pts)
    }

    /// `(f ∗ g)(y) = ∫ (τ_y f)(−x) g(x) ω(x) dx`, computed spectrally as
    /// `c_k F⁻¹(F f · F g)`.
    pub fn convolve(
        &self,
        f: &GridFn,
        g: &GridFn,
        spectral: &Arc<QuadratureGrid>,
        out: &Arc<QuadratureGrid>,
    ) -> Result<GridFn> {
        let fh = self.forward(f, spectral)?;
        let gh = self.forward(g, spectral)?;
        let p = fh.mul(&gh).scale(Complex64::new(self.c_k, 0.0));
        self.inverse(&p, out)
    }

    /// Convolution by the defining integral: builds `(τ_y f)(−x)` for every
    /// output point `y` and input node `x` of `g`, then integrates against
    /// `g ω`. Quadratic in the grid sizes; meant for small one-dimensional
    /// cross-checks.
    pub fn convolve_direct(
        &self,
        f: &GridFn,
        g: &GridFn,
        spectral: &Arc<QuadratureGrid>,
        pts: &[Vec<f64>],
    ) -> Result<Vec<Complex64>> {
        let minus_x: Vec<Vec<f64>> = g.grid.nodes().iter().map(|x| x.iter().map(|v| -v).collect()).collect();
        pts.iter()
            .map(|y| {
                let ty = self.translate_at(y, f, spectral, &minus_x)?;
                let terms: Vec<Complex64> = ty
                    .iter()
                    .zip(&g.values)
                    .zip(g.grid.weights())
                    .map(|((t, v), w)| t * v * w)
                    .collect();
                Ok(pairwise_sum_complex(&terms))
            })
            .collect()
    }

    /// Relative Plancherel defect `|‖F f‖ − ‖f‖| / ‖f‖` on the given
    /// spectral grid.
    pub fn plancherel_defect(&self, f: &GridFn, spectral: &Arc<QuadratureGrid>) -> Result<f64> {
        let fh = self.forward(f, spectral)?;
        let a = f.norm_l2();
        Ok((fh.norm_l2() - a).abs() / a)
    }

    /// Line factors only: whether the grid is usable by the closed-form
    /// kernel (used to pick defaults).
    pub fn is_rank_one_type(&self) -> bool {
        self.frame()
            .factors()
            .iter()
            .all(|f| !matches!(f.kind, FactorKind::Plane { .. }))
    }
}

/// `out[o, j, i] = Σ_l m[j][l] · data[o, l, i]` along axis `a`.
fn apply_axis(data: &[Complex64], shape: &[usize], a: usize, m: &[Vec<Complex64>]) -> Vec<Complex64> {
    let outer: usize = shape[..a].iter().product();
    let inner: usize = shape[a + 1..].iter().product();
    let na = shape[a];
    let mo = m.len();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * mo * inner];
    out.par_chunks_mut(mo * inner).enumerate().for_each(|(o, chunk)| {
        let base = o * na * inner;
        for (j, row) in m.iter().enumerate() {
            let dst = &mut chunk[j * inner..(j + 1) * inner];
            for (l, c) in row.iter().enumerate() {
                let src = &data[base + l * inner..base + (l + 1) * inner];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += c * s;
                }
            }
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use crate::root_system::RootSystemName;

    fn tr(name: RootSystemName, k: i64) -> DunklTransform {
        let rs = RootSystem::new(name).unwrap();
        let k = Multiplicity::uniform(&rs, qi(k)).unwrap();
        DunklTransform::new(&rs, &k, KernelStrategy::Auto).unwrap()
    }

    #[test]
    fn gaussian_is_fixed_rank1() {
        for k in [0, 1] {
            let t = tr(RootSystemName::Rank1, k);
            let g = t.grid(12.0, 60).unwrap();
            let f = g.sample(|x| Complex64::new((-0.5 * x[0] * x[0]).exp(), 0.0));
            let fh = t.forward(&f, &g).unwrap();
            let err = fh.sub(&f).sup_norm();
            assert!(err < 1e-10, "k={k}: {err}");
        }
    }

    #[test]
    fn pointwise_agrees_with_separable() {
        let t = tr(RootSystemName::A(1), 1);
        let g = t.grid(9.0, 24).unwrap();
        let f = g.sample(|x| Complex64::new((-(x[0] * x[0] + 2.0 * x[1] * x[1]) / 2.0).exp() * (1.0 + x[0]), 0.0));
        let fh = t.forward(&f, &g).unwrap();
        let pts: Vec<Vec<f64>> = [7usize, 100, 333].iter().map(|&i| g.nodes()[i].clone()).collect();
        let direct = t.forward_at(&f, &pts).unwrap();
        for (p, i) in direct.iter().zip([7usize, 100, 333]) {
            assert!((p - fh.values[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn apply_axis_small() {
        let data: Vec<Complex64> = (0..6).map(|v| Complex64::new(v as f64, 0.0)).collect();
        // shape (2, 3); sum along axis 1
        let m = vec![vec![Complex64::new(1.0, 0.0); 3]];
        let out = apply_axis(&data, &[2, 3], 1, &m);
        assert_eq!(out, vec![Complex64::new(3.0, 0.0), Complex64::new(12.0, 0.0)]);
    }
}
