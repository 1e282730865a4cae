//! Test functions `φ(x) = p(x)·e^{−a|x|²/2}`.
//!
//! The Gaussian factor is invariant under every reflection, so the class is
//! closed under Dunkl operators: `T_ξ(p g_a) = (T_ξ p − a⟨ξ,·⟩p) g_a`.

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::dunkl_poly::DunklContext;
use crate::error::{DunklError, Result};
use crate::poly::Poly;
use crate::rational::{to_f64, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct TestFn {
    poly: Poly,
    a: Q,
}

impl TestFn {
    pub fn new(poly: Poly, a: Q) -> Result<Self> {
        if !a.is_positive() {
            return Err(DunklError::Precondition("Gaussian scale must be positive".into()));
        }
        Ok(TestFn { poly, a })
    }

    pub fn gaussian(dim: usize, a: Q) -> Result<Self> {
        TestFn::new(Poly::one(dim), a)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn scale(&self) -> &Q {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        self.poly.eval_f64(x) * (-0.5 * to_f64(&self.a) * r2).exp()
    }

    pub fn eval_complex(&self, x: &[f64]) -> Complex64 {
        Complex64::new(self.eval(x), 0.0)
    }

    pub fn mul_poly(&self, q: &Poly) -> TestFn {
        TestFn {
            poly: &self.poly * q,
            a: self.a.clone(),
        }
    }

    pub fn add(&self, other: &TestFn) -> Result<TestFn> {
        if self.a != other.a {
            return Err(DunklError::Precondition("Gaussian scales differ".into()));
        }
        Ok(TestFn {
            poly: &self.poly + &other.poly,
            a: self.a.clone(),
        })
    }

    pub fn dunkl_t(&self, ctx: &DunklContext, xi: &[Q]) -> Result<TestFn> {
        let tp = ctx.dunkl_t(xi, &self.poly)?;
        let lin = &Poly::linear(xi) * &self.poly;
        Ok(TestFn {
            poly: &tp - &lin.scale(&self.a),
            a: self.a.clone(),
        })
    }

    pub fn dunkl_t_axis(&self, ctx: &DunklContext, i: usize) -> Result<TestFn> {
        let mut e = vec![Q::zero(); self.dim()];
        e[i] = crate::rational::qi(1);
        self.dunkl_t(ctx, &e)
    }

    /// `p(T) φ`.
    pub fn apply_poly_op(&self, ctx: &DunklContext, p: &Poly) -> Result<TestFn> {
        let mut out = TestFn {
            poly: Poly::zero(self.dim()),
            a: self.a.clone(),
        };
        let mut memo: std::collections::HashMap<Vec<u32>, TestFn> = Default::default();
        memo.insert(vec![0; self.dim()], self.clone());
        for (m, c) in p.terms() {
            let t = self.power(ctx, &m.0, &mut memo)?;
            out.poly.add_scaled(&t.poly, c);
        }
        Ok(out)
    }

    fn power(
        &self,
        ctx: &DunklContext,
        beta: &[u32],
        memo: &mut std::collections::HashMap<Vec<u32>, TestFn>,
    ) -> Result<TestFn> {
        if let Some(t) = memo.get(beta) {
            return Ok(t.clone());
        }
        let i = beta.iter().position(|&e| e > 0).expect("nonzero multi-index");
        let mut prev = beta.to_vec();
        prev[i] -= 1;
        let r = self.power(ctx, &prev, memo)?.dunkl_t_axis(ctx, i)?;
        memo.insert(beta.to_vec(), r.clone());
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::root_system::{Multiplicity, RootSystem, RootSystemName};

    #[test]
    fn gaussian_derivative_rank1() {
        let rs = RootSystem::new(RootSystemName::Rank1).unwrap();
        let k = Multiplicity::uniform(&rs, qi(1)).unwrap();
        let ctx = DunklContext::new(&rs, &k);
        let g = TestFn::gaussian(1, qi(1)).unwrap();
        let t = g.dunkl_t_axis(&ctx, 0).unwrap();
        assert_eq!(t.poly(), &Poly::var(1, 0).scale(&qi(-1)));
        // finite-difference check of the even part
        let h = 1e-5;
        let x = 0.7;
        let fd = (g.eval(&[x + h]) - g.eval(&[x - h])) / (2.0 * h);
        assert!((fd - t.eval(&[x])).abs() < 1e-8);
        assert!(TestFn::gaussian(1, q(-1, 2)).is_err());
    }
}
