use num_complex::Complex64;
use num_traits::Zero;

use super::{act_poly, DunklContext};
use crate::error::Result;
use crate::poly::Poly;
use crate::root_system::{dot, GroupElement};

/// One summand `q(x) / ∏_j p(w_j x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalTerm {
    pub numerator: Poly,
    pub word: Vec<GroupElement>,
}

/// `Σ_i q_i(x) / ∏_j p(w_{i,j} x)` for a fixed base polynomial `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRationalFn {
    base: Poly,
    terms: Vec<RationalTerm>,
}

impl GroupRationalFn {
    /// `q / p`.
    pub fn quotient(q: Poly, base: Poly) -> Self {
        let dim = base.dim();
        GroupRationalFn {
            base,
            terms: vec![RationalTerm {
                numerator: q,
                word: vec![GroupElement::identity(dim)],
            }],
        }
    }

    /// `q` itself, with an empty denominator word.
    pub fn polynomial(q: Poly, base: Poly) -> Self {
        GroupRationalFn {
            base,
            terms: vec![RationalTerm {
                numerator: q,
                word: vec![],
            }],
        }
    }

    pub fn base(&self) -> &Poly {
        &self.base
    }

    pub fn terms(&self) -> &[RationalTerm] {
        &self.terms
    }

    /// Longest denominator word.
    pub fn word_length(&self) -> usize {
        self.terms.iter().map(|t| t.word.len()).max().unwrap_or(0)
    }

    /// Largest numerator degree (`None` when every numerator vanishes).
    pub fn numerator_degree(&self) -> Option<u32> {
        self.terms.iter().filter_map(|t| t.numerator.degree()).max()
    }

    fn denominator(&self, word: &[GroupElement]) -> Poly {
        word.iter()
            .fold(Poly::one(self.base.dim()), |acc, w| &acc * &act_poly(w, &self.base))
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let den: f64 = t.word.iter().map(|w| self.base.eval_f64(&w.apply_f64(x))).product();
                t.numerator.eval_f64(x) / den
            })
            .sum()
    }

    pub fn eval_complex(&self, x: &[f64]) -> Complex64 {
        Complex64::new(self.eval_f64(x), 0.0)
    }

    /// `T_ξ` applied termwise. For `f = q/D` with `D = ∏ p(w_j ·)`:
    /// `∂_ξ f = (D ∂_ξ q − q ∂_ξ D)/(D·D)` and each reflection contributes
    /// `k_α⟨α,ξ⟩ (q·(D∘s_α) − (q∘s_α)·D)/⟨α,·⟩ / (D·(D∘s_α))`; the numerator
    /// is odd under `s_α` and hence divisible by `⟨α,·⟩`.
    pub fn dunkl_t(&self, ctx: &DunklContext, xi: &[crate::Q]) -> Result<GroupRationalFn> {
        let mut out = Vec::new();
        for t in &self.terms {
            if t.numerator.is_zero() {
                continue;
            }
            if t.word.is_empty() {
                out.push(RationalTerm {
                    numerator: ctx.dunkl_t(xi, &t.numerator)?,
                    word: vec![],
                });
                continue;
            }
            let q = &t.numerator;
            let d = self.denominator(&t.word);
            let num = &(&d * &q.partial_dir(xi)) - &(q * &d.partial_dir(xi));
            let mut w2 = t.word.clone();
            w2.extend(t.word.iter().cloned());
            out.push(RationalTerm {
                numerator: num,
                word: w2,
            });
            for r in ctx.reflection_terms() {
                let ax = dot(&r.alpha, xi);
                if ax.is_zero() {
                    continue;
                }
                let d_s = act_poly(&r.s, &d);
                let q_s = act_poly(&r.s, q);
                let diff = &(q * &d_s) - &(&q_s * &d);
                if diff.is_zero() {
                    continue;
                }
                let numerator = diff.div_linear(&r.alpha)?.scale(&(&r.k * &ax));
                let mut word = t.word.clone();
                word.extend(t.word.iter().map(|w| w.mul(&r.s)));
                out.push(RationalTerm { numerator, word });
            }
        }
        Ok(GroupRationalFn {
            base: self.base.clone(),
            terms: out,
        })
    }

    /// `T^β f` for a multi-index `β` over the coordinate axes.
    pub fn dunkl_t_multi(&self, ctx: &DunklContext, beta: &[u32]) -> Result<GroupRationalFn> {
        let d = ctx.dim();
        let mut f = self.clone();
        for (i, &e) in beta.iter().enumerate() {
            let mut axis = vec![crate::Q::zero(); d];
            axis[i] = crate::rational::qi(1);
            for _ in 0..e {
                f = f.dunkl_t(ctx, &axis)?;
            }
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::root_system::{Multiplicity, RootSystem, RootSystemName};

    fn ctx(name: RootSystemName, k: crate::Q) -> DunklContext {
        let rs = RootSystem::new(name).unwrap();
        let k = Multiplicity::uniform(&rs, k).unwrap();
        DunklContext::new(&rs, &k)
    }

    #[test]
    fn inverse_x_rank1() {
        let k = q(3, 4);
        let c = ctx(RootSystemName::Rank1, k.clone());
        let x = Poly::var(1, 0);
        let f = GroupRationalFn::quotient(Poly::one(1), x.clone());
        let t = f.dunkl_t(&c, &[qi(1)]).unwrap();
        assert_eq!(t.word_length(), 2);
        let want = 2.0 * 0.75 - 1.0;
        for &p in &[0.3, 1.7, -2.2] {
            assert!((t.eval_f64(&[p]) - want / (p * p)).abs() < 1e-12);
        }
    }

    #[test]
    fn polynomial_case_matches() {
        let c = ctx(RootSystemName::A(1), q(1, 2));
        let p = &Poly::var(2, 0).pow(3) + &Poly::var(2, 1);
        let f = GroupRationalFn::polynomial(p.clone(), Poly::norm_sq(2));
        let t = f.dunkl_t(&c, &[qi(1), qi(0)]).unwrap();
        assert_eq!(t.terms()[0].numerator, c.dunkl_t(&[qi(1), qi(0)], &p).unwrap());
    }

    #[test]
    fn degree_growth() {
        let c = ctx(RootSystemName::Rank1, qi(1));
        let p = &Poly::var(1, 0).pow(2) + &Poly::one(1);
        let mut f = GroupRationalFn::quotient(Poly::one(1), p);
        for b in 1..=3u32 {
            f = f.dunkl_t(&c, &[qi(1)]).unwrap();
            assert_eq!(f.word_length(), 1 << b);
            let want = ((1u32 << b) - 1) * 2 - b;
            assert!(f.numerator_degree().unwrap() <= want);
        }
    }
}
