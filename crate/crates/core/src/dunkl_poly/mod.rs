//! Exact Dunkl calculus on polynomials and on quotients by a fixed base
//! polynomial.

mod intertwiner;
mod rational_fn;

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::poly::{Monomial, Poly};
use crate::rational::{qi, Q};
use crate::root_system::{dot, GroupElement, Multiplicity, RootSystem};

pub use intertwiner::{
    kernel_tail_bound, GradedLinearMap, Intertwiner, KernelSeriesValue,
};
pub use rational_fn::{GroupRationalFn, RationalTerm};

/// A positive root with nonzero multiplicity and its reflection.
#[derive(Clone, Debug)]
pub(crate) struct ReflectionTerm {
    pub alpha: Vec<Q>,
    pub k: Q,
    pub s: GroupElement,
}

/// Root system together with a multiplicity; everything the exact operators
/// need.
#[derive(Clone, Debug)]
pub struct DunklContext {
    rs: RootSystem,
    k: Multiplicity,
    terms: Vec<ReflectionTerm>,
}

impl DunklContext {
    pub fn new(rs: &RootSystem, k: &Multiplicity) -> Self {
        // The sum over all roots with weight ½ equals the sum over positive
        // roots, since the summands for α and −α coincide.
        let terms = rs
            .positive_roots()
            .filter_map(|(i, a)| {
                let ka = k.of_root(rs, i).clone();
                (!ka.is_zero()).then(|| ReflectionTerm {
                    alpha: a.clone(),
                    k: ka,
                    s: GroupElement::reflection(a),
                })
            })
            .collect();
        DunklContext {
            rs: rs.clone(),
            k: k.clone(),
            terms,
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn multiplicity(&self) -> &Multiplicity {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.rs.ambient_dim()
    }

    pub(crate) fn reflection_terms(&self) -> &[ReflectionTerm] {
        &self.terms
    }

    /// `T_ξ p = ∂_ξ p + Σ_{α>0} k_α⟨α,ξ⟩ (p − p∘s_α)/⟨α,·⟩`.
    pub fn dunkl_t(&self, xi: &[Q], p: &Poly) -> Result<Poly> {
        let mut out = p.partial_dir(xi);
        for t in &self.terms {
            let ax = dot(&t.alpha, xi);
            if ax.is_zero() {
                continue;
            }
            let diff = p - &act_poly(&t.s, p);
            if diff.is_zero() {
                continue;
            }
            let quot = diff.div_linear(&t.alpha)?;
            out.add_scaled(&quot, &(&t.k * &ax));
        }
        Ok(out)
    }

    /// `T_{e_i} p`.
    pub fn dunkl_t_axis(&self, i: usize, p: &Poly) -> Result<Poly> {
        let mut e = vec![Q::zero(); self.dim()];
        e[i] = Q::one();
        self.dunkl_t(&e, p)
    }

    /// `p(T) q`, substituting `T_{e_i}` for `x_i`. Partial products `T^β q`
    /// are shared between monomials of `p`.
    pub fn apply_poly_op(&self, p: &Poly, q: &Poly) -> Result<Poly> {
        let mut memo: HashMap<Vec<u32>, Poly> = HashMap::new();
        memo.insert(vec![0; self.dim()], q.clone());
        let mut out = Poly::zero(self.dim());
        for (m, c) in p.terms() {
            let tq = self.t_power(&m.0, &mut memo)?;
            out.add_scaled(&tq, c);
        }
        Ok(out)
    }

    fn t_power(&self, beta: &[u32], memo: &mut HashMap<Vec<u32>, Poly>) -> Result<Poly> {
        if let Some(p) = memo.get(beta) {
            return Ok(p.clone());
        }
        let i = beta.iter().position(|&e| e > 0).expect("nonzero multi-index");
        let mut prev = beta.to_vec();
        prev[i] -= 1;
        let base = self.t_power(&prev, memo)?;
        let r = self.dunkl_t_axis(i, &base)?;
        memo.insert(beta.to_vec(), r.clone());
        Ok(r)
    }

    /// Dunkl Laplacian `Δ_k = Σ T_{e_i}²`.
    pub fn laplacian(&self, q: &Poly) -> Result<Poly> {
        self.apply_poly_op(&Poly::norm_sq(self.dim()), q)
    }

    /// Explicit form `Δ_k f = Δf + Σ_{α>0} k_α (2⟨∇f,α⟩/⟨α,x⟩ − |α|²(f − f∘s_α)/⟨α,x⟩²)`.
    pub fn laplacian_explicit(&self, f: &Poly) -> Result<Poly> {
        let d = self.dim();
        let mut out = Poly::zero(d);
        for i in 0..d {
            out = &out + &f.partial(i).partial(i);
        }
        for t in &self.terms {
            let grad_a = f.partial_dir(&t.alpha);
            // ⟨∇f,α⟩/⟨α,x⟩ is not polynomial by itself; combine first.
            let aa = dot(&t.alpha, &t.alpha);
            let diff = f - &act_poly(&t.s, f);
            let ax = Poly::linear(&t.alpha);
            let num = &(&(&grad_a * &ax) * &Poly::constant(d, qi(2))) - &diff.scale(&aa);
            let q1 = num.div_linear(&t.alpha)?.div_linear(&t.alpha)?;
            out.add_scaled(&q1, &t.k);
        }
        Ok(out)
    }
}

/// `x ↦ p(g x)`. Signed permutation matrices are handled by relabelling
/// exponents.
pub fn act_poly(g: &GroupElement, p: &Poly) -> Poly {
    if let Some(perm) = signed_permutation(g) {
        let dim = p.dim();
        let mut out = Poly::zero(dim);
        for (m, c) in p.terms() {
            // (g x)_i = s_i x_{π(i)}
            let mut e = vec![0u32; dim];
            let mut neg = false;
            for (i, &(j, s)) in perm.iter().enumerate() {
                e[j] += m.0[i];
                if s < 0 && m.0[i] % 2 == 1 {
                    neg = !neg;
                }
            }
            out.add_term(Monomial(e), if neg { -c.clone() } else { c.clone() });
        }
        out
    } else {
        p.compose_linear(g.rows())
    }
}

fn signed_permutation(g: &GroupElement) -> Option<Vec<(usize, i8)>> {
    g.rows()
        .iter()
        .map(|row| {
            let nz: Vec<usize> = (0..row.len()).filter(|&j| !row[j].is_zero()).collect();
            if nz.len() != 1 {
                return None;
            }
            let v = &row[nz[0]];
            if v.is_one() {
                Some((nz[0], 1))
            } else if *v == -Q::one() {
                Some((nz[0], -1))
            } else {
                None
            }
        })
        .collect()
}

/// `⟨x⟩ = √(1 + |x|²)`.
pub fn bracket_x(x: &[f64]) -> f64 {
    (1.0 + x.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::root_system::RootSystemName;

    fn ctx(name: RootSystemName, k: Q) -> DunklContext {
        let rs = RootSystem::new(name).unwrap();
        let k = Multiplicity::uniform(&rs, k).unwrap();
        DunklContext::new(&rs, &k)
    }

    #[test]
    fn rank1_values() {
        let c = ctx(RootSystemName::Rank1, q(1, 3));
        let x = Poly::var(1, 0);
        assert_eq!(c.dunkl_t_axis(0, &x).unwrap(), Poly::constant(1, q(5, 3)));
        let x2 = x.pow(2);
        assert_eq!(c.dunkl_t_axis(0, &x2).unwrap(), x.scale(&qi(2)));
        assert_eq!(c.laplacian(&x2).unwrap(), Poly::constant(1, q(2, 1) + q(4, 3)));
    }

    #[test]
    fn a1_axis_value() {
        let c = ctx(RootSystemName::A(1), q(2, 5));
        let x1 = Poly::var(2, 0);
        assert_eq!(c.dunkl_t_axis(0, &x1).unwrap(), Poly::constant(2, q(7, 5)));
    }

    #[test]
    fn constant_killed() {
        let c = ctx(RootSystemName::A(2), qi(1));
        assert!(c.dunkl_t_axis(1, &Poly::constant(3, qi(4))).unwrap().is_zero());
    }

    #[test]
    fn explicit_laplacian_matches() {
        let c = ctx(RootSystemName::A(2), q(1, 2));
        let x = |i| Poly::var(3, i);
        let p = &(&x(0).pow(3) * &x(1)) + &(&x(2).pow(2) * &x(0));
        assert_eq!(c.laplacian(&p).unwrap(), c.laplacian_explicit(&p).unwrap());
    }

    #[test]
    fn act_matches_compose() {
        let g = GroupElement::reflection(&[qi(1), qi(-1), qi(0)]);
        let p = &(&Poly::var(3, 0).pow(2) * &Poly::var(3, 2)) + &Poly::var(3, 1);
        assert_eq!(act_poly(&g, &p), p.compose_linear(g.rows()));
        let neg = GroupElement::reflection(&[qi(1)]);
        let p = &Poly::var(1, 0).pow(3) + &Poly::var(1, 0).pow(2);
        assert_eq!(act_poly(&neg, &p), p.compose_linear(neg.rows()));
    }
}
