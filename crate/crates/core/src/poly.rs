//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{DunklError, Result};
use crate::rational::{format_q, parse_q, to_f64, Q};

/// Exponent vector of a monomial. Ordered graded-lexicographically: total
/// degree first, then lexicographically with `x_1` most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn var(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product()
    }

    pub fn eval_complex(&self, x: &[Complex64]) -> Complex64 {
        self.0
            .iter()
            .zip(x)
            .fold(Complex64::one(), |acc, (&e, &xi)| acc * xi.powi(e as i32))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of total degree `n` in `dim` variables, in ascending
/// graded-lex order. This is the monomial basis of `𝒫_n`.
pub fn monomials_of_degree(dim: usize, n: u32) -> Vec<Monomial> {
    fn rec(dim: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() + 1 == dim {
            cur.push(left);
            out.push(Monomial(cur.clone()));
            cur.pop();
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(dim, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        if n == 0 {
            out.push(Monomial(vec![]));
        }
        return out;
    }
    rec(dim, n, &mut Vec::with_capacity(dim), &mut out);
    out.sort();
    out
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        Poly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Q) -> Self {
        let mut p = Poly::zero(dim);
        p.add_term(Monomial::one(dim), c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Poly::constant(dim, Q::one())
    }

    pub fn var(dim: usize, i: usize) -> Self {
        Poly::monomial(Monomial::var(dim, i), Q::one())
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut p = Poly::zero(m.dim());
        p.add_term(m, c);
        p
    }

    /// Linear form `⟨a, x⟩`.
    pub fn linear(a: &[Q]) -> Self {
        let dim = a.len();
        let mut p = Poly::zero(dim);
        for (i, ai) in a.iter().enumerate() {
            p.add_term(Monomial::var(dim, i), ai.clone());
        }
        p
    }

    /// `|x|² = Σ x_i²`.
    pub fn norm_sq(dim: usize) -> Self {
        let mut p = Poly::zero(dim);
        for i in 0..dim {
            let mut e = vec![0; dim];
            e[i] = 2;
            p.add_term(Monomial(e), Q::one());
        }
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Poly::zero(dim);
        for (m, c) in terms {
            assert_eq!(m.dim(), dim, "monomial dimension mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.dim);
        }
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn homogeneous_part(&self, n: u32) -> Poly {
        Poly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == n)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i] -= 1;
                out.add_term(m2, c * Q::from_integer(e.into()));
            }
        }
        out
    }

    /// Directional derivative `∂_ξ`.
    pub fn partial_dir(&self, xi: &[Q]) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (i, c) in xi.iter().enumerate() {
            if !c.is_zero() {
                out.add_scaled(&self.partial(i), c);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one(self.dim);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// `x ↦ p(Mx)` for a square matrix `M` given row-wise.
    pub fn compose_linear(&self, m: &[Vec<Q>]) -> Poly {
        let dim = self.dim;
        let forms: Vec<Poly> = m.iter().map(|row| Poly::linear(row)).collect();
        let maxdeg: Vec<u32> = (0..dim)
            .map(|i| self.terms.keys().map(|mm| mm.0[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<Poly>> = (0..dim)
            .map(|i| {
                let mut v = vec![Poly::one(dim)];
                for e in 1..=maxdeg[i] as usize {
                    let next = &v[e - 1] * &forms[i];
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Poly::zero(dim);
        for (mono, c) in &self.terms {
            let mut t = Poly::constant(dim, c.clone());
            for i in 0..dim {
                let e = mono.0[i] as usize;
                if e > 0 {
                    t = &t * &powers[i][e];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Exact quotient by the linear form `⟨a, x⟩`. Fails if the remainder is
    /// nonzero.
    pub fn div_linear(&self, a: &[Q]) -> Result<Poly> {
        let j = a
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| DunklError::NonzeroRemainder("division by zero form".into()))?;
        let aj = a[j].clone();
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.dim);
        loop {
            // term with the highest power of x_j
            let pick = rem
                .terms
                .iter()
                .filter(|(m, _)| m.0[j] > 0)
                .max_by_key(|(m, _)| m.0[j])
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = pick else { break };
            let mut qm = m.clone();
            qm.0[j] -= 1;
            let qc = &c / &aj;
            // rem -= qc * x^qm * ⟨a,x⟩
            for (i, ai) in a.iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                let mut mm = qm.clone();
                mm.0[i] += 1;
                rem.add_term(mm, -(&qc * ai));
            }
            quot.add_term(qm, qc);
        }
        if !rem.is_zero() {
            return Err(DunklError::NonzeroRemainder(format!(
                "remainder {rem} after dividing by a linear form"
            )));
        }
        Ok(quot)
    }

    pub fn eval_q(&self, x: &[Q]) -> Q {
        let mut s = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, xi) in m.0.iter().zip(x) {
                for _ in 0..*e {
                    t *= xi;
                }
            }
            s += t;
        }
        s
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| to_f64(c) * m.eval_f64(x))
            .sum()
    }

    pub fn eval_complex(&self, x: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| m.eval_complex(x) * to_f64(c))
            .sum()
    }

    /// Sum of absolute values of the coefficients of the degree-`n` part.
    pub fn abs_coeff_sum(&self, n: u32) -> f64 {
        self.terms
            .iter()
            .filter(|(m, _)| m.degree() == n)
            .map(|(_, c)| to_f64(&c.abs()))
            .sum()
    }

    /// Splits the variables into the first `d` and the remaining ones; used
    /// for bivariate `τp(x, y)` objects stored in `2n` variables.
    pub fn swap_halves(&self) -> Poly {
        let d = self.dim / 2;
        Poly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0[d..].to_vec();
                    e.extend_from_slice(&m.0[..d]);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Substitutes zero for the last `dim/2` variables and drops them.
    pub fn restrict_second_half_zero(&self) -> Poly {
        let d = self.dim / 2;
        let mut out = Poly::zero(d);
        for (m, c) in &self.terms {
            if m.0[d..].iter().all(|&e| e == 0) {
                out.add_term(Monomial(m.0[..d].to_vec()), c.clone());
            }
        }
        out
    }

    pub fn to_json_terms(&self) -> Vec<PolyTermJson> {
        self.terms
            .iter()
            .map(|(m, c)| PolyTermJson {
                exponent: m.0.clone(),
                coeff: format_q(c),
            })
            .collect()
    }

    pub fn from_json_terms(dim: usize, terms: &[PolyTermJson]) -> Result<Poly> {
        let mut p = Poly::zero(dim);
        for t in terms {
            if t.exponent.len() != dim {
                return Err(DunklError::Parse(format!(
                    "exponent {:?} does not have length {dim}",
                    t.exponent
                )));
            }
            p.add_term(Monomial(t.exponent.clone()), parse_q(&t.coeff)?);
        }
        Ok(p)
    }
}

/// JSON form of one polynomial term: `{exponent: [..], coeff: "p/q"}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolyTermJson {
    pub exponent: Vec<u32>,
    pub coeff: String,
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_q(c))?;
            for (i, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn x(dim: usize, i: usize) -> Poly {
        Poly::var(dim, i)
    }

    #[test]
    fn graded_lex_basis_sizes() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(2, 10).len(), 11);
        assert_eq!(monomials_of_degree(1, 4), vec![Monomial(vec![4])]);
        let b = monomials_of_degree(2, 2);
        assert_eq!(b.first().unwrap().0, vec![0, 2]);
        assert_eq!(b.last().unwrap().0, vec![2, 0]);
    }

    #[test]
    fn arithmetic_drops_zeros() {
        let p = &x(2, 0) + &x(2, 1);
        let z = &p - &p;
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        let sq = &p * &p;
        assert_eq!(sq.coeff(&Monomial(vec![1, 1])), qi(2));
        assert_eq!(sq.degree(), Some(2));
    }

    #[test]
    fn divide_by_linear_form() {
        // (x1^2 - x2^2) / (x1 - x2) = x1 + x2
        let p = &(&x(2, 0) * &x(2, 0)) - &(&x(2, 1) * &x(2, 1));
        let qt = p.div_linear(&[qi(1), qi(-1)]).unwrap();
        assert_eq!(qt, &x(2, 0) + &x(2, 1));
        assert!(x(2, 0).div_linear(&[qi(0), qi(1)]).is_err());
    }

    #[test]
    fn compose_with_swap() {
        let p = &(&x(2, 0) * &x(2, 0)) + &x(2, 1).scale(&q(3, 2));
        let swap = vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]];
        let r = p.compose_linear(&swap);
        assert_eq!(r, &(&x(2, 1) * &x(2, 1)) + &x(2, 0).scale(&q(3, 2)));
    }

    #[test]
    fn json_terms() {
        let p = &x(2, 0).scale(&q(1, 3)) + &Poly::one(2);
        let j = serde_json::to_string(&p.to_json_terms()).unwrap();
        let back: Vec<PolyTermJson> = serde_json::from_str(&j).unwrap();
        assert_eq!(Poly::from_json_terms(2, &back).unwrap(), p);
        assert!(j.contains("\"1/3\""));
    }
}
