//! Orthonormal frame adapted to the irreducible components of a root system.
//!
//! `𝔞` splits orthogonally into the spans of the irreducible components and
//! the free complement. The weight, the kernel and the Macdonald–Mehta
//! constant all factor along this splitting, so grids are built as tensor
//! products of per-factor rules.

use num_traits::Zero;

use crate::error::{DunklError, Result};
use crate::rational::to_f64;
use crate::root_system::{dot, rank_exact, Multiplicity, RootSystem};

#[derive(Clone, Debug, PartialEq)]
pub enum FactorKind {
    /// No roots; the kernel is `e^{λx}`.
    Free,
    /// Component `{±α}`; the weight is `(|α||t|)^{2k}`.
    Line { k: f64, alpha_norm: f64 },
    /// Rank-two component; positive roots in local coordinates with their
    /// multiplicities.
    Plane { roots: Vec<([f64; 2], f64)> },
}

#[derive(Clone, Debug)]
pub struct FrameFactor {
    pub kind: FactorKind,
    /// Orthonormal vectors in the ambient space spanning the factor.
    pub basis: Vec<Vec<f64>>,
}

impl FrameFactor {
    pub fn local_dim(&self) -> usize {
        self.basis.len()
    }

    /// Local coordinates of an ambient point.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        self.basis
            .iter()
            .map(|u| u.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Factor weight at local coordinates.
    pub fn weight(&self, t: &[f64]) -> f64 {
        match &self.kind {
            FactorKind::Free => 1.0,
            FactorKind::Line { k, alpha_norm } => {
                if *k == 0.0 {
                    1.0
                } else {
                    (alpha_norm * t[0].abs()).powf(2.0 * k)
                }
            }
            FactorKind::Plane { roots } => roots
                .iter()
                .map(|(a, k)| {
                    if *k == 0.0 {
                        1.0
                    } else {
                        (a[0] * t[0] + a[1] * t[1]).abs().powf(2.0 * k)
                    }
                })
                .product(),
        }
    }

    /// Degree of homogeneity of the factor weight.
    pub fn homogeneity(&self) -> f64 {
        match &self.kind {
            FactorKind::Free => 0.0,
            FactorKind::Line { k, .. } => 2.0 * k,
            FactorKind::Plane { roots } => roots.iter().map(|(_, k)| 2.0 * k).sum(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Frame {
    dim: usize,
    factors: Vec<FrameFactor>,
}

impl Frame {
    pub fn new(rs: &RootSystem, k: &Multiplicity) -> Result<Self> {
        let d = rs.ambient_dim();
        let pos: Vec<(usize, &Vec<crate::Q>)> = rs.positive_roots().collect();
        // components of the non-orthogonality graph
        let mut comp = vec![usize::MAX; pos.len()];
        let mut ncomp = 0;
        for s in 0..pos.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = ncomp;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for v in 0..pos.len() {
                    if comp[v] == usize::MAX && !dot(pos[u].1, pos[v].1).is_zero() {
                        comp[v] = ncomp;
                        stack.push(v);
                    }
                }
            }
            ncomp += 1;
        }
        let mut factors = Vec::new();
        let mut span: Vec<Vec<f64>> = Vec::new();
        for c in 0..ncomp {
            let members: Vec<usize> = (0..pos.len()).filter(|&i| comp[i] == c).collect();
            let exact: Vec<Vec<crate::Q>> = members.iter().map(|&i| pos[i].1.clone()).collect();
            let roots_f: Vec<(Vec<f64>, f64)> = members
                .iter()
                .map(|&i| {
                    (
                        pos[i].1.iter().map(to_f64).collect(),
                        to_f64(k.of_root(rs, pos[i].0)),
                    )
                })
                .collect();
            match rank_exact(&exact) {
                1 => {
                    let (a, kk) = &roots_f[0];
                    let n = norm(a);
                    let u: Vec<f64> = a.iter().map(|v| v / n).collect();
                    span.push(u.clone());
                    factors.push(FrameFactor {
                        kind: FactorKind::Line {
                            k: *kk,
                            alpha_norm: n,
                        },
                        basis: vec![u],
                    });
                }
                2 => {
                    let mut basis: Vec<Vec<f64>> = Vec::new();
                    for (a, _) in &roots_f {
                        if let Some(u) = orthonormalize(a, &basis) {
                            basis.push(u);
                        }
                        if basis.len() == 2 {
                            break;
                        }
                    }
                    let roots = roots_f
                        .iter()
                        .map(|(a, kk)| {
                            let p0: f64 = a.iter().zip(&basis[0]).map(|(x, y)| x * y).sum();
                            let p1: f64 = a.iter().zip(&basis[1]).map(|(x, y)| x * y).sum();
                            ([p0, p1], *kk)
                        })
                        .collect();
                    span.extend(basis.iter().cloned());
                    factors.push(FrameFactor {
                        kind: FactorKind::Plane { roots },
                        basis,
                    });
                }
                r => {
                    return Err(DunklError::Unsupported(format!(
                        "numeric layer handles irreducible components of rank ≤ 2, found rank {r}"
                    )))
                }
            }
        }
        // free complement, seeded by the standard basis so that free blocks of
        // a direct sum keep their coordinates
        for i in 0..d {
            if span.len() == d {
                break;
            }
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            if let Some(u) = orthonormalize(&e, &span) {
                span.push(u.clone());
                factors.push(FrameFactor {
                    kind: FactorKind::Free,
                    basis: vec![u],
                });
            }
        }
        Ok(Frame { dim: d, factors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factors(&self) -> &[FrameFactor] {
        &self.factors
    }

    /// Total homogeneity `Σ_{α∈R} k_α` of `ω`.
    pub fn homogeneity(&self) -> f64 {
        self.factors.iter().map(|f| f.homogeneity()).sum()
    }

    /// Ambient point from per-factor local coordinates.
    pub fn embed(&self, local: &[&[f64]]) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        for (f, t) in self.factors.iter().zip(local) {
            for (u, ti) in f.basis.iter().zip(t.iter()) {
                for (xj, uj) in x.iter_mut().zip(u) {
                    *xj += ti * uj;
                }
            }
        }
        x
    }

    /// `ω(x)` as the product of factor weights.
    pub fn weight(&self, x: &[f64]) -> f64 {
        self.factors
            .iter()
            .map(|f| f.weight(&f.project(x)))
            .product()
    }
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn orthonormalize(v: &[f64], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let c: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
    }
    let n = norm(&w);
    if n < 1e-10 * norm(v).max(1.0) {
        None
    } else {
        Some(w.iter().map(|x| x / n).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::root_system::{weight_omega, RootSystemName};

    #[test]
    fn a1_frame() {
        let rs = RootSystem::new(RootSystemName::A(1)).unwrap();
        let k = Multiplicity::uniform(&rs, qi(1)).unwrap();
        let f = Frame::new(&rs, &k).unwrap();
        assert_eq!(f.factors().len(), 2);
        assert!(matches!(f.factors()[1].kind, FactorKind::Free));
        let x = [0.3, -1.1];
        assert!((f.weight(&x) - weight_omega(&rs, &k, &x)).abs() < 1e-13);
        assert_eq!(f.homogeneity(), 2.0);
    }

    #[test]
    fn a2_frame_weight() {
        let rs = RootSystem::new(RootSystemName::A(2)).unwrap();
        let k = Multiplicity::uniform(&rs, q(1, 2)).unwrap();
        let f = Frame::new(&rs, &k).unwrap();
        assert!(matches!(f.factors()[0].kind, FactorKind::Plane { .. }));
        let x = [0.4, -0.7, 1.3];
        assert!((f.weight(&x) - weight_omega(&rs, &k, &x)).abs() < 1e-12);
    }

    #[test]
    fn direct_sum_free_is_trailing() {
        let rs = RootSystem::new(RootSystemName::DirectSum(vec![
            RootSystemName::Rank1,
            RootSystemName::Empty(1),
        ]))
        .unwrap();
        let k = Multiplicity::uniform(&rs, qi(1)).unwrap();
        let f = Frame::new(&rs, &k).unwrap();
        assert_eq!(f.factors()[1].basis[0], vec![0.0, 1.0]);
    }
}
