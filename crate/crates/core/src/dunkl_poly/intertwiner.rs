use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{act_poly, DunklContext};
use crate::error::{DunklError, Result};
use crate::poly::{monomials_of_degree, Monomial, Poly};
use crate::rational::{format_q, parse_q, qi, to_f64, Q};

/// Degree-preserving linear map on polynomials, stored as one dense matrix
/// per degree acting on the graded-lex monomial basis. Column `j` of block
/// `n` holds the image of the `j`-th basis monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedLinearMap {
    dim: usize,
    blocks: Vec<Vec<Vec<Q>>>,
}

#[derive(Serialize, Deserialize)]
struct GradedLinearMapJson {
    dim: usize,
    blocks: Vec<Vec<Vec<String>>>,
}

struct Basis {
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

fn basis(dim: usize, n: u32) -> Basis {
    let monos = monomials_of_degree(dim, n);
    let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    Basis { monos, index }
}

impl GradedLinearMap {
    pub fn identity(dim: usize, max_degree: usize) -> Self {
        let blocks = (0..=max_degree)
            .map(|n| identity_matrix(monomials_of_degree(dim, n as u32).len()))
            .collect();
        GradedLinearMap { dim, blocks }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn block(&self, n: usize) -> &[Vec<Q>] {
        &self.blocks[n]
    }

    /// Image of a single monomial.
    pub fn apply_monomial(&self, m: &Monomial) -> Result<Poly> {
        let n = m.degree() as usize;
        if n > self.max_degree() {
            return Err(DunklError::DegreeTooHigh {
                requested: n,
                built: self.max_degree(),
            });
        }
        let b = monomials_of_degree(self.dim, n as u32);
        let j = b.binary_search(m).expect("monomial in basis");
        let mut out = Poly::zero(self.dim);
        for (i, bm) in b.iter().enumerate() {
            let c = &self.blocks[n][i][j];
            if !c.is_zero() {
                out.add_term(bm.clone(), c.clone());
            }
        }
        Ok(out)
    }

    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        let mut out = Poly::zero(self.dim);
        for (m, c) in p.terms() {
            out.add_scaled(&self.apply_monomial(m)?, c);
        }
        Ok(out)
    }

    /// Blockwise exact inverse.
    pub fn inverse(&self) -> Result<GradedLinearMap> {
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(n, b)| invert(b).ok_or(DunklError::SingularSystem { degree: n }))
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedLinearMap {
            dim: self.dim,
            blocks,
        })
    }

    pub fn compose(&self, other: &GradedLinearMap) -> GradedLinearMap {
        let top = self.max_degree().min(other.max_degree());
        let blocks = (0..=top)
            .map(|n| matmul(&self.blocks[n], &other.blocks[n]))
            .collect();
        GradedLinearMap {
            dim: self.dim,
            blocks,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = GradedLinearMapJson {
            dim: self.dim,
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|r| r.iter().map(format_q).collect()).collect())
                .collect(),
        };
        serde_json::to_value(doc).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let doc: GradedLinearMapJson = serde_json::from_value(v.clone())?;
        let blocks = doc
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|r| r.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedLinearMap {
            dim: doc.dim,
            blocks,
        })
    }
}

fn identity_matrix(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

fn matmul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    let mut out = vec![vec![Q::zero(); m]; n];
    for i in 0..n {
        for (l, ail) in a[i].iter().enumerate() {
            if ail.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += ail * &b[l][j];
                }
            }
        }
    }
    out
}

fn invert(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let rows: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    let reduced = solve_stacked(rows, n)?;
    Some(reduced)
}

/// Solves `(n + Σ_{α>0} k_α(1 − s_α)) X = B` on `𝒫_n`, one block per
/// connected set of monomials.
fn solve_euler(ctx: &DunklContext, b: &Basis, n: usize, rhs: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let dn = b.monos.len();
    // sparse columns of the operator
    let mut a = vec![vec![Q::zero(); dn]; dn];
    for (j, m) in b.monos.iter().enumerate() {
        a[j][j] += qi(n as i64);
        let mp = Poly::monomial(m.clone(), Q::one());
        for t in ctx.reflection_terms() {
            a[j][j] += &t.k;
            for (mm, c) in act_poly(&t.s, &mp).terms() {
                a[b.index[mm]][j] -= &t.k * c;
            }
        }
    }
    // connected components of the sparsity pattern
    let mut comp = vec![usize::MAX; dn];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for s in 0..dn {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut stack = vec![s];
        let mut members = Vec::new();
        comp[s] = id;
        while let Some(u) = stack.pop() {
            members.push(u);
            for v in 0..dn {
                if comp[v] == usize::MAX && (!a[u][v].is_zero() || !a[v][u].is_zero()) {
                    comp[v] = id;
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    let mut x = vec![vec![Q::zero(); dn]; dn];
    for g in &groups {
        let sz = g.len();
        let cols: Vec<usize> = (0..dn).filter(|&j| g.iter().any(|&r| !rhs[r][j].is_zero())).collect();
        let rows: Vec<Vec<Q>> = g
            .iter()
            .map(|&r| {
                let mut row: Vec<Q> = g.iter().map(|&c| a[r][c].clone()).collect();
                row.extend(cols.iter().map(|&j| rhs[r][j].clone()));
                row
            })
            .collect();
        let sol = solve_stacked(rows, sz).ok_or(DunklError::SingularSystem { degree: n })?;
        for (li, &r) in g.iter().enumerate() {
            for (lj, &j) in cols.iter().enumerate() {
                x[r][j] = sol[li][lj].clone();
            }
        }
    }
    Ok(x)
}

/// Gauss–Jordan elimination on `[L | B]` where `L` has `ncols` columns and is
/// expected to have full column rank. Returns `X` (ncols × width(B)) with
/// `L X = B`, or `None` if `L` is rank deficient or the system inconsistent.
fn solve_stacked(mut rows: Vec<Vec<Q>>, ncols: usize) -> Option<Vec<Vec<Q>>> {
    let width = rows.first().map(|r| r.len()).unwrap_or(ncols);
    for c in 0..ncols {
        let p = (c..rows.len()).find(|&r| !rows[r][c].is_zero())?;
        rows.swap(c, p);
        let inv = Q::one() / &rows[c][c];
        for j in c..width {
            if !rows[c][j].is_zero() {
                rows[c][j] *= &inv;
            }
        }
        let pivot = rows[c].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..width {
                if !pivot[j].is_zero() {
                    row[j] -= &f * &pivot[j];
                }
            }
        }
    }
    if rows[ncols..].iter().any(|r| r.iter().any(|v| !v.is_zero())) {
        return None;
    }
    Some(rows.into_iter().take(ncols).map(|r| r[ncols..].to_vec()).collect())
}

/// Value of a truncated kernel series and its error budget.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KernelSeriesValue {
    pub value: Complex64,
    /// `Σ_{n>N} (|λ||x|)ⁿ/n!`.
    pub truncation_bound: f64,
    /// Floating-point allowance from the magnitudes of the summed terms.
    pub roundoff_bound: f64,
}

impl KernelSeriesValue {
    pub fn tail_bound(&self) -> f64 {
        self.truncation_bound + self.roundoff_bound
    }
}

/// `Σ_{n>N} tⁿ/n!` for `t ≥ 0`.
pub fn kernel_tail_bound(t: f64, n_max: usize) -> f64 {
    let t = t.abs();
    let mut term = 1.0;
    for n in 1..=n_max {
        term *= t / n as f64;
    }
    let mut sum = 0.0;
    let mut n = n_max + 1;
    loop {
        term *= t / n as f64;
        sum += term;
        if (n as f64 > t && term <= sum * 1e-18) || term == 0.0 || n > n_max + 10_000 {
            break;
        }
        n += 1;
    }
    sum
}

/// Dunkl's intertwining operator `V` and its inverse, built degree by degree.
#[derive(Debug)]
pub struct Intertwiner {
    ctx: DunklContext,
    v: GradedLinearMap,
    v_inv: GradedLinearMap,
    f64_blocks: Vec<Vec<Vec<f64>>>,
    image_cache: Mutex<HashMap<Monomial, Poly>>,
    bases: OnceLock<Vec<Vec<Monomial>>>,
}

impl Intertwiner {
    /// Builds `V` and `V⁻¹` on `𝒫_0 ⊕ … ⊕ 𝒫_{n_max}`.
    ///
    /// On `𝒫_n`, `⟨x,T⟩ = n + Σ_{α>0} k_α(1 − s_α)` and `T_i V = V ∂_i` give
    /// `(n + Σ k_α(1 − s_α)) V p = Σ_i x_i V(∂_i p)`. The operator on the left
    /// is invertible for `k ≥ 0` and splits into blocks over the orbits of
    /// monomials under the reflections. Dually, `n V⁻¹p = Σ_i x_i V⁻¹(T_i p)`.
    pub fn build(ctx: &DunklContext, n_max: usize) -> Result<Self> {
        let d = ctx.dim();
        if ctx.multiplicity().is_zero() {
            let id = GradedLinearMap::identity(d, n_max);
            return Ok(Intertwiner::from_maps(ctx, id.clone(), id));
        }
        let mut v_blocks: Vec<Vec<Vec<Q>>> = vec![vec![vec![Q::one()]]];
        let mut w_blocks: Vec<Vec<Vec<Q>>> = vec![vec![vec![Q::one()]]];
        let mut prev = basis(d, 0);
        for n in 1..=n_max {
            let cur = basis(d, n as u32);
            let dn = cur.monos.len();
            let col_of = |block: &Vec<Vec<Q>>, b: &Basis, l: usize| -> Poly {
                let mut p = Poly::zero(d);
                for (r, row) in block.iter().enumerate() {
                    if !row[l].is_zero() {
                        p.add_term(b.monos[r].clone(), row[l].clone());
                    }
                }
                p
            };
            // right-hand sides Σ_i x_i V(∂_i m)
            let mut rhs = vec![vec![Q::zero(); dn]; dn];
            let mut inv = vec![vec![Q::zero(); dn]; dn];
            let inv_n = Q::one() / qi(n as i64);
            for (j, m) in cur.monos.iter().enumerate() {
                let mp = Poly::monomial(m.clone(), Q::one());
                let mut acc = Poly::zero(d);
                let mut acc_inv = Poly::zero(d);
                for i in 0..d {
                    let xi = Poly::var(d, i);
                    if m.0[i] > 0 {
                        let mut lower = m.clone();
                        lower.0[i] -= 1;
                        let vl = col_of(&v_blocks[n - 1], &prev, prev.index[&lower]);
                        acc.add_scaled(&(&xi * &vl), &qi(m.0[i] as i64));
                    }
                    let ti = ctx.dunkl_t_axis(i, &mp)?;
                    let mut wi = Poly::zero(d);
                    for (mm, c) in ti.terms() {
                        wi.add_scaled(&col_of(&w_blocks[n - 1], &prev, prev.index[mm]), c);
                    }
                    acc_inv = &acc_inv + &(&xi * &wi);
                }
                for (mm, c) in acc.terms() {
                    rhs[cur.index[mm]][j] = c.clone();
                }
                for (mm, c) in acc_inv.terms() {
                    inv[cur.index[mm]][j] = c * &inv_n;
                }
            }
            v_blocks.push(solve_euler(ctx, &cur, n, &rhs)?);
            w_blocks.push(inv);
            prev = cur;
        }
        let v = GradedLinearMap { dim: d, blocks: v_blocks };
        let w = GradedLinearMap { dim: d, blocks: w_blocks };
        Ok(Intertwiner::from_maps(ctx, v, w))
    }

    /// Reference construction from the stacked system `T_{e_i}(V m) = V(∂_i m)`,
    /// all axes at once, solved by exact elimination. Much slower than
    /// [`Intertwiner::build`]; kept as an independent cross-check.
    pub fn build_stacked(ctx: &DunklContext, n_max: usize) -> Result<Self> {
        let d = ctx.dim();
        let mut blocks: Vec<Vec<Vec<Q>>> = vec![vec![vec![Q::one()]]];
        let mut prev = basis(d, 0);
        for n in 1..=n_max {
            let cur = basis(d, n as u32);
            let dn = cur.monos.len();
            let dp = prev.monos.len();
            let mut rows = vec![vec![Q::zero(); 2 * dn]; d * dp];
            for (j, m) in cur.monos.iter().enumerate() {
                let mp = Poly::monomial(m.clone(), Q::one());
                for i in 0..d {
                    let t = ctx.dunkl_t_axis(i, &mp)?;
                    for (mm, c) in t.terms() {
                        rows[i * dp + prev.index[mm]][j] = c.clone();
                    }
                    if m.0[i] > 0 {
                        let mut lower = m.clone();
                        lower.0[i] -= 1;
                        let l = prev.index[&lower];
                        let e = qi(m.0[i] as i64);
                        for r in 0..dp {
                            let c = &blocks[n - 1][r][l];
                            if !c.is_zero() {
                                rows[i * dp + r][dn + j] = c * &e;
                            }
                        }
                    }
                }
            }
            let x = solve_stacked(rows, dn).ok_or(DunklError::SingularSystem { degree: n })?;
            blocks.push(x);
            prev = cur;
        }
        let v = GradedLinearMap { dim: d, blocks };
        let v_inv = v.inverse()?;
        Ok(Intertwiner::from_maps(ctx, v, v_inv))
    }

    fn from_maps(ctx: &DunklContext, v: GradedLinearMap, v_inv: GradedLinearMap) -> Self {
        let f64_blocks = v
            .blocks
            .iter()
            .map(|b| b.iter().map(|r| r.iter().map(to_f64).collect()).collect())
            .collect();
        Intertwiner {
            ctx: ctx.clone(),
            v,
            v_inv,
            f64_blocks,
            image_cache: Mutex::new(HashMap::new()),
            bases: OnceLock::new(),
        }
    }

    pub fn context(&self) -> &DunklContext {
        &self.ctx
    }

    pub fn max_degree(&self) -> usize {
        self.v.max_degree()
    }

    pub fn map(&self) -> &GradedLinearMap {
        &self.v
    }

    pub fn inverse_map(&self) -> &GradedLinearMap {
        &self.v_inv
    }

    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        self.v.apply(p)
    }

    pub fn apply_inverse(&self, p: &Poly) -> Result<Poly> {
        self.v_inv.apply(p)
    }

    fn image(&self, m: &Monomial) -> Result<Poly> {
        if let Some(p) = self.image_cache.lock().unwrap().get(m) {
            return Ok(p.clone());
        }
        let p = self.v.apply_monomial(m)?;
        self.image_cache.lock().unwrap().insert(m.clone(), p.clone());
        Ok(p)
    }

    fn bases(&self) -> &[Vec<Monomial>] {
        self.bases.get_or_init(|| {
            (0..=self.max_degree())
                .map(|n| monomials_of_degree(self.ctx.dim(), n as u32))
                .collect()
        })
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree() {
            Err(DunklError::DegreeTooHigh {
                requested: n,
                built: self.max_degree(),
            })
        } else {
            Ok(())
        }
    }

    /// Homogeneous piece `V(⟨λ,·⟩ⁿ/n!)` of the kernel, exact in `x`.
    pub fn kernel_poly_degree(&self, lambda: &[Q], n: usize) -> Result<Poly> {
        self.check_degree(n)?;
        let mut fact = Q::one();
        for j in 1..=n {
            fact *= qi(j as i64);
        }
        let lin = Poly::linear(lambda).pow(n as u32);
        self.apply(&lin.scale(&(Q::one() / fact)))
    }

    /// `K_N(λ, x) = Σ_{n≤N} V(⟨λ,·⟩ⁿ/n!)(x)` as a polynomial in `x`.
    pub fn kernel_poly(&self, lambda: &[Q], n_max: usize) -> Result<Poly> {
        let mut out = Poly::zero(self.ctx.dim());
        for n in 0..=n_max {
            out = &out + &self.kernel_poly_degree(lambda, n)?;
        }
        Ok(out)
    }

    /// Truncated series `Σ_{n≤N} V(⟨λ,·⟩ⁿ/n!)(x)` in floating point, with
    /// truncation and roundoff bounds.
    pub fn kernel_series(&self, lambda: &[f64], x: &[f64], n_max: usize) -> Result<KernelSeriesValue> {
        let lc: Vec<Complex64> = lambda.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.kernel_series_complex(&lc, x, n_max)
    }

    /// As [`Intertwiner::kernel_series`] for complex spectral argument `λ`.
    pub fn kernel_series_complex(
        &self,
        lambda: &[Complex64],
        x: &[f64],
        n_max: usize,
    ) -> Result<KernelSeriesValue> {
        self.check_degree(n_max)?;
        let bases = self.bases();
        let mut value = Complex64::zero();
        let mut magnitude = 0.0;
        for n in 0..=n_max {
            let b = &bases[n];
            // a_β = n!/β! λ^β / n!  (multinomial expansion of ⟨λ,y⟩ⁿ/n!)
            let a: Vec<Complex64> = b
                .iter()
                .map(|m| m.eval_complex(lambda) / multi_factorial(m))
                .collect();
            let u: Vec<f64> = b.iter().map(|m| m.eval_f64(x)).collect();
            let blk = &self.f64_blocks[n];
            for (i, ui) in u.iter().enumerate() {
                if *ui == 0.0 {
                    continue;
                }
                for (j, aj) in a.iter().enumerate() {
                    let c = blk[i][j];
                    if c != 0.0 {
                        let t = aj * (c * ui);
                        value += t;
                        magnitude += t.norm();
                    }
                }
            }
        }
        let ln: f64 = lambda.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let xn: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        Ok(KernelSeriesValue {
            value,
            truncation_bound: kernel_tail_bound(ln * xn, n_max),
            roundoff_bound: 8.0 * (n_max as f64 + 2.0) * f64::EPSILON * magnitude.max(1.0),
        })
    }

    /// Generalized translation `τp(x, y) = (V⊗V)(V⁻¹p)(x + y)`, returned as a
    /// polynomial in `2·dim` variables `(x, y)`.
    pub fn translate_poly(&self, p: &Poly) -> Result<Poly> {
        let d = self.ctx.dim();
        let q = self.apply_inverse(p)?;
        // (V⊗V) applied to q(x+y), monomial by monomial
        let mut out = Poly::zero(2 * d);
        for (m, c) in q.terms() {
            for (a, b, binom) in split_monomial(m) {
                let va = self.image(&a)?;
                let vb = self.image(&b)?;
                let coef = c * &binom;
                for (ma, ca) in va.terms() {
                    for (mb, cb) in vb.terms() {
                        let mut e = ma.0.clone();
                        e.extend_from_slice(&mb.0);
                        out.add_term(Monomial(e), &coef * ca * cb);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn multi_factorial(m: &Monomial) -> f64 {
    m.0.iter()
        .map(|&e| (1..=e).map(|v| v as f64).product::<f64>())
        .product()
}

/// Expands `(x+y)^m = Σ C(m,a) x^a y^{m−a}`.
fn split_monomial(m: &Monomial) -> Vec<(Monomial, Monomial, Q)> {
    let mut out = vec![(Vec::new(), Vec::new(), Q::one())];
    for &e in &m.0 {
        let mut next = Vec::new();
        for (a, b, c) in &out {
            let mut binom = Q::one();
            for j in 0..=e {
                let mut a2: Vec<u32> = a.clone();
                a2.push(j);
                let mut b2: Vec<u32> = b.clone();
                b2.push(e - j);
                next.push((a2, b2, c * &binom));
                binom = binom * qi((e - j) as i64) / qi(j as i64 + 1);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|(a, b, c)| (Monomial(a), Monomial(b), c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::root_system::{Multiplicity, RootSystem, RootSystemName};

    fn tw(name: RootSystemName, k: Q, n: usize) -> Intertwiner {
        let rs = RootSystem::new(name).unwrap();
        let k = Multiplicity::uniform(&rs, k).unwrap();
        Intertwiner::build(&DunklContext::new(&rs, &k), n).unwrap()
    }

    #[test]
    fn rank1_coefficients() {
        let k = q(1, 2);
        let v = tw(RootSystemName::Rank1, k.clone(), 6);
        let x = Poly::var(1, 0);
        let one_2k = Q::one() + qi(2) * &k;
        assert_eq!(v.apply(&x).unwrap(), x.scale(&(Q::one() / &one_2k)));
        assert_eq!(v.apply(&x.pow(2)).unwrap(), x.pow(2).scale(&(Q::one() / &one_2k)));
        // c_n (n + k(1 − (−1)ⁿ)) = n c_{n−1}
        let mut c = Q::one();
        for n in 1..=6u32 {
            let odd = if n % 2 == 1 { qi(2) } else { qi(0) };
            c = &c * qi(n as i64) / (qi(n as i64) + &k * odd);
            assert_eq!(v.apply(&x.pow(n)).unwrap(), x.pow(n).scale(&c));
        }
    }

    #[test]
    fn stacked_agrees() {
        for name in [RootSystemName::Rank1, RootSystemName::A(1), RootSystemName::A(2)] {
            let rs = RootSystem::new(name).unwrap();
            let k = Multiplicity::uniform(&rs, q(2, 3)).unwrap();
            let ctx = DunklContext::new(&rs, &k);
            let a = Intertwiner::build(&ctx, 5).unwrap();
            let b = Intertwiner::build_stacked(&ctx, 5).unwrap();
            assert_eq!(a.map(), b.map());
            assert_eq!(a.inverse_map(), b.inverse_map());
        }
    }

    #[test]
    fn inverse_roundtrip_a2() {
        let v = tw(RootSystemName::A(2), qi(1), 4);
        let p = &Poly::var(3, 0).pow(3) + &(&Poly::var(3, 1) * &Poly::var(3, 2));
        assert_eq!(v.apply(&v.apply_inverse(&p).unwrap()).unwrap(), p);
        let id = v.map().compose(v.inverse_map());
        assert_eq!(id, GradedLinearMap::identity(3, 4));
    }

    #[test]
    fn translate_rank1_square() {
        let k = qi(1);
        let v = tw(RootSystemName::Rank1, k, 4);
        let t = v.translate_poly(&Poly::var(1, 0).pow(2)).unwrap();
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let expect = &(&x.pow(2) + &y.pow(2)) + &(&x * &y).scale(&q(2, 3));
        assert_eq!(t, expect);
    }

    #[test]
    fn degree_cap() {
        let v = tw(RootSystemName::Rank1, qi(1), 3);
        assert!(matches!(
            v.kernel_series(&[1.0], &[1.0], 4),
            Err(DunklError::DegreeTooHigh { requested: 4, built: 3 })
        ));
    }

    #[test]
    fn json_roundtrip() {
        let v = tw(RootSystemName::A(1), q(1, 2), 3);
        let j = v.map().to_json();
        assert_eq!(&GradedLinearMap::from_json(&j).unwrap(), v.map());
    }

    #[test]
    fn tail_bound_exp() {
        let s: f64 = (0..=5).map(|n| 2f64.powi(n) / (1..=n).map(|v| v as f64).product::<f64>()).sum();
        assert!((kernel_tail_bound(2.0, 5) - (2f64.exp() - s)).abs() < 1e-14);
    }
}
