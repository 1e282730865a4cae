//! Root systems, reflection groups, multiplicities and the weight `ω`.

use std::collections::{HashSet, VecDeque};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{DunklError, Result};
use crate::rational::{format_q, parse_q, qi, to_f64, Q};

/// Default cap on the Weyl group closure (the order of `A_6`... is 5040; 10080
/// leaves room for small products).
pub const DEFAULT_GROUP_CAP: usize = 10_080;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootSystemName {
    /// `A_n = {±(e_i − e_j)}` in `ℝ^{n+1}`.
    A(usize),
    /// `{±1} ⊂ ℝ`.
    Rank1,
    /// No roots in `ℝ^n` (a free block).
    Empty(usize),
    /// Orthogonal direct sum; blocks occupy consecutive coordinates.
    DirectSum(Vec<RootSystemName>),
}

impl RootSystemName {
    pub fn label(&self) -> String {
        match self {
            RootSystemName::A(n) => format!("A({n})"),
            RootSystemName::Rank1 => "rank1".into(),
            RootSystemName::Empty(n) => format!("empty({n})"),
            RootSystemName::DirectSum(parts) => format!(
                "direct_sum({})",
                parts.iter().map(|p| p.label()).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

/// A square orthogonal matrix with rational entries, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    rows: Vec<Vec<Q>>,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement {
            rows: (0..n)
                .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
                .collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        GroupElement { rows }
    }

    /// Reflection `s_α x = x − 2⟨x,α⟩/⟨α,α⟩ α`.
    pub fn reflection(alpha: &[Q]) -> Self {
        let n = alpha.len();
        let aa = dot(alpha, alpha);
        let mut rows = GroupElement::identity(n).rows;
        for i in 0..n {
            for j in 0..n {
                rows[i][j] -= qi(2) * &alpha[i] * &alpha[j] / &aa;
            }
        }
        GroupElement { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        let n = self.dim();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut s = Q::zero();
                        for l in 0..n {
                            s += &self.rows[i][l] * &other.rows[l][j];
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        GroupElement { rows }
    }

    pub fn transpose(&self) -> GroupElement {
        let n = self.dim();
        GroupElement {
            rows: (0..n)
                .map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect())
                .collect(),
        }
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        self.rows.iter().map(|r| dot(r, x)).collect()
    }

    pub fn apply_f64(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| to_f64(a) * b).sum())
            .collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(to_f64).collect())
            .collect()
    }

    pub fn is_orthogonal(&self) -> bool {
        self.transpose().mul(self) == GroupElement::identity(self.dim())
    }

    /// Smallest `m ≥ 1` with `g^m = I`, searched up to `cap`.
    pub fn order(&self, cap: usize) -> Option<usize> {
        let id = GroupElement::identity(self.dim());
        let mut p = self.clone();
        for m in 1..=cap {
            if p == id {
                return Some(m);
            }
            p = p.mul(self);
        }
        None
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    let mut s = Q::zero();
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    name: RootSystemName,
    ambient_dim: usize,
    roots: Vec<Vec<Q>>,
    positive: Vec<usize>,
    orbit_of_root: Vec<usize>,
    num_orbits: usize,
}

fn is_positive(v: &[Q]) -> bool {
    v.iter()
        .find(|c| !c.is_zero())
        .map(|c| c.is_positive())
        .unwrap_or(false)
}

impl RootSystem {
    pub fn new(name: RootSystemName) -> Result<Self> {
        let (dim, roots) = build_roots(&name)?;
        RootSystem::from_roots(name, dim, roots)
    }

    /// Builds and validates a root system from an explicit root list.
    pub fn from_roots(name: RootSystemName, dim: usize, roots: Vec<Vec<Q>>) -> Result<Self> {
        if dim == 0 {
            return Err(DunklError::InvalidRootSystem("ambient dimension 0".into()));
        }
        for r in &roots {
            if r.len() != dim {
                return Err(DunklError::InvalidRootSystem("root of wrong length".into()));
            }
            if r.iter().all(|c| c.is_zero()) {
                return Err(DunklError::InvalidRootSystem("zero root".into()));
            }
        }
        let set: HashSet<Vec<Q>> = roots.iter().cloned().collect();
        if set.len() != roots.len() {
            return Err(DunklError::InvalidRootSystem("duplicate roots".into()));
        }
        // reduced: only ±α on each line
        for (i, a) in roots.iter().enumerate() {
            for b in roots.iter().skip(i + 1) {
                if let Some(t) = proportionality(a, b) {
                    if t != qi(-1) {
                        return Err(DunklError::InvalidRootSystem(
                            "not reduced: proportional roots other than ±α".into(),
                        ));
                    }
                }
            }
            let neg: Vec<Q> = a.iter().map(|c| -c.clone()).collect();
            if !set.contains(&neg) {
                return Err(DunklError::InvalidRootSystem("−α missing".into()));
            }
        }
        // closed under own reflections
        for a in &roots {
            let s = GroupElement::reflection(a);
            for b in &roots {
                if !set.contains(&s.apply(b)) {
                    return Err(DunklError::InvalidRootSystem(
                        "not closed under reflections".into(),
                    ));
                }
            }
        }
        let positive: Vec<usize> = (0..roots.len()).filter(|&i| is_positive(&roots[i])).collect();

        // orbits under W via union-find over reflections
        let mut parent: Vec<usize> = (0..roots.len()).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            p[i] = r;
            r
        }
        for a in &roots {
            let s = GroupElement::reflection(a);
            for (j, b) in roots.iter().enumerate() {
                let img = s.apply(b);
                let l = roots.iter().position(|r| *r == img).expect("closed");
                let (rj, rl) = (find(&mut parent, j), find(&mut parent, l));
                if rj != rl {
                    parent[rj.max(rl)] = rj.min(rl);
                }
            }
        }
        let mut orbit_id = vec![usize::MAX; roots.len()];
        let mut next = 0;
        let mut rep_to_id = std::collections::HashMap::new();
        for i in 0..roots.len() {
            let r = find(&mut parent, i);
            let id = *rep_to_id.entry(r).or_insert_with(|| {
                next += 1;
                next - 1
            });
            orbit_id[i] = id;
        }
        Ok(RootSystem {
            name,
            ambient_dim: dim,
            roots,
            positive,
            orbit_of_root: orbit_id,
            num_orbits: next,
        })
    }

    pub fn name(&self) -> &RootSystemName {
        &self.name
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn roots(&self) -> &[Vec<Q>] {
        &self.roots
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = (usize, &Vec<Q>)> {
        self.positive.iter().map(move |&i| (i, &self.roots[i]))
    }

    pub fn orbit_of_root(&self, i: usize) -> usize {
        self.orbit_of_root[i]
    }

    pub fn num_orbits(&self) -> usize {
        self.num_orbits
    }

    pub fn reflections(&self) -> Vec<GroupElement> {
        self.positive_roots()
            .map(|(_, a)| GroupElement::reflection(a))
            .collect()
    }

    /// Breadth-first closure of the reflections with exact deduplication.
    pub fn weyl_elements_capped(&self, cap: usize) -> Result<Vec<GroupElement>> {
        let gens = self.reflections();
        let id = GroupElement::identity(self.ambient_dim);
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let mut out = vec![id.clone()];
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in &gens {
                let h = s.mul(&g);
                if seen.insert(h.clone()) {
                    if out.len() >= cap {
                        return Err(DunklError::GroupTooLarge { cap });
                    }
                    out.push(h.clone());
                    queue.push_back(h);
                }
            }
        }
        Ok(out)
    }

    pub fn weyl_elements(&self) -> Result<Vec<GroupElement>> {
        self.weyl_elements_capped(DEFAULT_GROUP_CAP)
    }

    /// `2⟨α,β⟩/⟨α,α⟩ ∈ ℤ` for all pairs, checked exactly.
    pub fn is_integral(&self) -> bool {
        self.roots.iter().all(|a| {
            let aa = dot(a, a);
            self.roots
                .iter()
                .all(|b| (qi(2) * dot(a, b) / &aa).is_integer())
        })
    }

    /// Ambient dimension minus the rank of the root span.
    pub fn rank(&self) -> usize {
        rank_exact(&self.roots)
    }
}

fn proportionality(a: &[Q], b: &[Q]) -> Option<Q> {
    let i = a.iter().position(|c| !c.is_zero())?;
    let t = &b[i] / &a[i];
    if a.iter().zip(b).all(|(x, y)| &(x * &t) == y) {
        Some(t)
    } else {
        None
    }
}

pub fn rank_exact(vectors: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = vectors.to_vec();
    let mut rank = 0;
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let piv = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &piv;
                for cc in 0..cols {
                    let v = &m[rank][cc] * &f;
                    m[r][cc] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn build_roots(name: &RootSystemName) -> Result<(usize, Vec<Vec<Q>>)> {
    match name {
        RootSystemName::A(n) => {
            if *n == 0 {
                return Err(DunklError::InvalidRootSystem("A(0) has n = 0".into()));
            }
            let dim = n + 1;
            let mut roots = Vec::new();
            for i in 0..dim {
                for j in 0..dim {
                    if i != j {
                        let mut v = vec![Q::zero(); dim];
                        v[i] = Q::one();
                        v[j] = -Q::one();
                        roots.push(v);
                    }
                }
            }
            Ok((dim, roots))
        }
        RootSystemName::Rank1 => Ok((1, vec![vec![Q::one()], vec![-Q::one()]])),
        RootSystemName::Empty(n) => {
            if *n == 0 {
                return Err(DunklError::InvalidRootSystem("empty(0)".into()));
            }
            Ok((*n, vec![]))
        }
        RootSystemName::DirectSum(parts) => {
            if parts.is_empty() {
                return Err(DunklError::InvalidRootSystem("empty direct sum".into()));
            }
            let blocks = parts.iter().map(build_roots).collect::<Result<Vec<_>>>()?;
            let dim: usize = blocks.iter().map(|b| b.0).sum();
            let mut roots = Vec::new();
            let mut off = 0;
            for (d, rs) in blocks {
                for r in rs {
                    let mut v = vec![Q::zero(); dim];
                    v[off..off + d].clone_from_slice(&r);
                    roots.push(v);
                }
                off += d;
            }
            Ok((dim, roots))
        }
    }
}

/// W-invariant multiplicity, stored once per root orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct Multiplicity {
    values: Vec<Q>,
}

impl Multiplicity {
    pub fn new(rs: &RootSystem, values: Vec<Q>) -> Result<Self> {
        if values.len() != rs.num_orbits() {
            return Err(DunklError::InvalidMultiplicity(format!(
                "{} values for {} root orbits",
                values.len(),
                rs.num_orbits()
            )));
        }
        if values.iter().any(|v| v.is_negative()) {
            return Err(DunklError::InvalidMultiplicity("negative value".into()));
        }
        Ok(Multiplicity { values })
    }

    pub fn uniform(rs: &RootSystem, k: Q) -> Result<Self> {
        Multiplicity::new(rs, vec![k; rs.num_orbits()])
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn of_root(&self, rs: &RootSystem, i: usize) -> &Q {
        &self.values[rs.orbit_of_root(i)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// `Σ_{α∈R} k_α`, the homogeneity degree of `ω`.
    pub fn total(&self, rs: &RootSystem) -> Q {
        (0..rs.roots().len()).map(|i| self.of_root(rs, i).clone()).sum()
    }
}

/// `ω(x) = ∏_{α∈R} |⟨α,x⟩|^{k_α}`.
pub fn weight_omega(rs: &RootSystem, k: &Multiplicity, x: &[f64]) -> f64 {
    let mut w = 1.0;
    for (i, a) in rs.roots().iter().enumerate() {
        let ka = to_f64(k.of_root(rs, i));
        if ka == 0.0 {
            continue;
        }
        let s: f64 = a.iter().zip(x).map(|(ai, xi)| to_f64(ai) * xi).sum();
        w *= s.abs().powf(ka);
    }
    w
}

/// Exact `ω(x)` for integer-valued multiplicities; `None` otherwise.
pub fn weight_omega_exact(rs: &RootSystem, k: &Multiplicity, x: &[Q]) -> Option<Q> {
    let mut w = Q::one();
    for (i, a) in rs.roots().iter().enumerate() {
        let ka = k.of_root(rs, i);
        if !ka.is_integer() {
            return None;
        }
        let e = ka.to_integer().to_u32()?;
        let s = dot(a, x).abs();
        for _ in 0..e {
            w *= &s;
        }
    }
    Some(w)
}

/// JSON document `{name, n, k_by_orbit}` describing a root system with its
/// multiplicity. `direct_sum` carries its blocks in `parts`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RootSystemDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<RootSystemDoc>,
    #[serde(default)]
    pub k_by_orbit: Vec<String>,
}

impl RootSystemDoc {
    pub fn to_name(&self) -> Result<RootSystemName> {
        match self.name.as_str() {
            "A" => Ok(RootSystemName::A(self.n.ok_or_else(|| {
                DunklError::Config("root system A requires n".into())
            })?)),
            "rank1" => Ok(RootSystemName::Rank1),
            "empty" => Ok(RootSystemName::Empty(self.n.ok_or_else(|| {
                DunklError::Config("root system empty requires n".into())
            })?)),
            "direct_sum" => Ok(RootSystemName::DirectSum(
                self.parts.iter().map(|p| p.to_name()).collect::<Result<_>>()?,
            )),
            other => Err(DunklError::Config(format!("unknown root system {other:?}"))),
        }
    }

    pub fn from_name(name: &RootSystemName, k: &[Q]) -> Self {
        let (n, parts, nm) = match name {
            RootSystemName::A(n) => (Some(*n), vec![], "A"),
            RootSystemName::Rank1 => (None, vec![], "rank1"),
            RootSystemName::Empty(n) => (Some(*n), vec![], "empty"),
            RootSystemName::DirectSum(ps) => (
                None,
                ps.iter().map(|p| RootSystemDoc::from_name(p, &[])).collect(),
                "direct_sum",
            ),
        };
        RootSystemDoc {
            name: nm.into(),
            n,
            parts,
            k_by_orbit: k.iter().map(format_q).collect(),
        }
    }

    /// Builds the root system and multiplicity. An empty `k_by_orbit` means
    /// `k = 0`; a single value is broadcast to every orbit.
    pub fn build(&self) -> Result<(RootSystem, Multiplicity)> {
        let rs = RootSystem::new(self.to_name()?)?;
        let ks = self
            .k_by_orbit
            .iter()
            .map(|s| parse_q(s))
            .collect::<Result<Vec<_>>>()?;
        let k = match ks.len() {
            0 => Multiplicity::uniform(&rs, Q::zero())?,
            1 => Multiplicity::uniform(&rs, ks[0].clone())?,
            _ => Multiplicity::new(&rs, ks)?,
        };
        Ok((rs, k))
    }
}

/// Floating-point group data for the support predicates.
#[derive(Clone, Debug)]
pub struct SupportGeometry {
    dim: usize,
    elements: Vec<Vec<Vec<f64>>>,
    integral: bool,
}

impl SupportGeometry {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        Ok(SupportGeometry {
            dim: rs.ambient_dim(),
            elements: rs.weyl_elements()?.iter().map(|g| g.to_f64()).collect(),
            integral: rs.is_integral(),
        })
    }

    pub fn group_order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn act(&self, w: usize, x: &[f64]) -> Vec<f64> {
        matvec(&self.elements[w], x)
    }

    /// `(x, y) ∈ D_r^W`, i.e. `|x + w y| ≤ r` for some `w ∈ W`.
    pub fn in_band(&self, x: &[f64], y: &[f64], r: f64) -> bool {
        self.elements.iter().any(|w| {
            let wy = matvec(w, y);
            norm(&x.iter().zip(&wy).map(|(a, b)| a + b).collect::<Vec<_>>()) <= r
        })
    }

    /// Distinct points of `W.x` (deduplicated to 1e-12).
    pub fn orbit(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for w in &self.elements {
            let p = matvec(w, x);
            if !out.iter().any(|q| dist(q, &p) < 1e-12) {
                out.push(p);
            }
        }
        out
    }

    /// `W.B_r(c)` membership: `∃w, |y − w c| ≤ r`.
    pub fn in_orbit_of_ball(&self, y: &[f64], center: &[f64], r: f64) -> bool {
        self.elements.iter().any(|w| dist(&matvec(w, center), y) <= r)
    }

    /// `co(W.x)`. Every orbit point lies on the sphere of radius `|x|`, so the
    /// orbit points are exactly the vertices.
    pub fn orbit_hull(&self, x: &[f64]) -> ConvexHull {
        ConvexHull::new(self.dim, self.orbit(x))
    }

    /// `co(W.A)` for a finite point set `A`.
    pub fn orbit_hull_of_set(&self, pts: &[Vec<f64>]) -> ConvexHull {
        let all: Vec<Vec<f64>> = pts.iter().flat_map(|p| self.orbit(p)).collect();
        ConvexHull::new(self.dim, all)
    }

    /// Minkowski sum of two hulls.
    pub fn hull_sum(&self, a: &ConvexHull, b: &ConvexHull) -> ConvexHull {
        a.minkowski_sum(b)
    }
}

fn matvec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Convex hull of a finite point set, stored by its vertices.
#[derive(Clone, Debug)]
pub struct ConvexHull {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    directions: Vec<Vec<f64>>,
}

impl ConvexHull {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Self {
        let directions = direction_set(dim);
        let vertices = extreme_points(dim, &points, &directions);
        ConvexHull {
            dim,
            vertices,
            directions,
        }
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.iter().zip(u).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Membership in the hull inflated by `delta`. In dimension one this is
    /// exact; in dimension two it tests every edge normal plus 720 sampled
    /// directions, in higher dimensions a Fibonacci set of directions. The
    /// tested region therefore contains the exact inflated hull.
    pub fn contains(&self, y: &[f64], delta: f64) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        if self.dim == 1 {
            let lo = self.vertices.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
            let hi = self.vertices.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
            return y[0] >= lo - delta && y[0] <= hi + delta;
        }
        let mut dirs: Vec<Vec<f64>> = self.directions.clone();
        if self.dim == 2 && self.vertices.len() > 1 {
            let n = self.vertices.len();
            for i in 0..n {
                let a = &self.vertices[i];
                let b = &self.vertices[(i + 1) % n];
                let e = [b[0] - a[0], b[1] - a[1]];
                let l = (e[0] * e[0] + e[1] * e[1]).sqrt();
                if l > 0.0 {
                    dirs.push(vec![e[1] / l, -e[0] / l]);
                    dirs.push(vec![-e[1] / l, e[0] / l]);
                }
            }
        }
        dirs.iter().all(|u| {
            let uy: f64 = u.iter().zip(y).map(|(a, b)| a * b).sum();
            uy <= self.support(u) + delta + 1e-12
        })
    }

    pub fn minkowski_sum(&self, other: &ConvexHull) -> ConvexHull {
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        ConvexHull::new(self.dim, pts)
    }
}

fn direction_set(dim: usize) -> Vec<Vec<f64>> {
    match dim {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..720)
            .map(|i| {
                let t = i as f64 * std::f64::consts::PI / 360.0;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            let n = 4000;
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * i as f64;
                    vec![r * t.cos(), r * t.sin(), z]
                })
                .collect()
        }
        d => {
            // coordinate and diagonal directions only
            let mut out = Vec::new();
            for i in 0..d {
                let mut e = vec![0.0; d];
                e[i] = 1.0;
                out.push(e.clone());
                e[i] = -1.0;
                out.push(e);
            }
            out
        }
    }
}

fn extreme_points(dim: usize, pts: &[Vec<f64>], dirs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut uniq: Vec<Vec<f64>> = Vec::new();
    for p in pts {
        if !uniq.iter().any(|q| dist(q, p) < 1e-12) {
            uniq.push(p.clone());
        }
    }
    match dim {
        1 => {
            if uniq.is_empty() {
                return uniq;
            }
            let lo = uniq.iter().cloned().fold(uniq[0].clone(), |a, b| if b[0] < a[0] { b } else { a });
            let hi = uniq.iter().cloned().fold(uniq[0].clone(), |a, b| if b[0] > a[0] { b } else { a });
            if dist(&lo, &hi) < 1e-12 {
                vec![lo]
            } else {
                vec![lo, hi]
            }
        }
        2 => monotone_chain(uniq),
        _ => uniq
            .iter()
            .filter(|p| {
                dirs.iter().any(|u| {
                    let pu: f64 = p.iter().zip(u).map(|(a, b)| a * b).sum();
                    uniq.iter().all(|q| {
                        std::ptr::eq(*p, q)
                            || q.iter().zip(u).map(|(a, b)| a * b).sum::<f64>() < pu - 1e-12
                    })
                })
            })
            .cloned()
            .collect(),
    }
}

/// Andrew's monotone chain; returns the hull in counter-clockwise order.
fn monotone_chain(mut pts: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    if pts.len() < 3 {
        return pts;
    }
    pts.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap().then(a[1].partial_cmp(&b[1]).unwrap()));
    let cross = |o: &[f64], a: &[f64], b: &[f64]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<Vec<f64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 1e-14 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 1e-14 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn a2_roots() {
        let rs = RootSystem::new(RootSystemName::A(2)).unwrap();
        assert_eq!(rs.ambient_dim(), 3);
        assert_eq!(rs.roots().len(), 6);
        assert_eq!(rs.positive_roots().count(), 3);
        assert_eq!(rs.num_orbits(), 1);
        assert!(rs.is_integral());
        assert_eq!(rs.rank(), 2);
    }

    #[test]
    fn invalid_names() {
        assert!(RootSystem::new(RootSystemName::A(0)).is_err());
        assert!(RootSystem::new(RootSystemName::DirectSum(vec![])).is_err());
        assert!(RootSystem::new(RootSystemName::Empty(0)).is_err());
    }

    #[test]
    fn non_reduced_rejected() {
        let roots = vec![vec![qi(1)], vec![qi(-1)], vec![qi(2)], vec![qi(-2)]];
        assert!(RootSystem::from_roots(RootSystemName::Rank1, 1, roots).is_err());
        let not_closed = vec![vec![qi(1), qi(0)], vec![qi(-1), qi(0)], vec![qi(1), qi(1)], vec![qi(-1), qi(-1)]];
        assert!(RootSystem::from_roots(RootSystemName::Rank1, 2, not_closed).is_err());
    }

    #[test]
    fn weyl_orders() {
        let rank1 = RootSystem::new(RootSystemName::Rank1).unwrap();
        let w = rank1.weyl_elements().unwrap();
        assert_eq!(w.len(), 2);
        assert!(w.contains(&GroupElement::from_rows(vec![vec![qi(-1)]])));
        let a2 = RootSystem::new(RootSystemName::A(2)).unwrap();
        let w = a2.weyl_elements().unwrap();
        assert_eq!(w.len(), 6);
        assert!(w.iter().all(|g| g.is_orthogonal() && g.order(10).is_some()));
        assert!(matches!(
            a2.weyl_elements_capped(4),
            Err(DunklError::GroupTooLarge { cap: 4 })
        ));
    }

    #[test]
    fn direct_sum_with_free_block() {
        let rs = RootSystem::new(RootSystemName::DirectSum(vec![
            RootSystemName::Rank1,
            RootSystemName::Empty(1),
        ]))
        .unwrap();
        assert_eq!(rs.ambient_dim(), 2);
        assert_eq!(rs.roots(), &[vec![qi(1), qi(0)], vec![qi(-1), qi(0)]]);
        assert_eq!(rs.rank(), 1);
    }

    #[test]
    fn omega_examples() {
        let rs = RootSystem::new(RootSystemName::Rank1).unwrap();
        let k = Multiplicity::uniform(&rs, qi(1)).unwrap();
        assert_eq!(weight_omega(&rs, &k, &[2.0]), 4.0);
        let k0 = Multiplicity::uniform(&rs, qi(0)).unwrap();
        assert_eq!(weight_omega(&rs, &k0, &[0.0]), 1.0);
        let a2 = RootSystem::new(RootSystemName::A(2)).unwrap();
        let kh = Multiplicity::uniform(&a2, q(1, 2)).unwrap();
        assert!((weight_omega(&a2, &kh, &[1.0, 0.0, -1.0]) - 2.0).abs() < 1e-14);
        assert!(Multiplicity::uniform(&a2, q(-1, 2)).is_err());
    }

    #[test]
    fn band_and_hull() {
        let rs = RootSystem::new(RootSystemName::Rank1).unwrap();
        let g = SupportGeometry::new(&rs).unwrap();
        assert!(g.in_band(&[3.0], &[-3.0], 1.0));
        assert!(g.in_band(&[3.0], &[3.0], 1.0));
        assert!(!g.in_band(&[3.0], &[1.0], 1.0));
        let h = g.orbit_hull(&[2.0]);
        let mut v: Vec<f64> = h.vertices().iter().map(|p| p[0]).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(v, vec![-2.0, 2.0]);
        assert!(h.contains(&[1.5], 0.0));
        assert!(!h.contains(&[2.5], 0.1));
    }

    #[test]
    fn doc_roundtrip() {
        let doc = RootSystemDoc::from_name(&RootSystemName::A(2), &[q(1, 2)]);
        let s = serde_json::to_string(&doc).unwrap();
        assert!(s.contains("\"1/2\""));
        let back: RootSystemDoc = serde_json::from_str(&s).unwrap();
        let (rs, k) = back.build().unwrap();
        assert_eq!(rs.roots().len(), 6);
        assert_eq!(k.values(), &[q(1, 2)]);
    }
}
