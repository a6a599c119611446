//! Finite crystallographic reflection groups in the simple-root basis.
//!
//! Every group element is an integer matrix acting on root coordinates, so all
//! arithmetic here is exact without leaving the integers. The invariant form
//! is an integer Gram matrix of the simple roots, scaled so that the Cartan
//! integers `2 (a, b) / (b, b)` come out integral.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, int_rank, Q};

/// Index into the reflection table of a [`CoxeterGroup`].
pub type ReflId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    A,
    B,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// Family, rank and the order in which simple reflections multiply to `c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub family: Family,
    pub rank: usize,
    /// 1-based simple indices; `c = s_{w[0]} s_{w[1]} ...`.
    pub coxeter_word: Vec<usize>,
}

impl GroupSpec {
    pub fn new(family: Family, rank: usize, coxeter_word: Vec<usize>) -> Result<Self> {
        let ok = match family {
            Family::A => (1..=7).contains(&rank),
            Family::B => (2..=6).contains(&rank),
            Family::D => (4..=6).contains(&rank),
            Family::E => rank == 6,
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(Error::Config(format!(
                "unsupported group {}{}",
                family.letter(),
                rank
            )));
        }
        let mut sorted = coxeter_word.clone();
        sorted.sort_unstable();
        if sorted != (1..=rank).collect::<Vec<_>>() {
            return Err(Error::Config(format!(
                "Coxeter word {coxeter_word:?} is not a permutation of 1..{rank}"
            )));
        }
        Ok(Self {
            family,
            rank,
            coxeter_word,
        })
    }

    /// `c = s_1 s_2 ... s_n`.
    pub fn standard(family: Family, rank: usize) -> Result<Self> {
        Self::new(family, rank, (1..=rank).collect())
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses `"A3:1,2,3"`; the word may be omitted (`"B3"`) for `c = s_1 ... s_n`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, word) = match s.split_once(':') {
            Some((h, w)) => (h, Some(w)),
            None => (s, None),
        };
        let mut chars = head.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::Config(format!("unknown family in {s:?}"))),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Config(format!("bad rank in {s:?}")))?;
        let word = match word {
            None => (1..=rank).collect(),
            Some(w) => w
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Config(format!("bad Coxeter word in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        GroupSpec::new(family, rank, word)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word: Vec<String> = self.coxeter_word.iter().map(|i| i.to_string()).collect();
        write!(f, "{}{}:{}", self.family.letter(), self.rank, word.join(","))
    }
}

/// A group element as the integer matrix of its action on simple-root coordinates.
///
/// Stored column-major; column `j` is the image of the `j`-th simple root, and
/// the column tuple doubles as the canonical key.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    dim: usize,
    cols: Vec<i64>,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<&[i64]> = self.cols.chunks(self.dim).collect();
        write!(f, "GroupElement{cols:?}")
    }
}

impl GroupElement {
    pub fn identity(dim: usize) -> Self {
        let mut cols = vec![0; dim * dim];
        for i in 0..dim {
            cols[i * dim + i] = 1;
        }
        Self { dim, cols }
    }

    pub fn from_columns(columns: &[Vec<i64>]) -> Self {
        let dim = columns.len();
        let cols = columns.iter().flat_map(|c| c.iter().copied()).collect();
        Self { dim, cols }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn key(&self) -> &[i64] {
        &self.cols
    }

    /// Entry in row `r`, column `c`.
    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.cols[c * self.dim + r]
    }

    pub fn column(&self, c: usize) -> &[i64] {
        &self.cols[c * self.dim..(c + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.entry(r, c)).collect())
            .collect()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.dim];
        for (c, &x) in v.iter().enumerate() {
            if x != 0 {
                for (r, o) in out.iter_mut().enumerate() {
                    *o += self.entry(r, c) * x;
                }
            }
        }
        out
    }

    /// Composition `self ∘ other`.
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        let cols = other
            .cols
            .chunks(self.dim)
            .flat_map(|c| self.apply(c))
            .collect();
        GroupElement {
            dim: self.dim,
            cols,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == GroupElement::identity(self.dim)
    }

    fn minus_identity_rows(&self) -> Vec<Vec<i64>> {
        let mut rows = self.rows();
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] -= 1;
        }
        rows
    }

    /// Matrix `self - other` as rows.
    fn difference_rows(&self, other: &GroupElement) -> Vec<Vec<i64>> {
        (0..self.dim)
            .map(|r| {
                (0..self.dim)
                    .map(|c| self.entry(r, c) - other.entry(r, c))
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Reflection {
    pub id: ReflId,
    /// Positive root in simple-root coordinates.
    pub root: Vec<i64>,
    pub element: GroupElement,
}

/// Smallest parabolic subgroup containing an element.
#[derive(Clone, Debug)]
pub struct ParabolicData {
    pub generator: GroupElement,
    /// Reflections `t` whose hyperplane contains `Fix(w)`, sorted by id.
    pub reflections: Vec<ReflId>,
    /// Simple system induced by the positive half-space, sorted by id.
    pub simples: Vec<ReflId>,
    pub fixed_space: Vec<Vec<Q>>,
}

/// JSON row of the reflection table.
#[derive(Clone, Debug, Serialize)]
pub struct ReflectionRecord {
    pub id: ReflId,
    pub name: String,
    pub root: Vec<i64>,
    pub matrix: Vec<Vec<i64>>,
}

/// A group together with its reflection table and Coxeter element.
#[derive(Clone, Debug)]
pub struct CoxeterGroup {
    pub spec: GroupSpec,
    gram: Vec<Vec<i64>>,
    gram_adj: Vec<Vec<i64>>,
    gram_det: i64,
    simple: Vec<GroupElement>,
    reflections: Vec<Reflection>,
    by_root: HashMap<Vec<i64>, ReflId>,
    by_element: HashMap<GroupElement, ReflId>,
    simple_ids: Vec<ReflId>,
    coxeter: GroupElement,
}

fn gram_matrix(family: Family, n: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; n]; n];
    let chain = |g: &mut Vec<Vec<i64>>, k: usize| {
        for i in 0..k {
            g[i][i] = 2;
            if i + 1 < k {
                g[i][i + 1] = -1;
                g[i + 1][i] = -1;
            }
        }
    };
    match family {
        Family::A => chain(&mut g, n),
        Family::B => {
            chain(&mut g, n);
            g[n - 1][n - 1] = 1;
        }
        Family::D => {
            chain(&mut g, n - 1);
            g[n - 1][n - 1] = 2;
            g[n - 3][n - 1] = -1;
            g[n - 1][n - 3] = -1;
        }
        Family::G => g = vec![vec![2, -3], vec![-3, 6]],
        Family::F => {
            g = vec![
                vec![4, -2, 0, 0],
                vec![-2, 4, -2, 0],
                vec![0, -2, 2, -1],
                vec![0, 0, -1, 2],
            ]
        }
        Family::E => {
            // Bourbaki labels: 1-3-4-5-6 with 2 attached to 4
            for i in 0..6 {
                g[i][i] = 2;
            }
            for (a, b) in [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)] {
                g[a][b] = -1;
                g[b][a] = -1;
            }
        }
    }
    g
}

/// `true` when the first nonzero coordinate is positive.
pub fn is_positive(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

fn normalize_root(v: Vec<i64>) -> Vec<i64> {
    if is_positive(&v) {
        v
    } else {
        v.into_iter().map(|x| -x).collect()
    }
}

fn int_det_adj(m: &[Vec<i64>]) -> (i64, Vec<Vec<i64>>) {
    let n = m.len();
    let qm: Vec<Vec<Q>> = m
        .iter()
        .map(|r| r.iter().map(|&x| linalg::q(x)).collect())
        .collect();
    let d = linalg::det(&qm);
    let det = linalg::q_to_i64(&d).expect("integer determinant");
    let mut adj = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<Q>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| qm[r][c].clone()).collect())
                .collect();
            let md = if n == 1 { linalg::q(1) } else { linalg::det(&minor) };
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[i][j] = sign * linalg::q_to_i64(&md).unwrap();
        }
    }
    (det, adj)
}

impl CoxeterGroup {
    /// Builds the reflection table and Coxeter element for `spec`.
    pub fn build(spec: GroupSpec) -> Result<Self> {
        let spec = GroupSpec::new(spec.family, spec.rank, spec.coxeter_word)?;
        let n = spec.rank;
        let gram = gram_matrix(spec.family, n);
        let (gram_det, gram_adj) = int_det_adj(&gram);
        let mut group = CoxeterGroup {
            spec,
            gram,
            gram_adj,
            gram_det,
            simple: Vec::new(),
            reflections: Vec::new(),
            by_root: HashMap::new(),
            by_element: HashMap::new(),
            simple_ids: Vec::new(),
            coxeter: GroupElement::identity(n),
        };
        let unit = |i: usize| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        };
        group.simple = (0..n).map(|i| group.reflection_matrix(&unit(i))).collect();

        // orbit of the simple roots under simple reflections
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue: VecDeque<Vec<i64>> = (0..n).map(unit).collect();
        while let Some(r) = queue.pop_front() {
            if !seen.insert(r.clone()) {
                continue;
            }
            for s in &group.simple {
                let img = s.apply(&r);
                if !seen.contains(&img) {
                    queue.push_back(img);
                }
            }
        }
        let mut positive: Vec<Vec<i64>> = seen.into_iter().filter(|r| is_positive(r)).collect();
        positive.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        for (id, root) in positive.into_iter().enumerate() {
            let element = group.reflection_matrix(&root);
            group.by_root.insert(root.clone(), id);
            group.by_element.insert(element.clone(), id);
            group.reflections.push(Reflection { id, root, element });
        }
        group.simple_ids = (0..n).map(|i| group.by_root[&unit(i)]).collect();
        let expected = match group.spec.family {
            Family::A => n * (n + 1) / 2,
            Family::B => n * n,
            Family::D => n * (n - 1),
            Family::E => 36,
            Family::F => 24,
            Family::G => 6,
        };
        if group.reflections.len() != expected {
            return Err(Error::Invariant(format!(
                "found {} reflections, expected {expected}",
                group.reflections.len()
            )));
        }
        let mut c = GroupElement::identity(n);
        for &i in &group.spec.coxeter_word {
            c = c.mul(&group.simple[i - 1]);
        }
        group.coxeter = c;
        Ok(group)
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn reflections(&self) -> &[Reflection] {
        &self.reflections
    }

    pub fn num_reflections(&self) -> usize {
        self.reflections.len()
    }

    pub fn reflection(&self, id: ReflId) -> &Reflection {
        &self.reflections[id]
    }

    pub fn root(&self, id: ReflId) -> &[i64] {
        &self.reflections[id].root
    }

    pub fn root_q(&self, id: ReflId) -> Vec<Q> {
        self.root(id).iter().map(|&x| linalg::q(x)).collect()
    }

    /// Reflection id of the `i`-th simple reflection (0-based).
    pub fn simple_id(&self, i: usize) -> ReflId {
        self.simple_ids[i]
    }

    pub fn simple_element(&self, i: usize) -> &GroupElement {
        &self.simple[i]
    }

    pub fn coxeter_element(&self) -> &GroupElement {
        &self.coxeter
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.rank())
    }

    /// Invariant form on root coordinates.
    pub fn form(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                s += x * self.gram[i][j] * y;
            }
        }
        s
    }

    pub fn inner(&self, t: ReflId, u: ReflId) -> i64 {
        self.form(self.root(t), self.root(u))
    }

    fn reflection_matrix(&self, root: &[i64]) -> GroupElement {
        let n = self.rank();
        let rr = self.form(root, root);
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                let k = 2 * self.form(&e, root);
                debug_assert_eq!(k % rr, 0, "non-crystallographic root");
                let k = k / rr;
                for (x, &r) in e.iter_mut().zip(root) {
                    *x -= k * r;
                }
                e
            })
            .collect();
        GroupElement::from_columns(&cols)
    }

    pub fn reflection_for_root(&self, root: &[i64]) -> Option<ReflId> {
        self.by_root.get(&normalize_root(root.to_vec())).copied()
    }

    pub fn reflection_for_element(&self, w: &GroupElement) -> Option<ReflId> {
        self.by_element.get(w).copied()
    }

    /// `M^{-1} = G^{-1} M^T G`, exact because `M` preserves `G`.
    pub fn inverse(&self, w: &GroupElement) -> GroupElement {
        let n = self.rank();
        // (M^T G)[i][j] = sum_k M[k][i] G[k][j]
        let mtg: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| w.entry(k, i) * self.gram[k][j]).sum())
                    .collect()
            })
            .collect();
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| {
                        let s: i64 = (0..n).map(|k| self.gram_adj[i][k] * mtg[k][j]).sum();
                        debug_assert_eq!(s % self.gram_det, 0);
                        s / self.gram_det
                    })
                    .collect()
            })
            .collect();
        GroupElement::from_columns(&cols)
    }

    /// `M^T G M == G`.
    pub fn preserves_form(&self, w: &GroupElement) -> bool {
        let n = self.rank();
        (0..n).all(|i| (0..n).all(|j| self.form(w.column(i), w.column(j)) == self.gram[i][j]))
    }

    /// Product of reflections, left to right.
    pub fn product(&self, word: &[ReflId]) -> GroupElement {
        word.iter()
            .fold(self.identity(), |acc, &t| acc.mul(&self.reflections[t].element))
    }

    /// `ℓ_T(w) = n - dim Fix(w)`.
    pub fn reflection_length(&self, w: &GroupElement) -> usize {
        int_rank(&w.minus_identity_rows())
    }

    /// `ℓ_T(w^{-1} z)`, computed as the rank of `z - w`.
    pub fn distance(&self, w: &GroupElement, z: &GroupElement) -> usize {
        int_rank(&z.difference_rows(w))
    }

    /// Absolute order: `ℓ_T(w) + ℓ_T(w^{-1} z) = ℓ_T(z)`.
    pub fn leq_t(&self, w: &GroupElement, z: &GroupElement) -> bool {
        self.reflection_length(w) + self.distance(w, z) == self.reflection_length(z)
    }

    /// `t^w = w^{-1} t w`.
    pub fn conjugate(&self, t: ReflId, w: &GroupElement) -> ReflId {
        let root = self.inverse(w).apply(self.root(t));
        self.reflection_for_root(&root)
            .expect("conjugate of a reflection is a reflection")
    }

    /// `t^u = u t u` for a reflection `u`.
    pub fn conjugate_by_reflection(&self, t: ReflId, u: ReflId) -> ReflId {
        let root = self.reflections[u].element.apply(self.root(t));
        self.reflection_for_root(&root).unwrap()
    }

    /// `g t g^{-1}`.
    pub fn conjugate_inv(&self, t: ReflId, g: &GroupElement) -> ReflId {
        let root = g.apply(self.root(t));
        self.reflection_for_root(&root).unwrap()
    }

    pub fn conjugate_element(&self, x: &GroupElement, w: &GroupElement) -> GroupElement {
        self.inverse(w).mul(x).mul(w)
    }

    /// Coxeter length: number of positive roots sent to negative roots.
    pub fn coxeter_length(&self, w: &GroupElement) -> usize {
        self.reflections
            .iter()
            .filter(|r| !is_positive(&w.apply(&r.root)))
            .count()
    }

    /// Basis of `Fix(w)`.
    pub fn fixed_space(&self, w: &GroupElement) -> Vec<Vec<Q>> {
        let rows: Vec<Vec<Q>> = w
            .minus_identity_rows()
            .iter()
            .map(|r| r.iter().map(|&x| linalg::q(x)).collect())
            .collect();
        linalg::nullspace(&rows, self.rank())
    }

    fn form_q(&self, v: &[Q], root: &[i64]) -> Q {
        let mut s = Q::zero();
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let gi: i64 = (0..self.rank()).map(|j| self.gram[i][j] * root[j]).sum();
            s += x * linalg::q(gi);
        }
        s
    }

    /// Reflections of the parabolic closure `Γ(w)` and its simple system.
    pub fn parabolic_closure(&self, w: &GroupElement) -> ParabolicData {
        let fixed = self.fixed_space(w);
        let reflections: Vec<ReflId> = self
            .reflections
            .iter()
            .filter(|r| fixed.iter().all(|v| self.form_q(v, &r.root).is_zero()))
            .map(|r| r.id)
            .collect();
        // a positive root is simple iff its reflection permutes the other positive roots
        let simples = reflections
            .iter()
            .copied()
            .filter(|&b| {
                let s = &self.reflections[b].element;
                reflections
                    .iter()
                    .filter(|&&g| g != b)
                    .all(|&g| is_positive(&s.apply(self.root(g))))
            })
            .collect();
        ParabolicData {
            generator: w.clone(),
            reflections,
            simples,
            fixed_space: fixed,
        }
    }

    /// Whether `w` is a product of the simples of `Γ(w)` in some order.
    pub fn is_standard_coxeter_of_closure(&self, w: &GroupElement) -> bool {
        let data = self.parabolic_closure(w);
        let mut simples = data.simples.clone();
        if simples.len() != self.reflection_length(w) {
            return false;
        }
        let mut found = false;
        permutations(&mut simples, 0, &mut |p| {
            if !found && self.product(p) == *w {
                found = true;
            }
        });
        found
    }

    /// Reflections of the rank-2 parabolic containing `t` and `u`, indexed so that
    /// `u_{i+1} u_i = u_i u_{i-1}` and `u_1`, `u_m` are its simples. Of the two such
    /// indexings, the one with `precedes(u_1, u_m)` is returned.
    pub fn rank2_order_by(
        &self,
        t: ReflId,
        u: ReflId,
        precedes: impl Fn(ReflId, ReflId) -> bool,
    ) -> Result<Vec<ReflId>> {
        if t == u {
            return Err(Error::Argument("rank2_order needs two distinct reflections".into()));
        }
        let basis = [self.root_q(t), self.root_q(u)];
        let mut inplane: Vec<(ReflId, Q, Q)> = Vec::new();
        for r in &self.reflections {
            let target = self.root_q(r.id);
            if let Some(c) = linalg::solve_in_span(&basis, &target)? {
                inplane.push((r.id, c[0].clone(), c[1].clone()));
            }
        }
        // positive roots of the plane sit in an open half-plane, so the sign of the
        // 2x2 determinant is a total order by angle
        inplane.sort_by(|x, y| {
            let cross = &x.1 * &y.2 - &y.1 * &x.2;
            Q::zero().cmp(&cross)
        });
        let mut order: Vec<ReflId> = inplane.into_iter().map(|x| x.0).collect();
        if !precedes(order[0], *order.last().unwrap()) {
            order.reverse();
        }
        Ok(order)
    }

    /// [`Self::rank2_order_by`] with reflection ids as the tie-break order.
    pub fn rank2_order(&self, t: ReflId, u: ReflId) -> Result<Vec<ReflId>> {
        self.rank2_order_by(t, u, |a, b| a < b)
    }

    /// Every element of the group, by breadth-first search over simple reflections.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::from([self.identity()]);
        seen.insert(self.identity());
        while let Some(w) = queue.pop_front() {
            for s in &self.simple {
                let x = w.mul(s);
                if seen.insert(x.clone()) {
                    queue.push_back(x);
                }
            }
            out.push(w);
        }
        out.sort();
        out
    }

    /// Root coordinates in the standard orthonormal basis, where the family has one.
    ///
    /// Type A uses `e_i - e_{i+1}` in `R^{n+1}`; types B and D use `R^n`.
    pub fn root_in_e_basis(&self, root: &[i64]) -> Option<Vec<i64>> {
        let n = self.rank();
        let m = match self.spec.family {
            Family::A => n + 1,
            Family::B | Family::D => n,
            _ => return None,
        };
        let mut v = vec![0i64; m];
        for (i, &x) in root.iter().enumerate() {
            let (a, b, sign) = match self.spec.family {
                Family::B if i == n - 1 => (i, None, 1),
                Family::D if i == n - 1 => (n - 2, Some(n - 1), 1),
                _ => (i, Some(i + 1), -1),
            };
            v[a] += x;
            if let Some(b) = b {
                v[b] += sign * x;
            }
        }
        Some(v)
    }

    /// Human-readable reflection name: `(i,j)` in type A, `((i,j))`, `((i,-j))`,
    /// `[i]` in types B and D, otherwise the root coordinates.
    pub fn reflection_name(&self, t: ReflId) -> String {
        let root = self.root(t);
        let Some(e) = self.root_in_e_basis(root) else {
            let parts: Vec<String> = root.iter().map(|x| x.to_string()).collect();
            return format!("r[{}]", parts.join(","));
        };
        let nz: Vec<(usize, i64)> = e
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (i + 1, x))
            .collect();
        match (self.spec.family, nz.as_slice()) {
            (Family::A, [(i, _), (j, _)]) => format!("({i},{j})"),
            (_, [(i, _)]) => format!("[{i}]"),
            (_, [(i, a), (j, b)]) if a != b => format!("(({i},{j}))"),
            (_, [(i, _), (j, _)]) => format!("(({i},-{j}))"),
            _ => format!("{e:?}"),
        }
    }

    /// Permutation (type A, 1-based images) or signed permutation (types B, D).
    pub fn as_signed_permutation(&self, w: &GroupElement) -> Option<Vec<i64>> {
        let n = self.rank();
        match self.spec.family {
            Family::A => {
                // w(α_i) = e_{π(i)} - e_{π(i+1)}
                let mut perm = vec![0i64; n + 1];
                for i in 0..n {
                    let e = self.root_in_e_basis(w.column(i))?;
                    let pos = e.iter().position(|&x| x == 1)?;
                    let neg = e.iter().position(|&x| x == -1)?;
                    perm[i] = pos as i64 + 1;
                    perm[i + 1] = neg as i64 + 1;
                }
                Some(perm)
            }
            Family::B | Family::D => {
                // change of basis: columns of P are the simple roots in e-coordinates
                let p: Vec<Vec<Q>> = (0..n)
                    .map(|r| {
                        (0..n)
                            .map(|c| {
                                let mut unit = vec![0; n];
                                unit[c] = 1;
                                linalg::q(self.root_in_e_basis(&unit).unwrap()[r])
                            })
                            .collect()
                    })
                    .collect();
                let mut out = vec![0i64; n];
                for (i, o) in out.iter_mut().enumerate() {
                    // e_i = P x, then w(e_i) = P (M x)
                    let mut target = vec![Q::zero(); n];
                    target[i] = linalg::q(1);
                    let cols: Vec<Vec<Q>> =
                        (0..n).map(|c| (0..n).map(|r| p[r][c].clone()).collect()).collect();
                    let x = linalg::solve_in_span(&cols, &target).ok()??;
                    let mx: Vec<Q> = (0..n)
                        .map(|r| (0..n).map(|c| linalg::q(w.entry(r, c)) * &x[c]).sum())
                        .collect();
                    let img: Vec<Q> = (0..n)
                        .map(|r| (0..n).map(|c| &p[r][c] * &mx[c]).sum())
                        .collect();
                    let (j, v) = img.iter().enumerate().find(|(_, v)| !v.is_zero())?;
                    *o = if *v > Q::zero() { j as i64 + 1 } else { -(j as i64 + 1) };
                }
                Some(out)
            }
            _ => None,
        }
    }

    pub fn reflection_by_name(&self, name: &str) -> Option<ReflId> {
        (0..self.reflections.len()).find(|&t| self.reflection_name(t) == name)
    }

    /// A reduced reflection factorization, found greedily from the left.
    pub fn reduced_word(&self, w: &GroupElement) -> Vec<ReflId> {
        let mut rest = w.clone();
        let mut out = Vec::new();
        let mut len = self.reflection_length(&rest);
        while len > 0 {
            let r = self
                .reflections
                .iter()
                .find(|r| self.reflection_length(&r.element.mul(&rest)) < len)
                .expect("some reflection shortens a nonidentity element");
            out.push(r.id);
            rest = r.element.mul(&rest);
            len -= 1;
        }
        out
    }

    /// Cycle notation in type A, a signed one-line permutation in types B and D,
    /// and a reduced reflection word otherwise.
    pub fn element_name(&self, w: &GroupElement) -> String {
        if w.is_identity() {
            return "e".into();
        }
        match (self.spec.family, self.as_signed_permutation(w)) {
            (Family::A, Some(perm)) => {
                let n = perm.len();
                let mut seen = vec![false; n];
                let mut out = String::new();
                for start in 0..n {
                    if seen[start] || perm[start] as usize == start + 1 {
                        continue;
                    }
                    let mut cycle = Vec::new();
                    let mut i = start;
                    while !seen[i] {
                        seen[i] = true;
                        cycle.push((i + 1).to_string());
                        i = perm[i] as usize - 1;
                    }
                    out.push_str(&format!("({})", cycle.join(",")));
                }
                out
            }
            (_, Some(perm)) => {
                let parts: Vec<String> = perm.iter().map(|x| x.to_string()).collect();
                format!("[{}]", parts.join(","))
            }
            _ => {
                let names: Vec<String> =
                    self.reduced_word(w).iter().map(|&t| self.reflection_name(t)).collect();
                names.join("*")
            }
        }
    }

    /// Parses `e`, `c`, or a whitespace-separated product of reflection names.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        match s.trim() {
            "e" => Ok(self.identity()),
            "c" => Ok(self.coxeter_element().clone()),
            other => {
                let word = other
                    .split_whitespace()
                    .map(|n| {
                        self.reflection_by_name(n)
                            .ok_or_else(|| Error::Argument(format!("unknown reflection {n}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(self.product(&word))
            }
        }
    }

    pub fn reflection_table(&self) -> Vec<ReflectionRecord> {
        self.reflections
            .iter()
            .map(|r| ReflectionRecord {
                id: r.id,
                name: self.reflection_name(r.id),
                root: r.root.clone(),
                matrix: r.element.rows(),
            })
            .collect()
    }

    /// Reflections with a root in the span of the given reflections' roots.
    pub fn reflections_in_span(&self, gens: &[ReflId]) -> Vec<ReflId> {
        let base: Vec<Vec<i64>> = gens.iter().map(|&g| self.root(g).to_vec()).collect();
        let r0 = int_rank(&base);
        self.reflections
            .iter()
            .filter(|r| {
                let mut rows = base.clone();
                rows.push(r.root.clone());
                int_rank(&rows) == r0
            })
            .map(|r| r.id)
            .collect()
    }

    /// Roots as rational vectors, for cone computations.
    pub fn roots_q(&self, ids: &[ReflId]) -> Vec<Vec<Q>> {
        ids.iter().map(|&t| self.root_q(t)).collect()
    }
}

/// Calls `f` on every permutation of `items[k..]` (Heap-free swap recursion).
pub(crate) fn permutations<T: Clone>(items: &mut Vec<T>, k: usize, f: &mut impl FnMut(&[T])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Coordinates of `target` in the basis `generators`, if it lies in their span.
/// The target is in the closed cone iff every coordinate is nonnegative.
pub fn solve_in_cone(generators: &[Vec<i64>], target: &[i64]) -> Result<Option<Vec<Q>>> {
    let gens: Vec<Vec<Q>> = generators
        .iter()
        .map(|g| g.iter().map(|&x| linalg::q(x)).collect())
        .collect();
    let t: Vec<Q> = target.iter().map(|&x| linalg::q(x)).collect();
    linalg::solve_in_span(&gens, &t)
}

#[cfg(test)]
mod tests {
    #[test]
    fn element_names() {
        let g = CoxeterGroup::build("A3".parse().unwrap()).unwrap();
        assert_eq!(g.element_name(g.coxeter_element()), "(1,2,3,4)");
        assert_eq!(g.element_name(&g.identity()), "e");
        let w = g.parse_element("(1,2) (3,4)").unwrap();
        assert_eq!(g.element_name(&w), "(1,2)(3,4)");
        assert_eq!(g.parse_element("c").unwrap(), *g.coxeter_element());
        assert!(g.parse_element("(1,5)").is_err());
        let b = CoxeterGroup::build("A3:2,1,3".parse().unwrap()).unwrap();
        assert_eq!(b.element_name(b.coxeter_element()), "(1,3,4,2)");
        let f = CoxeterGroup::build("F4".parse().unwrap()).unwrap();
        let c = f.coxeter_element();
        assert_eq!(f.parse_element(&f.element_name(c).replace('*', " ")).unwrap(), *c);
    }

    use super::*;

    fn group(s: &str) -> CoxeterGroup {
        CoxeterGroup::build(s.parse().unwrap()).unwrap()
    }

    fn refl_by_name(g: &CoxeterGroup, name: &str) -> ReflId {
        (0..g.num_reflections())
            .find(|&t| g.reflection_name(t) == name)
            .unwrap_or_else(|| panic!("no reflection {name}"))
    }

    #[test]
    fn parse_and_display() {
        let s: GroupSpec = "A3:1,2,3".parse().unwrap();
        assert_eq!(s.to_string(), "A3:1,2,3");
        let s: GroupSpec = "B3".parse().unwrap();
        assert_eq!(s.coxeter_word, vec![1, 2, 3]);
        assert!("A3:1,2".parse::<GroupSpec>().is_err());
        assert!("A3:1,1,2".parse::<GroupSpec>().is_err());
        assert!("H3:1,2,3".parse::<GroupSpec>().is_err());
        assert!("A9".parse::<GroupSpec>().is_err());
        assert!("D3".parse::<GroupSpec>().is_err());
        assert!("Ax".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn reflection_counts() {
        for (s, k) in [
            ("A1", 1),
            ("A3", 6),
            ("A7", 28),
            ("B3", 9),
            ("B6", 36),
            ("D4", 12),
            ("D6", 30),
            ("G2", 6),
            ("F4", 24),
            ("E6", 36),
        ] {
            assert_eq!(group(s).num_reflections(), k, "{s}");
        }
    }

    #[test]
    fn a3_coxeter_element_is_long_cycle() {
        let g = group("A3:1,2,3");
        assert_eq!(g.as_signed_permutation(g.coxeter_element()), Some(vec![2, 3, 4, 1]));
        let g = group("A3:2,1,3");
        // c = (1,3,4,2)
        assert_eq!(g.as_signed_permutation(g.coxeter_element()), Some(vec![3, 1, 4, 2]));
    }

    #[test]
    fn a1_coxeter_element_is_its_reflection() {
        let g = group("A1");
        assert_eq!(g.reflection_for_element(g.coxeter_element()), Some(0));
    }

    #[test]
    fn b3_coxeter_order_is_six() {
        let g = group("B3:1,2,3");
        let c = g.coxeter_element();
        let mut p = c.clone();
        let mut order = 1;
        while !p.is_identity() {
            p = p.mul(c);
            order += 1;
        }
        assert_eq!(order, 6);
    }

    #[test]
    fn reflections_are_involutions_preserving_form() {
        for s in ["A4", "B4", "D5", "G2", "F4", "E6"] {
            let g = group(s);
            for r in g.reflections() {
                assert!(r.element.mul(&r.element).is_identity());
                assert!(g.preserves_form(&r.element));
                assert_eq!(r.element.apply(&r.root), r.root.iter().map(|x| -x).collect::<Vec<_>>());
                assert_eq!(g.reflection_length(&r.element), 1);
            }
        }
    }

    #[test]
    fn inverse_is_exact() {
        let g = group("F4");
        let c = g.coxeter_element();
        assert!(c.mul(&g.inverse(c)).is_identity());
        let g = group("G2");
        let c = g.coxeter_element();
        assert!(g.inverse(c).mul(c).is_identity());
    }

    #[test]
    fn conjugation_examples() {
        let g = group("A3");
        let t12 = refl_by_name(&g, "(1,2)");
        let t23 = refl_by_name(&g, "(2,3)");
        let t13 = refl_by_name(&g, "(1,3)");
        assert_eq!(g.conjugate(t12, &g.identity()), t12);
        assert_eq!(g.conjugate(t12, &g.reflection(t23).element), t13);
        assert_eq!(g.conjugate(t12, &g.reflection(t12).element), t12);
    }

    #[test]
    fn conjugation_is_a_right_action_and_bijective() {
        let g = group("B3");
        let els = g.elements();
        let w1 = &els[7];
        let w2 = &els[31];
        for t in 0..g.num_reflections() {
            assert_eq!(
                g.conjugate(t, &w1.mul(w2)),
                g.conjugate(g.conjugate(t, w1), w2)
            );
        }
        for w in &els {
            let img: HashSet<ReflId> = (0..g.num_reflections()).map(|t| g.conjugate(t, w)).collect();
            assert_eq!(img.len(), g.num_reflections());
        }
    }

    #[test]
    fn reflection_length_examples() {
        let g = group("A3");
        assert_eq!(g.reflection_length(&g.identity()), 0);
        let w = g.product(&[refl_by_name(&g, "(1,2)"), refl_by_name(&g, "(3,4)")]);
        assert_eq!(g.reflection_length(&w), 2);
        for s in ["A1", "A5", "B4", "D4", "G2", "F4", "E6"] {
            let g = group(s);
            assert_eq!(g.reflection_length(g.coxeter_element()), g.rank(), "{s}");
        }
    }

    #[test]
    fn rank2_examples() {
        let g = group("A3");
        let t12 = refl_by_name(&g, "(1,2)");
        let t23 = refl_by_name(&g, "(2,3)");
        let t34 = refl_by_name(&g, "(3,4)");
        let o = g.rank2_order(t12, t34).unwrap();
        assert_eq!(o.len(), 2);
        let o = g.rank2_order(t12, t23).unwrap();
        let set: HashSet<String> = o.iter().map(|&t| g.reflection_name(t)).collect();
        assert_eq!(set, HashSet::from(["(1,2)".into(), "(2,3)".into(), "(1,3)".into()]));
        assert!(g.rank2_order(t12, t12).is_err());

        let b = group("B3");
        let o = b.rank2_order(refl_by_name(&b, "((2,3))"), refl_by_name(&b, "[3]")).unwrap();
        assert_eq!(o.len(), 4);
    }

    #[test]
    fn rank2_orders_satisfy_rotation_rule() {
        for s in ["A3", "B3", "G2", "D4", "F4"] {
            let g = group(s);
            let nt = g.num_reflections();
            for t in 0..nt {
                for u in t + 1..nt {
                    let o = g.rank2_order(t, u).unwrap();
                    let m = o.len();
                    assert!(o[0] < o[m - 1]);
                    for i in 0..m {
                        let next = &g.reflection(o[(i + 1) % m]).element;
                        let cur = &g.reflection(o[i]).element;
                        let prev = &g.reflection(o[(i + m - 1) % m]).element;
                        assert_eq!(next.mul(cur), cur.mul(prev), "{s}");
                    }
                    let pd = g.parabolic_closure(&g.product(&[t, u]));
                    let mut sorted = o.clone();
                    sorted.sort();
                    assert_eq!(sorted, pd.reflections);
                    let mut ends = vec![o[0], o[m - 1]];
                    ends.sort();
                    assert_eq!(ends, pd.simples);
                }
            }
        }
    }

    #[test]
    fn parabolic_closure_examples() {
        let g = group("A3");
        assert!(g.parabolic_closure(&g.identity()).reflections.is_empty());
        let full = g.parabolic_closure(g.coxeter_element());
        assert_eq!(full.reflections.len(), 6);
        assert_eq!(full.simples.len(), 3);
        assert!(full.fixed_space.is_empty());
        let w = g.product(&[refl_by_name(&g, "(1,2)"), refl_by_name(&g, "(2,3)")]);
        let names: HashSet<String> = g
            .parabolic_closure(&w)
            .reflections
            .iter()
            .map(|&t| g.reflection_name(t))
            .collect();
        assert_eq!(names, HashSet::from(["(1,2)".into(), "(2,3)".into(), "(1,3)".into()]));
        assert!(g.is_standard_coxeter_of_closure(g.coxeter_element()));
    }

    #[test]
    fn b3_reflection_names() {
        let g = group("B3");
        let mut names: Vec<String> = (0..9).map(|t| g.reflection_name(t)).collect();
        names.sort();
        let mut expected = vec![
            "((1,2))", "((1,3))", "((2,3))", "((1,-2))", "((1,-3))", "((2,-3))", "[1]", "[2]", "[3]",
        ];
        expected.sort();
        assert_eq!(names, expected);
        assert_eq!(g.reflection_name(g.simple_id(0)), "((1,2))");
        assert_eq!(g.reflection_name(g.simple_id(2)), "[3]");
    }

    #[test]
    fn group_orders() {
        for (s, n) in [("A3", 24), ("B3", 48), ("G2", 12), ("D4", 192)] {
            assert_eq!(group(s).elements().len(), n);
        }
    }
}
