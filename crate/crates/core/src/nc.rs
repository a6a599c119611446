//! The noncrossing partition lattice `[e, c]` under absolute order.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{CoxeterGroup, GroupElement, ReflId};

/// Fixed-width bitset over lattice indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn min(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b)
        })
    }
}

/// `NC(W, c)` with order, Möbius function, meets and joins.
///
/// Elements are indexed by `(rank, canonical key)`, so index 0 is `e` and the
/// last index is `c`.
#[derive(Clone, Debug)]
pub struct NcLattice {
    elements: Vec<GroupElement>,
    ranks: Vec<usize>,
    index: HashMap<GroupElement, usize>,
    below: Vec<BitSet>,
    above: Vec<BitSet>,
    moebius: Vec<i64>,
    meet: Vec<u32>,
    join: Vec<u32>,
    /// `covers[w]` lists `(x, t)` with `x = w t` of rank one more.
    covers: Vec<Vec<(usize, ReflId)>>,
    atoms: Vec<usize>,
    complement: Vec<usize>,
    conj_c: Vec<usize>,
}

/// Induced subposet of elements fixed by `w ↦ c^i w c^{-i}`.
#[derive(Clone, Debug, Serialize)]
pub struct FixedSubposet {
    pub power: i64,
    pub elements: Vec<usize>,
    /// Möbius function of the subposet from its bottom, aligned with `elements`.
    pub moebius: Vec<i64>,
    pub rank_sizes: Vec<usize>,
}

impl FixedSubposet {
    /// `Σ μ(w) q^{ℓ_T(w)}` over the subposet.
    pub fn moebius_polynomial(&self, nc: &NcLattice) -> Vec<i64> {
        let mut poly = vec![0; nc.top_rank() + 1];
        for (&w, &m) in self.elements.iter().zip(&self.moebius) {
            poly[nc.rank(w)] += m;
        }
        poly
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NcElementRecord {
    pub index: usize,
    pub name: String,
    pub rank: usize,
    pub moebius: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NcExport {
    pub group: String,
    pub size: usize,
    pub rank_sizes: Vec<usize>,
    pub moebius_polynomial: Vec<i64>,
    pub elements: Vec<NcElementRecord>,
    pub covers: Vec<(usize, usize)>,
}

impl NcLattice {
    pub fn build(g: &CoxeterGroup) -> Result<Self> {
        let n = g.rank();
        let c = g.coxeter_element().clone();
        let mut levels: Vec<Vec<GroupElement>> = vec![vec![g.identity()]];
        for k in 0..n {
            let mut next: BTreeSet<GroupElement> = BTreeSet::new();
            for w in &levels[k] {
                for r in g.reflections() {
                    let x = w.mul(&r.element);
                    if !next.contains(&x)
                        && g.reflection_length(&x) == k + 1
                        && g.distance(&x, &c) == n - k - 1
                    {
                        next.insert(x);
                    }
                }
            }
            levels.push(next.into_iter().collect());
        }
        if levels[n].len() != 1 || levels[n][0] != c {
            return Err(Error::Invariant("top of NC is not c".into()));
        }
        let mut elements = Vec::new();
        let mut ranks = Vec::new();
        for (k, lvl) in levels.into_iter().enumerate() {
            for w in lvl {
                elements.push(w);
                ranks.push(k);
            }
        }
        let size = elements.len();
        let index: HashMap<GroupElement, usize> =
            elements.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();

        let mut covers = vec![Vec::new(); size];
        for (i, w) in elements.iter().enumerate() {
            for r in g.reflections() {
                let x = w.mul(&r.element);
                if let Some(&j) = index.get(&x) {
                    if ranks[j] == ranks[i] + 1 {
                        covers[i].push((j, r.id));
                    }
                }
            }
        }
        let mut below: Vec<BitSet> = (0..size).map(|_| BitSet::new(size)).collect();
        for i in 0..size {
            below[i].insert(i);
        }
        for i in 0..size {
            let b = below[i].clone();
            for &(j, _) in &covers[i] {
                below[j].union_with(&b);
            }
        }
        let mut above: Vec<BitSet> = (0..size).map(|_| BitSet::new(size)).collect();
        for (j, b) in below.iter().enumerate() {
            for i in b.iter() {
                above[i].insert(j);
            }
        }
        let mut moebius = vec![0i64; size];
        moebius[0] = 1;
        for x in 1..size {
            moebius[x] = -below[x].iter().filter(|&y| y != x).map(|y| moebius[y]).sum::<i64>();
        }

        let mut meet = vec![0u32; size * size];
        let mut join = vec![0u32; size * size];
        for a in 0..size {
            for b in a..size {
                let lower = below[a].intersection(&below[b]);
                let m = lower.max().unwrap();
                if !lower.is_subset(&below[m]) {
                    return Err(Error::Invariant(format!("no meet for NC elements {a}, {b}")));
                }
                let upper = above[a].intersection(&above[b]);
                let j = upper.min().unwrap();
                if !upper.is_subset(&above[j]) {
                    return Err(Error::Invariant(format!("no join for NC elements {a}, {b}")));
                }
                meet[a * size + b] = m as u32;
                meet[b * size + a] = m as u32;
                join[a * size + b] = j as u32;
                join[b * size + a] = j as u32;
            }
        }

        let atoms = (0..g.num_reflections())
            .map(|t| {
                index
                    .get(&g.reflection(t).element)
                    .copied()
                    .ok_or_else(|| Error::Invariant(format!("reflection {t} is not below c")))
            })
            .collect::<Result<Vec<_>>>()?;
        let complement = elements
            .iter()
            .map(|w| index[&g.inverse(w).mul(&c)])
            .collect();
        let c_inv = g.inverse(&c);
        let conj_c = elements
            .iter()
            .map(|w| index[&c.mul(w).mul(&c_inv)])
            .collect();

        Ok(Self {
            elements,
            ranks,
            index,
            below,
            above,
            moebius,
            meet,
            join,
            covers,
            atoms,
            complement,
            conj_c,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn top_rank(&self) -> usize {
        self.ranks[self.top()]
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    pub fn index_of(&self, w: &GroupElement) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Lattice index of a reflection.
    pub fn atom(&self, t: ReflId) -> usize {
        self.atoms[t]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(a)
    }

    pub fn below(&self, a: usize) -> &BitSet {
        &self.below[a]
    }

    pub fn above(&self, a: usize) -> &BitSet {
        &self.above[a]
    }

    pub fn moebius(&self, a: usize) -> i64 {
        self.moebius[a]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b] as usize
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b] as usize
    }

    pub fn covers(&self, a: usize) -> &[(usize, ReflId)] {
        &self.covers[a]
    }

    /// Index of `w^{-1} c`.
    pub fn complement(&self, a: usize) -> usize {
        self.complement[a]
    }

    /// Index of `c w c^{-1}`.
    pub fn conj_c(&self, a: usize) -> usize {
        self.conj_c[a]
    }

    /// Index of `c^i w c^{-i}` for any integer `i`.
    pub fn conj_c_pow(&self, a: usize, i: i64) -> usize {
        let order = self.conj_c_order(a) as i64;
        let steps = i.rem_euclid(order);
        (0..steps).fold(a, |x, _| self.conj_c[x])
    }

    fn conj_c_order(&self, a: usize) -> usize {
        let mut x = self.conj_c[a];
        let mut k = 1;
        while x != a {
            x = self.conj_c[x];
            k += 1;
        }
        k
    }

    /// Reflections below `w`, sorted by id.
    pub fn reflections_below(&self, a: usize) -> Vec<ReflId> {
        (0..self.atoms.len()).filter(|&t| self.leq(self.atoms[t], a)).collect()
    }

    /// Index of `uv` when it lies in NC and lengths add.
    pub fn simple_mult(&self, u: usize, v: usize) -> Option<usize> {
        let x = self.index_of(&self.elements[u].mul(&self.elements[v]))?;
        (self.ranks[x] == self.ranks[u] + self.ranks[v]).then_some(x)
    }

    /// Index of `u^{-1} v` for `u ≤_T v`.
    pub fn left_quotient(&self, g: &CoxeterGroup, u: usize, v: usize) -> usize {
        debug_assert!(self.leq(u, v));
        self.index[&g.inverse(&self.elements[u]).mul(&self.elements[v])]
    }

    /// `Σ μ(w) q^{ℓ_T(w)}`.
    pub fn moebius_polynomial(&self) -> Vec<i64> {
        let mut poly = vec![0; self.top_rank() + 1];
        for i in 0..self.len() {
            poly[self.ranks[i]] += self.moebius[i];
        }
        poly
    }

    pub fn rank_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.top_rank() + 1];
        for &r in &self.ranks {
            sizes[r] += 1;
        }
        sizes
    }

    /// Elements of rank `k`.
    pub fn level(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.ranks[i] == k)
    }

    pub fn fixed_subposet(&self, i: i64) -> FixedSubposet {
        let elements: Vec<usize> = (0..self.len())
            .filter(|&a| self.conj_c_pow(a, i) == a)
            .collect();
        let mut moebius = vec![0i64; elements.len()];
        for (k, &x) in elements.iter().enumerate() {
            moebius[k] = if k == 0 {
                1
            } else {
                -elements[..k]
                    .iter()
                    .zip(&moebius)
                    .filter(|(&y, _)| self.leq(y, x))
                    .map(|(_, &m)| m)
                    .sum::<i64>()
            };
        }
        let mut rank_sizes = vec![0; self.top_rank() + 1];
        for &x in &elements {
            rank_sizes[self.ranks[x]] += 1;
        }
        FixedSubposet {
            power: i,
            elements,
            moebius,
            rank_sizes,
        }
    }

    pub fn export(&self, g: &CoxeterGroup) -> NcExport {
        let elements = (0..self.len())
            .map(|i| {
                let permutation = g.as_signed_permutation(&self.elements[i]);
                let matrix = permutation
                    .is_none()
                    .then(|| self.elements[i].rows());
                NcElementRecord {
                    index: i,
                    name: g.element_name(&self.elements[i]),
                    rank: self.ranks[i],
                    moebius: self.moebius[i],
                    permutation,
                    matrix,
                }
            })
            .collect();
        let covers = (0..self.len())
            .flat_map(|i| self.covers[i].iter().map(move |&(j, _)| (i, j)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        NcExport {
            group: g.spec.to_string(),
            size: self.len(),
            rank_sizes: self.rank_sizes(),
            moebius_polynomial: self.moebius_polynomial(),
            elements,
            covers,
        }
    }
}

/// All reduced reflection factorizations of `w`.
pub fn reduced_factorizations(g: &CoxeterGroup, w: &GroupElement) -> Vec<Vec<ReflId>> {
    fn go(
        g: &CoxeterGroup,
        w: &GroupElement,
        len: usize,
        prefix: &mut Vec<ReflId>,
        out: &mut Vec<Vec<ReflId>>,
    ) {
        if len == 0 {
            out.push(prefix.clone());
            return;
        }
        for r in g.reflections() {
            let rest = r.element.mul(w);
            if g.reflection_length(&rest) == len - 1 {
                prefix.push(r.id);
                go(g, &rest, len - 1, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, w, g.reflection_length(w), &mut Vec::new(), &mut out);
    out
}

/// Closure of a reduced factorization under Hurwitz moves.
pub fn hurwitz_orbit(g: &CoxeterGroup, word: &[ReflId]) -> Result<HashSet<Vec<ReflId>>> {
    if g.reflection_length(&g.product(word)) != word.len() {
        return Err(Error::Argument("Hurwitz orbit of a non-reduced word".into()));
    }
    let mut seen = HashSet::from([word.to_vec()]);
    let mut queue = VecDeque::from([word.to_vec()]);
    while let Some(f) = queue.pop_front() {
        for i in 0..f.len().saturating_sub(1) {
            let (t1, t2) = (f[i], f[i + 1]);
            // t1 t2 = (t1 t2 t1) t1 = t2 (t2 t1 t2)
            for (a, b) in [
                (g.conjugate_by_reflection(t2, t1), t1),
                (t2, g.conjugate_by_reflection(t1, t2)),
            ] {
                let mut h = f.clone();
                h[i] = a;
                h[i + 1] = b;
                if seen.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
        }
    }
    Ok(seen)
}
