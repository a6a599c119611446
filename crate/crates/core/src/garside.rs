//! The dual braid monoid as a Garside monoid over `NC(W, c)`.

use rand::Rng;

use crate::group::{CoxeterGroup, GroupElement, ReflId};
use crate::nc::NcLattice;

/// A monoid element in left-greedy normal form: nonidentity simples, each
/// adjacent pair left-weighted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoidElement {
    nf: Vec<usize>,
}

impl MonoidElement {
    pub fn identity() -> Self {
        Self { nf: Vec::new() }
    }

    /// Lattice indices of the normal-form factors.
    pub fn simples(&self) -> &[usize] {
        &self.nf
    }

    pub fn is_identity(&self) -> bool {
        self.nf.is_empty()
    }

    /// Wraps a sequence the caller knows to be a normal form.
    pub fn from_normal_form(nf: Vec<usize>) -> Self {
        Self { nf }
    }
}

/// Monoid operations; borrows the group and its lattice.
pub struct DualMonoid<'a> {
    pub group: &'a CoxeterGroup,
    pub nc: &'a NcLattice,
    /// `successors[u]` = simples `v` with `(u, v)` left-weighted.
    successors: Vec<Vec<usize>>,
}

impl<'a> DualMonoid<'a> {
    pub fn new(group: &'a CoxeterGroup, nc: &'a NcLattice) -> Self {
        let successors = (0..nc.len())
            .map(|u| {
                if u == nc.bottom() {
                    return Vec::new();
                }
                (1..nc.len())
                    .filter(|&v| nc.meet(v, nc.complement(u)) == nc.bottom())
                    .collect()
            })
            .collect();
        Self {
            group,
            nc,
            successors,
        }
    }

    pub fn degree(&self, b: &MonoidElement) -> usize {
        b.nf.iter().map(|&s| self.nc.rank(s)).sum()
    }

    /// The element of `W` obtained by forgetting the braid structure.
    pub fn to_group(&self, b: &MonoidElement) -> GroupElement {
        b.nf
            .iter()
            .fold(self.group.identity(), |acc, &s| acc.mul(self.nc.element(s)))
    }

    pub fn simple(&self, u: usize) -> MonoidElement {
        if u == self.nc.bottom() {
            MonoidElement::identity()
        } else {
            MonoidElement { nf: vec![u] }
        }
    }

    pub fn atom(&self, t: ReflId) -> MonoidElement {
        self.simple(self.nc.atom(t))
    }

    pub fn garside_element(&self) -> MonoidElement {
        self.simple(self.nc.top())
    }

    /// No simple `x ≠ e` with `x ≤_T v` and `ux` simple.
    pub fn is_left_weighted(&self, u: usize, v: usize) -> bool {
        self.nc.meet(v, self.nc.complement(u)) == self.nc.bottom()
    }

    pub fn is_normal_form(&self, b: &MonoidElement) -> bool {
        b.nf.iter().all(|&s| s != self.nc.bottom())
            && b.nf.windows(2).all(|p| self.is_left_weighted(p[0], p[1]))
    }

    /// `uv` as a simple when it lies in NC with additive length.
    pub fn simple_mult(&self, u: usize, v: usize) -> Option<usize> {
        self.nc.simple_mult(u, v)
    }

    /// Atoms `t` that can slide from `v` onto `u`.
    fn slidable(&self, u: usize, v: usize) -> Vec<ReflId> {
        let k = self.nc.complement(u);
        (0..self.group.num_reflections())
            .filter(|&t| {
                let a = self.nc.atom(t);
                self.nc.leq(a, v) && self.nc.leq(a, k)
            })
            .collect()
    }

    fn slide(&self, seq: &mut Vec<usize>, i: usize, t: ReflId) {
        let a = self.nc.atom(t);
        seq[i] = self.simple_mult(seq[i], a).expect("slid atom is additive");
        seq[i + 1] = self.nc.left_quotient(self.group, a, seq[i + 1]);
        if seq[i + 1] == self.nc.bottom() {
            seq.remove(i + 1);
        }
    }

    /// Left-greedy normal form by atom sliding, leftmost pair and smallest atom first.
    pub fn normal_form(&self, word: &[ReflId]) -> MonoidElement {
        let mut seq: Vec<usize> = word.iter().map(|&t| self.nc.atom(t)).collect();
        'outer: loop {
            for i in 0..seq.len().saturating_sub(1) {
                if let Some(&t) = self.slidable(seq[i], seq[i + 1]).first() {
                    self.slide(&mut seq, i, t);
                    continue 'outer;
                }
            }
            return MonoidElement { nf: seq };
        }
    }

    /// Atom sliding with pair and atom chosen at random at every step.
    pub fn normal_form_random<R: Rng>(&self, word: &[ReflId], rng: &mut R) -> MonoidElement {
        let mut seq: Vec<usize> = word.iter().map(|&t| self.nc.atom(t)).collect();
        loop {
            let moves: Vec<(usize, ReflId)> = (0..seq.len().saturating_sub(1))
                .flat_map(|i| {
                    self.slidable(seq[i], seq[i + 1])
                        .into_iter()
                        .map(move |t| (i, t))
                })
                .collect();
            if moves.is_empty() {
                return MonoidElement { nf: seq };
            }
            let (i, t) = moves[rng.gen_range(0..moves.len())];
            self.slide(&mut seq, i, t);
        }
    }

    /// Makes `(u, v)` left-weighted in one step, moving `v ∧ u^{-1}c` onto `u`.
    fn normalize_pair(&self, u: usize, v: usize) -> (usize, usize) {
        let m = self.nc.meet(v, self.nc.complement(u));
        if m == self.nc.bottom() {
            return (u, v);
        }
        let um = self.simple_mult(u, m).expect("meet with complement is additive");
        (um, self.nc.left_quotient(self.group, m, v))
    }

    /// Right multiplication of a normal form by a simple.
    pub fn mul_simple(&self, a: &MonoidElement, x: usize) -> MonoidElement {
        let mut seq = a.nf.clone();
        if x == self.nc.bottom() {
            return a.clone();
        }
        seq.push(x);
        for i in (0..seq.len() - 1).rev() {
            let (u, v) = self.normalize_pair(seq[i], seq[i + 1]);
            if (u, v) == (seq[i], seq[i + 1]) {
                break;
            }
            seq[i] = u;
            seq[i + 1] = v;
        }
        seq.retain(|&s| s != self.nc.bottom());
        MonoidElement { nf: seq }
    }

    pub fn mul_atom(&self, a: &MonoidElement, t: ReflId) -> MonoidElement {
        self.mul_simple(a, self.nc.atom(t))
    }

    pub fn multiply(&self, a: &MonoidElement, b: &MonoidElement) -> MonoidElement {
        b.nf.iter().fold(a.clone(), |acc, &x| self.mul_simple(&acc, x))
    }

    /// Right-greedy normal form: every adjacent pair `(u, v)` admits no nontrivial
    /// right divisor of `u` that can move onto `v`.
    pub fn right_greedy(&self, b: &MonoidElement) -> Vec<usize> {
        let nc = self.nc;
        let mut seq = b.nf.clone();
        loop {
            let mut changed = false;
            for i in 0..seq.len().saturating_sub(1) {
                let (u, v) = (seq[i], seq[i + 1]);
                // x right-divides u and xv is simple iff x ≤_T u and x ≤_T c v^{-1}
                let m = nc.meet(u, nc.conj_c(nc.complement(v)));
                if m != nc.bottom() {
                    let m_el = self.nc.element(m);
                    let um = self.group.inverse(m_el);
                    seq[i] = nc.index_of(&nc.element(u).mul(&um)).unwrap();
                    seq[i + 1] = self.simple_mult(m, v).expect("additive");
                    changed = true;
                }
            }
            seq.retain(|&s| s != nc.bottom());
            if !changed {
                return seq;
            }
        }
    }

    /// Greatest common right divisor of `b` and the Garside element, as a lattice index.
    pub fn gcrd_with_c(&self, b: &MonoidElement) -> usize {
        self.right_greedy(b)
            .last()
            .copied()
            .unwrap_or(self.nc.bottom())
    }

    /// Entrywise `w ↦ c^i w c^{-i}` on simples.
    pub fn conjugate_by_c(&self, b: &MonoidElement, i: i64) -> MonoidElement {
        MonoidElement {
            nf: b.nf.iter().map(|&s| self.nc.conj_c_pow(s, i)).collect(),
        }
    }

    pub fn successors(&self, u: usize) -> &[usize] {
        &self.successors[u]
    }

    /// Every element of the given degree, in lexicographic order of normal forms.
    pub fn elements_of_degree(&self, d: usize) -> Vec<MonoidElement> {
        fn go(
            m: &DualMonoid,
            remaining: usize,
            seq: &mut Vec<usize>,
            out: &mut Vec<MonoidElement>,
        ) {
            if remaining == 0 {
                out.push(MonoidElement { nf: seq.clone() });
                return;
            }
            let cands: Vec<usize> = match seq.last() {
                None => (1..m.nc.len()).collect(),
                Some(&u) => m.successors[u].clone(),
            };
            for v in cands {
                let r = m.nc.rank(v);
                if r <= remaining {
                    seq.push(v);
                    go(m, remaining - r, seq, out);
                    seq.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, d, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// Number of normal forms of each degree, by dynamic programming over the
    /// transfer graph of left-weighted pairs restricted to `allowed` simples.
    fn count_paths(&self, max_deg: usize, allowed: &[bool]) -> Vec<i128> {
        let size = self.nc.len();
        // ending[d][v]: normal forms of degree d whose last factor is v
        let mut ending = vec![vec![0i128; size]; max_deg + 1];
        let mut series = vec![0i128; max_deg + 1];
        series[0] = 1;
        for d in 1..=max_deg {
            for v in 1..size {
                if !allowed[v] {
                    continue;
                }
                let r = self.nc.rank(v);
                if r == d {
                    ending[d][v] += 1;
                }
            }
            // extend shorter forms by one factor
            for v in 1..size {
                if !allowed[v] {
                    continue;
                }
                let r = self.nc.rank(v);
                if r >= d {
                    continue;
                }
                let prev = d - r;
                let mut total = 0i128;
                for u in 1..size {
                    if allowed[u] && ending[prev][u] != 0 && self.is_left_weighted(u, v) {
                        total += ending[prev][u];
                    }
                }
                ending[d][v] += total;
            }
            series[d] = ending[d].iter().sum();
        }
        series
    }

    /// `a_d` = number of elements of degree `d`.
    pub fn growth_series(&self, max_deg: usize) -> Vec<i128> {
        self.count_paths(max_deg, &vec![true; self.nc.len()])
    }

    /// Growth of the submonoid fixed by `w ↦ c^i w c^{-i}`.
    pub fn fixed_growth(&self, i: i64, max_deg: usize) -> Vec<i128> {
        let allowed: Vec<bool> = (0..self.nc.len())
            .map(|u| self.nc.conj_c_pow(u, i) == u)
            .collect();
        self.count_paths(max_deg, &allowed)
    }
}

/// Coefficients of `1/p` through degree `max_deg`; `p[0]` must be 1.
pub fn series_inverse(p: &[i64], max_deg: usize) -> Vec<i128> {
    assert_eq!(p.first(), Some(&1), "series must start with 1");
    let mut inv = vec![0i128; max_deg + 1];
    inv[0] = 1;
    for d in 1..=max_deg {
        inv[d] = -(1..=d.min(p.len() - 1))
            .map(|k| p[k] as i128 * inv[d - k])
            .sum::<i128>();
    }
    inv
}
