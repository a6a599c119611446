//! Reflection orderings, the positive cluster complex and its cone geometry.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{is_positive, CoxeterGroup, GroupElement, ReflId};
use crate::linalg::{self, SparseMatrix, Q};
use crate::nc::NcLattice;

/// A total order on the reflections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionOrdering {
    order: Vec<ReflId>,
    position: Vec<usize>,
}

impl ReflectionOrdering {
    /// `order[0] ≺ order[1] ≺ ...`; must list every reflection once.
    pub fn new(order: Vec<ReflId>) -> Result<Self> {
        let mut position = vec![usize::MAX; order.len()];
        for (i, &t) in order.iter().enumerate() {
            if t >= order.len() || position[t] != usize::MAX {
                return Err(Error::Argument("ordering must list each reflection once".into()));
            }
            position[t] = i;
        }
        Ok(Self { order, position })
    }

    /// Parses reflection names such as `((1,-2))` or `[3]`.
    pub fn from_names(g: &CoxeterGroup, names: &[&str]) -> Result<Self> {
        let lookup: HashMap<String, ReflId> = (0..g.num_reflections())
            .map(|t| (g.reflection_name(t), t))
            .collect();
        let order = names
            .iter()
            .map(|n| {
                lookup
                    .get(*n)
                    .copied()
                    .ok_or_else(|| Error::Argument(format!("unknown reflection {n}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if order.len() != g.num_reflections() {
            return Err(Error::Argument("ordering has the wrong length".into()));
        }
        Self::new(order)
    }

    pub fn sequence(&self) -> &[ReflId] {
        &self.order
    }

    pub fn position(&self, t: ReflId) -> usize {
        self.position[t]
    }

    pub fn precedes(&self, a: ReflId, b: ReflId) -> bool {
        self.position[a] < self.position[b]
    }

    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        Self::new(order).unwrap()
    }

    /// Lexicographic comparison of words under `≺`.
    pub fn cmp_words(&self, a: &[ReflId], b: &[ReflId]) -> Ordering {
        let ka = a.iter().map(|&t| self.position[t]);
        let kb = b.iter().map(|&t| self.position[t]);
        ka.cmp(kb)
    }

    /// Sorts reflections into `≺`-descending order.
    pub fn descending(&self, verts: &[ReflId]) -> Vec<ReflId> {
        let mut v = verts.to_vec();
        v.sort_by_key(|&t| std::cmp::Reverse(self.position[t]));
        v
    }

    pub fn is_descending(&self, word: &[ReflId]) -> bool {
        word.windows(2).all(|p| self.position[p[0]] > self.position[p[1]])
    }
}

/// The c-sorting word of the longest element, as 0-based simple indices:
/// the leftmost reduced subword of `(c-word)^∞`.
pub fn sorting_word(g: &CoxeterGroup) -> Vec<usize> {
    let word: Vec<usize> = g.spec.coxeter_word.iter().map(|i| i - 1).collect();
    let mut v = g.identity();
    let mut out = Vec::new();
    let mut unit = vec![0i64; g.rank()];
    for &s in word.iter().cycle() {
        if out.len() == g.num_reflections() {
            break;
        }
        unit.iter_mut().for_each(|x| *x = 0);
        unit[s] = 1;
        if is_positive(&v.apply(&unit)) {
            out.push(s);
            v = v.mul(g.simple_element(s));
        }
    }
    out
}

/// Reflection ordering `s_{i1} ≺ s_{i1} s_{i2} s_{i1} ≺ ...` from the c-sorting word.
pub fn sorting_order(g: &CoxeterGroup, nc: &NcLattice) -> Result<ReflectionOrdering> {
    let mut v = g.identity();
    let mut order = Vec::new();
    for s in sorting_word(g) {
        let mut unit = vec![0i64; g.rank()];
        unit[s] = 1;
        let root = v.apply(&unit);
        order.push(
            g.reflection_for_root(&root)
                .ok_or_else(|| Error::Invariant("sorting word root is not a root".into()))?,
        );
        v = v.mul(g.simple_element(s));
    }
    let ord = ReflectionOrdering::new(order)?;
    if let Some((t, u)) = reflection_ordering_violation(g, &ord)? {
        return Err(Error::Invariant(format!(
            "sorting order is not a reflection ordering at ({t}, {u})"
        )));
    }
    if let Some(w) = c_compatibility_violation(g, nc, &ord) {
        return Err(Error::Invariant(format!(
            "sorting order is not c-compatible at NC element {w}"
        )));
    }
    Ok(ord)
}

/// First pair `(t, u)` whose rank-2 parabolic is not listed monotonically.
pub fn reflection_ordering_violation(
    g: &CoxeterGroup,
    ord: &ReflectionOrdering,
) -> Result<Option<(ReflId, ReflId)>> {
    let mut seen: BTreeSet<Vec<ReflId>> = BTreeSet::new();
    for t in 0..g.num_reflections() {
        for u in t + 1..g.num_reflections() {
            let o = g.rank2_order(t, u)?;
            let mut key = o.clone();
            key.sort();
            if !seen.insert(key) {
                continue;
            }
            let pos: Vec<usize> = o.iter().map(|&x| ord.position(x)).collect();
            let up = pos.windows(2).all(|p| p[0] < p[1]);
            let down = pos.windows(2).all(|p| p[0] > p[1]);
            if !up && !down {
                return Ok(Some((t, u)));
            }
        }
    }
    Ok(None)
}

/// First `w ∈ NC_2` for which `w = u_i u_{i-1}` fails with `u_1 ≺ ... ≺ u_m`.
pub fn c_compatibility_violation(
    g: &CoxeterGroup,
    nc: &NcLattice,
    ord: &ReflectionOrdering,
) -> Option<usize> {
    nc.level(2).find(|&w| {
        let mut us = nc.reflections_below(w);
        us.sort_by_key(|&t| ord.position(t));
        let m = us.len();
        (0..m).any(|i| {
            let prev = us[(i + m - 1) % m];
            g.product(&[us[i], prev]) != *nc.element(w)
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    /// Vertices in `≺`-descending order.
    pub verts: Vec<ReflId>,
    /// Lattice index of the product of `verts`.
    pub nc: usize,
}

impl Face {
    pub fn dim(&self) -> isize {
        self.verts.len() as isize - 1
    }
}

/// `Δ⁺(W, c)` for a fixed c-compatible ordering.
#[derive(Clone, Debug)]
pub struct PositiveComplex {
    pub order: ReflectionOrdering,
    pub facets: Vec<Vec<ReflId>>,
    /// Faces sorted by size, then lexicographically under `≺`.
    faces: Vec<Face>,
    index: HashMap<Vec<ReflId>, usize>,
    by_nc: Vec<Vec<usize>>,
}

/// Descending words with product `target` whose prefixes all lie in NC.
fn descending_factorizations(
    g: &CoxeterGroup,
    nc: &NcLattice,
    ord: &ReflectionOrdering,
    target: usize,
) -> Vec<Vec<ReflId>> {
    fn go(
        g: &CoxeterGroup,
        nc: &NcLattice,
        ord: &ReflectionOrdering,
        target: usize,
        prefix: &mut Vec<ReflId>,
        current: &GroupElement,
        out: &mut Vec<Vec<ReflId>>,
    ) {
        let k = prefix.len();
        if k == nc.rank(target) {
            if current == nc.element(target) {
                out.push(prefix.clone());
            }
            return;
        }
        let limit = prefix.last().map_or(usize::MAX, |&t| ord.position(t));
        for &t in ord.sequence().iter().take(limit.min(ord.sequence().len())) {
            let next = current.mul(&g.reflection(t).element);
            if let Some(idx) = nc.index_of(&next) {
                if nc.rank(idx) == k + 1 && nc.leq(idx, target) {
                    prefix.push(t);
                    go(g, nc, ord, target, prefix, &next, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(g, nc, ord, target, &mut Vec::new(), &g.identity(), &mut out);
    debug_assert!(out.iter().all(|w| ord.is_descending(w)));
    out.sort_by(|a, b| ord.cmp_words(a, b));
    out
}

impl PositiveComplex {
    /// Builds `Δ⁺` from the c-sorting order.
    pub fn build(g: &CoxeterGroup, nc: &NcLattice) -> Result<Self> {
        let ord = sorting_order(g, nc)?;
        Self::with_order(g, nc, ord)
    }

    /// Builds `Δ⁺` from a given order, which must be c-compatible.
    pub fn with_order(g: &CoxeterGroup, nc: &NcLattice, order: ReflectionOrdering) -> Result<Self> {
        if let Some(w) = c_compatibility_violation(g, nc, &order) {
            return Err(Error::Argument(format!("order is not c-compatible at NC element {w}")));
        }
        let facets = descending_factorizations(g, nc, &order, nc.top());
        for f in &facets {
            for (i, &a) in f.iter().enumerate() {
                for &b in &f[i + 1..] {
                    if g.inner(a, b) < 0 {
                        return Err(Error::Invariant(format!(
                            "facet {f:?} has a negative inner product"
                        )));
                    }
                }
            }
        }
        let mut set: BTreeSet<Vec<ReflId>> = BTreeSet::new();
        for f in &facets {
            for mask in 0u32..(1 << f.len()) {
                let sub: Vec<ReflId> = (0..f.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| f[i])
                    .collect();
                set.insert(sub);
            }
        }
        let mut verts_list: Vec<Vec<ReflId>> = set.into_iter().collect();
        verts_list.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| order.cmp_words(a, b)));
        let mut faces = Vec::with_capacity(verts_list.len());
        let mut index = HashMap::new();
        let mut by_nc = vec![Vec::new(); nc.len()];
        for verts in verts_list {
            let roots: Vec<Vec<i64>> = verts.iter().map(|&t| g.root(t).to_vec()).collect();
            if linalg::int_rank(&roots) != verts.len() {
                return Err(Error::Invariant(format!("face {verts:?} has dependent roots")));
            }
            let w = nc
                .index_of(&g.product(&verts))
                .filter(|&w| nc.rank(w) == verts.len())
                .ok_or_else(|| Error::Invariant(format!("nc label of {verts:?} missing")))?;
            let id = faces.len();
            index.insert(verts.clone(), id);
            by_nc[w].push(id);
            faces.push(Face { verts, nc: w });
        }
        Ok(Self {
            order,
            facets,
            faces,
            index,
            by_nc,
        })
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn face_id(&self, verts: &[ReflId]) -> Option<usize> {
        self.index.get(verts).copied()
    }

    /// Face id of a vertex set in any order.
    pub fn face_id_unordered(&self, verts: &[ReflId]) -> Option<usize> {
        self.face_id(&self.order.descending(verts))
    }

    /// Faces with `nc(f) = w`.
    pub fn faces_with_nc(&self, w: usize) -> &[usize] {
        &self.by_nc[w]
    }

    pub fn faces_of_size(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(move |&i| self.faces[i].verts.len() == k)
    }

    /// `f_k` = number of faces with `k` vertices.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.facets.first().map_or(0, |f| f.len());
        let mut v = vec![0; top + 1];
        for f in &self.faces {
            v[f.verts.len()] += 1;
        }
        v
    }

    /// Faces of the full subcomplex on reflections below `w`.
    pub fn subcomplex(&self, nc: &NcLattice, w: usize) -> Result<Vec<usize>> {
        if w == nc.bottom() {
            return Err(Error::Argument("Δ⁺(w) is undefined for w = e".into()));
        }
        Ok((0..self.faces.len())
            .filter(|&i| self.faces[i].verts.iter().all(|&t| nc.leq(nc.atom(t), w)))
            .collect())
    }

    /// Checks that `Δ⁺(w)` is the positive complex of `(Γ(w), w)`: its maximal faces
    /// are exactly the descending factorizations of `w`.
    pub fn subcomplex_matches_parabolic(
        &self,
        g: &CoxeterGroup,
        nc: &NcLattice,
        w: usize,
    ) -> Result<bool> {
        let sub = self.subcomplex(nc, w)?;
        let tops: BTreeSet<Vec<ReflId>> = sub
            .iter()
            .filter(|&&f| self.faces[f].verts.len() == nc.rank(w))
            .map(|&f| self.faces[f].verts.clone())
            .collect();
        let facs: BTreeSet<Vec<ReflId>> =
            descending_factorizations(g, nc, &self.order, w).into_iter().collect();
        if tops != facs {
            return Ok(false);
        }
        Ok(sub.iter().all(|&f| {
            let v = &self.faces[f].verts;
            facs.iter().any(|top| v.iter().all(|t| top.contains(t)))
        }))
    }

    /// Augmented chain complex of a set of faces closed under subsets.
    pub fn chain_complex(&self, faces: &[usize]) -> ChainComplex {
        let sets: Vec<Vec<usize>> = faces.iter().map(|&f| self.faces[f].verts.clone()).collect();
        ChainComplex::from_faces(&sets)
    }

    /// The direct criterion: `≺`-descending, product in NC with additive length,
    /// pairwise nonnegative inner products.
    pub fn satisfies_direct_criterion(g: &CoxeterGroup, nc: &NcLattice, ord: &ReflectionOrdering, verts: &[ReflId]) -> bool {
        ord.is_descending(verts)
            && nc
                .index_of(&g.product(verts))
                .is_some_and(|w| nc.rank(w) == verts.len())
            && verts
                .iter()
                .enumerate()
                .all(|(i, &a)| verts[i + 1..].iter().all(|&b| g.inner(a, b) >= 0))
    }
}

/// Augmented simplicial chain complex over the rationals.
///
/// `groups[k]` holds the faces with `k` vertices; `boundaries[k]` maps chains on
/// `k`-vertex faces to chains on `(k-1)`-vertex faces.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub sizes: Vec<usize>,
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Faces are vertex tuples; each face's vertex order fixes its orientation.
    pub fn from_faces(faces: &[Vec<usize>]) -> Self {
        let top = faces.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut groups: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); top + 1];
        for f in faces {
            groups[f.len()].push(f);
        }
        let mut lookup: Vec<HashMap<BTreeSet<usize>, usize>> = vec![HashMap::new(); top + 1];
        for (k, grp) in groups.iter().enumerate() {
            for (i, f) in grp.iter().enumerate() {
                lookup[k].insert(f.iter().copied().collect(), i);
            }
        }
        let sizes: Vec<usize> = groups.iter().map(|g| g.len()).collect();
        let mut boundaries = vec![SparseMatrix::new(0, sizes[0])];
        for k in 1..=top {
            let mut m = SparseMatrix::new(sizes[k - 1], sizes[k]);
            for (j, f) in groups[k].iter().enumerate() {
                for i in 0..f.len() {
                    let sub: BTreeSet<usize> =
                        f.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &x)| x).collect();
                    let row = lookup[k - 1][&sub];
                    m.add(row, j, if i % 2 == 0 { 1 } else { -1 });
                }
            }
            boundaries.push(m);
        }
        Self { sizes, boundaries }
    }

    /// `β_{k-1} ∘ β_k = 0` for every `k`.
    pub fn is_complex(&self) -> bool {
        (2..self.boundaries.len()).all(|k| self.boundaries[k - 1].mul(&self.boundaries[k]).is_zero())
    }

    /// Reduced Betti numbers indexed by dimension `-1, 0, 1, ...`.
    pub fn reduced_betti(&self) -> Result<Vec<usize>> {
        if !self.is_complex() {
            return Err(Error::Invariant("boundary maps do not compose to zero".into()));
        }
        let ranks: Vec<usize> = self.boundaries.iter().map(|b| b.rank()).collect();
        Ok((0..self.sizes.len())
            .map(|k| {
                let next = ranks.get(k + 1).copied().unwrap_or(0);
                self.sizes[k] - ranks[k] - next
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeData {
    pub contained: bool,
    /// Sign of the determinant of the coordinate matrix, when square and nonsingular.
    pub sign: Option<i8>,
}

/// Coordinates of `verts`' roots in the basis of `big`'s roots; rows follow `verts`.
pub fn cone_coordinates(
    g: &CoxeterGroup,
    big: &[ReflId],
    verts: &[ReflId],
) -> Result<Option<Vec<Vec<Q>>>> {
    let basis = g.roots_q(big);
    let mut rows = Vec::with_capacity(verts.len());
    for &u in verts {
        match linalg::solve_in_span(&basis, &g.root_q(u))? {
            Some(c) => rows.push(c),
            None => return Ok(None),
        }
    }
    Ok(Some(rows))
}

/// Whether `γ(f) ⊆ γ(big)`, and the orientation sign `ω(f)` relative to `big`.
pub fn cone_data(g: &CoxeterGroup, big: &[ReflId], verts: &[ReflId]) -> Result<ConeData> {
    let Some(rows) = cone_coordinates(g, big, verts)? else {
        return Ok(ConeData {
            contained: false,
            sign: None,
        });
    };
    let contained = rows.iter().flatten().all(|x| !x.is_negative());
    let sign = (rows.len() == big.len()).then(|| {
        let d = linalg::det(&rows);
        if d.is_zero() {
            0
        } else if d.is_positive() {
            1
        } else {
            -1
        }
    });
    Ok(ConeData {
        contained,
        sign: sign.filter(|&s| s != 0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(s: &str) -> (CoxeterGroup, NcLattice) {
        let g = CoxeterGroup::build(s.parse().unwrap()).unwrap();
        let nc = NcLattice::build(&g).unwrap();
        (g, nc)
    }

    fn names(g: &CoxeterGroup, ts: &[ReflId]) -> Vec<String> {
        ts.iter().map(|&t| g.reflection_name(t)).collect()
    }

    #[test]
    fn a3_long_cycle_order_is_lexicographic() {
        let (g, nc) = setup("A3:1,2,3");
        let ord = sorting_order(&g, &nc).unwrap();
        assert_eq!(
            names(&g, ord.sequence()),
            ["(1,2)", "(1,3)", "(1,4)", "(2,3)", "(2,4)", "(3,4)"]
        );
        assert!(c_compatibility_violation(&g, &nc, &ord.reversed()).is_some());
    }

    #[test]
    fn a3_bipartite_order() {
        let (g, nc) = setup("A3:2,1,3");
        let ord = sorting_order(&g, &nc).unwrap();
        assert_eq!(
            names(&g, ord.sequence()),
            ["(2,3)", "(1,3)", "(2,4)", "(1,4)", "(3,4)", "(1,2)"]
        );
    }

    #[test]
    fn b3_reference_orders() {
        let (g, nc) = setup("B3:1,2,3");
        let ord = sorting_order(&g, &nc).unwrap();
        assert_eq!(
            names(&g, ord.sequence()),
            ["((1,2))", "((1,3))", "[1]", "((2,3))", "((1,-2))", "[2]", "((1,-3))", "((2,-3))", "[3]"]
        );
        let (g, nc) = setup("B3:1,3,2");
        let reference = ReflectionOrdering::from_names(
            &g,
            &["((1,2))", "[3]", "((1,-3))", "((2,-3))", "[1]", "((1,-2))", "((1,3))", "[2]", "((2,3))"],
        )
        .unwrap();
        assert_eq!(reflection_ordering_violation(&g, &reference).unwrap(), None);
        assert_eq!(c_compatibility_violation(&g, &nc, &reference), None);
    }

    #[test]
    fn a1_complex() {
        let (g, nc) = setup("A1");
        let pc = PositiveComplex::build(&g, &nc).unwrap();
        assert_eq!(pc.facets, vec![vec![0]]);
        assert_eq!(pc.f_vector(), vec![1, 1]);
    }

    #[test]
    fn a3_f_vector_and_subcomplexes() {
        let (g, nc) = setup("A3");
        let pc = PositiveComplex::build(&g, &nc).unwrap();
        assert_eq!(pc.facets.len(), 5);
        assert_eq!(pc.f_vector(), vec![1, 6, 10, 5]);
        assert_eq!(pc.faces()[0].verts, Vec::<ReflId>::new());
        let w = (0..nc.len())
            .find(|&i| g.as_signed_permutation(nc.element(i)).unwrap() == [2, 3, 1, 4])
            .unwrap();
        let sub = pc.subcomplex(&nc, w).unwrap();
        let mut fv = [0; 3];
        for f in &sub {
            fv[pc.face(*f).verts.len()] += 1;
        }
        assert_eq!(fv, [1, 3, 2]);
        assert_eq!(pc.subcomplex(&nc, nc.top()).unwrap().len(), pc.faces().len());
        assert_eq!(pc.subcomplex(&nc, nc.atom(0)).unwrap().len(), 2);
        assert!(pc.subcomplex(&nc, nc.bottom()).is_err());
        for w in 1..nc.len() {
            assert!(pc.subcomplex_matches_parabolic(&g, &nc, w).unwrap());
        }
    }

    #[test]
    fn faces_count_moebius() {
        for s in ["A3", "A3:2,1,3", "B3", "B3:1,3,2", "G2", "D4"] {
            let (g, nc) = setup(s);
            let pc = PositiveComplex::build(&g, &nc).unwrap();
            for w in 0..nc.len() {
                assert_eq!(pc.faces_with_nc(w).len() as i64, nc.moebius(w).abs(), "{s}");
            }
        }
    }

    #[test]
    fn homology_fixtures() {
        let triangle = vec![vec![], vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]];
        assert_eq!(ChainComplex::from_faces(&triangle).reduced_betti().unwrap(), vec![0, 0, 1]);
        let point = vec![vec![], vec![0]];
        assert_eq!(ChainComplex::from_faces(&point).reduced_betti().unwrap(), vec![0, 0]);
        let empty = vec![vec![]];
        assert_eq!(ChainComplex::from_faces(&empty).reduced_betti().unwrap(), vec![1]);
    }

    #[test]
    fn cone_examples() {
        let (g, _) = setup("A2");
        let name = |n: &str| (0..3).find(|&t| g.reflection_name(t) == n).unwrap();
        let (t12, t23, t13) = (name("(1,2)"), name("(2,3)"), name("(1,3)"));
        let cd = cone_data(&g, &[t12, t23], &[t13, t12]).unwrap();
        assert_eq!(cd, ConeData { contained: true, sign: Some(-1) });
        let cd = cone_data(&g, &[t13, t12], &[t13, t12]).unwrap();
        assert_eq!(cd, ConeData { contained: true, sign: Some(1) });
        let (g3, _) = setup("A3");
        let cd = cone_data(&g3, &[0], &[1]).unwrap();
        assert!(!cd.contained);
        assert!(cone_data(&g3, &[0, 0], &[0]).is_err());
    }
}
