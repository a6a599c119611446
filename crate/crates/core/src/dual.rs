//! The Koszul dual `P(W)`: rewriting to the face basis, the product, and characters.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::cluster::{cone_data, PositiveComplex};
use crate::error::{Error, Result};
use crate::group::{CoxeterGroup, GroupElement, ReflId};
use crate::linalg::{q, Q};
use crate::nc::NcLattice;

/// A linear combination of basis faces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualElement {
    coeffs: BTreeMap<usize, Q>,
}

impl DualElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(face: usize) -> Self {
        Self {
            coeffs: BTreeMap::from([(face, Q::one())]),
        }
    }

    pub fn add_term(&mut self, face: usize, c: Q) {
        let e = self.coeffs.entry(face).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&face);
        }
    }

    pub fn add(&mut self, other: &DualElement, scale: &Q) {
        for (&f, c) in &other.coeffs {
            self.add_term(f, c * scale);
        }
    }

    pub fn coeff(&self, face: usize) -> Q {
        self.coeffs.get(&face).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.coeffs.iter().map(|(&f, c)| (f, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// The three families of quadratic relations.
#[derive(Clone, Debug)]
pub struct RelationSet {
    /// `𝕥 ⊗ 𝕥`.
    pub squares: Vec<ReflId>,
    /// `𝕥 ⊗ 𝕦` with `tu ∉ NC`.
    pub non_nc: Vec<(ReflId, ReflId)>,
    /// `𝕦₁𝕦_m + 𝕦_m𝕦_{m-1} + ... + 𝕦₂𝕦₁` for each `w ∈ NC_2`.
    pub cyclic: Vec<Vec<(ReflId, ReflId)>>,
}

impl RelationSet {
    /// Every ordered pair, each occurring in exactly one relation.
    pub fn covers_each_pair_once(&self, num_reflections: usize) -> bool {
        let mut count = vec![0usize; num_reflections * num_reflections];
        for &t in &self.squares {
            count[t * num_reflections + t] += 1;
        }
        for &(t, u) in self.non_nc.iter().chain(self.cyclic.iter().flatten()) {
            count[t * num_reflections + u] += 1;
        }
        count.iter().all(|&c| c == 1)
    }

    /// Relations as linear combinations of two-letter words.
    pub fn as_linear_combinations(&self) -> Vec<Vec<(Vec<ReflId>, i64)>> {
        let mut out: Vec<Vec<(Vec<ReflId>, i64)>> = Vec::new();
        out.extend(self.squares.iter().map(|&t| vec![(vec![t, t], 1)]));
        out.extend(self.non_nc.iter().map(|&(t, u)| vec![(vec![t, u], 1)]));
        out.extend(
            self.cyclic
                .iter()
                .map(|r| r.iter().map(|&(t, u)| (vec![t, u], 1)).collect()),
        );
        out
    }
}

/// `P(W)` presented on the face basis of a positive complex.
pub struct DualAlgebra<'a> {
    pub group: &'a CoxeterGroup,
    pub nc: &'a NcLattice,
    pub complex: &'a PositiveComplex,
    memo: RefCell<HashMap<Vec<ReflId>, Vec<(usize, i64)>>>,
}

impl<'a> DualAlgebra<'a> {
    pub fn new(group: &'a CoxeterGroup, nc: &'a NcLattice, complex: &'a PositiveComplex) -> Self {
        Self {
            group,
            nc,
            complex,
            memo: RefCell::new(HashMap::new()),
        }
    }

    /// Reflections of `T(w)` for `w ∈ NC_2`, increasing in `≺`.
    fn sorted_rank2(&self, w: usize) -> Vec<ReflId> {
        let mut us = self.nc.reflections_below(w);
        us.sort_by_key(|&t| self.complex.order.position(t));
        us
    }

    pub fn relations(&self) -> RelationSet {
        let nt = self.group.num_reflections();
        let squares = (0..nt).collect();
        let mut non_nc = Vec::new();
        for t in 0..nt {
            for u in 0..nt {
                if t == u {
                    continue;
                }
                let prod = self.group.product(&[t, u]);
                if self.nc.index_of(&prod).is_none() {
                    non_nc.push((t, u));
                }
            }
        }
        let cyclic = self
            .nc
            .level(2)
            .map(|w| {
                let us = self.sorted_rank2(w);
                let m = us.len();
                let mut rel = vec![(us[0], us[m - 1])];
                rel.extend((1..m).rev().map(|i| (us[i], us[i - 1])));
                rel
            })
            .collect();
        RelationSet {
            squares,
            non_nc,
            cyclic,
        }
    }

    /// NC index of the product when it lies in `NC_{|word|}`.
    fn nc_of_word(&self, word: &[ReflId]) -> Option<usize> {
        let idx = self.nc.index_of(&self.group.product(word))?;
        (self.nc.rank(idx) == word.len()).then_some(idx)
    }

    fn rewrite_int(&self, word: &[ReflId]) -> Result<Vec<(usize, i64)>> {
        if let Some(hit) = self.memo.borrow().get(word) {
            return Ok(hit.clone());
        }
        let out = self.rewrite_uncached(word)?;
        self.memo.borrow_mut().insert(word.to_vec(), out.clone());
        Ok(out)
    }

    fn rewrite_uncached(&self, word: &[ReflId]) -> Result<Vec<(usize, i64)>> {
        if self.nc_of_word(word).is_none() {
            return Ok(Vec::new());
        }
        let ord = &self.complex.order;
        let Some(i) = (0..word.len().saturating_sub(1)).find(|&i| ord.precedes(word[i], word[i + 1]))
        else {
            let f = self.complex.face_id(word).ok_or_else(|| {
                Error::Invariant(format!("descending word {word:?} is not a face"))
            })?;
            return Ok(vec![(f, 1)]);
        };
        // 𝕦₁𝕦_m = -(𝕦_m𝕦_{m-1} + ... + 𝕦₂𝕦₁)
        let w = self
            .nc
            .index_of(&self.group.product(&word[i..i + 2]))
            .expect("subword of an NC word");
        let us = self.sorted_rank2(w);
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for j in (1..us.len()).rev() {
            let mut next = word.to_vec();
            next[i] = us[j];
            next[i + 1] = us[j - 1];
            for (f, c) in self.rewrite_int(&next)? {
                *acc.entry(f).or_insert(0) -= c;
            }
        }
        Ok(acc.into_iter().filter(|&(_, c)| c != 0).collect())
    }

    /// Expresses a monomial in the face basis.
    pub fn rewrite(&self, word: &[ReflId]) -> Result<DualElement> {
        let mut out = DualElement::zero();
        for (f, c) in self.rewrite_int(word)? {
            out.add_term(f, q(c));
        }
        Ok(out)
    }

    pub fn multiply(&self, x: &DualElement, y: &DualElement) -> Result<DualElement> {
        let mut out = DualElement::zero();
        for (f1, c1) in x.terms() {
            for (f2, c2) in y.terms() {
                let mut word = self.complex.face(f1).verts.clone();
                word.extend_from_slice(&self.complex.face(f2).verts);
                out.add(&self.rewrite(&word)?, &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// Product of generators by the cone rule: faces `f` with `nc(f) = t₁⋯t_j` whose
    /// cone lies in the cone of the word, each with coefficient `ω(f)`.
    pub fn multiply_geometric(&self, word: &[ReflId]) -> Result<DualElement> {
        let mut out = DualElement::zero();
        let Some(w) = self.nc_of_word(word) else {
            return Ok(out);
        };
        for &f in self.complex.faces_with_nc(w) {
            let cd = cone_data(self.group, word, &self.complex.face(f).verts)?;
            if cd.contained {
                let s = cd
                    .sign
                    .ok_or_else(|| Error::Invariant("degenerate cone in product rule".into()))?;
                out.add_term(f, q(s as i64));
            }
        }
        Ok(out)
    }

    /// `dim P_k` for `k = 0..n`.
    pub fn hilbert(&self) -> Vec<usize> {
        self.complex.f_vector()
    }

    /// `c^i t c^{-i}` on reflections.
    pub fn rotate_reflection(&self, t: ReflId, i: i64) -> ReflId {
        let c = self.group.coxeter_element();
        let ci = power(self.group, c, i);
        self.group.conjugate_inv(t, &ci)
    }

    /// Matrix of `𝕥 ↦ 𝕔^i 𝕥 𝕔^{-i}` on `P_k`, as columns over the degree-`k` faces.
    pub fn rotation_matrix(&self, i: i64, k: usize) -> Result<(Vec<usize>, Vec<DualElement>)> {
        let faces: Vec<usize> = self.complex.faces_of_size(k).collect();
        let cols = faces
            .iter()
            .map(|&f| {
                let word: Vec<ReflId> = self
                    .complex
                    .face(f)
                    .verts
                    .iter()
                    .map(|&t| self.rotate_reflection(t, i))
                    .collect();
                self.rewrite(&word)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((faces, cols))
    }

    /// `tr(c^i, P_k)` for `k = 0..n`.
    pub fn cyclic_character(&self, i: i64) -> Result<Vec<Q>> {
        (0..=self.group.rank())
            .map(|k| {
                let (faces, cols) = self.rotation_matrix(i, k)?;
                Ok(faces
                    .iter()
                    .zip(&cols)
                    .map(|(&f, col)| col.coeff(f))
                    .fold(Q::zero(), |a, b| a + b))
            })
            .collect()
    }

    /// `Σ_{w fixed by c^i} μ(w) (-1)^{ℓ_T(w)}`, split by degree.
    pub fn fixed_moebius_character(&self, i: i64) -> Vec<Q> {
        let fp = self.nc.fixed_subposet(i);
        fp.moebius_polynomial(self.nc)
            .iter()
            .enumerate()
            .map(|(k, &m)| q(if k % 2 == 0 { m } else { -m }))
            .collect()
    }
}

/// `x^i` for any integer `i`.
pub fn power(g: &CoxeterGroup, x: &GroupElement, i: i64) -> GroupElement {
    let base = if i < 0 { g.inverse(x) } else { x.clone() };
    (0..i.unsigned_abs()).fold(g.identity(), |acc, _| acc.mul(&base))
}
