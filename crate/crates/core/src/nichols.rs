//! Twisted shuffles, the Nichols algebra of the reflection braiding and its quotient by `J_c`.

use std::cell::OnceCell;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cluster::PositiveComplex;
use crate::dual::DualAlgebra;
use crate::error::{Error, Result};
use crate::group::{CoxeterGroup, GroupElement, ReflId};
use crate::linalg::{q_to_i64, SparseMatrix, Q};
use crate::nc::{reduced_factorizations, NcLattice};

/// Largest group for which a multiplication table is built.
pub const MAX_TABLE_ORDER: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Alphabet {
    /// Letters are reflection ids.
    Reflections,
    /// Letters are indices into [`GroupTable::elements`].
    Group,
    /// Letters are flats of an intersection lattice.
    Flats,
}

/// A linear combination of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    pub alphabet: Alphabet,
    pub terms: BTreeMap<Vec<usize>, Q>,
}

impl TensorElement {
    pub fn zero(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    pub fn word(alphabet: Alphabet, w: Vec<usize>) -> Self {
        Self {
            alphabet,
            terms: BTreeMap::from([(w, Q::one())]),
        }
    }

    pub fn empty() -> Self {
        Self::word(Alphabet::Reflections, Vec::new())
    }

    pub fn reflection(t: ReflId) -> Self {
        Self::word(Alphabet::Reflections, vec![t])
    }

    pub fn add_term(&mut self, w: Vec<usize>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&mut self, other: &TensorElement, scale: &Q) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * scale);
        }
    }

    pub fn coeff(&self, w: &[usize]) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common word length, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|w| w.len());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    fn from_counts(alphabet: Alphabet, counts: HashMap<Vec<usize>, i64>) -> Self {
        let terms = counts
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(w, c)| (w, Q::from_integer(c.into())))
            .collect();
        Self { alphabet, terms }
    }
}

/// Multiplication table of a finite Coxeter group.
pub struct GroupTable {
    pub elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    refl: Vec<usize>,
    pub identity: usize,
}

impl GroupTable {
    pub fn build(g: &CoxeterGroup) -> Result<Self> {
        let elements = g.elements();
        let n = elements.len();
        if n > MAX_TABLE_ORDER {
            return Err(Error::Argument(format!(
                "group of order {n} is too large for word computations over W"
            )));
        }
        let index: HashMap<GroupElement, usize> =
            elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut mul = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                mul.push(index[&a.mul(b)] as u32);
            }
        }
        let identity = index[&g.identity()];
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] as usize == identity {
                    inv[a] = b as u32;
                }
            }
        }
        let refl = g.reflections().iter().map(|r| index[&r.element]).collect();
        Ok(Self {
            elements,
            index,
            mul,
            inv,
            refl,
            identity,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, w: &GroupElement) -> usize {
        self.index[w]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.len() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `u⁻¹ a u`.
    pub fn conj(&self, a: usize, u: usize) -> usize {
        self.mul(self.inv(u), self.mul(a, u))
    }

    pub fn reflection(&self, t: ReflId) -> usize {
        self.refl[t]
    }

    pub fn product(&self, word: &[usize]) -> usize {
        word.iter().fold(self.identity, |acc, &x| self.mul(acc, x))
    }
}

fn shuffle_words(
    a: &[usize],
    b: &[usize],
    conj: &dyn Fn(usize, usize) -> usize,
    twisted: bool,
    sign: i64,
    prefix: &mut Vec<usize>,
    out: &mut HashMap<Vec<usize>, i64>,
) {
    if a.is_empty() || b.is_empty() {
        let mut w = prefix.clone();
        w.extend_from_slice(a);
        w.extend_from_slice(b);
        *out.entry(w).or_insert(0) += sign;
        return;
    }
    prefix.push(a[0]);
    shuffle_words(&a[1..], b, conj, twisted, sign, prefix, out);
    prefix.pop();
    let s = if a.len() % 2 == 1 { -sign } else { sign };
    let moved: Vec<usize> = if twisted {
        a.iter().map(|&x| conj(x, b[0])).collect()
    } else {
        a.to_vec()
    };
    prefix.push(b[0]);
    shuffle_words(&moved, &b[1..], conj, twisted, s, prefix, out);
    prefix.pop();
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiDimension {
    pub w: usize,
    pub rank: usize,
    pub nichols_dim: usize,
    pub faces: usize,
    pub moebius: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiReport {
    pub faces_checked: usize,
    pub unitriangular: bool,
    pub support_on_faces: bool,
    pub squares_vanish: bool,
    pub non_nc_vanish: bool,
    pub cyclic_vanish: bool,
    pub dims: Vec<PsiDimension>,
    pub dims_match: bool,
}

impl PsiReport {
    pub fn passed(&self) -> bool {
        self.unitriangular
            && self.squares_vanish
            && self.non_nc_vanish
            && self.cyclic_vanish
            && self.dims_match
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TopHomologyReport {
    pub rank: usize,
    pub chains: usize,
    pub dimension: usize,
    pub moebius: i64,
    pub nichols_dim: usize,
    pub xi_rank: usize,
    pub in_kernel: bool,
    pub injective: bool,
    pub xi_nabla: bool,
    pub z_equivariant: bool,
}

impl TopHomologyReport {
    pub fn passed(&self) -> bool {
        self.in_kernel
            && self.injective
            && self.xi_nabla
            && self.z_equivariant
            && self.dimension as i64 == self.moebius.abs()
            && self.xi_rank == self.dimension
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SimpleSubalgebraReport {
    pub elements: usize,
    pub words_checked: usize,
    pub sign_consistent: bool,
    pub independent: bool,
    pub products_checked: usize,
    pub product_rule: bool,
}

impl SimpleSubalgebraReport {
    pub fn passed(&self) -> bool {
        self.sign_consistent && self.independent && self.product_rule
    }
}

pub struct Nichols<'a> {
    pub group: &'a CoxeterGroup,
    pub nc: &'a NcLattice,
    pub complex: &'a PositiveComplex,
    conj_t: Vec<Vec<ReflId>>,
    table: OnceCell<GroupTable>,
}

impl<'a> Nichols<'a> {
    pub fn new(group: &'a CoxeterGroup, nc: &'a NcLattice, complex: &'a PositiveComplex) -> Self {
        let nt = group.num_reflections();
        let conj_t = (0..nt)
            .map(|t| (0..nt).map(|u| group.conjugate_by_reflection(t, u)).collect())
            .collect();
        Self {
            group,
            nc,
            complex,
            conj_t,
            table: OnceCell::new(),
        }
    }

    pub fn table(&self) -> Result<&GroupTable> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let t = GroupTable::build(self.group)?;
        Ok(self.table.get_or_init(|| t))
    }

    /// `t^u = u t u`.
    pub fn conj_reflection(&self, t: ReflId, u: ReflId) -> ReflId {
        self.conj_t[t][u]
    }

    pub fn to_group_letters(&self, x: &TensorElement) -> Result<TensorElement> {
        match x.alphabet {
            Alphabet::Group => return Ok(x.clone()),
            Alphabet::Flats => return Err(Error::Argument("flats are not group letters".into())),
            Alphabet::Reflections => {}
        }
        let table = self.table()?;
        let mut out = TensorElement::zero(Alphabet::Group);
        for (w, c) in &x.terms {
            out.add_term(w.iter().map(|&t| table.reflection(t)).collect(), c.clone());
        }
        Ok(out)
    }

    fn product_impl(&self, x: &TensorElement, y: &TensorElement, twisted: bool) -> Result<TensorElement> {
        let (x, y) = if x.alphabet == y.alphabet {
            (x.clone(), y.clone())
        } else {
            (self.to_group_letters(x)?, self.to_group_letters(y)?)
        };
        let alphabet = x.alphabet;
        if twisted && alphabet == Alphabet::Flats {
            return Err(Error::Argument("twisted shuffle is not defined on flats".into()));
        }
        let mut out = TensorElement::zero(alphabet);
        let table = if alphabet == Alphabet::Group {
            Some(self.table()?)
        } else {
            None
        };
        let conj = |a: usize, u: usize| match table {
            Some(tb) => tb.conj(a, u),
            None => self.conj_t[a][u],
        };
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let mut counts = HashMap::new();
                shuffle_words(a, b, &conj, twisted, 1, &mut Vec::new(), &mut counts);
                let scale = ca * cb;
                out.add(&TensorElement::from_counts(alphabet, counts), &scale);
            }
        }
        Ok(out)
    }

    /// `x ⧢̃ y`.
    pub fn twisted_shuffle(&self, x: &TensorElement, y: &TensorElement) -> Result<TensorElement> {
        self.product_impl(x, y, true)
    }

    /// The signed shuffle `x ⧢ y`.
    pub fn shuffle(&self, x: &TensorElement, y: &TensorElement) -> Result<TensorElement> {
        self.product_impl(x, y, false)
    }

    /// `t₁ ⧢̃ (t₂ ⧢̃ (⋯ ⧢̃ t_j))`.
    pub fn shuffle_letters(&self, letters: &[ReflId]) -> TensorElement {
        self.fold_letters(letters, true)
    }

    /// `t₁ ⧢ ⋯ ⧢ t_j`, the antisymmetrized word.
    pub fn wedge_letters(&self, letters: &[ReflId]) -> TensorElement {
        self.fold_letters(letters, false)
    }

    fn fold_letters(&self, letters: &[ReflId], twisted: bool) -> TensorElement {
        let mut acc = TensorElement::empty();
        for &t in letters.iter().rev() {
            acc = self
                .product_impl(&TensorElement::reflection(t), &acc, twisted)
                .expect("reflection words need no table");
        }
        acc
    }

    /// `(w, j)` for a homogeneous element.
    pub fn grading(&self, x: &TensorElement) -> Result<Option<(GroupElement, usize)>> {
        let mut grade: Option<(GroupElement, usize)> = None;
        for w in x.terms.keys() {
            let p = self.word_product(x.alphabet, w)?;
            match &grade {
                None => grade = Some((p, w.len())),
                Some((q, j)) if *q == p && *j == w.len() => {}
                Some(_) => return Ok(None),
            }
        }
        Ok(grade)
    }

    pub fn word_product(&self, alphabet: Alphabet, w: &[usize]) -> Result<GroupElement> {
        Ok(match alphabet {
            Alphabet::Reflections => self.group.product(w),
            Alphabet::Group => {
                let tb = self.table()?;
                tb.elements[tb.product(w)].clone()
            }
            Alphabet::Flats => return Err(Error::Argument("flats have no product".into())),
        })
    }

    pub fn in_nc_j(&self, w: &GroupElement, j: usize) -> bool {
        self.nc.index_of(w).is_some_and(|i| self.nc.rank(i) == j)
    }

    /// Image in `N/J_c`: drops the component unless `w ∈ NC_j`.
    pub fn quotient_project(&self, x: &TensorElement) -> Result<TensorElement> {
        if x.is_zero() {
            return Ok(x.clone());
        }
        let Some((w, j)) = self.grading(x)? else {
            return Err(Error::Argument("quotient_project needs a graded element".into()));
        };
        Ok(if self.in_nc_j(&w, j) {
            x.clone()
        } else {
            TensorElement::zero(x.alphabet)
        })
    }

    pub fn quotient_product(&self, x: &TensorElement, y: &TensorElement) -> Result<TensorElement> {
        let mut out = TensorElement::zero(x.alphabet);
        let mut parts: HashMap<(GroupElement, usize), TensorElement> = HashMap::new();
        let prod = self.twisted_shuffle(x, y)?;
        for (w, c) in &prod.terms {
            let key = (self.word_product(prod.alphabet, w)?, w.len());
            parts
                .entry(key)
                .or_insert_with(|| TensorElement::zero(prod.alphabet))
                .add_term(w.clone(), c.clone());
        }
        for ((w, j), part) in parts {
            if self.in_nc_j(&w, j) {
                out.add(&part, &Q::one());
            }
        }
        Ok(out)
    }

    /// All reflection words of length `j` with product `w`.
    pub fn words_with_product(&self, w: &GroupElement, j: usize, max_words: usize) -> Result<Vec<Vec<ReflId>>> {
        fn go(
            s: &Nichols,
            rest: &GroupElement,
            left: usize,
            prefix: &mut Vec<ReflId>,
            out: &mut Vec<Vec<ReflId>>,
            max: usize,
        ) -> Result<()> {
            if left == 0 {
                if rest.is_identity() {
                    if out.len() == max {
                        return Err(Error::Argument(format!("more than {max} spanning words")));
                    }
                    out.push(prefix.clone());
                }
                return Ok(());
            }
            for r in s.group.reflections() {
                let next = r.element.mul(rest);
                if s.group.reflection_length(&next) <= left - 1 {
                    prefix.push(r.id);
                    go(s, &next, left - 1, prefix, out, max)?;
                    prefix.pop();
                }
            }
            Ok(())
        }
        let mut out = Vec::new();
        if self.group.reflection_length(w) <= j {
            go(self, w, j, &mut Vec::new(), &mut out, max_words)?;
        }
        Ok(out)
    }

    /// `dim N_{(w,j)}` as the rank of its spanning set.
    pub fn component_dim(&self, w: &GroupElement, j: usize, max_words: usize) -> Result<usize> {
        let l = self.group.reflection_length(w);
        if l > j || (j - l) % 2 == 1 {
            return Ok(0);
        }
        let words = self.words_with_product(w, j, max_words)?;
        let vectors: Vec<TensorElement> = words.iter().map(|x| self.shuffle_letters(x)).collect();
        Ok(rank_of(&vectors))
    }

    pub fn psi_check(&self) -> Result<PsiReport> {
        let ord = &self.complex.order;
        let mut unitriangular = true;
        let mut support_on_faces = true;
        let mut faces_checked = 0;
        for f in self.complex.faces() {
            if f.verts.is_empty() {
                continue;
            }
            faces_checked += 1;
            let x = self.shuffle_letters(&f.verts);
            if !x.coeff(&f.verts).is_one() {
                unitriangular = false;
            }
            for w in x.terms.keys() {
                if *w == f.verts {
                    continue;
                }
                if ord.cmp_words(w, &f.verts) != std::cmp::Ordering::Less {
                    unitriangular = false;
                }
                if !ord.is_descending(w) || self.complex.face_id(w).is_none() {
                    support_on_faces = false;
                }
            }
        }

        let rels = DualAlgebra::new(self.group, self.nc, self.complex).relations();
        let squares_vanish = rels
            .squares
            .iter()
            .all(|&t| self.shuffle_letters(&[t, t]).is_zero());
        let mut non_nc_vanish = true;
        for &(t, u) in &rels.non_nc {
            let x = self.shuffle_letters(&[t, u]);
            if !self.quotient_project(&x)?.is_zero() {
                non_nc_vanish = false;
            }
        }
        let cyclic_vanish = rels.cyclic.iter().all(|pairs| {
            let mut sum = TensorElement::zero(Alphabet::Reflections);
            for &(a, b) in pairs {
                sum.add(&self.shuffle_letters(&[a, b]), &Q::one());
            }
            sum.is_zero()
        });

        let mut dims = Vec::new();
        for w in 0..self.nc.len() {
            let words = reduced_factorizations(self.group, self.nc.element(w));
            let vectors: Vec<TensorElement> = words.iter().map(|x| self.shuffle_letters(x)).collect();
            dims.push(PsiDimension {
                w,
                rank: self.nc.rank(w),
                nichols_dim: rank_of(&vectors),
                faces: self.complex.faces_with_nc(w).len(),
                moebius: self.nc.moebius(w),
            });
        }
        let dims_match = dims
            .iter()
            .all(|d| d.nichols_dim == d.faces && d.faces as i64 == d.moebius.abs());
        Ok(PsiReport {
            faces_checked,
            unitriangular,
            support_on_faces,
            squares_vanish,
            non_nc_vanish,
            cyclic_vanish,
            dims,
            dims_match,
        })
    }

    /// `∇`: signed sum of contractions of adjacent letters. Output letters are group elements.
    pub fn nabla(&self, x: &TensorElement) -> Result<TensorElement> {
        let x = self.to_group_letters(x)?;
        let tb = self.table()?;
        let mut out = TensorElement::zero(Alphabet::Group);
        for (w, c) in &x.terms {
            for i in 0..w.len().saturating_sub(1) {
                let mut v = w[..i].to_vec();
                v.push(tb.mul(w[i], w[i + 1]));
                v.extend_from_slice(&w[i + 2..]);
                let s = if i % 2 == 0 { -c.clone() } else { c.clone() };
                out.add_term(v, s);
            }
        }
        Ok(out)
    }

    /// `Δ`: signed sum of deletions, the `i`th (from 1) with sign `(-1)^i`.
    pub fn deletion(&self, x: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero(x.alphabet);
        for (w, c) in &x.terms {
            for i in 0..w.len() {
                let mut v = w.clone();
                v.remove(i);
                let s = if i % 2 == 0 { -c.clone() } else { c.clone() };
                out.add_term(v, s);
            }
        }
        out
    }

    /// `ξ(w₁⊗⋯⊗w_k) = w₁ ⊗ w₁w₂ ⊗ ⋯ ⊗ w₁⋯w_{k-1}`.
    pub fn xi(&self, x: &TensorElement) -> Result<TensorElement> {
        let x = self.to_group_letters(x)?;
        let tb = self.table()?;
        let mut out = TensorElement::zero(Alphabet::Group);
        for (w, c) in &x.terms {
            let mut acc = tb.identity;
            let mut v = Vec::with_capacity(w.len().saturating_sub(1));
            for &a in &w[..w.len().saturating_sub(1)] {
                acc = tb.mul(acc, a);
                v.push(acc);
            }
            out.add_term(v, c.clone());
        }
        Ok(out)
    }

    /// Letterwise conjugation `x ↦ g x g⁻¹`.
    pub fn gamma(&self, x: &TensorElement, g: &GroupElement) -> Result<TensorElement> {
        let mut out = TensorElement::zero(x.alphabet);
        match x.alphabet {
            Alphabet::Reflections => {
                for (w, c) in &x.terms {
                    out.add_term(w.iter().map(|&t| self.group.conjugate_inv(t, g)).collect(), c.clone());
                }
            }
            Alphabet::Group => {
                let tb = self.table()?;
                let gi = tb.inv(tb.index_of(g));
                for (w, c) in &x.terms {
                    out.add_term(w.iter().map(|&a| tb.conj(a, gi)).collect(), c.clone());
                }
            }
            Alphabet::Flats => return Err(Error::Argument("flats carry no group action".into())),
        }
        Ok(out)
    }

    /// Strict chains with `len` elements in `NC ∖ {e, c}`, as lattice indices.
    fn open_chains(&self, len: usize) -> Vec<Vec<usize>> {
        let (bot, top) = (self.nc.bottom(), self.nc.top());
        let inner: Vec<usize> = (0..self.nc.len()).filter(|&x| x != bot && x != top).collect();
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(ch) = stack.pop() {
            if ch.len() == len {
                out.push(ch);
                continue;
            }
            for &x in &inner {
                if ch.last().is_none_or(|&l| l != x && self.nc.leq(l, x)) {
                    let mut next = ch.clone();
                    next.push(x);
                    stack.push(next);
                }
            }
        }
        out.sort();
        out
    }

    /// The top reduced homology of `NC` and its identification with `N_{(c,n)}` through `ξ`.
    pub fn nc_top_homology(&self) -> Result<TopHomologyReport> {
        let n = self.group.rank();
        let tb = self.table()?;
        let top_chains = self.open_chains(n - 1);
        let lower_chains = if n >= 2 { self.open_chains(n - 2) } else { Vec::new() };
        let lower_index: HashMap<&Vec<usize>, usize> =
            lower_chains.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut delta = SparseMatrix::new(lower_chains.len(), top_chains.len());
        if n >= 2 {
            for (col, ch) in top_chains.iter().enumerate() {
                for i in 0..ch.len() {
                    let mut v = ch.clone();
                    v.remove(i);
                    delta.add(lower_index[&v], col, if i % 2 == 0 { 1 } else { -1 });
                }
            }
        }
        let dimension = top_chains.len() - delta.rank();

        // chain of lattice indices for a tensor of group letters
        let nc_of: HashMap<usize, usize> = (0..self.nc.len())
            .map(|i| (tb.index_of(self.nc.element(i)), i))
            .collect();
        let top_index: HashMap<&Vec<usize>, usize> =
            top_chains.iter().enumerate().map(|(i, c)| (c, i)).collect();

        let c = self.group.coxeter_element();
        let words = reduced_factorizations(self.group, c);
        let spanning: Vec<TensorElement> = words.iter().map(|w| self.shuffle_letters(w)).collect();
        let nichols_dim = rank_of(&spanning);

        let mut images = Vec::new();
        let mut in_kernel = true;
        for x in &spanning {
            let y = self.xi(x)?;
            let mut vec: Vec<(usize, i64)> = Vec::new();
            for (w, coef) in &y.terms {
                let chain: Vec<usize> = w.iter().map(|a| nc_of[a]).collect();
                vec.push((top_index[&chain], q_to_i64(coef).expect("integral")));
            }
            let mut m = SparseMatrix::new(top_chains.len(), 1);
            for &(r, v) in &vec {
                m.add(r, 0, v);
            }
            if n >= 2 && !delta.mul(&m).is_zero() {
                in_kernel = false;
            }
            images.push(y);
        }
        let xi_rank = rank_of(&images);
        let injective = xi_rank == nichols_dim;

        let mut xi_nabla = true;
        let mut z_equivariant = true;
        for w in &words {
            let x = self.to_group_letters(&TensorElement::word(Alphabet::Reflections, w.clone()))?;
            if self.xi(&self.nabla(&x)?)? != self.deletion(&self.xi(&x)?) {
                xi_nabla = false;
            }
            if self.xi(&self.gamma(&x, c)?)? != self.gamma(&self.xi(&x)?, c)? {
                z_equivariant = false;
            }
        }
        Ok(TopHomologyReport {
            rank: n,
            chains: top_chains.len(),
            dimension,
            moebius: self.nc.moebius(self.nc.top()),
            nichols_dim,
            xi_rank,
            in_kernel,
            injective,
            xi_nabla,
            z_equivariant,
        })
    }

    /// Reduced words in the simple reflections, for every element of Coxeter length at most `max_len`.
    fn reduced_s_words(&self, max_len: usize) -> Result<Vec<(usize, Vec<Vec<ReflId>>)>> {
        let tb = self.table()?;
        let n = self.group.rank();
        let simples: Vec<ReflId> = (0..n).map(|i| self.group.simple_id(i)).collect();
        let mut layers: Vec<BTreeMap<usize, Vec<Vec<ReflId>>>> = vec![BTreeMap::from([(tb.identity, vec![vec![]])])];
        for _ in 0..max_len {
            let prev = layers.last().unwrap();
            let seen: std::collections::HashSet<usize> = layers.iter().flat_map(|l| l.keys().copied()).collect();
            let mut next: BTreeMap<usize, Vec<Vec<ReflId>>> = BTreeMap::new();
            for (&w, ws) in prev {
                for &s in &simples {
                    let x = tb.mul(w, tb.reflection(s));
                    if seen.contains(&x) {
                        continue;
                    }
                    let e = next.entry(x).or_default();
                    for word in ws {
                        let mut v = word.clone();
                        v.push(s);
                        e.push(v);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layers.push(next);
        }
        Ok(layers.into_iter().flat_map(|l| l.into_iter()).collect())
    }

    /// The subalgebra generated by simple reflections: `x_w` up to sign, independence and products.
    pub fn simple_subalgebra_check(&self, max_len: usize) -> Result<SimpleSubalgebraReport> {
        let tb = self.table()?;
        let data = self.reduced_s_words(max_len)?;
        let mut sign_consistent = true;
        let mut words_checked = 0;
        let mut basis: HashMap<usize, (usize, TensorElement)> = HashMap::new();
        for (w, words) in &data {
            let x = self.shuffle_letters(&words[0]);
            for other in &words[1..] {
                words_checked += 1;
                let y = self.shuffle_letters(other);
                let mut neg = y.clone();
                neg.terms.values_mut().for_each(|c| *c = -c.clone());
                if y != x && neg != x {
                    sign_consistent = false;
                }
            }
            basis.insert(*w, (words[0].len(), x));
        }
        let all: Vec<TensorElement> = data.iter().map(|(w, _)| basis[w].1.clone()).collect();
        let independent = rank_of(&all) == all.len() && all.iter().all(|x| !x.is_zero());

        let mut product_rule = true;
        let mut products_checked = 0;
        for (w, (lw, xw)) in &basis {
            for (v, (lv, xv)) in &basis {
                if lw + lv > max_len {
                    continue;
                }
                products_checked += 1;
                let p = self.twisted_shuffle(xw, xv)?;
                let wv = tb.mul(*w, *v);
                match basis.get(&wv) {
                    Some((l, target)) if *l == lw + lv => {
                        let mut neg = target.clone();
                        neg.terms.values_mut().for_each(|c| *c = -c.clone());
                        if p != *target && p != neg {
                            product_rule = false;
                        }
                    }
                    _ => {
                        if !p.is_zero() {
                            product_rule = false;
                        }
                    }
                }
            }
        }
        Ok(SimpleSubalgebraReport {
            elements: basis.len(),
            words_checked,
            sign_consistent,
            independent,
            products_checked,
            product_rule,
        })
    }

    /// `ς(t ⊗ u) = -u ⊗ t^u` applied at positions `(i, i+1)`.
    pub fn braiding_at(&self, x: &TensorElement, i: usize) -> TensorElement {
        let mut out = TensorElement::zero(Alphabet::Reflections);
        for (w, c) in &x.terms {
            let mut v = w.clone();
            v[i] = w[i + 1];
            v[i + 1] = self.conj_reflection(w[i], w[i + 1]);
            out.add_term(v, -c.clone());
        }
        out
    }

    /// Triples of reflections on which the braid relation for `ς` fails.
    pub fn yang_baxter_violations(&self) -> usize {
        let nt = self.group.num_reflections();
        let mut bad = 0;
        for a in 0..nt {
            for b in 0..nt {
                for c in 0..nt {
                    let x = TensorElement::word(Alphabet::Reflections, vec![a, b, c]);
                    let lhs = self.braiding_at(&self.braiding_at(&self.braiding_at(&x, 0), 1), 0);
                    let rhs = self.braiding_at(&self.braiding_at(&self.braiding_at(&x, 1), 0), 1);
                    if lhs != rhs {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }
}

/// Rank of a family of tensors with integral coefficients.
pub fn rank_of(vectors: &[TensorElement]) -> usize {
    let mut cols: HashMap<&Vec<usize>, usize> = HashMap::new();
    for x in vectors {
        for w in x.terms.keys() {
            let k = cols.len();
            cols.entry(w).or_insert(k);
        }
    }
    let mut m = SparseMatrix::new(vectors.len(), cols.len());
    for (r, x) in vectors.iter().enumerate() {
        for (w, c) in &x.terms {
            let v = q_to_i64(c).expect("integral coefficients");
            m.add(r, cols[w], v);
        }
    }
    m.rank()
}

/// Whether every coefficient is an integer of absolute value at most one.
pub fn is_unit_valued(x: &TensorElement) -> bool {
    x.terms.values().all(|c| c.is_integer() && c.abs() <= Q::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    struct Ctx {
        g: CoxeterGroup,
        nc: NcLattice,
        pc: PositiveComplex,
    }

    fn setup(s: &str) -> Ctx {
        let g = CoxeterGroup::build(s.parse().unwrap()).unwrap();
        let nc = NcLattice::build(&g).unwrap();
        let pc = PositiveComplex::build(&g, &nc).unwrap();
        Ctx { g, nc, pc }
    }

    fn word(w: &[usize]) -> TensorElement {
        TensorElement::word(Alphabet::Reflections, w.to_vec())
    }

    #[test]
    fn shuffle_examples() {
        let c = setup("A3");
        let nic = Nichols::new(&c.g, &c.nc, &c.pc);
        for t in 0..c.g.num_reflections() {
            assert!(nic.shuffle_letters(&[t, t]).is_zero());
        }
        let (t1, t2, u1, u2) = (0, 3, 1, 5);
        let got = nic.twisted_shuffle(&word(&[t1, t2]), &word(&[u1, u2])).unwrap();
        let cj = |t: usize, us: &[usize]| us.iter().fold(t, |acc, &u| nic.conj_reflection(acc, u));
        let mut expected = TensorElement::zero(Alphabet::Reflections);
        expected.add_term(vec![t1, t2, u1, u2], q(1));
        expected.add_term(vec![t1, u1, cj(t2, &[u1]), u2], q(-1));
        expected.add_term(vec![t1, u1, u2, cj(t2, &[u1, u2])], q(1));
        expected.add_term(vec![u1, cj(t1, &[u1]), cj(t2, &[u1]), u2], q(1));
        expected.add_term(vec![u1, cj(t1, &[u1]), u2, cj(t2, &[u1, u2])], q(-1));
        expected.add_term(vec![u1, u2, cj(t1, &[u1, u2]), cj(t2, &[u1, u2])], q(1));
        assert_eq!(got, expected);
        let x = word(&[2, 4]);
        assert_eq!(nic.twisted_shuffle(&x, &TensorElement::empty()).unwrap(), x);
        assert_eq!(nic.twisted_shuffle(&TensorElement::empty(), &x).unwrap(), x);
    }

    #[test]
    fn component_dims() {
        let c = setup("A3");
        let nic = Nichols::new(&c.g, &c.nc, &c.pc);
        let t = &c.g.reflection(0).element;
        assert_eq!(nic.component_dim(t, 1, 100).unwrap(), 1);
        assert_eq!(nic.component_dim(t, 2, 1000).unwrap(), 0);
        assert_eq!(nic.component_dim(c.g.coxeter_element(), 3, 1000).unwrap(), 5);
        assert_eq!(nic.component_dim(c.g.coxeter_element(), 2, 1000).unwrap(), 0);
        assert!(nic.component_dim(c.g.coxeter_element(), 3, 3).is_err());
    }

    #[test]
    fn projection() {
        let c = setup("A3");
        let nic = Nichols::new(&c.g, &c.nc, &c.pc);
        let top = c.pc.faces_with_nc(c.nc.top())[0];
        let x = nic.shuffle_letters(&c.pc.face(top).verts);
        assert_eq!(nic.quotient_project(&x).unwrap(), x);
        let nt = c.g.num_reflections();
        for t in 0..nt {
            for u in 0..nt {
                let tu = c.g.product(&[t, u]);
                if t != u && !c.g.leq_t(&tu, c.g.coxeter_element()) {
                    let x = nic.shuffle_letters(&[t, u]);
                    assert!(!x.is_zero());
                    assert!(nic.quotient_project(&x).unwrap().is_zero());
                }
            }
        }
        let x = nic.shuffle_letters(&[0, 1, 0]);
        assert!(nic.quotient_project(&x).unwrap().is_zero());
        let mut mixed = word(&[0]);
        mixed.add(&word(&[0, 1]), &q(1));
        assert!(nic.quotient_project(&mixed).is_err());
    }

    #[test]
    fn psi_a3_b3() {
        for s in ["A3", "A3:2,1,3", "B3", "A2"] {
            let c = setup(s);
            let nic = Nichols::new(&c.g, &c.nc, &c.pc);
            let rep = nic.psi_check().unwrap();
            assert!(rep.passed(), "{s}: {rep:?}");
            if s == "A3" {
                assert!(!rep.support_on_faces);
            }
        }
    }

    #[test]
    fn nabla_and_xi() {
        let c = setup("A2");
        let nic = Nichols::new(&c.g, &c.nc, &c.pc);
        let tb = nic.table().unwrap();
        assert!(nic.nabla(&word(&[1])).unwrap().is_zero());
        let got = nic.nabla(&word(&[0, 1])).unwrap();
        let prod = tb.mul(tb.reflection(0), tb.reflection(1));
        let mut expected = TensorElement::zero(Alphabet::Group);
        expected.add_term(vec![prod], q(-1));
        assert_eq!(got, expected);
        assert!(nic.nabla(&nic.shuffle_letters(&[0, 1, 2])).unwrap().is_zero());
    }

    #[test]
    fn top_homology() {
        for (s, d) in [("A1", 1), ("A2", 2), ("A3", 5), ("B3", 10)] {
            let c = setup(s);
            let nic = Nichols::new(&c.g, &c.nc, &c.pc);
            let rep = nic.nc_top_homology().unwrap();
            assert!(rep.passed(), "{s}: {rep:?}");
            assert_eq!(rep.dimension, d, "{s}");
        }
    }

    #[test]
    fn simple_subalgebra() {
        let c = setup("A2");
        let nic = Nichols::new(&c.g, &c.nc, &c.pc);
        let rep = nic.simple_subalgebra_check(6).unwrap();
        assert_eq!(rep.elements, 6);
        assert!(rep.passed(), "{rep:?}");
        let c = setup("A3");
        let nic = Nichols::new(&c.g, &c.nc, &c.pc);
        let rep = nic.simple_subalgebra_check(4).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn yang_baxter() {
        let c = setup("A2");
        let nic = Nichols::new(&c.g, &c.nc, &c.pc);
        assert_eq!(nic.yang_baxter_violations(), 0);
    }
}
