//! The linear resolution of the ground field over the dual braid monoid algebra.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::cluster::{ChainComplex, PositiveComplex};
use crate::error::{Error, Result};
use crate::garside::{DualMonoid, MonoidElement};
use crate::group::{CoxeterGroup, ReflId};
use crate::linalg::{SparseMatrix, Q};
use crate::nc::NcLattice;

/// An element of `A ⊗ k^{Δ⁺_j}`: monoid element and face id to coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModElement {
    pub index: isize,
    pub terms: BTreeMap<(MonoidElement, usize), Q>,
}

impl FreeModElement {
    pub fn zero(index: isize) -> Self {
        Self {
            index,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(index: isize, b: MonoidElement, face: usize) -> Self {
        Self {
            index,
            terms: BTreeMap::from([((b, face), Q::one())]),
        }
    }

    pub fn add_term(&mut self, b: MonoidElement, face: usize, c: Q) {
        let key = (b, face);
        let e = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub degree: usize,
    /// Positions `-1, 0, ..., n-1`.
    pub positions: Vec<isize>,
    pub dims: Vec<usize>,
    /// `ranks[k]` = rank of the boundary leaving position `positions[k]`.
    pub ranks: Vec<usize>,
    pub exact: bool,
    pub minimal: bool,
    pub d_squared_zero: bool,
    pub theta_split: bool,
    pub euler_characteristic: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaReport {
    /// Lattice index of the greatest common right divisor with `c`.
    pub w: usize,
    /// `dim Θ_j(b)` for `j = -1..n-1`.
    pub dims: Vec<usize>,
    pub injective: bool,
    pub image_matches: bool,
    pub commutes: bool,
    pub exact: bool,
}

impl ThetaReport {
    pub fn passed(&self) -> bool {
        self.injective && self.image_matches && self.commutes && self.exact
    }
}

pub struct Resolution<'a> {
    pub group: &'a CoxeterGroup,
    pub nc: &'a NcLattice,
    pub complex: &'a PositiveComplex,
    pub monoid: DualMonoid<'a>,
}

impl<'a> Resolution<'a> {
    pub fn new(group: &'a CoxeterGroup, nc: &'a NcLattice, complex: &'a PositiveComplex) -> Self {
        Self {
            group,
            nc,
            complex,
            monoid: DualMonoid::new(group, nc),
        }
    }

    /// `t_0 ⋯ t_{i-1} t_i t_{i-1} ⋯ t_0` for a face `t_0 ≻ ... ≻ t_j`.
    pub fn boundary_reflection(&self, verts: &[ReflId], i: usize) -> ReflId {
        let prefix = self.group.product(&verts[..i]);
        self.group.conjugate_inv(verts[i], &prefix)
    }

    /// Terms `(sign, t, face)` of `∂(1 ⊗ f)`: `Σ (-1)^i 𝐭 ⊗ (f ∖ t_i)`.
    pub fn boundary_terms(&self, face: usize) -> Vec<(i64, ReflId, usize)> {
        let verts = &self.complex.face(face).verts;
        (0..verts.len())
            .map(|i| {
                let mut rest = verts.clone();
                rest.remove(i);
                let sub = self.complex.face_id(&rest).expect("faces are closed under subsets");
                let sign = if i % 2 == 0 { 1 } else { -1 };
                (sign, self.boundary_reflection(verts, i), sub)
            })
            .collect()
    }

    pub fn boundary(&self, x: &FreeModElement) -> Result<FreeModElement> {
        let mut out = FreeModElement::zero(x.index - 1);
        for ((b, f), c) in &x.terms {
            if self.complex.face(*f).dim() != x.index {
                return Err(Error::Argument(format!(
                    "face {f} does not have dimension {}",
                    x.index
                )));
            }
            for (sign, t, sub) in self.boundary_terms(*f) {
                out.add_term(self.monoid.mul_atom(b, t), sub, c * Q::from_integer(sign.into()));
            }
        }
        Ok(out)
    }

    /// `𝐚 · nc(f)`, the Θ-block of a basis element.
    pub fn theta_key(&self, a: &MonoidElement, face: usize) -> MonoidElement {
        self.monoid.mul_simple(a, self.complex.face(face).nc)
    }

    /// Exactness of the resolution in total degree `d`.
    pub fn degree_report(&self, d: usize) -> Result<DegreeReport> {
        let n = self.group.rank();
        let by_deg: Vec<Vec<MonoidElement>> = (0..=d).map(|k| self.monoid.elements_of_degree(k)).collect();
        let index: Vec<HashMap<&MonoidElement, usize>> = by_deg
            .iter()
            .map(|els| els.iter().enumerate().map(|(i, e)| (e, i)).collect())
            .collect();
        // position j holds A_{d-j-1} ⊗ Δ⁺_j
        let positions: Vec<isize> = (-1..n as isize).filter(|&j| (j + 1) as usize <= d).collect();
        let faces_at = |j: isize| -> Vec<usize> { self.complex.faces_of_size((j + 1) as usize).collect() };
        let basis: Vec<Vec<(usize, usize)>> = positions
            .iter()
            .map(|&j| {
                let deg = d - (j + 1) as usize;
                let fs = faces_at(j);
                (0..by_deg[deg].len())
                    .flat_map(|a| fs.iter().map(move |&f| (a, f)))
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = basis.iter().map(|b| b.len()).collect();

        let mut minimal = true;
        let mut theta_split = true;
        let mut boundaries: Vec<SparseMatrix> = Vec::new();
        for (p, &j) in positions.iter().enumerate() {
            if j == -1 {
                // augmentation vanishes in positive degree
                boundaries.push(SparseMatrix::new(0, dims[p]));
                continue;
            }
            let deg = d - (j + 1) as usize;
            let target_deg = deg + 1;
            let target_index: HashMap<(usize, usize), usize> = basis[p - 1]
                .iter()
                .enumerate()
                .map(|(i, &k)| (k, i))
                .collect();
            let mut m = SparseMatrix::new(dims[p - 1], dims[p]);
            for (col, &(a, f)) in basis[p].iter().enumerate() {
                let b = &by_deg[deg][a];
                let key = self.theta_key(b, f);
                for (sign, t, sub) in self.boundary_terms(f) {
                    let bt = self.monoid.mul_atom(b, t);
                    if self.monoid.degree(&bt) != target_deg {
                        minimal = false;
                    }
                    if self.theta_key(&bt, sub) != key {
                        theta_split = false;
                    }
                    let row = target_index[&(index[target_deg][&bt], sub)];
                    m.add(row, col, sign);
                }
            }
            boundaries.push(m);
        }
        let d_squared_zero = (1..boundaries.len()).all(|p| {
            boundaries[p - 1].nrows == 0 || boundaries[p - 1].mul(&boundaries[p]).is_zero()
        });
        let ranks: Vec<usize> = boundaries.iter().map(|b| b.rank()).collect();
        let exact = (0..positions.len()).all(|p| {
            let incoming = ranks.get(p + 1).copied().unwrap_or(0);
            dims[p] == ranks[p] + incoming
        });
        let euler_characteristic = dims
            .iter()
            .zip(&positions)
            .map(|(&dim, &j)| if j % 2 == 0 { dim as i64 } else { -(dim as i64) })
            .sum();
        Ok(DegreeReport {
            degree: d,
            positions,
            dims,
            ranks,
            exact,
            minimal,
            d_squared_zero,
            theta_split,
            euler_characteristic,
        })
    }

    pub fn graded_exactness(&self, max_deg: usize) -> Result<Vec<DegreeReport>> {
        if max_deg == 0 {
            return Err(Error::Argument("maximal degree must be at least 1".into()));
        }
        (1..=max_deg).map(|d| self.degree_report(d)).collect()
    }

    /// Checks that `Θ(b)` is isomorphic, through `𝐚 ⊗ f ↦ f`, to the augmented chain
    /// complex of `Δ⁺(w)` with `𝐰 = gcrd(𝐛, 𝐜)`, and that it is exact.
    pub fn theta_check(&self, b: &MonoidElement) -> Result<ThetaReport> {
        if b.is_identity() {
            return Err(Error::Argument("Θ check needs b ≠ 1".into()));
        }
        let w = self.monoid.gcrd_with_c(b);
        let deg = self.monoid.degree(b);
        let n = self.group.rank();
        let mut members: Vec<(MonoidElement, usize)> = Vec::new();
        for size in 0..=n.min(deg) {
            let elems = self.monoid.elements_of_degree(deg - size);
            for f in self.complex.faces_of_size(size) {
                for a in &elems {
                    if self.theta_key(a, f) == *b {
                        members.push((a.clone(), f));
                    }
                }
            }
        }
        let mut dims = vec![0; n + 1];
        for (_, f) in &members {
            dims[self.complex.face(*f).verts.len()] += 1;
        }
        let mut faces: Vec<usize> = members.iter().map(|(_, f)| *f).collect();
        faces.sort();
        let before = faces.len();
        faces.dedup();
        let injective = faces.len() == before;
        let mut expected: Vec<usize> = (0..self.complex.faces().len())
            .filter(|&f| self.nc.leq(self.complex.face(f).nc, w))
            .collect();
        expected.sort();
        let image_matches = faces == expected;
        let by_face: HashMap<usize, &MonoidElement> = members.iter().map(|(a, f)| (*f, a)).collect();
        let commutes = members.iter().all(|(a, f)| {
            self.boundary_terms(*f).into_iter().all(|(_, t, sub)| {
                by_face
                    .get(&sub)
                    .is_some_and(|&a2| *a2 == self.monoid.mul_atom(a, t))
            })
        });
        let sub = self.complex.subcomplex(self.nc, w)?;
        let betti = self.complex.chain_complex(&sub).reduced_betti()?;
        let exact = betti.iter().all(|&x| x == 0);
        Ok(ThetaReport {
            w,
            dims,
            injective,
            image_matches,
            commutes,
            exact,
        })
    }
}

/// Reduced Betti numbers of `Δ⁺(w)` for every `w ≠ e`.
pub fn subcomplex_homology(
    nc: &NcLattice,
    complex: &PositiveComplex,
) -> Result<Vec<(usize, Vec<usize>)>> {
    (1..nc.len())
        .map(|w| {
            let sub = complex.subcomplex(nc, w)?;
            Ok((w, ChainComplex::from_faces(
                &sub.iter().map(|&f| complex.face(f).verts.clone()).collect::<Vec<_>>(),
            )
            .reduced_betti()?))
        })
        .collect()
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

    fn t(g: &CoxeterGroup, name: &str) -> ReflId {
        (0..g.num_reflections())
            .find(|&t| g.reflection_name(t) == name)
            .unwrap()
    }

    #[test]
    fn boundary_examples() {
        let c = setup("A3");
        let r = Resolution::new(&c.g, &c.nc, &c.pc);
        let (t12, t13, t23) = (t(&c.g, "(1,2)"), t(&c.g, "(1,3)"), t(&c.g, "(2,3)"));
        let empty = c.pc.face_id(&[]).unwrap();
        let single = c.pc.face_id(&[t12]).unwrap();
        let x = FreeModElement::basis(0, MonoidElement::identity(), single);
        let mut expected = FreeModElement::zero(-1);
        expected.add_term(r.monoid.atom(t12), empty, q(1));
        assert_eq!(r.boundary(&x).unwrap(), expected);

        let edge = c.pc.face_id(&[t13, t12]).unwrap();
        let x = FreeModElement::basis(1, MonoidElement::identity(), edge);
        let mut expected = FreeModElement::zero(0);
        expected.add_term(r.monoid.atom(t13), c.pc.face_id(&[t12]).unwrap(), q(1));
        expected.add_term(r.monoid.atom(t23), c.pc.face_id(&[t13]).unwrap(), q(-1));
        assert_eq!(r.boundary(&x).unwrap(), expected);
        assert!(r.boundary(&r.boundary(&x).unwrap()).unwrap().is_zero());
        assert!(r.boundary(&FreeModElement::basis(2, MonoidElement::identity(), edge)).is_err());
    }

    #[test]
    fn a3_exact_through_degree_three() {
        let c = setup("A3");
        let r = Resolution::new(&c.g, &c.nc, &c.pc);
        for rep in r.graded_exactness(3).unwrap() {
            assert!(rep.exact && rep.minimal && rep.d_squared_zero && rep.theta_split, "{rep:?}");
            assert_eq!(rep.euler_characteristic, 0);
        }
        let rep = r.degree_report(1).unwrap();
        assert_eq!(rep.dims, vec![6, 6]);
    }

    #[test]
    fn theta_examples() {
        let c = setup("A3");
        let r = Resolution::new(&c.g, &c.nc, &c.pc);
        let rep = r.theta_check(&r.monoid.garside_element()).unwrap();
        assert_eq!(rep.w, c.nc.top());
        assert_eq!(rep.dims, c.pc.f_vector());
        assert!(rep.passed());
        let t12 = t(&c.g, "(1,2)");
        let rep = r.theta_check(&r.monoid.atom(t12)).unwrap();
        assert_eq!(rep.w, c.nc.atom(t12));
        assert_eq!(rep.dims, vec![1, 1, 0, 0]);
        assert!(rep.passed());

        // right-divisor search at degree 2
        let b = r.monoid.normal_form(&[t12, t12]);
        let divisors: Vec<usize> = (1..c.nc.len())
            .filter(|&x| {
                let k = r.monoid.degree(&b) as isize - c.nc.rank(x) as isize;
                k >= 0
                    && r.monoid
                        .elements_of_degree(k as usize)
                        .iter()
                        .any(|a| r.monoid.mul_simple(a, x) == b)
            })
            .collect();
        let best = *divisors.iter().max_by_key(|&&x| c.nc.rank(x)).unwrap();
        let rep = r.theta_check(&b).unwrap();
        assert_eq!(rep.w, best);
        assert!(rep.passed());
        assert!(r.theta_check(&MonoidElement::identity()).is_err());
    }
}
