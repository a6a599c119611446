//! The intersection lattice of the reflection arrangement and the Orlik–Solomon algebra as λ-images.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::group::{CoxeterGroup, ReflId};
use crate::linalg::{nullspace, rank_q, rref, Q};
use crate::nc::NcLattice;
use crate::nichols::{rank_of, Alphabet, Nichols, TensorElement};

/// A flat, stored through the span of the roots of the hyperplanes containing it.
#[derive(Clone, Debug)]
pub struct Flat {
    /// Reduced row-echelon basis of the normal space.
    pub normals: Vec<Vec<Q>>,
    /// Basis of the flat itself, in simple-root coordinates.
    pub basis: Vec<Vec<Q>>,
    /// Reflections whose hyperplane contains the flat.
    pub reflections: Vec<ReflId>,
}

impl Flat {
    pub fn codim(&self) -> usize {
        self.normals.len()
    }
}

pub struct IntersectionLattice {
    flats: Vec<Flat>,
    meet_hyperplane: Vec<Vec<usize>>,
    moebius: Vec<i64>,
    leq: Vec<Vec<bool>>,
}

impl IntersectionLattice {
    pub fn build(g: &CoxeterGroup) -> Result<Self> {
        let nt = g.num_reflections();
        let roots = g.roots_q(&(0..nt).collect::<Vec<_>>());
        let gram: Vec<Vec<Q>> = g
            .gram()
            .iter()
            .map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect())
            .collect();
        let make = |normals: Vec<Vec<Q>>| -> Flat {
            let forms: Vec<Vec<Q>> = normals
                .iter()
                .map(|v| {
                    (0..gram.len())
                        .map(|j| v.iter().zip(&gram).map(|(a, row)| a * &row[j]).sum())
                        .collect()
                })
                .collect();
            let basis = nullspace(&forms, gram.len());
            let reflections = (0..nt)
                .filter(|&t| {
                    let mut rows = normals.clone();
                    rows.push(roots[t].clone());
                    rank_q(&rows) == normals.len()
                })
                .collect();
            Flat {
                normals,
                basis,
                reflections,
            }
        };
        let mut flats = vec![make(Vec::new())];
        let mut index: HashMap<Vec<Vec<Q>>, usize> = HashMap::from([(Vec::new(), 0)]);
        let mut meet_hyperplane: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let mut row = vec![0; nt];
            for t in 0..nt {
                let mut rows = flats[x].normals.clone();
                rows.push(roots[t].clone());
                let key = rref(&rows);
                let y = match index.get(&key) {
                    Some(&y) => y,
                    None => {
                        flats.push(make(key.clone()));
                        let y = flats.len() - 1;
                        index.insert(key, y);
                        queue.push_back(y);
                        y
                    }
                };
                row[t] = y;
            }
            if meet_hyperplane.len() <= x {
                meet_hyperplane.resize(x + 1, Vec::new());
            }
            meet_hyperplane[x] = row;
        }
        let nf = flats.len();
        let leq: Vec<Vec<bool>> = (0..nf)
            .map(|x| {
                (0..nf)
                    .map(|y| {
                        let mut rows = flats[y].normals.clone();
                        rows.extend(flats[x].normals.iter().cloned());
                        rank_q(&rows) == flats[y].codim()
                    })
                    .collect()
            })
            .collect();
        let mut order: Vec<usize> = (0..nf).collect();
        order.sort_by_key(|&x| flats[x].codim());
        let mut moebius = vec![0i64; nf];
        for &y in &order {
            if y == 0 {
                moebius[y] = 1;
                continue;
            }
            moebius[y] = -(0..nf).filter(|&x| x != y && leq[x][y]).map(|x| moebius[x]).sum::<i64>();
        }
        Ok(Self {
            flats,
            meet_hyperplane,
            moebius,
            leq,
        })
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn flat(&self, x: usize) -> &Flat {
        &self.flats[x]
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn codim(&self, x: usize) -> usize {
        self.flats[x].codim()
    }

    pub fn moebius(&self, x: usize) -> i64 {
        self.moebius[x]
    }

    /// Reverse inclusion: `x ≤ y` iff `y ⊆ x`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn hyperplane(&self, t: ReflId) -> usize {
        self.meet_hyperplane[0][t]
    }

    /// `x ∩ H_t`.
    pub fn meet_hyperplane(&self, x: usize, t: ReflId) -> usize {
        self.meet_hyperplane[x][t]
    }

    pub fn intersection(&self, ts: &[ReflId]) -> usize {
        ts.iter().fold(0, |x, &t| self.meet_hyperplane(x, t))
    }

    /// `Σ |μ(x)| q^{codim x}`.
    pub fn poincare(&self) -> Vec<i64> {
        let top = self.flats.iter().map(|f| f.codim()).max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for x in 0..self.len() {
            out[self.codim(x)] += self.moebius(x).abs();
        }
        out
    }

    /// Number of flats per codimension.
    pub fn rank_sizes(&self) -> Vec<usize> {
        let top = self.flats.iter().map(|f| f.codim()).max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for f in &self.flats {
            out[f.codim()] += 1;
        }
        out
    }

    /// `λ(t₁⊗⋯⊗t_j) = H_{t₁} ⊗ (H_{t₁}∩H_{t₂}) ⊗ ⋯`, extended linearly.
    pub fn lambda(&self, x: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero(Alphabet::Flats);
        for (w, c) in &x.terms {
            let mut flag = Vec::with_capacity(w.len());
            let mut acc = 0;
            for &t in w {
                acc = self.meet_hyperplane(acc, t);
                flag.push(acc);
            }
            out.add_term(flag, c.clone());
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OsFlat {
    pub flat: usize,
    pub codim: usize,
    pub moebius: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OsReport {
    pub flats: Vec<OsFlat>,
    /// `dim OS_k`.
    pub totals: Vec<usize>,
    pub poincare: Vec<i64>,
    pub dims_match: bool,
    pub dependent_checked: usize,
    pub dependent_vanish: bool,
}

impl OsReport {
    pub fn passed(&self) -> bool {
        self.dims_match && self.dependent_vanish
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Dimensions of the Orlik–Solomon pieces `OS_x`, spanned by `λ(t₁ ⧢ ⋯ ⧢ t_k)` with `∩H_{t_i} = x`.
pub fn os_dims(nic: &Nichols, lattice: &IntersectionLattice) -> OsReport {
    let nt = nic.group.num_reflections();
    let n = nic.group.rank();
    let mut by_flat: BTreeMap<usize, Vec<TensorElement>> = BTreeMap::new();
    let mut dependent_checked = 0;
    let mut dependent_vanish = true;
    for k in 0..=(n + 1).min(nt) {
        for set in subsets(nt, k) {
            let x = lattice.intersection(&set);
            let image = lattice.lambda(&nic.wedge_letters(&set));
            if lattice.codim(x) == k {
                by_flat.entry(x).or_default().push(image);
            } else {
                dependent_checked += 1;
                if !image.is_zero() {
                    dependent_vanish = false;
                }
            }
        }
    }
    let flats: Vec<OsFlat> = (0..lattice.len())
        .map(|x| OsFlat {
            flat: x,
            codim: lattice.codim(x),
            moebius: lattice.moebius(x),
            dim: by_flat.get(&x).map_or(0, |v| rank_of(v)),
        })
        .collect();
    let poincare = lattice.poincare();
    let mut totals = vec![0; poincare.len()];
    for f in &flats {
        totals[f.codim] += f.dim;
    }
    let dims_match = flats.iter().all(|f| f.dim as i64 == f.moebius.abs());
    OsReport {
        flats,
        totals,
        poincare,
        dims_match,
        dependent_checked,
        dependent_vanish,
    }
}

fn random_word(rng: &mut impl Rng, nt: usize, max_len: usize) -> TensorElement {
    let len = rng.gen_range(1..=max_len);
    TensorElement::word(
        Alphabet::Reflections,
        (0..len).map(|_| rng.gen_range(0..nt)).collect(),
    )
}

/// Random pairs `(u, v)` of words; returns how many violate `λ(u ⧢ v) = λ(u ⧢̃ v)`.
pub fn lambda_shuffle_check(
    nic: &Nichols,
    lattice: &IntersectionLattice,
    pairs: usize,
    max_len: usize,
    rng: &mut impl Rng,
) -> Result<usize> {
    let nt = nic.group.num_reflections();
    let mut bad = 0;
    for _ in 0..pairs {
        let u = random_word(rng, nt, max_len);
        let v = random_word(rng, nt, max_len);
        let plain = lattice.lambda(&nic.shuffle(&u, &v)?);
        let twisted = lattice.lambda(&nic.twisted_shuffle(&u, &v)?);
        if plain != twisted {
            bad += 1;
        }
    }
    Ok(bad)
}

/// One row of the side-by-side comparison of `NC(W)` and `L(W)`.
#[derive(Clone, Debug, Serialize)]
pub struct ParallelRow {
    pub rank: usize,
    pub nc_elements: usize,
    pub nc_moebius: i64,
    pub flats: usize,
    pub flat_moebius: i64,
}

pub fn parallel_table(nc: &NcLattice, lattice: &IntersectionLattice) -> Vec<ParallelRow> {
    let nc_sizes = nc.rank_sizes();
    let nc_mu = nc.moebius_polynomial();
    let l_sizes = lattice.rank_sizes();
    let l_mu = lattice.poincare();
    (0..nc_sizes.len().max(l_sizes.len()))
        .map(|k| ParallelRow {
            rank: k,
            nc_elements: nc_sizes.get(k).copied().unwrap_or(0),
            nc_moebius: nc_mu.get(k).map_or(0, |m| m.abs()),
            flats: l_sizes.get(k).copied().unwrap_or(0),
            flat_moebius: l_mu.get(k).copied().unwrap_or(0),
        })
        .collect()
}
