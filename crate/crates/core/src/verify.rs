//! Whole-group consistency checks, one per structural statement.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::cluster::{
    c_compatibility_violation, reflection_ordering_violation, PositiveComplex,
    ReflectionOrdering,
};
use crate::dual::DualAlgebra;
use crate::error::Result;
use crate::garside::{series_inverse, DualMonoid};
use crate::group::{CoxeterGroup, GroupSpec, ReflId};
use crate::linalg::{int_rank, q_to_i64};
use crate::nc::{hurwitz_orbit, reduced_factorizations, NcLattice};
use crate::nichols::{Nichols, MAX_TABLE_ORDER};
use crate::os::{lambda_shuffle_check, os_dims, IntersectionLattice};
use crate::resolution::Resolution;

/// A group together with its lattice and positive complex.
pub struct Context {
    pub group: CoxeterGroup,
    pub nc: NcLattice,
    pub complex: PositiveComplex,
}

impl Context {
    pub fn build(spec: GroupSpec) -> Result<Self> {
        let group = CoxeterGroup::build(spec)?;
        let nc = NcLattice::build(&group)?;
        let complex = PositiveComplex::build(&group, &nc)?;
        Ok(Self { group, nc, complex })
    }

    /// Uses the given reflection ordering instead of the sorting-word one.
    pub fn with_order(spec: GroupSpec, names: &[&str]) -> Result<Self> {
        let group = CoxeterGroup::build(spec)?;
        let nc = NcLattice::build(&group)?;
        let ord = ReflectionOrdering::from_names(&group, names)?;
        let complex = PositiveComplex::with_order(&group, &nc, ord)?;
        Ok(Self { group, nc, complex })
    }

    /// `h = 2|T|/n`.
    pub fn coxeter_number(&self) -> usize {
        2 * self.group.num_reflections() / self.group.rank()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Passed,
    Failed,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub max_deg: usize,
    pub series_deg: usize,
    pub seed: u64,
    pub lambda_pairs: usize,
    pub confluence_words: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            max_deg: 4,
            series_deg: 6,
            seed: 1,
            lambda_pairs: 1000,
            confluence_words: 200,
        }
    }
}

fn run(criterion: u8, name: &'static str, f: impl FnOnce() -> Result<(Status, String)>) -> Check {
    let start = Instant::now();
    let (status, detail) = match f() {
        Ok(r) => r,
        Err(e) => (Status::Failed, e.to_string()),
    };
    Check {
        criterion,
        name,
        status,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

fn verdict(ok: bool, detail: String) -> (Status, String) {
    (if ok { Status::Passed } else { Status::Failed }, detail)
}

pub fn hilbert_roundtrip(ctx: &Context, max_deg: usize) -> Result<(Status, String)> {
    let dm = DualMonoid::new(&ctx.group, &ctx.nc);
    let growth = dm.growth_series(max_deg);
    let inverse = series_inverse(&ctx.nc.moebius_polynomial(), max_deg);
    let hilb = DualAlgebra::new(&ctx.group, &ctx.nc, &ctx.complex).hilbert();
    let product_ok = (0..=max_deg).all(|d| {
        let s: i128 = (0..=d.min(hilb.len() - 1))
            .map(|k| {
                let sign = if (d - k) % 2 == 0 { 1 } else { -1 };
                sign * hilb[k] as i128 * growth[d - k]
            })
            .sum();
        s == i128::from(d == 0)
    });
    Ok(verdict(
        growth == inverse && product_ok,
        format!("growth {growth:?}, hilbert {hilb:?}"),
    ))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
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
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Facets are the positive c-clusters: pairwise nonnegative sets multiplying to `c` in some order.
pub fn facets_check(ctx: &Context) -> Result<(Status, String)> {
    let g = &ctx.group;
    let n = g.rank();
    let ord = &ctx.complex.order;
    let compatible = reflection_ordering_violation(g, ord)?.is_none()
        && c_compatibility_violation(g, &ctx.nc, ord).is_none();
    let facets: BTreeSet<Vec<ReflId>> = ctx
        .complex
        .facets
        .iter()
        .map(|f| {
            let mut v = f.clone();
            v.sort();
            v
        })
        .collect();
    let count_ok = facets.len() as i64 == ctx.nc.moebius(ctx.nc.top()).abs();
    let nt = g.num_reflections();
    if binomial(nt, n) > 200_000 {
        return Ok(verdict(
            compatible && count_ok,
            format!("{} facets; exhaustive cluster search skipped", facets.len()),
        ));
    }
    let c = g.coxeter_element();
    let mut clusters = BTreeSet::new();
    for set in subsets(nt, n) {
        if !set.iter().enumerate().all(|(i, &a)| set[i + 1..].iter().all(|&b| g.inner(a, b) >= 0)) {
            continue;
        }
        let mut found = false;
        let mut items = set.clone();
        crate::group::permutations(&mut items, 0, &mut |p: &[ReflId]| {
            found |= g.product(p) == *c;
        });
        if found {
            clusters.insert(set);
        }
    }
    Ok(verdict(
        compatible && count_ok && clusters == facets,
        format!("{} facets, {} clusters by search", facets.len(), clusters.len()),
    ))
}

pub fn homology_check(ctx: &Context) -> Result<(Status, String)> {
    let mut bad = Vec::new();
    for w in 1..ctx.nc.len() {
        let sub = ctx.complex.subcomplex(&ctx.nc, w)?;
        let betti = ctx.complex.chain_complex(&sub).reduced_betti()?;
        if betti.iter().any(|&b| b != 0) {
            bad.push(w);
        }
    }
    Ok(verdict(
        bad.is_empty(),
        format!("{} subcomplexes, nonacyclic: {bad:?}", ctx.nc.len() - 1),
    ))
}

pub fn resolution_check(ctx: &Context, max_deg: usize) -> Result<(Status, String)> {
    let res = Resolution::new(&ctx.group, &ctx.nc, &ctx.complex);
    let reports = res.graded_exactness(max_deg)?;
    let ok = reports
        .iter()
        .all(|r| r.exact && r.minimal && r.d_squared_zero && r.theta_split && r.euler_characteristic == 0);
    let dims: Vec<usize> = reports.iter().map(|r| r.dims.iter().sum()).collect();
    Ok(verdict(ok, format!("degrees 1..={max_deg}, total dims {dims:?}")))
}

pub fn product_check(ctx: &Context) -> Result<(Status, String)> {
    let alg = DualAlgebra::new(&ctx.group, &ctx.nc, &ctx.complex);
    let faces = ctx.complex.faces();
    let mut pairs = 0;
    let mut unit = true;
    for f in faces {
        for h in faces {
            let mut word = f.verts.clone();
            word.extend_from_slice(&h.verts);
            let a = alg.rewrite(&word)?;
            let b = alg.multiply_geometric(&word)?;
            if a != b {
                return Ok(verdict(false, format!("mismatch on {word:?}")));
            }
            unit &= a.terms().all(|(_, c)| q_to_i64(c).is_some_and(|x| x.abs() <= 1));
            pairs += 1;
        }
    }
    Ok(verdict(unit, format!("{pairs} ordered pairs")))
}

pub fn basis_check(ctx: &Context) -> Result<(Status, String)> {
    let bad: Vec<usize> = (0..ctx.nc.len())
        .filter(|&w| ctx.complex.faces_with_nc(w).len() as i64 != ctx.nc.moebius(w).abs())
        .collect();
    Ok(verdict(bad.is_empty(), format!("{} elements, mismatches {bad:?}", ctx.nc.len())))
}

pub fn nichols_check(ctx: &Context) -> Result<(Status, String)> {
    let nic = Nichols::new(&ctx.group, &ctx.nc, &ctx.complex);
    let rep = nic.psi_check()?;
    let top = rep.dims.iter().find(|d| d.w == ctx.nc.top()).map_or(0, |d| d.nichols_dim);
    let hilb = ctx.complex.f_vector();
    Ok(verdict(
        rep.passed() && top == *hilb.last().unwrap(),
        format!("{} faces, dim N_(c,n) = {top}", rep.faces_checked),
    ))
}

pub fn character_check(ctx: &Context, max_deg: usize) -> Result<(Status, String)> {
    let alg = DualAlgebra::new(&ctx.group, &ctx.nc, &ctx.complex);
    let dm = DualMonoid::new(&ctx.group, &ctx.nc);
    let h = ctx.coxeter_number() as i64;
    for i in 0..h {
        let tr = alg.cyclic_character(i)?;
        if tr != alg.fixed_moebius_character(i) {
            return Ok(verdict(false, format!("trace mismatch at i = {i}: {tr:?}")));
        }
        let fixed = ctx.nc.fixed_subposet(i).moebius_polynomial(&ctx.nc);
        if dm.fixed_growth(i, max_deg) != series_inverse(&fixed, max_deg) {
            return Ok(verdict(false, format!("fixed growth mismatch at i = {i}")));
        }
    }
    Ok(verdict(true, format!("i = 0..{}", h - 1)))
}

pub fn top_homology_check(ctx: &Context) -> Result<(Status, String)> {
    let order: usize = ctx.group.elements().len();
    if order > MAX_TABLE_ORDER {
        return Ok((Status::Skipped, format!("group order {order} exceeds table limit")));
    }
    let nic = Nichols::new(&ctx.group, &ctx.nc, &ctx.complex);
    let rep = nic.nc_top_homology()?;
    Ok(verdict(
        rep.passed(),
        format!("dim {} (|mu(c)| = {})", rep.dimension, rep.moebius.abs()),
    ))
}

pub fn os_check(ctx: &Context, pairs: usize, seed: u64) -> Result<(Status, String)> {
    let nic = Nichols::new(&ctx.group, &ctx.nc, &ctx.complex);
    let lattice = IntersectionLattice::build(&ctx.group)?;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let bad = lambda_shuffle_check(&nic, &lattice, pairs, 3, &mut rng)?;
    let rep = os_dims(&nic, &lattice);
    Ok(verdict(
        bad == 0 && rep.passed(),
        format!("{pairs} pairs, OS totals {:?}", rep.totals),
    ))
}

pub fn property_check(ctx: &Context, words: usize, seed: u64) -> Result<(Status, String)> {
    let g = &ctx.group;
    for w in 0..ctx.nc.len() {
        let facts = reduced_factorizations(g, ctx.nc.element(w));
        let orbit = hurwitz_orbit(g, &facts[0])?;
        if orbit.len() != facts.len() {
            return Ok(verdict(false, format!("Hurwitz action not transitive at {w}")));
        }
    }
    for f in ctx.complex.faces() {
        let roots: Vec<Vec<i64>> = f.verts.iter().map(|&t| g.root(t).to_vec()).collect();
        if int_rank(&roots) != f.verts.len() {
            return Ok(verdict(false, format!("dependent roots on face {:?}", f.verts)));
        }
    }
    let dm = DualMonoid::new(g, &ctx.nc);
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let nt = g.num_reflections();
    for _ in 0..words {
        let len = rng.gen_range(1..=5);
        let word: Vec<ReflId> = (0..len).map(|_| rng.gen_range(0..nt)).collect();
        let nf = dm.normal_form(&word);
        for _ in 0..5 {
            if dm.normal_form_random(&word, &mut rng) != nf {
                return Ok(verdict(false, format!("confluence fails on {word:?}")));
            }
        }
    }
    let nic = Nichols::new(g, &ctx.nc, &ctx.complex);
    let yb = nic.yang_baxter_violations();
    Ok(verdict(
        yb == 0,
        format!("Hurwitz on {} elements, {} faces, {words} words", ctx.nc.len(), ctx.complex.faces().len()),
    ))
}

pub const CRITERIA: usize = 11;

/// Runs criterion `k` (1-based) for one group.
pub fn run_criterion(k: usize, ctx: &Context, opts: &Options) -> Check {
    match k {
        1 => run(1, "hilbert-growth", || hilbert_roundtrip(ctx, opts.series_deg)),
        2 => run(2, "facets", || facets_check(ctx)),
        3 => run(3, "homology-vanishing", || homology_check(ctx)),
        4 => run(4, "resolution-exactness", || resolution_check(ctx, opts.max_deg)),
        5 => run(5, "product-rule", || product_check(ctx)),
        6 => run(6, "basis-dimensions", || basis_check(ctx)),
        7 => run(7, "nichols-isomorphism", || nichols_check(ctx)),
        8 => run(8, "cyclic-characters", || character_check(ctx, 5)),
        9 => run(9, "top-homology", || top_homology_check(ctx)),
        10 => run(10, "orlik-solomon", || os_check(ctx, opts.lambda_pairs, opts.seed)),
        _ => run(11, "properties", || property_check(ctx, opts.confluence_words, opts.seed)),
    }
}

/// Every check for one group, in criterion order, spread over `threads` workers.
pub fn verify_all(ctx: &Context, opts: &Options, threads: usize) -> Vec<Check> {
    let threads = threads.clamp(1, CRITERIA);
    if threads == 1 {
        return (1..=CRITERIA).map(|k| run_criterion(k, ctx, opts)).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(1);
    let mut out: Vec<Check> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                s.spawn(|| {
                    let mut mine = Vec::new();
                    loop {
                        let k = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        if k > CRITERIA {
                            break;
                        }
                        mine.push(run_criterion(k, ctx, opts));
                    }
                    mine
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    out.sort_by_key(|c| c.criterion);
    out
}
