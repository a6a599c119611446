use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::sample::Index;

use dual_braid::cluster::cone_coordinates;
use dual_braid::dual::{DualAlgebra, DualElement};
use dual_braid::garside::{series_inverse, DualMonoid, MonoidElement};
use dual_braid::group::GroupSpec;
use dual_braid::linalg::{int_rank, q, Q};
use dual_braid::nc::{hurwitz_orbit, reduced_factorizations, NcLattice};
use dual_braid::nichols::{Nichols, TensorElement};
use dual_braid::os::IntersectionLattice;
use dual_braid::resolution::{FreeModElement, Resolution};
use dual_braid::verify::Context;
use dual_braid::{CoxeterGroup, GroupElement, ReflId};

macro_rules! cached {
    ($name:ident, $spec:expr) => {
        fn $name() -> &'static Context {
            static C: OnceLock<Context> = OnceLock::new();
            C.get_or_init(|| Context::build($spec.parse().unwrap()).unwrap())
        }
    };
}

cached!(a2, "A2");
cached!(a3, "A3");
cached!(a3b, "A3:2,1,3");
cached!(a4, "A4");
cached!(b3, "B3");
cached!(d4, "D4");

fn pick(i: usize) -> &'static Context {
    [a3, b3, a3b, d4][i % 4]()
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = Vec<Index>> {
    prop::collection::vec(any::<Index>(), 0..=max_len)
}

fn to_word(ctx: &Context, idx: &[Index]) -> Vec<ReflId> {
    idx.iter().map(|i| i.index(ctx.group.num_reflections())).collect()
}

fn group_elem(ctx: &Context, idx: &[Index]) -> GroupElement {
    ctx.group.product(&to_word(ctx, idx))
}

// ---------------------------------------------------------------------------
// groups

fn bfs_lengths(g: &CoxeterGroup) -> HashMap<GroupElement, usize> {
    let mut dist = HashMap::from([(g.identity(), 0)]);
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(w) = queue.pop_front() {
        let d = dist[&w];
        for r in g.reflections() {
            let next = r.element.mul(&w);
            if !dist.contains_key(&next) {
                dist.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
        }
    }
    dist
}

#[test]
fn reflection_length_is_cayley_distance() {
    for ctx in [a3(), b3(), a4(), d4()] {
        let g = &ctx.group;
        let dist = bfs_lengths(g);
        assert_eq!(dist.len(), g.elements().len());
        for (w, &d) in &dist {
            assert_eq!(g.reflection_length(w), d, "{}", g.spec);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn elements_preserve_form(k in 0usize..4, w in word_strategy(8)) {
        let ctx = pick(k);
        prop_assert!(ctx.group.preserves_form(&group_elem(ctx, &w)));
    }

    #[test]
    fn conjugation_permutes_reflections(k in 0usize..4, w in word_strategy(6)) {
        let ctx = pick(k);
        let g = &ctx.group;
        let x = group_elem(ctx, &w);
        let image: HashSet<ReflId> = (0..g.num_reflections()).map(|t| g.conjugate(t, &x)).collect();
        prop_assert_eq!(image.len(), g.num_reflections());
        for t in 0..g.num_reflections() {
            prop_assert_eq!(g.conjugate_inv(g.conjugate(t, &x), &x), t);
        }
    }

    #[test]
    fn reduced_factorizations_have_independent_roots(k in 0usize..4, w in any::<Index>()) {
        let ctx = pick(k);
        let x = ctx.nc.element(w.index(ctx.nc.len()));
        for f in reduced_factorizations(&ctx.group, x) {
            let roots: Vec<Vec<i64>> = f.iter().map(|&t| ctx.group.root(t).to_vec()).collect();
            prop_assert_eq!(int_rank(&roots), f.len());
        }
    }
}

// ---------------------------------------------------------------------------
// noncrossing lattice

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn absolute_order_is_conjugation_invariant(k in 0usize..4, a in any::<Index>(), b in any::<Index>(), h in word_strategy(5)) {
        let ctx = pick(k);
        let g = &ctx.group;
        let (a, b) = (a.index(ctx.nc.len()), b.index(ctx.nc.len()));
        let x = group_elem(ctx, &h);
        let xi = g.inverse(&x);
        let wa = x.mul(ctx.nc.element(a)).mul(&xi);
        let wb = x.mul(ctx.nc.element(b)).mul(&xi);
        prop_assert_eq!(g.leq_t(&wa, &wb), ctx.nc.leq(a, b));
    }

    #[test]
    fn fixed_subposets_are_sublattices(k in 0usize..4, i in 0i64..12, a in any::<Index>(), b in any::<Index>()) {
        let ctx = pick(k);
        let fp = ctx.nc.fixed_subposet(i);
        let x = fp.elements[a.index(fp.elements.len())];
        let y = fp.elements[b.index(fp.elements.len())];
        prop_assert!(fp.elements.contains(&ctx.nc.meet(x, y)));
        prop_assert!(fp.elements.contains(&ctx.nc.join(x, y)));
    }
}

#[test]
fn subword_property() {
    for ctx in [a3(), b3()] {
        let nc = &ctx.nc;
        let facts: Vec<Vec<Vec<ReflId>>> =
            (0..nc.len()).map(|w| reduced_factorizations(&ctx.group, nc.element(w))).collect();
        let is_subword = |small: &[ReflId], big: &[ReflId]| {
            let mut it = big.iter();
            small.iter().all(|s| it.any(|b| b == s))
        };
        for a in 0..nc.len() {
            for b in 0..nc.len() {
                let sub = facts[a].iter().any(|x| facts[b].iter().any(|y| is_subword(x, y)));
                assert_eq!(sub, nc.leq(a, b), "{} {a} {b}", ctx.group.spec);
            }
        }
    }
}

#[test]
fn moebius_sign_alternates() {
    for s in ["A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "D4", "D5", "G2", "F4"] {
        let g = CoxeterGroup::build(s.parse().unwrap()).unwrap();
        let nc = NcLattice::build(&g).unwrap();
        for w in 0..nc.len() {
            let m = nc.moebius(w);
            assert!(m != 0 && (m > 0) == (nc.rank(w) % 2 == 0), "{s} {w}");
        }
    }
}

#[test]
fn hurwitz_transitive_a4() {
    let ctx = a4();
    for w in 0..ctx.nc.len() {
        let facts = reduced_factorizations(&ctx.group, ctx.nc.element(w));
        let orbit = hurwitz_orbit(&ctx.group, &facts[0]).unwrap();
        assert_eq!(orbit.len(), facts.len());
    }
}

// ---------------------------------------------------------------------------
// dual braid monoid

fn monoid_elem(dm: &DualMonoid, ctx: &Context, idx: &[Index]) -> MonoidElement {
    dm.normal_form(&to_word(ctx, idx))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_forms_are_confluent(k in 0usize..2, w in word_strategy(5), seed in any::<u64>()) {
        use rand::SeedableRng;
        let ctx = pick(k);
        let dm = DualMonoid::new(&ctx.group, &ctx.nc);
        let word = to_word(ctx, &w);
        let nf = dm.normal_form(&word);
        prop_assert!(dm.is_normal_form(&nf));
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        for _ in 0..1000 {
            prop_assert_eq!(&dm.normal_form_random(&word, &mut rng), &nf);
        }
    }

    #[test]
    fn monoid_multiplication_is_associative(k in 0usize..2, x in word_strategy(4), y in word_strategy(4), z in word_strategy(4)) {
        let ctx = pick(k);
        let dm = DualMonoid::new(&ctx.group, &ctx.nc);
        let (x, y, z) = (monoid_elem(&dm, ctx, &x), monoid_elem(&dm, ctx, &y), monoid_elem(&dm, ctx, &z));
        let left = dm.multiply(&dm.multiply(&x, &y), &z);
        let right = dm.multiply(&x, &dm.multiply(&y, &z));
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(dm.degree(&left), dm.degree(&x) + dm.degree(&y) + dm.degree(&z));
        prop_assert_eq!(dm.to_group(&left), dm.to_group(&x).mul(&dm.to_group(&y)).mul(&dm.to_group(&z)));
    }
}

#[test]
fn monoid_is_cancellative_a3() {
    let ctx = a3();
    let dm = DualMonoid::new(&ctx.group, &ctx.nc);
    let all: Vec<MonoidElement> = (1..=3).flat_map(|d| dm.elements_of_degree(d)).collect();
    for x in &all {
        let mut left = HashMap::new();
        let mut right = HashMap::new();
        for y in &all {
            assert!(left.insert(dm.multiply(x, y), y).is_none());
            assert!(right.insert(dm.multiply(y, x), y).is_none());
        }
    }
}

#[test]
fn divisors_of_c_are_the_simples() {
    for ctx in [a3(), b3(), a3b()] {
        let nc = &ctx.nc;
        let dm = DualMonoid::new(&ctx.group, nc);
        let c = dm.garside_element();
        let simples: Vec<MonoidElement> = (0..nc.len()).map(|u| dm.simple(u)).collect();
        for u in 0..nc.len() {
            let left = (0..nc.len()).any(|v| dm.multiply(&simples[u], &simples[v]) == c);
            let right = (0..nc.len()).any(|v| dm.multiply(&simples[v], &simples[u]) == c);
            assert!(left && right);
            for v in 0..nc.len() {
                let divides = (0..nc.len()).any(|x| dm.multiply(&simples[u], &simples[x]) == simples[v]);
                assert_eq!(divides, nc.leq(u, v));
            }
        }
        // a non-simple of degree 2 does not divide c
        let t = dm.atom(0);
        let tt = dm.multiply(&t, &t);
        assert!(!(0..nc.len()).any(|v| dm.multiply(&tt, &simples[v]) == c));
    }
}

#[test]
fn growth_is_moebius_inverse_for_the_catalogue() {
    for s in ["A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "D4", "D5", "G2", "F4", "E6"] {
        let g = CoxeterGroup::build(s.parse().unwrap()).unwrap();
        let nc = NcLattice::build(&g).unwrap();
        let dm = DualMonoid::new(&g, &nc);
        assert_eq!(dm.growth_series(6), series_inverse(&nc.moebius_polynomial(), 6), "{s}");
    }
}

#[test]
fn rotation_preserves_left_weighting() {
    for ctx in [a3(), b3(), a3b(), d4()] {
        let nc = &ctx.nc;
        let dm = DualMonoid::new(&ctx.group, nc);
        for u in 1..nc.len() {
            for v in 1..nc.len() {
                assert_eq!(
                    dm.is_left_weighted(u, v),
                    dm.is_left_weighted(nc.conj_c(u), nc.conj_c(v))
                );
            }
        }
    }
}

// ---------------------------------------------------------------------------
// cluster complex

#[test]
fn complex_is_pure() {
    for ctx in [a3(), b3(), a3b(), a4(), d4()] {
        let n = ctx.group.rank();
        let facets: Vec<BTreeSet<ReflId>> =
            ctx.complex.facets.iter().map(|f| f.iter().copied().collect()).collect();
        assert!(facets.iter().all(|f| f.len() == n));
        for f in ctx.complex.faces() {
            let s: BTreeSet<ReflId> = f.verts.iter().copied().collect();
            assert!(facets.iter().any(|x| s.is_subset(x)));
        }
    }
}

#[test]
fn decreasing_factorizations_are_clusters_a4() {
    let ctx = a4();
    let g = &ctx.group;
    let ord = &ctx.complex.order;
    let facets: BTreeSet<BTreeSet<ReflId>> =
        ctx.complex.facets.iter().map(|f| f.iter().copied().collect()).collect();
    // each facet is a decreasing factorization of c
    for f in &ctx.complex.facets {
        assert!(ord.is_descending(f));
        assert_eq!(g.product(f), *g.coxeter_element());
    }
    // and every decreasing reduced factorization of c is a facet
    for f in reduced_factorizations(g, g.coxeter_element()) {
        if ord.is_descending(&f) {
            assert!(facets.contains(&f.iter().copied().collect()));
        }
    }
    for f in &facets {
        assert!(f.iter().all(|&a| f.iter().all(|&b| g.inner(a, b) >= 0)));
    }
}

#[test]
fn rank_two_elements_have_one_increasing_factorization() {
    for ctx in [a3(), b3(), a3b(), d4()] {
        let ord = &ctx.complex.order;
        for w in ctx.nc.level(2) {
            let inc: Vec<Vec<ReflId>> = reduced_factorizations(&ctx.group, ctx.nc.element(w))
                .into_iter()
                .filter(|f| ord.precedes(f[0], f[1]))
                .collect();
            assert_eq!(inc.len(), 1, "{}", ctx.group.spec);
            assert!(ctx.group.inner(inc[0][0], inc[0][1]) <= 0);
        }
    }
}

fn normalized_det(rows: &[Vec<Q>]) -> Q {
    let rows: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| {
            let s: Q = r.iter().sum();
            r.iter().map(|x| x / &s).collect()
        })
        .collect();
    let d = dual_braid::linalg::det(&rows);
    if d < q(0) {
        -d
    } else {
        d
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn faces_tile_reduced_cones(k in 0usize..4, w in any::<Index>(), f in any::<Index>()) {
        let ctx = pick(k);
        let g = &ctx.group;
        let w = w.index(ctx.nc.len());
        prop_assume!(w != ctx.nc.bottom());
        let facts = reduced_factorizations(g, ctx.nc.element(w));
        let big = &facts[f.index(facts.len())];
        let mut total = q(0);
        for &face in ctx.complex.faces_with_nc(w) {
            let verts = &ctx.complex.face(face).verts;
            if let Some(rows) = cone_coordinates(g, big, verts).unwrap() {
                if rows.iter().flatten().all(|x| *x >= q(0)) {
                    total += normalized_det(&rows);
                }
            }
        }
        prop_assert_eq!(total, q(1));
    }

    #[test]
    fn boundary_labels_reproduce_nc(k in 0usize..4, f in any::<Index>()) {
        let ctx = pick(k);
        let g = &ctx.group;
        let face = ctx.complex.face(f.index(ctx.complex.faces().len()));
        let res = Resolution::new(g, &ctx.nc, &ctx.complex);
        for i in 0..face.verts.len() {
            let prefix = g.product(&face.verts[..i]);
            let expected = g.conjugate_inv(face.verts[i], &prefix);
            prop_assert_eq!(res.boundary_reflection(&face.verts, i), expected);
            let mut rest = face.verts.clone();
            rest.remove(i);
            let sub = ctx.complex.face_id(&rest).expect("faces are closed under deletion");
            let lhs = g.reflection(expected).element.mul(ctx.nc.element(ctx.complex.face(sub).nc));
            prop_assert_eq!(&lhs, ctx.nc.element(face.nc));
        }
    }
}

// ---------------------------------------------------------------------------
// resolution

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_squares_to_zero_and_respects_keys(k in 0usize..4, terms in prop::collection::vec((word_strategy(3), any::<Index>(), -3i64..=3), 1..4), j in 0usize..4) {
        let ctx = pick(k);
        let res = Resolution::new(&ctx.group, &ctx.nc, &ctx.complex);
        let faces: Vec<usize> = ctx.complex.faces_of_size(j.min(ctx.group.rank())).collect();
        let mut x = FreeModElement::zero(j.min(ctx.group.rank()) as isize - 1);
        for (w, f, c) in &terms {
            let b = res.monoid.normal_form(&to_word(ctx, w));
            let face = faces[f.index(faces.len())];
            let key = res.theta_key(&b, face);
            let one = FreeModElement::basis(x.index, b.clone(), face);
            let d = res.boundary(&one).unwrap();
            for (b2, f2) in d.terms.keys() {
                prop_assert_eq!(&res.theta_key(b2, *f2), &key);
            }
            x.add_term(b, face, q(*c));
        }
        let dx = res.boundary(&x).unwrap();
        if dx.index >= 0 {
            prop_assert!(res.boundary(&dx).unwrap().is_zero());
        }
    }
}

// ---------------------------------------------------------------------------
// Koszul dual algebra

fn rewrite_sum(alg: &DualAlgebra, words: &[(Vec<ReflId>, Q)]) -> DualElement {
    let mut out = DualElement::zero();
    for (w, c) in words {
        out.add(&alg.rewrite(w).unwrap(), c);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rewriting_respects_relations(k in 0usize..3, a in word_strategy(2), b in word_strategy(2), r in any::<Index>(), s in any::<Index>()) {
        let ctx = [a2, a3, b3][k]();
        let alg = DualAlgebra::new(&ctx.group, &ctx.nc, &ctx.complex);
        let rels = alg.relations().as_linear_combinations();
        let rel = &rels[r.index(rels.len())];
        let (pivot, pc) = &rel[s.index(rel.len())];
        let (a, b) = (to_word(ctx, &a), to_word(ctx, &b));
        let wrap = |m: &[ReflId]| [a.as_slice(), m, b.as_slice()].concat();
        // a·pivot·b equals a·(pivot - rel/pc)·b
        let lhs = alg.rewrite(&wrap(pivot)).unwrap();
        let others: Vec<(Vec<ReflId>, Q)> = rel
            .iter()
            .filter(|(m, _)| m != pivot)
            .map(|(m, c)| (wrap(m), -q(*c) / q(*pc)))
            .collect();
        prop_assert_eq!(lhs, rewrite_sum(&alg, &others));
    }

    #[test]
    fn rewriting_commutes_with_rotation(k in 0usize..3, w in word_strategy(4), i in 1i64..6) {
        let ctx = [a3, b3, a3b][k]();
        let alg = DualAlgebra::new(&ctx.group, &ctx.nc, &ctx.complex);
        let word = to_word(ctx, &w);
        let rotated: Vec<ReflId> = word.iter().map(|&t| alg.rotate_reflection(t, i)).collect();
        let mut expected = DualElement::zero();
        for (f, c) in alg.rewrite(&word).unwrap().terms() {
            let img: Vec<ReflId> = ctx.complex.face(f).verts.iter().map(|&t| alg.rotate_reflection(t, i)).collect();
            expected.add(&alg.rewrite(&img).unwrap(), c);
        }
        prop_assert_eq!(alg.rewrite(&rotated).unwrap(), expected);
    }

    #[test]
    fn algebra_is_associative(k in 0usize..3, a in any::<Index>(), b in any::<Index>(), c in any::<Index>()) {
        let ctx = [b3, d4, a4][k]();
        let alg = DualAlgebra::new(&ctx.group, &ctx.nc, &ctx.complex);
        let n = ctx.complex.faces().len();
        let [x, y, z] = [a, b, c].map(|i| DualElement::basis(i.index(n)));
        let left = alg.multiply(&alg.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = alg.multiply(&x, &alg.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn algebra_is_associative_on_a3_basis() {
    let ctx = a3();
    let alg = DualAlgebra::new(&ctx.group, &ctx.nc, &ctx.complex);
    let n = ctx.complex.faces().len();
    let basis: Vec<DualElement> = (0..n).map(DualElement::basis).collect();
    let prod: Vec<Vec<DualElement>> = basis
        .iter()
        .map(|x| basis.iter().map(|y| alg.multiply(x, y).unwrap()).collect())
        .collect();
    for (i, x) in basis.iter().enumerate() {
        for j in 0..n {
            for (k, z) in basis.iter().enumerate() {
                let left = alg.multiply(&prod[i][j], z).unwrap();
                let right = alg.multiply(x, &prod[j][k]).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn structure_constants_are_signs() {
    for s in ["A2", "A3", "A4", "B2", "B3", "D4", "G2", "A3:2,1,3", "B3:3,2,1"] {
        let ctx = Context::build(s.parse::<GroupSpec>().unwrap()).unwrap();
        let alg = DualAlgebra::new(&ctx.group, &ctx.nc, &ctx.complex);
        for f in ctx.complex.faces() {
            for h in ctx.complex.faces() {
                let w = [f.verts.as_slice(), h.verts.as_slice()].concat();
                let x = alg.rewrite(&w).unwrap();
                assert!(x.terms().all(|(_, c)| *c == q(1) || *c == q(-1)), "{s} {w:?}");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Nichols algebra

fn tensor(ctx: &Context, idx: &[Index]) -> TensorElement {
    TensorElement::word(dual_braid::nichols::Alphabet::Reflections, to_word(ctx, idx))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn twisted_shuffle_is_associative_and_unital(k in 0usize..3, a in word_strategy(3), b in word_strategy(3), c in word_strategy(3)) {
        let ctx = [a3, b3, a3b][k]();
        let nic = Nichols::new(&ctx.group, &ctx.nc, &ctx.complex);
        let (x, y, z) = (tensor(ctx, &a), tensor(ctx, &b), tensor(ctx, &c));
        let left = nic.twisted_shuffle(&nic.twisted_shuffle(&x, &y).unwrap(), &z).unwrap();
        let right = nic.twisted_shuffle(&x, &nic.twisted_shuffle(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(nic.twisted_shuffle(&TensorElement::empty(), &x).unwrap(), x.clone());
        prop_assert_eq!(nic.twisted_shuffle(&x, &TensorElement::empty()).unwrap(), x);
    }

    #[test]
    fn braiding_satisfies_yang_baxter(k in 0usize..3, w in prop::array::uniform3(any::<Index>())) {
        let ctx = [b3, d4, a4][k]();
        let nic = Nichols::new(&ctx.group, &ctx.nc, &ctx.complex);
        let x = tensor(ctx, &w);
        let lhs = nic.braiding_at(&nic.braiding_at(&nic.braiding_at(&x, 0), 1), 0);
        let rhs = nic.braiding_at(&nic.braiding_at(&nic.braiding_at(&x, 1), 0), 1);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn grading_is_multiplicative(k in 0usize..3, a in word_strategy(3), b in word_strategy(3)) {
        let ctx = [a3, b3, a3b][k]();
        let nic = Nichols::new(&ctx.group, &ctx.nc, &ctx.complex);
        let (x, y) = (tensor(ctx, &a), tensor(ctx, &b));
        let (gx, jx) = nic.grading(&x).unwrap().unwrap();
        let (gy, jy) = nic.grading(&y).unwrap().unwrap();
        let p = nic.twisted_shuffle(&x, &y).unwrap();
        if !p.is_zero() {
            prop_assert_eq!(nic.grading(&p).unwrap(), Some((gx.mul(&gy), jx + jy)));
        }
    }

    #[test]
    fn nabla_kills_products_of_generators(k in 0usize..3, w in word_strategy(4)) {
        let ctx = [a2, a3, b3][k]();
        let nic = Nichols::new(&ctx.group, &ctx.nc, &ctx.complex);
        let x = nic.shuffle_letters(&to_word(ctx, &w));
        prop_assert!(nic.nabla(&x).unwrap().is_zero());
    }

    #[test]
    fn conjugation_by_c_preserves_the_quotient_ideal(k in 0usize..3, w in word_strategy(4)) {
        let ctx = [a3, b3, a3b][k]();
        let nic = Nichols::new(&ctx.group, &ctx.nc, &ctx.complex);
        let x = nic.shuffle_letters(&to_word(ctx, &w));
        let c = ctx.group.coxeter_element();
        let moved = nic.gamma(&x, c).unwrap();
        prop_assert_eq!(nic.quotient_project(&moved).unwrap(), nic.gamma(&nic.quotient_project(&x).unwrap(), c).unwrap());
    }
}

// ---------------------------------------------------------------------------
// Orlik-Solomon

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn dependent_wedges_vanish(k in 0usize..3, w in prop::collection::btree_set(0usize..16, 1..=4)) {
        let ctx = [a3, b3, a3b][k]();
        let nt = ctx.group.num_reflections();
        let set: Vec<ReflId> = w.into_iter().map(|t| t % nt).collect::<BTreeSet<_>>().into_iter().collect();
        let nic = Nichols::new(&ctx.group, &ctx.nc, &ctx.complex);
        let lattice = IntersectionLattice::build(&ctx.group).unwrap();
        let roots: Vec<Vec<i64>> = set.iter().map(|&t| ctx.group.root(t).to_vec()).collect();
        let image = lattice.lambda(&nic.wedge_letters(&set));
        if int_rank(&roots) < set.len() {
            prop_assert!(image.is_zero());
        } else {
            prop_assert!(!image.is_zero());
        }
    }
}

#[test]
fn parallel_table_totals() {
    for ctx in [a3(), b3(), d4()] {
        let lattice = IntersectionLattice::build(&ctx.group).unwrap();
        let rows = dual_braid::os::parallel_table(&ctx.nc, &lattice);
        assert_eq!(rows.iter().map(|r| r.nc_elements).sum::<usize>(), ctx.nc.len());
        assert_eq!(rows.iter().map(|r| r.flats).sum::<usize>(), lattice.len());
        // both top Möbius values count the facets of the positive complex
        let top = rows.last().unwrap();
        assert_eq!(top.nc_moebius.unsigned_abs() as usize, ctx.complex.facets.len());
    }
}
