use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use etcon::constructions::generators::{cross_polytope, cube, simplex};
use etcon::constructions::{
    build_truncatable_stacked, cuts_from_edge_tangency, generate, GeneratorKind, StackBase,
};
use etcon::et::{d_construction, et, et_fvector_formula, et_two_simple_criterion, predicted_k_simplicial, EtElement};
use etcon::geometry::{is_t_tangent, polar, VHPolytope};
use etcon::io::{load_lattice, load_polytope, save_et, save_lattice, save_polytope};
use etcon::poset::{are_isomorphic, boolean_lattice, GradedPoset};
use etcon::rational::{frac, Rat};
use etcon::subdivision::{pi, pi_inverse, ChainPoint};

fn corpus() -> &'static [GradedPoset] {
    static C: OnceLock<Vec<GradedPoset>> = OnceLock::new();
    C.get_or_init(|| {
        let mut c: Vec<GradedPoset> = (2..=5).map(boolean_lattice).collect();
        for d in 3..=4 {
            c.push(cube(d).lattice.poset);
            c.push(cross_polytope(d).lattice.poset);
        }
        c.push(generate(GeneratorKind::Hypersimplex { d: 4, k: 2 }).unwrap().lattice.poset);
        c.push(generate(GeneratorKind::PrismOverSimplex { d: 4 }).unwrap().lattice.poset);
        c.push(generate(GeneratorKind::M { d: 4 }).unwrap().lattice.poset);
        c
    })
}

fn polytopes() -> Vec<VHPolytope> {
    vec![
        simplex(3),
        simplex(4),
        cube(3),
        cube(4),
        cross_polytope(3),
        cross_polytope(4),
        generate(GeneratorKind::PrismOverSimplex { d: 4 }).unwrap(),
        generate(GeneratorKind::Hypersimplex { d: 4, k: 2 }).unwrap(),
    ]
}

fn dim(l: &GradedPoset) -> usize {
    l.length() - 1
}

/// Same poset with ids shuffled by `perm`.
fn relabel(p: &GradedPoset, perm: &[usize]) -> GradedPoset {
    let mut ranks = vec![0; p.len()];
    for x in 0..p.len() {
        ranks[perm[x]] = p.rank(x);
    }
    let covers: Vec<_> = p.cover_pairs().into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
    GradedPoset::from_covers(&ranks, &covers).unwrap()
}

fn lattice_and_t() -> impl Strategy<Value = (usize, usize)> {
    (0..corpus().len()).prop_flat_map(|i| (Just(i), 0..dim(&corpus()[i])))
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn et_is_eulerian_of_same_length((i, t) in lattice_and_t()) {
        let l = &corpus()[i];
        let e = et(l, t).unwrap();
        prop_assert!(e.poset.is_eulerian());
        prop_assert_eq!(e.poset.length(), l.length());
        let predicted = et_fvector_formula(&l.flag_vector(), t).unwrap();
        let actual = e.poset.flag_vector();
        prop_assert_eq!(predicted.as_slice(), actual.proper());
    }

    #[test]
    fn et_duality((i, t) in lattice_and_t()) {
        let l = &corpus()[i];
        let d = dim(l);
        let a = et(l, t).unwrap();
        let b = et(&l.opposite(), d - 1 - t).unwrap();
        prop_assert!(are_isomorphic(&a.poset, &b.poset).is_some());
    }

    #[test]
    fn coatoms_are_singletons((i, t) in lattice_and_t()) {
        let l = &corpus()[i];
        let e = et(l, t).unwrap();
        let d = dim(l);
        let coatoms: BTreeSet<EtElement> =
            e.poset.elements_of_rank(d).iter().map(|&x| e.element(x)).collect();
        let expected: BTreeSet<EtElement> = l
            .elements_of_rank(t + 1)
            .iter()
            .map(|&y| EtElement::Singleton { y })
            .collect();
        prop_assert_eq!(coatoms, expected);
        // atoms are intervals of rank 1, so they straddle rank t + 1 maximally
        for &a in e.poset.elements_of_rank(1) {
            match e.element(a) {
                EtElement::Interval { x, z } => {
                    prop_assert_eq!(l.rank(x) + d + 1 - l.rank(z), 1);
                    prop_assert!(l.rank(x) <= t && l.rank(z) >= t + 2);
                }
                EtElement::Singleton { .. } => prop_assert_eq!(d, 1),
                EtElement::TopEmpty => prop_assert!(false, "empty set as an atom"),
            }
        }
    }

    #[test]
    fn simpliciality_criteria((i, t) in lattice_and_t(), k in 0usize..4) {
        let l = &corpus()[i];
        let d = dim(l);
        prop_assume!(t >= 1 && t + 2 <= d && k + 2 <= d);
        let e = et(l, t).unwrap().poset;
        let profile = e.simpliciality_profile().unwrap();
        let predicted = predicted_k_simplicial(l, t, k).unwrap();
        prop_assert_eq!(profile.max_k_simplicial >= k, predicted);
        prop_assert_eq!(et_two_simple_criterion(l, t).unwrap(), e.is_h_simple(2));
        prop_assert!(profile.max_k_simplicial < d - 1);
        prop_assert!(!e.is_h_simple(3));
    }

    #[test]
    fn eulerian_flag_identities(i in 0..corpus().len()) {
        let l = &corpus()[i];
        let fv = l.flag_vector();
        prop_assert!(fv.satisfies_lower_euler_relations());
        prop_assert!(fv.satisfies_upper_euler_relations());
    }

    #[test]
    fn binomial_bound(i in 0..corpus().len()) {
        let l = &corpus()[i];
        let len = l.length();
        for r in 1..len {
            let count = l.elements_of_rank(r).len();
            prop_assert!(count >= binom(len, r));
            if count == binom(len, r) {
                prop_assert!(l.is_boolean());
            }
        }
    }

    #[test]
    fn moebius_alternates(i in 0..corpus().len(), seed in any::<u64>()) {
        let l = &corpus()[i];
        let x = (seed as usize) % l.len();
        for y in l.up_set(x).ones() {
            let sign = if (l.rank(y) - l.rank(x)) % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(l.moebius(x, y).unwrap(), sign);
        }
    }

    #[test]
    fn isomorphism_is_an_equivalence(i in 0..corpus().len(), perm_seed in any::<u64>()) {
        let l = &corpus()[i];
        let mut perm: Vec<usize> = (0..l.len()).collect();
        let mut s = perm_seed;
        for k in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(k, (s >> 33) as usize % (k + 1));
        }
        let m = relabel(l, &perm);
        let n = relabel(&m, &perm);
        prop_assert!(are_isomorphic(l, l).is_some());
        let f = are_isomorphic(l, &m).unwrap();
        let g = are_isomorphic(&m, l).unwrap();
        prop_assert!(are_isomorphic(l, &n).is_some());
        prop_assert_eq!(f.map.len(), g.map.len());
        prop_assert!(are_isomorphic(&l.opposite().opposite(), l).is_some());
    }

    #[test]
    fn lattice_codec_round_trip((i, t) in lattice_and_t()) {
        let l = &corpus()[i];
        let back = load_lattice(&save_lattice(l)).unwrap().poset;
        prop_assert_eq!(back.cover_pairs(), l.cover_pairs());
        let e = et(l, t).unwrap();
        let back = load_lattice(&save_et(&e)).unwrap().et.unwrap();
        prop_assert_eq!(back.elements, e.elements);
        prop_assert_eq!(back.poset.ranks(), e.poset.ranks());
    }
}

fn chain_point(l: &GradedPoset, path: &[usize], raw: &[u8]) -> ChainPoint {
    let mut chain = Vec::new();
    let mut x = l.bottom();
    let mut k = 0;
    loop {
        let ups = l.upper_covers(x);
        x = ups[path[k % path.len()] % ups.len()];
        k += 1;
        if x == l.top() {
            break;
        }
        chain.push(x);
    }
    let mut w: Vec<i64> = chain.iter().enumerate().map(|(i, _)| raw[i % raw.len()] as i64 % 7).collect();
    if w.iter().all(|&v| v == 0) {
        w[0] = 1;
    }
    let total: i64 = w.iter().sum();
    ChainPoint {
        weights: w.iter().map(|&v| frac(v, total)).collect(),
        chain,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subdivision_round_trip(
        (i, t) in lattice_and_t(),
        path in prop::collection::vec(0usize..64, 1..8),
        raw in prop::collection::vec(any::<u8>(), 1..8),
    ) {
        let l = &corpus()[i];
        let e = et(l, t).unwrap();
        let q = chain_point(l, &path, &raw);
        let y = pi_inverse(l, &e, &q).unwrap();
        let support = y.checked_support(&e.poset).unwrap();
        prop_assert!(!support.is_empty());
        let back = pi(l, &e, &y).unwrap();
        prop_assert_eq!(back.normalized(), q.normalized());
        // images of the preimage's support stay on the simplex of q's maximal chain
        let simplex: BTreeSet<usize> = q.chain.iter().copied().collect();
        for (x, _) in support {
            let im = pi(l, &e, &ChainPoint::vertex(x)).unwrap();
            prop_assert!(im.chain.iter().all(|z| simplex.contains(z)));
        }
    }

    #[test]
    fn vertex_table(i in 0..corpus().len(), t_seed in any::<usize>(), x_seed in any::<usize>()) {
        let l = &corpus()[i];
        let t = t_seed % dim(l);
        let e = et(l, t).unwrap();
        let proper: Vec<usize> =
            (0..e.poset.len()).filter(|&x| x != e.poset.bottom() && x != e.poset.top()).collect();
        let x = proper[x_seed % proper.len()];
        let im = pi(l, &e, &ChainPoint::vertex(x)).unwrap().normalized();
        let expected = match e.element(x) {
            EtElement::Singleton { y } => ChainPoint::vertex(y),
            EtElement::Interval { x: a, z } if a == l.bottom() => ChainPoint::vertex(z),
            EtElement::Interval { x: a, z } if z == l.top() => ChainPoint::vertex(a),
            EtElement::Interval { x: a, z } => ChainPoint {
                chain: vec![a, z],
                weights: vec![frac(1, 2), frac(1, 2)],
            },
            EtElement::TopEmpty => unreachable!(),
        };
        prop_assert_eq!(im, expected.normalized());
    }
}

fn vertex_set(p: &VHPolytope) -> BTreeSet<Vec<Rat>> {
    p.vertices.iter().cloned().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn polarity(i in 0..8usize, num in 1i64..20, den in 1i64..20) {
        let p = &polytopes()[i];
        let r2 = frac(num, den);
        let q = polar(p, &r2).unwrap();
        prop_assert!(are_isomorphic(&q.lattice.poset, &p.lattice.poset.opposite()).is_some());
        let back = polar(&q, &r2).unwrap();
        prop_assert_eq!(vertex_set(&back), vertex_set(p));
    }

    #[test]
    fn polytope_codec_round_trip(i in 0..8usize) {
        let p = &polytopes()[i];
        let text = save_polytope(p);
        let back = load_polytope(&text).unwrap();
        prop_assert_eq!(&back.vertices, &p.vertices);
        prop_assert_eq!(save_polytope(&back), text);
    }

    #[test]
    fn stacked_truncations(plan in prop::collection::vec(0usize..5, 0..3), cross in any::<bool>()) {
        let base = if cross { StackBase::Cross } else { StackBase::Simplex };
        let fam = build_truncatable_stacked(base, 4, &plan).unwrap();
        let d1 = fam.truncation().unwrap();
        let oracle = d_construction(&fam.polytope.lattice.poset, 1).unwrap();
        prop_assert!(are_isomorphic(&d1.lattice.poset, &oracle.poset).is_some());
        let fv = d1.lattice.poset.flag_vector();
        let (f, f03) = fv.four_shape().unwrap();
        prop_assert_eq!(f[0], f[3]);
        prop_assert_eq!(f[1], f[2]);
        prop_assert_eq!(f03, f[1] + 2 * f[0]);
        prop_assert_eq!(fv.fij(0, 2).unwrap(), 3 * f[2]);
        let profile = d1.lattice.poset.simpliciality_profile().unwrap();
        prop_assert_eq!((profile.max_k_simplicial, profile.max_h_simple, profile.is_boolean), (2, 2, false));
        if !cross {
            let n = plan.len() as u64;
            prop_assert_eq!(f, [10 + 4 * n, 30 + 18 * n, 30 + 18 * n, 10 + 4 * n]);
        }
    }
}

#[test]
fn tangency_passes_to_the_polar() {
    // regular polytopes centred at the origin with rational tangency radii
    let cases = [
        (cube(4), 1usize, frac(3, 1)),
        (cube(4), 2, frac(2, 1)),
        (cross_polytope(4), 1, frac(1, 2)),
        (cross_polytope(3), 1, frac(1, 2)),
    ];
    for (p, t, r2) in cases {
        assert!(is_t_tangent(&p, t, &r2).tangent);
        let q = polar(&p, &r2).unwrap();
        assert!(is_t_tangent(&q, dim(&p.lattice.poset) - 1 - t, &r2).tangent);
    }
}

#[test]
fn edge_tangency_gives_cut_system() {
    let p = cross_polytope(4);
    let cuts = cuts_from_edge_tangency(&p, &frac(1, 2)).unwrap();
    cuts.certify(&p).unwrap();
}
