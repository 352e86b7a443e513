use proptest::prelude::*;

use fintop::complex::{barycentric, order_complex, SimplicialComplex};
use fintop::homotopy::{beat_points, core, core_with_priority, minimal_iso_check};
use fintop::{product, FiniteSpace, KhalimskyCircle, PointSet};

/// A poset on `n` points from the relations `i < j` selected by `mask`,
/// with the ids scrambled by `shift`.
fn poset(n: usize, mask: &[bool], shift: usize) -> FiniteSpace {
    let mut pairs = Vec::new();
    let mut bit = mask.iter().cycle();
    for i in 0..n {
        for j in (i + 1)..n {
            if *bit.next().unwrap() {
                pairs.push(((i + shift) % n, (j + shift) % n));
            }
        }
    }
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    FiniteSpace::build("random", labels, &pairs).unwrap()
}

fn arb_poset(max: usize) -> impl Strategy<Value = FiniteSpace> {
    (1..=max, prop::collection::vec(prop::bool::weighted(0.35), 1..80), 0..max)
        .prop_map(|(n, mask, shift)| poset(n, &mask, shift))
}

fn all_open_sets(x: &FiniteSpace) -> Vec<PointSet> {
    (0u32..1 << x.len())
        .map(|m| PointSet::from_points(x.len(), (0..x.len()).filter(|&i| m >> i & 1 == 1)))
        .filter(|s| x.is_open(s))
        .collect()
}

fn is_order_preserving(x: &FiniteSpace, y: &FiniteSpace, table: &[usize]) -> bool {
    x.points()
        .all(|p| x.points().all(|q| !x.le(p, q) || y.le(table[p], table[q])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn min_open_is_the_least_open_set(x in arb_poset(12)) {
        let opens = all_open_sets(&x);
        for p in x.points() {
            let mut meet = x.full_set();
            for u in opens.iter().filter(|u| u.contains(p)) {
                meet.intersect_with(u);
            }
            prop_assert_eq!(x.min_open(p).members().clone(), meet);
        }
    }

    #[test]
    fn projections_are_continuous(x in arb_poset(6), y in arb_poset(6)) {
        let xy = product(&x, &y);
        let pi1 = xy.projection(0);
        let pi2 = xy.projection(1);
        prop_assert!(is_order_preserving(&xy, &x, pi1.table()));
        prop_assert!(is_order_preserving(&xy, &y, pi2.table()));
        for p in xy.points() {
            let (i, j) = xy.coords(p);
            prop_assert_eq!(xy.pair(i, j), p);
            prop_assert_eq!((pi1.apply(p), pi2.apply(p)), (i, j));
        }
    }

    #[test]
    fn open_hull_is_a_closure(x in arb_poset(10), a in any::<u16>(), b in any::<u16>()) {
        let set = |m: u16| PointSet::from_points(x.len(), x.points().filter(|&i| m >> i & 1 == 1));
        let (s, t) = (set(a), set(a | b));
        let hs = x.open_hull(&s);
        prop_assert!(s.is_subset(hs.members()));
        prop_assert!(x.is_open(hs.members()));
        prop_assert_eq!(x.open_hull(hs.members()).members().clone(), hs.members().clone());
        prop_assert!(hs.members().is_subset(x.open_hull(&t).members()));
    }

    #[test]
    fn cores_are_minimal_idempotent_and_unique(x in arb_poset(9), seed in any::<u64>()) {
        let first = core(&x);
        prop_assert!(first.sequence.replay());
        prop_assert!(beat_points(&first.subspace.space).is_empty());
        let again = core(&first.subspace.space);
        prop_assert!(again.sequence.removals.is_empty());
        let mut priority: Vec<usize> = x.points().collect();
        priority.sort_by_key(|&p| (p as u64).wrapping_mul(seed | 1).rotate_left(17));
        let other = core_with_priority(&x, &priority);
        prop_assert!(minimal_iso_check(&first.subspace.space, &other.subspace.space).unwrap().is_some());
        // the retraction fixes the core and is continuous
        let r = first.retraction.table();
        prop_assert!(is_order_preserving(&x, &first.subspace.space, r));
        for q in first.subspace.space.points() {
            prop_assert_eq!(r[first.subspace.to_parent(q)], q);
        }
    }

    #[test]
    fn barycentric_facets_follow_factorials(
        v in 3usize..8,
        raw in prop::collection::vec(prop::collection::btree_set(0usize..8, 1..=3), 1..6),
    ) {
        let mut simplices: Vec<Vec<usize>> = raw
            .into_iter()
            .map(|s| s.into_iter().map(|i| i % v).collect::<std::collections::BTreeSet<_>>().into_iter().collect())
            .collect();
        for u in 0..v {
            if !simplices.iter().any(|s| s.contains(&u)) {
                simplices.push(vec![u]);
            }
        }
        let k = SimplicialComplex::new((0..v).map(|i| i.to_string()).collect(), simplices).unwrap();
        let expected: usize = k.facets().iter().map(|f| (1..=f.len()).product::<usize>()).sum();
        prop_assert_eq!(barycentric(&k).facets().len(), expected);
        prop_assert_eq!(k.euler_characteristic(), barycentric(&k).euler_characteristic());
    }
}

#[test]
fn circle_shape() {
    for n in 2..=10 {
        let c = KhalimskyCircle::new(n).unwrap();
        let x = c.space();
        assert_eq!(x.maximal_elements().len(), n);
        assert_eq!(x.minimal_elements().len(), n);
        for p in x.points() {
            let others: Vec<usize> = x.points().filter(|&q| q != p && x.comparable(p, q)).collect();
            assert_eq!(others.len(), 2);
            let is_min = x.minimal_elements().contains(p);
            assert!(others.iter().all(|&q| x.minimal_elements().contains(q) != is_min));
        }
        for i in 0..n {
            for j in 0..n {
                let expected = j == i || j == (i + n - 1) % n;
                assert_eq!(x.lt(c.a(i), c.b(j)), expected, "n={n} a{i} b{j}");
            }
        }
        assert!(beat_points(x).is_empty());
    }
}

/// All maximal chains by brute force over subsets.
fn chains_by_subsets(x: &FiniteSpace) -> Vec<Vec<usize>> {
    let is_chain = |m: u32| {
        let pts: Vec<usize> = x.points().filter(|&i| m >> i & 1 == 1).collect();
        pts.iter().all(|&a| pts.iter().all(|&b| x.comparable(a, b)))
    };
    let chains: Vec<u32> = (1u32..1 << x.len()).filter(|&m| is_chain(m)).collect();
    let mut out: Vec<Vec<usize>> = chains
        .iter()
        .filter(|&&m| !chains.iter().any(|&o| o != m && o & m == m))
        .map(|&m| x.points().filter(|&i| m >> i & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

#[test]
fn order_complex_of_products_is_the_chain_complex() {
    let c = KhalimskyCircle::new(2).unwrap();
    let i = fintop::KhalimskyInterval::new(0, 2).unwrap();
    for (a, b) in [(c.space(), c.space()), (c.space(), i.space()), (i.space(), i.space())] {
        let x = product(a, b);
        assert_eq!(order_complex(&x).facets(), chains_by_subsets(&x).as_slice());
    }
}
