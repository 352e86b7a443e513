use proptest::prelude::*;
use rayon::prelude::*;

use fintop::circle::{
    classify_homotopic, cons_fence, ht, is_fence, monotone_normalize, peak_elimination_fence, stan_fence, CircleMap,
    IntervalMap,
};
use fintop::homotopy::{all_maps, compare_tables, hom_components, homotopic, Budget, HomotopyVerdict, Strategy};
use fintop::space::line_le;
use fintop::{FiniteSpace, KhalimskyCircle, KhalimskyInterval, OrderMap};

fn circle(n: usize) -> FiniteSpace {
    KhalimskyCircle::new(n).unwrap().into_space()
}

fn check_certificate(f: &OrderMap, g: &OrderMap, v: &HomotopyVerdict) -> Option<bool> {
    if let HomotopyVerdict::Homotopic(fence) = v {
        fence.replay().expect("certificate replays");
        assert!(fence.connects(f, g));
    }
    v.decided()
}

#[test]
fn strategies_agree_on_small_circles() {
    let budget = Budget::default();
    for m in [2, 3] {
        for n in [2, 3] {
            let (x, y) = (circle(m), circle(n));
            let maps: Vec<OrderMap> = all_maps(&x, &y, usize::MAX)
                .unwrap()
                .into_iter()
                .map(|t| OrderMap::new(x.clone(), y.clone(), t).unwrap())
                .collect();
            let comps = hom_components(&x, &y, usize::MAX).unwrap();
            (0..maps.len()).into_par_iter().for_each(|i| {
                for j in i..maps.len() {
                    let (f, g) = (&maps[i], &maps[j]);
                    let truth = comps.same_component(f.table(), g.table()).unwrap();
                    for strategy in [
                        Strategy::ExhaustiveComponents,
                        Strategy::FenceBfs,
                        Strategy::CoreDegree,
                        Strategy::Auto,
                    ] {
                        let v = homotopic(f, g, strategy, &budget).unwrap();
                        assert_eq!(
                            check_certificate(f, g, &v),
                            Some(truth),
                            "{strategy:?} on {:?} {:?}",
                            f.table(),
                            g.table()
                        );
                    }
                }
            });
        }
    }
}

#[test]
fn homotopy_is_an_equivalence_on_enumerated_hom_sets() {
    let i = KhalimskyInterval::new(0, 3).unwrap();
    let pairs = [
        (circle(2), circle(2)),
        (i.space().clone(), circle(2)),
        (circle(3), i.space().clone()),
    ];
    let budget = Budget::default();
    for (x, y) in pairs {
        let maps: Vec<OrderMap> = all_maps(&x, &y, usize::MAX)
            .unwrap()
            .into_iter()
            .map(|t| OrderMap::new(x.clone(), y.clone(), t).unwrap())
            .collect();
        let rel: Vec<Vec<bool>> = maps
            .par_iter()
            .map(|f| {
                maps.iter()
                    .map(|g| homotopic(f, g, Strategy::Auto, &budget).unwrap().decided().unwrap())
                    .collect()
            })
            .collect();
        let k = maps.len();
        for a in 0..k {
            assert!(rel[a][a]);
            for b in 0..k {
                assert_eq!(rel[a][b], rel[b][a]);
                if rel[a][b] {
                    for c in 0..k {
                        assert!(!rel[b][c] || rel[a][c]);
                    }
                }
            }
        }
    }
}

#[test]
fn degree_is_a_fence_invariant() {
    for (m, n) in [(2, 2), (3, 2), (4, 2), (3, 3)] {
        let y = circle(n);
        let maps = all_maps(&circle(m), &y, usize::MAX).unwrap();
        let degrees: Vec<i64> = maps
            .iter()
            .map(|t| CircleMap::new(m, n, t.clone()).unwrap().degree().unwrap())
            .collect();
        for a in 0..maps.len() {
            for b in (a + 1)..maps.len() {
                if compare_tables(&y, &maps[a], &maps[b]).is_some() {
                    assert_eq!(degrees[a], degrees[b], "({m},{n}) {:?} {:?}", maps[a], maps[b]);
                }
            }
        }
    }
}

#[test]
fn reflection_negates_degree() {
    for (m, n) in [(2, 2), (3, 2), (4, 2), (3, 3)] {
        for t in all_maps(&circle(m), &circle(n), usize::MAX).unwrap() {
            let f = CircleMap::new(m, n, t).unwrap();
            let r = f.reflect_target();
            assert_eq!(r.degree().unwrap(), -f.degree().unwrap());
            assert!(classify_homotopic(&f, &f).unwrap());
        }
    }
}

#[test]
fn ht_is_parity_of_the_line_order() {
    let i = KhalimskyInterval::new(-6, 6).unwrap();
    let x = i.space();
    for z in -6..=6 {
        let minimal = x.minimal_elements().contains(i.point(z));
        assert_eq!(ht(z) == 0, minimal, "z = {z}");
    }
}

/// A continuous map `[k, k + len] -> Z` from a walk of steps in {-1, 0, 1},
/// repaired where the step breaks continuity.
fn walk(k: i64, start: i64, steps: &[i8]) -> IntervalMap {
    let mut values = vec![start];
    for (i, &s) in steps.iter().enumerate() {
        let z = k + i as i64;
        let prev = *values.last().unwrap();
        let want = prev + s as i64;
        let ok = |w: i64| {
            if line_le(z, z + 1) {
                line_le(prev, w)
            } else {
                line_le(w, prev)
            }
        };
        values.push(if ok(want) { want } else { prev });
    }
    IntervalMap::new(k, values).unwrap()
}

fn ends_fixed(fence: &[IntervalMap], f: &IntervalMap) -> bool {
    fence
        .iter()
        .all(|h| h.value(f.k()) == f.value(f.k()) && h.value(f.l()) == f.value(f.l()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn peak_elimination_reaches_a_monotone_map(k in -4i64..4, start in -4i64..4, steps in prop::collection::vec(-1i8..=1, 1..20)) {
        let f = walk(k, start, &steps);
        let fence = peak_elimination_fence(&f);
        prop_assert!(is_fence(&fence));
        prop_assert_eq!(&fence[0], &f);
        prop_assert!(ends_fixed(&fence, &f));
        prop_assert!(fence.last().unwrap().is_monotone());
    }

    #[test]
    fn loops_contract_to_constants(k in -4i64..4, start in -4i64..4, steps in prop::collection::vec(-1i8..=1, 1..20)) {
        let f = walk(k, start, &steps);
        let closed = f.value(f.k()) == f.value(f.l());
        match cons_fence(&f) {
            Ok(fence) => {
                prop_assert!(closed);
                prop_assert!(is_fence(&fence));
                let a = f.value(f.k());
                prop_assert_eq!(fence.last().unwrap(), &IntervalMap::constant(f.k(), f.l(), a));
            }
            Err(_) => prop_assert!(!closed),
        }
    }

    #[test]
    fn staircase_fences_replay(k in -4i64..4, shift in -3i64..3, steps in prop::collection::vec(-1i8..=1, 1..20)) {
        let f = walk(k, k + 2 * shift, &steps);
        prop_assume!(f.value(f.k()) <= f.value(f.l()));
        let fence = stan_fence(&f).unwrap();
        prop_assert!(is_fence(&fence));
        prop_assert_eq!(&fence[0], &f);
        prop_assert!(ends_fixed(&fence, &f));
        prop_assert_eq!(fence.last().unwrap(), &monotone_normalize(&f).unwrap());
    }
}
