use fintop::circle::{recognize_circle, CircleMap};
use fintop::homotopy::{core, minimal_iso_check, Budget};
use fintop::invariants::{tc_witness, Cover};
use fintop::witness::{build_chain, build_u, build_v, verify_bundle, witness_m, ChainReading, Torus};
use fintop::{FiniteSpace, KhalimskyCircle};

/// Projection degrees of a circle sitting inside the torus.
fn degrees(t: &Torus, circle: &FiniteSpace, to_parent: impl Fn(usize) -> usize) -> (usize, i64, i64) {
    let num = recognize_circle(circle).expect("a circle");
    let k = t.k();
    let space = t.space();
    let proj = |first: bool| {
        let vals = num
            .points
            .iter()
            .map(|&p| {
                let (i, j) = space.coords(to_parent(p));
                if first {
                    i
                } else {
                    j
                }
            })
            .collect();
        CircleMap::new(num.n, k, vals).unwrap().degree().unwrap()
    };
    (num.n, proj(true), proj(false))
}

#[test]
fn cores_of_both_pieces_are_long_diagonal_circles() {
    for k in 5..=9 {
        let t = Torus::new(k).unwrap();
        for piece in [build_u(k).unwrap(), build_v(k).unwrap()] {
            let sub = piece.subspace();
            let c = core(&sub.space);
            let (half, d1, d2) = degrees(&t, &c.subspace.space, |p| sub.to_parent(c.subspace.to_parent(p)));
            assert!(half > k, "k={k}: half-size {half}");
            assert_eq!((d1.abs(), d2.abs()), (1, 1), "k={k}");
            assert_eq!(d1, d2, "k={k}");
        }
    }
}

#[test]
fn two_piece_cover_is_certified() {
    for k in 5..=9 {
        let t = Torus::new(k).unwrap();
        let cover = Cover::new(
            t.space(),
            vec![build_u(k).unwrap().into_members(), build_v(k).unwrap().into_members()],
        )
        .unwrap();
        let r = tc_witness(KhalimskyCircle::new(k).unwrap().space(), &cover, &Budget::default()).unwrap();
        assert_eq!((r.lower, r.upper), (1, Some(1)), "k={k}: {:?}", r.notes);
    }
}

#[test]
fn staged_circle_for_small_k() {
    for k in [5, 6] {
        let b = build_chain(k, ChainReading::Repaired).unwrap();
        let t = &b.torus;
        let sub = t.space().subspace(&b.c);
        let (half, d1, d2) = degrees(t, &sub.space, |p| sub.to_parent(p));
        assert!(half > k);
        assert_eq!((d1, d2), (1, 1));
        let generic = core(&b.u.subspace().space);
        assert!(minimal_iso_check(&generic.subspace.space, &sub.space).unwrap().is_some());
        for s in b.stages() {
            assert!(s.is_retraction(), "k={k}: {}", s.name);
        }
        let r = verify_bundle(k, ChainReading::Repaired, &Budget::default()).unwrap();
        assert!(r.passed);
        assert!(r.n_c_discrepancy);
        assert_eq!(r.claimed_n, 2 * k + witness_m(k) + 2);
    }
}

#[test]
fn staged_chain_breaks_from_seven_on() {
    for k in 7..=9 {
        assert!(build_chain(k, ChainReading::Repaired).is_err(), "k={k}");
        let r = verify_bundle(k, ChainReading::Repaired, &Budget::default()).unwrap();
        assert!(!r.checks.stages_continuous);
        assert!(r.n_c.is_none());
        assert!(r.checks.v_projections);
    }
}

#[test]
fn m_follows_parity() {
    for k in 5..=12 {
        assert_eq!(witness_m(k), if k % 2 == 1 { k } else { k + 1 });
    }
}
