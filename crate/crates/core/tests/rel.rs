use polyspan::finset::Subset;
use polyspan::random::*;
use polyspan::rel::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn rif_is_right_adjoint_exhaustively() {
    for (t, y, k) in [(1, 2, 2), (2, 2, 1), (2, 1, 2), (3, 1, 3), (1, 3, 1)] {
        for n in Relation::all(t, y) {
            for u in Relation::all(k, y) {
                let lift = rel_rif(&n, &u).unwrap();
                for v in Relation::all(k, t) {
                    let lhs = rel_compose(&n, &v).unwrap().is_subset_of(&u);
                    assert_eq!(lhs, v.is_subset_of(&lift));
                }
            }
        }
    }
}

#[test]
fn partial_map_round_trips() {
    let cases = [
        RelPolynomial::new(2, Subset::empty(3), Relation::empty(2, 0)).unwrap(),
        RelPolynomial::identity(3),
        RelPolynomial::new(
            2,
            Subset::new(3, vec![0, 2]).unwrap(),
            Relation::new(2, 2, vec![(1, 0), (0, 1)]).unwrap(),
        )
        .unwrap(),
    ];
    for p in cases {
        assert_eq!(from_partial_map(&to_partial_map(&p)), p);
    }
}

#[test]
fn hk_rel_examples() {
    let p = RelPolynomial::identity(3);
    let s = Relation::new(2, 3, vec![(0, 1), (1, 2)]).unwrap();
    assert_eq!(hk_rel(&p, &s).unwrap(), s);
    let p = RelPolynomial::new(
        2,
        Subset::new(3, vec![1, 2]).unwrap(),
        Relation::new(2, 2, vec![(0, 0)]).unwrap(),
    )
    .unwrap();
    let full = hk_rel(&p, &Relation::full(2, 2)).unwrap();
    assert_eq!(full, Relation::from_predicate(2, 3, |_, c| c > 0));
}

#[test]
fn composing_with_identity() {
    let mut r = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let p = random_relpoly(&mut r, 3, 4);
        assert_eq!(compose_polyrel(&RelPolynomial::identity(4), &p).unwrap(), p);
        assert_eq!(compose_polyrel(&p, &RelPolynomial::identity(3)).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn composition_transports_to_kleisli(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (x, c, d) = (r.gen_range(0..=5), r.gen_range(0..=5), r.gen_range(0..=5));
        let p = random_relpoly(&mut r, x, c);
        let q = random_relpoly(&mut r, c, d);
        let lhs = to_partial_map(&compose_polyrel(&q, &p).unwrap());
        let rhs = kleisli_compose(&to_partial_map(&q), &to_partial_map(&p)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hk_rel_formula_and_functoriality(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (k, x, c, d) = (r.gen_range(0..=3), r.gen_range(0..=4), r.gen_range(0..=4), r.gen_range(0..=4));
        let p = random_relpoly(&mut r, x, c);
        let q = random_relpoly(&mut r, c, d);
        let s = random_relation(&mut r, k, x, 0.5);
        prop_assert_eq!(hk_rel(&p, &s).unwrap(), hk_rel_via_rif(&p, &s).unwrap());
        let qp = compose_polyrel(&q, &p).unwrap();
        prop_assert_eq!(hk_rel(&qp, &s).unwrap(), hk_rel(&q, &hk_rel(&p, &s).unwrap()).unwrap());
        let bigger = Relation::new(k, x, s.pairs().iter().copied().chain(random_relation(&mut r, k, x, 0.3).pairs().iter().copied()).collect()).unwrap();
        prop_assert!(hk_rel(&p, &s).unwrap().is_subset_of(&hk_rel(&p, &bigger).unwrap()));
    }

    #[test]
    fn relation_laws(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let sizes: Vec<usize> = (0..4).map(|_| r.gen_range(0..=4)).collect();
        let a = random_relation(&mut r, sizes[0], sizes[1], 0.4);
        let b = random_relation(&mut r, sizes[1], sizes[2], 0.4);
        let c = random_relation(&mut r, sizes[2], sizes[3], 0.4);
        let left = rel_compose(&rel_compose(&c, &b).unwrap(), &a).unwrap();
        let right = rel_compose(&c, &rel_compose(&b, &a).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(Relation::new(a.src(), a.tgt(), a.pairs().to_vec()).unwrap(), a.clone());
        prop_assert_eq!(Relation::from_span(&a.to_span()), a.clone());
        let direct = Relation::from_predicate(sizes[0], sizes[2], |x, z| (0..sizes[1]).any(|y| a.contains(x, y) && b.contains(y, z)));
        prop_assert_eq!(rel_compose(&b, &a).unwrap(), direct);
    }

    #[test]
    fn partial_maps_round_trip(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (x, c) = (r.gen_range(0..=5), r.gen_range(0..=5));
        let p = random_relpoly(&mut r, x, c);
        prop_assert_eq!(from_partial_map(&to_partial_map(&p)), p);
    }
}
