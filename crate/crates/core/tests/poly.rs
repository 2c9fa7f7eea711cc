use polyspan::finset::FinSetMap;
use polyspan::poly::*;
use polyspan::random::*;
use polyspan::span::{spans_isomorphic, Span, SpanCell};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_span(r: &mut ChaCha8Rng, k: usize, x: usize, max_apex: usize) -> Span {
    let n = if k == 0 || x == 0 {
        0
    } else {
        r.gen_range(0..=max_apex)
    };
    Span::new(random_map(r, n, k), random_map(r, n, x)).unwrap()
}

fn composable_pair(r: &mut ChaCha8Rng) -> (Polynomial, Polynomial) {
    let (x, y, z) = (r.gen_range(0..=3), r.gen_range(0..=3), r.gen_range(0..=3));
    (
        random_polynomial(r, x, y, 5, 5),
        random_polynomial(r, y, z, 5, 5),
    )
}

#[test]
fn monomial_goldens() {
    let c = compose_poly(
        &Polynomial::from_exponents(&[3]),
        &Polynomial::from_exponents(&[2]),
    )
    .unwrap();
    assert_eq!(c, Polynomial::from_exponents(&[6]));
    let c = compose_poly(
        &Polynomial::from_exponents(&[1, 0]),
        &Polynomial::from_exponents(&[1, 0]),
    )
    .unwrap();
    assert_eq!((c.e_size(), c.s_size()), (1, 3));
    let a = IndexedFamily::from_fiber_sizes(&[4]);
    assert_eq!(
        extension_eval(&c, &a).unwrap().family.fiber_sizes(),
        vec![6]
    );
}

#[test]
fn composing_with_identity_on_empty_sets() {
    let p = Polynomial::new(
        FinSetMap::from_empty(0),
        FinSetMap::from_empty(2),
        FinSetMap::to_terminal(2),
    )
    .unwrap();
    assert!(polys_isomorphic(
        &compose_poly(&p, &identity_poly(0)).unwrap(),
        &p
    ));
    assert_eq!(compose_poly(&identity_poly(1), &p).unwrap().s_size(), 2);
}

#[test]
fn boundary_mismatch_is_reported() {
    let p = identity_poly(2);
    let q = identity_poly(3);
    assert!(compose_poly(&q, &p).is_err());
    assert!(extension_eval(&p, &IndexedFamily::from_fiber_sizes(&[1])).is_err());
}

#[test]
fn morphisms_with_different_apex_are_not_isomorphic() {
    let p = Polynomial::from_exponents(&[1]);
    let q = Polynomial::from_exponents(&[1, 1]);
    let f = PolyMorphism::from_map(
        p.clone(),
        q.clone(),
        FinSetMap::new(1, 2, vec![0]).unwrap(),
        vec![0],
    )
    .unwrap();
    let g = PolyMorphism::from_map(p, q, FinSetMap::new(1, 2, vec![1]).unwrap(), vec![0]).unwrap();
    assert!(are_isomorphic_polymorph(&f, &f).unwrap());
    assert!(!are_isomorphic_polymorph(&f, &g).unwrap());
}

#[test]
fn lambda_must_respect_fibres() {
    let p = Polynomial::from_exponents(&[1, 1]);
    let q = Polynomial::from_exponents(&[1]);
    // s = 0 and s = 1 both go to the single s′; λ(0, e′) must lie over 0
    let phi = FinSetMap::new(2, 1, vec![0, 0]).unwrap();
    assert!(PolyMorphism::from_map(p.clone(), q.clone(), phi.clone(), vec![1, 1]).is_err());
    assert!(PolyMorphism::from_map(p, q, phi, vec![0, 1]).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composite_extension_matches_iterated(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (p, q) = composable_pair(&mut r);
        let w = compose_poly_witnessed(&q, &p).unwrap();
        for _ in 0..5 {
            let a = random_family(&mut r, p.x_size(), 2);
            let sizes: Vec<u128> = a.fiber_sizes().iter().map(|&n| n as u128).collect();
            let lhs = extension_fiber_sizes(&w.poly, &sizes).unwrap();
            let rhs = extension_fiber_sizes(&q, &extension_fiber_sizes(&p, &sizes).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        let a = random_family(&mut r, p.x_size(), 1);
        let iso = w.natural_iso(&a).unwrap();
        for _ in 0..2 {
            let phi = random_family_map(&mut r, &a, 1);
            let iso2 = w.natural_iso(phi.target()).unwrap();
            let left = iso2.compose(&extension_on_map(&w.poly, &phi).unwrap()).unwrap();
            let inner = extension_on_map(&p, &phi).unwrap();
            let right = extension_on_map(&q, &inner).unwrap().compose(&iso).unwrap();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn extension_is_functorial(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y) = (r.gen_range(0..=3), r.gen_range(0..=3));
        let p = random_polynomial(&mut r, x, y, 4, 4);
        let a = random_family(&mut r, x, 2);
        let id = extension_on_map(&p, &FamilyMap::identity(&a)).unwrap();
        prop_assert!(id.map().is_identity());
        let f = random_family_map(&mut r, &a, 2);
        let g = random_family_map(&mut r, f.target(), 2);
        let lhs = extension_on_map(&p, &g.compose(&f).unwrap()).unwrap();
        let rhs = extension_on_map(&p, &g).unwrap().compose(&extension_on_map(&p, &f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_is_associative_and_unital_up_to_iso(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sizes: Vec<usize> = (0..4).map(|_| r.gen_range(0..=2)).collect();
        let p = random_polynomial(&mut r, sizes[0], sizes[1], 3, 3);
        let q = random_polynomial(&mut r, sizes[1], sizes[2], 3, 3);
        let s = random_polynomial(&mut r, sizes[2], sizes[3], 3, 3);
        let left = compose_poly(&compose_poly(&s, &q).unwrap(), &p).unwrap();
        let right = compose_poly(&s, &compose_poly(&q, &p).unwrap()).unwrap();
        let a = random_family(&mut r, sizes[0], 2);
        let sz: Vec<u128> = a.fiber_sizes().iter().map(|&n| n as u128).collect();
        prop_assert_eq!(extension_fiber_sizes(&left, &sz).unwrap(), extension_fiber_sizes(&right, &sz).unwrap());
        prop_assert!(polys_isomorphic(&left, &right));
        prop_assert!(polys_isomorphic(&compose_poly(&identity_poly(sizes[1]), &p).unwrap(), &p));
        prop_assert!(polys_isomorphic(&compose_poly(&p, &identity_poly(sizes[0])).unwrap(), &p));
    }

    #[test]
    fn hk_is_pseudofunctorial(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (p, q) = composable_pair(&mut r);
        let k = r.gen_range(0..=2);
        let u = random_span(&mut r, k, p.x_size(), 3);
        let qp = compose_poly(&q, &p).unwrap();
        let lhs = hk_span(&qp, &u).unwrap();
        let rhs = hk_span(&q, &hk_span(&p, &u).unwrap()).unwrap();
        prop_assert!(spans_isomorphic(&lhs, &rhs));
    }

    #[test]
    fn hk_at_one_is_the_extension(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y) = (r.gen_range(0..=3), r.gen_range(0..=3));
        let p = random_polynomial(&mut r, x, y, 5, 5);
        let a = random_family(&mut r, x, 2);
        let hk = hk_span(&p, &a.as_span()).unwrap();
        let ext = extension_eval(&p, &a).unwrap();
        prop_assert_eq!(hk.right(), ext.family.proj());
    }

    #[test]
    fn horizontal_composites_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y, z) = (r.gen_range(0..=2), r.gen_range(0..=2), r.gen_range(0..=2));
        let p = random_polynomial(&mut r, x, y, 3, 3);
        let q = random_polynomial(&mut r, y, z, 3, 3);
        let h = random_polymorphism(&mut r, &p, 3, 2);
        let k = random_polymorphism(&mut r, &q, 3, 2);
        let a = hcompose_polymorph(&k, &h).unwrap();
        let b = hcompose_polymorph_via_bipullback(&k, &h).unwrap();
        prop_assert!(a.h().left().is_bijective() && b.h().left().is_bijective());
        prop_assert!(are_isomorphic_polymorph(&a, &b).unwrap());
        // relabel the apex of h and recompute
        let n = h.h().apex_size();
        let perm = random_permutation(&mut r, n);
        let inv = perm.inverse().unwrap();
        let h2 = Span::new(h.h().left().compose(&inv).unwrap(), h.h().right().compose(&inv).unwrap()).unwrap();
        let kappa = SpanCell::new(h2, h.h().clone(), inv).unwrap();
        let h_moved = h.transport(&kappa).unwrap();
        prop_assert!(are_isomorphic_polymorph(&h_moved, &h).unwrap());
        let c = hcompose_polymorph_via_bipullback(&k, &h_moved).unwrap();
        prop_assert!(are_isomorphic_polymorph(&c, &a).unwrap());
    }

    #[test]
    fn identities_compose_to_identities(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (p, q) = composable_pair(&mut r);
        let c = hcompose_polymorph(&PolyMorphism::identity(&q), &PolyMorphism::identity(&p)).unwrap();
        let id = PolyMorphism::identity(&compose_poly(&q, &p).unwrap());
        prop_assert!(are_isomorphic_polymorph(&c, &id).unwrap());
    }

    #[test]
    fn vertical_composition_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y) = (r.gen_range(0..=3), r.gen_range(0..=3));
        let p = random_polynomial(&mut r, x, y, 4, 4);
        let f = random_polymorphism(&mut r, &p, 4, 2);
        let g = random_polymorphism(&mut r, f.target(), 4, 2);
        let h = random_polymorphism(&mut r, g.target(), 4, 2);
        let left = vcompose_polymorph(&vcompose_polymorph(&h, &g).unwrap(), &f).unwrap();
        let right = vcompose_polymorph(&h, &vcompose_polymorph(&g, &f).unwrap()).unwrap();
        prop_assert!(are_isomorphic_polymorph(&left, &right).unwrap());
        let unit = vcompose_polymorph(&f, &identity_polymorph(&p)).unwrap();
        prop_assert!(are_isomorphic_polymorph(&unit, &f).unwrap());
        let unit = vcompose_polymorph(&identity_polymorph(f.target()), &f).unwrap();
        prop_assert!(are_isomorphic_polymorph(&unit, &f).unwrap());
        if f.is_strong() && g.is_strong() && h.is_strong() {
            prop_assert!(left.is_strong());
        }
    }

    #[test]
    fn strong_morphisms_compose_to_strong(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y) = (r.gen_range(0..=3), r.gen_range(0..=3));
        let p = random_polynomial(&mut r, x, y, 4, 4);
        let f = relabelling(&mut r, &p);
        let g = relabelling(&mut r, f.target());
        prop_assert!(f.is_strong() && g.is_strong());
        prop_assert!(vcompose_polymorph(&g, &f).unwrap().is_strong());
    }

    #[test]
    fn canonical_form_is_isomorphic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_polynomial(&mut r, 2, 2, 4, 4);
        let f = random_polymorphism(&mut r, &p, 4, 2);
        let g = random_polymorphism(&mut r, f.target(), 4, 2);
        let c = vcompose_polymorph(&g, &f).unwrap();
        prop_assert!(are_isomorphic_polymorph(&c, &c.canonical()).unwrap());
        prop_assert!(c.canonical().h().left().is_identity());
    }
}

/// A strong morphism `P => P′` with `P′` a relabelled copy of `P`.
fn relabelling(r: &mut ChaCha8Rng, p: &Polynomial) -> PolyMorphism {
    let se = random_permutation(r, p.e_size());
    let ss = random_permutation(r, p.s_size());
    let (ie, is) = (se.inverse().unwrap(), ss.inverse().unwrap());
    let q = Polynomial::new(
        p.m1().compose(&ie).unwrap(),
        ss.compose(p.m2()).unwrap().compose(&ie).unwrap(),
        p.p().compose(&is).unwrap(),
    )
    .unwrap();
    let pairs = polyspan::finset::pullback(&ss, q.m2()).unwrap();
    let lambda = pairs.pairs().iter().map(|&(_, e2)| ie.apply(e2)).collect();
    PolyMorphism::from_map(p.clone(), q, ss, lambda).unwrap()
}
