use polyspan::fincat::*;
use polyspan::finset::FinSetMap;
use polyspan::modpoly::*;
use polyspan::poly::{compose_poly, hk_span, polys_isomorphic};
use polyspan::random::*;
use polyspan::span::Span;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_cat(r: &mut ChaCha8Rng) -> FinCat {
    random_fincat(r, 3, 8)
}

fn relabel(r: &mut ChaCha8Rng, p: &Presheaf) -> Presheaf {
    let base = p.base();
    let perms: Vec<Vec<usize>> = p
        .sizes()
        .iter()
        .map(|&n| {
            let mut v: Vec<usize> = (0..n).collect();
            v.shuffle(r);
            v
        })
        .collect();
    let inv: Vec<Vec<usize>> = perms
        .iter()
        .map(|v| {
            let mut w = vec![0; v.len()];
            for (i, &j) in v.iter().enumerate() {
                w[j] = i;
            }
            w
        })
        .collect();
    let action = (0..base.n_morphisms())
        .map(|m| {
            let (s, t) = (base.src(m), base.tgt(m));
            let table = (0..p.size_at(t))
                .map(|y| perms[s][p.act(m, inv[t][y])])
                .collect();
            FinSetMap::new(p.size_at(t), p.size_at(s), table).unwrap()
        })
        .collect();
    Presheaf::new(
        base.clone(),
        p.sizes()
            .into_iter()
            .map(polyspan::finset::FinSet::new)
            .collect(),
        action,
    )
    .unwrap()
}

/// Object bijections `el(P) -> el(Q)` over the base that extend to functors.
fn isos_over_base(p: &Functor, q: &Functor) -> Vec<Vec<usize>> {
    let (e, e2) = (p.dom(), q.dom());
    let n = e.n_objects();
    let mut out = Vec::new();
    let cands: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| q.ob(y) == p.ob(x)).collect())
        .collect();
    for phi in polyspan::finset::LexProduct::new(cands) {
        let mut sorted = phi.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != n {
            continue;
        }
        let extends = (0..e.n_morphisms()).all(|m| {
            e2.hom(phi[e.src(m)], phi[e.tgt(m)])
                .iter()
                .any(|&m2| q.mo(m2) == p.mo(m))
        });
        if extends {
            out.push(phi);
        }
    }
    out
}

#[test]
fn graph_modules_compose_like_functors() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let (a, b, c) = (small_cat(&mut r), small_cat(&mut r), small_cat(&mut r));
        let f = random_functor(&mut r, &a, &b);
        let g = random_functor(&mut r, &b, &c);
        let lhs = graph_module(&g.compose(&f).unwrap());
        let rhs = prof_compose(&graph_module(&g), &graph_module(&f)).unwrap();
        assert!(profs_isomorphic(&lhs, &rhs));
    }
}

#[test]
fn lifting_is_universal() {
    let mut r = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let y = random_fincat(&mut r, 2, 4);
        let s = random_fincat(&mut r, 2, 4);
        let k = random_fincat(&mut r, 2, 3);
        let n = random_profunctor(&mut r, &s, &y, 2);
        let u = random_profunctor(&mut r, &k, &y, 2);
        let v = random_profunctor(&mut r, &k, &s, 2);
        let lift = rif_mod(&n, &u).unwrap();
        let into_lift = ProfCell::enumerate(&v, &lift.module).unwrap();
        let nv = prof_compose(&n, &v).unwrap();
        let into_u = ProfCell::enumerate(&nv, &u).unwrap();
        let mut images: Vec<_> = into_lift
            .iter()
            .map(|b| lift.transpose(b).unwrap())
            .collect();
        assert_eq!(images.len(), into_u.len());
        images.sort_by(|a, b| {
            a.components()
                .iter()
                .map(|c| c.table())
                .cmp(b.components().iter().map(|c| c.table()))
        });
        images.dedup();
        assert_eq!(images.len(), into_u.len(), "transposition is injective");
    }
}

#[test]
fn tabulation_examples() {
    let c = FinCat::ordinal(3);
    let slice = tabulate_mod(&Presheaf::representable(&c, 1));
    assert_eq!(slice.category().n_objects(), 2);
    let whole = tabulate_mod(&Presheaf::constant(&c, 1));
    assert!(whole.proj.is_isomorphism());
    assert_eq!(
        tabulate_mod(&Presheaf::constant(&c, 0))
            .category()
            .n_objects(),
        0
    );
}

#[test]
fn identity_lifter_whiskers_by_the_neat_leg() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let (x, c) = (small_cat(&mut r), small_cat(&mut r));
        let d = small_cat(&mut r);
        let p = random_modpoly(&mut r, &x, &c, 3, 2);
        let g = random_dfib(&mut r, &d, 2, 3);
        // Q = (hom, g) over its own domain, composed after a P landing there
        let t = g.dom().clone();
        let q = ModPolynomial::new(Profunctor::hom(&t), g.clone()).unwrap();
        let p2 = random_modpoly(&mut r, &x, &t, 3, 2);
        let comp = compose_polymod(&q, &p2).unwrap();
        let u = random_profunctor(&mut r, &FinCat::terminal(), &x, 2);
        let lhs = hk_mod(&comp, &u).unwrap();
        let rhs = prof_compose(&graph_module(&g), &hk_mod(&p2, &u).unwrap()).unwrap();
        assert!(profs_isomorphic(&lhs, &rhs));
        let _ = p;
    }
}

#[test]
fn terminal_boundaries_give_monomial_counts() {
    // X = C = D = 1: a polynomial is a family of sets with discrete middle
    let one = FinCat::terminal();
    let mono = |k: usize| {
        let s = FinCat::terminal();
        ModPolynomial::new(Profunctor::matrix(1, 1, vec![k]), Functor::identity(&s)).unwrap()
    };
    let comp = compose_polymod(&mono(2), &mono(3)).unwrap();
    let u = Profunctor::matrix(1, 1, vec![2]);
    assert_eq!(hk_mod(&comp, &u).unwrap().sizes(), vec![64]);
    let _ = one;
}

fn discrete_span(r: &mut ChaCha8Rng, k: usize, x: usize) -> Span {
    let a = if k == 0 || x == 0 {
        0
    } else {
        r.gen_range(0..=4)
    };
    Span::new(random_map(r, a, k), random_map(r, a, x)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn composition_of_modules_is_associative_and_unital(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let cats: Vec<FinCat> = (0..4).map(|_| small_cat(&mut r)).collect();
        let m1 = random_profunctor(&mut r, &cats[0], &cats[1], 2);
        let m2 = random_profunctor(&mut r, &cats[1], &cats[2], 2);
        let m3 = random_profunctor(&mut r, &cats[2], &cats[3], 2);
        let left = prof_compose(&prof_compose(&m3, &m2).unwrap(), &m1).unwrap();
        let right = prof_compose(&m3, &prof_compose(&m2, &m1).unwrap()).unwrap();
        prop_assert!(profs_isomorphic(&left, &right));
        prop_assert!(profs_isomorphic(&prof_compose(&Profunctor::hom(&cats[1]), &m1).unwrap(), &m1));
        prop_assert!(profs_isomorphic(&prof_compose(&m1, &Profunctor::hom(&cats[0])).unwrap(), &m1));
    }

    #[test]
    fn composite_square_and_pseudofunctoriality(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (x, c, d) = (small_cat(&mut r), small_cat(&mut r), small_cat(&mut r));
        let k = random_fincat(&mut r, 2, 4);
        let p = random_modpoly(&mut r, &x, &c, 3, 2);
        let q = random_modpoly(&mut r, &c, &d, 3, 2);
        let u = random_profunctor(&mut r, &k, &x, 3);
        let comp = compose_polymod_witnessed(&q, &p).unwrap();
        prop_assert!(comp.square_commutes().unwrap());
        let lhs = hk_mod(&comp.poly, &u).unwrap();
        let rhs = hk_mod(&q, &hk_mod(&p, &u).unwrap()).unwrap();
        prop_assert_eq!(lhs.sizes(), rhs.sizes());
        prop_assert!(profs_isomorphic(&lhs, &rhs));
    }

    #[test]
    fn both_evaluation_paths_agree(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (small_cat(&mut r), small_cat(&mut r));
        let k = random_fincat(&mut r, 2, 4);
        let p = random_modpoly(&mut r, &x, &y, 3, 2);
        let u = random_profunctor(&mut r, &k, &x, 3);
        let a = hk_mod(&p, &u).unwrap();
        let b = hk_mod_fiberwise(&p, &u).unwrap();
        prop_assert_eq!(a.sizes(), b.sizes());
        prop_assert!(profs_isomorphic(&a, &b));
        let id = ModPolynomial::identity(&x);
        prop_assert!(profs_isomorphic(&hk_mod(&id, &u).unwrap(), &u));
    }

    #[test]
    fn discrete_reduction(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (x, c, d, k) = (r.gen_range(1..=3), r.gen_range(1..=3), r.gen_range(1..=3), r.gen_range(1..=2));
        let p = random_polynomial(&mut r, x, c, 4, 3);
        let q = random_polynomial(&mut r, c, d, 4, 3);
        let mp = ModPolynomial::from_polynomial(&p);
        let mq = ModPolynomial::from_polynomial(&q);
        let lhs = compose_polymod(&mq, &mp).unwrap().to_polynomial().unwrap();
        prop_assert!(polys_isomorphic(&lhs, &compose_poly(&q, &p).unwrap()));
        let s = discrete_span(&mut r, k, x);
        let via_mod = hk_mod(&mp, &Profunctor::from_span(&s)).unwrap();
        let via_span = Profunctor::from_span(&hk_span(&p, &s).unwrap());
        prop_assert_eq!(via_mod.sizes(), via_span.sizes());
    }

    #[test]
    fn fibres_and_elements_round_trip(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let c = random_fincat(&mut r, 4, 12);
        let p = random_presheaf(&mut r, &c, 3);
        let el = tabulate_mod(&p);
        let direct = fiber_presheaf(&el.proj).unwrap();
        prop_assert!(find_presheaf_iso(&direct, &p).is_some());
        prop_assert!(find_presheaf_iso(&fiber_presheaf_via_coend(&el.proj).unwrap(), &p).is_some());
    }

    #[test]
    fn iso_counts_match_on_both_sides(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let c = small_cat(&mut r);
        let p = random_presheaf(&mut r, &c, 3);
        let q = relabel(&mut r, &p);
        let (ep, eq) = (elements(&p), elements(&q));
        let module_side = presheaf_isos(&p, &q).unwrap();
        let fibre_side = isos_over_base(&ep.proj, &eq.proj);
        prop_assert_eq!(module_side.len(), fibre_side.len());
        for theta in &module_side {
            let phi: Vec<usize> = (0..ep.category().n_objects())
                .map(|o| {
                    let (b, t) = ep.decode(o);
                    eq.object(b, theta[b].apply(t))
                })
                .collect();
            prop_assert!(fibre_side.contains(&phi));
        }
    }

    #[test]
    fn pushforward_of_discrete_fibrations(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (f, e) = (small_cat(&mut r), small_cat(&mut r));
        let rr = random_dfib(&mut r, &f, 2, 4);
        let g = random_dfib(&mut r, &e, 2, 3);
        // g is itself a discrete fibration over e; push r over g's domain
        let r2 = random_dfib(&mut r, g.dom(), 2, 4);
        let fac = psh_on_dfib(&g, &r2).unwrap();
        prop_assert!(find_iso_over(&fac.s, &g.compose(&r2).unwrap()).is_some());
        let id = psh_on_dfib(&Functor::identity(&f), &rr).unwrap();
        prop_assert!(find_iso_over(&id.s, &rr).is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn cotensor_decomposition_round_trips(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = small_cat(&mut r);
        let k = random_fincat(&mut r, 2, 4);
        let ct = cotensor2_mod(&a);
        let m = random_profunctor(&mut r, &k, &ct.cat, 2);
        let (m0, m1, phi) = ct.decompose(&m).unwrap();
        prop_assert_eq!(ct.assemble(&phi).unwrap(), m);
        prop_assert_eq!(phi.source(), &m0);
        prop_assert_eq!(phi.target(), &m1);
        // and from an arbitrary cell between two modules
        let n0 = random_profunctor(&mut r, &k, &a, 2);
        let n1 = random_profunctor(&mut r, &k, &a, 2);
        if let Some(psi) = ProfCell::enumerate(&n0, &n1).unwrap().first() {
            let assembled = ct.assemble(psi).unwrap();
            prop_assert_eq!(&ct.decompose(&assembled).unwrap().2, psi);
        }
    }
}
