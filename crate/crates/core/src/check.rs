//! Seeded property suites, one per acceptance criterion.
//!
//! Case `i` of a run with seed `s` draws its instance from its own RNG seeded
//! with [`case_seed`]`(s, i)`, so a failing case can be replayed alone. When a
//! case fails the runner searches smaller instances (lower scale, nearby
//! seeds) and reports the smallest failure it finds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands;
use crate::document::{serialize, Document};
use crate::error::{Error, Result};
use crate::fincat::{
    comprehensive_factorization, elements, fibers, find_iso_over, find_presheaf_iso,
    gfib_via_cotensor, is_discrete_fibration, is_final, is_groupoid_fibration,
};
use crate::finset::FinSetMap;
use crate::modpoly::{
    compose_polymod, compose_polymod_witnessed, hk_mod, hk_mod_fiberwise, profs_isomorphic,
    ModPolynomial, Profunctor,
};
use crate::poly::{
    compose_poly, compose_poly_witnessed, extension_eval, extension_fiber_sizes, extension_on_map,
    hk_span, polys_isomorphic, Polynomial,
};
use crate::random::*;
use crate::rel::{
    compose_polyrel, hk_rel, hk_rel_via_rif, kleisli_compose, to_partial_map, Relation,
};
use crate::span::{
    count_pb_around_morphisms, distributivity_pullback, is_map, mediate_pb_around,
    random_pb_around, satisfies_triangle_identities, spans_isomorphic, Span,
};

/// Largest instance scale; suites size their random inputs by it.
pub const FULL_SCALE: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    /// The offending instance as documents, or a short description.
    pub instance: String,
    pub message: String,
}

type CaseResult = std::result::Result<(), Failure>;

type CaseFn = fn(&mut ChaCha8Rng, usize) -> CaseResult;

pub struct Suite {
    pub name: &'static str,
    pub default_count: usize,
    pub description: &'static str,
    /// Suites that enumerate everything run a single case.
    pub exhaustive: bool,
    run: CaseFn,
}

pub const SUITES: [Suite; 11] = [
    Suite {
        name: "extension-oracle",
        default_count: 200,
        description: "extension of a composite equals the composite of extensions",
        exhaustive: false,
        run: extension_oracle,
    },
    Suite {
        name: "distributivity",
        default_count: 200,
        description: "every pullback around (f, g) has exactly one map to the distributivity pullback",
        exhaustive: false,
        run: distributivity,
    },
    Suite {
        name: "charleftadj",
        default_count: 1,
        description: "a span is a map iff its left leg is bijective; unit and counit obey the triangle identities",
        exhaustive: true,
        run: charleftadj,
    },
    Suite {
        name: "rel-kleisli",
        default_count: 300,
        description: "relational polynomials compose like partial maps into powersets",
        exhaustive: false,
        run: rel_kleisli,
    },
    Suite {
        name: "grothendieck",
        default_count: 100,
        description: "elements and fibres are mutually inverse up to isomorphism",
        exhaustive: false,
        run: grothendieck,
    },
    Suite {
        name: "comprehensive",
        default_count: 100,
        description: "comprehensive factorisation into a final functor and a discrete fibration",
        exhaustive: false,
        run: comprehensive,
    },
    Suite {
        name: "gfib-cotensor",
        default_count: 200,
        description: "groupoid fibrations: direct definition agrees with the arrow-category criterion",
        exhaustive: false,
        run: gfib_cotensor,
    },
    Suite {
        name: "mod-hk",
        default_count: 100,
        description: "evaluation of module polynomials is pseudofunctorial and both evaluation paths agree",
        exhaustive: false,
        run: mod_hk,
    },
    Suite {
        name: "rel-hk",
        default_count: 100,
        description: "relational evaluation: comma formula equals lifting then composing; functorial and monotone",
        exhaustive: false,
        run: rel_hk,
    },
    Suite {
        name: "discrete-reduction",
        default_count: 50,
        description: "module polynomials over discrete categories reproduce polynomials of finite sets",
        exhaustive: false,
        run: discrete_reduction,
    },
    Suite {
        name: "cli-determinism",
        default_count: 1,
        description: "documented composites and seeded random documents match their golden bytes",
        exhaustive: true,
        run: cli_determinism,
    },
];

pub fn suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

/// SplitMix64 of `seed` and `case`.
pub fn case_seed(seed: u64, case: usize) -> u64 {
    let mut z = seed ^ (case as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub case: usize,
    pub seed: u64,
    pub failure: Failure,
    /// Smallest failing instance found: its seed, scale and failure.
    pub minimal: Option<(u64, usize, Failure)>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub seed: u64,
    pub count: usize,
    pub failures: Vec<CaseReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Human-readable summary; identical for identical runs.
    pub fn render(&self) -> String {
        let mut out = format!(
            "{} seed={} count={}: {} ({} failed)\n",
            self.suite,
            self.seed,
            self.count,
            if self.passed() { "PASS" } else { "FAIL" },
            self.failures.len()
        );
        for f in &self.failures {
            out.push_str(&format!(
                "case {} seed {}: {}\n",
                f.case, f.seed, f.failure.message
            ));
            match &f.minimal {
                Some((seed, scale, m)) => {
                    out.push_str(&format!(
                        "minimal instance (seed {seed}, scale {scale}): {}\n",
                        m.message
                    ));
                    out.push_str(&m.instance);
                }
                None => out.push_str(&f.failure.instance),
            }
            if !out.ends_with('\n') {
                out.push('\n');
            }
        }
        out
    }
}

fn run_case(run: CaseFn, seed: u64, scale: usize) -> CaseResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run(&mut rng, scale)
}

fn shrink(run: CaseFn, seed: u64) -> Option<(u64, usize, Failure)> {
    for scale in 1..FULL_SCALE {
        for j in 0..32 {
            let s = case_seed(seed, j);
            if let Err(f) = run_case(run, s, scale) {
                return Some((s, scale, f));
            }
        }
    }
    None
}

/// Run `count` cases of a suite (exhaustive suites run once) across the
/// available cores; the report lists failures by case index.
pub fn run_suite(name: &str, seed: u64, count: usize) -> Result<SuiteReport> {
    let suite = suite(name).ok_or_else(|| Error::KindMismatch {
        expected: SUITES.iter().map(|s| s.name).collect::<Vec<_>>().join("|"),
        found: name.to_string(),
    })?;
    Ok(run_cases(
        suite.name,
        suite.run,
        suite.exhaustive,
        seed,
        count,
    ))
}

fn run_cases(
    name: &'static str,
    run: CaseFn,
    exhaustive: bool,
    seed: u64,
    count: usize,
) -> SuiteReport {
    let count = if exhaustive { 1 } else { count };
    let threads = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(count.max(1));
    let mut results: Vec<(usize, u64, Failure)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                scope.spawn(move || {
                    (t..count)
                        .step_by(threads)
                        .filter_map(|i| {
                            let s = case_seed(seed, i);
                            run_case(run, s, FULL_SCALE).err().map(|f| (i, s, f))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("suite worker"))
            .collect()
    });
    results.sort_by_key(|r| r.0);
    let failures = results
        .into_iter()
        .map(|(case, s, failure)| CaseReport {
            case,
            seed: s,
            minimal: if exhaustive { None } else { shrink(run, s) },
            failure,
        })
        .collect();
    SuiteReport {
        suite: name,
        seed,
        count,
        failures,
    }
}

fn docs(items: &[Document]) -> String {
    items.iter().map(serialize).collect()
}

fn fail(instance: String, message: impl Into<String>) -> CaseResult {
    Err(Failure {
        instance,
        message: message.into(),
    })
}

/// Turn a core error into a failure of the case.
fn lift<T>(r: Result<T>, instance: &dyn Fn() -> String) -> std::result::Result<T, Failure> {
    r.map_err(|e| Failure {
        instance: instance(),
        message: format!("error: {e}"),
    })
}

fn scaled(full: usize, scale: usize) -> usize {
    (full * scale).div_ceil(FULL_SCALE)
}

fn extension_oracle(r: &mut ChaCha8Rng, scale: usize) -> CaseResult {
    let b = scaled(3, scale);
    let (x, y, z) = (r.gen_range(0..=b), r.gen_range(0..=b), r.gen_range(0..=b));
    let p = random_polynomial(r, x, y, scaled(5, scale), scaled(5, scale));
    let q = random_polynomial(r, y, z, scaled(5, scale), scaled(5, scale));
    let inst = || {
        docs(&[
            Document::Polynomial(q.clone()),
            Document::Polynomial(p.clone()),
        ])
    };
    let w = lift(compose_poly_witnessed(&q, &p), &inst)?;
    for _ in 0..5 {
        let a = random_family(r, x, 2);
        let sizes: Vec<u128> = a.fiber_sizes().iter().map(|&n| n as u128).collect();
        let lhs = lift(extension_fiber_sizes(&w.poly, &sizes), &inst)?;
        let rhs = lift(
            extension_fiber_sizes(&q, &lift(extension_fiber_sizes(&p, &sizes), &inst)?),
            &inst,
        )?;
        if lhs != rhs {
            return fail(
                inst(),
                format!("fibre cardinalities differ on {sizes:?}: {lhs:?} vs {rhs:?}"),
            );
        }
        let direct = lift(extension_eval(&w.poly, &a), &inst)?
            .family
            .fiber_sizes();
        let inner = lift(extension_eval(&p, &a), &inst)?.family;
        let iterated = lift(extension_eval(&q, &inner), &inst)?
            .family
            .fiber_sizes();
        if direct != iterated {
            return fail(inst(), format!("evaluated fibres differ on {sizes:?}"));
        }
    }
    let a = random_family(r, x, 1);
    let iso = lift(w.natural_iso(&a), &inst)?;
    for _ in 0..2 {
        let phi = random_family_map(r, &a, 1);
        let iso2 = lift(w.natural_iso(phi.target()), &inst)?;
        let left = lift(
            iso2.compose(&lift(extension_on_map(&w.poly, &phi), &inst)?),
            &inst,
        )?;
        let inner = lift(extension_on_map(&p, &phi), &inst)?;
        let right = lift(
            lift(extension_on_map(&q, &inner), &inst)?.compose(&iso),
            &inst,
        )?;
        if left != right {
            return fail(inst(), "comparison bijection is not natural");
        }
    }
    Ok(())
}

fn distributivity(r: &mut ChaCha8Rng, scale: usize) -> CaseResult {
    let n = scaled(4, scale);
    let (a, b, c) = (r.gen_range(0..=n), r.gen_range(1..=n), r.gen_range(0..=n));
    let a = if c > 0 { a.max(1) } else { a };
    let f = random_map(r, a, b);
    let g = random_map(r, c, a);
    let inst = || {
        docs(&[
            Document::FinSetMap(f.clone()),
            Document::FinSetMap(g.clone()),
        ])
    };
    let target = lift(distributivity_pullback(&f, &g), &inst)?;
    for _ in 0..5 {
        let other = lift(random_pb_around(&f, &g, r.gen()), &inst)?;
        let count = lift(count_pb_around_morphisms(&target, &other), &inst)?;
        if count != 1 {
            return fail(inst(), format!("{count} mediators"));
        }
        lift(mediate_pb_around(&target, &other), &inst)?;
    }
    Ok(())
}

fn charleftadj(_: &mut ChaCha8Rng, scale: usize) -> CaseResult {
    for apex in 0..=scale {
        for k in 0..=scale {
            for x in 0..=scale {
                for left in FinSetMap::all_maps(apex, k) {
                    for right in FinSetMap::all_maps(apex, x) {
                        let s = Span::new(left.clone(), right).expect("legs share the apex");
                        let inst = || docs(&[Document::Span(s.clone())]);
                        let w = is_map(&s);
                        if w.is_some() != left.is_bijective() {
                            return fail(
                                inst(),
                                "is_map disagrees with bijectivity of the left leg",
                            );
                        }
                        if let Some(w) = w {
                            if !satisfies_triangle_identities(&s, &w) {
                                return fail(inst(), "triangle identities fail");
                            }
                            let phi = s.right().compose(&left.inverse().unwrap()).unwrap();
                            if !spans_isomorphic(&s, &Span::graph(&phi)) {
                                return fail(
                                    inst(),
                                    "map is not isomorphic to the graph of its function",
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn rel_kleisli(r: &mut ChaCha8Rng, scale: usize) -> CaseResult {
    let n = scaled(5, scale);
    let (x, c, d) = (r.gen_range(0..=n), r.gen_range(0..=n), r.gen_range(0..=n));
    let p = random_relpoly(r, x, c);
    let q = random_relpoly(r, c, d);
    let inst = || {
        docs(&[
            Document::RelPolynomial(q.clone()),
            Document::RelPolynomial(p.clone()),
        ])
    };
    let lhs = to_partial_map(&lift(compose_polyrel(&q, &p), &inst)?);
    let rhs = lift(
        kleisli_compose(&to_partial_map(&q), &to_partial_map(&p)),
        &inst,
    )?;
    if lhs != rhs {
        return fail(inst(), "composite differs from the Kleisli composite");
    }
    Ok(())
}

fn grothendieck(r: &mut ChaCha8Rng, scale: usize) -> CaseResult {
    let c = random_fincat(r, scaled(4, scale), scaled(12, scale));
    let p = random_presheaf(r, &c, 3);
    let inst =
        || docs(&[Document::FinCat(c.clone())]) + &format!("presheaf sizes {:?}\n", p.sizes());
    let el = elements(&p);
    if !is_discrete_fibration(&el.proj) {
        return fail(
            inst(),
            "projection of the elements is not a discrete fibration",
        );
    }
    let back = lift(fibers(&el.proj), &inst)?;
    if find_presheaf_iso(&back, &p).is_none() {
        return fail(
            inst(),
            "fibres of the elements are not isomorphic to the presheaf",
        );
    }
    let other = random_presheaf(r, &c, 3);
    let q = lift(
        elements(&other)
            .proj
            .compose(&random_relabelling(r, elements(&other).category())),
        &inst,
    )?;
    let round = elements(&lift(fibers(&q), &inst)?);
    if find_iso_over(&round.proj, &q).is_none() {
        return fail(
            inst() + &docs(&[Document::Functor(q.clone())]),
            "elements of the fibres are not isomorphic over the base",
        );
    }
    Ok(())
}

fn comprehensive(r: &mut ChaCha8Rng, scale: usize) -> CaseResult {
    let g = random_test_functor(r, scaled(3, scale), scaled(8, scale));
    let inst = || docs(&[Document::Functor(g.clone())]);
    let fac = comprehensive_factorization(&g);
    if lift(fac.s.compose(&fac.j), &inst)? != g {
        return fail(inst(), "s ∘ j differs from g");
    }
    if !is_discrete_fibration(&fac.s) {
        return fail(inst(), "s is not a discrete fibration");
    }
    if !is_final(&fac.j) {
        return fail(inst(), "j is not final");
    }
    if is_discrete_fibration(&g) && (find_iso_over(&fac.s, &g).is_none() || !fac.j.is_isomorphism())
    {
        return fail(
            inst(),
            "factorisation of a discrete fibration is not trivial",
        );
    }
    let d = random_dfib(r, g.cod(), 2, 4);
    let fd = comprehensive_factorization(&d);
    if find_iso_over(&fd.s, &d).is_none() || !fd.j.is_isomorphism() {
        return fail(
            docs(&[Document::Functor(d.clone())]),
            "factorisation of a discrete fibration is not trivial",
        );
    }
    Ok(())
}

fn gfib_cotensor(r: &mut ChaCha8Rng, scale: usize) -> CaseResult {
    let p = random_test_functor(r, scaled(3, scale), scaled(8, scale));
    let (direct, via) = (is_groupoid_fibration(&p), gfib_via_cotensor(&p));
    if direct != via {
        return fail(
            docs(&[Document::Functor(p.clone())]),
            format!("direct definition says {direct}, arrow-category criterion says {via}"),
        );
    }
    Ok(())
}

/// Largest cell of an inner evaluation that is evaluated a second time.
const MOD_HK_MAX_CELL: usize = 12;

fn mod_hk(r: &mut ChaCha8Rng, scale: usize) -> CaseResult {
    let (no, nm) = (scaled(3, scale), scaled(8, scale));
    // Redraw until the inner evaluation is small enough to evaluate again.
    let (p, q, u) = loop {
        let (x, c, d) = (
            random_fincat(r, no, nm),
            random_fincat(r, no, nm),
            random_fincat(r, no, nm),
        );
        let k = random_fincat(r, scaled(2, scale), scaled(4, scale));
        let p = random_modpoly(r, &x, &c, no, 2);
        let q = random_modpoly(r, &c, &d, no, 2);
        let u = random_profunctor(r, &k, &x, 3);
        if hk_mod(&p, &u).map_or(true, |v| v.sizes().iter().all(|&n| n <= MOD_HK_MAX_CELL)) {
            break (p, q, u);
        }
    };
    let inst = || {
        docs(&[
            Document::ModPolynomial(q.clone()),
            Document::ModPolynomial(p.clone()),
            Document::Profunctor(u.clone()),
        ])
    };
    let comp = lift(compose_polymod_witnessed(&q, &p), &inst)?;
    if !lift(comp.square_commutes(), &inst)? {
        return fail(inst(), "induced module does not make the square commute");
    }
    let both = |poly: &ModPolynomial, v: &Profunctor| -> std::result::Result<Profunctor, Failure> {
        let a = lift(hk_mod(poly, v), &inst)?;
        let b = lift(hk_mod_fiberwise(poly, v), &inst)?;
        if a.sizes() != b.sizes() || !profs_isomorphic(&a, &b) {
            return Err(Failure {
                instance: inst(),
                message: "the two evaluation paths disagree".into(),
            });
        }
        Ok(a)
    };
    let inner = both(&p, &u)?;
    let rhs = both(&q, &inner)?;
    let lhs = both(&comp.poly, &u)?;
    if lhs.sizes() != rhs.sizes() {
        return fail(
            inst(),
            format!("cell sizes differ: {:?} vs {:?}", lhs.sizes(), rhs.sizes()),
        );
    }
    if !profs_isomorphic(&lhs, &rhs) {
        return fail(inst(), "no natural isomorphism between evaluations");
    }
    Ok(())
}

fn rel_hk(r: &mut ChaCha8Rng, scale: usize) -> CaseResult {
    let n = scaled(4, scale);
    let (k, x, c, d) = (
        r.gen_range(0..=scaled(3, scale)),
        r.gen_range(0..=n),
        r.gen_range(0..=n),
        r.gen_range(0..=n),
    );
    let p = random_relpoly(r, x, c);
    let q = random_relpoly(r, c, d);
    let s = random_relation(r, k, x, 0.5);
    let extra = random_relation(r, k, x, 0.3);
    let inst = || {
        docs(&[
            Document::RelPolynomial(q.clone()),
            Document::RelPolynomial(p.clone()),
            Document::Relation(s.clone()),
        ])
    };
    let h = lift(hk_rel(&p, &s), &inst)?;
    if h != lift(hk_rel_via_rif(&p, &s), &inst)? {
        return fail(inst(), "comma formula differs from lifting then composing");
    }
    let qp = lift(compose_polyrel(&q, &p), &inst)?;
    if lift(hk_rel(&qp, &s), &inst)? != lift(hk_rel(&q, &h), &inst)? {
        return fail(inst(), "evaluation is not functorial");
    }
    let bigger = lift(
        Relation::new(
            k,
            x,
            s.pairs().iter().chain(extra.pairs()).copied().collect(),
        ),
        &inst,
    )?;
    if !h.is_subset_of(&lift(hk_rel(&p, &bigger), &inst)?) {
        return fail(inst(), "evaluation is not monotone");
    }
    Ok(())
}

fn discrete_reduction(r: &mut ChaCha8Rng, scale: usize) -> CaseResult {
    let n = scaled(3, scale);
    let (x, c, d, k) = (
        r.gen_range(1..=n),
        r.gen_range(1..=n),
        r.gen_range(1..=n),
        r.gen_range(1..=2),
    );
    let p = random_polynomial(r, x, c, scaled(4, scale), n);
    let q = random_polynomial(r, c, d, scaled(4, scale), n);
    let apex = r.gen_range(0..=4);
    let s = Span::new(random_map(r, apex, k), random_map(r, apex, x)).expect("random span");
    let inst = || {
        docs(&[
            Document::Polynomial(q.clone()),
            Document::Polynomial(p.clone()),
            Document::Span(s.clone()),
        ])
    };
    let (mp, mq) = (
        ModPolynomial::from_polynomial(&p),
        ModPolynomial::from_polynomial(&q),
    );
    let via_mod = lift(
        lift(compose_polymod(&mq, &mp), &inst)?.to_polynomial(),
        &inst,
    )?;
    if !polys_isomorphic(&via_mod, &lift(compose_poly(&q, &p), &inst)?) {
        return fail(inst(), "composites differ under the matrix embedding");
    }
    let lhs = lift(hk_mod(&mp, &Profunctor::from_span(&s)), &inst)?;
    let rhs = Profunctor::from_span(&lift(hk_span(&p, &s), &inst)?);
    if lhs.sizes() != rhs.sizes() {
        return fail(
            inst(),
            format!("evaluations differ: {:?} vs {:?}", lhs.sizes(), rhs.sizes()),
        );
    }
    Ok(())
}

/// Golden documents: inputs, and expected outputs of the documented
/// composites and seeded random documents.
pub mod goldens {
    pub const A2: &str = include_str!("../../../goldens/a2.json");
    pub const B3: &str = include_str!("../../../goldens/b3.json");
    pub const A2_AFTER_B3: &str = include_str!("../../../goldens/a2_after_b3.json");
    pub const A_PLUS_1: &str = include_str!("../../../goldens/a_plus_1.json");
    pub const B_PLUS_1: &str = include_str!("../../../goldens/b_plus_1.json");
    pub const A_PLUS_1_AFTER_B_PLUS_1: &str =
        include_str!("../../../goldens/a_plus_1_after_b_plus_1.json");
    /// `(kind, seed, expected output)`.
    pub const RANDOM: [(&str, u64, &str); 3] = [
        (
            "polynomial",
            1,
            include_str!("../../../goldens/random_polynomial_1.json"),
        ),
        (
            "rel-polynomial",
            2,
            include_str!("../../../goldens/random_rel_polynomial_2.json"),
        ),
        (
            "mod-polynomial",
            3,
            include_str!("../../../goldens/random_mod_polynomial_3.json"),
        ),
    ];
}

fn cli_determinism(_: &mut ChaCha8Rng, _: usize) -> CaseResult {
    let compose_cases = [
        (goldens::A2, goldens::B3, goldens::A2_AFTER_B3),
        (
            goldens::A_PLUS_1,
            goldens::B_PLUS_1,
            goldens::A_PLUS_1_AFTER_B_PLUS_1,
        ),
    ];
    for (lhs, rhs, want) in compose_cases {
        let inst = || format!("{lhs}{rhs}");
        for _ in 0..2 {
            let got = lift(commands::compose("set", lhs, rhs), &inst)?;
            if got != want {
                return fail(inst(), "composite differs from its golden bytes");
            }
        }
    }
    let a6 = Polynomial::from_exponents(&[6]);
    match crate::document::parse(goldens::A2_AFTER_B3) {
        Ok(Document::Polynomial(p)) if polys_isomorphic(&p, &a6) => {}
        _ => return fail(goldens::A2_AFTER_B3.into(), "golden composite is not A^6"),
    }
    for (kind, seed, want) in goldens::RANDOM {
        for _ in 0..2 {
            let got = lift(commands::random(kind, seed), &|| {
                format!("{kind} seed {seed}")
            })?;
            if got != want {
                return fail(
                    format!("{kind} seed {seed}\n"),
                    "random document differs from its golden bytes",
                );
            }
        }
    }
    Ok(())
}
