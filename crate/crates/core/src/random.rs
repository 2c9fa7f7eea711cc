//! Seeded generators for random finite structures.
//!
//! Every generator takes an explicit RNG so that a seed fully determines its
//! output; callers use `ChaCha8Rng::seed_from_u64`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::UnionFind;
use crate::fincat::{elements, FinCat, Functor, Presheaf};
use crate::finset::{FinSetMap, Subset};
use crate::modpoly::{ModPolynomial, Profunctor};
use crate::poly::{FamilyMap, IndexedFamily, PolyMorphism, Polynomial};
use crate::rel::{RelPolynomial, Relation};

/// A uniformly random map `dom -> cod`; `cod` must be nonempty when `dom` is.
pub fn random_map<R: Rng>(rng: &mut R, dom: usize, cod: usize) -> FinSetMap {
    assert!(
        dom == 0 || cod > 0,
        "no map from a nonempty set to the empty set"
    );
    FinSetMap::raw(dom, cod, (0..dom).map(|_| rng.gen_range(0..cod)).collect())
}

/// A random bijection of `n`.
pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> FinSetMap {
    let mut t: Vec<usize> = (0..n).collect();
    t.shuffle(rng);
    FinSetMap::raw(n, n, t)
}

/// A random polynomial `X ← E → S → Y` with `|E| ≤ max_e`, `|S| ≤ max_s`.
pub fn random_polynomial<R: Rng>(
    rng: &mut R,
    x: usize,
    y: usize,
    max_e: usize,
    max_s: usize,
) -> Polynomial {
    let s = if y == 0 { 0 } else { rng.gen_range(0..=max_s) };
    let e = if s == 0 || x == 0 {
        0
    } else {
        rng.gen_range(0..=max_e)
    };
    Polynomial::new(
        random_map(rng, e, x),
        random_map(rng, e, s),
        random_map(rng, s, y),
    )
    .unwrap()
}

/// A random family over `base` with fibres of size at most `max_fiber`.
pub fn random_family<R: Rng>(rng: &mut R, base: usize, max_fiber: usize) -> IndexedFamily {
    let sizes: Vec<usize> = (0..base).map(|_| rng.gen_range(0..=max_fiber)).collect();
    IndexedFamily::from_fiber_sizes(&sizes)
}

/// A random family `A′` and map `A -> A′` over the common base.
pub fn random_family_map<R: Rng>(rng: &mut R, a: &IndexedFamily, max_fiber: usize) -> FamilyMap {
    let sizes: Vec<usize> = (0..a.base_size())
        .map(|b| {
            let lo = usize::from(!a.fiber(b).is_empty());
            rng.gen_range(lo..=max_fiber.max(lo))
        })
        .collect();
    let target = IndexedFamily::from_fiber_sizes(&sizes);
    let table = (0..a.total_size())
        .map(|i| {
            let fib = target.fiber(a.proj().apply(i));
            fib[rng.gen_range(0..fib.len())]
        })
        .collect();
    FamilyMap::new(
        a.clone(),
        target,
        FinSetMap::raw(a.total_size(), sizes.iter().sum(), table),
    )
    .unwrap()
}

/// A random morphism out of `source`: a random `S′` over `Y` receiving `φ`,
/// exponents over each `s′` drawn from the `X`-values common to its preimage,
/// and a random `λ`.
pub fn random_polymorphism<R: Rng>(
    rng: &mut R,
    source: &Polynomial,
    max_s: usize,
    max_fiber: usize,
) -> PolyMorphism {
    let (x, y) = (source.x_size(), source.y_size());
    let mut needed: Vec<usize> = source.p().table().to_vec();
    needed.sort_unstable();
    needed.dedup();
    let extra = rng.gen_range(0..=max_s.saturating_sub(needed.len()));
    let mut p2 = needed.clone();
    if y > 0 {
        p2.extend((0..extra).map(|_| rng.gen_range(0..y)));
    }
    p2.shuffle(rng);
    let s2 = p2.len();
    let phi: Vec<usize> = (0..source.s_size())
        .map(|s| {
            let over: Vec<usize> = (0..s2).filter(|&t| p2[t] == source.p().apply(s)).collect();
            over[rng.gen_range(0..over.len())]
        })
        .collect();
    let fibers = source.m2().fibers();
    let mut m1 = Vec::new();
    let mut m2 = Vec::new();
    for t in 0..s2 {
        let pre: Vec<usize> = (0..source.s_size()).filter(|&s| phi[s] == t).collect();
        let allowed: Vec<usize> = (0..x)
            .filter(|&xv| {
                pre.iter()
                    .all(|&s| fibers[s].iter().any(|&e| source.m1().apply(e) == xv))
            })
            .collect();
        if allowed.is_empty() {
            continue;
        }
        for _ in 0..rng.gen_range(0..=max_fiber) {
            m1.push(allowed[rng.gen_range(0..allowed.len())]);
            m2.push(t);
        }
    }
    let e2 = m1.len();
    let target = Polynomial::new(
        FinSetMap::raw(e2, x, m1),
        FinSetMap::raw(e2, s2, m2),
        FinSetMap::raw(s2, y, p2),
    )
    .unwrap();
    let phi = FinSetMap::raw(source.s_size(), s2, phi);
    let pairs = crate::finset::pullback(&phi, target.m2()).unwrap();
    let lambda = pairs
        .pairs()
        .iter()
        .map(|&(s, e2)| {
            let xv = target.m1().apply(e2);
            let cands: Vec<usize> = fibers[s]
                .iter()
                .copied()
                .filter(|&e| source.m1().apply(e) == xv)
                .collect();
            cands[rng.gen_range(0..cands.len())]
        })
        .collect();
    PolyMorphism::from_map(source.clone(), target, phi, lambda).unwrap()
}

/// A random relation in which each pair is present with probability `density`.
pub fn random_relation<R: Rng>(rng: &mut R, src: usize, tgt: usize, density: f64) -> Relation {
    Relation::from_predicate(src, tgt, |_, _| rng.gen_bool(density))
}

/// A random subset of `n`, each element present with probability `density`.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize, density: f64) -> Subset {
    let mask: Vec<bool> = (0..n).map(|_| rng.gen_bool(density)).collect();
    Subset::from_predicate(n, |i| mask[i])
}

/// A random polynomial `X -> C` in relations.
pub fn random_relpoly<R: Rng>(rng: &mut R, x: usize, c: usize) -> RelPolynomial {
    let z = random_subset(rng, c, 0.7);
    let a = random_relation(rng, x, z.len(), 0.4);
    RelPolynomial::new(x, z, a).unwrap()
}

/// A random preorder on `n` objects; back edges make some objects isomorphic.
pub fn random_preorder<R: Rng>(rng: &mut R, n: usize) -> FinCat {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let p = if i < j { 0.4 } else { 0.1 };
            if i != j && rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    FinCat::preorder(n, &edges)
}

fn random_monoid<R: Rng>(rng: &mut R) -> FinCat {
    match rng.gen_range(0..3) {
        0 => FinCat::cyclic_group(rng.gen_range(1..=3)),
        // {1, e} with e·e = e
        1 => FinCat::monoid(2, &[0, 1, 1, 1]).expect("idempotent monoid"),
        // {1, a, b} with xy = x for x ≠ 1
        _ => FinCat::monoid(3, &[0, 1, 2, 1, 1, 1, 2, 2, 2]).expect("left-zero monoid"),
    }
}

/// A random category with between 1 and `max_obj` objects and at most
/// `max_mor` morphisms, drawn from preorders, free categories on acyclic
/// graphs, small monoids, products and disjoint unions of these.
pub fn random_fincat<R: Rng>(rng: &mut R, max_obj: usize, max_mor: usize) -> FinCat {
    assert!(max_obj >= 1 && max_mor >= max_obj);
    loop {
        let n = rng.gen_range(1..=max_obj);
        let c = match rng.gen_range(0..5) {
            0 => random_preorder(rng, n),
            1 => {
                let mut edges = Vec::new();
                for _ in 0..rng.gen_range(0..=n + 1) {
                    let i = rng.gen_range(0..n);
                    let j = rng.gen_range(0..n);
                    if i < j {
                        edges.push((i, j));
                    }
                }
                match FinCat::free_on_dag(n, &edges, max_mor + 1) {
                    Ok(c) => c,
                    Err(_) => continue,
                }
            }
            2 => random_monoid(rng),
            3 => {
                let k = rng.gen_range(1..=2.min(max_obj));
                let p = random_preorder(rng, k);
                FinCat::product(&p, &random_monoid(rng))
            }
            _ => {
                if max_obj < 2 {
                    continue;
                }
                let k = rng.gen_range(1..max_obj);
                let a = random_fincat(rng, k, max_mor);
                let b = random_fincat(rng, max_obj - k, max_mor);
                FinCat::coproduct(&a, &b)
            }
        };
        if c.n_objects() <= max_obj && c.n_morphisms() <= max_mor {
            return c;
        }
    }
}

/// A random functor `dom -> cod`, found by randomised backtracking from a
/// random object assignment; falls back to a constant functor.
pub fn random_functor<R: Rng>(rng: &mut R, dom: &FinCat, cod: &FinCat) -> Functor {
    assert!(
        dom.n_objects() == 0 || cod.n_objects() > 0,
        "no functor into the empty category"
    );
    for _ in 0..20 {
        let obj: Vec<usize> = (0..dom.n_objects())
            .map(|_| rng.gen_range(0..cod.n_objects()))
            .collect();
        let mut mor = vec![usize::MAX; dom.n_morphisms()];
        for o in 0..dom.n_objects() {
            mor[dom.id(o)] = cod.id(obj[o]);
        }
        let order: Vec<usize> = (0..dom.n_morphisms())
            .filter(|&f| !dom.is_identity(f))
            .collect();
        let mut budget = 5_000usize;
        if assign_functor(rng, dom, cod, &obj, &order, 0, &mut mor, &mut budget) {
            return Functor::new(dom.clone(), cod.clone(), obj, mor)
                .expect("search produces a functor");
        }
    }
    Functor::constant(dom, cod, rng.gen_range(0..cod.n_objects()))
}

#[allow(clippy::too_many_arguments)]
fn assign_functor<R: Rng>(
    rng: &mut R,
    dom: &FinCat,
    cod: &FinCat,
    obj: &[usize],
    order: &[usize],
    i: usize,
    mor: &mut Vec<usize>,
    budget: &mut usize,
) -> bool {
    if i == order.len() {
        return true;
    }
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let f = order[i];
    let mut cands = cod.hom(obj[dom.src(f)], obj[dom.tgt(f)]).to_vec();
    cands.shuffle(rng);
    for c in cands {
        mor[f] = c;
        let ok = dom.composition_triples().iter().all(|&(g, h, gh)| {
            let (a, b, ab) = (mor[g], mor[h], mor[gh]);
            a == usize::MAX || b == usize::MAX || ab == usize::MAX || cod.comp(a, b) == ab
        });
        if ok && assign_functor(rng, dom, cod, obj, order, i + 1, mor, budget) {
            return true;
        }
    }
    mor[f] = usize::MAX;
    false
}

/// A random presheaf with at most `max_value` elements at each object: a
/// quotient of a sum of representables (and possibly a singleton) by a
/// random congruence.
pub fn random_presheaf<R: Rng>(rng: &mut R, base: &FinCat, max_value: usize) -> Presheaf {
    let n = base.n_objects();
    if n == 0 {
        return Presheaf::constant(base, 0);
    }
    // generators: Some(g) for B(-, g), None for the terminal presheaf
    let count = if rng.gen_bool(0.1) {
        0
    } else {
        rng.gen_range(1..=3)
    };
    let mut gens: Vec<Option<usize>> = (0..count).map(|_| Some(rng.gen_range(0..n))).collect();
    if rng.gen_bool(0.3) {
        gens.push(None);
    }
    let mut elems: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for b in 0..n {
        for (j, g) in gens.iter().enumerate() {
            match g {
                Some(g) => elems[b].extend(base.hom(b, *g).iter().map(|&psi| (j, psi))),
                None => elems[b].push((j, usize::MAX)),
            }
        }
    }
    let mut offset = vec![0; n + 1];
    for b in 0..n {
        offset[b + 1] = offset[b] + elems[b].len();
    }
    let act = |beta: usize, x: usize| -> usize {
        let (b2, b) = (base.src(beta), base.tgt(beta));
        let (j, psi) = elems[b][x - offset[b]];
        let img = if psi == usize::MAX {
            (j, psi)
        } else {
            (j, base.comp(psi, beta))
        };
        offset[b2] + elems[b2].iter().position(|&e| e == img).unwrap()
    };
    let mut uf = UnionFind::new(offset[n]);
    let close = |uf: &mut UnionFind| loop {
        let mut changed = false;
        for beta in 0..base.n_morphisms() {
            let b = base.tgt(beta);
            for x in offset[b]..offset[b + 1] {
                let rx = uf.find(x);
                if rx != x {
                    let (ix, ir) = (act(beta, x), act(beta, rx));
                    if uf.find(ix) != uf.find(ir) {
                        uf.union(ix, ir);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    };
    let roots = |uf: &mut UnionFind, b: usize| -> Vec<usize> {
        let mut r: Vec<usize> = (offset[b]..offset[b + 1]).map(|x| uf.find(x)).collect();
        r.sort_unstable();
        r.dedup();
        r
    };
    for _ in 0..rng.gen_range(0..=2) {
        let b = rng.gen_range(0..n);
        let r = roots(&mut uf, b);
        if r.len() >= 2 {
            uf.union(r[rng.gen_range(0..r.len())], r[rng.gen_range(0..r.len())]);
            close(&mut uf);
        }
    }
    for b in 0..n {
        loop {
            let r = roots(&mut uf, b);
            if r.len() <= max_value {
                break;
            }
            let i = rng.gen_range(0..r.len());
            let j = (i + rng.gen_range(1..r.len())) % r.len();
            uf.union(r[i], r[j]);
            close(&mut uf);
        }
    }
    let reps: Vec<Vec<usize>> = (0..n).map(|b| roots(&mut uf, b)).collect();
    let sizes = reps.iter().map(Vec::len).collect();
    let tables = (0..base.n_morphisms())
        .map(|beta| {
            let b2 = base.src(beta);
            reps[base.tgt(beta)]
                .iter()
                .map(|&x| {
                    let r = uf.find(act(beta, x));
                    reps[b2].binary_search(&r).unwrap()
                })
                .collect()
        })
        .collect();
    Presheaf::from_tables(base.clone(), sizes, tables)
        .expect("quotient of a presheaf by a congruence")
}

/// A random module `src -> tgt` with at most `max_value` elements per cell.
pub fn random_profunctor<R: Rng>(
    rng: &mut R,
    src: &FinCat,
    tgt: &FinCat,
    max_value: usize,
) -> Profunctor {
    let p = random_presheaf(rng, &Profunctor::cell_category(src, tgt), max_value);
    Profunctor::from_presheaf(src.clone(), tgt.clone(), p).expect("presheaf on the cell category")
}

/// A random discrete fibration over `base` with at most `max_total` objects,
/// nonempty unless that keeps failing.
pub fn random_dfib<R: Rng>(
    rng: &mut R,
    base: &FinCat,
    max_value: usize,
    max_total: usize,
) -> Functor {
    for _ in 0..50 {
        let p = random_presheaf(rng, base, max_value);
        let total: usize = p.sizes().iter().sum();
        if (1..=max_total).contains(&total) {
            return elements(&p).proj;
        }
    }
    elements(&Presheaf::constant(base, 0)).proj
}

/// A random polynomial `X -> Y` in modules, with at most `max_s` objects in
/// the middle category and at most `max_value` elements per lifter cell.
pub fn random_modpoly<R: Rng>(
    rng: &mut R,
    x: &FinCat,
    y: &FinCat,
    max_s: usize,
    max_value: usize,
) -> ModPolynomial {
    let p = random_dfib(rng, y, 2, max_s);
    let m = random_profunctor(rng, p.dom(), x, max_value);
    ModPolynomial::new(m, p).expect("random polynomial in modules")
}

/// An isomorphism `C′ -> c` out of a copy of `c` whose object and morphism
/// indices are shuffled.
pub fn random_relabelling<R: Rng>(rng: &mut R, c: &FinCat) -> Functor {
    let (n, m) = (c.n_objects(), c.n_morphisms());
    let po = random_permutation(rng, n);
    let pm = random_permutation(rng, m);
    let (io, im) = (po.inverse().unwrap(), pm.inverse().unwrap());
    let src = (0..m).map(|i| io.apply(c.src(pm.apply(i)))).collect();
    let tgt = (0..m).map(|i| io.apply(c.tgt(pm.apply(i)))).collect();
    let ids = (0..n).map(|j| im.apply(c.id(po.apply(j)))).collect();
    let triples: Vec<(usize, usize, usize)> = c
        .composition_triples()
        .into_iter()
        .map(|(g, f, h)| (im.apply(g), im.apply(f), im.apply(h)))
        .collect();
    let copy = FinCat::new(
        crate::finset::FinSet::new(n),
        crate::finset::FinSet::new(m),
        src,
        tgt,
        ids,
        &triples,
    )
    .expect("relabelled category");
    Functor::new(copy, c.clone(), po.table().to_vec(), pm.table().to_vec())
        .expect("relabelling isomorphism")
}

/// A random functor from a mix of sources: arbitrary functors between random
/// categories, projections of categories of elements, product projections and
/// identities, each precomposed with a relabelling.
pub fn random_test_functor<R: Rng>(rng: &mut R, max_obj: usize, max_mor: usize) -> Functor {
    let f = match rng.gen_range(0..5) {
        0 | 1 => {
            let a = random_fincat(rng, max_obj, max_mor);
            let b = random_fincat(rng, max_obj, max_mor);
            random_functor(rng, &a, &b)
        }
        2 => {
            let b = random_fincat(rng, max_obj, max_mor);
            loop {
                let p = random_presheaf(rng, &b, 2);
                let total: usize = p.sizes().iter().sum();
                if total <= max_obj {
                    break elements(&p).proj;
                }
            }
        }
        3 => {
            let a = random_fincat(rng, max_obj.min(2), max_mor / 3);
            let b = match rng.gen_range(0..3) {
                0 => FinCat::discrete(2),
                1 => FinCat::cyclic_group(2),
                _ => FinCat::ordinal(2),
            };
            let prod = FinCat::product(&a, &b);
            let (nb, mb) = (b.n_objects(), b.n_morphisms());
            let obj = (0..prod.n_objects()).map(|o| o / nb).collect();
            let mor = (0..prod.n_morphisms()).map(|m| m / mb).collect();
            Functor::new(prod, a, obj, mor).expect("product projection")
        }
        _ => Functor::identity(&random_fincat(rng, max_obj, max_mor)),
    };
    let iso = random_relabelling(rng, f.dom());
    f.compose(&iso).expect("relabelled functor")
}
