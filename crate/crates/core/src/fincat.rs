//! Finite categories, functors, natural transformations and set-valued
//! presheaves, together with comma constructions, fibration predicates, the
//! category of elements and the comprehensive factorisation.

use std::collections::HashMap;
use std::hash::Hash;

use crate::algebra::{enumerate_homomorphisms, find_isomorphism, UnaryAlgebra, UnionFind};
use crate::error::{Error, Result};
use crate::finset::{pullback, FinSet, FinSetMap};

const NONE: usize = usize::MAX;

/// A finite category with a total composition table on composable pairs.
///
/// Validity (identity laws, associativity, endpoint bookkeeping) is checked
/// when the category is built, so every `FinCat` value is lawful.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCat {
    objects: FinSet,
    morphisms: FinSet,
    src: Vec<usize>,
    tgt: Vec<usize>,
    ids: Vec<usize>,
    /// `comp[g * n + f] = g ∘ f`, `NONE` where not composable.
    comp: Vec<usize>,
    homs: Vec<Vec<usize>>,
    inverses: Vec<Option<usize>>,
}

impl FinCat {
    /// Build a category from its composition triples `(g, f, g∘f)`, one per
    /// composable pair.
    pub fn new(
        objects: FinSet,
        morphisms: FinSet,
        src: Vec<usize>,
        tgt: Vec<usize>,
        identities: Vec<usize>,
        composition: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let n = morphisms.size();
        let mut comp = vec![NONE; n * n];
        for &(g, f, h) in composition {
            if g >= n || f >= n || h >= n {
                return Err(Error::invariant(
                    "FinCat",
                    "composition_range",
                    format!("entry ({g}, {f}, {h}) refers to a missing morphism"),
                ));
            }
            if src.get(g) != tgt.get(f) {
                return Err(Error::invariant(
                    "FinCat",
                    "composition_composable",
                    format!("entry ({g}, {f}, {h}) composes a non-composable pair"),
                ));
            }
            if comp[g * n + f] != NONE {
                return Err(Error::invariant(
                    "FinCat",
                    "composition_unique",
                    format!("pair ({g}, {f}) is listed twice"),
                ));
            }
            comp[g * n + f] = h;
        }
        Self::assemble(objects, morphisms, src, tgt, identities, comp)
    }

    fn assemble(
        objects: FinSet,
        morphisms: FinSet,
        src: Vec<usize>,
        tgt: Vec<usize>,
        ids: Vec<usize>,
        comp: Vec<usize>,
    ) -> Result<Self> {
        let no = objects.size();
        let nm = morphisms.size();
        let bad =
            |clause: &'static str, detail: String| Err(Error::invariant("FinCat", clause, detail));
        if src.len() != nm || tgt.len() != nm {
            return bad(
                "endpoint_length",
                format!(
                    "{nm} morphisms but {} sources and {} targets",
                    src.len(),
                    tgt.len()
                ),
            );
        }
        if ids.len() != no {
            return bad(
                "identity_length",
                format!("{no} objects but {} identities", ids.len()),
            );
        }
        if let Some(m) = (0..nm).find(|&m| src[m] >= no || tgt[m] >= no) {
            return bad(
                "endpoint_range",
                format!("morphism {m} has an endpoint outside the objects"),
            );
        }
        for (o, &i) in ids.iter().enumerate() {
            if i >= nm || src[i] != o || tgt[i] != o {
                return bad(
                    "identity_endpoints",
                    format!("identity of object {o} is not an endomorphism of it"),
                );
            }
        }
        for g in 0..nm {
            for f in 0..nm {
                let h = comp[g * nm + f];
                if tgt[f] == src[g] {
                    if h == NONE {
                        return bad(
                            "composition_total",
                            format!("composite of ({g}, {f}) is missing"),
                        );
                    }
                    if src[h] != src[f] || tgt[h] != tgt[g] {
                        return bad(
                            "composite_endpoints",
                            format!("composite {h} of ({g}, {f}) has wrong endpoints"),
                        );
                    }
                } else if h != NONE {
                    return bad(
                        "composition_composable",
                        format!("pair ({g}, {f}) is not composable"),
                    );
                }
            }
        }
        for m in 0..nm {
            if comp[ids[tgt[m]] * nm + m] != m {
                return bad(
                    "left_identity",
                    format!("identity does not fix morphism {m} on the left"),
                );
            }
            if comp[m * nm + ids[src[m]]] != m {
                return bad(
                    "right_identity",
                    format!("identity does not fix morphism {m} on the right"),
                );
            }
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); no];
        for m in 0..nm {
            out[src[m]].push(m);
        }
        for f in 0..nm {
            for &g in &out[tgt[f]] {
                let gf = comp[g * nm + f];
                for &h in &out[tgt[g]] {
                    if comp[h * nm + gf] != comp[comp[h * nm + g] * nm + f] {
                        return bad(
                            "associativity",
                            format!("({h} ∘ {g}) ∘ {f} differs from {h} ∘ ({g} ∘ {f})"),
                        );
                    }
                }
            }
        }
        let mut homs = vec![Vec::new(); no * no];
        for m in 0..nm {
            homs[src[m] * no + tgt[m]].push(m);
        }
        let inverses = (0..nm)
            .map(|m| {
                homs[tgt[m] * no + src[m]]
                    .iter()
                    .copied()
                    .find(|&k| comp[k * nm + m] == ids[src[m]] && comp[m * nm + k] == ids[tgt[m]])
            })
            .collect();
        Ok(FinCat {
            objects,
            morphisms,
            src,
            tgt,
            ids,
            comp,
            homs,
            inverses,
        })
    }

    /// Build a category whose morphisms are identified by keys; `compose`
    /// returns the key of `g ∘ f` from the keys of `g` and `f`.
    pub(crate) fn from_keys<K: Clone + Eq + Hash>(
        n_obj: usize,
        mors: &[(usize, usize, K)],
        ids: Vec<usize>,
        compose: impl Fn(&K, &K) -> K,
    ) -> Result<Self> {
        let index: HashMap<(usize, usize, &K), usize> = mors
            .iter()
            .enumerate()
            .map(|(i, m)| ((m.0, m.1, &m.2), i))
            .collect();
        let nm = mors.len();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n_obj];
        for (i, m) in mors.iter().enumerate() {
            out[m.0].push(i);
        }
        let mut comp = vec![NONE; nm * nm];
        for f in 0..nm {
            for &g in &out[mors[f].1] {
                let key = compose(&mors[g].2, &mors[f].2);
                let h = *index.get(&(mors[f].0, mors[g].1, &key)).ok_or_else(|| {
                    Error::invariant(
                        "FinCat",
                        "composition_closed",
                        format!("composite of ({g}, {f}) is not a listed morphism"),
                    )
                })?;
                comp[g * nm + f] = h;
            }
        }
        Self::assemble(
            FinSet::new(n_obj),
            FinSet::new(nm),
            mors.iter().map(|m| m.0).collect(),
            mors.iter().map(|m| m.1).collect(),
            ids,
            comp,
        )
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_keys(
            n,
            &(0..n).map(|i| (i, i, i)).collect::<Vec<_>>(),
            (0..n).collect(),
            |g, _| *g,
        )
        .expect("discrete category")
    }

    pub fn terminal() -> Self {
        Self::discrete(1)
    }

    pub fn empty() -> Self {
        Self::discrete(0)
    }

    /// The ordinal `{0 < 1 < .. < n-1}`; morphisms are pairs `i ≤ j` in
    /// lexicographic order.
    pub fn ordinal(n: usize) -> Self {
        let mors: Vec<(usize, usize, (usize, usize))> = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j, (i, j))))
            .collect();
        let ids = (0..n)
            .map(|i| mors.iter().position(|m| m.2 == (i, i)).unwrap())
            .collect();
        Self::from_keys(n, &mors, ids, |g, f| (f.0, g.1)).expect("ordinal")
    }

    /// The cyclic group of order `k` as a one-object category; morphism `i`
    /// is rotation by `i`.
    pub fn cyclic_group(k: usize) -> Self {
        assert!(k > 0);
        let mors: Vec<_> = (0..k).map(|i| (0, 0, i)).collect();
        Self::from_keys(1, &mors, vec![0], |g, f| (g + f) % k).expect("cyclic group")
    }

    /// Product category; object `(a, b)` has index `a * |B| + b`, morphism
    /// `(f, g)` has index `f * |B₁| + g`.
    pub fn product(a: &FinCat, b: &FinCat) -> FinCat {
        let (na, nb) = (a.n_objects(), b.n_objects());
        let mb = b.n_morphisms();
        let mut mors = Vec::new();
        for f in 0..a.n_morphisms() {
            for g in 0..mb {
                mors.push((a.src(f) * nb + b.src(g), a.tgt(f) * nb + b.tgt(g), (f, g)));
            }
        }
        let ids = (0..na * nb)
            .map(|o| a.id(o / nb) * mb + b.id(o % nb))
            .collect();
        Self::from_keys(na * nb, &mors, ids, |g, f| {
            (a.comp(g.0, f.0), b.comp(g.1, f.1))
        })
        .expect("product of lawful categories")
    }

    /// Disjoint union; objects and morphisms of `b` follow those of `a`.
    pub fn coproduct(a: &FinCat, b: &FinCat) -> FinCat {
        let (na, ma) = (a.n_objects(), a.n_morphisms());
        let mut mors: Vec<(usize, usize, usize)> =
            (0..ma).map(|f| (a.src(f), a.tgt(f), f)).collect();
        mors.extend((0..b.n_morphisms()).map(|g| (na + b.src(g), na + b.tgt(g), ma + g)));
        let ids = a
            .ids
            .iter()
            .copied()
            .chain(b.ids.iter().map(|&i| ma + i))
            .collect();
        Self::from_keys(na + b.n_objects(), &mors, ids, |g, f| {
            if *g < ma {
                a.comp(*g, *f)
            } else {
                ma + b.comp(g - ma, f - ma)
            }
        })
        .expect("coproduct of lawful categories")
    }

    /// The preorder generated by `edges` (reflexive-transitive closure);
    /// morphisms are the pairs `i ≤ j` in lexicographic order.
    pub fn preorder(n: usize, edges: &[(usize, usize)]) -> FinCat {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(i, j) in edges {
            leq[i * n + j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i * n + k] && leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
        let mors: Vec<(usize, usize, (usize, usize))> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| leq[i * n + j])
            .map(|(i, j)| (i, j, (i, j)))
            .collect();
        let ids = (0..n)
            .map(|i| mors.iter().position(|m| m.2 == (i, i)).unwrap())
            .collect();
        Self::from_keys(n, &mors, ids, |g, f| (f.0, g.1)).expect("preorder")
    }

    /// The free category on an acyclic graph: morphisms are paths, listed by
    /// length and then by edge sequence. Fails with `TooLarge` past `limit`
    /// morphisms or if the graph has a cycle.
    pub fn free_on_dag(n: usize, edges: &[(usize, usize)], limit: usize) -> Result<FinCat> {
        let mut paths: Vec<(usize, usize, Vec<usize>)> =
            (0..n).map(|o| (o, o, Vec::new())).collect();
        let mut frontier: Vec<usize> = (0..n).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &p in &frontier {
                for (e, &(u, v)) in edges.iter().enumerate() {
                    if u == paths[p].1 {
                        if paths.len() == limit || paths[p].2.len() > n {
                            return Err(Error::TooLarge {
                                op: "free_on_dag",
                                detail: format!("more than {limit} paths"),
                            });
                        }
                        let mut key = paths[p].2.clone();
                        key.push(e);
                        next.push(paths.len());
                        paths.push((paths[p].0, v, key));
                    }
                }
            }
            frontier = next;
        }
        Self::from_keys(n, &paths, (0..n).collect(), |g, f| {
            let mut k = f.clone();
            k.extend_from_slice(g);
            k
        })
    }

    /// A one-object category from a monoid multiplication table
    /// `mul[g * k + f] = g·f` with unit `0`.
    pub fn monoid(k: usize, mul: &[usize]) -> Result<FinCat> {
        let triples: Vec<(usize, usize, usize)> = (0..k)
            .flat_map(|g| (0..k).map(move |f| (g, f, mul[g * k + f])))
            .collect();
        FinCat::new(
            FinSet::new(1),
            FinSet::new(k),
            vec![0; k],
            vec![0; k],
            vec![0],
            &triples,
        )
    }

    /// Opposite category, with the same object and morphism indices.
    pub fn opposite(&self) -> FinCat {
        let nm = self.n_morphisms();
        let mut comp = vec![NONE; nm * nm];
        for g in 0..nm {
            for f in 0..nm {
                let h = self.comp[f * nm + g];
                comp[g * nm + f] = h;
            }
        }
        Self::assemble(
            self.objects.clone(),
            self.morphisms.clone(),
            self.tgt.clone(),
            self.src.clone(),
            self.ids.clone(),
            comp,
        )
        .expect("opposite of a lawful category")
    }

    pub fn objects(&self) -> &FinSet {
        &self.objects
    }

    pub fn morphisms(&self) -> &FinSet {
        &self.morphisms
    }

    pub fn n_objects(&self) -> usize {
        self.objects.size()
    }

    pub fn n_morphisms(&self) -> usize {
        self.morphisms.size()
    }

    pub fn src(&self, m: usize) -> usize {
        self.src[m]
    }

    pub fn tgt(&self, m: usize) -> usize {
        self.tgt[m]
    }

    pub fn sources(&self) -> &[usize] {
        &self.src
    }

    pub fn targets(&self) -> &[usize] {
        &self.tgt
    }

    pub fn identities(&self) -> &[usize] {
        &self.ids
    }

    pub fn id(&self, o: usize) -> usize {
        self.ids[o]
    }

    /// `g ∘ f` if composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        match self.comp[g * self.n_morphisms() + f] {
            NONE => None,
            h => Some(h),
        }
    }

    /// `g ∘ f` for a pair known to be composable.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        let h = self.comp[g * self.n_morphisms() + f];
        assert!(h != NONE, "morphisms {g} and {f} are not composable");
        h
    }

    /// Morphisms `a -> b` in increasing index order.
    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a * self.n_objects() + b]
    }

    /// Position of `m` within its hom-set.
    pub fn hom_position(&self, m: usize) -> usize {
        self.hom(self.src[m], self.tgt[m])
            .binary_search(&m)
            .unwrap()
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.ids[self.src[m]] == m
    }

    pub fn is_iso(&self, m: usize) -> bool {
        self.inverses[m].is_some()
    }

    pub fn inverse(&self, m: usize) -> Option<usize> {
        self.inverses[m]
    }

    /// Composition triples `(g, f, g∘f)` sorted by `(g, f)`.
    pub fn composition_triples(&self) -> Vec<(usize, usize, usize)> {
        let nm = self.n_morphisms();
        let mut out = Vec::new();
        for g in 0..nm {
            for f in 0..nm {
                let h = self.comp[g * nm + f];
                if h != NONE {
                    out.push((g, f, h));
                }
            }
        }
        out
    }

    /// Structural equality, ignoring display labels.
    pub fn same_shape(&self, other: &FinCat) -> bool {
        self.n_objects() == other.n_objects()
            && self.src == other.src
            && self.tgt == other.tgt
            && self.ids == other.ids
            && self.comp == other.comp
    }

    pub fn is_discrete(&self) -> bool {
        self.n_morphisms() == self.n_objects()
    }

    pub fn is_groupoid(&self) -> bool {
        self.inverses.iter().all(Option::is_some)
    }

    /// Connected components of the underlying undirected graph.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.n_objects());
        for m in 0..self.n_morphisms() {
            uf.union(self.src[m], self.tgt[m]);
        }
        uf.classes()
    }
}

fn check_same_shape(op: &'static str, a: &FinCat, b: &FinCat) -> Result<()> {
    if a.same_shape(b) {
        Ok(())
    } else {
        Err(Error::mismatch(op, "categories do not match"))
    }
}

/// A functor between finite categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    dom: FinCat,
    cod: FinCat,
    obj: Vec<usize>,
    mor: Vec<usize>,
}

impl Functor {
    pub fn new(dom: FinCat, cod: FinCat, obj: Vec<usize>, mor: Vec<usize>) -> Result<Self> {
        let bad =
            |clause: &'static str, detail: String| Err(Error::invariant("Functor", clause, detail));
        if obj.len() != dom.n_objects() || obj.iter().any(|&o| o >= cod.n_objects()) {
            return bad(
                "object_map",
                "object map is not a total map between object sets".into(),
            );
        }
        if mor.len() != dom.n_morphisms() || mor.iter().any(|&m| m >= cod.n_morphisms()) {
            return bad(
                "morphism_map",
                "morphism map is not a total map between morphism sets".into(),
            );
        }
        for m in 0..dom.n_morphisms() {
            if cod.src(mor[m]) != obj[dom.src(m)] || cod.tgt(mor[m]) != obj[dom.tgt(m)] {
                return bad(
                    "preserves_endpoints",
                    format!("image of morphism {m} has the wrong endpoints"),
                );
            }
        }
        for o in 0..dom.n_objects() {
            if mor[dom.id(o)] != cod.id(obj[o]) {
                return bad(
                    "preserves_identities",
                    format!("identity of object {o} is not sent to an identity"),
                );
            }
        }
        for (g, f, h) in dom.composition_triples() {
            if cod.comp(mor[g], mor[f]) != mor[h] {
                return bad(
                    "preserves_composition",
                    format!("composite of ({g}, {f}) is not preserved"),
                );
            }
        }
        Ok(Functor { dom, cod, obj, mor })
    }

    pub fn identity(c: &FinCat) -> Self {
        Functor {
            dom: c.clone(),
            cod: c.clone(),
            obj: (0..c.n_objects()).collect(),
            mor: (0..c.n_morphisms()).collect(),
        }
    }

    pub fn constant(dom: &FinCat, cod: &FinCat, o: usize) -> Self {
        Functor {
            dom: dom.clone(),
            cod: cod.clone(),
            obj: vec![o; dom.n_objects()],
            mor: vec![cod.id(o); dom.n_morphisms()],
        }
    }

    pub fn to_terminal(dom: &FinCat) -> Self {
        Self::constant(dom, &FinCat::terminal(), 0)
    }

    /// The functor `1 -> C` picking out an object.
    pub fn pick(c: &FinCat, o: usize) -> Self {
        Functor {
            dom: FinCat::terminal(),
            cod: c.clone(),
            obj: vec![o],
            mor: vec![c.id(o)],
        }
    }

    pub fn dom(&self) -> &FinCat {
        &self.dom
    }

    pub fn cod(&self) -> &FinCat {
        &self.cod
    }

    pub fn ob(&self, o: usize) -> usize {
        self.obj[o]
    }

    pub fn mo(&self, m: usize) -> usize {
        self.mor[m]
    }

    pub fn object_map(&self) -> &[usize] {
        &self.obj
    }

    pub fn morphism_map(&self) -> &[usize] {
        &self.mor
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Functor) -> Result<Functor> {
        check_same_shape("compose_functors", &first.cod, &self.dom)?;
        Ok(Functor {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            obj: first.obj.iter().map(|&o| self.obj[o]).collect(),
            mor: first.mor.iter().map(|&m| self.mor[m]).collect(),
        })
    }

    pub fn is_faithful(&self) -> bool {
        let d = &self.dom;
        (0..d.n_objects()).all(|a| {
            (0..d.n_objects()).all(|b| {
                let mut imgs: Vec<usize> = d.hom(a, b).iter().map(|&m| self.mor[m]).collect();
                imgs.sort_unstable();
                imgs.windows(2).all(|w| w[0] != w[1])
            })
        })
    }

    pub fn is_full(&self) -> bool {
        let d = &self.dom;
        (0..d.n_objects()).all(|a| {
            (0..d.n_objects()).all(|b| {
                let mut imgs: Vec<usize> = d.hom(a, b).iter().map(|&m| self.mor[m]).collect();
                imgs.sort_unstable();
                imgs.dedup();
                imgs.len() == self.cod.hom(self.obj[a], self.obj[b]).len()
            })
        })
    }

    pub fn is_essentially_surjective(&self) -> bool {
        let c = &self.cod;
        (0..c.n_objects()).all(|x| {
            self.obj
                .iter()
                .any(|&y| c.hom(x, y).iter().any(|&m| c.is_iso(m)))
        })
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_full() && self.is_faithful() && self.is_essentially_surjective()
    }

    pub fn is_isomorphism(&self) -> bool {
        let bij = |v: &[usize], n: usize| {
            let mut seen = vec![false; n];
            v.len() == n && v.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
        };
        bij(&self.obj, self.cod.n_objects()) && bij(&self.mor, self.cod.n_morphisms())
    }
}

/// A natural transformation between parallel functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    dom: Functor,
    cod: Functor,
    components: Vec<usize>,
}

impl NatTrans {
    pub fn new(dom: Functor, cod: Functor, components: Vec<usize>) -> Result<Self> {
        check_same_shape("nat_trans", &dom.dom, &cod.dom)?;
        check_same_shape("nat_trans", &dom.cod, &cod.cod)?;
        let a = &dom.dom;
        let c = &dom.cod;
        if components.len() != a.n_objects() || components.iter().any(|&m| m >= c.n_morphisms()) {
            return Err(Error::invariant(
                "NatTrans",
                "component_map",
                "components do not form a map objects -> morphisms",
            ));
        }
        for (x, &k) in components.iter().enumerate() {
            if c.src(k) != dom.ob(x) || c.tgt(k) != cod.ob(x) {
                return Err(Error::invariant(
                    "NatTrans",
                    "component_endpoints",
                    format!("component at {x} has the wrong endpoints"),
                ));
            }
        }
        for m in 0..a.n_morphisms() {
            let lhs = c.comp(cod.mo(m), components[a.src(m)]);
            let rhs = c.comp(components[a.tgt(m)], dom.mo(m));
            if lhs != rhs {
                return Err(Error::invariant(
                    "NatTrans",
                    "naturality",
                    format!("square at morphism {m} does not commute"),
                ));
            }
        }
        Ok(NatTrans {
            dom,
            cod,
            components,
        })
    }

    pub fn source(&self) -> &Functor {
        &self.dom
    }

    pub fn target(&self) -> &Functor {
        &self.cod
    }

    pub fn components(&self) -> &[usize] {
        &self.components
    }

    pub fn component(&self, x: usize) -> usize {
        self.components[x]
    }

    pub fn is_invertible(&self) -> bool {
        self.components.iter().all(|&m| self.dom.cod.is_iso(m))
    }
}

/// A set-valued presheaf `P: B^op -> Set`; `action[β]: P(tgt β) -> P(src β)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    base: FinCat,
    at: Vec<FinSet>,
    action: Vec<FinSetMap>,
}

impl Presheaf {
    pub fn new(base: FinCat, at: Vec<FinSet>, action: Vec<FinSetMap>) -> Result<Self> {
        let bad = |clause: &'static str, detail: String| {
            Err(Error::invariant("Presheaf", clause, detail))
        };
        if at.len() != base.n_objects() {
            return bad(
                "value_count",
                format!("{} values for {} objects", at.len(), base.n_objects()),
            );
        }
        if action.len() != base.n_morphisms() {
            return bad(
                "action_count",
                format!(
                    "{} actions for {} morphisms",
                    action.len(),
                    base.n_morphisms()
                ),
            );
        }
        for (m, act) in action.iter().enumerate() {
            if act.dom_size() != at[base.tgt(m)].size() || act.cod_size() != at[base.src(m)].size()
            {
                return bad(
                    "action_typing",
                    format!("action of morphism {m} has the wrong domain or codomain"),
                );
            }
        }
        for o in 0..base.n_objects() {
            if !action[base.id(o)].is_identity() {
                return bad(
                    "action_identity",
                    format!("identity of object {o} acts non-trivially"),
                );
            }
        }
        for (g, f, h) in base.composition_triples() {
            // P(g∘f) = P(f) ∘ P(g)
            if action[f].compose(&action[g])? != action[h] {
                return bad(
                    "action_composition",
                    format!("action of {h} differs from the composite action of ({g}, {f})"),
                );
            }
        }
        Ok(Presheaf { base, at, action })
    }

    pub(crate) fn from_tables(
        base: FinCat,
        sizes: Vec<usize>,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let action = tables
            .into_iter()
            .enumerate()
            .map(|(m, t)| FinSetMap::new(sizes[base.tgt(m)], sizes[base.src(m)], t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, sizes.into_iter().map(FinSet::new).collect(), action)
    }

    /// The constant presheaf at an `n`-element set.
    pub fn constant(base: &FinCat, n: usize) -> Self {
        Presheaf {
            base: base.clone(),
            at: vec![FinSet::new(n); base.n_objects()],
            action: (0..base.n_morphisms())
                .map(|_| FinSetMap::identity(n))
                .collect(),
        }
    }

    /// `B(-, b)`; elements of `B(a, b)` are listed in hom order and act by
    /// precomposition.
    pub fn representable(base: &FinCat, b: usize) -> Self {
        let sizes: Vec<usize> = (0..base.n_objects())
            .map(|a| base.hom(a, b).len())
            .collect();
        let tables = (0..base.n_morphisms())
            .map(|beta| {
                base.hom(base.tgt(beta), b)
                    .iter()
                    .map(|&psi| base.hom_position(base.comp(psi, beta)))
                    .collect()
            })
            .collect();
        Self::from_tables(base.clone(), sizes, tables).expect("representable presheaf")
    }

    /// Reindex along a functor `F: A -> B`, giving `P ∘ F^op` on `A`.
    pub fn restrict(&self, f: &Functor) -> Result<Presheaf> {
        check_same_shape("restrict", f.cod(), &self.base)?;
        Ok(Presheaf {
            base: f.dom().clone(),
            at: f.obj.iter().map(|&o| self.at[o].clone()).collect(),
            action: f.mor.iter().map(|&m| self.action[m].clone()).collect(),
        })
    }

    pub fn base(&self) -> &FinCat {
        &self.base
    }

    pub fn value(&self, b: usize) -> &FinSet {
        &self.at[b]
    }

    pub fn size_at(&self, b: usize) -> usize {
        self.at[b].size()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.at.iter().map(FinSet::size).collect()
    }

    pub fn action(&self, m: usize) -> &FinSetMap {
        &self.action[m]
    }

    /// `P(β)(x)` for `x ∈ P(tgt β)`.
    pub fn act(&self, m: usize, x: usize) -> usize {
        self.action[m].apply(x)
    }

    pub(crate) fn as_algebra(&self) -> UnaryAlgebra {
        let mut alg = UnaryAlgebra::new(self.sizes());
        for m in 0..self.base.n_morphisms() {
            alg.op(
                self.base.tgt(m),
                self.base.src(m),
                self.action[m].table().to_vec(),
            );
        }
        alg
    }
}

/// Search for a natural isomorphism `P ≅ Q`; returns its components.
pub fn find_presheaf_iso(p: &Presheaf, q: &Presheaf) -> Option<Vec<FinSetMap>> {
    if !p.base.same_shape(&q.base) {
        return None;
    }
    let phi = find_isomorphism(&p.as_algebra(), &q.as_algebra())?;
    Some(
        phi.into_iter()
            .map(|t| FinSetMap::raw(t.len(), t.len(), t))
            .collect(),
    )
}

/// Every natural isomorphism `P ≅ Q`, in lexicographic order of the
/// component tables.
pub fn presheaf_isos(p: &Presheaf, q: &Presheaf) -> Result<Vec<Vec<FinSetMap>>> {
    if !p.base.same_shape(&q.base) || p.sizes() != q.sizes() {
        return Ok(Vec::new());
    }
    let homs = enumerate_homomorphisms(
        &p.as_algebra(),
        &q.as_algebra(),
        crate::finset::MAX_ENUMERATION as usize,
    )
    .map_err(|_| Error::TooLarge {
        op: "presheaf_isos",
        detail: "too many natural maps".into(),
    })?;
    Ok(homs
        .into_iter()
        .map(|phi| {
            phi.into_iter()
                .map(|t| FinSetMap::raw(t.len(), t.len(), t))
                .collect::<Vec<_>>()
        })
        .filter(|c: &Vec<FinSetMap>| c.iter().all(FinSetMap::is_bijective))
        .collect())
}

/// Comma category `F/G` for `F: A -> C`, `G: B -> C`, or its invertible
/// variant. Objects are triples `(a, b, α: Fa -> Gb)` ordered by `a`, then
/// `b`, then `α`; morphisms `(u, v)` with `Gv ∘ α = α′ ∘ Fu`.
#[derive(Clone, Debug)]
pub struct Comma {
    pub cat: FinCat,
    pub proj1: Functor,
    pub proj2: Functor,
    /// `F ∘ proj1 ⇒ G ∘ proj2`, component `α` at `(a, b, α)`.
    pub nat: NatTrans,
    pub objects: Vec<(usize, usize, usize)>,
    /// `(u, v)` for every morphism.
    pub morphisms: Vec<(usize, usize)>,
}

fn comma_impl(f: &Functor, g: &Functor, iso_only: bool) -> Result<Comma> {
    check_same_shape("comma", f.cod(), g.cod())?;
    let (a, b, c) = (f.dom(), g.dom(), f.cod());
    let mut objects = Vec::new();
    for x in 0..a.n_objects() {
        for y in 0..b.n_objects() {
            for &alpha in c.hom(f.ob(x), g.ob(y)) {
                if !iso_only || c.is_iso(alpha) {
                    objects.push((x, y, alpha));
                }
            }
        }
    }
    let mut mors = Vec::new();
    for (i, &(x, y, alpha)) in objects.iter().enumerate() {
        for (j, &(x2, y2, alpha2)) in objects.iter().enumerate() {
            for &u in a.hom(x, x2) {
                for &v in b.hom(y, y2) {
                    if c.comp(g.mo(v), alpha) == c.comp(alpha2, f.mo(u)) {
                        mors.push((i, j, (u, v)));
                    }
                }
            }
        }
    }
    let ids = (0..objects.len())
        .map(|o| {
            mors.iter()
                .position(|m| {
                    m.0 == o && m.1 == o && m.2 == (a.id(objects[o].0), b.id(objects[o].1))
                })
                .unwrap()
        })
        .collect();
    let cat = FinCat::from_keys(objects.len(), &mors, ids, |p, q| {
        (a.comp(p.0, q.0), b.comp(p.1, q.1))
    })?;
    let proj1 = Functor::new(
        cat.clone(),
        a.clone(),
        objects.iter().map(|o| o.0).collect(),
        mors.iter().map(|m| m.2 .0).collect(),
    )?;
    let proj2 = Functor::new(
        cat.clone(),
        b.clone(),
        objects.iter().map(|o| o.1).collect(),
        mors.iter().map(|m| m.2 .1).collect(),
    )?;
    let nat = NatTrans::new(
        f.compose(&proj1)?,
        g.compose(&proj2)?,
        objects.iter().map(|o| o.2).collect(),
    )?;
    Ok(Comma {
        cat,
        proj1,
        proj2,
        nat,
        objects,
        morphisms: mors.into_iter().map(|m| m.2).collect(),
    })
}

/// Comma category `F/G` (arbitrary connecting morphisms).
pub fn comma(f: &Functor, g: &Functor) -> Result<Comma> {
    comma_impl(f, g, false)
}

/// Iso-comma (pseudopullback) of `F` and `G`.
pub fn iso_comma(f: &Functor, g: &Functor) -> Result<Comma> {
    comma_impl(f, g, true)
}

/// Arrow category `A²`: objects are the morphisms of `A` in index order,
/// morphisms `(u, v): f -> f′` are commuting squares `v ∘ f = f′ ∘ u`.
#[derive(Clone, Debug)]
pub struct ArrowCategory {
    pub cat: FinCat,
    pub dom_f: Functor,
    pub cod_f: Functor,
    pub squares: Vec<(usize, usize)>,
}

pub fn arrow_category(a: &FinCat) -> ArrowCategory {
    let nm = a.n_morphisms();
    let mut mors = Vec::new();
    for f in 0..nm {
        for f2 in 0..nm {
            for &u in a.hom(a.src(f), a.src(f2)) {
                for &v in a.hom(a.tgt(f), a.tgt(f2)) {
                    if a.comp(v, f) == a.comp(f2, u) {
                        mors.push((f, f2, (u, v)));
                    }
                }
            }
        }
    }
    let ids = (0..nm)
        .map(|f| {
            mors.iter()
                .position(|m| m.0 == f && m.2 == (a.id(a.src(f)), a.id(a.tgt(f))))
                .unwrap()
        })
        .collect();
    let cat = FinCat::from_keys(nm, &mors, ids, |p, q| (a.comp(p.0, q.0), a.comp(p.1, q.1)))
        .expect("arrow category of a lawful category");
    let dom_f = Functor::new(
        cat.clone(),
        a.clone(),
        (0..nm).map(|f| a.src(f)).collect(),
        mors.iter().map(|m| m.2 .0).collect(),
    )
    .expect("domain functor");
    let cod_f = Functor::new(
        cat.clone(),
        a.clone(),
        (0..nm).map(|f| a.tgt(f)).collect(),
        mors.iter().map(|m| m.2 .1).collect(),
    )
    .expect("codomain functor");
    ArrowCategory {
        cat,
        dom_f,
        cod_f,
        squares: mors.into_iter().map(|m| m.2).collect(),
    }
}

/// Whether `chi: e′ -> e` is cartesian for `p`: for every `k` the square of
/// hom-sets `E(k,e′) -> E(k,e)` over `B(pk,pe′) -> B(pk,pe)` is a pullback.
pub fn is_cartesian(p: &Functor, chi: usize) -> bool {
    let (e_cat, b_cat) = (p.dom(), p.cod());
    let (e1, e) = (e_cat.src(chi), e_cat.tgt(chi));
    let pchi = p.mo(chi);
    let pos = |list: &[usize], m: usize| list.binary_search(&m).unwrap();
    for k in 0..e_cat.n_objects() {
        let pk = p.ob(k);
        let ke1 = e_cat.hom(k, e1);
        let ke = e_cat.hom(k, e);
        let bke1 = b_cat.hom(pk, p.ob(e1));
        let bke = b_cat.hom(pk, p.ob(e));
        let top = FinSetMap::raw(
            ke1.len(),
            ke.len(),
            ke1.iter()
                .map(|&psi| pos(ke, e_cat.comp(chi, psi)))
                .collect(),
        );
        let left = FinSetMap::raw(
            ke1.len(),
            bke1.len(),
            ke1.iter().map(|&psi| pos(bke1, p.mo(psi))).collect(),
        );
        let right = FinSetMap::raw(
            ke.len(),
            bke.len(),
            ke.iter().map(|&phi| pos(bke, p.mo(phi))).collect(),
        );
        let bottom = FinSetMap::raw(
            bke1.len(),
            bke.len(),
            bke1.iter()
                .map(|&beta| pos(bke, b_cat.comp(pchi, beta)))
                .collect(),
        );
        let pb = pullback(&right, &bottom).expect("square over a common corner");
        match pb.mediate(&top, &left) {
            Some(m) if m.is_bijective() => {}
            _ => return false,
        }
    }
    true
}

fn lifting_condition(p: &Functor, strict: bool) -> bool {
    let (e_cat, b_cat) = (p.dom(), p.cod());
    for e in 0..e_cat.n_objects() {
        for b in 0..b_cat.n_objects() {
            for &beta in b_cat.hom(b, p.ob(e)) {
                let lifted = (0..e_cat.n_objects()).any(|e1| {
                    e_cat.hom(e1, e).iter().any(|&chi| {
                        if strict {
                            p.mo(chi) == beta
                        } else {
                            b_cat.hom(b, p.ob(e1)).iter().any(|&iota| {
                                b_cat.is_iso(iota) && b_cat.comp(p.mo(chi), iota) == beta
                            })
                        }
                    })
                });
                if !lifted {
                    return false;
                }
            }
        }
    }
    true
}

/// Groupoid fibration: every `β: b -> pe` lifts as `pχ ∘ ι` with `ι` an
/// isomorphism `b ≅ pe′`, and every morphism of `E` is cartesian.
pub fn is_groupoid_fibration(p: &Functor) -> bool {
    lifting_condition(p, false) && (0..p.dom().n_morphisms()).all(|chi| is_cartesian(p, chi))
}

/// Variant of [`is_groupoid_fibration`] requiring the lift to satisfy
/// `pχ = β` on the nose.
pub fn is_groupoid_fibration_strict(p: &Functor) -> bool {
    lifting_condition(p, true) && (0..p.dom().n_morphisms()).all(|chi| is_cartesian(p, chi))
}

/// Groupoid fibration whose vertical endomorphisms are identities.
pub fn is_er_fibration(p: &Functor) -> bool {
    let e = p.dom();
    is_groupoid_fibration(p)
        && (0..e.n_morphisms())
            .all(|m| e.src(m) != e.tgt(m) || !p.cod().is_identity(p.mo(m)) || e.is_identity(m))
}

/// The comparison functor `E² -> B/p` sending `χ` to `(pe′, e, pχ)`.
pub fn cotensor_comparison(p: &Functor) -> Result<(ArrowCategory, Comma, Functor)> {
    let arrows = arrow_category(p.dom());
    let slice = comma(&Functor::identity(p.cod()), p)?;
    let e = p.dom();
    let index: HashMap<(usize, usize, usize), usize> = slice
        .objects
        .iter()
        .enumerate()
        .map(|(i, &o)| (o, i))
        .collect();
    let mor_index: HashMap<(usize, usize, (usize, usize)), usize> = (0..slice.cat.n_morphisms())
        .map(|m| ((slice.cat.src(m), slice.cat.tgt(m), slice.morphisms[m]), m))
        .collect();
    let obj: Vec<usize> = (0..e.n_morphisms())
        .map(|chi| index[&(p.ob(e.src(chi)), e.tgt(chi), p.mo(chi))])
        .collect();
    let mor: Vec<usize> = (0..arrows.cat.n_morphisms())
        .map(|sq| {
            let (u, v) = arrows.squares[sq];
            let (s, t) = (obj[arrows.cat.src(sq)], obj[arrows.cat.tgt(sq)]);
            mor_index[&(s, t, (p.mo(u), v))]
        })
        .collect();
    let j = Functor::new(arrows.cat.clone(), slice.cat.clone(), obj, mor)?;
    Ok((arrows, slice, j))
}

/// Groupoid-fibration test through the arrow category: `p` is a groupoid
/// fibration iff `E² -> B/p` is an equivalence.
pub fn gfib_via_cotensor(p: &Functor) -> bool {
    let (_, _, j) = cotensor_comparison(p).expect("comparison of a lawful functor");
    j.is_equivalence()
}

/// Every morphism `β: b -> pe` has exactly one lift with codomain `e`.
pub fn is_discrete_fibration(p: &Functor) -> bool {
    let (e_cat, b_cat) = (p.dom(), p.cod());
    let mut count = vec![0usize; e_cat.n_objects() * b_cat.n_morphisms()];
    for chi in 0..e_cat.n_morphisms() {
        count[e_cat.tgt(chi) * b_cat.n_morphisms() + p.mo(chi)] += 1;
    }
    (0..e_cat.n_objects()).all(|e| {
        (0..b_cat.n_morphisms())
            .filter(|&beta| b_cat.tgt(beta) == p.ob(e))
            .all(|beta| count[e * b_cat.n_morphisms() + beta] == 1)
    })
}

/// The category of elements of a presheaf with its projection.
///
/// Object `(b, t)` has index `offsets[b] + t`; the morphism `(β, t′)` from
/// `(src β, P(β)t′)` to `(tgt β, t′)` has index `mor_offsets[β] + t′`.
#[derive(Clone, Debug)]
pub struct Elements {
    pub proj: Functor,
    pub offsets: Vec<usize>,
    pub mor_offsets: Vec<usize>,
}

impl Elements {
    pub fn category(&self) -> &FinCat {
        self.proj.dom()
    }

    pub fn object(&self, b: usize, t: usize) -> usize {
        self.offsets[b] + t
    }

    pub fn decode(&self, o: usize) -> (usize, usize) {
        let b = self.proj.ob(o);
        (b, o - self.offsets[b])
    }

    pub fn morphism(&self, beta: usize, t: usize) -> usize {
        self.mor_offsets[beta] + t
    }
}

pub fn elements(p: &Presheaf) -> Elements {
    let base = p.base();
    let mut offsets = Vec::with_capacity(base.n_objects());
    let mut total = 0;
    for b in 0..base.n_objects() {
        offsets.push(total);
        total += p.size_at(b);
    }
    let mut mor_offsets = Vec::with_capacity(base.n_morphisms());
    let mut mors = Vec::new();
    for beta in 0..base.n_morphisms() {
        mor_offsets.push(mors.len());
        for t in 0..p.size_at(base.tgt(beta)) {
            let s = offsets[base.src(beta)] + p.act(beta, t);
            mors.push((s, offsets[base.tgt(beta)] + t, (beta, t)));
        }
    }
    let ids = (0..base.n_objects())
        .flat_map(|b| (0..p.size_at(b)).map(move |t| (b, t)))
        .map(|(b, t)| mor_offsets[base.id(b)] + t)
        .collect();
    let cat = FinCat::from_keys(total, &mors, ids, |g, f| (base.comp(g.0, f.0), g.1))
        .expect("category of elements of a lawful presheaf");
    let obj = (0..base.n_objects())
        .flat_map(|b| std::iter::repeat(b).take(p.size_at(b)))
        .collect();
    let mor = mors.iter().map(|m| m.2 .0).collect();
    Elements {
        proj: Functor::new(cat, base.clone(), obj, mor).expect("projection functor"),
        offsets,
        mor_offsets,
    }
}

/// The presheaf of fibres of a discrete fibration: `P(b)` lists the objects
/// over `b` in index order and `P(β)` takes each object to the domain of its
/// unique lift of `β`.
pub fn fibers(p: &Functor) -> Result<Presheaf> {
    if !is_discrete_fibration(p) {
        return Err(Error::NotDiscreteFibration {
            op: "fibers",
            detail: "some morphism does not have exactly one lift".into(),
        });
    }
    let (e_cat, b_cat) = (p.dom(), p.cod());
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); b_cat.n_objects()];
    let mut pos = vec![0; e_cat.n_objects()];
    for e in 0..e_cat.n_objects() {
        pos[e] = over[p.ob(e)].len();
        over[p.ob(e)].push(e);
    }
    let mut lift = vec![NONE; e_cat.n_objects() * b_cat.n_morphisms()];
    for chi in 0..e_cat.n_morphisms() {
        lift[e_cat.tgt(chi) * b_cat.n_morphisms() + p.mo(chi)] = e_cat.src(chi);
    }
    let tables = (0..b_cat.n_morphisms())
        .map(|beta| {
            over[b_cat.tgt(beta)]
                .iter()
                .map(|&e| pos[lift[e * b_cat.n_morphisms() + beta]])
                .collect()
        })
        .collect();
    Presheaf::from_tables(b_cat.clone(), over.iter().map(Vec::len).collect(), tables)
}

/// Components of the comma category `x/g`: objects `(f, ξ: x -> gf)`
/// enumerated by `f` then `ξ`, classes numbered by first member.
fn under_components(g: &Functor, x: usize) -> (Vec<(usize, usize)>, Vec<usize>, usize) {
    let (f_cat, x_cat) = (g.dom(), g.cod());
    let mut pairs = Vec::new();
    for f in 0..f_cat.n_objects() {
        for &xi in x_cat.hom(x, g.ob(f)) {
            pairs.push((f, xi));
        }
    }
    let index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut uf = UnionFind::new(pairs.len());
    for (i, &(f, xi)) in pairs.iter().enumerate() {
        for f2 in 0..f_cat.n_objects() {
            for &phi in f_cat.hom(f, f2) {
                uf.union(i, index[&(f2, x_cat.comp(g.mo(phi), xi))]);
            }
        }
    }
    let (class, count) = uf.classes();
    (pairs, class, count)
}

/// Whether every comma category `x/j` is nonempty and connected.
pub fn is_final(j: &Functor) -> bool {
    (0..j.cod().n_objects()).all(|x| under_components(j, x).2 == 1)
}

/// Comprehensive factorisation `g = s ∘ j` with `j` final and `s` a discrete
/// fibration; the fibre of `s` over `x` is `π₀(x/g)`.
#[derive(Clone, Debug)]
pub struct ComprehensiveFactorization {
    pub j: Functor,
    pub s: Functor,
    pub presheaf: Presheaf,
    pub elements: Elements,
}

pub fn comprehensive_factorization(g: &Functor) -> ComprehensiveFactorization {
    let (f_cat, x_cat) = (g.dom(), g.cod());
    let comps: Vec<_> = (0..x_cat.n_objects())
        .map(|x| under_components(g, x))
        .collect();
    let lookup = |x: usize, f: usize, xi: usize| -> usize {
        let (pairs, class, _) = &comps[x];
        let i = pairs.binary_search(&(f, xi)).unwrap();
        class[i]
    };
    let tables = (0..x_cat.n_morphisms())
        .map(|beta| {
            let (x1, x) = (x_cat.src(beta), x_cat.tgt(beta));
            let (pairs, class, count) = &comps[x];
            let mut t = vec![NONE; *count];
            for (i, &(f, xi)) in pairs.iter().enumerate() {
                t[class[i]] = lookup(x1, f, x_cat.comp(xi, beta));
            }
            t
        })
        .collect();
    let presheaf =
        Presheaf::from_tables(x_cat.clone(), comps.iter().map(|c| c.2).collect(), tables)
            .expect("presheaf of components");
    let el = elements(&presheaf);
    let obj: Vec<usize> = (0..f_cat.n_objects())
        .map(|f| el.object(g.ob(f), lookup(g.ob(f), f, x_cat.id(g.ob(f)))))
        .collect();
    let mor = (0..f_cat.n_morphisms())
        .map(|phi| {
            let f2 = f_cat.tgt(phi);
            let t = lookup(g.ob(f2), f2, x_cat.id(g.ob(f2)));
            el.morphism(g.mo(phi), t)
        })
        .collect();
    let j = Functor::new(f_cat.clone(), el.category().clone(), obj, mor)
        .expect("final part of the factorisation");
    ComprehensiveFactorization {
        j,
        s: el.proj.clone(),
        presheaf,
        elements: el,
    }
}

/// Search for an isomorphism of categories `φ: E -> E′` with `q ∘ φ = p`,
/// for faithful `p` and `q` over the same base.
pub fn find_iso_over(p: &Functor, q: &Functor) -> Option<Functor> {
    if !p.cod().same_shape(q.cod()) || !p.is_faithful() || !q.is_faithful() {
        return None;
    }
    let (e, e2) = (p.dom(), q.dom());
    if e.n_objects() != e2.n_objects() || e.n_morphisms() != e2.n_morphisms() {
        return None;
    }
    let sig = |f: &Functor, a: usize, b: usize| {
        let mut v: Vec<usize> = f.dom().hom(a, b).iter().map(|&m| f.mo(m)).collect();
        v.sort_unstable();
        v
    };
    let n = e.n_objects();
    let mut phi = vec![NONE; n];
    let mut used = vec![false; n];
    fn go(
        x: usize,
        n: usize,
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(&[usize], usize, usize) -> bool,
    ) -> bool {
        if x == n {
            return true;
        }
        for y in 0..n {
            if !used[y] && ok(phi, x, y) {
                phi[x] = y;
                used[y] = true;
                if go(x + 1, n, phi, used, ok) {
                    return true;
                }
                used[y] = false;
                phi[x] = NONE;
            }
        }
        false
    }
    let ok = |phi: &[usize], x: usize, y: usize| {
        p.ob(x) == q.ob(y)
            && sig(p, x, x) == sig(q, y, y)
            && (0..x)
                .all(|z| sig(p, x, z) == sig(q, y, phi[z]) && sig(p, z, x) == sig(q, phi[z], y))
    };
    if !go(0, n, &mut phi, &mut used, &ok) {
        return None;
    }
    let mor = (0..e.n_morphisms())
        .map(|m| {
            *e2.hom(phi[e.src(m)], phi[e.tgt(m)])
                .iter()
                .find(|&&m2| q.mo(m2) == p.mo(m))
                .unwrap()
        })
        .collect();
    Functor::new(e.clone(), e2.clone(), phi, mor).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_arrow() -> FinCat {
        FinCat::ordinal(2)
    }

    #[test]
    fn associativity_failure_is_named() {
        // a∘a = b, a∘b = b, b∘a = a, b∘b = b: (a∘a)∘a = a but a∘(a∘a) = b
        let triples = [
            (0, 0, 0),
            (0, 1, 1),
            (0, 2, 2),
            (1, 0, 1),
            (1, 1, 2),
            (1, 2, 2),
            (2, 0, 2),
            (2, 1, 1),
            (2, 2, 2),
        ];
        let err = FinCat::new(
            FinSet::new(1),
            FinSet::new(3),
            vec![0; 3],
            vec![0; 3],
            vec![0],
            &triples,
        )
        .unwrap_err();
        assert!(
            matches!(
                err,
                Error::Invariant {
                    clause: "associativity",
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn missing_composite_is_rejected() {
        let err = FinCat::new(
            FinSet::new(1),
            FinSet::new(1),
            vec![0],
            vec![0],
            vec![0],
            &[],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::Invariant {
                clause: "composition_total",
                ..
            }
        ));
    }

    #[test]
    fn opposite_and_product_are_lawful() {
        let c = FinCat::ordinal(3);
        let op = c.opposite();
        assert_eq!(op.hom(2, 0).len(), 1);
        assert!(op.opposite().same_shape(&c));
        let p = FinCat::product(&c, &FinCat::cyclic_group(2));
        assert_eq!((p.n_objects(), p.n_morphisms()), (3, 12));
    }

    #[test]
    fn small_constructions() {
        let c = FinCat::coproduct(&FinCat::ordinal(2), &FinCat::cyclic_group(3));
        assert_eq!((c.n_objects(), c.n_morphisms()), (3, 6));
        assert_eq!(c.comp(4, 4), 5);
        let p = FinCat::preorder(3, &[(0, 1), (1, 0), (1, 2)]);
        assert_eq!(p.n_morphisms(), 7);
        assert!(p.is_iso(p.hom(0, 1)[0]));
        // two parallel edges then one more: 3 ids + 3 edges + 2 paths of length two
        let f = FinCat::free_on_dag(3, &[(0, 1), (0, 1), (1, 2)], 20).unwrap();
        assert_eq!(f.n_morphisms(), 8);
        assert_eq!(f.hom(0, 2).len(), 2);
        assert!(FinCat::free_on_dag(2, &[(0, 1), (1, 0)], 50).is_err());
        let idem = FinCat::monoid(2, &[0, 1, 1, 1]).unwrap();
        assert_eq!(idem.comp(1, 1), 1);
        assert!(FinCat::monoid(2, &[0, 1, 1, 0]).is_ok());
        assert!(FinCat::monoid(2, &[0, 1, 0, 1]).is_err());
    }

    #[test]
    fn iso_comma_examples() {
        let d = FinCat::discrete(3);
        let id = Functor::identity(&d);
        let ic = iso_comma(&id, &id).unwrap();
        assert_eq!((ic.cat.n_objects(), ic.cat.n_morphisms()), (3, 3));
        assert!(ic.nat.is_invertible());

        let g = FinCat::cyclic_group(2);
        let id = Functor::identity(&g);
        let ic = iso_comma(&id, &id).unwrap();
        // objects (*, α, *) for both α; morphisms (u, v) with vα = α′u
        assert_eq!(ic.cat.n_objects(), 2);
        assert_eq!(ic.cat.n_morphisms(), 8);
        assert!(ic.cat.is_groupoid());

        let empty = Functor::new(FinCat::empty(), d.clone(), vec![], vec![]).unwrap();
        let ic = iso_comma(&Functor::identity(&d), &empty).unwrap();
        assert_eq!(ic.cat.n_objects(), 0);
    }

    #[test]
    fn comma_counts_non_invertible_connections() {
        let c = one_arrow();
        let id = Functor::identity(&c);
        let lax = comma(&id, &id).unwrap();
        let strict = iso_comma(&id, &id).unwrap();
        assert_eq!(lax.cat.n_objects(), 3);
        assert_eq!(strict.cat.n_objects(), 2);
    }

    #[test]
    fn arrow_category_examples() {
        let d = arrow_category(&FinCat::discrete(3));
        assert!(d.cat.is_discrete());
        assert_eq!(d.cat.n_objects(), 3);
        // squares over the one-arrow category: three identities plus id0->a, a->id1, id0->id1
        let two = arrow_category(&one_arrow());
        assert_eq!((two.cat.n_objects(), two.cat.n_morphisms()), (3, 6));
        assert_eq!(arrow_category(&FinCat::empty()).cat.n_objects(), 0);
    }

    #[test]
    fn cartesian_examples() {
        let c = one_arrow();
        let bang = Functor::to_terminal(&c);
        assert!(is_cartesian(&bang, 0));
        assert!(!is_cartesian(&bang, 1));
        let id = Functor::identity(&c);
        assert!((0..3).all(|m| is_cartesian(&id, m)));
    }

    #[test]
    fn groupoid_fibration_examples() {
        for p in [
            Functor::identity(&one_arrow()),
            Functor::to_terminal(&FinCat::cyclic_group(3)),
            Functor::to_terminal(&one_arrow()),
        ] {
            assert_eq!(is_groupoid_fibration(&p), gfib_via_cotensor(&p));
        }
        assert!(is_groupoid_fibration(&Functor::identity(&one_arrow())));
        assert!(is_groupoid_fibration(&Functor::to_terminal(
            &FinCat::cyclic_group(3)
        )));
        assert!(!is_groupoid_fibration(&Functor::to_terminal(&one_arrow())));
    }

    #[test]
    fn er_fibration_examples() {
        assert!(is_er_fibration(&Functor::identity(&one_arrow())));
        assert!(!is_er_fibration(&Functor::to_terminal(
            &FinCat::cyclic_group(2)
        )));
        let rep = Presheaf::representable(&one_arrow(), 1);
        assert!(is_er_fibration(&elements(&rep).proj));
    }

    #[test]
    fn elements_examples() {
        let c = one_arrow();
        let el = elements(&Presheaf::constant(&c, 1));
        assert!(el.proj.is_isomorphism());

        let rep = Presheaf::representable(&c, 1);
        let el = elements(&rep);
        // the slice over the top object is again a one-arrow category
        assert_eq!(
            (el.category().n_objects(), el.category().n_morphisms()),
            (2, 3)
        );
        assert!(is_discrete_fibration(&el.proj));

        let el = elements(&Presheaf::constant(&c, 0));
        assert_eq!(el.category().n_objects(), 0);
    }

    #[test]
    fn fibers_roundtrip() {
        let c = one_arrow();
        for p in [
            Presheaf::constant(&c, 1),
            Presheaf::representable(&c, 1),
            Presheaf::constant(&c, 0),
        ] {
            let el = elements(&p);
            let back = fibers(&el.proj).unwrap();
            assert!(find_presheaf_iso(&p, &back).is_some());
            let again = elements(&back);
            assert!(find_iso_over(&el.proj, &again.proj).is_some());
        }
        let err = fibers(&Functor::to_terminal(&FinCat::cyclic_group(2))).unwrap_err();
        assert!(matches!(err, Error::NotDiscreteFibration { .. }));
    }

    #[test]
    fn comprehensive_factorization_examples() {
        let c = one_arrow();
        let top = Functor::pick(&c, 1);
        let cf = comprehensive_factorization(&top);
        assert_eq!(cf.presheaf.sizes(), vec![1, 1]);
        assert_eq!(cf.s.compose(&cf.j).unwrap(), top);
        assert!(is_final(&cf.j));

        let empty = Functor::new(FinCat::empty(), c.clone(), vec![], vec![]).unwrap();
        let cf = comprehensive_factorization(&empty);
        assert_eq!(cf.presheaf.sizes(), vec![0, 0]);

        let el = elements(&Presheaf::representable(&c, 1));
        let cf = comprehensive_factorization(&el.proj);
        assert!(cf.j.is_isomorphism());
    }

    #[test]
    fn finality_examples() {
        let c = one_arrow();
        assert!(is_final(&Functor::identity(&c)));
        assert!(is_final(&Functor::pick(&c, 1)));
        assert!(!is_final(&Functor::pick(&c, 0)));
    }

    #[test]
    fn representable_of_group_is_regular() {
        let g = FinCat::cyclic_group(3);
        let rep = Presheaf::representable(&g, 0);
        assert_eq!(rep.act(1, 0), 1);
        assert_eq!(rep.act(1, 2), 0);
    }
}
