//! Modules between finite categories, their composition by coends and right
//! lifting by ends, and polynomials `X <-m- S -p-> Y` whose lifter `m` is a
//! module and whose neat leg `p` is a discrete fibration.
//!
//! A module `m: A -> B` is a functor `B^op × A -> Set`. It is stored as a
//! presheaf on `B × A^op`, so cell `(b, a)` has index `b * |A| + a` and the
//! pair `(β, α)` has index `β * |A₁| + α`; the action of `(β, α)` with
//! `β: b′ -> b`, `α: a -> a′` sends `m(b, a)` to `m(b′, a′)`.

use crate::algebra::{enumerate_homomorphisms, UnaryAlgebra, UnionFind};
use crate::error::{Error, Result};
use crate::fincat::{
    comprehensive_factorization, elements, fibers, find_presheaf_iso, is_discrete_fibration,
    ComprehensiveFactorization, Elements, FinCat, Functor, Presheaf,
};
use crate::finset::{check_enumeration, FinSetMap, LexProduct, MAX_ENUMERATION};
use crate::poly::Polynomial;
use crate::span::Span;

const NONE: usize = usize::MAX;

fn check_same(op: &'static str, what: &str, a: &FinCat, b: &FinCat) -> Result<()> {
    if a.same_shape(b) {
        Ok(())
    } else {
        Err(Error::mismatch(op, format!("{what} categories differ")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profunctor {
    src: FinCat,
    tgt: FinCat,
    presheaf: Presheaf,
}

impl Profunctor {
    /// The category `B × A^op` carrying modules `A -> B`.
    pub fn cell_category(src: &FinCat, tgt: &FinCat) -> FinCat {
        FinCat::product(tgt, &src.opposite())
    }

    pub fn from_presheaf(src: FinCat, tgt: FinCat, presheaf: Presheaf) -> Result<Self> {
        if !presheaf.base().same_shape(&Self::cell_category(&src, &tgt)) {
            return Err(Error::invariant(
                "Profunctor",
                "cell_category",
                "presheaf base is not tgt × src^op",
            ));
        }
        Ok(Profunctor { src, tgt, presheaf })
    }

    pub(crate) fn from_tables(
        src: FinCat,
        tgt: FinCat,
        sizes: Vec<usize>,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let base = Self::cell_category(&src, &tgt);
        let presheaf = Presheaf::from_tables(base, sizes, tables).map_err(|e| match e {
            Error::Invariant { clause, detail, .. } => Error::Invariant {
                type_name: "Profunctor",
                clause,
                detail,
            },
            e => e,
        })?;
        Ok(Profunctor { src, tgt, presheaf })
    }

    /// Build from separate actions. `left[β * |A| + a]` maps `m(tgt β, a)` to
    /// `m(src β, a)`; `right[α * |B| + b]` maps `m(b, src α)` to `m(b, tgt α)`.
    /// The two actions must commute.
    pub fn from_actions(
        src: FinCat,
        tgt: FinCat,
        sizes: Vec<usize>,
        left: Vec<Vec<usize>>,
        right: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let (na, nb) = (src.n_objects(), tgt.n_objects());
        let bad = |clause: &'static str, detail: String| {
            Err(Error::invariant("Profunctor", clause, detail))
        };
        if sizes.len() != na * nb {
            return bad(
                "cell_count",
                format!("{} sizes for {} cells", sizes.len(), na * nb),
            );
        }
        if left.len() != tgt.n_morphisms() * na || right.len() != src.n_morphisms() * nb {
            return bad("action_count", "wrong number of action tables".into());
        }
        for beta in 0..tgt.n_morphisms() {
            for a in 0..na {
                let t = &left[beta * na + a];
                let cod = sizes[tgt.src(beta) * na + a];
                if t.len() != sizes[tgt.tgt(beta) * na + a] || t.iter().any(|&v| v >= cod) {
                    return bad(
                        "action_typing",
                        format!("left action of {beta} at {a} is mistyped"),
                    );
                }
            }
        }
        for alpha in 0..src.n_morphisms() {
            for b in 0..nb {
                let t = &right[alpha * nb + b];
                let cod = sizes[b * na + src.tgt(alpha)];
                if t.len() != sizes[b * na + src.src(alpha)] || t.iter().any(|&v| v >= cod) {
                    return bad(
                        "action_typing",
                        format!("right action of {alpha} at {b} is mistyped"),
                    );
                }
            }
        }
        let ma = src.n_morphisms();
        let tables = (0..tgt.n_morphisms() * ma)
            .map(|m| {
                let (beta, alpha) = (m / ma, m % ma);
                let (a, b2) = (src.src(alpha), tgt.src(beta));
                left[beta * na + a]
                    .iter()
                    .map(|&x| right[alpha * nb + b2][x])
                    .collect()
            })
            .collect();
        Self::from_tables(src, tgt, sizes, tables)
    }

    /// A module between discrete categories: `sizes[b * a_n + a]` elements in
    /// each cell.
    pub fn matrix(a_n: usize, b_n: usize, sizes: Vec<usize>) -> Self {
        let (src, tgt) = (FinCat::discrete(a_n), FinCat::discrete(b_n));
        let tables = (0..a_n * b_n).map(|o| (0..sizes[o]).collect()).collect();
        Self::from_tables(src, tgt, sizes, tables).expect("matrix module")
    }

    /// The matrix module of a span `K <- A -> X`, counting apex elements over
    /// each pair.
    pub fn from_span(s: &Span) -> Self {
        let (k, x) = (s.left_foot(), s.right_foot());
        let mut sizes = vec![0; x * k];
        for i in 0..s.apex_size() {
            sizes[s.right().apply(i) * k + s.left().apply(i)] += 1;
        }
        Self::matrix(k, x, sizes)
    }

    /// A presheaf on `X` as a module `1 -> X`.
    pub fn from_presheaf_on(p: &Presheaf) -> Self {
        let x = p.base();
        let tables = (0..x.n_morphisms())
            .map(|m| p.action(m).table().to_vec())
            .collect();
        Self::from_tables(FinCat::terminal(), x.clone(), p.sizes(), tables)
            .expect("presheaf as a module")
    }

    /// The presheaf of a module out of the terminal category.
    pub fn to_presheaf(&self) -> Result<Presheaf> {
        if self.src.n_objects() != 1 || self.src.n_morphisms() != 1 {
            return Err(Error::mismatch(
                "to_presheaf",
                "source is not the terminal category",
            ));
        }
        let tables = (0..self.tgt.n_morphisms())
            .map(|m| self.presheaf.action(m).table().to_vec())
            .collect();
        Presheaf::from_tables(self.tgt.clone(), self.presheaf.sizes(), tables)
    }

    pub fn hom(c: &FinCat) -> Self {
        graph_module(&Functor::identity(c))
    }

    pub fn src(&self) -> &FinCat {
        &self.src
    }

    pub fn tgt(&self) -> &FinCat {
        &self.tgt
    }

    pub fn presheaf(&self) -> &Presheaf {
        &self.presheaf
    }

    pub fn cell(&self, b: usize, a: usize) -> usize {
        b * self.src.n_objects() + a
    }

    pub fn size(&self, b: usize, a: usize) -> usize {
        self.presheaf.size_at(self.cell(b, a))
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.presheaf.sizes()
    }

    pub fn total_size(&self) -> usize {
        self.sizes().iter().sum()
    }

    /// `m(β, α)(x)` for `x ∈ m(tgt β, src α)`.
    pub fn act(&self, beta: usize, alpha: usize, x: usize) -> usize {
        self.presheaf.act(beta * self.src.n_morphisms() + alpha, x)
    }

    /// Action of `β: b′ -> b` on `m(b, a)`.
    pub fn left(&self, beta: usize, a: usize, x: usize) -> usize {
        self.act(beta, self.src.id(a), x)
    }

    /// Action of `α: a -> a′` on `m(b, a)`.
    pub fn right(&self, alpha: usize, b: usize, x: usize) -> usize {
        self.act(self.tgt.id(b), alpha, x)
    }

    pub fn left_table(&self, beta: usize, a: usize) -> Vec<usize> {
        (0..self.size(self.tgt.tgt(beta), a))
            .map(|x| self.left(beta, a, x))
            .collect()
    }

    pub fn right_table(&self, alpha: usize, b: usize) -> Vec<usize> {
        (0..self.size(b, self.src.src(alpha)))
            .map(|x| self.right(alpha, b, x))
            .collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.src.is_discrete() && self.tgt.is_discrete()
    }

    /// The presheaf `m(-, a)` on the target, as an algebra.
    fn column(&self, a: usize) -> UnaryAlgebra {
        let nb = self.tgt.n_objects();
        let mut alg = UnaryAlgebra::new((0..nb).map(|b| self.size(b, a)).collect());
        for beta in 0..self.tgt.n_morphisms() {
            alg.op(
                self.tgt.tgt(beta),
                self.tgt.src(beta),
                self.left_table(beta, a),
            );
        }
        alg
    }
}

/// A natural isomorphism `m ≅ n` between parallel modules, if one exists.
pub fn find_prof_iso(m: &Profunctor, n: &Profunctor) -> Option<Vec<FinSetMap>> {
    if !m.src.same_shape(&n.src) || !m.tgt.same_shape(&n.tgt) {
        return None;
    }
    find_presheaf_iso(&m.presheaf, &n.presheaf)
}

pub fn profs_isomorphic(m: &Profunctor, n: &Profunctor) -> bool {
    find_prof_iso(m, n).is_some()
}

/// `f_*` with `f_*(b, a) = B(b, fa)`, elements in hom order.
pub fn graph_module(f: &Functor) -> Profunctor {
    let (a, b) = (f.dom(), f.cod());
    let base = Profunctor::cell_category(a, b);
    let ma = a.n_morphisms();
    let sizes = (0..b.n_objects())
        .flat_map(|bo| (0..a.n_objects()).map(move |ao| (bo, ao)))
        .map(|(bo, ao)| b.hom(bo, f.ob(ao)).len())
        .collect();
    let tables = (0..base.n_morphisms())
        .map(|m| {
            let (beta, alpha) = (m / ma, m % ma);
            b.hom(b.tgt(beta), f.ob(a.src(alpha)))
                .iter()
                .map(|&psi| b.hom_position(b.comp(f.mo(alpha), b.comp(psi, beta))))
                .collect()
        })
        .collect();
    Profunctor::from_tables(a.clone(), b.clone(), sizes, tables).expect("graph module")
}

/// `f^*: B -> A` with `f^*(a, b) = B(fa, b)`.
pub fn cograph_module(f: &Functor) -> Profunctor {
    let (a, b) = (f.dom(), f.cod());
    let base = Profunctor::cell_category(b, a);
    let mb = b.n_morphisms();
    let sizes = (0..a.n_objects())
        .flat_map(|ao| (0..b.n_objects()).map(move |bo| (ao, bo)))
        .map(|(ao, bo)| b.hom(f.ob(ao), bo).len())
        .collect();
    let tables = (0..base.n_morphisms())
        .map(|m| {
            let (alpha, beta) = (m / mb, m % mb);
            b.hom(f.ob(a.tgt(alpha)), b.src(beta))
                .iter()
                .map(|&psi| b.hom_position(b.comp(beta, b.comp(psi, f.mo(alpha)))))
                .collect()
        })
        .collect();
    Profunctor::from_tables(b.clone(), a.clone(), sizes, tables).expect("cograph module")
}

/// A natural transformation between parallel modules, one map per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfCell {
    source: Profunctor,
    target: Profunctor,
    components: Vec<FinSetMap>,
}

impl ProfCell {
    pub fn new(source: Profunctor, target: Profunctor, components: Vec<FinSetMap>) -> Result<Self> {
        check_same("ProfCell", "source", &source.src, &target.src)?;
        check_same("ProfCell", "target", &source.tgt, &target.tgt)?;
        let bad = |clause: &'static str, detail: String| {
            Err(Error::invariant("ProfCell", clause, detail))
        };
        let base = source.presheaf.base();
        if components.len() != base.n_objects() {
            return bad(
                "component_count",
                format!(
                    "{} components for {} cells",
                    components.len(),
                    base.n_objects()
                ),
            );
        }
        for (o, c) in components.iter().enumerate() {
            if c.dom_size() != source.presheaf.size_at(o)
                || c.cod_size() != target.presheaf.size_at(o)
            {
                return bad(
                    "component_typing",
                    format!("component at cell {o} is mistyped"),
                );
            }
        }
        for m in 0..base.n_morphisms() {
            let (s, t) = (base.src(m), base.tgt(m));
            for x in 0..source.presheaf.size_at(t) {
                if components[s].apply(source.presheaf.act(m, x))
                    != target.presheaf.act(m, components[t].apply(x))
                {
                    return bad(
                        "naturality",
                        format!("square for morphism {m} fails at element {x}"),
                    );
                }
            }
        }
        Ok(ProfCell {
            source,
            target,
            components,
        })
    }

    pub fn identity(m: &Profunctor) -> Self {
        let components = m.sizes().into_iter().map(FinSetMap::identity).collect();
        ProfCell {
            source: m.clone(),
            target: m.clone(),
            components,
        }
    }

    pub fn source(&self) -> &Profunctor {
        &self.source
    }

    pub fn target(&self) -> &Profunctor {
        &self.target
    }

    pub fn components(&self) -> &[FinSetMap] {
        &self.components
    }

    pub fn apply(&self, b: usize, a: usize, x: usize) -> usize {
        self.components[self.source.cell(b, a)].apply(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.components.iter().all(FinSetMap::is_bijective)
    }

    /// `self ∘ first`.
    pub fn vcompose(&self, first: &ProfCell) -> Result<ProfCell> {
        if first.target != self.source {
            return Err(Error::mismatch(
                "vcompose_prof",
                "inner target differs from outer source",
            ));
        }
        let components = self
            .components
            .iter()
            .zip(&first.components)
            .map(|(g, f)| g.compose(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProfCell {
            source: first.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    /// Every cell `m ⇒ n`, in lexicographic order of the component tables.
    pub fn enumerate(m: &Profunctor, n: &Profunctor) -> Result<Vec<ProfCell>> {
        check_same("enumerate_prof_cells", "source", &m.src, &n.src)?;
        check_same("enumerate_prof_cells", "target", &m.tgt, &n.tgt)?;
        let homs = enumerate_homomorphisms(
            &m.presheaf.as_algebra(),
            &n.presheaf.as_algebra(),
            MAX_ENUMERATION as usize,
        )
        .map_err(|_| Error::TooLarge {
            op: "enumerate_prof_cells",
            detail: "too many cells".into(),
        })?;
        Ok(homs
            .into_iter()
            .map(|phi| ProfCell {
                source: m.clone(),
                target: n.clone(),
                components: phi
                    .into_iter()
                    .enumerate()
                    .map(|(o, t)| FinSetMap::raw(t.len(), n.presheaf.size_at(o), t))
                    .collect(),
            })
            .collect())
    }
}

/// A representative `(b, x, y)` with `x ∈ m(b, a)`, `y ∈ n(c, b)` of a coend
/// class, together with the class index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoendElement {
    pub b: usize,
    pub left: usize,
    pub right: usize,
    pub class: usize,
}

/// `n ∘ m` with the bookkeeping of its coend: for every cell, the triples
/// `(b, x, y)` in order of `b`, `x`, `y` and the class of each.
#[derive(Clone, Debug)]
pub struct ProfComposite {
    pub module: Profunctor,
    offsets: Vec<Vec<usize>>,
    widths: Vec<Vec<usize>>,
    classes: Vec<Vec<usize>>,
    representatives: Vec<Vec<CoendElement>>,
}

impl ProfComposite {
    /// Class of `(b, x, y)` in cell `(c, a)`.
    pub fn class_of(&self, c: usize, a: usize, b: usize, x: usize, y: usize) -> usize {
        let o = self.module.cell(c, a);
        self.classes[o][self.offsets[o][b] + x * self.widths[o][b] + y]
    }

    /// Smallest representative of each class in cell `(c, a)`.
    pub fn representatives(&self, c: usize, a: usize) -> &[CoendElement] {
        &self.representatives[self.module.cell(c, a)]
    }

    fn triples(&self, o: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let nb = self.offsets[o].len();
        (0..nb).flat_map(move |b| {
            let w = self.widths[o][b];
            let len = if b + 1 < nb {
                self.offsets[o][b + 1]
            } else {
                self.classes[o].len()
            } - self.offsets[o][b];
            (0..len).map(move |i| (b, i / w, i % w, self.classes[o][self.offsets[o][b] + i]))
        })
    }
}

/// `(n ∘ m)(c, a) = ∫^b m(b, a) × n(c, b)`, classes numbered by smallest
/// triple.
pub fn prof_compose_coend(n: &Profunctor, m: &Profunctor) -> Result<ProfComposite> {
    check_same("prof_compose", "middle", &m.tgt, &n.src)?;
    let (a_cat, b_cat, c_cat) = (&m.src, &m.tgt, &n.tgt);
    let (na, nb, nc) = (a_cat.n_objects(), b_cat.n_objects(), c_cat.n_objects());
    let mut total: u128 = 0;
    let mut offsets = Vec::with_capacity(na * nc);
    let mut widths = Vec::with_capacity(na * nc);
    let mut classes = Vec::with_capacity(na * nc);
    let mut representatives = Vec::with_capacity(na * nc);
    let mut sizes = Vec::with_capacity(na * nc);
    for c in 0..nc {
        for a in 0..na {
            let mut off = Vec::with_capacity(nb);
            let mut wid = Vec::with_capacity(nb);
            let mut len = 0;
            for b in 0..nb {
                off.push(len);
                wid.push(n.size(c, b));
                len += m.size(b, a) * n.size(c, b);
            }
            total += len as u128;
            check_enumeration("prof_compose", total)?;
            let idx = |b: usize, x: usize, y: usize| off[b] + x * wid[b] + y;
            let mut uf = UnionFind::new(len);
            for beta in 0..b_cat.n_morphisms() {
                let (b, b2) = (b_cat.src(beta), b_cat.tgt(beta));
                for x2 in 0..m.size(b2, a) {
                    let x = m.left(beta, a, x2);
                    for y in 0..n.size(c, b) {
                        uf.union(idx(b, x, y), idx(b2, x2, n.right(beta, c, y)));
                    }
                }
            }
            let (class, count) = uf.classes();
            let mut reps = Vec::with_capacity(count);
            for b in 0..nb {
                for i in 0..m.size(b, a) * wid[b] {
                    let k = class[off[b] + i];
                    if k == reps.len() {
                        reps.push(CoendElement {
                            b,
                            left: i / wid[b],
                            right: i % wid[b],
                            class: k,
                        });
                    }
                }
            }
            sizes.push(count);
            offsets.push(off);
            widths.push(wid);
            classes.push(class);
            representatives.push(reps);
        }
    }
    let ma = a_cat.n_morphisms();
    let mut comp = ProfComposite {
        module: Profunctor {
            src: a_cat.clone(),
            tgt: c_cat.clone(),
            presheaf: Presheaf::constant(&FinCat::empty(), 0),
        },
        offsets,
        widths,
        classes,
        representatives,
    };
    let mut tables = Vec::with_capacity(c_cat.n_morphisms() * ma);
    for gamma in 0..c_cat.n_morphisms() {
        for alpha in 0..ma {
            let (c, c2) = (c_cat.tgt(gamma), c_cat.src(gamma));
            let (a, a2) = (a_cat.src(alpha), a_cat.tgt(alpha));
            let (o, o2) = (c * na + a, c2 * na + a2);
            let mut t = vec![NONE; sizes[o]];
            for (b, x, y, k) in comp.triples(o) {
                let (x2, y2) = (m.right(alpha, b, x), n.left(gamma, b, y));
                let k2 = comp.classes[o2][comp.offsets[o2][b] + x2 * comp.widths[o2][b] + y2];
                if t[k] == NONE {
                    t[k] = k2;
                } else if t[k] != k2 {
                    return Err(Error::invariant(
                        "ProfComposite",
                        "action_well_defined",
                        format!("class {k} of cell {o} has images {} and {k2}", t[k]),
                    ));
                }
            }
            tables.push(t);
        }
    }
    comp.module = Profunctor::from_tables(a_cat.clone(), c_cat.clone(), sizes, tables)?;
    Ok(comp)
}

pub fn prof_compose(n: &Profunctor, m: &Profunctor) -> Result<Profunctor> {
    Ok(prof_compose_coend(n, m)?.module)
}

/// `n ∘ β: n ∘ m ⇒ n ∘ m′`.
pub fn whisker_left_mod(n: &Profunctor, beta: &ProfCell) -> Result<ProfCell> {
    let s = prof_compose_coend(n, &beta.source)?;
    let t = prof_compose_coend(n, &beta.target)?;
    let (na, nc) = (beta.source.src.n_objects(), n.tgt.n_objects());
    let mut components = Vec::with_capacity(na * nc);
    for c in 0..nc {
        for a in 0..na {
            let o = c * na + a;
            let mut map = vec![NONE; s.module.presheaf.size_at(o)];
            for (b, x, y, k) in s.triples(o) {
                map[k] = t.class_of(c, a, b, beta.apply(b, a, x), y);
            }
            components.push(FinSetMap::raw(map.len(), t.module.presheaf.size_at(o), map));
        }
    }
    ProfCell::new(s.module, t.module, components)
}

/// The right lifting `rif(n, u): K -> S` of `u: K -> Y` through `n: S -> Y`,
/// with `rif(n, u)(s, k)` the natural families `n(-, s) ⇒ u(-, k)`.
#[derive(Clone, Debug)]
pub struct ModLift {
    pub module: Profunctor,
    n: Profunctor,
    u: Profunctor,
    families: Vec<Vec<Vec<Vec<usize>>>>,
}

impl ModLift {
    /// The `i`-th family at `(s, k)`: one table `n(y, s) -> u(y, k)` per `y`.
    pub fn family(&self, s: usize, k: usize, i: usize) -> &[Vec<usize>] {
        &self.families[self.module.cell(s, k)][i]
    }

    pub fn index_of(&self, s: usize, k: usize, family: &[Vec<usize>]) -> Option<usize> {
        self.families[self.module.cell(s, k)]
            .binary_search_by(|f| f.as_slice().cmp(family))
            .ok()
    }

    /// The universal cell `n ∘ rif(n, u) ⇒ u`, evaluating a family at an
    /// element.
    pub fn counit(&self) -> Result<ProfCell> {
        let comp = prof_compose_coend(&self.n, &self.module)?;
        let (nk, ny) = (self.u.src.n_objects(), self.u.tgt.n_objects());
        let mut components = Vec::with_capacity(nk * ny);
        for y in 0..ny {
            for k in 0..nk {
                let o = y * nk + k;
                let mut map = vec![NONE; comp.module.presheaf.size_at(o)];
                for (s, i, e, cls) in comp.triples(o) {
                    let v = self.family(s, k, i)[y][e];
                    if map[cls] != NONE && map[cls] != v {
                        return Err(Error::invariant(
                            "ModLift",
                            "counit_well_defined",
                            format!("class {cls} of cell {o}"),
                        ));
                    }
                    map[cls] = v;
                }
                components.push(FinSetMap::raw(map.len(), self.u.size(y, k), map));
            }
        }
        ProfCell::new(comp.module, self.u.clone(), components)
    }

    /// The cell `n ∘ v ⇒ u` corresponding to `β: v ⇒ rif(n, u)`.
    pub fn transpose(&self, beta: &ProfCell) -> Result<ProfCell> {
        if beta.target != self.module {
            return Err(Error::mismatch(
                "transpose",
                "cell does not land in the lifting",
            ));
        }
        self.counit()?.vcompose(&whisker_left_mod(&self.n, beta)?)
    }
}

pub fn rif_mod(n: &Profunctor, u: &Profunctor) -> Result<ModLift> {
    check_same("rif_mod", "lifting-base", &n.tgt, &u.tgt)?;
    let (s_cat, k_cat, y_cat) = (&n.src, &u.src, &n.tgt);
    let (ns, nk, ny) = (s_cat.n_objects(), k_cat.n_objects(), y_cat.n_objects());
    let cols_n: Vec<UnaryAlgebra> = (0..ns).map(|s| n.column(s)).collect();
    let cols_u: Vec<UnaryAlgebra> = (0..nk).map(|k| u.column(k)).collect();
    let mut families = Vec::with_capacity(ns * nk);
    let mut total: u128 = 0;
    for s in 0..ns {
        for k in 0..nk {
            let fams = enumerate_homomorphisms(&cols_n[s], &cols_u[k], MAX_ENUMERATION as usize)
                .map_err(|_| Error::TooLarge {
                    op: "rif_mod",
                    detail: format!("too many natural families at ({s}, {k})"),
                })?;
            total += fams.len() as u128;
            check_enumeration("rif_mod", total)?;
            families.push(fams);
        }
    }
    let sizes: Vec<usize> = families.iter().map(Vec::len).collect();
    let mk = k_cat.n_morphisms();
    let mut tables = Vec::with_capacity(s_cat.n_morphisms() * mk);
    for sigma in 0..s_cat.n_morphisms() {
        for kappa in 0..mk {
            let (s, s2) = (s_cat.tgt(sigma), s_cat.src(sigma));
            let (k, k2) = (k_cat.src(kappa), k_cat.tgt(kappa));
            let target = &families[s2 * nk + k2];
            let t = families[s * nk + k]
                .iter()
                .map(|alpha| {
                    let image: Vec<Vec<usize>> = (0..ny)
                        .map(|y| {
                            (0..n.size(y, s2))
                                .map(|e| u.right(kappa, y, alpha[y][n.right(sigma, y, e)]))
                                .collect()
                        })
                        .collect();
                    target
                        .binary_search(&image)
                        .expect("action on natural families")
                })
                .collect();
            tables.push(t);
        }
    }
    let module = Profunctor::from_tables(k_cat.clone(), s_cat.clone(), sizes, tables)?;
    Ok(ModLift {
        module,
        n: n.clone(),
        u: u.clone(),
        families,
    })
}

/// The category of elements of `u` with its projection, which tabulates `u`.
pub fn tabulate_mod(u: &Presheaf) -> Elements {
    elements(u)
}

/// The presheaf `p_* ∘ !^*` of a discrete fibration `p: Z -> C`, computed
/// fibrewise.
pub fn fiber_presheaf(p: &Functor) -> Result<Presheaf> {
    fibers(p)
}

/// The same presheaf, computed as a coend of graph modules.
pub fn fiber_presheaf_via_coend(p: &Functor) -> Result<Presheaf> {
    let bang = cograph_module(&Functor::to_terminal(p.dom()));
    prof_compose(&graph_module(p), &bang)?.to_presheaf()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPolynomial {
    m: Profunctor,
    p: Functor,
}

impl ModPolynomial {
    pub fn new(m: Profunctor, p: Functor) -> Result<Self> {
        if !m.src.same_shape(p.dom()) {
            return Err(Error::invariant(
                "ModPolynomial",
                "shared_middle",
                "lifter source differs from neat domain",
            ));
        }
        if !is_discrete_fibration(&p) {
            return Err(Error::NotDiscreteFibration {
                op: "ModPolynomial",
                detail: "neat leg".into(),
            });
        }
        Ok(ModPolynomial { m, p })
    }

    pub fn identity(c: &FinCat) -> Self {
        ModPolynomial {
            m: Profunctor::hom(c),
            p: Functor::identity(c),
        }
    }

    /// The discrete version of a polynomial: `m(x, s)` is the set of
    /// exponents over `(x, s)`.
    pub fn from_polynomial(poly: &Polynomial) -> Self {
        let (x, s, y) = (poly.x_size(), poly.s_size(), poly.y_size());
        let mut sizes = vec![0; x * s];
        for e in 0..poly.e_size() {
            sizes[poly.m1().apply(e) * s + poly.m2().apply(e)] += 1;
        }
        let (s_cat, y_cat) = (FinCat::discrete(s), FinCat::discrete(y));
        let table = poly.p().table().to_vec();
        ModPolynomial {
            m: Profunctor::matrix(s, x, sizes),
            p: Functor::new(s_cat, y_cat, table.clone(), table).expect("discrete neat leg"),
        }
    }

    /// Back to a polynomial when every category is discrete; exponents are
    /// listed by `s`, then `x`, then position.
    pub fn to_polynomial(&self) -> Result<Polynomial> {
        let (x, s, y) = (self.x(), self.s(), self.y());
        if !(x.is_discrete() && s.is_discrete() && y.is_discrete()) {
            return Err(Error::mismatch(
                "to_polynomial",
                "categories are not discrete",
            ));
        }
        let (mut m1, mut m2) = (Vec::new(), Vec::new());
        for so in 0..s.n_objects() {
            for xo in 0..x.n_objects() {
                for _ in 0..self.m.size(xo, so) {
                    m1.push(xo);
                    m2.push(so);
                }
            }
        }
        let e = m1.len();
        Polynomial::new(
            FinSetMap::new(e, x.n_objects(), m1)?,
            FinSetMap::new(e, s.n_objects(), m2)?,
            FinSetMap::new(s.n_objects(), y.n_objects(), self.p.object_map().to_vec())?,
        )
    }

    pub fn m(&self) -> &Profunctor {
        &self.m
    }

    pub fn p(&self) -> &Functor {
        &self.p
    }

    pub fn x(&self) -> &FinCat {
        &self.m.tgt
    }

    pub fn s(&self) -> &FinCat {
        self.p.dom()
    }

    pub fn y(&self) -> &FinCat {
        self.p.cod()
    }
}

/// `Q ∘ P` with the intermediate data of its construction.
#[derive(Clone, Debug)]
pub struct ModComposite {
    pub poly: ModPolynomial,
    /// Fibres of `P`'s neat leg.
    pub z: Presheaf,
    /// `rif(Q.m, z)` with its natural families `ξ`.
    pub lift: ModLift,
    /// Tabulation of the lifting; objects are pairs `(t, ξ)`.
    pub tab: Elements,
    /// The induced module `Y -> Z`.
    pub n: Profunctor,
    outer: ModPolynomial,
    inner: ModPolynomial,
}

impl ModComposite {
    pub fn r(&self) -> &Functor {
        &self.tab.proj
    }

    /// Whether `p_* ∘ n ≅ m ∘ r_*` for `P`'s neat leg `p` and `Q`'s lifter
    /// `m`.
    pub fn square_commutes(&self) -> Result<bool> {
        let lhs = prof_compose(&graph_module(&self.inner.p), &self.n)?;
        let rhs = prof_compose(&self.outer.m, &graph_module(self.r()))?;
        Ok(profs_isomorphic(&lhs, &rhs))
    }
}

pub fn compose_polymod_witnessed(q: &ModPolynomial, p: &ModPolynomial) -> Result<ModComposite> {
    check_same("compose_polymod", "middle", p.y(), q.x())?;
    let z = fiber_presheaf(&p.p)?;
    let mut pos = vec![0; p.s().n_objects()];
    let mut seen = vec![0; z.base().n_objects()];
    for zo in 0..p.s().n_objects() {
        pos[zo] = seen[p.p.ob(zo)];
        seen[p.p.ob(zo)] += 1;
    }
    let lift = rif_mod(&q.m, &Profunctor::from_presheaf_on(&z))?;
    let y = lift.module.to_presheaf()?;
    let tab = elements(&y);
    let (z_cat, y_cat) = (p.s(), tab.category());
    let (nz, ny) = (z_cat.n_objects(), y_cat.n_objects());
    let lists: Vec<Vec<usize>> = (0..nz)
        .flat_map(|zo| (0..ny).map(move |yo| (zo, yo)))
        .map(|(zo, yo)| {
            let (t, i) = tab.decode(yo);
            let xi = &lift.family(t, 0, i)[p.p.ob(zo)];
            (0..xi.len()).filter(|&mu| xi[mu] == pos[zo]).collect()
        })
        .collect();
    let my = y_cat.n_morphisms();
    let mut tables = Vec::with_capacity(z_cat.n_morphisms() * my);
    for zeta in 0..z_cat.n_morphisms() {
        for eta in 0..my {
            let from = z_cat.tgt(zeta) * ny + y_cat.src(eta);
            let to = z_cat.src(zeta) * ny + y_cat.tgt(eta);
            let t = lists[from]
                .iter()
                .map(|&mu| {
                    let image = q.m.act(p.p.mo(zeta), tab.proj.mo(eta), mu);
                    lists[to].binary_search(&image).map_err(|_| {
                        Error::invariant(
                            "ModComposite",
                            "splitting_family",
                            format!("element {mu} leaves its fibre"),
                        )
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            tables.push(t);
        }
    }
    let n = Profunctor::from_tables(
        y_cat.clone(),
        z_cat.clone(),
        lists.iter().map(Vec::len).collect(),
        tables,
    )?;
    let poly = ModPolynomial::new(prof_compose(&p.m, &n)?, q.p.compose(&tab.proj)?)?;
    Ok(ModComposite {
        poly,
        z,
        lift,
        tab,
        n,
        outer: q.clone(),
        inner: p.clone(),
    })
}

pub fn compose_polymod(q: &ModPolynomial, p: &ModPolynomial) -> Result<ModPolynomial> {
    Ok(compose_polymod_witnessed(q, p)?.poly)
}

/// The module `K -> Y` that `P` assigns to `u: K -> X`, as `p_* ∘ rif(m, u)`.
pub fn hk_mod(poly: &ModPolynomial, u: &Profunctor) -> Result<Profunctor> {
    check_same("hk_mod", "input", &u.tgt, poly.x())?;
    let lift = rif_mod(&poly.m, u)?;
    prof_compose(&graph_module(&poly.p), &lift.module)
}

/// The same module computed fibrewise: at `(y, k)`, pairs `(s, α)` with `s`
/// over `y` and `α: m(-, s) ⇒ u(-, k)` found by exhaustive search.
pub fn hk_mod_fiberwise(poly: &ModPolynomial, u: &Profunctor) -> Result<Profunctor> {
    check_same("hk_mod", "input", &u.tgt, poly.x())?;
    let (m, p) = (&poly.m, &poly.p);
    let (x_cat, s_cat, y_cat, k_cat) = (poly.x(), poly.s(), poly.y(), &u.src);
    let (nx, ns, ny, nk) = (
        x_cat.n_objects(),
        s_cat.n_objects(),
        y_cat.n_objects(),
        k_cat.n_objects(),
    );
    let nat = |s: usize, k: usize| -> Result<Vec<Vec<Vec<usize>>>> {
        let choices: Vec<Vec<usize>> = (0..nx)
            .flat_map(|x| (0..m.size(x, s)).map(move |_| (0..u.size(x, k)).collect()))
            .collect();
        check_enumeration("hk_mod_fiberwise", LexProduct::count(&choices))?;
        let mut out = Vec::new();
        for flat in LexProduct::new(choices) {
            let mut it = flat.into_iter();
            let alpha: Vec<Vec<usize>> = (0..nx)
                .map(|x| it.by_ref().take(m.size(x, s)).collect())
                .collect();
            let natural = (0..x_cat.n_morphisms()).all(|g| {
                let (x2, x) = (x_cat.src(g), x_cat.tgt(g));
                (0..m.size(x, s)).all(|e| alpha[x2][m.left(g, s, e)] == u.left(g, k, alpha[x][e]))
            });
            if natural {
                out.push(alpha);
            }
        }
        Ok(out)
    };
    let mut nats = Vec::with_capacity(ns * nk);
    for s in 0..ns {
        for k in 0..nk {
            nats.push(nat(s, k)?);
        }
    }
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); ny];
    for s in 0..ns {
        over[p.ob(s)].push(s);
    }
    let my = y_cat.n_morphisms();
    let mut lift = vec![NONE; ns * my];
    for sigma in 0..s_cat.n_morphisms() {
        lift[s_cat.tgt(sigma) * my + p.mo(sigma)] = sigma;
    }
    // elements of each cell (y, k): (s, α) by s then α
    let cell_elems: Vec<Vec<(usize, usize)>> = (0..ny)
        .flat_map(|y| (0..nk).map(move |k| (y, k)))
        .map(|(y, k)| {
            over[y]
                .iter()
                .flat_map(|&s| (0..nats[s * nk + k].len()).map(move |i| (s, i)))
                .collect()
        })
        .collect();
    let mk = k_cat.n_morphisms();
    let mut tables = Vec::with_capacity(my * mk);
    for gamma in 0..my {
        for kappa in 0..mk {
            let (y, y2) = (y_cat.tgt(gamma), y_cat.src(gamma));
            let (k, k2) = (k_cat.src(kappa), k_cat.tgt(kappa));
            let target = &cell_elems[y2 * nk + k2];
            let t = cell_elems[y * nk + k]
                .iter()
                .map(|&(s, i)| {
                    let sigma = lift[s * my + gamma];
                    let s2 = s_cat.src(sigma);
                    let alpha = &nats[s * nk + k][i];
                    let image: Vec<Vec<usize>> = (0..nx)
                        .map(|x| {
                            (0..m.size(x, s2))
                                .map(|e| u.right(kappa, x, alpha[x][m.right(sigma, x, e)]))
                                .collect()
                        })
                        .collect();
                    let j = nats[s2 * nk + k2]
                        .binary_search(&image)
                        .expect("natural family image");
                    target
                        .binary_search(&(s2, j))
                        .expect("element of the target cell")
                })
                .collect();
            tables.push(t);
        }
    }
    Profunctor::from_tables(
        k_cat.clone(),
        y_cat.clone(),
        cell_elems.iter().map(Vec::len).collect(),
        tables,
    )
}

/// The cotensor `2^op × A` with its module `pr₂_*`.
#[derive(Clone, Debug)]
pub struct Cotensor {
    pub base: FinCat,
    pub cat: FinCat,
    pub c: Profunctor,
}

// morphisms of ordinal 2: id₀, 0 ≤ 1, id₁
const ARROW: usize = 1;
const IDS: [usize; 2] = [0, 2];

pub fn cotensor2_mod(a: &FinCat) -> Cotensor {
    let two = FinCat::ordinal(2).opposite();
    let cat = FinCat::product(&two, a);
    let (na, ma) = (a.n_objects(), a.n_morphisms());
    let pr2 = Functor::new(
        cat.clone(),
        a.clone(),
        (0..cat.n_objects()).map(|o| o % na).collect(),
        (0..cat.n_morphisms()).map(|m| m % ma).collect(),
    )
    .expect("second projection");
    Cotensor {
        base: a.clone(),
        c: graph_module(&pr2),
        cat,
    }
}

impl Cotensor {
    /// Split `M: K -> 2^op × A` into `M₀, M₁: K -> A` and the cell
    /// `M₀ ⇒ M₁` given by the arrow of `2^op`.
    pub fn decompose(&self, m: &Profunctor) -> Result<(Profunctor, Profunctor, ProfCell)> {
        check_same("cotensor_decompose", "target", &m.tgt, &self.cat)?;
        let (a, k) = (&self.base, &m.src);
        let (na, nk, ma) = (a.n_objects(), k.n_objects(), a.n_morphisms());
        let part = |i: usize| -> Result<Profunctor> {
            let sizes = (0..na * nk)
                .map(|o| m.size(i * na + o / nk, o % nk))
                .collect();
            let tables = (0..ma * k.n_morphisms())
                .map(|mm| {
                    let (alpha, kappa) = (mm / k.n_morphisms(), mm % k.n_morphisms());
                    m.presheaf
                        .action(m.act_index(IDS[i] * ma + alpha, kappa))
                        .table()
                        .to_vec()
                })
                .collect();
            Profunctor::from_tables(k.clone(), a.clone(), sizes, tables)
        };
        let (m0, m1) = (part(0)?, part(1)?);
        let components = (0..na * nk)
            .map(|o| {
                let (ao, ko) = (o / nk, o % nk);
                m.presheaf
                    .action(m.act_index(ARROW * ma + a.id(ao), k.id(ko)))
                    .clone()
            })
            .collect();
        let phi = ProfCell::new(m0.clone(), m1.clone(), components)?;
        Ok((m0, m1, phi))
    }

    /// Reassemble a module into the cotensor from a cell `M₀ ⇒ M₁`.
    pub fn assemble(&self, phi: &ProfCell) -> Result<Profunctor> {
        let (m0, m1) = (&phi.source, &phi.target);
        check_same("cotensor_assemble", "target", &m0.tgt, &self.base)?;
        let (a, k) = (&self.base, &m0.src);
        let (na, nk, ma, mk) = (
            a.n_objects(),
            k.n_objects(),
            a.n_morphisms(),
            k.n_morphisms(),
        );
        let sizes = (0..2 * na * nk)
            .map(|o| {
                let (i, rest) = (o / (na * nk), o % (na * nk));
                [m0, m1][i].presheaf.size_at(rest)
            })
            .collect();
        let tables = (0..3 * ma * mk)
            .map(|mm| {
                let (j, alpha, kappa) = (mm / (ma * mk), (mm / mk) % ma, mm % mk);
                let act = alpha * mk + kappa;
                match j {
                    0 => m0.presheaf.action(act).table().to_vec(),
                    2 => m1.presheaf.action(act).table().to_vec(),
                    _ => {
                        let cell = a.tgt(alpha) * nk + k.src(kappa);
                        (0..m0.presheaf.size_at(cell))
                            .map(|x| m1.presheaf.act(act, phi.components[cell].apply(x)))
                            .collect()
                    }
                }
            })
            .collect();
        Profunctor::from_tables(k.clone(), self.cat.clone(), sizes, tables)
    }
}

impl Profunctor {
    fn act_index(&self, beta: usize, alpha: usize) -> usize {
        beta * self.src.n_morphisms() + alpha
    }
}

/// Push a discrete fibration `r` over `F` forward along `g: F -> E` by the
/// comprehensive factorisation of `g ∘ r`.
pub fn psh_on_dfib(g: &Functor, r: &Functor) -> Result<ComprehensiveFactorization> {
    if !is_discrete_fibration(r) {
        return Err(Error::NotDiscreteFibration {
            op: "psh_on_dfib",
            detail: "input over the domain".into(),
        });
    }
    Ok(comprehensive_factorization(&g.compose(r)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow() -> FinCat {
        FinCat::ordinal(2)
    }

    #[test]
    fn graph_of_identity_is_hom() {
        let c = arrow();
        let h = Profunctor::hom(&c);
        assert_eq!(h.sizes(), vec![1, 1, 0, 1]);
        let via_cograph = cograph_module(&Functor::identity(&c));
        assert!(profs_isomorphic(&h, &via_cograph));
    }

    #[test]
    fn composing_with_hom_is_trivial() {
        let c = arrow();
        let m = graph_module(&Functor::pick(&c, 1));
        let left = prof_compose(&Profunctor::hom(&c), &m).unwrap();
        let right = prof_compose(&m, &Profunctor::hom(&FinCat::terminal())).unwrap();
        assert!(profs_isomorphic(&left, &m));
        assert!(profs_isomorphic(&right, &m));
    }

    #[test]
    fn discrete_composite_is_matrix_product() {
        let m = Profunctor::matrix(2, 3, vec![1, 0, 2, 1, 0, 3]);
        let n = Profunctor::matrix(3, 2, vec![1, 2, 0, 0, 1, 1]);
        let nm = prof_compose(&n, &m).unwrap();
        for c in 0..2 {
            for a in 0..2 {
                let want: usize = (0..3).map(|b| m.size(b, a) * n.size(c, b)).sum();
                assert_eq!(nm.size(c, a), want);
            }
        }
    }

    #[test]
    fn connecting_arrow_glues_summands() {
        // B = {0 -> 1}; m: 1 -> B is the constant singleton, n: B -> 1 the
        // constant singleton; the two summands are glued into one class
        let b = arrow();
        let m = Profunctor::from_presheaf_on(&Presheaf::constant(&b, 1));
        let n = graph_module(&Functor::to_terminal(&b));
        let comp = prof_compose_coend(&n, &m).unwrap();
        assert_eq!(comp.module.sizes(), vec![1]);
        assert_eq!(
            comp.representatives(0, 0),
            &[CoendElement {
                b: 0,
                left: 0,
                right: 0,
                class: 0
            }]
        );
    }

    #[test]
    fn lifting_examples() {
        let c = arrow();
        let u = Profunctor::from_presheaf_on(&Presheaf::representable(&c, 1));
        let lift = rif_mod(&Profunctor::hom(&c), &u).unwrap();
        assert!(profs_isomorphic(&lift.module, &u));
        // empty n(-, s) makes every rif(s, k) a singleton
        let empty = Profunctor::matrix(1, 2, vec![0, 0]);
        let u = Profunctor::matrix(2, 2, vec![3, 0, 1, 2]);
        assert_eq!(rif_mod(&empty, &u).unwrap().module.sizes(), vec![1, 1]);
        // discrete: product over y of u(y, k)^n(y, s)
        let n = Profunctor::matrix(2, 2, vec![1, 2, 0, 1]);
        let lift = rif_mod(&n, &u).unwrap();
        for s in 0..2 {
            for k in 0..2 {
                let want: usize = (0..2)
                    .map(|y| u.size(y, k).pow(n.size(y, s) as u32))
                    .product();
                assert_eq!(lift.module.size(s, k), want);
            }
        }
    }

    #[test]
    fn counit_is_natural_and_transposes_identity() {
        let c = arrow();
        let n = graph_module(&Functor::pick(&c, 0));
        let u = Profunctor::from_presheaf_on(&Presheaf::representable(&c, 1));
        let lift = rif_mod(&n, &u).unwrap();
        let eps = lift.counit().unwrap();
        let id = ProfCell::identity(&lift.module);
        assert_eq!(lift.transpose(&id).unwrap(), eps);
    }

    #[test]
    fn fiber_presheaf_paths_agree() {
        let p = Presheaf::representable(&FinCat::ordinal(3), 2);
        let el = tabulate_mod(&p);
        let direct = fiber_presheaf(&el.proj).unwrap();
        assert!(find_presheaf_iso(&direct, &p).is_some());
        assert!(find_presheaf_iso(&fiber_presheaf_via_coend(&el.proj).unwrap(), &p).is_some());
        let id = Functor::identity(&arrow());
        assert_eq!(fiber_presheaf(&id).unwrap().sizes(), vec![1, 1]);
    }

    #[test]
    fn cotensor_of_terminal() {
        let ct = cotensor2_mod(&FinCat::terminal());
        assert!(ct.cat.same_shape(&FinCat::ordinal(2).opposite()));
        let ct = cotensor2_mod(&FinCat::discrete(2));
        assert_eq!(ct.cat.components().1, 2);
    }

    #[test]
    fn discrete_embedding_round_trips() {
        let poly = Polynomial::new(
            FinSetMap::new(3, 2, vec![0, 1, 1]).unwrap(),
            FinSetMap::new(3, 2, vec![0, 0, 1]).unwrap(),
            FinSetMap::new(2, 1, vec![0, 0]).unwrap(),
        )
        .unwrap();
        let back = ModPolynomial::from_polynomial(&poly)
            .to_polynomial()
            .unwrap();
        assert_eq!(back, poly);
    }

    #[test]
    fn neat_leg_must_be_a_fibration() {
        let c = arrow();
        let err = ModPolynomial::new(
            graph_module(&Functor::identity(&c)),
            Functor::to_terminal(&c),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotDiscreteFibration { .. }));
    }
}
