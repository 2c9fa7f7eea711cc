//! The bicategory of spans of finite sets: composition by pullback, 2-cells,
//! the characterisation of maps (left adjoints), right liftings, and
//! distributivity pullbacks with the bipullback squares they induce.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::finset::{check_enumeration, pi_f, pullback, FinSetMap, LexProduct, Pullback};

/// A span `X <-left- S -right-> Y`, read as a morphism `X -> Y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    left: FinSetMap,
    right: FinSetMap,
}

impl Span {
    pub fn new(left: FinSetMap, right: FinSetMap) -> Result<Self> {
        if left.dom_size() != right.dom_size() {
            return Err(Error::invariant(
                "Span",
                "leg_domains",
                format!(
                    "legs start at sets of sizes {} and {}",
                    left.dom_size(),
                    right.dom_size()
                ),
            ));
        }
        Ok(Span { left, right })
    }

    pub fn identity(n: usize) -> Self {
        Span {
            left: FinSetMap::identity(n),
            right: FinSetMap::identity(n),
        }
    }

    /// `f_* = (1, X, f)`.
    pub fn graph(f: &FinSetMap) -> Self {
        Span {
            left: FinSetMap::identity(f.dom_size()),
            right: f.clone(),
        }
    }

    /// `f^* = (f, X, 1)`.
    pub fn cograph(f: &FinSetMap) -> Self {
        Span {
            left: f.clone(),
            right: FinSetMap::identity(f.dom_size()),
        }
    }

    pub fn left(&self) -> &FinSetMap {
        &self.left
    }

    pub fn right(&self) -> &FinSetMap {
        &self.right
    }

    pub fn apex_size(&self) -> usize {
        self.left.dom_size()
    }

    pub fn left_foot(&self) -> usize {
        self.left.cod_size()
    }

    pub fn right_foot(&self) -> usize {
        self.right.cod_size()
    }
}

/// `t ∘ s` together with the pullback that forms its apex; apex elements are
/// pairs `(a, b)` of an `s`-element and a `t`-element.
pub fn compose_spans_with_pullback(t: &Span, s: &Span) -> Result<(Span, Pullback)> {
    if s.right_foot() != t.left_foot() {
        return Err(Error::mismatch(
            "compose_spans",
            format!(
                "right foot of size {} meets left foot of size {}",
                s.right_foot(),
                t.left_foot()
            ),
        ));
    }
    let pb = pullback(&s.right, &t.left)?;
    let span = Span {
        left: s.left.compose(&pb.pr1)?,
        right: t.right.compose(&pb.pr2)?,
    };
    Ok((span, pb))
}

/// Composite span `t ∘ s` (first `s`, then `t`).
pub fn compose_spans(t: &Span, s: &Span) -> Result<Span> {
    Ok(compose_spans_with_pullback(t, s)?.0)
}

/// A morphism of parallel spans: `h` between apexes commuting with both legs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanCell {
    source: Span,
    target: Span,
    h: FinSetMap,
}

impl SpanCell {
    pub fn new(source: Span, target: Span, h: FinSetMap) -> Result<Self> {
        if source.left_foot() != target.left_foot() || source.right_foot() != target.right_foot() {
            return Err(Error::mismatch(
                "span_cell",
                "source and target spans are not parallel",
            ));
        }
        if h.dom_size() != source.apex_size() || h.cod_size() != target.apex_size() {
            return Err(Error::invariant(
                "SpanCell",
                "apex_map",
                "map does not go between the apexes",
            ));
        }
        if target.left.compose(&h)? != source.left {
            return Err(Error::invariant(
                "SpanCell",
                "left_triangle",
                "left legs are not preserved",
            ));
        }
        if target.right.compose(&h)? != source.right {
            return Err(Error::invariant(
                "SpanCell",
                "right_triangle",
                "right legs are not preserved",
            ));
        }
        Ok(SpanCell { source, target, h })
    }

    pub fn identity(s: &Span) -> Self {
        SpanCell {
            source: s.clone(),
            target: s.clone(),
            h: FinSetMap::identity(s.apex_size()),
        }
    }

    pub fn source(&self) -> &Span {
        &self.source
    }

    pub fn target(&self) -> &Span {
        &self.target
    }

    pub fn map(&self) -> &FinSetMap {
        &self.h
    }

    pub fn is_invertible(&self) -> bool {
        self.h.is_bijective()
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.h.is_identity()
    }

    pub fn inverse(&self) -> Option<SpanCell> {
        Some(SpanCell {
            source: self.target.clone(),
            target: self.source.clone(),
            h: self.h.inverse()?,
        })
    }

    /// Vertical composite `self · first`.
    pub fn vcompose(&self, first: &SpanCell) -> Result<SpanCell> {
        if first.target != self.source {
            return Err(Error::mismatch(
                "vcompose_cells",
                "target of the first cell is not the source of the second",
            ));
        }
        Ok(SpanCell {
            source: first.source.clone(),
            target: self.target.clone(),
            h: self.h.compose(&first.h)?,
        })
    }

    /// Every cell `source => target`, in lexicographic order of apex maps.
    pub fn enumerate(source: &Span, target: &Span) -> Result<Vec<SpanCell>> {
        if source.left_foot() != target.left_foot() || source.right_foot() != target.right_foot() {
            return Err(Error::mismatch(
                "span_cell",
                "source and target spans are not parallel",
            ));
        }
        let choices: Vec<Vec<usize>> = (0..source.apex_size())
            .map(|a| {
                (0..target.apex_size())
                    .filter(|&b| {
                        target.left.apply(b) == source.left.apply(a)
                            && target.right.apply(b) == source.right.apply(a)
                    })
                    .collect()
            })
            .collect();
        check_enumeration("enumerate_cells", LexProduct::count(&choices))?;
        Ok(LexProduct::new(choices)
            .map(|t| SpanCell {
                source: source.clone(),
                target: target.clone(),
                h: FinSetMap::raw(source.apex_size(), target.apex_size(), t),
            })
            .collect())
    }
}

/// `t ∘ α : t ∘ s ⇒ t ∘ s′` for `α: s ⇒ s′`.
pub fn whisker_left(t: &Span, alpha: &SpanCell) -> Result<SpanCell> {
    let (src, pb_src) = compose_spans_with_pullback(t, &alpha.source)?;
    let (tgt, pb_tgt) = compose_spans_with_pullback(t, &alpha.target)?;
    let table = pb_src
        .pairs()
        .iter()
        .map(|&(a, b)| pb_tgt.index_of(alpha.h.apply(a), b).unwrap())
        .collect();
    SpanCell::new(src, tgt, FinSetMap::raw(pb_src.len(), pb_tgt.len(), table))
}

/// `α ∘ r : s ∘ r ⇒ s′ ∘ r` for `α: s ⇒ s′`.
pub fn whisker_right(alpha: &SpanCell, r: &Span) -> Result<SpanCell> {
    let (src, pb_src) = compose_spans_with_pullback(&alpha.source, r)?;
    let (tgt, pb_tgt) = compose_spans_with_pullback(&alpha.target, r)?;
    let table = pb_src
        .pairs()
        .iter()
        .map(|&(c, a)| pb_tgt.index_of(c, alpha.h.apply(a)).unwrap())
        .collect();
    SpanCell::new(src, tgt, FinSetMap::raw(pb_src.len(), pb_tgt.len(), table))
}

/// Horizontal composite `β ∘ α : t ∘ s ⇒ t′ ∘ s′`.
pub fn hcompose_cells(beta: &SpanCell, alpha: &SpanCell) -> Result<SpanCell> {
    whisker_left(&beta.target, alpha)?.vcompose(&whisker_right(beta, &alpha.source)?)
}

/// Associator `(t ∘ s) ∘ r ⇒ t ∘ (s ∘ r)`.
pub fn associator(t: &Span, s: &Span, r: &Span) -> Result<SpanCell> {
    let (ts, pb_ts) = compose_spans_with_pullback(t, s)?;
    let (src, pb_src) = compose_spans_with_pullback(&ts, r)?;
    let (sr, pb_sr) = compose_spans_with_pullback(s, r)?;
    let (tgt, pb_tgt) = compose_spans_with_pullback(t, &sr)?;
    let table = pb_src
        .pairs()
        .iter()
        .map(|&(c, i)| {
            let (a, b) = pb_ts.pair(i);
            pb_tgt.index_of(pb_sr.index_of(c, a).unwrap(), b).unwrap()
        })
        .collect();
    SpanCell::new(src, tgt, FinSetMap::raw(pb_src.len(), pb_tgt.len(), table))
}

/// Left unitor `1 ∘ s ⇒ s`.
pub fn left_unitor(s: &Span) -> Result<SpanCell> {
    let (src, pb) = compose_spans_with_pullback(&Span::identity(s.right_foot()), s)?;
    let table = pb.pairs().iter().map(|p| p.0).collect();
    SpanCell::new(
        src,
        s.clone(),
        FinSetMap::raw(pb.len(), s.apex_size(), table),
    )
}

/// Right unitor `s ∘ 1 ⇒ s`.
pub fn right_unitor(s: &Span) -> Result<SpanCell> {
    let (src, pb) = compose_spans_with_pullback(s, &Span::identity(s.left_foot()))?;
    let table = pb.pairs().iter().map(|p| p.1).collect();
    SpanCell::new(
        src,
        s.clone(),
        FinSetMap::raw(pb.len(), s.apex_size(), table),
    )
}

/// An invertible cell `s ⇒ t`, if one exists, matching apex elements with
/// equal leg values in order.
pub fn find_span_iso(s: &Span, t: &Span) -> Option<SpanCell> {
    if s.left_foot() != t.left_foot()
        || s.right_foot() != t.right_foot()
        || s.apex_size() != t.apex_size()
    {
        return None;
    }
    let key = |sp: &Span, i: usize| (sp.left.apply(i), sp.right.apply(i));
    let mut order_s: Vec<usize> = (0..s.apex_size()).collect();
    let mut order_t: Vec<usize> = (0..t.apex_size()).collect();
    order_s.sort_by_key(|&i| (key(s, i), i));
    order_t.sort_by_key(|&i| (key(t, i), i));
    let mut table = vec![0; s.apex_size()];
    for (&i, &j) in order_s.iter().zip(&order_t) {
        if key(s, i) != key(t, j) {
            return None;
        }
        table[i] = j;
    }
    SpanCell::new(
        s.clone(),
        t.clone(),
        FinSetMap::raw(s.apex_size(), t.apex_size(), table),
    )
    .ok()
}

pub fn spans_isomorphic(s: &Span, t: &Span) -> bool {
    find_span_iso(s, t).is_some()
}

/// An adjunction `s ⊣ r` in the bicategory of spans.
#[derive(Clone, Debug)]
pub struct MapWitness {
    pub right_adjoint: Span,
    /// `1_X ⇒ r ∘ s`.
    pub unit: SpanCell,
    /// `s ∘ r ⇒ 1_Y`.
    pub counit: SpanCell,
}

/// Returns an adjunction witness when `s` is a left adjoint, which happens
/// exactly when its left leg is a bijection.
pub fn is_map(s: &Span) -> Option<MapWitness> {
    let inv = s.left.inverse()?;
    let r = Span {
        left: s.right.clone(),
        right: s.left.clone(),
    };
    let (rs, pb_rs) = compose_spans_with_pullback(&r, s).ok()?;
    let unit_table = (0..s.left_foot())
        .map(|x| {
            let a = inv.apply(x);
            pb_rs.index_of(a, a).unwrap()
        })
        .collect();
    let unit = SpanCell::new(
        Span::identity(s.left_foot()),
        rs,
        FinSetMap::raw(s.left_foot(), pb_rs.len(), unit_table),
    )
    .ok()?;
    let (sr, pb_sr) = compose_spans_with_pullback(s, &r).ok()?;
    let counit_table = pb_sr
        .pairs()
        .iter()
        .map(|&(a, _)| s.right.apply(a))
        .collect();
    let counit = SpanCell::new(
        sr,
        Span::identity(s.right_foot()),
        FinSetMap::raw(pb_sr.len(), s.right_foot(), counit_table),
    )
    .ok()?;
    Some(MapWitness {
        right_adjoint: r,
        unit,
        counit,
    })
}

/// The two triangle composites of a candidate adjunction `s ⊣ r`:
/// `s ⇒ s∘1 ⇒ s∘(r∘s) ⇒ (s∘r)∘s ⇒ 1∘s ⇒ s` and
/// `r ⇒ 1∘r ⇒ (r∘s)∘r ⇒ r∘(s∘r) ⇒ r∘1 ⇒ r`.
pub fn triangle_composites(s: &Span, w: &MapWitness) -> Result<(SpanCell, SpanCell)> {
    let r = &w.right_adjoint;
    let first = left_unitor(s)?
        .vcompose(&whisker_right(&w.counit, s)?)?
        .vcompose(&associator(s, r, s)?.inverse().unwrap())?
        .vcompose(&whisker_left(s, &w.unit)?)?
        .vcompose(&right_unitor(s)?.inverse().unwrap())?;
    let second = right_unitor(r)?
        .vcompose(&whisker_left(r, &w.counit)?)?
        .vcompose(&associator(r, s, r)?)?
        .vcompose(&whisker_right(&w.unit, r)?)?
        .vcompose(&left_unitor(r)?.inverse().unwrap())?;
    Ok((first, second))
}

/// Whether both triangle identities hold on the nose.
pub fn satisfies_triangle_identities(s: &Span, w: &MapWitness) -> bool {
    match triangle_composites(s, w) {
        Ok((a, b)) => a.is_identity() && b.is_identity(),
        Err(_) => false,
    }
}

/// Right lifting `rif(m, u)` of a span `u: K -> X` through `m: S -> X`.
///
/// Apex elements are triples `(k, s, σ)` with `σ` assigning to each `e` over
/// `s` a `u`-element over `k` and over the image of `e` in `X`; they are
/// ordered by `k`, then `s`, then `σ` lexicographically over the sorted fibre.
#[derive(Clone, Debug)]
pub struct RightLift {
    pub span: Span,
    /// `m ∘ rif(m, u) ⇒ u`, evaluating each section.
    pub counit: SpanCell,
    pub elements: Vec<(usize, usize, Vec<usize>)>,
    m_fibers: Vec<Vec<usize>>,
}

impl RightLift {
    pub fn index_of(&self, k: usize, s: usize, sigma: &[usize]) -> Option<usize> {
        self.elements
            .binary_search_by(|(k2, s2, sg)| (*k2, *s2, sg.as_slice()).cmp(&(k, s, sigma)))
            .ok()
    }

    pub fn fiber(&self, s: usize) -> &[usize] {
        &self.m_fibers[s]
    }

    /// The cell `v ⇒ rif(m, u)` corresponding to `α: m ∘ v ⇒ u`.
    pub fn transpose(&self, m: &Span, v: &Span, alpha: &SpanCell) -> Result<SpanCell> {
        let (mv, pb) = compose_spans_with_pullback(m, v)?;
        if mv != alpha.source {
            return Err(Error::mismatch("transpose", "cell does not start at m ∘ v"));
        }
        let table = (0..v.apex_size())
            .map(|w| {
                let s = v.right.apply(w);
                let sigma: Vec<usize> = self.m_fibers[s]
                    .iter()
                    .map(|&e| alpha.h.apply(pb.index_of(w, e).unwrap()))
                    .collect();
                self.index_of(v.left.apply(w), s, &sigma).ok_or_else(|| {
                    Error::mismatch("transpose", "cell does not land in the right lifting")
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SpanCell::new(
            v.clone(),
            self.span.clone(),
            FinSetMap::raw(v.apex_size(), self.span.apex_size(), table),
        )
    }

    /// The pasted cell `m ∘ v ⇒ m ∘ rif ⇒ u` of a cell `β: v ⇒ rif(m, u)`.
    pub fn paste(&self, m: &Span, beta: &SpanCell) -> Result<SpanCell> {
        self.counit.vcompose(&whisker_left(m, beta)?)
    }
}

/// `rif(m, u)` for `m: S -> X` and `u: K -> X`.
pub fn rif_span(m: &Span, u: &Span) -> Result<RightLift> {
    if m.right_foot() != u.right_foot() {
        return Err(Error::mismatch(
            "rif_span",
            format!(
                "lifter lands in a set of size {}, target in {}",
                m.right_foot(),
                u.right_foot()
            ),
        ));
    }
    let (k_size, s_size) = (u.left_foot(), m.left_foot());
    let m_fibers = m.left.fibers();
    // u-elements indexed by (k, x)
    let mut over = vec![Vec::new(); k_size * u.right_foot()];
    for i in 0..u.apex_size() {
        over[u.left.apply(i) * u.right_foot() + u.right.apply(i)].push(i);
    }
    let mut total: u128 = 0;
    for k in 0..k_size {
        for fib in &m_fibers {
            let choices: Vec<Vec<usize>> = fib
                .iter()
                .map(|&e| over[k * u.right_foot() + m.right.apply(e)].clone())
                .collect();
            total = total.saturating_add(LexProduct::count(&choices));
        }
    }
    check_enumeration("rif_span", total)?;
    let mut elements = Vec::new();
    for k in 0..k_size {
        for (s, fib) in m_fibers.iter().enumerate() {
            let choices: Vec<Vec<usize>> = fib
                .iter()
                .map(|&e| over[k * u.right_foot() + m.right.apply(e)].clone())
                .collect();
            for sigma in LexProduct::new(choices) {
                elements.push((k, s, sigma));
            }
        }
    }
    let n = elements.len();
    let span = Span {
        left: FinSetMap::raw(n, k_size, elements.iter().map(|e| e.0).collect()),
        right: FinSetMap::raw(n, s_size, elements.iter().map(|e| e.1).collect()),
    };
    let (mr, pb) = compose_spans_with_pullback(m, &span)?;
    let counit_table = pb
        .pairs()
        .iter()
        .map(|&(i, e)| {
            let (_, s, sigma) = &elements[i];
            sigma[m_fibers[*s].binary_search(&e).unwrap()]
        })
        .collect();
    let counit = SpanCell::new(
        mr,
        u.clone(),
        FinSetMap::raw(pb.len(), u.apex_size(), counit_table),
    )?;
    Ok(RightLift {
        span,
        counit,
        elements,
        m_fibers,
    })
}

/// Size of `rif(m, u)` computed as a dependent product: sections of the
/// family `pullback(u, 1_K × m_right)` along `1_K × m_left`.
pub fn rif_span_size_via_pi(m: &Span, u: &Span) -> Result<usize> {
    let (k, x) = (u.left_foot(), u.right_foot());
    let (e, s) = (m.apex_size(), m.left_foot());
    // 1_K × m_right : K × E -> K × X and 1_K × m_left : K × E -> K × S
    let km1 = FinSetMap::new(
        k * e,
        k * x,
        (0..k * e)
            .map(|i| (i / e) * x + m.right.apply(i % e))
            .collect(),
    )?;
    let km2 = FinSetMap::new(
        k * e,
        k * s,
        (0..k * e)
            .map(|i| (i / e) * s + m.left.apply(i % e))
            .collect(),
    )?;
    let u_pair = FinSetMap::new(
        u.apex_size(),
        k * x,
        (0..u.apex_size())
            .map(|i| u.left.apply(i) * x + u.right.apply(i))
            .collect(),
    )?;
    let family = pullback(&u_pair, &km1)?;
    let pi = pi_f(&km2, &family.pr2)?;
    Ok(pi.total.size())
}

/// A pullback around a composable pair `Z -g-> A -f-> B`:
/// `X -p-> Z`, `X -q-> Y`, `Y -r-> B` with `(q, X, g∘p)` a pullback of
/// `(r, B, f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PBAround {
    pub f: FinSetMap,
    pub g: FinSetMap,
    pub p: FinSetMap,
    pub q: FinSetMap,
    pub r: FinSetMap,
}

impl PBAround {
    pub fn new(
        f: FinSetMap,
        g: FinSetMap,
        p: FinSetMap,
        q: FinSetMap,
        r: FinSetMap,
    ) -> Result<Self> {
        let around = Self::unchecked(f, g, p, q, r)?;
        let fgp = around.f.compose(&around.g)?.compose(&around.p)?;
        if fgp != around.r.compose(&around.q)? {
            return Err(Error::invariant(
                "PBAround",
                "commutes",
                "f∘g∘p differs from r∘q",
            ));
        }
        if around.comparison().map_or(true, |c| !c.is_bijective()) {
            return Err(Error::invariant(
                "PBAround",
                "is_pullback",
                "(q, X, g∘p) is not a pullback of (r, B, f)",
            ));
        }
        Ok(around)
    }

    /// Build without checking commutativity or the pullback condition;
    /// only the typing of the five maps is checked.
    pub fn unchecked(
        f: FinSetMap,
        g: FinSetMap,
        p: FinSetMap,
        q: FinSetMap,
        r: FinSetMap,
    ) -> Result<Self> {
        let typed = g.cod_size() == f.dom_size()
            && p.cod_size() == g.dom_size()
            && q.dom_size() == p.dom_size()
            && r.dom_size() == q.cod_size()
            && r.cod_size() == f.cod_size();
        if !typed {
            return Err(Error::invariant(
                "PBAround",
                "typing",
                "maps do not form the required diagram",
            ));
        }
        Ok(PBAround { f, g, p, q, r })
    }

    /// `X -> pullback(r, f)`, `x ↦ (q x, g p x)`.
    fn comparison(&self) -> Option<FinSetMap> {
        let pb = pullback(&self.r, &self.f).ok()?;
        pb.mediate(&self.q, &self.g.compose(&self.p).ok()?)
    }
}

/// The distributivity pullback around `(f, g)`: `Y = Π_f(g)`, `r` its
/// projection, `X` the pullback of `r` and `f` (pairs `(y, a)`), `q` the first
/// projection and `p` evaluation.
pub fn distributivity_pullback(f: &FinSetMap, g: &FinSetMap) -> Result<PBAround> {
    let pi = pi_f(f, g)?;
    PBAround::new(
        f.clone(),
        g.clone(),
        pi.eval.clone(),
        pi.counit_domain.pr1.clone(),
        pi.proj.clone(),
    )
}

/// Candidate values of a mediator `t: Y′ -> Y` at each `y′`.
fn mediator_candidates(target: &PBAround, other: &PBAround) -> Result<Vec<Vec<usize>>> {
    if target.f != other.f || target.g != other.g {
        return Err(Error::mismatch(
            "mediate_pb_around",
            "pullbacks are around different pairs",
        ));
    }
    let pb = pullback(&target.r, &target.f)?;
    let cmp = target
        .comparison()
        .and_then(|c| c.inverse())
        .ok_or_else(|| {
            Error::invariant("PBAround", "is_pullback", "target is not a pullback around")
        })?;
    let gp_other = other.g.compose(&other.p)?;
    let mut by_y: Vec<Vec<usize>> = vec![Vec::new(); other.q.cod_size()];
    for x in 0..other.q.dom_size() {
        by_y[other.q.apply(x)].push(x);
    }
    let candidates = (0..other.r.dom_size())
        .map(|y1| {
            (0..target.r.dom_size())
                .filter(|&y| target.r.apply(y) == other.r.apply(y1))
                .filter(|&y| {
                    by_y[y1].iter().all(|&x1| {
                        // the induced s(x′) is the X-element over (t q′ x′, g p′ x′)
                        match pb.index_of(y, gp_other.apply(x1)) {
                            Some(i) => target.p.apply(cmp.apply(i)) == other.p.apply(x1),
                            None => false,
                        }
                    })
                })
                .collect()
        })
        .collect();
    Ok(candidates)
}

/// Number of morphisms `other -> target` in the category of pullbacks around.
pub fn count_pb_around_morphisms(target: &PBAround, other: &PBAround) -> Result<u128> {
    Ok(LexProduct::count(&mediator_candidates(target, other)?))
}

/// The unique `t: Y′ -> Y` with `r∘t = r′` whose induced `s` satisfies
/// `p∘s = p′`. Fails with [`Error::NoMediator`] or
/// [`Error::MultipleMediators`] when uniqueness breaks.
pub fn mediate_pb_around(target: &PBAround, other: &PBAround) -> Result<FinSetMap> {
    let cands = mediator_candidates(target, other)?;
    let count = LexProduct::count(&cands);
    match count {
        0 => Err(Error::NoMediator),
        1 => Ok(FinSetMap::raw(
            other.r.dom_size(),
            target.r.dom_size(),
            cands.iter().map(|c| c[0]).collect(),
        )),
        n => Err(Error::MultipleMediators { count: n }),
    }
}

/// The map `s: X′ -> X` induced by a mediator `t`.
pub fn induced_map(target: &PBAround, other: &PBAround, t: &FinSetMap) -> Result<FinSetMap> {
    let pb = pullback(&target.r, &target.f)?;
    let cmp = target
        .comparison()
        .and_then(|c| c.inverse())
        .ok_or_else(|| {
            Error::invariant("PBAround", "is_pullback", "target is not a pullback around")
        })?;
    let gp = other.g.compose(&other.p)?;
    let table = (0..other.q.dom_size())
        .map(|x| {
            pb.index_of(t.apply(other.q.apply(x)), gp.apply(x))
                .map(|i| cmp.apply(i))
                .ok_or_else(|| Error::mismatch("induced_map", "t does not satisfy r∘t = r′"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FinSetMap::raw(
        other.q.dom_size(),
        target.p.dom_size(),
        table,
    ))
}

/// A seeded random pullback around `(f, g)`: `Y′` of size at most 4 mapped by
/// `r′` into the points whose fibre of `Π_f(g)` is nonempty, `X′` the
/// pullback of `r′` and `f`, and `p′` a random choice in each `g`-fibre.
pub fn random_pb_around(f: &FinSetMap, g: &FinSetMap, seed: u64) -> Result<PBAround> {
    if g.cod_size() != f.dom_size() {
        return Err(Error::mismatch(
            "random_pb_around",
            "g does not land in the domain of f",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g_fibers = g.fibers();
    let f_fibers = f.fibers();
    let good: Vec<usize> = (0..f.cod_size())
        .filter(|&b| f_fibers[b].iter().all(|&a| !g_fibers[a].is_empty()))
        .collect();
    let y_size = if good.is_empty() {
        0
    } else {
        rng.gen_range(0..=4)
    };
    let r = FinSetMap::raw(
        y_size,
        f.cod_size(),
        (0..y_size)
            .map(|_| good[rng.gen_range(0..good.len())])
            .collect(),
    );
    let pb = pullback(&r, f)?;
    let p = FinSetMap::raw(
        pb.len(),
        g.dom_size(),
        pb.pairs()
            .iter()
            .map(|&(_, a)| {
                let fib = &g_fibers[a];
                fib[rng.gen_range(0..fib.len())]
            })
            .collect(),
    );
    PBAround::new(f.clone(), g.clone(), p, pb.pr1.clone(), r)
}

/// How a bipullback square was produced; the factorisation uses the
/// corresponding universal property.
#[derive(Clone, Debug)]
pub enum BipullbackKind {
    /// Graphs of a pullback square `P -> A, P -> B` over `A -f-> C <-g- B`.
    Pullback {
        f: FinSetMap,
        g: FinSetMap,
        pb: Pullback,
    },
    /// The square `f^* ∘ r_* ≅ g_* ∘ p_* q^*` of a distributivity pullback.
    Distributivity(PBAround),
    /// A square stacked on top of another whose `d` side it shares as its
    /// `p` side.
    Pasted {
        bottom: Box<BipullbackSquare>,
        top: Box<BipullbackSquare>,
    },
}

/// A square `θ: n ∘ d ⇒ p ∘ c` of spans with `p = g_*` for a map `g`.
#[derive(Clone, Debug)]
pub struct BipullbackSquare {
    pub d: Span,
    pub c: Span,
    pub n: Span,
    pub p: Span,
    pub theta: SpanCell,
    pub kind: BipullbackKind,
}

/// A lax square `ψ: n ∘ u ⇒ p ∘ v` over the same cospan.
#[derive(Clone, Debug)]
pub struct Cone {
    pub u: Span,
    pub v: Span,
    pub psi: SpanCell,
}

/// A factorisation `(λ, h, ρ)` of a cone through a bipullback:
/// `λ: c ∘ h ⇒ v`, `ρ: d ∘ h ⇒ u` invertible.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub h: Span,
    pub lambda: SpanCell,
    pub rho: SpanCell,
}

impl BipullbackSquare {
    /// The square of graphs over the pullback of `A -f-> C <-g- B`.
    pub fn from_pullback(f: &FinSetMap, g: &FinSetMap) -> Result<Self> {
        let pb = pullback(f, g)?;
        let d = Span::graph(&pb.pr1);
        let c = Span::graph(&pb.pr2);
        let n = Span::graph(f);
        let p = Span::graph(g);
        let nd = compose_spans(&n, &d)?;
        let pc = compose_spans(&p, &c)?;
        // both composites have apex pairs (i, image of i), aligned with P
        let theta = SpanCell::new(nd, pc, FinSetMap::identity(pb.len()))?;
        Ok(BipullbackSquare {
            d,
            c,
            n,
            p,
            theta,
            kind: BipullbackKind::Pullback {
                f: f.clone(),
                g: g.clone(),
                pb,
            },
        })
    }

    /// The square `f^* ∘ r_* ≅ g_* ∘ (p_* ∘ q^*)` of a pullback around `(f, g)`.
    pub fn from_distributivity(around: &PBAround) -> Result<Self> {
        let d = Span::graph(&around.r);
        let n = Span::cograph(&around.f);
        let c = compose_spans(&Span::graph(&around.p), &Span::cograph(&around.q))?;
        let p = Span::graph(&around.g);
        let (nd, pb_nd) = compose_spans_with_pullback(&n, &d)?;
        let pc = compose_spans(&p, &c)?;
        let cmp = around
            .comparison()
            .and_then(|m| m.inverse())
            .ok_or_else(|| {
                Error::invariant("PBAround", "is_pullback", "square is not a pullback around")
            })?;
        // apex of n∘d is pullback(r, f), the same pairs the comparison uses;
        // apex of p∘c is aligned with X
        let theta = SpanCell::new(
            nd,
            pc,
            FinSetMap::raw(pb_nd.len(), around.p.dom_size(), cmp.table().to_vec()),
        )?;
        Ok(BipullbackSquare {
            d,
            c,
            n,
            p,
            theta,
            kind: BipullbackKind::Distributivity(around.clone()),
        })
    }

    /// The square's own cone `(d, c, θ)`.
    pub fn own_cone(&self) -> Cone {
        Cone {
            u: self.d.clone(),
            v: self.c.clone(),
            psi: self.theta.clone(),
        }
    }

    /// Paste a factorisation onto the square:
    /// `n∘u ⇒ n∘(d∘h) ⇒ (n∘d)∘h ⇒ (p∘c)∘h ⇒ p∘(c∘h) ⇒ p∘v`.
    pub fn paste(&self, fac: &Factorization) -> Result<SpanCell> {
        let rho_inv = fac.rho.inverse().ok_or_else(|| {
            Error::invariant("Factorization", "rho_invertible", "ρ is not invertible")
        })?;
        whisker_left(&self.p, &fac.lambda)?
            .vcompose(&associator(&self.p, &self.c, &fac.h)?)?
            .vcompose(&whisker_right(&self.theta, &fac.h)?)?
            .vcompose(&associator(&self.n, &self.d, &fac.h)?.inverse().unwrap())?
            .vcompose(&whisker_left(&self.n, &rho_inv)?)
    }

    /// Factor a cone through the square.
    pub fn factor(&self, cone: &Cone) -> Result<Factorization> {
        if cone.psi.source != compose_spans(&self.n, &cone.u)? {
            return Err(Error::mismatch(
                "factor",
                "cone cell does not start at n ∘ u",
            ));
        }
        if let BipullbackKind::Pasted { bottom, top } = &self.kind {
            return Self::factor_pasted(bottom, top, cone);
        }
        let (nu_span, v) = (&cone.psi.source, &cone.v);
        // p∘v has apex aligned with v's apex, so ψ is a map into it
        let (pv, pb_pv) = compose_spans_with_pullback(&self.p, v)?;
        if pv != cone.psi.target {
            return Err(Error::mismatch("factor", "cone cell does not end at p ∘ v"));
        }
        let psi_to_v = FinSetMap::raw(
            nu_span.apex_size(),
            v.apex_size(),
            cone.psi
                .h
                .table()
                .iter()
                .map(|&i| pb_pv.pair(i).0)
                .collect(),
        );
        // lift: w = (left of n∘u, v.right ∘ ψ), χ: w ⇒ v, ν: n∘u ≅ p∘w
        let w = Span::new(nu_span.left.clone(), v.right.compose(&psi_to_v)?)?;
        let chi = SpanCell::new(w.clone(), v.clone(), psi_to_v)?;
        let (pw, pb_pw) = compose_spans_with_pullback(&self.p, &w)?;
        debug_assert!(pb_pw.pairs().iter().enumerate().all(|(i, &(a, _))| a == i));
        let nu = SpanCell::new(nu_span.clone(), pw, FinSetMap::identity(w.apex_size()))?;
        let (h, sigma, rho) = match &self.kind {
            BipullbackKind::Pullback { pb, .. } => self.factor_pullback(pb, &cone.u, &w, &nu)?,
            BipullbackKind::Distributivity(around) => {
                self.factor_distributivity(around, &cone.u, &w, &nu)?
            }
            BipullbackKind::Pasted { .. } => unreachable!(),
        };
        Ok(Factorization {
            h,
            lambda: chi.vcompose(&sigma)?,
            rho,
        })
    }

    /// Stack `top` on `bottom`: the result has `d = top.d`, `c = bottom.c ∘
    /// top.c`, `n = bottom.n ∘ top.n` and `p = bottom.p`.
    pub fn paste_vertically(bottom: BipullbackSquare, top: BipullbackSquare) -> Result<Self> {
        if top.p != bottom.d {
            return Err(Error::mismatch(
                "paste_vertically",
                "top square does not sit on the bottom square",
            ));
        }
        let n = compose_spans(&bottom.n, &top.n)?;
        let c = compose_spans(&bottom.c, &top.c)?;
        // (nb∘nt)∘dt ⇒ nb∘(nt∘dt) ⇒ nb∘(pt∘ct) ⇒ (nb∘db)∘ct ⇒ (pb∘cb)∘ct ⇒ pb∘(cb∘ct)
        let theta = associator(&bottom.p, &bottom.c, &top.c)?
            .vcompose(&whisker_right(&bottom.theta, &top.c)?)?
            .vcompose(&associator(&bottom.n, &top.p, &top.c)?.inverse().unwrap())?
            .vcompose(&whisker_left(&bottom.n, &top.theta)?)?
            .vcompose(&associator(&bottom.n, &top.n, &top.d)?)?;
        Ok(BipullbackSquare {
            d: top.d.clone(),
            c,
            n,
            p: bottom.p.clone(),
            theta,
            kind: BipullbackKind::Pasted {
                bottom: Box::new(bottom),
                top: Box::new(top),
            },
        })
    }

    /// Factor through the bottom square, then factor the resulting invertible
    /// cell through the top square.
    fn factor_pasted(
        bottom: &BipullbackSquare,
        top: &BipullbackSquare,
        cone: &Cone,
    ) -> Result<Factorization> {
        let u_bottom = compose_spans(&top.n, &cone.u)?;
        let psi_bottom = cone
            .psi
            .vcompose(&associator(&bottom.n, &top.n, &cone.u)?.inverse().unwrap())?;
        let lower = bottom.factor(&Cone {
            u: u_bottom,
            v: cone.v.clone(),
            psi: psi_bottom,
        })?;
        let psi_top = lower.rho.inverse().ok_or_else(|| {
            Error::invariant("Factorization", "rho_invertible", "ρ is not invertible")
        })?;
        let upper = top.factor(&Cone {
            u: cone.u.clone(),
            v: lower.h.clone(),
            psi: psi_top,
        })?;
        // (cb∘ct)∘h ⇒ cb∘(ct∘h) ⇒ cb∘h1 ⇒ v
        let lambda = lower
            .lambda
            .vcompose(&whisker_left(&bottom.c, &upper.lambda)?)?
            .vcompose(&associator(&bottom.c, &top.c, &upper.h)?)?;
        Ok(Factorization {
            h: upper.h,
            lambda,
            rho: upper.rho,
        })
    }

    /// Factor an invertible `ν: f_* ∘ u ≅ g_* ∘ w` through the pullback.
    fn factor_pullback(
        &self,
        pb: &Pullback,
        u: &Span,
        w: &Span,
        nu: &SpanCell,
    ) -> Result<(Span, SpanCell, SpanCell)> {
        // f_*∘u has apex aligned with u, g_*∘w with w
        let t = (0..u.apex_size())
            .map(|x| {
                pb.index_of(u.right.apply(x), w.right.apply(nu.h.apply(x)))
                    .ok_or_else(|| Error::mismatch("factor", "cone does not commute"))
            })
            .collect::<Result<Vec<_>>>()?;
        let h = Span::new(u.left.clone(), FinSetMap::raw(u.apex_size(), pb.len(), t))?;
        let (dh, _) = compose_spans_with_pullback(&self.d, &h)?;
        let rho = SpanCell::new(dh, u.clone(), FinSetMap::identity(u.apex_size()))?;
        let (ch, _) = compose_spans_with_pullback(&self.c, &h)?;
        let sigma = SpanCell::new(ch, w.clone(), nu.h.clone())?;
        Ok((h, sigma, rho))
    }

    /// Factor an invertible `ν: f^* ∘ u ≅ g_* ∘ w` through the distributivity
    /// square, using terminality of the pullback around.
    fn factor_distributivity(
        &self,
        around: &PBAround,
        u: &Span,
        w: &Span,
        nu: &SpanCell,
    ) -> Result<(Span, SpanCell, SpanCell)> {
        let (_, pb_nu) = compose_spans_with_pullback(&self.n, u)?;
        // the cone as a pullback around: Y′ = apex(u), r′ = u.right, X′ = pairs (τ, a)
        let other = PBAround::new(
            around.f.clone(),
            around.g.clone(),
            w.right.compose(&nu.h)?,
            pb_nu.pr1.clone(),
            u.right.clone(),
        )?;
        let k = mediate_pb_around(around, &other)?;
        let s = induced_map(around, &other, &k)?;
        let h = Span::new(u.left.clone(), k.clone())?;
        let (dh, _) = compose_spans_with_pullback(&self.d, &h)?;
        let rho = SpanCell::new(dh, u.clone(), FinSetMap::identity(u.apex_size()))?;
        // c∘h has apex pairs (τ, i) with i indexing c's apex (aligned with X)
        let (ch, pb_ch) = compose_spans_with_pullback(&self.c, &h)?;
        let mut back = vec![usize::MAX; pb_ch.len()];
        for x1 in 0..other.q.dom_size() {
            let i = pb_ch
                .index_of(other.q.apply(x1), s.apply(x1))
                .ok_or_else(|| Error::mismatch("factor", "induced square does not commute"))?;
            back[i] = nu.h.apply(x1);
        }
        if back.iter().any(|&b| b == usize::MAX) {
            return Err(Error::mismatch(
                "factor",
                "induced square is not a pullback",
            ));
        }
        let sigma = SpanCell::new(
            ch,
            w.clone(),
            FinSetMap::raw(pb_ch.len(), w.apex_size(), back),
        )?;
        Ok((h, sigma, rho))
    }

    /// Invertible cells `σ: h ⇒ h′` with `λ′ · (c∘σ) = λ` and `ρ′ · (d∘σ) = ρ`.
    pub fn connecting_cells(&self, a: &Factorization, b: &Factorization) -> Result<Vec<SpanCell>> {
        let mut out = Vec::new();
        for sigma in SpanCell::enumerate(&a.h, &b.h)? {
            if !sigma.is_invertible() {
                continue;
            }
            let lam = b.lambda.vcompose(&whisker_left(&self.c, &sigma)?)?;
            let rho = b.rho.vcompose(&whisker_left(&self.d, &sigma)?)?;
            if lam == a.lambda && rho == a.rho {
                out.push(sigma);
            }
        }
        Ok(out)
    }
}
