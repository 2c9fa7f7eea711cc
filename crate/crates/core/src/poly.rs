//! Polynomials `X ← E → S → Y` of finite sets, read as polynomials in the
//! bicategory of spans: the lifter leg is the span `S ← E → X` and the neat
//! leg is the graph of `p`.
//!
//! Composition goes through a pullback and a distributivity pullback, and the
//! pasted bipullback square is kept so that morphisms of polynomials can be
//! composed horizontally through its universal property.

use crate::algebra::{find_isomorphism, UnaryAlgebra};
use crate::error::{Error, Result};
use crate::finset::{check_enumeration, pullback, FinSetMap, LexProduct, Pullback};
use crate::span::{
    associator, compose_spans, distributivity_pullback, rif_span, whisker_left, whisker_right,
    BipullbackSquare, Cone, PBAround, Span, SpanCell,
};

/// A polynomial `X <-m1- E -m2-> S -p-> Y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    m1: FinSetMap,
    m2: FinSetMap,
    p: FinSetMap,
}

impl Polynomial {
    pub fn new(m1: FinSetMap, m2: FinSetMap, p: FinSetMap) -> Result<Self> {
        if m1.dom_size() != m2.dom_size() {
            return Err(Error::invariant(
                "Polynomial",
                "shared_exponents",
                format!(
                    "m1 has domain {}, m2 has domain {}",
                    m1.dom_size(),
                    m2.dom_size()
                ),
            ));
        }
        if m2.cod_size() != p.dom_size() {
            return Err(Error::invariant(
                "Polynomial",
                "chain",
                format!(
                    "m2 lands in a set of size {}, p starts at {}",
                    m2.cod_size(),
                    p.dom_size()
                ),
            ));
        }
        Ok(Polynomial { m1, m2, p })
    }

    /// The monomial sum `Σ_s A^{exponents[s]}` with `X = Y = 1`.
    pub fn from_exponents(exponents: &[usize]) -> Self {
        let m2: Vec<usize> = exponents
            .iter()
            .enumerate()
            .flat_map(|(s, &n)| std::iter::repeat(s).take(n))
            .collect();
        let e = m2.len();
        Polynomial {
            m1: FinSetMap::to_terminal(e),
            m2: FinSetMap::raw(e, exponents.len(), m2),
            p: FinSetMap::to_terminal(exponents.len()),
        }
    }

    pub fn identity(x: usize) -> Self {
        let id = FinSetMap::identity(x);
        Polynomial {
            m1: id.clone(),
            m2: id.clone(),
            p: id,
        }
    }

    pub fn m1(&self) -> &FinSetMap {
        &self.m1
    }

    pub fn m2(&self) -> &FinSetMap {
        &self.m2
    }

    pub fn p(&self) -> &FinSetMap {
        &self.p
    }

    pub fn x_size(&self) -> usize {
        self.m1.cod_size()
    }

    pub fn e_size(&self) -> usize {
        self.m1.dom_size()
    }

    pub fn s_size(&self) -> usize {
        self.p.dom_size()
    }

    pub fn y_size(&self) -> usize {
        self.p.cod_size()
    }

    /// The span `S <-m2- E -m1-> X`.
    pub fn lifter(&self) -> Span {
        Span::new(self.m2.clone(), self.m1.clone()).unwrap()
    }

    /// The span `p_* : S -> Y`.
    pub fn neat(&self) -> Span {
        Span::graph(&self.p)
    }
}

pub fn identity_poly(x: usize) -> Polynomial {
    Polynomial::identity(x)
}

/// A family of sets indexed by `base`, given by its projection.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexedFamily {
    proj: FinSetMap,
}

impl IndexedFamily {
    pub fn new(proj: FinSetMap) -> Self {
        IndexedFamily { proj }
    }

    /// Family whose total set lists the fibres one after another.
    pub fn from_fiber_sizes(sizes: &[usize]) -> Self {
        let table: Vec<usize> = sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &n)| std::iter::repeat(b).take(n))
            .collect();
        IndexedFamily {
            proj: FinSetMap::raw(table.len(), sizes.len(), table),
        }
    }

    pub fn proj(&self) -> &FinSetMap {
        &self.proj
    }

    pub fn base_size(&self) -> usize {
        self.proj.cod_size()
    }

    pub fn total_size(&self) -> usize {
        self.proj.dom_size()
    }

    pub fn fiber(&self, b: usize) -> Vec<usize> {
        self.proj.fiber(b)
    }

    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.base_size()];
        for &b in self.proj.table() {
            out[b] += 1;
        }
        out
    }

    /// The family as a span `1 <- total -> base`.
    pub fn as_span(&self) -> Span {
        Span::new(FinSetMap::to_terminal(self.total_size()), self.proj.clone()).unwrap()
    }
}

/// A map of families over a common base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMap {
    source: IndexedFamily,
    target: IndexedFamily,
    map: FinSetMap,
}

impl FamilyMap {
    pub fn new(source: IndexedFamily, target: IndexedFamily, map: FinSetMap) -> Result<Self> {
        if source.base_size() != target.base_size() {
            return Err(Error::mismatch(
                "family_map",
                "families live over different bases",
            ));
        }
        if map.dom_size() != source.total_size() || map.cod_size() != target.total_size() {
            return Err(Error::invariant(
                "FamilyMap",
                "typing",
                "map does not go between the totals",
            ));
        }
        if target.proj.compose(&map)? != source.proj {
            return Err(Error::invariant(
                "FamilyMap",
                "over_base",
                "map does not commute with the projections",
            ));
        }
        Ok(FamilyMap {
            source,
            target,
            map,
        })
    }

    pub fn identity(a: &IndexedFamily) -> Self {
        FamilyMap {
            source: a.clone(),
            target: a.clone(),
            map: FinSetMap::identity(a.total_size()),
        }
    }

    pub fn source(&self) -> &IndexedFamily {
        &self.source
    }

    pub fn target(&self) -> &IndexedFamily {
        &self.target
    }

    pub fn map(&self) -> &FinSetMap {
        &self.map
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &FamilyMap) -> Result<FamilyMap> {
        if first.target != self.source {
            return Err(Error::mismatch(
                "compose_family_maps",
                "maps are not composable",
            ));
        }
        Ok(FamilyMap {
            source: first.source.clone(),
            target: self.target.clone(),
            map: self.map.compose(&first.map)?,
        })
    }
}

/// The value of a polynomial's extension at a family.
///
/// Elements are pairs `(s, σ)` with `σ` choosing, for each `e` in the sorted
/// fibre `m2⁻¹(s)`, an element of the family over `m1(e)`; they are ordered by
/// `s` and then `σ` lexicographically.
#[derive(Clone, Debug)]
pub struct Extension {
    pub family: IndexedFamily,
    elements: Vec<(usize, Vec<usize>)>,
}

impl Extension {
    pub fn elements(&self) -> &[(usize, Vec<usize>)] {
        &self.elements
    }

    pub fn index_of(&self, s: usize, sigma: &[usize]) -> Option<usize> {
        self.elements
            .binary_search_by(|(s2, sg)| (*s2, sg.as_slice()).cmp(&(s, sigma)))
            .ok()
    }
}

fn section_choices(poly: &Polynomial, a: &IndexedFamily) -> Vec<Vec<Vec<usize>>> {
    let a_fibers = a.proj.fibers();
    poly.m2
        .fibers()
        .iter()
        .map(|fib| {
            fib.iter()
                .map(|&e| a_fibers[poly.m1.apply(e)].clone())
                .collect()
        })
        .collect()
}

/// `Σ_{s ∈ p⁻¹(y)} Π_{e ∈ m2⁻¹(s)} A_{m1(e)}` as a family over `Y`.
pub fn extension_eval(poly: &Polynomial, a: &IndexedFamily) -> Result<Extension> {
    if a.base_size() != poly.x_size() {
        return Err(Error::mismatch(
            "extension_eval",
            format!(
                "family over {} elements, polynomial expects {}",
                a.base_size(),
                poly.x_size()
            ),
        ));
    }
    let choices = section_choices(poly, a);
    let total = choices
        .iter()
        .fold(0u128, |acc, c| acc.saturating_add(LexProduct::count(c)));
    check_enumeration("extension_eval", total)?;
    let mut elements = Vec::new();
    for (s, c) in choices.into_iter().enumerate() {
        for sigma in LexProduct::new(c) {
            elements.push((s, sigma));
        }
    }
    let proj = elements.iter().map(|(s, _)| poly.p.apply(*s)).collect();
    Ok(Extension {
        family: IndexedFamily::new(FinSetMap::raw(elements.len(), poly.y_size(), proj)),
        elements,
    })
}

/// Fibre cardinalities of the extension at a family with the given fibre
/// cardinalities, without enumerating.
pub fn extension_fiber_sizes(poly: &Polynomial, sizes: &[u128]) -> Result<Vec<u128>> {
    if sizes.len() != poly.x_size() {
        return Err(Error::mismatch(
            "extension_fiber_sizes",
            "family has the wrong base",
        ));
    }
    let mut out = vec![0u128; poly.y_size()];
    for (s, fib) in poly.m2.fibers().iter().enumerate() {
        let prod = fib
            .iter()
            .fold(1u128, |acc, &e| acc.saturating_mul(sizes[poly.m1.apply(e)]));
        let y = poly.p.apply(s);
        out[y] = out[y].saturating_add(prod);
    }
    Ok(out)
}

/// The extension applied to a family map: `(s, σ) ↦ (s, φ ∘ σ)`.
pub fn extension_on_map(poly: &Polynomial, phi: &FamilyMap) -> Result<FamilyMap> {
    let src = extension_eval(poly, &phi.source)?;
    let tgt = extension_eval(poly, &phi.target)?;
    let table = src
        .elements
        .iter()
        .map(|(s, sigma)| {
            let moved: Vec<usize> = sigma.iter().map(|&a| phi.map.apply(a)).collect();
            tgt.index_of(*s, &moved).unwrap()
        })
        .collect();
    FamilyMap::new(
        src.family.clone(),
        tgt.family.clone(),
        FinSetMap::raw(src.elements.len(), tgt.elements.len(), table),
    )
}

/// `ℍ_K(P)(u) = p_* ∘ rif(m, u)` for a span `u: K -> X`.
pub fn hk_span(poly: &Polynomial, u: &Span) -> Result<Span> {
    compose_spans(&poly.neat(), &rif_span(&poly.lifter(), u)?.span)
}

/// The composite `Q ∘ P` with the data of its construction.
///
/// With `Q = (Y ← F → T → Z)`: `base` is the pullback of `Q.m1` and `P.p`
/// (pairs `(f, s)`), `around` the distributivity pullback around
/// `(Q.m2, base.pr1)` with `W = Π` (the new `S`) and `V` pairs `(w, f)`, and
/// `exponents` pairs `(v, e)` with `e` over the `S`-value of `v`.
#[derive(Clone, Debug)]
pub struct PolyComposite {
    pub poly: Polynomial,
    pub outer: Polynomial,
    pub inner: Polynomial,
    pub base: Pullback,
    pub around: PBAround,
    pub around_pairs: Pullback,
    pub exponents: Pullback,
    /// `Q.lifter ∘ r_* ≅ P.neat ∘ ñ` with `ñ = (W <-q- V -> S)`.
    pub square: BipullbackSquare,
}

impl PolyComposite {
    /// The span `ñ: W -> S`.
    pub fn n_tilde(&self) -> &Span {
        &self.square.c
    }

    /// Values `s_f` of the section `w` on the sorted fibre of `Q.m2` over `r(w)`.
    pub fn section(&self, w: usize) -> Vec<(usize, usize)> {
        let t = self.around.r.apply(w);
        self.outer
            .m2
            .fiber(t)
            .into_iter()
            .map(|f| {
                let v = self.around_pairs.index_of(w, f).unwrap();
                (f, self.base.pr2.apply(self.around.p.apply(v)))
            })
            .collect()
    }

    /// The bijection `ext(Q∘P)(A) -> ext(Q)(ext(P)(A))`,
    /// `(w, σ) ↦ (r(w), f ↦ (s_f, e ↦ σ((w, f), e)))`.
    pub fn natural_iso(&self, a: &IndexedFamily) -> Result<FamilyMap> {
        let composite = extension_eval(&self.poly, a)?;
        let inner = extension_eval(&self.inner, a)?;
        let iterated = extension_eval(&self.outer, &inner.family)?;
        let table = composite
            .elements
            .iter()
            .map(|(w, sigma)| {
                // the fibre of w in E lists (v, e) by f and then e
                let mut rest = sigma.as_slice();
                let tau: Vec<usize> = self
                    .section(*w)
                    .into_iter()
                    .map(|(_, s)| {
                        let n = self.inner.m2.fiber(s).len();
                        let (chunk, tail) = rest.split_at(n);
                        rest = tail;
                        inner.index_of(s, chunk).unwrap()
                    })
                    .collect();
                iterated.index_of(self.around.r.apply(*w), &tau).unwrap()
            })
            .collect();
        let map = FinSetMap::raw(composite.elements.len(), iterated.elements.len(), table);
        if !map.is_bijective() {
            return Err(Error::invariant(
                "PolyComposite",
                "natural_iso",
                "comparison map is not a bijection",
            ));
        }
        FamilyMap::new(composite.family, iterated.family, map)
    }
}

/// `Q ∘ P` together with its construction.
pub fn compose_poly_witnessed(q: &Polynomial, p: &Polynomial) -> Result<PolyComposite> {
    if p.y_size() != q.x_size() {
        return Err(Error::mismatch(
            "compose_poly",
            format!(
                "inner polynomial lands in {} elements, outer starts at {}",
                p.y_size(),
                q.x_size()
            ),
        ));
    }
    let bottom = BipullbackSquare::from_pullback(&q.m1, &p.p)?;
    let base = pullback(&q.m1, &p.p)?;
    let around = distributivity_pullback(&q.m2, &base.pr1)?;
    let around_pairs = pullback(&around.r, &around.f)?;
    let top = BipullbackSquare::from_distributivity(&around)?;
    let square = BipullbackSquare::paste_vertically(bottom, top)?;
    let to_s = base.pr2.compose(&around.p)?;
    let exponents = pullback(&to_s, &p.m2)?;
    check_enumeration("compose_poly", exponents.len() as u128)?;
    let poly = Polynomial::new(
        p.m1.compose(&exponents.pr2)?,
        around.q.compose(&exponents.pr1)?,
        q.p.compose(&around.r)?,
    )?;
    Ok(PolyComposite {
        poly,
        outer: q.clone(),
        inner: p.clone(),
        base,
        around,
        around_pairs,
        exponents,
        square,
    })
}

/// `Q ∘ P` for `P: X -> Y` and `Q: Y -> Z`.
pub fn compose_poly(q: &Polynomial, p: &Polynomial) -> Result<Polynomial> {
    Ok(compose_poly_witnessed(q, p)?.poly)
}

/// An isomorphism of polynomials: bijections of `E` and `S` commuting with
/// the three maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyIso {
    pub e: FinSetMap,
    pub s: FinSetMap,
}

pub fn find_poly_iso(a: &Polynomial, b: &Polynomial) -> Option<PolyIso> {
    if a.x_size() != b.x_size() || a.y_size() != b.y_size() {
        return None;
    }
    let algebra = |poly: &Polynomial| {
        let mut alg = UnaryAlgebra::new(vec![poly.e_size(), poly.s_size()]);
        alg.op(0, 1, poly.m2.table().to_vec());
        alg.colors[0] = poly.m1.table().iter().map(|&x| x as u64).collect();
        alg.colors[1] = poly.p.table().iter().map(|&y| y as u64).collect();
        alg
    };
    let phi = find_isomorphism(&algebra(a), &algebra(b))?;
    Some(PolyIso {
        e: FinSetMap::raw(a.e_size(), b.e_size(), phi[0].clone()),
        s: FinSetMap::raw(a.s_size(), b.s_size(), phi[1].clone()),
    })
}

pub fn polys_isomorphic(a: &Polynomial, b: &Polynomial) -> bool {
    find_poly_iso(a, b).is_some()
}

/// A morphism of polynomials `P => P′` with the same ends: a span
/// `h: S -> S′`, a cell `λ: m′ ∘ h ⇒ m` between lifters and an invertible
/// cell `ρ: p′_* ∘ h ⇒ p_*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMorphism {
    source: Polynomial,
    target: Polynomial,
    h: Span,
    lambda: SpanCell,
    rho: SpanCell,
}

impl PolyMorphism {
    pub fn new(
        source: Polynomial,
        target: Polynomial,
        h: Span,
        lambda: SpanCell,
        rho: SpanCell,
    ) -> Result<Self> {
        if source.x_size() != target.x_size() || source.y_size() != target.y_size() {
            return Err(Error::mismatch(
                "poly_morphism",
                "polynomials have different ends",
            ));
        }
        if h.left_foot() != source.s_size() || h.right_foot() != target.s_size() {
            return Err(Error::invariant(
                "PolyMorphism",
                "h_typing",
                "h does not go from S to S′",
            ));
        }
        if !h.left().is_bijective() {
            return Err(Error::invariant(
                "PolyMorphism",
                "groupoid_fibration",
                "left leg of h is not a bijection",
            ));
        }
        if lambda.source() != &compose_spans(&target.lifter(), &h)?
            || lambda.target() != &source.lifter()
        {
            return Err(Error::invariant(
                "PolyMorphism",
                "lambda_typing",
                "λ is not a cell m′ ∘ h ⇒ m",
            ));
        }
        if rho.source() != &compose_spans(&target.neat(), &h)? || rho.target() != &source.neat() {
            return Err(Error::invariant(
                "PolyMorphism",
                "rho_typing",
                "ρ is not a cell p′ ∘ h ⇒ p",
            ));
        }
        if !rho.is_invertible() {
            return Err(Error::invariant(
                "PolyMorphism",
                "rho_invertible",
                "ρ is not invertible",
            ));
        }
        Ok(PolyMorphism {
            source,
            target,
            h,
            lambda,
            rho,
        })
    }

    /// The morphism with `h = φ_*` for `φ: S -> S′` over `Y`, and `λ` given on
    /// the pairs `(s, e′)` with `m2′(e′) = φ(s)`, in lexicographic order.
    pub fn from_map(
        source: Polynomial,
        target: Polynomial,
        phi: FinSetMap,
        lambda: Vec<usize>,
    ) -> Result<Self> {
        if phi.dom_size() != source.s_size() || phi.cod_size() != target.s_size() {
            return Err(Error::invariant(
                "PolyMorphism",
                "h_typing",
                "φ does not go from S to S′",
            ));
        }
        if source.y_size() != target.y_size() || target.p.compose(&phi)? != source.p {
            return Err(Error::invariant(
                "PolyMorphism",
                "over_base",
                "p′ ∘ φ differs from p",
            ));
        }
        let h = Span::graph(&phi);
        let mh = compose_spans(&target.lifter(), &h)?;
        if lambda.len() != mh.apex_size() || lambda.iter().any(|&e| e >= source.e_size()) {
            return Err(Error::invariant(
                "PolyMorphism",
                "lambda_typing",
                "λ must send each pair (s, e′) to an element of E",
            ));
        }
        let lambda = SpanCell::new(
            mh,
            source.lifter(),
            FinSetMap::raw(lambda.len(), source.e_size(), lambda),
        )?;
        let ph = compose_spans(&target.neat(), &h)?;
        let rho = SpanCell::new(ph, source.neat(), FinSetMap::identity(source.s_size()))?;
        PolyMorphism::new(source, target, h, lambda, rho)
    }

    pub fn identity(poly: &Polynomial) -> Self {
        let pb = pullback(&FinSetMap::identity(poly.s_size()), &poly.m2).unwrap();
        let lambda = pb.pairs().iter().map(|&(_, e)| e).collect();
        PolyMorphism::from_map(
            poly.clone(),
            poly.clone(),
            FinSetMap::identity(poly.s_size()),
            lambda,
        )
        .unwrap()
    }

    pub fn source(&self) -> &Polynomial {
        &self.source
    }

    pub fn target(&self) -> &Polynomial {
        &self.target
    }

    pub fn h(&self) -> &Span {
        &self.h
    }

    pub fn lambda(&self) -> &SpanCell {
        &self.lambda
    }

    pub fn rho(&self) -> &SpanCell {
        &self.rho
    }

    /// The map `φ = h.right ∘ h.left⁻¹: S -> S′`.
    pub fn phi(&self) -> FinSetMap {
        self.h
            .right()
            .compose(&self.h.left().inverse().unwrap())
            .unwrap()
    }

    pub fn is_strong(&self) -> bool {
        self.lambda.is_invertible()
    }

    /// The isomorphic morphism with `h = φ_*`.
    pub fn canonical(&self) -> PolyMorphism {
        let graph = Span::graph(&self.phi());
        let kappa = SpanCell::new(graph, self.h.clone(), self.h.left().inverse().unwrap()).unwrap();
        self.transport(&kappa).unwrap()
    }

    /// The isomorphic morphism with apex span `κ.source` for an invertible
    /// `κ: h′ ⇒ h`.
    pub fn transport(&self, kappa: &SpanCell) -> Result<PolyMorphism> {
        if kappa.target() != &self.h || !kappa.is_invertible() {
            return Err(Error::mismatch(
                "transport",
                "cell is not an invertible cell into h",
            ));
        }
        let lambda = self
            .lambda
            .vcompose(&whisker_left(&self.target.lifter(), kappa)?)?;
        let rho = self
            .rho
            .vcompose(&whisker_left(&self.target.neat(), kappa)?)?;
        Ok(PolyMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            h: kappa.source().clone(),
            lambda,
            rho,
        })
    }

    /// `λ` of the canonical form on the pairs `(s, e′)`.
    pub fn lambda_table(&self) -> Vec<usize> {
        self.canonical().lambda.map().table().to_vec()
    }
}

/// `g · f` for `f: P => P′` and `g: P′ => P″`.
pub fn vcompose_polymorph(g: &PolyMorphism, f: &PolyMorphism) -> Result<PolyMorphism> {
    if f.target != g.source {
        return Err(Error::mismatch(
            "vcompose_polymorph",
            "morphisms are not composable",
        ));
    }
    let h = compose_spans(&g.h, &f.h)?;
    let (m, p) = (g.target.lifter(), g.target.neat());
    // m″∘(hg∘hf) ⇒ (m″∘hg)∘hf ⇒ m′∘hf ⇒ m
    let lambda = f
        .lambda
        .vcompose(&whisker_right(&g.lambda, &f.h)?)?
        .vcompose(&associator(&m, &g.h, &f.h)?.inverse().unwrap())?;
    let rho = f
        .rho
        .vcompose(&whisker_right(&g.rho, &f.h)?)?
        .vcompose(&associator(&p, &g.h, &f.h)?.inverse().unwrap())?;
    PolyMorphism::new(f.source.clone(), g.target.clone(), h, lambda, rho)
}

pub fn identity_polymorph(poly: &Polynomial) -> PolyMorphism {
    PolyMorphism::identity(poly)
}

/// Whether there is an invertible `σ: h_f ⇒ h_g` carrying `λ_f, ρ_f` to
/// `λ_g, ρ_g`.
pub fn are_isomorphic_polymorph(f: &PolyMorphism, g: &PolyMorphism) -> Result<bool> {
    if f.source != g.source || f.target != g.target {
        return Ok(false);
    }
    if f.h.apex_size() != g.h.apex_size() {
        return Ok(false);
    }
    let (m, p) = (f.target.lifter(), f.target.neat());
    for sigma in SpanCell::enumerate(&f.h, &g.h)? {
        if !sigma.is_invertible() {
            continue;
        }
        if g.lambda.vcompose(&whisker_left(&m, &sigma)?)? == f.lambda
            && g.rho.vcompose(&whisker_left(&p, &sigma)?)? == f.rho
        {
            return Ok(true);
        }
    }
    Ok(false)
}

fn check_hcompose(k: &PolyMorphism, h: &PolyMorphism) -> Result<()> {
    if h.source.y_size() != k.source.x_size() {
        return Err(Error::mismatch(
            "hcompose_polymorph",
            "morphisms are not composable",
        ));
    }
    Ok(())
}

/// `k ∘ h` for `h: P => P′` over `X -> Y` and `k: Q => Q′` over `Y -> Z`,
/// computed on canonical forms:
/// `ℓ(w) = (φ_k(t), f′ ↦ φ_h(s_{λ_k(t, f′)}))` and
/// `λ((w, ((ℓ w, f′), e′))) = ((w, f), λ_h(s_f, e′))` with `f = λ_k(t, f′)`.
pub fn hcompose_polymorph(k: &PolyMorphism, h: &PolyMorphism) -> Result<PolyMorphism> {
    check_hcompose(k, h)?;
    let (k, h) = (k.canonical(), h.canonical());
    let (phi_k, phi_h) = (k.phi(), h.phi());
    let src = compose_poly_witnessed(&k.source, &h.source)?;
    let tgt = compose_poly_witnessed(&k.target, &h.target)?;
    let lk_pairs = pullback(&phi_k, &k.target.m2)?;
    let lh_pairs = pullback(&phi_h, &h.target.m2)?;
    let (lk, lh) = (k.lambda.map(), h.lambda.map());
    let mut ell = Vec::with_capacity(src.poly.s_size());
    let mut lambda_of: Vec<Vec<(usize, usize)>> = Vec::with_capacity(src.poly.s_size());
    for w in 0..src.poly.s_size() {
        let t = src.around.r.apply(w);
        let t2 = phi_k.apply(t);
        let sec: std::collections::HashMap<usize, usize> = src.section(w).into_iter().collect();
        let mut image = Vec::new();
        let mut lam = Vec::new();
        for f2 in k.target.m2.fiber(t2) {
            let f = lk.apply(lk_pairs.index_of(t, f2).unwrap());
            let s = sec[&f];
            image.push((f2, phi_h.apply(s)));
            lam.push((f, s));
        }
        // locate w′ in the target composite by its section
        let w2 = (0..tgt.poly.s_size())
            .find(|&w2| tgt.around.r.apply(w2) == t2 && tgt.section(w2) == image)
            .ok_or_else(|| {
                Error::invariant(
                    "PolyMorphism",
                    "hcompose",
                    "section not found in target composite",
                )
            })?;
        ell.push(w2);
        lambda_of.push(lam);
    }
    let ell = FinSetMap::raw(src.poly.s_size(), tgt.poly.s_size(), ell);
    let pairs = pullback(&ell, &tgt.poly.m2)?;
    let lambda = pairs
        .pairs()
        .iter()
        .map(|&(w, e2)| {
            let (v2, e_p) = tgt.exponents.pair(e2);
            let (_, f2) = tgt.around_pairs.pair(v2);
            let pos = k
                .target
                .m2
                .fiber(phi_k.apply(src.around.r.apply(w)))
                .iter()
                .position(|&x| x == f2)
                .unwrap();
            let (f, s) = lambda_of[w][pos];
            let e = lh.apply(lh_pairs.index_of(s, e_p).unwrap());
            let v = src.around_pairs.index_of(w, f).unwrap();
            src.exponents.index_of(v, e).unwrap()
        })
        .collect();
    PolyMorphism::from_map(src.poly, tgt.poly, ell, lambda)
}

/// `k ∘ h` through the universal property of the target composite's pasted
/// square, factoring the cone
/// `n′∘(k∘d) ⇒ (n′∘k)∘d ⇒ n∘d ⇒ p∘ñ ⇒ (p′∘h)∘ñ ⇒ p′∘(h∘ñ)`.
pub fn hcompose_polymorph_via_bipullback(
    k: &PolyMorphism,
    h: &PolyMorphism,
) -> Result<PolyMorphism> {
    check_hcompose(k, h)?;
    let src = compose_poly_witnessed(&k.source, &h.source)?;
    let tgt = compose_poly_witnessed(&k.target, &h.target)?;
    let (sq, sq2) = (&src.square, &tgt.square);
    let (d, n_t) = (&sq.d, &sq.c);
    let n2 = &sq2.n;
    let p2 = &sq2.p;
    let psi = associator(p2, &h.h, n_t)?
        .vcompose(&whisker_right(&h.rho.inverse().unwrap(), n_t)?)?
        .vcompose(&sq.theta)?
        .vcompose(&whisker_right(&k.lambda, d)?)?
        .vcompose(&associator(n2, &k.h, d)?.inverse().unwrap())?;
    let cone = Cone {
        u: compose_spans(&k.h, d)?,
        v: compose_spans(&h.h, n_t)?,
        psi,
    };
    let fac = sq2.factor(&cone)?;
    debug_assert_eq!(sq2.paste(&fac)?, cone.psi);
    let sigma = fac.h.clone();
    // λ: (m_P′∘ñ′)∘σ ⇒ m_P′∘(ñ′∘σ) ⇒ m_P′∘(h∘ñ) ⇒ (m_P′∘h)∘ñ ⇒ m_P∘ñ
    let m_p2 = h.target.lifter();
    let lambda = whisker_right(&h.lambda, n_t)?
        .vcompose(&associator(&m_p2, &h.h, n_t)?.inverse().unwrap())?
        .vcompose(&whisker_left(&m_p2, &fac.lambda)?)?
        .vcompose(&associator(&m_p2, &sq2.c, &sigma)?)?;
    // ρ: (q′∘d′)∘σ ⇒ q′∘(d′∘σ) ⇒ q′∘(k∘d) ⇒ (q′∘k)∘d ⇒ q∘d
    let q2 = k.target.neat();
    let rho = whisker_right(&k.rho, d)?
        .vcompose(&associator(&q2, &k.h, d)?.inverse().unwrap())?
        .vcompose(&whisker_left(&q2, &fac.rho)?)?
        .vcompose(&associator(&q2, &sq2.d, &sigma)?)?;
    // the composite lifter and neat leg agree leg-for-leg with m_P′∘ñ′ and q′∘d′
    let lambda = relabel(
        lambda,
        compose_spans(&tgt.poly.lifter(), &sigma)?,
        src.poly.lifter(),
    )?;
    let rho = relabel(
        rho,
        compose_spans(&tgt.poly.neat(), &sigma)?,
        src.poly.neat(),
    )?;
    let (src_poly, tgt_poly) = (src.poly, tgt.poly);
    PolyMorphism::new(src_poly, tgt_poly, sigma, lambda, rho)
}

/// Re-read a cell as one between spans with the same legs and apex order.
fn relabel(cell: SpanCell, source: Span, target: Span) -> Result<SpanCell> {
    let first = SpanCell::new(
        source,
        cell.source().clone(),
        FinSetMap::identity(cell.source().apex_size()),
    )?;
    let last = SpanCell::new(
        cell.target().clone(),
        target,
        FinSetMap::identity(cell.target().apex_size()),
    )?;
    last.vcompose(&cell)?.vcompose(&first)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(dom: usize, cod: usize, t: &[usize]) -> FinSetMap {
        FinSetMap::new(dom, cod, t.to_vec()).unwrap()
    }

    #[test]
    fn extension_examples() {
        let p = Polynomial::from_exponents(&[2]);
        let a = IndexedFamily::from_fiber_sizes(&[3]);
        assert_eq!(
            extension_eval(&p, &a).unwrap().family.fiber_sizes(),
            vec![9]
        );

        let id = identity_poly(3);
        let a = IndexedFamily::from_fiber_sizes(&[2, 0, 1]);
        assert_eq!(
            extension_eval(&id, &a).unwrap().family.fiber_sizes(),
            vec![2, 0, 1]
        );

        // y = 1 has no S-fibre; s = 1 has an empty E-fibre
        let p = Polynomial::new(map(1, 1, &[0]), map(1, 2, &[0]), map(2, 2, &[0, 0])).unwrap();
        let a = IndexedFamily::from_fiber_sizes(&[0]);
        assert_eq!(
            extension_eval(&p, &a).unwrap().family.fiber_sizes(),
            vec![1, 0]
        );
        assert_eq!(extension_fiber_sizes(&p, &[0]).unwrap(), vec![1, 0]);
    }

    #[test]
    fn monomial_composites() {
        let c = compose_poly(
            &Polynomial::from_exponents(&[3]),
            &Polynomial::from_exponents(&[2]),
        )
        .unwrap();
        assert_eq!((c.e_size(), c.s_size()), (6, 1));
        let c = compose_poly(
            &Polynomial::from_exponents(&[1, 0]),
            &Polynomial::from_exponents(&[1, 0]),
        )
        .unwrap();
        assert_eq!((c.e_size(), c.s_size()), (1, 3));
        assert!(polys_isomorphic(
            &c,
            &Polynomial::from_exponents(&[1, 0, 0])
        ));
    }

    #[test]
    fn identity_is_a_unit() {
        let p = Polynomial::new(
            map(3, 2, &[0, 1, 1]),
            map(3, 2, &[0, 0, 1]),
            map(2, 3, &[2, 0]),
        )
        .unwrap();
        assert!(polys_isomorphic(
            &compose_poly(&identity_poly(3), &p).unwrap(),
            &p
        ));
        assert!(polys_isomorphic(
            &compose_poly(&p, &identity_poly(2)).unwrap(),
            &p
        ));
        let e = identity_poly(0);
        assert_eq!(compose_poly(&e, &e).unwrap(), e);
    }

    #[test]
    fn natural_iso_on_monomials() {
        let w = compose_poly_witnessed(
            &Polynomial::from_exponents(&[1, 2]),
            &Polynomial::from_exponents(&[0, 2]),
        )
        .unwrap();
        let a = IndexedFamily::from_fiber_sizes(&[2]);
        let iso = w.natural_iso(&a).unwrap();
        assert!(iso.map().is_bijective());
    }

    #[test]
    fn identity_morphisms_compose() {
        let p = Polynomial::from_exponents(&[2, 1]);
        let id = PolyMorphism::identity(&p);
        assert!(id.is_strong());
        let c = vcompose_polymorph(&id, &id).unwrap();
        assert!(are_isomorphic_polymorph(&c, &id).unwrap());
    }

    #[test]
    fn non_strong_morphism() {
        // A² => A: φ = id on S = 1, λ picks the first exponent
        let p = Polynomial::from_exponents(&[2]);
        let q = Polynomial::from_exponents(&[1]);
        let f = PolyMorphism::from_map(p, q, FinSetMap::identity(1), vec![0]).unwrap();
        assert!(!f.is_strong());
        assert_eq!(f.lambda_table(), vec![0]);
    }

    #[test]
    fn bipullback_and_classical_hcompose_agree() {
        let p = Polynomial::from_exponents(&[2]);
        let q = Polynomial::from_exponents(&[1]);
        let h =
            PolyMorphism::from_map(p.clone(), q.clone(), FinSetMap::identity(1), vec![1]).unwrap();
        let k = PolyMorphism::identity(&Polynomial::from_exponents(&[0, 2]));
        let a = hcompose_polymorph(&k, &h).unwrap();
        let b = hcompose_polymorph_via_bipullback(&k, &h).unwrap();
        assert!(are_isomorphic_polymorph(&a, &b).unwrap());
    }

    #[test]
    fn hk_at_one_is_the_extension() {
        let p = Polynomial::new(
            map(3, 2, &[0, 1, 1]),
            map(3, 2, &[0, 0, 1]),
            map(2, 3, &[2, 0]),
        )
        .unwrap();
        let a = IndexedFamily::from_fiber_sizes(&[2, 1]);
        let hk = hk_span(&p, &a.as_span()).unwrap();
        let ext = extension_eval(&p, &a).unwrap();
        assert_eq!(hk.right(), ext.family.proj());
    }
}
