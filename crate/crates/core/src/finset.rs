//! Finite sets with canonical elements `0..n`, total functions between them,
//! subsets, and the limit and fibred-adjoint structure built on top.
//!
//! Every constructed object (pullback apex, dependent product, image) fixes a
//! deterministic enumeration order, documented on the operation, so results
//! are reproducible bit for bit.

use std::fmt;

use crate::error::{Error, Result};

/// Hard ceiling on the number of elements any single enumeration may produce.
pub const MAX_ENUMERATION: u128 = 4_000_000;

/// A finite set `{0, .., size-1}` with optional display labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FinSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl FinSet {
    pub fn new(size: usize) -> Self {
        FinSet { size, labels: None }
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::invariant(
                    "FinSetObj",
                    "distinct_labels",
                    format!("label {l:?} occurs twice"),
                ));
            }
        }
        Ok(FinSet {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }
}

impl From<usize> for FinSet {
    fn from(size: usize) -> Self {
        FinSet::new(size)
    }
}

/// A total function between finite sets, stored as a lookup table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinSetMap {
    dom: FinSet,
    cod: FinSet,
    table: Vec<usize>,
}

impl FinSetMap {
    pub fn new(dom: usize, cod: usize, table: Vec<usize>) -> Result<Self> {
        Self::between(FinSet::new(dom), FinSet::new(cod), table)
    }

    pub fn between(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size() {
            return Err(Error::invariant(
                "FinSetMap",
                "table_length",
                format!(
                    "table has {} entries, domain has {}",
                    table.len(),
                    dom.size()
                ),
            ));
        }
        if let Some((i, &v)) = table.iter().enumerate().find(|(_, &v)| v >= cod.size()) {
            return Err(Error::invariant(
                "FinSetMap",
                "totality",
                format!(
                    "entry {i} maps to {v}, codomain has {} elements",
                    cod.size()
                ),
            ));
        }
        Ok(FinSetMap { dom, cod, table })
    }

    /// Construction for tables already known to be in range.
    pub(crate) fn raw(dom: usize, cod: usize, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), dom);
        debug_assert!(table.iter().all(|&v| v < cod));
        FinSetMap {
            dom: FinSet::new(dom),
            cod: FinSet::new(cod),
            table,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::raw(n, n, (0..n).collect())
    }

    /// The unique map to the one-element set.
    pub fn to_terminal(n: usize) -> Self {
        Self::raw(n, 1, vec![0; n])
    }

    pub fn from_empty(cod: usize) -> Self {
        Self::raw(0, cod, Vec::new())
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn dom_size(&self) -> usize {
        self.dom.size()
    }

    pub fn cod_size(&self) -> usize {
        self.cod.size()
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &FinSetMap) -> Result<FinSetMap> {
        if first.cod_size() != self.dom_size() {
            return Err(Error::mismatch(
                "compose",
                format!(
                    "codomain of size {} does not match domain of size {}",
                    first.cod_size(),
                    self.dom_size()
                ),
            ));
        }
        Ok(FinSetMap {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            table: first.table.iter().map(|&i| self.table[i]).collect(),
        })
    }

    /// Sorted preimage of one codomain element.
    pub fn fiber(&self, b: usize) -> Vec<usize> {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == b)
            .map(|(i, _)| i)
            .collect()
    }

    /// All fibres, indexed by codomain element, each sorted.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cod_size()];
        for (i, &v) in self.table.iter().enumerate() {
            out[v].push(i);
        }
        out
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.cod_size()];
        for &v in &self.table {
            if std::mem::replace(&mut hit[v], true) {
                return false;
            }
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod_size()];
        for &v in &self.table {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom_size() == self.cod_size() && self.is_injective()
    }

    pub fn is_identity(&self) -> bool {
        self.dom_size() == self.cod_size() && self.table.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Option<FinSetMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.cod_size()];
        for (i, &v) in self.table.iter().enumerate() {
            inv[v] = i;
        }
        Some(FinSetMap {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            table: inv,
        })
    }

    /// Every function `dom -> cod`, in lexicographic order of tables.
    pub fn all_maps(dom: usize, cod: usize) -> impl Iterator<Item = FinSetMap> {
        let choices = vec![(0..cod).collect::<Vec<_>>(); dom];
        LexProduct::new(choices).map(move |t| FinSetMap::raw(dom, cod, t))
    }
}

impl fmt::Display for FinSetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}->{} {:?}",
            self.dom_size(),
            self.cod_size(),
            self.table
        )
    }
}

/// Lexicographic enumeration of the cartesian product of the given choice
/// lists, first coordinate most significant. An empty list of choices yields
/// exactly one (empty) tuple; an empty choice list anywhere yields nothing.
pub struct LexProduct {
    choices: Vec<Vec<usize>>,
    cursor: Option<Vec<usize>>,
}

impl LexProduct {
    pub fn new(choices: Vec<Vec<usize>>) -> Self {
        let cursor = if choices.iter().any(|c| c.is_empty()) {
            None
        } else {
            Some(vec![0; choices.len()])
        };
        LexProduct { choices, cursor }
    }

    /// Number of tuples, saturating at `u128::MAX`.
    pub fn count(choices: &[Vec<usize>]) -> u128 {
        choices
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }
}

impl Iterator for LexProduct {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cursor = self.cursor.as_mut()?;
        let item: Vec<usize> = cursor
            .iter()
            .zip(&self.choices)
            .map(|(&i, c)| c[i])
            .collect();
        let mut pos = cursor.len();
        loop {
            if pos == 0 {
                self.cursor = None;
                break;
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < self.choices[pos].len() {
                break;
            }
            cursor[pos] = 0;
        }
        Some(item)
    }
}

pub(crate) fn check_enumeration(op: &'static str, count: u128) -> Result<()> {
    if count > MAX_ENUMERATION {
        return Err(Error::TooLarge {
            op,
            detail: format!("{count} elements exceed the limit of {MAX_ENUMERATION}"),
        });
    }
    Ok(())
}

/// A subset of a finite set, stored as its strictly increasing member list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subset {
    carrier: FinSet,
    members: Vec<usize>,
}

impl Subset {
    pub fn new(carrier: usize, members: Vec<usize>) -> Result<Self> {
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invariant(
                "Subset",
                "strictly_increasing",
                format!("members {members:?} are not strictly increasing"),
            ));
        }
        if let Some(&m) = members.iter().find(|&&m| m >= carrier) {
            return Err(Error::invariant(
                "Subset",
                "in_range",
                format!("member {m} outside carrier of size {carrier}"),
            ));
        }
        Ok(Subset {
            carrier: FinSet::new(carrier),
            members,
        })
    }

    pub fn from_predicate(carrier: usize, pred: impl Fn(usize) -> bool) -> Self {
        Subset {
            carrier: FinSet::new(carrier),
            members: (0..carrier).filter(|&i| pred(i)).collect(),
        }
    }

    pub fn full(carrier: usize) -> Self {
        Self::from_predicate(carrier, |_| true)
    }

    pub fn empty(carrier: usize) -> Self {
        Self::from_predicate(carrier, |_| false)
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier.size()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// Position of `i` in the member list.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.members.binary_search(&i).ok()
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.carrier_size() == other.carrier_size()
            && self.members.iter().all(|&m| other.contains(m))
    }

    /// The inclusion `members -> carrier`.
    pub fn inclusion(&self) -> FinSetMap {
        FinSetMap::raw(self.len(), self.carrier_size(), self.members.clone())
    }

    /// Every subset of an `n`-element set, ordered by bitmask.
    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        assert!(n < 63, "subset enumeration is limited to carriers below 63");
        (0u64..(1u64 << n)).map(move |mask| Subset::from_predicate(n, |i| mask >> i & 1 == 1))
    }
}

fn check_carrier(op: &'static str, f: &FinSetMap, s: &Subset, on_domain: bool) -> Result<()> {
    let expected = if on_domain {
        f.dom_size()
    } else {
        f.cod_size()
    };
    if s.carrier_size() != expected {
        return Err(Error::mismatch(
            op,
            format!(
                "subset carrier has {} elements, expected {expected}",
                s.carrier_size()
            ),
        ));
    }
    Ok(())
}

/// Inverse image `f⁻¹(T)` of a subset of the codomain.
pub fn preimage(f: &FinSetMap, t: &Subset) -> Result<Subset> {
    check_carrier("preimage", f, t, false)?;
    Ok(Subset::from_predicate(f.dom_size(), |a| {
        t.contains(f.apply(a))
    }))
}

/// Direct image `∃_f(S)`.
pub fn exists_f(f: &FinSetMap, s: &Subset) -> Result<Subset> {
    check_carrier("exists_f", f, s, true)?;
    let mut hit = vec![false; f.cod_size()];
    for &a in s.members() {
        hit[f.apply(a)] = true;
    }
    Ok(Subset::from_predicate(f.cod_size(), |b| hit[b]))
}

/// Universal image `∀_f(S) = {b : f⁻¹(b) ⊆ S}`. Empty fibres are vacuously in.
pub fn forall_f(f: &FinSetMap, s: &Subset) -> Result<Subset> {
    check_carrier("forall_f", f, s, true)?;
    let mut ok = vec![true; f.cod_size()];
    for a in 0..f.dom_size() {
        if !s.contains(a) {
            ok[f.apply(a)] = false;
        }
    }
    Ok(Subset::from_predicate(f.cod_size(), |b| ok[b]))
}

/// Epi-mono factorisation `f = mono ∘ epi`; image elements are ordered by
/// their first preimage.
pub fn image_factorization(f: &FinSetMap) -> (FinSetMap, FinSetMap) {
    let mut slot = vec![usize::MAX; f.cod_size()];
    let mut image = Vec::new();
    let mut epi = Vec::with_capacity(f.dom_size());
    for &b in f.table() {
        if slot[b] == usize::MAX {
            slot[b] = image.len();
            image.push(b);
        }
        epi.push(slot[b]);
    }
    let k = image.len();
    (
        FinSetMap {
            dom: f.dom.clone(),
            cod: FinSet::new(k),
            table: epi,
        },
        FinSetMap {
            dom: FinSet::new(k),
            cod: f.cod.clone(),
            table: image,
        },
    )
}

/// Pullback of a cospan `A --f--> C <--g-- B`.
///
/// The apex is `{(a, b) : f(a) = g(b)}` enumerated in lexicographic `(a, b)`
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    pub apex: FinSet,
    pub pr1: FinSetMap,
    pub pr2: FinSetMap,
    pairs: Vec<(usize, usize)>,
}

impl Pullback {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        self.pairs.binary_search(&(a, b)).ok()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The induced map `K -> apex` of a commuting cone `(h: K->A, k: K->B)`,
    /// or `None` if the cone does not land in the apex.
    pub fn mediate(&self, h: &FinSetMap, k: &FinSetMap) -> Option<FinSetMap> {
        if h.dom_size() != k.dom_size()
            || h.cod_size() != self.pr1.cod_size()
            || k.cod_size() != self.pr2.cod_size()
        {
            return None;
        }
        let table = (0..h.dom_size())
            .map(|i| self.index_of(h.apply(i), k.apply(i)))
            .collect::<Option<Vec<_>>>()?;
        Some(FinSetMap::raw(h.dom_size(), self.len(), table))
    }
}

pub fn pullback(f: &FinSetMap, g: &FinSetMap) -> Result<Pullback> {
    if f.cod_size() != g.cod_size() {
        return Err(Error::mismatch(
            "pullback",
            format!("codomains have sizes {} and {}", f.cod_size(), g.cod_size()),
        ));
    }
    let g_fibers = g.fibers();
    let mut pairs = Vec::new();
    for a in 0..f.dom_size() {
        for &b in &g_fibers[f.apply(a)] {
            pairs.push((a, b));
        }
    }
    let n = pairs.len();
    Ok(Pullback {
        apex: FinSet::new(n),
        pr1: FinSetMap::raw(n, f.dom_size(), pairs.iter().map(|p| p.0).collect()),
        pr2: FinSetMap::raw(n, g.dom_size(), pairs.iter().map(|p| p.1).collect()),
        pairs,
    })
}

/// The dependent product `Π_f(x)` of a family `x: X -> A` along `f: A -> B`.
///
/// The fibre of `proj` over `b` is the set of sections `s: f⁻¹(b) -> X` with
/// `x ∘ s` the inclusion, enumerated by `b` and then lexicographically over the
/// sorted fibre `f⁻¹(b)`. An empty fibre of `f` contributes a single (empty)
/// section.
#[derive(Clone, Debug)]
pub struct DependentProduct {
    pub total: FinSet,
    pub proj: FinSetMap,
    /// For each element of `total`, the section's values on the sorted fibre.
    sections: Vec<Vec<usize>>,
    /// Sorted fibres of `f`.
    f_fibers: Vec<Vec<usize>>,
    /// First element of `total` over each `b`.
    offsets: Vec<usize>,
    /// Pullback of `(proj, f)`: pairs `(element, a)`.
    pub counit_domain: Pullback,
    /// Evaluation `(element, a) ↦ section(a)`, the counit of pullback ⊣ Π.
    pub eval: FinSetMap,
}

impl DependentProduct {
    /// Values of the section at `element`, aligned with the sorted fibre.
    pub fn section(&self, element: usize) -> &[usize] {
        &self.sections[element]
    }

    /// Value of the section at `element` on `a ∈ f⁻¹(proj(element))`.
    pub fn section_value(&self, element: usize, a: usize) -> usize {
        let b = self.proj.apply(element);
        let pos = self.f_fibers[b]
            .binary_search(&a)
            .expect("point lies outside the fibre of the section");
        self.sections[element][pos]
    }

    /// Locate the element over `b` with the given section (aligned with the
    /// sorted fibre).
    pub fn index_of(&self, b: usize, section: &[usize]) -> Option<usize> {
        let end = self
            .offsets
            .get(b + 1)
            .copied()
            .unwrap_or(self.sections.len());
        let start = self.offsets[b];
        self.sections[start..end]
            .binary_search_by(|s| s.as_slice().cmp(section))
            .ok()
            .map(|i| start + i)
    }

    pub fn fiber_of_base(&self, b: usize) -> &[usize] {
        &self.f_fibers[b]
    }
}

pub fn pi_f(f: &FinSetMap, x: &FinSetMap) -> Result<DependentProduct> {
    if x.cod_size() != f.dom_size() {
        return Err(Error::mismatch(
            "pi_f",
            format!(
                "family over a set of size {} cannot be pushed along a map from {}",
                x.cod_size(),
                f.dom_size()
            ),
        ));
    }
    let f_fibers = f.fibers();
    let x_fibers = x.fibers();
    let total_count: u128 = f_fibers
        .iter()
        .map(|fib| LexProduct::count(&fib.iter().map(|&a| x_fibers[a].clone()).collect::<Vec<_>>()))
        .fold(0u128, |a, c| a.saturating_add(c));
    check_enumeration("pi_f", total_count)?;
    let mut sections = Vec::new();
    let mut proj = Vec::new();
    let mut offsets = Vec::with_capacity(f.cod_size());
    for (b, fib) in f_fibers.iter().enumerate() {
        offsets.push(sections.len());
        let choices: Vec<Vec<usize>> = fib.iter().map(|&a| x_fibers[a].clone()).collect();
        for s in LexProduct::new(choices) {
            sections.push(s);
            proj.push(b);
        }
    }
    let n = sections.len();
    let proj = FinSetMap::raw(n, f.cod_size(), proj);
    let counit_domain = pullback(&proj, f)?;
    let eval_table = counit_domain
        .pairs()
        .iter()
        .map(|&(e, a)| {
            let pos = f_fibers[f.apply(a)].binary_search(&a).unwrap();
            sections[e][pos]
        })
        .collect();
    let eval = FinSetMap::raw(counit_domain.len(), x.dom_size(), eval_table);
    Ok(DependentProduct {
        total: FinSet::new(n),
        proj,
        sections,
        f_fibers,
        offsets,
        counit_domain,
        eval,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(dom: usize, cod: usize, t: &[usize]) -> FinSetMap {
        FinSetMap::new(dom, cod, t.to_vec()).unwrap()
    }

    #[test]
    fn totality_is_enforced() {
        let err = FinSetMap::new(2, 2, vec![0, 2]).unwrap_err();
        assert!(matches!(
            err,
            Error::Invariant {
                clause: "totality",
                ..
            }
        ));
        assert!(FinSetMap::new(2, 2, vec![0]).is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(FinSet::with_labels(vec!["a".into(), "a".into()]).is_err());
        assert_eq!(
            FinSet::with_labels(vec!["a".into(), "b".into()])
                .unwrap()
                .size(),
            2
        );
    }

    #[test]
    fn pullback_examples() {
        let id3 = FinSetMap::identity(3);
        assert_eq!(pullback(&id3, &id3).unwrap().len(), 3);

        let f = FinSetMap::to_terminal(2);
        let g = FinSetMap::to_terminal(3);
        assert_eq!(pullback(&f, &g).unwrap().len(), 6);

        let f = FinSetMap::identity(2);
        let g = map(3, 2, &[0, 0, 1]);
        let pb = pullback(&f, &g).unwrap();
        // enumerate pairs with f(a) = g(b): (0,0), (0,1), (1,2)
        assert_eq!(pb.pairs(), &[(0, 0), (0, 1), (1, 2)]);
        assert_eq!(f.compose(&pb.pr1).unwrap(), g.compose(&pb.pr2).unwrap());
    }

    #[test]
    fn pullback_codomain_mismatch() {
        let err = pullback(&FinSetMap::identity(2), &FinSetMap::identity(3)).unwrap_err();
        assert!(matches!(err, Error::Mismatch { .. }));
    }

    #[test]
    fn pi_along_identity_is_the_family() {
        let x = map(4, 3, &[2, 0, 2, 1]);
        let pi = pi_f(&FinSetMap::identity(3), &x).unwrap();
        assert_eq!(pi.total.size(), 4);
        // fibre over b lists the elements of x⁻¹(b) in order
        assert_eq!(pi.proj.table(), &[0, 1, 2, 2]);
        assert_eq!(pi.section(2), &[0]);
        assert_eq!(pi.section(3), &[2]);
    }

    #[test]
    fn pi_counts_sections() {
        // f: 2 -> 1, x with fibres of sizes 2 and 3
        let f = FinSetMap::to_terminal(2);
        let x = map(5, 2, &[0, 0, 1, 1, 1]);
        let pi = pi_f(&f, &x).unwrap();
        assert_eq!(pi.total.size(), 6);
        assert_eq!(pi.section(0), &[0, 2]);
        assert_eq!(pi.section(5), &[1, 4]);
        assert_eq!(pi.index_of(0, &[1, 3]), Some(4));
        assert_eq!(pi.eval.dom_size(), 12);
    }

    #[test]
    fn pi_over_empty_fibre_is_a_singleton() {
        let f = map(1, 2, &[0]);
        let x = map(2, 1, &[0, 0]);
        let pi = pi_f(&f, &x).unwrap();
        assert_eq!(pi.proj.fiber(1).len(), 1);
        assert_eq!(pi.proj.fiber(0).len(), 2);
    }

    #[test]
    fn forall_examples() {
        let f = FinSetMap::to_terminal(2);
        assert_eq!(forall_f(&f, &Subset::full(2)).unwrap(), Subset::full(1));
        assert!(forall_f(&f, &Subset::new(2, vec![0]).unwrap())
            .unwrap()
            .is_empty());
        let g = map(1, 2, &[0]);
        for s in Subset::all(1) {
            assert!(forall_f(&g, &s).unwrap().contains(1));
        }
    }

    #[test]
    fn exists_examples() {
        let f = FinSetMap::to_terminal(2);
        assert!(exists_f(&f, &Subset::empty(2)).unwrap().is_empty());
        assert_eq!(
            exists_f(&f, &Subset::new(2, vec![0]).unwrap()).unwrap(),
            Subset::full(1)
        );
        let g = map(3, 2, &[0, 0, 1]);
        let img = exists_f(&g, &Subset::new(3, vec![0, 1]).unwrap()).unwrap();
        assert_eq!(img.members(), &[0]);
        assert!(exists_f(&g, &Subset::full(2)).is_err());
    }

    #[test]
    fn image_factorization_examples() {
        let inj = map(2, 3, &[2, 0]);
        let (e, m) = image_factorization(&inj);
        assert!(e.is_bijective());
        assert_eq!(m.compose(&e).unwrap(), inj);

        let (e, m) = image_factorization(&FinSetMap::to_terminal(4));
        assert_eq!(m.dom_size(), 1);
        assert_eq!(e.table(), &[0, 0, 0, 0]);

        let f = map(3, 3, &[1, 1, 2]);
        let (e, m) = image_factorization(&f);
        assert_eq!((e.dom_size(), e.cod_size()), (3, 2));
        assert_eq!((m.dom_size(), m.cod_size()), (2, 3));
        assert_eq!(m.table(), &[1, 2]);
    }

    #[test]
    fn lex_product_orders_first_coordinate_most_significant() {
        let all: Vec<_> = LexProduct::new(vec![vec![0, 1], vec![5, 6]]).collect();
        assert_eq!(all, vec![vec![0, 5], vec![0, 6], vec![1, 5], vec![1, 6]]);
        assert_eq!(LexProduct::new(vec![]).count(), 1);
        assert_eq!(LexProduct::new(vec![vec![1], vec![]]).count(), 0);
    }

    #[test]
    fn subset_validation() {
        assert!(Subset::new(3, vec![1, 1]).is_err());
        assert!(Subset::new(3, vec![3]).is_err());
        assert_eq!(Subset::all(3).count(), 8);
    }
}
