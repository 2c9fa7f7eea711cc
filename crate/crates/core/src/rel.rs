//! Relations between finite sets as jointly monic spans, polynomials in the
//! bicategory of relations, and their description as partial maps into
//! power sets composed in Kleisli fashion.
//!
//! 2-cells between relations are inclusions, so every comparison here is an
//! equality of normalised relations.

use crate::error::{Error, Result};
use crate::finset::{image_factorization, FinSetMap, Subset};
use crate::span::{compose_spans, Span};

/// A relation `src -> tgt`: a sorted, duplicate-free list of pairs `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    src: usize,
    tgt: usize,
    pairs: Vec<(usize, usize)>,
}

impl Relation {
    /// Normalises the pairs (sorts, removes duplicates) after a range check.
    pub fn new(src: usize, tgt: usize, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| x >= src || y >= tgt) {
            return Err(Error::invariant(
                "Relation",
                "in_range",
                format!("pair ({x}, {y}) outside {src} × {tgt}"),
            ));
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Relation { src, tgt, pairs })
    }

    /// Like [`Relation::new`] but rejects unsorted or repeated pairs.
    pub fn from_sorted(src: usize, tgt: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invariant(
                "Relation",
                "sorted",
                "pairs are not strictly increasing",
            ));
        }
        Relation::new(src, tgt, pairs)
    }

    pub fn from_predicate(
        src: usize,
        tgt: usize,
        mut pred: impl FnMut(usize, usize) -> bool,
    ) -> Self {
        let pairs = (0..src)
            .flat_map(|x| (0..tgt).map(move |y| (x, y)))
            .filter(|&(x, y)| pred(x, y))
            .collect();
        Relation { src, tgt, pairs }
    }

    pub fn identity(n: usize) -> Self {
        Relation {
            src: n,
            tgt: n,
            pairs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    pub fn empty(src: usize, tgt: usize) -> Self {
        Relation {
            src,
            tgt,
            pairs: Vec::new(),
        }
    }

    pub fn full(src: usize, tgt: usize) -> Self {
        Self::from_predicate(src, tgt, |_, _| true)
    }

    pub fn graph(f: &FinSetMap) -> Self {
        Relation::new(
            f.dom_size(),
            f.cod_size(),
            (0..f.dom_size()).map(|x| (x, f.apply(x))).collect(),
        )
        .unwrap()
    }

    /// The image of a span in `src × tgt`.
    pub fn from_span(s: &Span) -> Self {
        let (x, y) = (s.left_foot(), s.right_foot());
        let pair = FinSetMap::raw(
            s.apex_size(),
            x * y,
            (0..s.apex_size())
                .map(|i| s.left().apply(i) * y + s.right().apply(i))
                .collect(),
        );
        let (_, mono) = image_factorization(&pair);
        Relation::new(x, y, mono.table().iter().map(|&c| (c / y, c % y)).collect()).unwrap()
    }

    /// The jointly monic span `src <- pairs -> tgt`.
    pub fn to_span(&self) -> Span {
        let n = self.pairs.len();
        Span::new(
            FinSetMap::raw(n, self.src, self.pairs.iter().map(|p| p.0).collect()),
            FinSetMap::raw(n, self.tgt, self.pairs.iter().map(|p| p.1).collect()),
        )
        .unwrap()
    }

    pub fn src(&self) -> usize {
        self.src
    }

    pub fn tgt(&self) -> usize {
        self.tgt
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.binary_search(&(x, y)).is_ok()
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.src == other.src
            && self.tgt == other.tgt
            && self.pairs.iter().all(|&(x, y)| other.contains(x, y))
    }

    pub fn converse(&self) -> Relation {
        Relation::new(
            self.tgt,
            self.src,
            self.pairs.iter().map(|&(x, y)| (y, x)).collect(),
        )
        .unwrap()
    }

    /// Elements related to `x`.
    pub fn image_of(&self, x: usize) -> Subset {
        Subset::from_predicate(self.tgt, |y| self.contains(x, y))
    }

    /// Every relation `src -> tgt`, ordered by bitmask over `src × tgt`.
    pub fn all(src: usize, tgt: usize) -> impl Iterator<Item = Relation> {
        let n = src * tgt;
        assert!(
            n < 32,
            "relation enumeration is limited to fewer than 32 pairs"
        );
        (0u64..(1u64 << n)).map(move |mask| {
            Relation::from_predicate(src, tgt, |x, y| mask >> (x * tgt + y) & 1 == 1)
        })
    }
}

/// `N ∘ M` for `M: X -> Y` and `N: Y -> Z`: compose the spans, then take the
/// image.
pub fn rel_compose(n: &Relation, m: &Relation) -> Result<Relation> {
    if m.tgt != n.src {
        return Err(Error::mismatch(
            "rel_compose",
            format!(
                "first relation lands in {} elements, second starts at {}",
                m.tgt, n.src
            ),
        ));
    }
    Ok(Relation::from_span(&compose_spans(
        &n.to_span(),
        &m.to_span(),
    )?))
}

/// The right lifting of `u: K -> Y` through `n: T -> Y`:
/// `(k, t)` is related iff every `y` related to `t` is related to `k`.
pub fn rel_rif(n: &Relation, u: &Relation) -> Result<Relation> {
    if n.tgt != u.tgt {
        return Err(Error::mismatch(
            "rel_rif",
            "lifter and target land in different sets",
        ));
    }
    Ok(Relation::from_predicate(u.src, n.src, |k, t| {
        n.pairs
            .iter()
            .filter(|p| p.0 == t)
            .all(|&(_, y)| u.contains(k, y))
    }))
}

/// A tabulation `1 <- R -p-> X` of a relation `1 -> X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelTabulation {
    /// The monomorphism `p: R -> X`.
    pub inclusion: FinSetMap,
}

impl RelTabulation {
    /// The span `1 <- R -> X`.
    pub fn span(&self) -> Span {
        Span::new(
            FinSetMap::to_terminal(self.inclusion.dom_size()),
            self.inclusion.clone(),
        )
        .unwrap()
    }
}

pub fn tabulate_rel(u: &Relation) -> Result<RelTabulation> {
    if u.src != 1 {
        return Err(Error::mismatch(
            "tabulate_rel",
            "relation does not start at the terminal set",
        ));
    }
    let subset = Subset::new(u.tgt, u.pairs.iter().map(|p| p.1).collect())?;
    Ok(RelTabulation {
        inclusion: subset.inclusion(),
    })
}

/// A polynomial `X -> C` in relations: a relation `A: X -> Z` into a subset
/// `Z ⊆ C`. Its lifter is the converse `Z -> X` of `A` and its neat leg the
/// inclusion of `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelPolynomial {
    x: usize,
    z: Subset,
    a: Relation,
}

impl RelPolynomial {
    pub fn new(x: usize, z: Subset, a: Relation) -> Result<Self> {
        if a.src != x || a.tgt != z.len() {
            return Err(Error::invariant(
                "RelPolynomial",
                "relation_typing",
                format!(
                    "relation goes {} -> {}, expected {} -> {}",
                    a.src,
                    a.tgt,
                    x,
                    z.len()
                ),
            ));
        }
        Ok(RelPolynomial { x, z, a })
    }

    pub fn identity(x: usize) -> Self {
        RelPolynomial {
            x,
            z: Subset::full(x),
            a: Relation::identity(x),
        }
    }

    pub fn x_size(&self) -> usize {
        self.x
    }

    pub fn c_size(&self) -> usize {
        self.z.carrier_size()
    }

    pub fn z(&self) -> &Subset {
        &self.z
    }

    pub fn a(&self) -> &Relation {
        &self.a
    }

    /// The relation `X -> C` through the inclusion of `Z`.
    pub fn total_relation(&self) -> Relation {
        Relation::new(
            self.x,
            self.c_size(),
            self.a
                .pairs
                .iter()
                .map(|&(x, i)| (x, self.z.members()[i]))
                .collect(),
        )
        .unwrap()
    }
}

/// `Q ∘ P` for `P: X -> C` and `Q: C -> D`: the new subset is
/// `{d ∈ Q.Z : every c related to d lies in P.Z}` and the new relation is
/// `P.A` followed by `Q.A` restricted to it.
pub fn compose_polyrel(q: &RelPolynomial, p: &RelPolynomial) -> Result<RelPolynomial> {
    if p.c_size() != q.x {
        return Err(Error::mismatch(
            "compose_polyrel",
            format!(
                "inner polynomial lands in {} elements, outer starts at {}",
                p.c_size(),
                q.x
            ),
        ));
    }
    let keep: Vec<usize> = (0..q.z.len())
        .filter(|&b| {
            q.a.pairs
                .iter()
                .filter(|pr| pr.1 == b)
                .all(|&(c, _)| p.z.contains(c))
        })
        .collect();
    let z = Subset::new(q.c_size(), keep.iter().map(|&b| q.z.members()[b]).collect())?;
    // restriction of Q.A to P.Z × kept, as a relation P.Z -> new Z
    let restricted = Relation::new(
        p.z.len(),
        keep.len(),
        q.a.pairs
            .iter()
            .filter_map(|&(c, b)| Some((p.z.position(c)?, keep.binary_search(&b).ok()?)))
            .collect(),
    )?;
    RelPolynomial::new(p.x, z, rel_compose(&restricted, &p.a)?)
}

/// A partial map `D ⇀ 𝒫X`: defined on `domain ⊆ D`, with `values[i]` the
/// value at the `i`-th element of the domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialMapToPower {
    x: usize,
    domain: Subset,
    values: Vec<Subset>,
}

impl PartialMapToPower {
    pub fn new(x: usize, domain: Subset, values: Vec<Subset>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::invariant(
                "PartialMapToPower",
                "defined_on_domain",
                format!(
                    "{} values for a domain of {} elements",
                    values.len(),
                    domain.len()
                ),
            ));
        }
        if values.iter().any(|v| v.carrier_size() != x) {
            return Err(Error::invariant(
                "PartialMapToPower",
                "value_carrier",
                "a value is not a subset of X",
            ));
        }
        Ok(PartialMapToPower { x, domain, values })
    }

    pub fn x_size(&self) -> usize {
        self.x
    }

    pub fn d_size(&self) -> usize {
        self.domain.carrier_size()
    }

    pub fn domain(&self) -> &Subset {
        &self.domain
    }

    pub fn value(&self, d: usize) -> Option<&Subset> {
        self.domain.position(d).map(|i| &self.values[i])
    }

    pub fn values(&self) -> &[Subset] {
        &self.values
    }
}

/// The partial map `C ⇀ 𝒫X` defined on `Z` classifying `A`.
pub fn to_partial_map(p: &RelPolynomial) -> PartialMapToPower {
    let values = (0..p.z.len())
        .map(|i| Subset::from_predicate(p.x, |x| p.a.contains(x, i)))
        .collect();
    PartialMapToPower {
        x: p.x,
        domain: p.z.clone(),
        values,
    }
}

pub fn from_partial_map(f: &PartialMapToPower) -> RelPolynomial {
    let pairs = f
        .values
        .iter()
        .enumerate()
        .flat_map(|(i, v)| v.members().iter().map(move |&x| (x, i)))
        .collect();
    RelPolynomial {
        x: f.x,
        z: f.domain.clone(),
        a: Relation::new(f.x, f.domain.len(), pairs).unwrap(),
    }
}

/// Kleisli composite of `f: C ⇀ 𝒫X` after `g: D ⇀ 𝒫C`: defined where
/// `g(d) ⊆ dom f`, with value `⋃_{c ∈ g(d)} f(c)`.
pub fn kleisli_compose(g: &PartialMapToPower, f: &PartialMapToPower) -> Result<PartialMapToPower> {
    if g.x != f.d_size() {
        return Err(Error::mismatch(
            "kleisli_compose",
            "maps are not composable",
        ));
    }
    let mut domain = Vec::new();
    let mut values = Vec::new();
    for (i, &d) in g.domain.members().iter().enumerate() {
        let gd = &g.values[i];
        if !gd.members().iter().all(|&c| f.domain.contains(c)) {
            continue;
        }
        let union = Subset::from_predicate(f.x, |x| {
            gd.members()
                .iter()
                .any(|&c| f.value(c).unwrap().contains(x))
        });
        domain.push(d);
        values.push(union);
    }
    PartialMapToPower::new(f.x, Subset::new(g.d_size(), domain)?, values)
}

/// `ℍ_K(P)(s)` for `s: K -> X` by the comma formula: `(k, c)` is related iff
/// `c ∈ Z` and every `x` related to `c` by `A` is related to `k` by `s`.
pub fn hk_rel(p: &RelPolynomial, s: &Relation) -> Result<Relation> {
    if s.tgt != p.x {
        return Err(Error::mismatch("hk_rel", "relation does not land in X"));
    }
    let mut pairs = Vec::new();
    for k in 0..s.src {
        for (i, &c) in p.z.members().iter().enumerate() {
            if p.a
                .pairs
                .iter()
                .filter(|pr| pr.1 == i)
                .all(|&(x, _)| s.contains(k, x))
            {
                pairs.push((k, c));
            }
        }
    }
    Relation::new(s.src, p.c_size(), pairs)
}

/// `ℍ_K(P)(s)` as the inclusion of `Z` after the right lifting of `s`
/// through the lifter.
pub fn hk_rel_via_rif(p: &RelPolynomial, s: &Relation) -> Result<Relation> {
    let lift = rel_rif(&p.a.converse(), s)?;
    rel_compose(&Relation::graph(&p.z.inclusion()), &lift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(src: usize, tgt: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::new(src, tgt, pairs.to_vec()).unwrap()
    }

    #[test]
    fn composition_examples() {
        let m = rel(2, 3, &[(0, 1), (1, 2)]);
        assert_eq!(rel_compose(&Relation::identity(3), &m).unwrap(), m);
        assert_eq!(
            rel_compose(&m, &Relation::empty(4, 2)).unwrap(),
            Relation::empty(4, 3)
        );
        let n = rel(3, 2, &[(1, 0), (2, 0), (2, 1)]);
        assert_eq!(
            rel_compose(&n, &m).unwrap(),
            rel(2, 2, &[(0, 0), (1, 0), (1, 1)])
        );
    }

    #[test]
    fn rif_examples() {
        let u = rel(2, 3, &[(0, 1), (1, 0), (1, 2)]);
        assert_eq!(rel_rif(&Relation::identity(3), &u).unwrap(), u);
        // n total with singleton images is a map: rif is the preimage
        let f = FinSetMap::new(2, 3, vec![2, 0]).unwrap();
        let lift = rel_rif(&Relation::graph(&f), &u).unwrap();
        assert_eq!(lift, rel(2, 2, &[(1, 0), (1, 1)]));
        // t = 1 has an empty row
        let n = rel(2, 3, &[(0, 1)]);
        let lift = rel_rif(&n, &u).unwrap();
        assert!(lift.contains(0, 1) && lift.contains(1, 1));
    }

    #[test]
    fn tabulations() {
        let t = tabulate_rel(&Relation::from_predicate(1, 4, |_, y| y % 2 == 1)).unwrap();
        assert_eq!(t.inclusion.table(), &[1, 3]);
        assert!(tabulate_rel(&Relation::full(1, 3))
            .unwrap()
            .inclusion
            .is_bijective());
        assert_eq!(
            tabulate_rel(&Relation::empty(1, 3))
                .unwrap()
                .inclusion
                .dom_size(),
            0
        );
    }

    #[test]
    fn singleton_composite() {
        // P: X = 1 -> C = 1 with Z = {c}, A = {(x, c)}; Q: C -> D = 1 with M = {(c, d)}
        let p = RelPolynomial::new(1, Subset::full(1), Relation::full(1, 1)).unwrap();
        let q = RelPolynomial::new(1, Subset::full(1), Relation::full(1, 1)).unwrap();
        let c = compose_polyrel(&q, &p).unwrap();
        assert_eq!(c.z().members(), &[0]);
        assert_eq!(c.a(), &Relation::full(1, 1));
        let q = RelPolynomial::new(1, Subset::full(2), Relation::empty(1, 2)).unwrap();
        let c = compose_polyrel(&q, &p).unwrap();
        assert_eq!(c.z().len(), 2);
        assert!(c.a().is_empty());
    }

    #[test]
    fn kleisli_edge_cases() {
        let f = to_partial_map(&RelPolynomial::identity(3));
        let g = PartialMapToPower::new(3, Subset::full(1), vec![Subset::empty(3)]).unwrap();
        let c = kleisli_compose(&g, &f).unwrap();
        assert_eq!(c.value(0), Some(&Subset::empty(3)));
        assert_eq!(
            from_partial_map(&to_partial_map(&RelPolynomial::identity(0))),
            RelPolynomial::identity(0)
        );
    }
}
