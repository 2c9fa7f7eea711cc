//! Document-in, document-out operations behind the command line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::document::{parse, serialize, Document};
use crate::error::{Error, Result};
use crate::modpoly::{compose_polymod, hk_mod};
use crate::poly::{compose_poly, extension_eval, hk_span};
use crate::random::*;
use crate::rel::{compose_polyrel, hk_rel};
use crate::span::Span;

/// Kinds accepted by [`random`], with the short aliases used by `compose`.
pub const RANDOM_KINDS: [&str; 13] = [
    "set",
    "rel",
    "mod",
    "finset-map",
    "span",
    "polynomial",
    "relation",
    "rel-polynomial",
    "fincat",
    "functor",
    "profunctor",
    "mod-polynomial",
    "family",
];

fn mismatch(expected: &str, found: &Document) -> Error {
    Error::KindMismatch {
        expected: expected.to_string(),
        found: found.kind().to_string(),
    }
}

/// `lhs ∘ rhs` for two documents of the given kind (`set`, `rel` or `mod`).
pub fn compose(kind: &str, lhs: &str, rhs: &str) -> Result<String> {
    let (q, p) = (parse(lhs)?, parse(rhs)?);
    let out = match kind {
        "set" | "polynomial" => match (&q, &p) {
            (Document::Polynomial(q), Document::Polynomial(p)) => {
                Document::Polynomial(compose_poly(q, p)?)
            }
            (Document::Polynomial(_), other) | (other, _) => {
                return Err(mismatch("polynomial", other))
            }
        },
        "rel" | "rel-polynomial" => match (&q, &p) {
            (Document::RelPolynomial(q), Document::RelPolynomial(p)) => {
                Document::RelPolynomial(compose_polyrel(q, p)?)
            }
            (Document::RelPolynomial(_), other) | (other, _) => {
                return Err(mismatch("rel-polynomial", other))
            }
        },
        "mod" | "mod-polynomial" => match (&q, &p) {
            (Document::ModPolynomial(q), Document::ModPolynomial(p)) => {
                Document::ModPolynomial(compose_polymod(q, p)?)
            }
            (Document::ModPolynomial(_), other) | (other, _) => {
                return Err(mismatch("mod-polynomial", other))
            }
        },
        _ => {
            return Err(Error::KindMismatch {
                expected: "set|rel|mod".into(),
                found: kind.into(),
            })
        }
    };
    Ok(serialize(&out))
}

/// Evaluate a polynomial on an argument of the matching kind: a family or a
/// span for a polynomial, a relation for a relational polynomial, a module for
/// a module polynomial.
pub fn eval(poly: &str, arg: &str) -> Result<String> {
    let out = match (parse(poly)?, parse(arg)?) {
        (Document::Polynomial(p), Document::Family(a)) => {
            Document::Family(extension_eval(&p, &a)?.family)
        }
        (Document::Polynomial(p), Document::Span(s)) => Document::Span(hk_span(&p, &s)?),
        (Document::RelPolynomial(p), Document::Relation(s)) => Document::Relation(hk_rel(&p, &s)?),
        (Document::ModPolynomial(p), Document::Profunctor(u)) => {
            Document::Profunctor(hk_mod(&p, &u)?)
        }
        (Document::Polynomial(_), other) => return Err(mismatch("family|span", &other)),
        (Document::RelPolynomial(_), other) => return Err(mismatch("relation", &other)),
        (Document::ModPolynomial(_), other) => return Err(mismatch("profunctor", &other)),
        (other, _) => return Err(mismatch("polynomial|rel-polynomial|mod-polynomial", &other)),
    };
    Ok(serialize(&out))
}

/// A random document of the given kind; the same seed gives the same bytes.
pub fn random(kind: &str, seed: u64) -> Result<String> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let r = &mut r;
    let doc = match kind {
        "finset-map" => {
            let (a, b) = (r.gen_range(0..=4), r.gen_range(1..=4));
            Document::FinSetMap(random_map(r, a, b))
        }
        "span" => {
            let (apex, a, b) = (r.gen_range(0..=4), r.gen_range(1..=3), r.gen_range(1..=3));
            Document::Span(Span::new(random_map(r, apex, a), random_map(r, apex, b))?)
        }
        "set" | "polynomial" => {
            let (x, y) = (r.gen_range(1..=3), r.gen_range(1..=3));
            Document::Polynomial(random_polynomial(r, x, y, 5, 4))
        }
        "relation" => {
            let (a, b) = (r.gen_range(0..=4), r.gen_range(0..=4));
            Document::Relation(random_relation(r, a, b, 0.4))
        }
        "rel" | "rel-polynomial" => {
            let (x, c) = (r.gen_range(1..=4), r.gen_range(1..=4));
            Document::RelPolynomial(random_relpoly(r, x, c))
        }
        "fincat" => Document::FinCat(random_fincat(r, 4, 10)),
        "functor" => Document::Functor(random_test_functor(r, 3, 8)),
        "profunctor" => {
            let (a, b) = (random_fincat(r, 3, 6), random_fincat(r, 3, 6));
            Document::Profunctor(random_profunctor(r, &a, &b, 2))
        }
        "mod" | "mod-polynomial" => {
            let (x, y) = (random_fincat(r, 3, 6), random_fincat(r, 3, 6));
            Document::ModPolynomial(random_modpoly(r, &x, &y, 3, 2))
        }
        "family" => {
            let base = r.gen_range(0..=4);
            Document::Family(random_family(r, base, 3))
        }
        _ => {
            return Err(Error::KindMismatch {
                expected: RANDOM_KINDS.join("|"),
                found: kind.into(),
            })
        }
    };
    Ok(serialize(&doc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_documents_parse_back() {
        for kind in RANDOM_KINDS {
            for seed in 0..5 {
                let text = random(kind, seed).unwrap();
                assert_eq!(serialize(&parse(&text).unwrap()), text, "{kind} {seed}");
                assert_eq!(random(kind, seed).unwrap(), text);
            }
        }
    }

    #[test]
    fn compose_and_eval_reject_wrong_kinds() {
        let p = random("polynomial", 0).unwrap();
        let r = random("rel-polynomial", 0).unwrap();
        assert!(matches!(
            compose("set", &p, &r),
            Err(Error::KindMismatch { .. })
        ));
        assert!(matches!(
            compose("rel", &p, &r),
            Err(Error::KindMismatch { .. })
        ));
        assert!(matches!(
            compose("bogus", &p, &p),
            Err(Error::KindMismatch { .. })
        ));
        assert!(matches!(eval(&p, &r), Err(Error::KindMismatch { .. })));
    }
}
