//! Versioned JSON documents carrying one value of a known kind.
//!
//! A document is `{"version": "1", "kind": K, "payload": {..}}`. Output is
//! canonical: fixed key order, integer arrays on one line, two-space
//! indentation and a final newline, so equal values give equal bytes.

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fincat::{FinCat, Functor};
use crate::finset::{FinSet, FinSetMap, Subset};
use crate::modpoly::{ModPolynomial, Profunctor};
use crate::poly::{IndexedFamily, Polynomial};
use crate::rel::{RelPolynomial, Relation};
use crate::span::Span;

pub const VERSION: &str = "1";

pub const KINDS: [&str; 10] = [
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

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    FinSetMap(FinSetMap),
    Span(Span),
    Polynomial(Polynomial),
    Relation(Relation),
    RelPolynomial(RelPolynomial),
    FinCat(FinCat),
    Functor(Functor),
    Profunctor(Profunctor),
    ModPolynomial(ModPolynomial),
    Family(IndexedFamily),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::FinSetMap(_) => "finset-map",
            Document::Span(_) => "span",
            Document::Polynomial(_) => "polynomial",
            Document::Relation(_) => "relation",
            Document::RelPolynomial(_) => "rel-polynomial",
            Document::FinCat(_) => "fincat",
            Document::Functor(_) => "functor",
            Document::Profunctor(_) => "profunctor",
            Document::ModPolynomial(_) => "mod-polynomial",
            Document::Family(_) => "family",
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    dom: usize,
    cod: usize,
    table: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpanDoc {
    apex: usize,
    source: usize,
    target: usize,
    left: Vec<usize>,
    right: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyDoc {
    x: usize,
    e: usize,
    s: usize,
    y: usize,
    m1: Vec<usize>,
    m2: Vec<usize>,
    p: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelDoc {
    src: usize,
    tgt: usize,
    pairs: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelPolyDoc {
    x: usize,
    c: usize,
    z: Vec<usize>,
    a: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatDoc {
    objects: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    identities: Vec<usize>,
    composition: Vec<(usize, usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctorDoc {
    dom: CatDoc,
    cod: CatDoc,
    objects: Vec<usize>,
    morphisms: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfDoc {
    src: CatDoc,
    tgt: CatDoc,
    sizes: Vec<usize>,
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModPolyDoc {
    lifter: ProfDoc,
    neat: FunctorDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDoc {
    base: usize,
    proj: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<'a> {
    version: String,
    kind: String,
    #[serde(borrow)]
    payload: &'a RawValue,
}

fn map_doc(f: &FinSetMap) -> MapDoc {
    MapDoc {
        dom: f.dom_size(),
        cod: f.cod_size(),
        table: f.table().to_vec(),
    }
}

fn cat_doc(c: &FinCat) -> CatDoc {
    let mut composition = c.composition_triples();
    composition.sort_unstable();
    CatDoc {
        objects: c.n_objects(),
        src: c.sources().to_vec(),
        tgt: c.targets().to_vec(),
        identities: c.identities().to_vec(),
        composition,
    }
}

fn cat_from(d: CatDoc) -> Result<FinCat> {
    let n = d.src.len();
    if d.tgt.len() != n {
        return Err(Error::invariant(
            "FinCat",
            "endpoint_count",
            "src and tgt have different lengths",
        ));
    }
    FinCat::new(
        FinSet::new(d.objects),
        FinSet::new(n),
        d.src,
        d.tgt,
        d.identities,
        &d.composition,
    )
}

fn functor_doc(f: &Functor) -> FunctorDoc {
    FunctorDoc {
        dom: cat_doc(f.dom()),
        cod: cat_doc(f.cod()),
        objects: f.object_map().to_vec(),
        morphisms: f.morphism_map().to_vec(),
    }
}

fn functor_from(d: FunctorDoc) -> Result<Functor> {
    Functor::new(cat_from(d.dom)?, cat_from(d.cod)?, d.objects, d.morphisms)
}

fn prof_doc(m: &Profunctor) -> ProfDoc {
    let (a, b) = (m.src(), m.tgt());
    ProfDoc {
        src: cat_doc(a),
        tgt: cat_doc(b),
        sizes: m.sizes(),
        left: (0..b.n_morphisms())
            .flat_map(|beta| (0..a.n_objects()).map(move |o| (beta, o)))
            .map(|(beta, o)| m.left_table(beta, o))
            .collect(),
        right: (0..a.n_morphisms())
            .flat_map(|alpha| (0..b.n_objects()).map(move |o| (alpha, o)))
            .map(|(alpha, o)| m.right_table(alpha, o))
            .collect(),
    }
}

fn prof_from(d: ProfDoc) -> Result<Profunctor> {
    Profunctor::from_actions(cat_from(d.src)?, cat_from(d.tgt)?, d.sizes, d.left, d.right)
}

fn payload(doc: &Document) -> Value {
    let v = match doc {
        Document::FinSetMap(f) => serde_json::to_value(map_doc(f)),
        Document::Span(s) => serde_json::to_value(SpanDoc {
            apex: s.apex_size(),
            source: s.left_foot(),
            target: s.right_foot(),
            left: s.left().table().to_vec(),
            right: s.right().table().to_vec(),
        }),
        Document::Polynomial(p) => serde_json::to_value(PolyDoc {
            x: p.x_size(),
            e: p.e_size(),
            s: p.s_size(),
            y: p.y_size(),
            m1: p.m1().table().to_vec(),
            m2: p.m2().table().to_vec(),
            p: p.p().table().to_vec(),
        }),
        Document::Relation(r) => serde_json::to_value(RelDoc {
            src: r.src(),
            tgt: r.tgt(),
            pairs: r.pairs().to_vec(),
        }),
        Document::RelPolynomial(p) => serde_json::to_value(RelPolyDoc {
            x: p.x_size(),
            c: p.c_size(),
            z: p.z().members().to_vec(),
            a: p.a().pairs().to_vec(),
        }),
        Document::FinCat(c) => serde_json::to_value(cat_doc(c)),
        Document::Functor(f) => serde_json::to_value(functor_doc(f)),
        Document::Profunctor(m) => serde_json::to_value(prof_doc(m)),
        Document::ModPolynomial(p) => serde_json::to_value(ModPolyDoc {
            lifter: prof_doc(p.m()),
            neat: functor_doc(p.p()),
        }),
        Document::Family(f) => serde_json::to_value(FamilyDoc {
            base: f.base_size(),
            proj: f.proj().table().to_vec(),
        }),
    };
    v.expect("payloads serialize")
}

pub fn serialize(doc: &Document) -> String {
    let mut out = String::new();
    out.push_str("{\n  \"version\": ");
    out.push_str(&Value::from(VERSION).to_string());
    out.push_str(",\n  \"kind\": ");
    out.push_str(&Value::from(doc.kind()).to_string());
    out.push_str(",\n  \"payload\": ");
    write_value(&payload(doc), 2, &mut out);
    out.push_str("\n}\n");
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| " ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, val)) in map.iter().enumerate() {
                if i > 0 {
                    out.push_str(",\n");
                }
                out.push_str(&pad(indent + 2));
                out.push_str(&Value::from(k.as_str()).to_string());
                out.push_str(": ");
                write_value(val, indent + 2, out);
            }
            out.push('\n');
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if !items.iter().all(is_scalar) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(",\n");
                }
                out.push_str(&pad(indent + 2));
                write_value(item, indent + 2, out);
            }
            out.push('\n');
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&item.to_string());
            }
            out.push(']');
        }
        _ => out.push_str(&v.to_string()),
    }
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

fn syntax(e: serde_json::Error) -> Error {
    Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse(text: &str) -> Result<Document> {
    let env: Envelope = serde_json::from_str(text).map_err(syntax)?;
    if env.version != VERSION {
        return Err(Error::Version(env.version));
    }
    let raw = env.payload.get();
    let offset = raw.as_ptr() as usize - text.as_ptr() as usize;
    let (base_line, base_col) = position(text, offset);
    let body = |e: serde_json::Error| {
        let (line, column) = if e.line() <= 1 {
            (base_line, base_col + e.column().saturating_sub(1))
        } else {
            (base_line + e.line() - 1, e.column())
        };
        Error::Syntax {
            line,
            column,
            message: e.to_string(),
        }
    };
    macro_rules! load {
        ($t:ty) => {
            serde_json::from_str::<$t>(raw).map_err(body)?
        };
    }
    let doc = match env.kind.as_str() {
        "finset-map" => {
            let d = load!(MapDoc);
            Document::FinSetMap(FinSetMap::new(d.dom, d.cod, d.table)?)
        }
        "span" => {
            let d = load!(SpanDoc);
            if d.left.len() != d.apex || d.right.len() != d.apex {
                return Err(Error::invariant(
                    "Span",
                    "apex_size",
                    "leg tables do not match the apex",
                ));
            }
            Document::Span(Span::new(
                FinSetMap::new(d.apex, d.source, d.left)?,
                FinSetMap::new(d.apex, d.target, d.right)?,
            )?)
        }
        "polynomial" => {
            let d = load!(PolyDoc);
            Document::Polynomial(Polynomial::new(
                FinSetMap::new(d.e, d.x, d.m1)?,
                FinSetMap::new(d.e, d.s, d.m2)?,
                FinSetMap::new(d.s, d.y, d.p)?,
            )?)
        }
        "relation" => {
            let d = load!(RelDoc);
            Document::Relation(Relation::from_sorted(d.src, d.tgt, d.pairs)?)
        }
        "rel-polynomial" => {
            let d = load!(RelPolyDoc);
            let z = Subset::new(d.c, d.z)?;
            let a = Relation::from_sorted(d.x, z.len(), d.a)?;
            Document::RelPolynomial(RelPolynomial::new(d.x, z, a)?)
        }
        "fincat" => Document::FinCat(cat_from(load!(CatDoc))?),
        "functor" => Document::Functor(functor_from(load!(FunctorDoc))?),
        "profunctor" => Document::Profunctor(prof_from(load!(ProfDoc))?),
        "mod-polynomial" => {
            let d = load!(ModPolyDoc);
            Document::ModPolynomial(ModPolynomial::new(
                prof_from(d.lifter)?,
                functor_from(d.neat)?,
            )?)
        }
        "family" => {
            let d = load!(FamilyDoc);
            Document::Family(IndexedFamily::new(FinSetMap::new(
                d.proj.len(),
                d.base,
                d.proj,
            )?))
        }
        other => {
            return Err(Error::KindMismatch {
                expected: KINDS.join("|"),
                found: other.to_string(),
            })
        }
    };
    Ok(doc)
}
