//! JSON encodings of fields, algebra elements, automorphisms, gradings and
//! conjugation results (schema `cartan-mod/1`).
//!
//! Scalars are coefficient arrays `[c_0, …, c_{k-1}]` over the prime field;
//! an integer is accepted on input. Algebra elements may also be given as
//! strings in the text notation of [`crate::text`].

use std::collections::BTreeMap;
use std::sync::Arc;

use cartan_core::autgrp::{is_admissible, ContAut};
use cartan_core::diag::ConjugationResult;
use cartan_core::grading::{FgAbelianGroup, Grading, GroupHom};
use cartan_core::liealg::{AlgebraKind, FormKind, LieAlgebra};
use cartan_core::linalg::SparseVec;
use cartan_core::{DpaElement, Field, Scalar, Shape};
use serde_json::{json, Map, Value};

use crate::text::{self, ParseError, ParseResult};

pub const SCHEMA: &str = "cartan-mod/1";

fn err<T>(msg: impl Into<String>) -> ParseResult<T> {
    Err(ParseError(msg.into()))
}

fn as_u64(v: &Value, what: &str) -> ParseResult<u64> {
    v.as_u64().ok_or_else(|| ParseError(format!("{what} must be a non-negative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> ParseResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| ParseError(format!("{what} must be an array")))
}

fn int_vec(v: &Value, what: &str) -> ParseResult<Vec<i64>> {
    as_array(v, what)?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| ParseError(format!("{what} must hold integers"))))
        .collect()
}

pub fn scalar(f: &Field, c: Scalar) -> Value {
    json!(f.coeffs(c))
}

pub fn parse_scalar(f: &Field, v: &Value) -> ParseResult<Scalar> {
    match v {
        Value::Number(_) => Ok(f.from_i64(v.as_i64().ok_or_else(|| ParseError("scalar out of range".into()))?)),
        Value::Array(_) => {
            let p = f.characteristic() as i64;
            let c: Vec<u32> = int_vec(v, "scalar")?.iter().map(|x| x.rem_euclid(p) as u32).collect();
            f.from_coeffs(&c).or_else(|e| err(e.to_string()))
        }
        Value::String(s) => text::parse_scalar(f, s),
        _ => err("scalar must be an integer or a coefficient array"),
    }
}

pub fn field(f: &Field) -> Value {
    json!({"p": f.characteristic(), "k": f.degree(), "modulus": f.modulus()})
}

/// `{"kind", "p", "n"}`, with `k` and `modulus` over a proper extension.
pub fn algebra(alg: &LieAlgebra) -> Value {
    let f = alg.field();
    let mut v = json!({"kind": alg.kind().name(), "p": f.characteristic(), "n": alg.shape().n()});
    if f.degree() > 1 {
        v["k"] = json!(f.degree());
        v["modulus"] = json!(f.modulus());
    }
    v
}

pub fn parse_field(v: &Value) -> ParseResult<Field> {
    let p = as_u64(&v["p"], "p")? as u32;
    let r = match v.get("modulus") {
        Some(m) if !m.is_null() => {
            let m: Vec<u32> = int_vec(m, "modulus")?.iter().map(|&x| x as u32).collect();
            Field::with_modulus(p, &m)
        }
        _ => match v.get("k") {
            Some(k) if as_u64(k, "k")? > 1 => Field::extension(p, as_u64(k, "k")? as u32),
            _ => Field::prime(p),
        },
    };
    r.or_else(|e| err(e.to_string()))
}

pub fn parse_algebra(v: &Value) -> ParseResult<Arc<LieAlgebra>> {
    let kind =
        v["kind"].as_str().and_then(AlgebraKind::parse).ok_or_else(|| ParseError("unknown algebra kind".into()))?;
    let f = parse_field(v)?;
    let n: Vec<u32> = int_vec(&v["n"], "n")?.iter().map(|&x| x as u32).collect();
    let shape = Shape::new(&f, &n).or_else(|e| err(e.to_string()))?;
    LieAlgebra::shared(kind, &shape).or_else(|e| err(e.to_string()))
}

fn terms_of(shape: &Shape, terms: &[(u32, Scalar)]) -> Vec<Value> {
    let f = shape.field();
    terms.iter().map(|&(u, c)| json!({"a": shape.unpack(u), "c": scalar(f, c)})).collect()
}

pub fn dpa(e: &DpaElement) -> Value {
    json!({"terms": terms_of(e.shape(), e.terms())})
}

/// Accepts `{"terms": [...]}` (an optional `shape` must match) or a string.
pub fn parse_dpa(shape: &Shape, v: &Value) -> ParseResult<DpaElement> {
    if let Some(s) = v.as_str() {
        return text::parse_dpa(shape, s);
    }
    if let Some(sh) = v.get("shape") {
        let n: Vec<u32> = int_vec(&sh["n"], "shape.n")?.iter().map(|&x| x as u32).collect();
        if n != shape.n() || as_u64(&sh["p"], "shape.p")? != shape.field().characteristic() as u64 {
            return err("element shape does not match the algebra");
        }
    }
    let f = shape.field();
    let mut terms = Vec::new();
    for t in as_array(&v["terms"], "terms")? {
        let a: Vec<u32> = int_vec(&t["a"], "a")?.iter().map(|&x| x.max(0) as u32).collect();
        terms.push((a, parse_scalar(f, &t["c"])?));
    }
    DpaElement::from_terms(shape, &terms).or_else(|e| err(e.to_string()))
}

/// An element of `W` in coordinates, as terms `c · x^(a) ∂_i`.
pub fn derivation(shape: &Shape, v: &[(u32, Scalar)]) -> Value {
    let f = shape.field();
    let dim = shape.dim() as u32;
    let terms: Vec<Value> =
        v.iter().map(|&(k, c)| json!({"a": shape.unpack(k % dim), "i": k / dim + 1, "c": scalar(f, c)})).collect();
    json!({ "terms": terms })
}

pub fn parse_derivation(shape: &Shape, v: &Value) -> ParseResult<SparseVec> {
    let f = shape.field();
    let dim = shape.dim() as u32;
    let mut acc: BTreeMap<u32, Scalar> = BTreeMap::new();
    for t in as_array(&v["terms"], "terms")? {
        let a: Vec<u32> = int_vec(&t["a"], "a")?.iter().map(|&x| x.max(0) as u32).collect();
        let u = shape.pack(&a).or_else(|e| err(e.to_string()))?;
        let i = as_u64(&t["i"], "i")?;
        if i < 1 || i as usize > shape.m() {
            return err("derivation axis out of range");
        }
        let c = parse_scalar(f, &t["c"])?;
        let e = acc.entry((i as u32 - 1) * dim + u).or_insert(Scalar::ZERO);
        *e = f.add(*e, c);
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

pub fn automorphism(g: &ContAut) -> Value {
    json!({"tuple": g.tuple().iter().map(dpa).collect::<Vec<_>>(), "text": g.to_string()})
}

/// `{"tuple": [...]}` or a compact monomial string.
pub fn parse_automorphism(shape: &Shape, v: &Value) -> ParseResult<ContAut> {
    if let Some(s) = v.as_str() {
        return text::parse_compact_monomial(shape, s);
    }
    let tuple: Vec<DpaElement> =
        as_array(&v["tuple"], "tuple")?.iter().map(|y| parse_dpa(shape, y)).collect::<ParseResult<_>>()?;
    if tuple.len() != shape.m() {
        return err(format!("automorphism tuple needs {} entries", shape.m()));
    }
    ContAut::new(shape, tuple).or_else(|e| err(e.to_string()))
}

/// A generator list: an array of automorphisms, or
/// `{"generators": [...], "orders": [...]}`.
pub fn parse_generators(shape: &Shape, v: &Value) -> ParseResult<(Vec<ContAut>, Option<Vec<u64>>)> {
    let (list, orders) = match v {
        Value::Array(a) => (a, None),
        Value::Object(_) => {
            let orders = match v.get("orders") {
                Some(o) if !o.is_null() => {
                    Some(as_array(o, "orders")?.iter().map(|x| as_u64(x, "order")).collect::<ParseResult<Vec<_>>>()?)
                }
                _ => None,
            };
            (as_array(&v["generators"], "generators")?, orders)
        }
        _ => return err("generators must be an array or an object"),
    };
    let gens = list.iter().map(|g| parse_automorphism(shape, g)).collect::<ParseResult<Vec<_>>>()?;
    if orders.as_ref().is_some_and(|o| o.len() != gens.len()) {
        return err("one order per generator");
    }
    Ok((gens, orders))
}

pub fn group(g: &FgAbelianGroup) -> Value {
    json!({"rank": g.rank, "torsion": g.torsion})
}

pub fn parse_group(v: &Value, p: u32) -> ParseResult<FgAbelianGroup> {
    let rank = as_u64(&v["rank"], "rank")? as usize;
    let torsion = match v.get("torsion") {
        Some(t) => as_array(t, "torsion")?.iter().map(|x| as_u64(x, "torsion")).collect::<ParseResult<_>>()?,
        None => Vec::new(),
    };
    FgAbelianGroup::new(rank, torsion, Some(p)).or_else(|e| err(e.to_string()))
}

pub fn hom(h: &GroupHom) -> Value {
    json!({"domain": group(&h.domain), "codomain": group(&h.codomain), "images": h.images})
}

pub fn grading(gr: &Grading) -> Value {
    let shape = gr.algebra.shape();
    let components: Vec<Value> = gr
        .components
        .iter()
        .map(|(d, b)| {
            json!({
                "degree": d,
                "dim": b.len(),
                "basis": b.iter().map(|v| derivation(shape, v)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut v = json!({
        "schema": SCHEMA,
        "algebra": algebra(&gr.algebra),
        "group": group(&gr.group),
        "dim": gr.total_dim(),
        "components": components,
    });
    if let Some(h) = &gr.source_hom {
        v["hom"] = hom(h);
    }
    v
}

/// Rebuilds a grading from [`grading`] output (the algebra is rebuilt from
/// its descriptor).
pub fn parse_grading(v: &Value) -> ParseResult<Grading> {
    if v.get("schema").and_then(Value::as_str).is_some_and(|s| s != SCHEMA) {
        return err("unsupported schema");
    }
    let alg = parse_algebra(&v["algebra"])?;
    let p = alg.field().characteristic();
    let g = parse_group(&v["group"], p)?;
    let shape = alg.shape().clone();
    let mut parts = Vec::new();
    for c in as_array(&v["components"], "components")? {
        let d = int_vec(&c["degree"], "degree")?;
        if g.check_elem(&d).is_err() {
            return err("degree does not belong to the group");
        }
        let basis = as_array(&c["basis"], "basis")?
            .iter()
            .map(|b| parse_derivation(&shape, b))
            .collect::<ParseResult<Vec<_>>>()?;
        parts.push((d, basis));
    }
    let source = match v.get("hom") {
        Some(h) if !h.is_null() => {
            let images =
                as_array(&h["images"], "images")?.iter().map(|x| int_vec(x, "image")).collect::<ParseResult<_>>()?;
            Some(GroupHom::new(FgAbelianGroup::free(shape.m()), g.clone(), images).or_else(|e| err(e.to_string()))?)
        }
        _ => None,
    };
    Ok(Grading::from_parts(alg, g, parts, source))
}

fn kind_name(k: FormKind) -> &'static str {
    match k {
        FormKind::W => "W",
        FormKind::S => "S",
        FormKind::H => "H",
        FormKind::K => "K",
    }
}

/// Conjugator, conjugated generators and the certificates re-checked on
/// the output.
pub fn conjugation(res: &ConjugationResult) -> Value {
    let shape = res.conjugator.shape();
    let f = shape.field();
    let tori = res.torus_elements();
    let in_torus = tori.iter().all(|t| is_admissible(f, res.kind, t));
    let in_aut = res.conjugator.in_aut_group(res.kind).unwrap_or(false);
    let multiplier = match res.kind {
        FormKind::W => Value::Null,
        FormKind::S | FormKind::H => res.conjugator.form_multiplier(res.kind).map_or(Value::Null, |c| scalar(f, c)),
        FormKind::K => res.conjugator.contact_multiplier().map_or(Value::Null, |u| dpa(&u)),
    };
    let mut certs = Map::new();
    certs.insert("in_torus".into(), json!(in_torus));
    certs.insert("in_aut_group".into(), json!(in_aut));
    certs.insert("form_multiplier".into(), multiplier);
    json!({
        "kind": kind_name(res.kind),
        "field": field(f),
        "conjugator": automorphism(&res.conjugator),
        "images": res.images.iter().map(automorphism).collect::<Vec<_>>(),
        "torus": tori.iter().map(|t| t.iter().map(|&c| scalar(f, c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "scalars": res.scalars.iter().map(|&c| scalar(f, c)).collect::<Vec<_>>(),
        "certificates": Value::Object(certs),
    })
}
