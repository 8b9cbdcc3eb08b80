//! Parsers for the compact text notations accepted on the command line.

use cartan_core::autgrp::ContAut;
use cartan_core::grading::{FgAbelianGroup, GroupHom};
use cartan_core::{DpaElement, Field, Scalar, Shape};

/// Malformed user input (as opposed to a mathematical failure).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

pub type ParseResult<T> = Result<T, ParseError>;

fn err<T>(msg: impl Into<String>) -> ParseResult<T> {
    Err(ParseError(msg.into()))
}

/// Splits on `sep` outside of parentheses and brackets.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_int(s: &str) -> ParseResult<i64> {
    s.trim().parse().or_else(|_| err(format!("expected an integer, got {s:?}")))
}

/// `1,1,2`, also accepting surrounding parentheses.
pub fn parse_n(s: &str) -> ParseResult<Vec<u32>> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.trim().is_empty() {
        return err("empty n tuple");
    }
    s.split(',')
        .map(|x| {
            let v = parse_int(x)?;
            if !(1..=16).contains(&v) {
                return err(format!("entries of n must lie in 1..=16, got {v}"));
            }
            Ok(v as u32)
        })
        .collect()
}

/// A group element: a bare integer or a parenthesized tuple.
fn parse_elem(s: &str) -> ParseResult<Vec<i64>> {
    let s = s.trim();
    match s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        Some(inner) => inner.split(',').map(parse_int).collect(),
        None => Ok(vec![parse_int(s)?]),
    }
}

/// `Z`, `Z^2`, `Z/4`, `Z x Z/4`, `Z/2 x Z/6`, or `0` for the trivial group.
/// Free factors come first in the coordinates whatever the written order.
pub fn parse_group(s: &str, p: u32) -> ParseResult<FgAbelianGroup> {
    let s = s.trim();
    if s == "0" || s == "1" {
        return Ok(FgAbelianGroup::free(0));
    }
    let mut rank = 0;
    let mut torsion = Vec::new();
    for factor in s.split(['x', '*', '×']) {
        let f = factor.trim();
        if f == "Z" {
            rank += 1;
        } else if let Some(k) = f.strip_prefix("Z^") {
            rank += parse_int(k)?.max(0) as usize;
        } else if let Some(d) = f.strip_prefix("Z/") {
            let d = parse_int(d)?;
            if d < 1 {
                return err(format!("bad cyclic factor {f:?}"));
            }
            torsion.push(d as u64);
        } else {
            return err(format!("unrecognized group factor {f:?}"));
        }
    }
    FgAbelianGroup::new(rank, torsion, Some(p)).or_else(|e| err(e.to_string()))
}

/// `e1->1, e2->(0,1)`; generators not mentioned map to zero. Without an
/// explicit group the codomain is `Z^k` for the length `k` of the images.
pub fn parse_hom(s: &str, m: usize, group: Option<&FgAbelianGroup>) -> ParseResult<GroupHom> {
    let mut images: Vec<Option<Vec<i64>>> = vec![None; m];
    for part in split_top(s, ',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let Some((lhs, rhs)) = part.split_once("->") else {
            return err(format!("expected ei->g, got {part:?}"));
        };
        let lhs = lhs.trim();
        let i = lhs.strip_prefix('e').map(parse_int).unwrap_or_else(|| err(format!("bad generator {lhs:?}")))?;
        if i < 1 || i as usize > m {
            return err(format!("generator index {i} out of range 1..={m}"));
        }
        images[i as usize - 1] = Some(parse_elem(rhs)?);
    }
    let len = images.iter().flatten().map(Vec::len).max().unwrap_or(1);
    let group = match group {
        Some(g) => g.clone(),
        None => FgAbelianGroup::free(len),
    };
    let images: Vec<Vec<i64>> = images.into_iter().map(|g| g.unwrap_or_else(|| group.zero())).collect();
    if images.iter().any(|g| g.len() != group.len()) {
        return err(format!("images must have {} coordinates", group.len()));
    }
    GroupHom::new(FgAbelianGroup::free(m), group, images).or_else(|e| err(e.to_string()))
}

/// A scalar: an integer, or `[c0, c1, …]` in the polynomial basis.
pub fn parse_scalar(f: &Field, s: &str) -> ParseResult<Scalar> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let p = f.characteristic() as i64;
        let coeffs: Vec<u32> =
            inner.split(',').map(|x| parse_int(x).map(|v| v.rem_euclid(p) as u32)).collect::<ParseResult<_>>()?;
        return f.from_coeffs(&coeffs).or_else(|e| err(e.to_string()));
    }
    Ok(f.from_i64(parse_int(s)?))
}

/// A monomial `x^(a1,…,am)`, `x3`, `x3^(2)` or `1`.
fn parse_monomial(shape: &Shape, s: &str) -> ParseResult<Vec<u32>> {
    let m = shape.m();
    let s = s.trim();
    if s == "1" {
        return Ok(vec![0; m]);
    }
    let Some(rest) = s.strip_prefix('x') else {
        return err(format!("bad monomial {s:?}"));
    };
    if let Some(idx) = rest.strip_prefix("^(").and_then(|t| t.strip_suffix(')')) {
        let a: Vec<u32> = idx.split(',').map(|x| parse_int(x).map(|v| v.max(0) as u32)).collect::<ParseResult<_>>()?;
        if a.len() != m {
            return err(format!("multi-index {s:?} needs {m} entries"));
        }
        return Ok(a);
    }
    let (var, pow) = match rest.split_once("^(") {
        Some((v, p)) => (v, parse_int(p.trim_end_matches(')'))?),
        None => (rest, 1),
    };
    let i = parse_int(var)?;
    if i < 1 || i as usize > m || pow < 0 {
        return err(format!("bad variable in {s:?}"));
    }
    let mut a = vec![0; m];
    a[i as usize - 1] = pow as u32;
    Ok(a)
}

/// An element of `O(m; n)` such as `3*x^(2,0) + x1 - 2`.
pub fn parse_dpa(shape: &Shape, s: &str) -> ParseResult<DpaElement> {
    let f = shape.field();
    let mut terms = Vec::new();
    // turn binary minus into "+ -" so that terms split on '+'
    let mut norm = String::new();
    let mut depth = 0;
    let mut prev = ' ';
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if ch == '-' && depth == 0 && !matches!(prev, '^' | '*') {
            norm.push_str("+-");
        } else {
            norm.push(ch);
        }
        if !ch.is_whitespace() {
            prev = ch;
        }
    }
    for t in split_top(&norm, '+') {
        let t = t.trim();
        if t.is_empty() {
            continue;
        }
        let (neg, t) = match t.strip_prefix('-') {
            Some(r) => (true, r.trim()),
            None => (false, t),
        };
        let (coef, mono) = match t.split_once('*') {
            Some((c, x)) => (parse_scalar(f, c)?, parse_monomial(shape, x)?),
            None if t.starts_with('x') => (Scalar::ONE, parse_monomial(shape, t)?),
            None => (parse_scalar(f, t)?, vec![0; shape.m()]),
        };
        let coef = if neg { f.neg(coef) } else { coef };
        terms.push((mono, coef));
    }
    DpaElement::from_terms(shape, &terms).or_else(|e| err(e.to_string()))
}

/// `1->2:3, 2->1` sends `x_1 ↦ 3 x_2`, `x_2 ↦ x_1` and fixes the rest.
pub fn parse_compact_monomial(shape: &Shape, s: &str) -> ParseResult<ContAut> {
    let m = shape.m();
    let f = shape.field();
    let mut targets: Vec<usize> = (1..=m).collect();
    let mut coeffs = vec![Scalar::ONE; m];
    for part in split_top(s, ',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let Some((lhs, rhs)) = part.split_once("->") else {
            return err(format!("expected i->j:c, got {part:?}"));
        };
        let (j, c) = match rhs.split_once(':') {
            Some((j, c)) => (parse_int(j)?, parse_scalar(f, c)?),
            None => (parse_int(rhs)?, Scalar::ONE),
        };
        let i = parse_int(lhs)?;
        if i < 1 || j < 1 || i as usize > m || j as usize > m {
            return err(format!("index out of range in {part:?}"));
        }
        targets[i as usize - 1] = j as usize;
        coeffs[i as usize - 1] = c;
    }
    ContAut::monomial(shape, &targets, &coeffs).or_else(|e| err(e.to_string()))
}
