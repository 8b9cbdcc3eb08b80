//! Differential forms with coefficients in `O(m; n)`.
//!
//! A form is a sparse map from axis subsets (bit masks, bit `i` = `dx_{i+1}`)
//! to coefficients. Subsets are stored in increasing order, so a term
//! `f dx_{i1} ^ … ^ dx_{ik}` has `i1 < … < ik`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::autgrp::ContAut;
use crate::dpa::{DpaElement, Shape};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::liealg::{Derivation, FormKind};
use crate::linalg::SparseVec;

#[derive(Clone, PartialEq, Eq)]
pub struct DifferentialForm {
    shape: Shape,
    terms: BTreeMap<u32, DpaElement>,
}

/// Result of [`proportional_to`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Scalar(Scalar),
    Unit(DpaElement),
}

/// Sign of sorting `axes` into increasing order, or `None` on a repeat.
fn sort_sign(axes: &mut [u32]) -> Option<bool> {
    let mut neg = false;
    for i in 1..axes.len() {
        let mut j = i;
        while j > 0 && axes[j - 1] > axes[j] {
            axes.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
        if j > 0 && axes[j - 1] == axes[j] {
            return None;
        }
    }
    Some(neg)
}

fn mask_axes(mask: u32) -> Vec<u32> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

fn axes_mask(axes: &[u32]) -> u32 {
    axes.iter().fold(0, |m, &a| m | (1 << a))
}

/// Sign of `dx_A ^ dx_B` relative to `dx_{A∪B}` (both increasing, disjoint).
fn merge_sign(a: u32, b: u32) -> bool {
    let mut neg = false;
    for i in mask_axes(b) {
        // number of elements of a greater than i
        let greater = (a >> (i + 1)).count_ones();
        if greater % 2 == 1 {
            neg = !neg;
        }
    }
    neg
}

impl DifferentialForm {
    pub fn zero(shape: &Shape) -> Self {
        DifferentialForm { shape: shape.clone(), terms: BTreeMap::new() }
    }

    /// The 0-form `f`.
    pub fn function(f: &DpaElement) -> Self {
        let mut w = Self::zero(f.shape());
        w.add_term(0, f.clone());
        w
    }

    /// `dx_i` (1-based axis).
    pub fn dx(shape: &Shape, i: usize) -> Result<Self> {
        shape.check_axis(i)?;
        let mut w = Self::zero(shape);
        w.add_term(1 << (i - 1), DpaElement::one(shape));
        Ok(w)
    }

    /// `f · dx_{axes[0]} ^ dx_{axes[1]} ^ …` with 1-based axes in any order.
    pub fn term(f: &DpaElement, axes: &[usize]) -> Result<Self> {
        let sh = f.shape();
        let mut list = Vec::with_capacity(axes.len());
        for &a in axes {
            sh.check_axis(a)?;
            list.push((a - 1) as u32);
        }
        let mut w = Self::zero(sh);
        if let Some(neg) = sort_sign(&mut list) {
            let c = if neg { f.scale(sh.field().from_i64(-1)) } else { f.clone() };
            w.add_term(axes_mask(&list), c);
        }
        Ok(w)
    }

    fn add_term(&mut self, mask: u32, f: DpaElement) {
        if f.is_zero() {
            return;
        }
        match self.terms.remove(&mask) {
            Some(old) => {
                let s = old.add_unchecked(Scalar::ONE, &f);
                if !s.is_zero() {
                    self.terms.insert(mask, s);
                }
            }
            None => {
                self.terms.insert(mask, f);
            }
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(sorted 1-based axes, coefficient)` pairs.
    pub fn terms(&self) -> Vec<(Vec<usize>, &DpaElement)> {
        self.terms.iter().map(|(&m, f)| (mask_axes(m).into_iter().map(|a| a as usize + 1).collect(), f)).collect()
    }

    /// Coefficient of `dx_S` for the given increasing 1-based axes.
    pub fn coefficient(&self, axes: &[usize]) -> DpaElement {
        let mask = axes.iter().fold(0u32, |m, &a| m | (1 << (a - 1)));
        self.terms.get(&mask).cloned().unwrap_or_else(|| DpaElement::zero(&self.shape))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.shape == other.shape {
            Ok(())
        } else {
            Err(Error::ShapeMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&m, f) in &other.terms {
            out.add_term(m, f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(self.shape.field().from_i64(-1)))
    }

    pub fn scale(&self, c: Scalar) -> Self {
        let mut out = Self::zero(&self.shape);
        for (&m, f) in &self.terms {
            out.add_term(m, f.scale(c));
        }
        out
    }

    /// `u · self` for a function `u`.
    pub fn mul_function(&self, u: &DpaElement) -> Result<Self> {
        if u.shape() != &self.shape {
            return Err(Error::ShapeMismatch);
        }
        let mut out = Self::zero(&self.shape);
        for (&m, f) in &self.terms {
            out.add_term(m, u.mul_unchecked(f));
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let minus = self.shape.field().from_i64(-1);
        let mut out = Self::zero(&self.shape);
        for (&a, f) in &self.terms {
            for (&b, g) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let mut c = f.mul_unchecked(g);
                if merge_sign(a, b) {
                    c = c.scale(minus);
                }
                out.add_term(a | b, c);
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn exterior_d(&self) -> Self {
        let minus = self.shape.field().from_i64(-1);
        let mut out = Self::zero(&self.shape);
        for (&mask, f) in &self.terms {
            for i in 0..self.shape.m() as u32 {
                if mask & (1 << i) != 0 {
                    continue;
                }
                let df = f.partial0(i as usize);
                if df.is_zero() {
                    continue;
                }
                // dx_i ^ dx_S: move dx_i past the axes of S below i
                let below = (mask & ((1 << i) - 1)).count_ones();
                let c = if below % 2 == 1 { df.scale(minus) } else { df };
                out.add_term(mask | (1 << i), c);
            }
        }
        out
    }

    /// Lie derivative `L_D`: `D` acts on coefficients and `dx_i ↦ d(D(x_i))`.
    pub fn derivation_action(&self, d: &Derivation) -> Result<Self> {
        if d.shape() != &self.shape {
            return Err(Error::ShapeMismatch);
        }
        let sh = &self.shape;
        let minus = sh.field().from_i64(-1);
        let mut out = Self::zero(sh);
        for (&mask, f) in &self.terms {
            out.add_term(mask, d.apply_unchecked(f));
            let axes = mask_axes(mask);
            for (pos, &s) in axes.iter().enumerate() {
                let comp = &d.components()[s as usize];
                if comp.is_zero() {
                    continue;
                }
                for j in 0..sh.m() as u32 {
                    let dj = comp.partial0(j as usize);
                    if dj.is_zero() {
                        continue;
                    }
                    let mut list = axes.clone();
                    list[pos] = j;
                    if let Some(neg) = sort_sign(&mut list) {
                        let c = f.mul_unchecked(&dj);
                        out.add_term(axes_mask(&list), if neg { c.scale(minus) } else { c });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Substitutes `x_i ↦ ψ(x_i)` in coefficients and `dx_i ↦ d(ψ(x_i))`.
    pub fn pullback(&self, psi: &ContAut) -> Result<Self> {
        if psi.shape() != &self.shape {
            return Err(Error::ShapeMismatch);
        }
        let sub = psi.substitution();
        let sh = &self.shape;
        let dys: Vec<Self> = psi.tuple().iter().map(|y| Self::function(y).exterior_d()).collect();
        let mut out = Self::zero(sh);
        for (&mask, f) in &self.terms {
            let mut acc = Self::function(&sub.apply(f));
            for i in mask_axes(mask) {
                acc = acc.wedge(&dys[i as usize])?;
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Flat coordinates: index `mask · dim O + monomial`.
    pub fn to_sparse(&self) -> SparseVec {
        let dim = self.shape.dim() as u32;
        let mut out = Vec::new();
        for (&m, f) in &self.terms {
            for &(u, c) in f.terms() {
                out.push((m * dim + u, c));
            }
        }
        out
    }

    /// Some `u` with `self = u · other`, found from a unit coefficient of
    /// `other` and verified on every term.
    pub fn function_multiple(&self, other: &Self) -> Option<DpaElement> {
        if self.shape != other.shape {
            return None;
        }
        let (mask, g) = other.terms.iter().find(|(_, g)| g.is_unit())?;
        let f = self.terms.get(mask).cloned().unwrap_or_else(|| DpaElement::zero(&self.shape));
        let u = f.mul_unchecked(&g.invert().ok()?);
        let check = other.mul_function(&u).ok()?;
        if &check == self {
            Some(u)
        } else {
            None
        }
    }
}

/// `Some(Scalar(c))` if `ω1 = c·ω2` with `c ∈ F^×`, `Some(Unit(u))` if
/// `ω1 = u·ω2` with `u` a non-constant unit of `O(m; n)`, otherwise `None`.
pub fn proportional_to(w1: &DifferentialForm, w2: &DifferentialForm) -> Option<Factor> {
    let u = w1.function_multiple(w2)?;
    if !u.is_unit() {
        return None;
    }
    if u.terms().len() == 1 {
        Some(Factor::Scalar(u.constant_term()))
    } else {
        Some(Factor::Unit(u))
    }
}

/// The defining form of a kind: `ω_S`, `ω_H` or `ω_K`.
pub fn omega(kind: FormKind, shape: &Shape) -> Result<DifferentialForm> {
    let m = shape.m();
    let f = shape.field();
    match kind {
        FormKind::W => Err(Error::NoFormForW),
        FormKind::S => {
            if m < 3 {
                return Err(Error::KindConstraintViolation("the special algebra needs m >= 3"));
            }
            let axes: Vec<usize> = (1..=m).collect();
            DifferentialForm::term(&DpaElement::one(shape), &axes)
        }
        FormKind::H => {
            if !m.is_multiple_of(2) {
                return Err(Error::ParityMismatch);
            }
            let r = m / 2;
            let mut w = DifferentialForm::zero(shape);
            for i in 1..=r {
                w = w.add(&DifferentialForm::term(&DpaElement::one(shape), &[i, i + r])?)?;
            }
            Ok(w)
        }
        FormKind::K => {
            if m % 2 != 1 || m < 3 {
                return Err(Error::ParityMismatch);
            }
            let r = (m - 1) / 2;
            let mut w = DifferentialForm::dx(shape, m)?;
            for i in 1..=2 * r {
                let (ip, sigma) = if i <= r { (i + r, 1) } else { (i - r, -1) };
                let xi = DpaElement::var(shape, i)?.scale(f.from_i64(sigma));
                w = w.add(&DifferentialForm::term(&xi, &[ip])?)?;
            }
            Ok(w)
        }
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        for (idx, (&mask, f)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(out, " + ")?;
            }
            write!(out, "({f})")?;
            let axes = mask_axes(mask);
            if !axes.is_empty() {
                write!(out, " ")?;
                for (k, a) in axes.iter().enumerate() {
                    if k > 0 {
                        write!(out, "^")?;
                    }
                    write!(out, "dx{}", a + 1)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
