//! The truncated divided power algebra `O(m; n)`.
//!
//! Basis `x^(a)` for `0 <= a <= tau`, `tau_i = p^{n_i} - 1`, with
//! `x^(a) x^(b) = C(a+b, a) x^(a+b)`. Monomials are packed into a `u32` in
//! mixed radix with axis 1 most significant, so packed order is
//! lexicographic order on multi-indices.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{factorial_p_adic, Field, Scalar};
use crate::linalg::{axpy, SparseVec};

/// Largest supported `dim O(m; n)`.
pub const MAX_DPA_DIM: u64 = 1 << 20;

pub struct ShapeData {
    field: Field,
    n: Vec<u32>,
    tau: Vec<u32>,
    radix: Vec<u32>,
    stride: Vec<u32>,
    dim: u32,
}

/// The data `(F, m, n)` defining `O(m; n)` over `F`.
#[derive(Clone)]
pub struct Shape(Arc<ShapeData>);

impl PartialEq for Shape {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.n == other.0.n && self.0.field == other.0.field)
    }
}
impl Eq for Shape {}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({};{:?}) over {:?}", self.m(), self.0.n, self.0.field)
    }
}

/// A multi-index `a = (a_1, ..., a_m)`.
pub type MultiIndex = Vec<u32>;

impl Shape {
    pub fn new(field: &Field, n: &[u32]) -> Result<Shape> {
        if n.is_empty() {
            return Err(Error::InvalidShape("need at least one variable"));
        }
        if n.contains(&0) {
            return Err(Error::InvalidShape("every n_i must be positive"));
        }
        let p = field.characteristic() as u64;
        let mut dim: u64 = 1;
        let mut radix = Vec::with_capacity(n.len());
        for &ni in n {
            let r =
                p.checked_pow(ni).filter(|&r| r <= MAX_DPA_DIM).ok_or(Error::InvalidShape("dimension too large"))?;
            dim = dim.saturating_mul(r);
            radix.push(r as u32);
        }
        if dim > MAX_DPA_DIM {
            return Err(Error::InvalidShape("dimension too large"));
        }
        let m = n.len();
        let mut stride = vec![1u32; m];
        for i in (0..m - 1).rev() {
            stride[i] = stride[i + 1] * radix[i + 1];
        }
        let tau = radix.iter().map(|r| r - 1).collect();
        Ok(Shape(Arc::new(ShapeData { field: field.clone(), n: n.to_vec(), tau, radix, stride, dim: dim as u32 })))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn m(&self) -> usize {
        self.0.n.len()
    }

    pub fn n(&self) -> &[u32] {
        &self.0.n
    }

    pub fn tau(&self) -> &[u32] {
        &self.0.tau
    }

    pub fn dim(&self) -> usize {
        self.0.dim as usize
    }

    /// Same `n` over another field.
    pub fn with_field(&self, field: &Field) -> Shape {
        Shape::new(field, &self.0.n).expect("shape already validated")
    }

    /// The shape on the first `k` variables.
    pub fn truncated(&self, k: usize) -> Result<Shape> {
        Shape::new(&self.0.field, &self.0.n[..k])
    }

    pub fn pack(&self, a: &[u32]) -> Result<u32> {
        if a.len() != self.m() {
            return Err(Error::IndexOutOfRange);
        }
        let mut v = 0u32;
        for i in 0..a.len() {
            if a[i] > self.0.tau[i] {
                return Err(Error::IndexOutOfRange);
            }
            v += a[i] * self.0.stride[i];
        }
        Ok(v)
    }

    pub fn unpack(&self, u: u32) -> MultiIndex {
        (0..self.m()).map(|i| self.digit(u, i)).collect()
    }

    /// `a_i` of the packed monomial `u` (0-based axis).
    #[inline]
    pub fn digit(&self, u: u32, i: usize) -> u32 {
        (u / self.0.stride[i]) % self.0.radix[i]
    }

    #[inline]
    pub fn stride(&self, i: usize) -> u32 {
        self.0.stride[i]
    }

    pub fn eps(&self, i: usize) -> u32 {
        self.0.stride[i]
    }

    pub fn total_degree(&self, u: u32) -> u32 {
        (0..self.m()).map(|i| self.digit(u, i)).sum()
    }

    /// Packed `u + v` if within range, with the structure constant `C(u+v, u)`.
    /// Returns `None` when the product vanishes.
    #[inline]
    pub fn mono_mul(&self, u: u32, v: u32) -> Option<(u32, Scalar)> {
        let f = &self.0.field;
        let mut c = Scalar::ONE;
        for i in 0..self.m() {
            let a = self.digit(u, i);
            let b = self.digit(v, i);
            if a + b > self.0.tau[i] {
                return None;
            }
            if a != 0 && b != 0 {
                let bc = f.binom(a + b, a);
                if bc.is_zero() {
                    return None;
                }
                c = f.mul(c, bc);
            }
        }
        Some((u + v, c))
    }

    /// Packed `u - eps_i`, or `None` if `a_i = 0`.
    #[inline]
    pub fn lower(&self, u: u32, i: usize) -> Option<u32> {
        if self.digit(u, i) == 0 {
            None
        } else {
            Some(u - self.0.stride[i])
        }
    }

    /// Packed `u + eps_i`, or `None` if out of range.
    #[inline]
    pub fn raise(&self, u: u32, i: usize) -> Option<u32> {
        if self.digit(u, i) == self.0.tau[i] {
            None
        } else {
            Some(u + self.0.stride[i])
        }
    }

    pub fn monomials(&self) -> core::ops::Range<u32> {
        0..self.0.dim
    }

    /// Whether `u <= v` componentwise.
    pub fn divides(&self, u: u32, v: u32) -> bool {
        (0..self.m()).all(|i| self.digit(u, i) <= self.digit(v, i))
    }

    pub fn check_axis(&self, axis: usize) -> Result<()> {
        if axis == 0 || axis > self.m() {
            Err(Error::AxisOutOfRange { axis, m: self.m() })
        } else {
            Ok(())
        }
    }
}

/// An element of `O(m; n)`: sorted sparse list of `(packed monomial, coefficient)`.
#[derive(Clone, PartialEq, Eq)]
pub struct DpaElement {
    shape: Shape,
    terms: SparseVec,
}

impl fmt::Debug for DpaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl DpaElement {
    pub fn zero(shape: &Shape) -> Self {
        DpaElement { shape: shape.clone(), terms: Vec::new() }
    }

    pub fn one(shape: &Shape) -> Self {
        Self::constant(shape, Scalar::ONE)
    }

    pub fn constant(shape: &Shape, c: Scalar) -> Self {
        Self::from_packed_unchecked(shape, if c.is_zero() { vec![] } else { vec![(0, c)] })
    }

    /// `c · x^(a)`.
    pub fn monomial(shape: &Shape, a: &[u32], c: Scalar) -> Result<Self> {
        let u = shape.pack(a)?;
        Ok(Self::from_packed_unchecked(shape, if c.is_zero() { vec![] } else { vec![(u, c)] }))
    }

    /// The variable `x_i` (1-based axis).
    pub fn var(shape: &Shape, i: usize) -> Result<Self> {
        shape.check_axis(i)?;
        Ok(Self::from_packed_unchecked(shape, vec![(shape.eps(i - 1), Scalar::ONE)]))
    }

    /// Builds from arbitrary `(packed, coeff)` pairs, summing duplicates.
    pub fn from_packed(shape: &Shape, terms: impl IntoIterator<Item = (u32, Scalar)>) -> Result<Self> {
        let f = shape.field();
        let mut acc: BTreeMap<u32, Scalar> = BTreeMap::new();
        for (u, c) in terms {
            if u >= shape.dim() as u32 {
                return Err(Error::IndexOutOfRange);
            }
            let e = acc.entry(u).or_insert(Scalar::ZERO);
            *e = f.add(*e, c);
        }
        Ok(Self::from_packed_unchecked(shape, acc.into_iter().filter(|x| !x.1.is_zero()).collect()))
    }

    /// Terms must be sorted, in range and nonzero.
    pub fn from_packed_unchecked(shape: &Shape, terms: SparseVec) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        DpaElement { shape: shape.clone(), terms }
    }

    pub fn from_terms(shape: &Shape, terms: &[(MultiIndex, Scalar)]) -> Result<Self> {
        let mut packed = Vec::with_capacity(terms.len());
        for (a, c) in terms {
            packed.push((shape.pack(a)?, *c));
        }
        Self::from_packed(shape, packed)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn field(&self) -> &Field {
        self.shape.field()
    }

    pub fn terms(&self) -> &[(u32, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> SparseVec {
        self.terms
    }

    /// Terms with unpacked multi-indices.
    pub fn multi_terms(&self) -> Vec<(MultiIndex, Scalar)> {
        self.terms.iter().map(|&(u, c)| (self.shape.unpack(u), c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff_packed(&self, u: u32) -> Scalar {
        match self.terms.binary_search_by_key(&u, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => Scalar::ZERO,
        }
    }

    pub fn coeff(&self, a: &[u32]) -> Scalar {
        match self.shape.pack(a) {
            Ok(u) => self.coeff_packed(u),
            Err(_) => Scalar::ZERO,
        }
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff_packed(0)
    }

    /// Smallest total degree among the terms.
    pub fn order(&self) -> Option<u32> {
        self.terms.iter().map(|t| self.shape.total_degree(t.0)).min()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.shape == other.shape {
            Ok(())
        } else if self.shape.n() == other.shape.n() {
            Err(Error::ContextMismatch)
        } else {
            Err(Error::ShapeMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.add_unchecked(Scalar::ONE, other))
    }

    /// `self + c·other` (shapes assumed equal).
    pub fn add_unchecked(&self, c: Scalar, other: &Self) -> Self {
        DpaElement { shape: self.shape.clone(), terms: axpy(self.field(), &self.terms, c, &other.terms) }
    }

    pub fn scale(&self, c: Scalar) -> Self {
        let f = self.field();
        if c.is_zero() {
            return Self::zero(&self.shape);
        }
        DpaElement { shape: self.shape.clone(), terms: self.terms.iter().map(|&(u, x)| (u, f.mul(c, x))).collect() }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let f = self.field();
        let sh = &self.shape;
        if self.terms.len() == 1 && self.terms[0].0 == 0 {
            return other.scale(self.terms[0].1);
        }
        if other.terms.len() == 1 && other.terms[0].0 == 0 {
            return self.scale(other.terms[0].1);
        }
        let mut acc: BTreeMap<u32, Scalar> = BTreeMap::new();
        for &(u, a) in &self.terms {
            for &(v, b) in &other.terms {
                if let Some((w, c)) = sh.mono_mul(u, v) {
                    let e = acc.entry(w).or_insert(Scalar::ZERO);
                    *e = f.add(*e, f.mul(c, f.mul(a, b)));
                }
            }
        }
        DpaElement { shape: sh.clone(), terms: acc.into_iter().filter(|x| !x.1.is_zero()).collect() }
    }

    /// `∂_i` for the 1-based axis `i`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        self.shape.check_axis(i)?;
        Ok(self.partial0(i - 1))
    }

    pub(crate) fn partial0(&self, i: usize) -> Self {
        let sh = &self.shape;
        let terms = self.terms.iter().filter_map(|&(u, c)| sh.lower(u, i).map(|v| (v, c))).collect();
        DpaElement { shape: sh.clone(), terms }
    }

    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    pub fn invert(&self) -> Result<Self> {
        let f = self.field();
        let c = f.inv(self.constant_term()).ok_or(Error::NotAUnit)?;
        // self = c^{-1}(1 + n), n nilpotent; inverse = c Σ (-n)^k
        let normalized = self.scale(c);
        let mut neg_n = normalized.scale(f.from_i64(-1));
        neg_n.terms.retain(|t| t.0 != 0);
        let mut sum = Self::one(&self.shape);
        let mut pw = Self::one(&self.shape);
        loop {
            pw = pw.mul_unchecked(&neg_n);
            if pw.is_zero() {
                break;
            }
            sum = sum.add_unchecked(Scalar::ONE, &pw);
        }
        Ok(sum.scale(c))
    }

    /// `self^(q)`, the `q`-th divided power.
    pub fn divided_power(&self, q: u32) -> Result<Self> {
        Ok(self.divided_powers_upto(q)?.pop().unwrap())
    }

    /// `[self^(0), self^(1), …, self^(qmax)]`.
    pub fn divided_powers_upto(&self, qmax: u32) -> Result<Vec<Self>> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let sh = &self.shape;
        let q = qmax as usize;
        let mut acc: Vec<Self> = vec![Self::zero(sh); q + 1];
        acc[0] = Self::one(sh);
        // (y + z)^(k) = Σ_j y^(j) z^(k-j), one term at a time
        for &(u, c) in &self.terms {
            let powers = monomial_divided_powers(sh, u, c, qmax);
            let mut next: Vec<Self> = vec![Self::zero(sh); q + 1];
            for k in 0..=q {
                let mut s = Self::zero(sh);
                for (j, pj) in powers.iter().enumerate().take(k + 1) {
                    if pj.is_zero() || acc[k - j].is_zero() {
                        continue;
                    }
                    s = s.add_unchecked(Scalar::ONE, &pj.mul_unchecked(&acc[k - j]));
                }
                next[k] = s;
            }
            acc = next;
        }
        Ok(acc)
    }
}

/// `(c x^(a))^(j)` for `j = 0..=qmax`.
fn monomial_divided_powers(sh: &Shape, u: u32, c: Scalar, qmax: u32) -> Vec<DpaElement> {
    let f = sh.field();
    let p = f.characteristic();
    let a = sh.unpack(u);
    let mut out = Vec::with_capacity(qmax as usize + 1);
    out.push(DpaElement::one(sh));
    let (va, ua): (Vec<u64>, Vec<u32>) = a.iter().map(|&ai| factorial_p_adic(ai as u64, p)).unzip();
    for j in 1..=qmax {
        // (x^(a))^(j) = [Π_i (j a_i)! / (a_i!)^j] / j! · x^(ja)
        let ja: Option<Vec<u32>> =
            a.iter().zip(sh.tau()).map(|(&ai, &ti)| if ai * j <= ti { Some(ai * j) } else { None }).collect();
        let Some(ja) = ja else {
            out.push(DpaElement::zero(sh));
            continue;
        };
        let (vj, uj) = factorial_p_adic(j as u64, p);
        let mut val: i64 = -(vj as i64);
        let mut num = f.one();
        let mut den = f.from_i64(uj as i64);
        for i in 0..a.len() {
            let (vn, un) = factorial_p_adic(ja[i] as u64, p);
            val += vn as i64 - (j as i64) * va[i] as i64;
            num = f.mul(num, f.from_i64(un as i64));
            den = f.mul(den, f.pow(f.from_i64(ua[i] as i64), j as i64));
        }
        debug_assert!(val >= 0);
        if val > 0 {
            out.push(DpaElement::zero(sh));
            continue;
        }
        let coeff = f.mul(f.div(num, den).unwrap(), f.pow(c, j as i64));
        let w = sh.pack(&ja).unwrap();
        out.push(DpaElement::from_packed_unchecked(sh, if coeff.is_zero() { vec![] } else { vec![(w, coeff)] }));
    }
    out
}

impl fmt::Display for DpaElement {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let f = self.field();
        for (idx, &(u, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(out, " + ")?;
            }
            if f.degree() == 1 {
                write!(out, "{}", c.packed())?;
            } else {
                write!(out, "{:?}", f.coeffs(c))?;
            }
            write!(out, "*x^(")?;
            for (i, d) in self.shape.unpack(u).iter().enumerate() {
                if i > 0 {
                    write!(out, ",")?;
                }
                write!(out, "{d}")?;
            }
            write!(out, ")")?;
        }
        Ok(())
    }
}

// Operator sugar panics on mismatched shapes; use the `try_*`/`multiply`
// methods for fallible arithmetic.
impl Add for &DpaElement {
    type Output = DpaElement;
    fn add(self, rhs: &DpaElement) -> DpaElement {
        self.try_add(rhs).expect("shape mismatch in DpaElement addition")
    }
}

impl Sub for &DpaElement {
    type Output = DpaElement;
    fn sub(self, rhs: &DpaElement) -> DpaElement {
        self.check_same(rhs).expect("shape mismatch in DpaElement subtraction");
        self.add_unchecked(self.field().from_i64(-1), rhs)
    }
}

impl Mul for &DpaElement {
    type Output = DpaElement;
    fn mul(self, rhs: &DpaElement) -> DpaElement {
        self.multiply(rhs).expect("shape mismatch in DpaElement multiplication")
    }
}

impl Neg for &DpaElement {
    type Output = DpaElement;
    fn neg(self) -> DpaElement {
        self.scale(self.field().from_i64(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn shape(p: u32, n: &[u32]) -> Shape {
        Shape::new(&Field::prime(p).unwrap(), n).unwrap()
    }

    fn mono(sh: &Shape, a: &[u32], c: i64) -> DpaElement {
        DpaElement::monomial(sh, a, sh.field().from_i64(c)).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let s2 = shape(5, &[2]);
        assert_eq!(&mono(&s2, &[1], 1) * &mono(&s2, &[1], 1), mono(&s2, &[2], 2));
        let s1 = shape(5, &[1]);
        assert!((&mono(&s1, &[4], 1) * &mono(&s1, &[1], 1)).is_zero());
        assert!((&mono(&s2, &[4], 1) * &mono(&s2, &[1], 1)).is_zero());
        let other = shape(5, &[1, 1]);
        assert_eq!(mono(&s1, &[1], 1).multiply(&mono(&other, &[1, 0], 1)), Err(Error::ShapeMismatch));
    }

    #[test]
    fn partial_examples() {
        let sh = shape(5, &[1, 1]);
        assert_eq!(mono(&sh, &[2, 0], 1).partial(1).unwrap(), mono(&sh, &[1, 0], 1));
        assert!(mono(&sh, &[1, 0], 1).partial(2).unwrap().is_zero());
        let x1x2 = &mono(&sh, &[1, 0], 1) * &mono(&sh, &[0, 1], 1);
        assert_eq!(x1x2, mono(&sh, &[1, 1], 1));
        assert_eq!(x1x2.partial(1).unwrap(), mono(&sh, &[0, 1], 1));
        assert_eq!(x1x2.partial(3), Err(Error::AxisOutOfRange { axis: 3, m: 2 }));
    }

    #[test]
    fn dimension_count() {
        for (p, n) in [(3u32, vec![1u32, 2]), (5, vec![1, 1, 1]), (7, vec![2])] {
            let sh = shape(p, &n);
            let total: u32 = n.iter().sum();
            assert_eq!(sh.monomials().count() as u64, (p as u64).pow(total));
        }
    }

    // q! y^(q) = y^q for q < p
    fn power_oracle(y: &DpaElement, q: u32) -> DpaElement {
        let mut acc = DpaElement::one(y.shape());
        for _ in 0..q {
            acc = &acc * y;
        }
        acc
    }

    #[test]
    fn divided_power_of_square_monomial() {
        let sh = shape(5, &[1]);
        let y = mono(&sh, &[2], 1);
        let d = y.divided_power(2).unwrap();
        // oracle: 2! y^(2) = y^2
        assert_eq!(d.scale(sh.field().from_i64(2)), power_oracle(&y, 2));
        assert_eq!(d, mono(&sh, &[4], 3));
    }

    #[test]
    fn divided_power_of_variable() {
        let sh = shape(5, &[2]);
        let x = mono(&sh, &[1], 1);
        for q in 0..=24 {
            assert_eq!(x.divided_power(q).unwrap(), mono(&sh, &[q], 1));
        }
        assert!(x.divided_power(25).unwrap().is_zero());
        assert_eq!(DpaElement::one(&sh).divided_power(2), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn unit_inverse() {
        let sh = shape(5, &[2]);
        let u = &DpaElement::one(&sh) + &mono(&sh, &[1], 1);
        assert!(u.is_unit());
        let inv = u.invert().unwrap();
        assert_eq!(inv.constant_term(), Scalar::ONE);
        assert_eq!(&u * &inv, DpaElement::one(&sh));
        assert!(!mono(&sh, &[1], 1).is_unit());
        assert_eq!(mono(&sh, &[1], 1).invert(), Err(Error::NotAUnit));
    }

    fn arb_elem(p: u32, n: Vec<u32>, zero_const: bool) -> impl Strategy<Value = DpaElement> {
        let sh = shape(p, &n);
        let dim = sh.dim() as u32;
        proptest::collection::vec((0..dim, 0..p as i64), 0..6).prop_map(move |ts| {
            let f = sh.field().clone();
            let ts = ts.into_iter().filter(|t| !(zero_const && t.0 == 0)).map(|(u, c)| (u, f.from_i64(c)));
            DpaElement::from_packed(&sh, ts).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_elem(5, vec![1, 2], false), b in arb_elem(5, vec![1, 2], false), c in arb_elem(5, vec![1, 2], false)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn leibniz_and_commuting_partials(a in arb_elem(3, vec![2, 1], false), b in arb_elem(3, vec![2, 1], false)) {
            for i in 1..=2 {
                let lhs = (&a * &b).partial(i).unwrap();
                let rhs = &(&a.partial(i).unwrap() * &b) + &(&a * &b.partial(i).unwrap());
                prop_assert_eq!(lhs, rhs);
            }
            prop_assert_eq!(a.partial(1).unwrap().partial(2).unwrap(), a.partial(2).unwrap().partial(1).unwrap());
        }

        #[test]
        fn divided_power_axioms(y in arb_elem(5, vec![1, 1], true), z in arb_elem(5, vec![1, 1], true), c in 1i64..5) {
            let f = y.field().clone();
            let yp = y.divided_powers_upto(8).unwrap();
            let zp = z.divided_powers_upto(8).unwrap();
            let sum = (&y + &z).divided_powers_upto(8).unwrap();
            for q in 0..=4u32 {
                // q! y^(q) = y^q
                let (_, fact) = factorial_p_adic(q as u64, 5);
                prop_assert_eq!(yp[q as usize].scale(f.from_i64(fact as i64)), power_oracle(&y, q));
                for s in 0..=4u32 {
                    let lhs = &yp[q as usize] * &yp[s as usize];
                    let rhs = yp[(q + s) as usize].scale(f.binom(q + s, q));
                    prop_assert_eq!(lhs, rhs);
                }
            }
            for q in 0..=8usize {
                let mut rhs = DpaElement::zero(y.shape());
                for i in 0..=q {
                    rhs = &rhs + &(&yp[i] * &zp[q - i]);
                }
                prop_assert_eq!(&sum[q], &rhs);
                let scaled = y.scale(f.from_i64(c)).divided_power(q as u32).unwrap();
                prop_assert_eq!(scaled, yp[q].scale(f.pow(f.from_i64(c), q as i64)));
            }
        }
    }
}
