//! Continuous automorphisms of `O(m; n)`, their action on `W(m; n)` by
//! conjugation, the standard tori and the flag of `n`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use crate::dpa::{DpaElement, MultiIndex, Shape};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::forms::{omega, proportional_to, Factor};
use crate::liealg::{check_form_kind, lattice_weight, Derivation, FormKind, SignConvention};
use crate::linalg::{Matrix, SparseVec};

/// A continuous automorphism `x_i ↦ y_i` of `O(m; n)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ContAut {
    shape: Shape,
    tuple: Vec<DpaElement>,
}

impl fmt::Debug for ContAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ContAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, y) in self.tuple.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "x{} -> {}", i + 1, y)?;
        }
        Ok(())
    }
}

impl ContAut {
    /// Validated constructor: zero constant terms, invertible linear part and
    /// the flag condition `α_i(p^l ε_j) = 0` whenever `n_i + l > n_j`.
    pub fn new(shape: &Shape, tuple: Vec<DpaElement>) -> Result<ContAut> {
        if tuple.len() != shape.m() {
            return Err(Error::InvalidAutomorphism("tuple length must equal m"));
        }
        if tuple.iter().any(|y| y.shape() != shape) {
            return Err(Error::ShapeMismatch);
        }
        if tuple.iter().any(|y| !y.constant_term().is_zero()) {
            return Err(Error::InvalidAutomorphism("images must have zero constant term"));
        }
        let psi = ContAut { shape: shape.clone(), tuple };
        if psi.linear_part().inverse(shape.field()).is_none() {
            return Err(Error::InvalidAutomorphism("Jacobian is not invertible"));
        }
        let p = shape.field().characteristic();
        let n = shape.n();
        for (i, y) in psi.tuple.iter().enumerate() {
            for &(u, c) in y.terms() {
                if c.is_zero() {
                    continue;
                }
                let a = shape.unpack(u);
                let nz: Vec<usize> = (0..a.len()).filter(|&k| a[k] != 0).collect();
                if nz.len() != 1 {
                    continue;
                }
                let j = nz[0];
                let mut v = a[j];
                let mut l = 0;
                while v.is_multiple_of(p) {
                    v /= p;
                    l += 1;
                }
                if v == 1 && n[i] + l > n[j] {
                    return Err(Error::InvalidAutomorphism("flag condition violated"));
                }
            }
        }
        Ok(psi)
    }

    pub fn new_unchecked(shape: &Shape, tuple: Vec<DpaElement>) -> ContAut {
        ContAut { shape: shape.clone(), tuple }
    }

    pub fn identity(shape: &Shape) -> ContAut {
        let tuple = (1..=shape.m()).map(|i| DpaElement::var(shape, i).unwrap()).collect();
        ContAut { shape: shape.clone(), tuple }
    }

    /// `λ(t)`: `x_i ↦ t_i x_i`.
    pub fn diagonal(shape: &Shape, t: &[Scalar]) -> Result<ContAut> {
        if t.len() != shape.m() {
            return Err(Error::InvalidAutomorphism("tuple length must equal m"));
        }
        if t.iter().any(|x| x.is_zero()) {
            return Err(Error::InvalidAutomorphism("torus entries must be nonzero"));
        }
        let tuple = t.iter().enumerate().map(|(i, &c)| DpaElement::var(shape, i + 1).unwrap().scale(c)).collect();
        Ok(ContAut { shape: shape.clone(), tuple })
    }

    /// `x_i ↦ Σ_j a[i][j] x_j`.
    pub fn linear(shape: &Shape, a: &Matrix) -> Result<ContAut> {
        let m = shape.m();
        if a.rows != m || a.cols != m {
            return Err(Error::InvalidAutomorphism("matrix must be m x m"));
        }
        let tuple = (0..m)
            .map(|i| {
                let terms: Vec<(u32, Scalar)> =
                    (0..m).filter(|&j| !a.get(i, j).is_zero()).map(|j| (shape.eps(j), a.get(i, j))).collect();
                DpaElement::from_packed(shape, terms).unwrap()
            })
            .collect();
        ContAut::new(shape, tuple)
    }

    /// `x_i ↦ α_i x_{j_i}` with 1-based targets `j`.
    pub fn monomial(shape: &Shape, targets: &[usize], coeffs: &[Scalar]) -> Result<ContAut> {
        let m = shape.m();
        if targets.len() != m || coeffs.len() != m {
            return Err(Error::InvalidAutomorphism("tuple length must equal m"));
        }
        let mut a = Matrix::zero(m, m);
        for i in 0..m {
            shape.check_axis(targets[i])?;
            a.set(i, targets[i] - 1, coeffs[i]);
        }
        ContAut::linear(shape, &a)
    }

    /// The same substitution over the target field of `emb`; `shape` must be
    /// the lifted shape.
    pub fn lift(&self, emb: &crate::field::FieldEmbedding, shape: &Shape) -> ContAut {
        let tuple = self
            .tuple
            .iter()
            .map(|y| {
                DpaElement::from_packed_unchecked(shape, y.terms().iter().map(|&(u, c)| (u, emb.map(c))).collect())
            })
            .collect();
        ContAut { shape: shape.clone(), tuple }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn tuple(&self) -> &[DpaElement] {
        &self.tuple
    }

    pub fn is_identity(&self) -> bool {
        *self == ContAut::identity(&self.shape)
    }

    /// `a[i][j]` = coefficient of `x_j` in `ψ(x_i)`.
    pub fn linear_part(&self) -> Matrix {
        let m = self.shape.m();
        let mut a = Matrix::zero(m, m);
        for (i, y) in self.tuple.iter().enumerate() {
            for j in 0..m {
                a.set(i, j, y.coeff_packed(self.shape.eps(j)));
            }
        }
        a
    }

    /// Whether every `ψ(x_i)` is linear.
    pub fn is_linear(&self) -> bool {
        self.tuple.iter().all(|y| y.terms().iter().all(|&(u, _)| self.shape.total_degree(u) == 1))
    }

    pub fn substitution(&self) -> Substitution {
        Substitution::new(self)
    }

    pub fn act_on_dpa(&self, f: &DpaElement) -> Result<DpaElement> {
        if f.shape() != &self.shape {
            return Err(Error::ShapeMismatch);
        }
        Ok(self.substitution().apply(f))
    }

    /// `ψ ∘ φ`: `x_i ↦ ψ(φ(x_i))`.
    pub fn compose(&self, other: &ContAut) -> Result<ContAut> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch);
        }
        let sub = self.substitution();
        Ok(ContAut { shape: self.shape.clone(), tuple: other.tuple.iter().map(|y| sub.apply(y)).collect() })
    }

    /// Inverse by iterated correction: starting from the inverse linear part,
    /// `φ ← φ ∘ (x - e)` where `ψ ∘ φ = x + e`, until `e = 0`.
    pub fn inverse(&self) -> Result<ContAut> {
        let sh = &self.shape;
        let f = sh.field();
        let ainv = self.linear_part().inverse(f).ok_or(Error::InvalidAutomorphism("Jacobian is not invertible"))?;
        let mut phi = ContAut::linear(sh, &ainv).map_err(|_| Error::InvalidAutomorphism("inverse linear part"))?;
        if self.is_linear() {
            return Ok(phi);
        }
        let bound = sh.tau().iter().sum::<u32>() + 2;
        let minus = f.from_i64(-1);
        for _ in 0..bound {
            let comp = self.compose(&phi)?;
            let err: Vec<DpaElement> = comp
                .tuple
                .iter()
                .enumerate()
                .map(|(i, z)| z.add_unchecked(minus, &DpaElement::var(sh, i + 1).unwrap()))
                .collect();
            if err.iter().all(|e| e.is_zero()) {
                return Ok(phi);
            }
            let chi = ContAut {
                shape: sh.clone(),
                tuple: err
                    .iter()
                    .enumerate()
                    .map(|(i, e)| DpaElement::var(sh, i + 1).unwrap().add_unchecked(minus, e))
                    .collect(),
            };
            phi = phi.compose(&chi)?;
        }
        Err(Error::InvalidAutomorphism("inverse did not converge"))
    }

    pub fn pow(&self, k: u64) -> ContAut {
        let mut acc = ContAut::identity(&self.shape);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base).unwrap();
            }
            base = base.compose(&base).unwrap();
            k >>= 1;
        }
        acc
    }

    /// Multiplicative order if it is at most `limit`.
    pub fn order(&self, limit: u64) -> Option<u64> {
        let id = ContAut::identity(&self.shape);
        let mut cur = self.clone();
        for k in 1..=limit {
            if cur == id {
                return Some(k);
            }
            cur = cur.compose(self).unwrap();
        }
        None
    }

    pub fn commutes_with(&self, other: &ContAut) -> Result<bool> {
        Ok(self.compose(other)? == other.compose(self)?)
    }

    /// `Φ(ψ)(D) = ψ ∘ D ∘ ψ^{-1}`.
    pub fn phi_conjugate(&self, d: &Derivation) -> Result<Derivation> {
        if d.shape() != &self.shape {
            return Err(Error::ShapeMismatch);
        }
        Ok(Conjugation::new(self)?.apply(d))
    }

    /// Membership in the automorphism group of the kind's form.
    pub fn in_aut_group(&self, kind: FormKind) -> Result<bool> {
        check_form_kind(kind, self.shape.m())?;
        if kind == FormKind::W {
            return Ok(true);
        }
        let w = omega(kind, &self.shape)?;
        let img = w.pullback(self)?;
        Ok(matches!(
            (kind, proportional_to(&img, &w)),
            (_, Some(Factor::Scalar(_))) | (FormKind::K, Some(Factor::Unit(_)))
        ))
    }

    /// `c` with `ψ(ω) = c ω`, for S and H.
    pub fn form_multiplier(&self, kind: FormKind) -> Option<Scalar> {
        let w = omega(kind, &self.shape).ok()?;
        match proportional_to(&w.pullback(self).ok()?, &w)? {
            Factor::Scalar(c) => Some(c),
            Factor::Unit(_) => None,
        }
    }

    /// `u` with `ψ(ω_K) = u ω_K`.
    pub fn contact_multiplier(&self) -> Option<DpaElement> {
        let w = omega(FormKind::K, &self.shape).ok()?;
        let u = w.pullback(self).ok()?.function_multiple(&w)?;
        u.is_unit().then_some(u)
    }

    /// `ψ(x_i) = α_i x_{j_i}` for a permutation `j` respecting the flag.
    pub fn is_monomial(&self) -> bool {
        self.monomial_data().is_some()
    }

    /// `(j_i 1-based, α_i)` when monomial.
    pub fn monomial_data(&self) -> Option<(Vec<usize>, Vec<Scalar>)> {
        let sh = &self.shape;
        let mut targets = Vec::with_capacity(sh.m());
        let mut coeffs = Vec::with_capacity(sh.m());
        for (i, y) in self.tuple.iter().enumerate() {
            if y.terms().len() != 1 {
                return None;
            }
            let (u, c) = y.terms()[0];
            let a = sh.unpack(u);
            if a.iter().sum::<u32>() != 1 {
                return None;
            }
            let j = a.iter().position(|&x| x == 1).unwrap();
            if sh.n()[j] != sh.n()[i] {
                return None;
            }
            targets.push(j + 1);
            coeffs.push(c);
        }
        let mut seen = vec![false; sh.m()];
        for &j in &targets {
            if seen[j - 1] {
                return None;
            }
            seen[j - 1] = true;
        }
        Some((targets, coeffs))
    }

    /// Whether `ψ λ(t) ψ^{-1}` stays in the standard torus of the kind for
    /// every admissible `t`.
    ///
    /// Each `ψ(x_i)` must be a weight vector of the torus, of the weight of
    /// some `x_{j_i}`, and `i ↦ j_i` must carry admissible tuples to
    /// admissible tuples.
    pub fn normalizes_torus(&self, kind: FormKind) -> bool {
        let sh = &self.shape;
        let m = sh.m();
        if check_form_kind(kind, m).is_err() {
            return false;
        }
        let a = self.linear_part();
        let mut targets = Vec::with_capacity(m);
        for (i, y) in self.tuple.iter().enumerate() {
            let lin: Vec<usize> = (0..m).filter(|&j| !a.get(i, j).is_zero()).collect();
            if lin.len() != 1 {
                return false;
            }
            let j = lin[0];
            let target = lattice_weight(kind, &unit_vec(m, j));
            for &(u, _) in y.terms() {
                let b: Vec<i64> = sh.unpack(u).iter().map(|&x| x as i64).collect();
                if lattice_weight(kind, &b) != target {
                    return false;
                }
            }
            targets.push(j);
        }
        let mut seen = vec![false; m];
        for &j in &targets {
            if seen[j] {
                return false;
            }
            seen[j] = true;
        }
        match kind {
            FormKind::W | FormKind::S => true,
            FormKind::H | FormKind::K => {
                let r = m / 2;
                let sc = SignConvention { r };
                if kind == FormKind::K && targets[m - 1] != m - 1 {
                    return false;
                }
                (1..=r).all(|i| {
                    let a = targets[i - 1] + 1;
                    let b = targets[sc.prime(i).unwrap() - 1] + 1;
                    sc.prime(a) == Some(b)
                })
            }
        }
    }

    /// The diagonal entries if `ψ = λ(t)`.
    pub fn as_diagonal(&self) -> Option<Vec<Scalar>> {
        let (targets, coeffs) = self.monomial_data()?;
        targets.iter().enumerate().all(|(i, &j)| j == i + 1).then_some(coeffs)
    }
}

fn unit_vec(m: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0i64; m];
    v[j] = 1;
    v
}

/// Cached divided powers `ψ(x_i)^(q)` for evaluating `ψ` on `O(m; n)`.
pub struct Substitution {
    shape: Shape,
    powers: Vec<Vec<DpaElement>>,
    /// Images of monomials `x^(a)`, keyed by packed index.
    memo: RefCell<BTreeMap<u32, DpaElement>>,
}

impl Substitution {
    pub fn new(psi: &ContAut) -> Substitution {
        let sh = psi.shape();
        let powers = psi
            .tuple()
            .iter()
            .zip(sh.tau())
            .map(|(y, &t)| y.divided_powers_upto(t).expect("automorphism images have zero constant term"))
            .collect();
        Substitution { shape: sh.clone(), powers, memo: RefCell::new(BTreeMap::new()) }
    }

    /// Fills the memo for `u`: `ψ(x^(a)) = ψ(x^(a - a_k ε_k)) · ψ(x_k)^(a_k)`
    /// with `k` the last axis where `a_k ≠ 0`.
    fn ensure(&self, u: u32) {
        if self.memo.borrow().contains_key(&u) {
            return;
        }
        let sh = &self.shape;
        let val = match (0..sh.m()).rev().find(|&i| sh.digit(u, i) != 0) {
            None => DpaElement::one(sh),
            Some(i) => {
                let d = sh.digit(u, i);
                let head = u - d * sh.stride(i);
                self.ensure(head);
                let memo = self.memo.borrow();
                memo[&head].mul_unchecked(&self.powers[i][d as usize])
            }
        };
        self.memo.borrow_mut().insert(u, val);
    }

    /// `x^(a) ↦ Π_i ψ(x_i)^(a_i)`, extended linearly.
    pub fn apply(&self, f: &DpaElement) -> DpaElement {
        for &(u, _) in f.terms() {
            self.ensure(u);
        }
        let memo = self.memo.borrow();
        let mut acc = DpaElement::zero(&self.shape);
        for &(u, c) in f.terms() {
            acc = acc.add_unchecked(c, &memo[&u]);
        }
        acc
    }
}

/// Reusable `Φ(ψ)`: caches `ψ`, `ψ^{-1}` and the images of the monomial
/// derivations `x^(a) ∂_i` met so far.
pub struct Conjugation {
    shape: Shape,
    forward: Substitution,
    inverse_tuple: Vec<DpaElement>,
    memo: RefCell<BTreeMap<u32, SparseVec>>,
}

impl Conjugation {
    pub fn new(psi: &ContAut) -> Result<Conjugation> {
        check_phi_supported(psi.shape())?;
        let inv = psi.inverse()?;
        Ok(Conjugation {
            shape: psi.shape().clone(),
            forward: psi.substitution(),
            inverse_tuple: inv.tuple,
            memo: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn apply(&self, d: &Derivation) -> Derivation {
        let comps = self.inverse_tuple.iter().map(|w| self.forward.apply(&d.apply_unchecked(w))).collect();
        Derivation::from_components(comps).expect("same shape")
    }

    pub fn apply_coords(&self, v: &[(u32, Scalar)]) -> SparseVec {
        let f = self.shape.field();
        for &(k, _) in v {
            if !self.memo.borrow().contains_key(&k) {
                let img = self.apply(&Derivation::from_coords(&self.shape, &[(k, Scalar::ONE)])).to_coords();
                self.memo.borrow_mut().insert(k, img);
            }
        }
        let memo = self.memo.borrow();
        let mut acc = Vec::new();
        for &(k, c) in v {
            acc = crate::linalg::axpy(f, &acc, c, &memo[&k]);
        }
        acc
    }
}

/// `Φ` is only an isomorphism onto `Aut W` outside `(m; n) = (1; 1)` at `p = 3`.
pub fn check_phi_supported(shape: &Shape) -> Result<()> {
    if shape.field().characteristic() == 3 && shape.m() == 1 && shape.n() == [1] {
        return Err(Error::ExcludedConfiguration("W(1;1) in characteristic 3"));
    }
    Ok(())
}

/// Whether `t` is admissible for the kind's torus.
pub fn is_admissible(f: &crate::field::Field, kind: FormKind, t: &[Scalar]) -> bool {
    if t.iter().any(|x| x.is_zero()) {
        return false;
    }
    match kind {
        FormKind::W | FormKind::S => true,
        FormKind::H | FormKind::K => {
            let r = t.len() / 2;
            let c = f.mul(t[0], t[r]);
            let pairs_ok = (0..r).all(|i| f.mul(t[i], t[i + r]) == c);
            pairs_ok && (kind == FormKind::H || t[2 * r] == c)
        }
    }
}

/// An admissible tuple `t ∈ (F^×)^m` for one of the standard tori.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusElement {
    pub kind: FormKind,
    pub t: Vec<Scalar>,
}

impl TorusElement {
    pub fn new(shape: &Shape, kind: FormKind, t: Vec<Scalar>) -> Result<Self> {
        check_form_kind(kind, shape.m())?;
        if t.len() != shape.m() {
            return Err(Error::InvalidInput("torus tuple length must equal m".into()));
        }
        if !is_admissible(shape.field(), kind, &t) {
            return Err(Error::KindConstraintViolation("torus tuple is not admissible"));
        }
        Ok(TorusElement { kind, t })
    }

    pub fn to_aut(&self, shape: &Shape) -> ContAut {
        ContAut::diagonal(shape, &self.t).expect("validated")
    }

    /// Multiplier `t^a t_i^{-1}` on `x^(a) ∂_i` (1-based `i`).
    pub fn multiplier(&self, shape: &Shape, a: &[u32], i: usize) -> Scalar {
        let f = shape.field();
        let mut c = f.inv(self.t[i - 1]).unwrap();
        for (k, &ak) in a.iter().enumerate() {
            c = f.mul(c, f.pow(self.t[k], ak as i64));
        }
        c
    }
}

/// Classes of multi-indices sharing a torus weight, sorted.
pub fn eigenspaces_of_torus(kind: FormKind, shape: &Shape) -> Result<Vec<Vec<MultiIndex>>> {
    check_form_kind(kind, shape.m())?;
    let mut classes: BTreeMap<Vec<i64>, Vec<MultiIndex>> = BTreeMap::new();
    for u in shape.monomials() {
        let a = shape.unpack(u);
        let b: Vec<i64> = a.iter().map(|&x| x as i64).collect();
        classes.entry(lattice_weight(kind, &b)).or_default().push(a);
    }
    Ok(classes.into_values().collect())
}

/// The flag `V_1 ⊂ V_2 ⊂ …` of `n`: level `i` adds the axes with the
/// `i`-th largest value of `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    /// `xi[i]` = `Ξ_{i+1}`, cumulative, sorted 1-based axes.
    pub xi: Vec<Vec<usize>>,
}

impl Flag {
    pub fn new(n: &[u32]) -> Flag {
        let mut values: Vec<u32> = n.to_vec();
        values.sort_unstable_by(|a, b| b.cmp(a));
        values.dedup();
        let mut xi = Vec::new();
        let mut cur: Vec<usize> = Vec::new();
        for v in values {
            cur.extend((0..n.len()).filter(|&j| n[j] == v).map(|j| j + 1));
            cur.sort_unstable();
            xi.push(cur.clone());
        }
        Flag { xi }
    }

    pub fn levels(&self) -> usize {
        self.xi.len()
    }

    /// Level (1-based) at which axis `j` first appears.
    pub fn level_of(&self, j: usize) -> usize {
        self.xi.iter().position(|s| s.contains(&j)).unwrap() + 1
    }

    /// Axes new at level `i` (1-based): `Ξ_i \ Ξ_{i-1}`.
    pub fn layer(&self, i: usize) -> Vec<usize> {
        let prev: &[usize] = if i >= 2 { &self.xi[i - 2] } else { &[] };
        self.xi[i - 1].iter().copied().filter(|j| !prev.contains(j)).collect()
    }

    /// Whether a linear map (`a[i][j]` = coefficient of `x_j` in `ψ(x_i)`)
    /// maps every `V_i` into itself.
    pub fn respected_by(&self, a: &Matrix) -> bool {
        for level in &self.xi {
            for &i in level {
                for j in 0..a.cols {
                    if !a.get(i - 1, j).is_zero() && !level.contains(&(j + 1)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::liealg::{AlgebraKind, LieAlgebra};

    fn shape(p: u32, n: &[u32]) -> Shape {
        Shape::new(&Field::prime(p).unwrap(), n).unwrap()
    }

    fn x(sh: &Shape, i: usize) -> DpaElement {
        DpaElement::var(sh, i).unwrap()
    }

    fn mono(sh: &Shape, a: &[u32], c: i64) -> DpaElement {
        DpaElement::monomial(sh, a, sh.field().from_i64(c)).unwrap()
    }

    #[test]
    fn action_examples() {
        let sh = shape(5, &[1]);
        let f = sh.field().clone();
        let x3 = mono(&sh, &[3], 1);
        assert_eq!(ContAut::identity(&sh).act_on_dpa(&x3).unwrap(), x3);
        let psi = ContAut::diagonal(&sh, &[f.from_i64(2)]).unwrap();
        assert_eq!(psi.act_on_dpa(&x3).unwrap(), mono(&sh, &[3], 3));
        let sh2 = shape(5, &[1, 1]);
        let psi = ContAut::new(&sh2, vec![&x(&sh2, 1) + &x(&sh2, 2), x(&sh2, 2)]).unwrap();
        let img = psi.act_on_dpa(&mono(&sh2, &[2, 0], 1)).unwrap();
        let expected = &(&mono(&sh2, &[2, 0], 1) + &mono(&sh2, &[1, 1], 1)) + &mono(&sh2, &[0, 2], 1);
        assert_eq!(img, expected);
    }

    #[test]
    fn validation() {
        let sh = shape(5, &[2, 1]);
        // x1 ↦ x2 violates the flag since n_1 > n_2
        assert!(ContAut::new(&sh, vec![x(&sh, 2), x(&sh, 1)]).is_err());
        assert!(ContAut::new(&sh, vec![&x(&sh, 1) + &DpaElement::one(&sh), x(&sh, 2)]).is_err());
        assert!(ContAut::new(&sh, vec![x(&sh, 1), x(&sh, 1)]).is_err());
        // x2 ↦ x2 + x1^(5): p^1 ε_1 with n_2 + 1 = 2 <= n_1 = 2, allowed
        assert!(ContAut::new(&sh, vec![x(&sh, 1), &x(&sh, 2) + &mono(&sh, &[5, 0], 1)]).is_ok());
        // x1 ↦ x1 + x1^(5) with n_1 + 1 > n_1 is not
        assert!(ContAut::new(&sh, vec![&x(&sh, 1) + &mono(&sh, &[5, 0], 1), x(&sh, 2)]).is_err());
    }

    #[test]
    fn inverse_and_compose() {
        let sh = shape(5, &[2]);
        let psi = ContAut::new(&sh, vec![&x(&sh, 1) + &mono(&sh, &[2], 1)]).unwrap();
        let inv = psi.inverse().unwrap();
        assert_eq!(psi.compose(&inv).unwrap(), ContAut::identity(&sh));
        assert_eq!(inv.compose(&psi).unwrap(), ContAut::identity(&sh));
        assert_eq!(inv.tuple()[0].coeff(&[1]), Scalar::ONE);
        assert_eq!(inv.tuple()[0].coeff(&[2]), sh.field().from_i64(-1));
        let f = sh.field();
        let sh2 = shape(5, &[1, 1]);
        let s = ContAut::diagonal(&sh2, &[f.from_i64(2), f.from_i64(3)]).unwrap();
        let t = ContAut::diagonal(&sh2, &[f.from_i64(4), f.from_i64(3)]).unwrap();
        assert_eq!(s.compose(&t).unwrap(), ContAut::diagonal(&sh2, &[f.from_i64(3), f.from_i64(4)]).unwrap());
    }

    #[test]
    fn phi_examples() {
        let sh = shape(5, &[1, 1]);
        let f = sh.field().clone();
        let d = Derivation::monomial(&sh, &[2, 1], 1, Scalar::ONE).unwrap();
        assert_eq!(ContAut::identity(&sh).phi_conjugate(&d).unwrap(), d);
        let t = [f.from_i64(2), f.from_i64(3)];
        let lam = ContAut::diagonal(&sh, &t).unwrap();
        let te = TorusElement { kind: FormKind::W, t: t.to_vec() };
        assert_eq!(lam.phi_conjugate(&d).unwrap(), d.scale(te.multiplier(&sh, &[2, 1], 1)));
        let swap = ContAut::new(&sh, vec![x(&sh, 2), x(&sh, 1)]).unwrap();
        let d1 = Derivation::partial(&sh, 1).unwrap();
        assert_eq!(swap.phi_conjugate(&d1).unwrap(), Derivation::partial(&sh, 2).unwrap());
        let sh3 = shape(3, &[1]);
        assert!(matches!(
            ContAut::identity(&sh3).phi_conjugate(&Derivation::partial(&sh3, 1).unwrap()),
            Err(Error::ExcludedConfiguration(_))
        ));
    }

    #[test]
    fn membership_examples() {
        let sh = shape(5, &[1, 1]);
        let f = sh.field().clone();
        let t = ContAut::diagonal(&sh, &[f.from_i64(2), f.from_i64(4)]).unwrap();
        assert_eq!(t.in_aut_group(FormKind::H), Ok(true));
        let u = ContAut::new(&sh, vec![&x(&sh, 1) + &x(&sh, 2), x(&sh, 2)]).unwrap();
        assert_eq!(u.in_aut_group(FormKind::H), Ok(true));
        let sh3 = shape(5, &[1, 1, 1]);
        let s = ContAut::diagonal(&sh3, &[f.from_i64(2), Scalar::ONE, Scalar::ONE]).unwrap();
        assert_eq!(s.in_aut_group(FormKind::S), Ok(true));
        assert_eq!(s.form_multiplier(FormKind::S), Some(f.from_i64(2)));
        assert_eq!(
            s.in_aut_group(FormKind::H),
            Err(Error::KindConstraintViolation("the Hamiltonian family needs m = 2r"))
        );
        // x1 ↦ x1 + x1^(2) is not in the special group
        let nl = ContAut::new(&sh3, vec![&x(&sh3, 1) + &mono(&sh3, &[2, 0, 0], 1), x(&sh3, 2), x(&sh3, 3)]).unwrap();
        assert_eq!(nl.in_aut_group(FormKind::S), Ok(false));
        assert_eq!(nl.in_aut_group(FormKind::W), Ok(true));
    }

    #[test]
    fn monomial_and_normalizer_examples() {
        let sh = shape(5, &[1, 1, 1]);
        let f = sh.field().clone();
        let d = ContAut::diagonal(&sh, &[f.from_i64(2), f.from_i64(3), f.from_i64(1)]).unwrap();
        assert!(d.is_monomial());
        assert!(d.normalizes_torus(FormKind::W) && d.normalizes_torus(FormKind::K));
        let sh21 = shape(5, &[2, 1]);
        let swap = ContAut::new_unchecked(&sh21, vec![x(&sh21, 2), x(&sh21, 1)]);
        assert!(!swap.is_monomial());
        let e2 = ContAut::new(&sh, vec![x(&sh, 1), x(&sh, 2), &x(&sh, 3) + &mono(&sh, &[1, 1, 0], 1)]).unwrap();
        assert!(e2.normalizes_torus(FormKind::K));
        assert!(!e2.is_monomial());
        assert!(!e2.normalizes_torus(FormKind::W));
    }

    /// Conjugation oracle on concrete torus elements: ψ λ(t) ψ^{-1} must be
    /// diagonal and admissible for generators of the admissible tuples.
    fn normalizes_by_generators(psi: &ContAut, kind: FormKind) -> bool {
        let sh = psi.shape();
        let f = sh.field();
        let g = f.primitive_element();
        let m = sh.m();
        let gens: Vec<Vec<Scalar>> = match kind {
            FormKind::W | FormKind::S => {
                (0..m).map(|i| (0..m).map(|k| if k == i { g } else { Scalar::ONE }).collect()).collect()
            }
            FormKind::H | FormKind::K => {
                let r = m / 2;
                let mut v: Vec<Vec<Scalar>> = (0..r)
                    .map(|i| {
                        (0..m)
                            .map(|k| {
                                if k == i {
                                    g
                                } else if k == i + r {
                                    f.inv(g).unwrap()
                                } else {
                                    Scalar::ONE
                                }
                            })
                            .collect()
                    })
                    .collect();
                v.push((0..m).map(|k| if k >= r { g } else { Scalar::ONE }).collect());
                v
            }
        };
        let inv = psi.inverse().unwrap();
        gens.iter().all(|t| {
            let c = psi.compose(&ContAut::diagonal(sh, t).unwrap()).unwrap().compose(&inv).unwrap();
            c.as_diagonal().is_some_and(|s| is_admissible(f, kind, &s))
        })
    }

    #[test]
    fn normalizer_criterion_matches_generator_oracle() {
        let sh = shape(7, &[1, 1, 1]);
        let f = sh.field().clone();
        let cands = vec![
            ContAut::new(&sh, vec![x(&sh, 2), x(&sh, 1), x(&sh, 3)]).unwrap(),
            ContAut::new(&sh, vec![x(&sh, 2), x(&sh, 1).scale(f.from_i64(-1)), x(&sh, 3)]).unwrap(),
            ContAut::new(&sh, vec![x(&sh, 3), x(&sh, 2), x(&sh, 1)]).unwrap(),
            ContAut::new(&sh, vec![x(&sh, 1), x(&sh, 2), &x(&sh, 3) + &mono(&sh, &[1, 1, 0], 3)]).unwrap(),
            ContAut::new(&sh, vec![x(&sh, 1), &x(&sh, 2) + &x(&sh, 1), x(&sh, 3)]).unwrap(),
            ContAut::new(&sh, vec![x(&sh, 1), x(&sh, 2), &x(&sh, 3) + &mono(&sh, &[2, 0, 0], 1)]).unwrap(),
        ];
        for psi in &cands {
            for kind in [FormKind::W, FormKind::S, FormKind::K] {
                assert_eq!(psi.normalizes_torus(kind), normalizes_by_generators(psi, kind), "{psi} {kind:?}");
            }
        }
        let sh4 = shape(5, &[1, 1, 1, 1]);
        let cands4 = vec![
            ContAut::new(&sh4, vec![x(&sh4, 2), x(&sh4, 1), x(&sh4, 4), x(&sh4, 3)]).unwrap(),
            ContAut::new(&sh4, vec![x(&sh4, 2), x(&sh4, 1), x(&sh4, 3), x(&sh4, 4)]).unwrap(),
            ContAut::new(&sh4, vec![x(&sh4, 3), x(&sh4, 4), x(&sh4, 1), x(&sh4, 2)]).unwrap(),
        ];
        for psi in &cands4 {
            assert_eq!(psi.normalizes_torus(FormKind::H), normalizes_by_generators(psi, FormKind::H), "{psi}");
            // the normalizer of the H torus is monomial
            if psi.normalizes_torus(FormKind::H) {
                assert!(psi.is_monomial());
            }
        }
    }

    #[test]
    fn torus_classes() {
        let sh = shape(5, &[1, 1, 1]);
        let k = eigenspaces_of_torus(FormKind::K, &sh).unwrap();
        let class = k.iter().find(|c| c.contains(&vec![0, 0, 1])).unwrap();
        let mut got = class.clone();
        got.sort();
        assert_eq!(got, vec![vec![0, 0, 1], vec![1, 1, 0]]);
        let w = eigenspaces_of_torus(FormKind::W, &sh).unwrap();
        assert!(w.iter().all(|c| c.len() == 1));
        let sh2 = shape(5, &[1, 1]);
        let h = eigenspaces_of_torus(FormKind::H, &sh2).unwrap();
        assert_eq!(h.iter().find(|c| c.contains(&vec![1, 0])).unwrap(), &vec![vec![1, 0]]);
    }

    #[test]
    fn flags() {
        let fl = Flag::new(&[1, 3, 2, 3]);
        assert_eq!(fl.xi, vec![vec![2, 4], vec![2, 3, 4], vec![1, 2, 3, 4]]);
        assert_eq!(fl.level_of(1), 3);
        assert_eq!(fl.layer(2), vec![3]);
    }

    #[test]
    fn torus_preserves_algebras() {
        let sh = shape(5, &[1, 1]);
        let f = sh.field().clone();
        let h2 = LieAlgebra::new(AlgebraKind::H2, &sh).unwrap();
        let te = TorusElement::new(&sh, FormKind::H, vec![f.from_i64(2), f.from_i64(3)]).unwrap();
        let conj = Conjugation::new(&te.to_aut(&sh)).unwrap();
        for d in h2.basis() {
            assert!(h2.contains(&conj.apply(&d)));
        }
        assert!(TorusElement::new(&shape(5, &[1, 1, 1]), FormKind::K, vec![f.from_i64(2), f.from_i64(2), Scalar::ONE])
            .is_err());
    }
}
