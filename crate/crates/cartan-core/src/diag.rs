//! Conjugating quasi-tori of the normalizer of the standard torus into the
//! standard torus.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::autgrp::{is_admissible, ContAut, Flag};
use crate::dpa::{DpaElement, Shape};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::forms::omega;
use crate::grading::{
    grading_from_quasitorus, gradings_isomorphic, standard_grading, FgAbelianGroup, Grading, GroupHom, QuasiTorusRep,
};
use crate::liealg::{FormKind, SignConvention};
use crate::linalg::{joint_eigenspaces, Matrix, SpanBuilder, SparseVec};

/// Character of a joint eigenvector: exponents `j_k` with eigenvalue
/// `ζ_{e_k}^{j_k}` under the `k`-th generator.
pub type Character = Vec<u64>;

fn inverse_character(c: &[u64], orders: &[u64]) -> Character {
    c.iter().zip(orders).map(|(&j, &e)| (e - j) % e).collect()
}

/// `⟨u, v⟩ = Σ_j σ(j) u_j v_{j'}` on coordinate vectors of length `2r`.
pub fn pairing(f: &Field, u: &[Scalar], v: &[Scalar]) -> Scalar {
    let r = u.len() / 2;
    let mut acc = Scalar::ZERO;
    for j in 0..r {
        acc = f.add(acc, f.mul(u[j], v[j + r]));
        acc = f.sub(acc, f.mul(u[j + r], v[j]));
    }
    acc
}

fn combine(f: &Field, terms: &[(Scalar, &[Scalar])]) -> Vec<Scalar> {
    let mut out = vec![Scalar::ZERO; terms[0].1.len()];
    for &(c, v) in terms {
        for (o, &x) in out.iter_mut().zip(v) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}

/// `z_j = ⟨y_s,y_t⟩ y_j - ⟨y_s,y_j⟩ y_t + ⟨y_t,y_j⟩ y_s`.
pub fn z_vector(f: &Field, ys: &[Scalar], yt: &[Scalar], yj: &[Scalar]) -> Vec<Scalar> {
    let st = pairing(f, ys, yt);
    let sj = pairing(f, ys, yj);
    let tj = pairing(f, yt, yj);
    combine(f, &[(st, yj), (f.neg(sj), yt), (tj, ys)])
}

/// Which of the three eigenvalue configurations a `z_j` falls in.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ZCase {
    /// `γ_j ≠ γ_s^{±1}`: `z_j` is a multiple of `y_j`.
    Unrelated,
    /// `γ_j = γ_s^{±1}` with `γ_s ≠ γ_s^{-1}`.
    Paired,
    /// `γ_j = γ_s = γ_s^{-1}`.
    SelfDual,
}

pub fn classify_z(gamma_s: &[u64], gamma_j: &[u64], orders: &[u64]) -> ZCase {
    let inv = inverse_character(gamma_s, orders);
    if gamma_j != gamma_s && gamma_j != inv.as_slice() {
        ZCase::Unrelated
    } else if inv.as_slice() != gamma_s {
        ZCase::Paired
    } else {
        ZCase::SelfDual
    }
}

fn to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| (i as u32, c)).collect()
}

fn to_dense(v: &[(u32, Scalar)], m: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::ZERO; m];
    for &(i, c) in v {
        out[i as usize] = c;
    }
    out
}

/// Image of `Σ c_i x_i` under the linear map with `a[i][j]` = coefficient
/// of `x_j` in the image of `x_i`.
fn act(f: &Field, a: &Matrix, c: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::ZERO; a.cols];
    for (i, &ci) in c.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(a.row(i)) {
            *o = f.add(*o, f.mul(ci, x));
        }
    }
    out
}

fn eigenspaces(
    f: &Field,
    space: &[SparseVec],
    ops: &[Matrix],
    orders: &[u64],
) -> Result<Vec<(Character, Vec<SparseVec>)>> {
    let m = ops.first().map_or(0, |a| a.rows);
    let mut closures: Vec<_> =
        ops.iter().map(|a| move |v: &SparseVec| to_sparse(&act(f, a, &to_dense(v, m)))).collect();
    let mut dyns: Vec<&mut dyn FnMut(&SparseVec) -> SparseVec> =
        closures.iter_mut().map(|c| c as &mut dyn FnMut(&SparseVec) -> SparseVec).collect();
    joint_eigenspaces(f, space, orders, &mut dyns)
}

fn unit_space(axes: &[usize]) -> Vec<SparseVec> {
    axes.iter().map(|&j| vec![((j - 1) as u32, Scalar::ONE)]).collect()
}

/// Joint eigenbasis `y_1, …, y_m` with `V_i = span{y_j : j ∈ Ξ_i}` for a
/// commuting family preserving the flag. Entry `j` is `(y_{j+1}, character)`.
pub fn flag_eigenbasis(
    f: &Field,
    flag: &Flag,
    ops: &[Matrix],
    orders: &[u64],
) -> Result<Vec<(Vec<Scalar>, Character)>> {
    let m = flag.xi.last().map_or(0, |s| s.len());
    let mut out: Vec<Option<(Vec<Scalar>, Character)>> = vec![None; m];
    let mut by_char: BTreeMap<Character, SpanBuilder> = BTreeMap::new();
    for level in 1..=flag.levels() {
        let parts = eigenspaces(f, &unit_space(&flag.xi[level - 1]), ops, orders)?;
        let mut fresh = Vec::new();
        for (ch, basis) in parts {
            let sb = by_char.entry(ch.clone()).or_insert_with(|| SpanBuilder::new(f));
            for v in basis {
                if sb.insert(&v) {
                    fresh.push((to_dense(&v, m), ch.clone()));
                }
            }
        }
        let layer = flag.layer(level);
        if fresh.len() != layer.len() {
            return Err(Error::NotSemisimple);
        }
        for (j, item) in layer.into_iter().zip(fresh) {
            out[j - 1] = Some(item);
        }
    }
    Ok(out.into_iter().map(|x| x.expect("every label assigned")).collect())
}

/// Joint eigenvectors `e_1, …, e_{2r}` of a symplectic quasi-torus with
/// `⟨e_j, e_k⟩ = σ(j) δ_{j,k'}` and `V_i = span{e_j : j ∈ Ξ_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticBasis {
    pub vectors: Vec<Vec<Scalar>>,
    pub characters: Vec<Character>,
}

impl SymplecticBasis {
    /// Rows are the basis vectors.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_rows(self.vectors.clone())
    }

    /// Checks the pairing table, the eigenvector conditions and the flag spans.
    pub fn check(&self, f: &Field, flag: &Flag, ops: &[Matrix], orders: &[u64]) -> bool {
        let m = self.vectors.len();
        let sc = SignConvention { r: m / 2 };
        for j in 0..m {
            for k in 0..m {
                let want =
                    if sc.prime(j + 1) == Some(k + 1) { f.from_i64(sc.sigma(j + 1).unwrap()) } else { Scalar::ZERO };
                if pairing(f, &self.vectors[j], &self.vectors[k]) != want {
                    return false;
                }
            }
        }
        for (g, (a, &e)) in ops.iter().zip(orders).enumerate() {
            let Ok(zeta) = f.root_of_unity(e) else {
                return false;
            };
            for (v, ch) in self.vectors.iter().zip(&self.characters) {
                let lam = f.pow(zeta, ch[g] as i64);
                let expect: Vec<Scalar> = v.iter().map(|&x| f.mul(lam, x)).collect();
                if act(f, a, v) != expect {
                    return false;
                }
            }
        }
        for level in &flag.xi {
            for &j in level {
                let v = &self.vectors[j - 1];
                if (0..m).any(|k| !v[k].is_zero() && !level.contains(&(k + 1))) {
                    return false;
                }
            }
        }
        self.matrix().rank(f) == m
    }
}

/// Symplectic Gram–Schmidt over joint eigenvectors, respecting the flag.
///
/// `ops` are the linear parts of commuting symplectic transformations of
/// `V = span{x_1, …, x_{2r}}` of the given orders; the field must contain the
/// `e_k`-th roots of unity.
pub fn symplectic_eigenbasis(f: &Field, flag: &Flag, ops: &[Matrix], orders: &[u64]) -> Result<SymplecticBasis> {
    let m = flag.xi.last().map_or(0, |s| s.len());
    if !m.is_multiple_of(2) {
        return Err(Error::KindConstraintViolation("the symplectic space needs even dimension"));
    }
    for a in ops {
        for j in 0..m {
            for k in 0..m {
                let e = |i: usize| {
                    let mut v = vec![Scalar::ZERO; m];
                    v[i] = Scalar::ONE;
                    v
                };
                if pairing(f, a.row(j), a.row(k)) != pairing(f, &e(j), &e(k)) {
                    return Err(Error::NotSymplectic);
                }
            }
        }
    }
    let (mut w, mut ch): (Vec<Vec<Scalar>>, Vec<Character>) =
        flag_eigenbasis(f, flag, ops, orders)?.into_iter().unzip();
    let mut active = vec![true; m];
    reduce(f, flag, orders, &mut w, &mut ch, &mut active)?;
    Ok(SymplecticBasis { vectors: w, characters: ch })
}

/// One induction step on the active labels, then recurse.
fn reduce(
    f: &Field,
    flag: &Flag,
    orders: &[u64],
    w: &mut [Vec<Scalar>],
    ch: &mut [Character],
    active: &mut [bool],
) -> Result<()> {
    let m = w.len();
    let sc = SignConvention { r: m / 2 };
    let labels: Vec<usize> = (0..m).filter(|&j| active[j]).collect();
    if labels.is_empty() {
        return Ok(());
    }
    let lvl = |j: usize| flag.level_of(j + 1);
    let first = labels.iter().map(|&j| lvl(j)).min().unwrap();
    // minimal l with ⟨V_1, V_l⟩ ≠ 0, ties broken by lowest labels
    let mut pivot = None;
    'search: for l in first..=flag.levels() {
        for &s in labels.iter().filter(|&&j| lvl(j) == first) {
            for &t in labels.iter().filter(|&&j| lvl(j) == l) {
                if !pairing(f, &w[s], &w[t]).is_zero() {
                    pivot = Some((s, t, l));
                    break 'search;
                }
            }
        }
    }
    let (s, t, l) = pivot.ok_or(Error::DegenerateForm)?;
    if ch[s] != inverse_character(&ch[t], orders) {
        return Err(Error::NotSymplectic);
    }
    let q = labels
        .iter()
        .copied()
        .find(|&q| lvl(q) == first && sc.prime(q + 1).is_some_and(|qp| active[qp - 1] && lvl(qp - 1) == l))
        .ok_or(Error::DegenerateForm)?;
    let qp = sc.prime(q + 1).unwrap() - 1;

    let (ys, yt) = (w[s].clone(), w[t].clone());
    let (cs, ct) = (ch[s].clone(), ch[t].clone());
    let old_w = w.to_vec();
    let old_ch = ch.to_vec();
    let z = |j: usize| z_vector(f, &ys, &yt, &old_w[j]);
    w[q] = ys.clone();
    ch[q] = cs;
    w[qp] = yt.clone();
    ch[qp] = ct;
    for &j in &labels {
        if ![q, qp, s, t].contains(&j) {
            w[j] = z(j);
        }
    }
    let mut sources: Vec<usize> = [q, qp].into_iter().filter(|j| *j != s && *j != t).collect();
    for label in [s, t].into_iter().filter(|j| *j != q && *j != qp) {
        let pos = sources.iter().position(|&src| lvl(src) == lvl(label)).ok_or(Error::DegenerateForm)?;
        let src = sources.remove(pos);
        w[label] = z(src);
        ch[label] = old_ch[src].clone();
    }
    active[q] = false;
    active[qp] = false;
    reduce(f, flag, orders, w, ch, active)?;
    let c = f.div(f.from_i64(sc.sigma(q + 1).unwrap()), pairing(f, &w[q], &w[qp])).ok_or(Error::DegenerateForm)?;
    w[q] = w[q].iter().map(|&x| f.mul(c, x)).collect();
    Ok(())
}

/// Output of the diagonalizers: `conjugator ∘ g ∘ conjugator^{-1}` is the
/// diagonal automorphism `images[k]` for the `k`-th generator `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationResult {
    pub kind: FormKind,
    pub conjugator: ContAut,
    pub images: Vec<ContAut>,
    /// The scalar factor `α` split off each generator (`1` for W and S).
    pub scalars: Vec<Scalar>,
}

impl ConjugationResult {
    /// The diagonal entries of each image.
    pub fn torus_elements(&self) -> Vec<Vec<Scalar>> {
        self.images.iter().map(|g| g.as_diagonal().expect("images are diagonal")).collect()
    }
}

/// Given `ψ` with the generators diagonal in the basis `ψ(x_j)`, conjugate
/// by `Ψ = ψ^{-1}` and check the result.
fn finish(kind: FormKind, psi: &ContAut, gens: &[ContAut], scalars: Vec<Scalar>) -> Result<ConjugationResult> {
    let conj = psi.inverse()?;
    let f = psi.shape().field();
    let m = psi.shape().m();
    let mut images = Vec::with_capacity(gens.len());
    for g in gens {
        let img = conj.compose(&g.compose(psi)?)?;
        let Some(t) = img.as_diagonal() else {
            if kind == FormKind::K && (0..m - 1).all(|i| img.tuple()[i].terms().len() == 1) {
                return Err(Error::ResidualBeta);
            }
            return Err(Error::NotInNormalizer);
        };
        if !is_admissible(f, kind, &t) {
            return Err(Error::NotInNormalizer);
        }
        images.push(img);
    }
    if !conj.in_aut_group(kind)? {
        return Err(Error::NotInAutGroup);
    }
    Ok(ConjugationResult { kind, conjugator: conj, images, scalars })
}

fn roots_needed(kind: FormKind, q: &QuasiTorusRep) -> u64 {
    match kind {
        FormKind::W | FormKind::S => q.exponent(),
        FormKind::H | FormKind::K => 2 * q.exponent(),
    }
}

fn linear_parts(gens: &[ContAut]) -> Vec<Matrix> {
    gens.iter().map(|g| g.linear_part()).collect()
}

/// Which generators the diagonalizers accept.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Elements of the normalizer of the standard torus.
    Normalizer,
    /// Additionally any commuting linear automorphisms, diagonalized
    /// directly over the flag.
    Linear,
}

fn diag_ws(kind: FormKind, shape: &Shape, gens: &[ContAut], orders: &[u64], mode: Mode) -> Result<ConjugationResult> {
    let f = shape.field();
    let m = shape.m();
    let flag = Flag::new(shape.n());
    let ops = linear_parts(gens);
    if gens.iter().any(|g| !g.is_monomial()) {
        if mode == Mode::Normalizer {
            return Err(Error::NotMonomial);
        }
        if gens.iter().any(|g| !g.is_linear()) {
            return Err(Error::NotInNormalizer);
        }
        let rows = flag_eigenbasis(f, &flag, &ops, orders)?.into_iter().map(|(v, _)| v).collect();
        let psi = ContAut::linear(shape, &Matrix::from_rows(rows))?;
        return finish(kind, &psi, gens, vec![Scalar::ONE; gens.len()]);
    }
    let mut rows = vec![Vec::new(); m];
    // each layer U_i is invariant; diagonalize there and extend by the identity
    for level in 1..=flag.levels() {
        let layer = flag.layer(level);
        let parts = eigenspaces(f, &unit_space(&layer), &ops, orders)?;
        let mut vecs: Vec<SparseVec> = parts.into_iter().flat_map(|(_, b)| b).collect();
        if vecs.len() != layer.len() {
            return Err(Error::NotSemisimple);
        }
        // keep x_j in place when the eigenvectors have distinct leading coordinates
        vecs.sort_by_key(|v| v[0].0);
        for (j, v) in layer.into_iter().zip(vecs) {
            rows[j - 1] = to_dense(&v, m);
        }
    }
    let psi = ContAut::linear(shape, &Matrix::from_rows(rows))?;
    finish(kind, &psi, gens, vec![Scalar::ONE; gens.len()])
}

/// `(ψ, α_k)` with `ψ ∈ Sp(m; n)` whose columns diagonalize the symplectic
/// parts `α_k^{-1} g_k`.
fn symplectic_conjugator(
    shape: &Shape,
    gens: &[ContAut],
    orders: &[u64],
    mode: Mode,
) -> Result<(ContAut, Vec<Scalar>)> {
    let f = shape.field();
    let mut ops = Vec::with_capacity(gens.len());
    let mut scalars = Vec::with_capacity(gens.len());
    for g in gens {
        let ok = match mode {
            Mode::Normalizer => g.normalizes_torus(FormKind::H) && g.is_monomial(),
            Mode::Linear => g.is_linear(),
        };
        if !ok {
            return Err(Error::NotInNormalizer);
        }
        let c = g.form_multiplier(FormKind::H).ok_or(Error::NotInAutGroup)?;
        // the two square roots differ by sign; take the one of least discrete log
        let alpha = f.sqrt(c).ok_or(Error::OrderUnavailable { order: 2, field_order: f.order() })?[0];
        let ainv = f.inv(alpha).unwrap();
        ops.push(g.linear_part().map(|x| f.mul(ainv, x)));
        scalars.push(alpha);
    }
    let orders2: Vec<u64> = orders.iter().map(|e| 2 * e).collect();
    let basis = symplectic_eigenbasis(f, &Flag::new(shape.n()), &ops, &orders2)?;
    let psi = ContAut::linear(shape, &basis.matrix())?;
    if psi.form_multiplier(FormKind::H) != Some(Scalar::ONE) {
        return Err(Error::NotSymplectic);
    }
    Ok((psi, scalars))
}

fn diag_h(shape: &Shape, gens: &[ContAut], orders: &[u64], mode: Mode) -> Result<ConjugationResult> {
    let (psi, scalars) = symplectic_conjugator(shape, gens, orders, mode)?;
    finish(FormKind::H, &psi, gens, scalars)
}

fn restrict(sub: &Shape, y: &DpaElement) -> Result<DpaElement> {
    let sh = y.shape();
    let mut terms = Vec::with_capacity(y.terms().len());
    for &(u, c) in y.terms() {
        let a = sh.unpack(u);
        if a[sub.m()..].iter().any(|&x| x != 0) {
            return Err(Error::WrongShape);
        }
        terms.push((sub.pack(&a[..sub.m()])?, c));
    }
    terms.sort_unstable_by_key(|t| t.0);
    Ok(DpaElement::from_packed_unchecked(sub, terms))
}

fn embed(shape: &Shape, y: &DpaElement) -> Result<DpaElement> {
    let sub = y.shape();
    let mut terms = Vec::with_capacity(y.terms().len());
    for &(u, c) in y.terms() {
        let mut a = sub.unpack(u);
        a.resize(shape.m(), 0);
        terms.push((shape.pack(&a)?, c));
    }
    terms.sort_unstable_by_key(|t| t.0);
    Ok(DpaElement::from_packed_unchecked(shape, terms))
}

/// `ψ̄` on `O(2r+1; n)` with `ψ̄(x_i) = ψ(x_i)` for `i ≤ 2r` and
/// `ψ̄(x_m) = α x_m`, for linear `ψ` with `ψ(ω_H) = α ω_H`.
pub fn extend_to_contact(psi: &ContAut, alpha: Scalar, shape: &Shape) -> Result<ContAut> {
    let m = shape.m();
    if m.is_multiple_of(2) || psi.shape() != &shape.truncated(m - 1)? {
        return Err(Error::ShapeMismatch);
    }
    if !psi.is_linear() {
        return Err(Error::InvalidAutomorphism("only linear maps extend"));
    }
    if psi.form_multiplier(FormKind::H) != Some(alpha) {
        return Err(Error::FormMultiplierMismatch);
    }
    let mut tuple = Vec::with_capacity(m);
    for y in psi.tuple() {
        tuple.push(embed(shape, y)?);
    }
    tuple.push(DpaElement::var(shape, m)?.scale(alpha));
    let bar = ContAut::new(shape, tuple)?;
    let wk = omega(FormKind::K, shape)?;
    if wk.pullback(&bar)? != wk.scale(alpha) {
        return Err(Error::FormMultiplierMismatch);
    }
    Ok(bar)
}

/// Checks `μ(x_i) = α_i x_{j_i}` (`i ≤ 2r`; any linear form in
/// `x_1, …, x_{2r}` in linear mode) and `μ(x_m) = α_m x_m + Σ β_l x_l x_{l'}`.
fn check_contact_shape(g: &ContAut, mode: Mode) -> Result<()> {
    let sh = g.shape();
    let m = sh.m();
    let r = (m - 1) / 2;
    for y in &g.tuple()[..m - 1] {
        if mode == Mode::Normalizer && y.terms().len() != 1 {
            return Err(Error::WrongShape);
        }
        for &(u, _) in y.terms() {
            let a = sh.unpack(u);
            if a.iter().sum::<u32>() != 1 || a[m - 1] != 0 {
                return Err(Error::WrongShape);
            }
        }
    }
    let last = &g.tuple()[m - 1];
    let mut has_xm = false;
    for &(u, _) in last.terms() {
        let a = sh.unpack(u);
        if u == sh.eps(m - 1) {
            has_xm = true;
            continue;
        }
        let pair = (0..r).any(|l| a.iter().enumerate().all(|(k, &x)| x == u32::from(k == l || k == l + r)));
        if !pair {
            return Err(Error::WrongShape);
        }
    }
    if has_xm {
        Ok(())
    } else {
        Err(Error::WrongShape)
    }
}

fn diag_k(shape: &Shape, gens: &[ContAut], orders: &[u64], mode: Mode) -> Result<ConjugationResult> {
    let m = shape.m();
    let sub = shape.truncated(m - 1)?;
    let mut restricted = Vec::with_capacity(gens.len());
    for g in gens {
        check_contact_shape(g, mode)?;
        let tuple = g.tuple()[..m - 1].iter().map(|y| restrict(&sub, y)).collect::<Result<Vec<_>>>()?;
        restricted.push(ContAut::new_unchecked(&sub, tuple));
    }
    let (psi, scalars) = symplectic_conjugator(&sub, &restricted, orders, mode)?;
    let bar = extend_to_contact(&psi, Scalar::ONE, shape)?;
    finish(FormKind::K, &bar, gens, scalars)
}

/// Conjugates the quasi-torus into the standard torus of its kind. The
/// quasi-torus is first moved to a field containing the needed roots of
/// unity; the result lives over that field.
pub fn diagonalize(q: &QuasiTorusRep) -> Result<ConjugationResult> {
    diagonalize_with(q, Mode::Normalizer)
}

pub fn diagonalize_with(q: &QuasiTorusRep, mode: Mode) -> Result<ConjugationResult> {
    let kind = q.algebra.kind().form_kind();
    let q = q.lift_for_order(roots_needed(kind, q))?;
    let shape = q.algebra.shape();
    match kind {
        FormKind::W | FormKind::S => diag_ws(kind, shape, &q.generators, &q.orders, mode),
        FormKind::H => diag_h(shape, &q.generators, &q.orders, mode),
        FormKind::K => diag_k(shape, &q.generators, &q.orders, mode),
    }
}

/// W and S: block-diagonal conjugation over the flag layers.
pub fn diagonalize_ws(q: &QuasiTorusRep) -> Result<ConjugationResult> {
    match q.algebra.kind().form_kind() {
        FormKind::W | FormKind::S => diagonalize(q),
        _ => Err(Error::KindConstraintViolation("expected a Witt or special algebra")),
    }
}

pub fn diagonalize_h(q: &QuasiTorusRep) -> Result<ConjugationResult> {
    match q.algebra.kind().form_kind() {
        FormKind::H => diagonalize(q),
        _ => Err(Error::KindConstraintViolation("expected a Hamiltonian algebra")),
    }
}

pub fn diagonalize_k(q: &QuasiTorusRep) -> Result<ConjugationResult> {
    match q.algebra.kind().form_kind() {
        FormKind::K => diagonalize(q),
        _ => Err(Error::KindConstraintViolation("expected a contact algebra")),
    }
}

/// Result of [`standardize`].
#[derive(Clone, Debug)]
pub struct Standardized {
    pub conjugation: ConjugationResult,
    /// Eigenspace grading of the input quasi-torus.
    pub original: Grading,
    /// The standard grading of the conjugated quasi-torus.
    pub standard: Grading,
    pub hom: GroupHom,
    /// Whether the conjugator maps `original` onto `standard`.
    pub isomorphic: bool,
}

/// Conjugates into the standard torus and compares the eigenspace grading
/// of the input with the resulting standard grading.
pub fn standardize(q: &QuasiTorusRep) -> Result<Standardized> {
    standardize_with(q, Mode::Normalizer)
}

pub fn standardize_with(q: &QuasiTorusRep, mode: Mode) -> Result<Standardized> {
    let kind = q.algebra.kind().form_kind();
    let q = q.lift_for_order(roots_needed(kind, q))?;
    let conjugation = diagonalize_with(&q, mode)?;
    let f = q.algebra.field().clone();
    let m = q.algebra.shape().m();
    let active: Vec<usize> = (0..q.orders.len()).filter(|&k| q.orders[k] > 1).collect();
    let group = FgAbelianGroup { rank: 0, torsion: active.iter().map(|&k| q.orders[k]).collect() };
    let tori = conjugation.torus_elements();
    let mut images = vec![Vec::with_capacity(active.len()); m];
    for &k in &active {
        for (i, img) in images.iter_mut().enumerate() {
            let j = f.root_log(tori[k][i], q.orders[k]).ok_or(Error::NotSemisimple)?;
            img.push(j as i64);
        }
    }
    let hom = GroupHom::new(FgAbelianGroup::free(m), group, images)?;
    let standard = standard_grading(&q.algebra, &hom)?;
    let std_q =
        QuasiTorusRep { algebra: q.algebra.clone(), generators: conjugation.images.clone(), orders: q.orders.clone() };
    if grading_from_quasitorus(&std_q)? != standard {
        return Err(Error::NotStandard);
    }
    let original = grading_from_quasitorus(&q)?;
    let isomorphic = gradings_isomorphic(&original, &standard, &conjugation.conjugator)?;
    Ok(Standardized { conjugation, original, standard, hom, isomorphic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{AlgebraKind, LieAlgebra};
    use alloc::sync::Arc;

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    fn s(f: &Field, x: i64) -> Scalar {
        f.from_i64(x)
    }

    fn alg(kind: AlgebraKind, n: &[u32]) -> Arc<LieAlgebra> {
        LieAlgebra::shared(kind, &Shape::new(&f5(), n).unwrap()).unwrap()
    }

    fn mono(sh: &Shape, targets: &[usize], coeffs: &[i64]) -> ContAut {
        let f = sh.field();
        ContAut::monomial(sh, targets, &coeffs.iter().map(|&c| f.from_i64(c)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn swap_in_w() {
        let w = alg(AlgebraKind::W, &[1, 1]);
        let sh = w.shape().clone();
        let q = QuasiTorusRep::new(w, vec![mono(&sh, &[2, 1], &[1, 1])], None).unwrap();
        let res = diagonalize_ws(&q).unwrap();
        let f = f5();
        // ψ = Ψ^{-1}: x1 ↦ x1 + x2, x2 ↦ x1 - x2
        let psi = res.conjugator.inverse().unwrap();
        let m = psi.linear_part();
        assert_eq!(m.row(0), &[s(&f, 1), s(&f, 1)]);
        assert_eq!(m.row(1), &[s(&f, 1), s(&f, -1)]);
        assert_eq!(res.torus_elements(), vec![vec![s(&f, 1), s(&f, -1)]]);
    }

    #[test]
    fn diagonal_input_gives_identity() {
        let w = alg(AlgebraKind::W, &[2, 1]);
        let sh = w.shape().clone();
        let f = f5();
        let g = ContAut::diagonal(&sh, &[s(&f, 1), s(&f, 2)]).unwrap();
        let q = QuasiTorusRep::new(w, vec![g.clone()], None).unwrap();
        let res = diagonalize_ws(&q).unwrap();
        assert!(res.conjugator.is_identity());
        assert_eq!(res.images, vec![g]);
        assert!(Flag::new(&[2, 1]).respected_by(&res.conjugator.linear_part()));
    }

    #[test]
    fn non_monomial_rejected() {
        let w = alg(AlgebraKind::W, &[1, 1]);
        let sh = w.shape().clone();
        let f = f5();
        let g =
            ContAut::linear(&sh, &Matrix::from_rows(vec![vec![s(&f, 2), s(&f, 1)], vec![s(&f, 1), s(&f, 2)]])).unwrap();
        let order = g.order(100).unwrap();
        let q = QuasiTorusRep::new(w, vec![g], Some(vec![order])).unwrap();
        assert_eq!(diagonalize(&q).unwrap_err(), Error::NotMonomial);
        let st = standardize_with(&q, Mode::Linear).unwrap();
        assert!(st.isomorphic);
    }

    #[test]
    fn linear_mode_in_h() {
        let h = alg(AlgebraKind::H2, &[1, 1]);
        let sh = h.shape().clone();
        let f = f5();
        // trace 0, determinant 1: eigenvalues 2 and 3, order 4, not monomial
        let a = Matrix::from_rows(vec![vec![s(&f, 1), s(&f, 1)], vec![s(&f, 3), s(&f, 4)]]);
        let g = ContAut::linear(&sh, &a).unwrap();
        let q = QuasiTorusRep::new(h, vec![g], None).unwrap();
        assert_eq!(q.orders, vec![4]);
        assert_eq!(diagonalize(&q).unwrap_err(), Error::NotInNormalizer);
        let st = standardize_with(&q, Mode::Linear).unwrap();
        assert!(st.isomorphic);

        let k = alg(AlgebraKind::K1, &[1, 1, 1]);
        let z = Scalar::ZERO;
        let a =
            Matrix::from_rows(vec![vec![s(&f, 1), s(&f, 1), z], vec![s(&f, 3), s(&f, 4), z], vec![z, z, Scalar::ONE]]);
        let g = ContAut::linear(k.shape(), &a).unwrap();
        let q = QuasiTorusRep::new(k, vec![g], None).unwrap();
        assert_eq!(diagonalize(&q).unwrap_err(), Error::WrongShape);
        let st = standardize_with(&q, Mode::Linear).unwrap();
        assert!(st.isomorphic);
    }

    #[test]
    fn z_cases() {
        let f = f5();
        let orders = [4];
        assert_eq!(classify_z(&[1], &[2], &orders), ZCase::Unrelated);
        assert_eq!(classify_z(&[1], &[3], &orders), ZCase::Paired);
        assert_eq!(classify_z(&[1], &[1], &orders), ZCase::Paired);
        assert_eq!(classify_z(&[2], &[2], &orders), ZCase::SelfDual);
        // r = 2, T = diag(2, 1, 3, 1): characters 1, 0, 3, 0 for ζ_4 = 2
        let t = Matrix::from_rows(vec![
            vec![s(&f, 2), s(&f, 0), s(&f, 0), s(&f, 0)],
            vec![s(&f, 0), s(&f, 1), s(&f, 0), s(&f, 0)],
            vec![s(&f, 0), s(&f, 0), s(&f, 3), s(&f, 0)],
            vec![s(&f, 0), s(&f, 0), s(&f, 0), s(&f, 1)],
        ]);
        let ev = |v: &[i64]| v.iter().map(|&x| s(&f, x)).collect::<Vec<_>>();
        let is_eigen =
            |v: &[Scalar], lam: i64| act(&f, &t, v) == v.iter().map(|&x| f.mul(s(&f, lam), x)).collect::<Vec<_>>();
        let (ys, yt) = (ev(&[1, 0, 0, 0]), ev(&[0, 0, 1, 0]));
        // unrelated: y_j of eigenvalue 1, orthogonal to y_s, y_t
        let z = z_vector(&f, &ys, &yt, &ev(&[0, 1, 0, 1]));
        assert!(is_eigen(&z, 1));
        assert_eq!(z, ev(&[0, 1, 0, 1]));
        // paired: T' = diag(2, 2, 3, 3), y_t = x3 + x4, y_j = x2 pairs with y_t
        let t2 = Matrix::from_rows(vec![
            vec![s(&f, 2), s(&f, 0), s(&f, 0), s(&f, 0)],
            vec![s(&f, 0), s(&f, 2), s(&f, 0), s(&f, 0)],
            vec![s(&f, 0), s(&f, 0), s(&f, 3), s(&f, 0)],
            vec![s(&f, 0), s(&f, 0), s(&f, 0), s(&f, 3)],
        ]);
        let yt2 = ev(&[0, 0, 1, 1]);
        let yj = ev(&[0, 1, 0, 0]);
        assert!(!pairing(&f, &yt2, &yj).is_zero());
        let z = z_vector(&f, &ys, &yt2, &yj);
        assert_eq!(z, ev(&[-1, 1, 0, 0]));
        assert_eq!(act(&f, &t2, &z), z.iter().map(|&x| f.mul(s(&f, 2), x)).collect::<Vec<_>>());
        // self-dual: everything in the -1 eigenspace
        let minus = Matrix::identity(4).map(|x| f.neg(x));
        let (ys, yt, yj) = (ev(&[1, 1, 0, 0]), ev(&[0, 0, 1, 0]), ev(&[0, 1, 1, 1]));
        let z = z_vector(&f, &ys, &yt, &yj);
        assert_eq!(act(&f, &minus, &z), z.iter().map(|&x| f.neg(x)).collect::<Vec<_>>());
        assert!(pairing(&f, &ys, &z).is_zero() && pairing(&f, &yt, &z).is_zero());
    }

    #[test]
    fn symplectic_permutation_r2() {
        let f = f5();
        // x1 ↔ x2, x3 ↔ x4
        let mut a = Matrix::zero(4, 4);
        for (i, j) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            a.set(i, j, Scalar::ONE);
        }
        let flag = Flag::new(&[1, 1, 1, 1]);
        let b = symplectic_eigenbasis(&f, &flag, &[a.clone()], &[2]).unwrap();
        assert!(b.check(&f, &flag, &[a], &[2]));
        let mut chars = b.characters.clone();
        chars.sort();
        assert_eq!(chars, vec![vec![0], vec![0], vec![1], vec![1]]);
    }

    #[test]
    fn symplectic_mixed_flag() {
        let f = f5();
        // n = (2, 1, 1, 2): V_1 = span{x1, x4} is isotropic
        let flag = Flag::new(&[2, 1, 1, 2]);
        let d = |t: [i64; 4]| {
            let mut a = Matrix::zero(4, 4);
            for i in 0..4 {
                a.set(i, i, s(&f, t[i]));
            }
            a
        };
        let ops = [d([2, 4, 3, 4])];
        let b = symplectic_eigenbasis(&f, &flag, &ops, &[4]).unwrap();
        assert!(b.check(&f, &flag, &ops, &[4]));
        assert_eq!(symplectic_eigenbasis(&f, &flag, &[d([2, 2, 2, 2])], &[4]).unwrap_err(), Error::NotSymplectic);
        let trivial = symplectic_eigenbasis(&f, &Flag::new(&[1, 1]), &[], &[]).unwrap();
        assert_eq!(trivial.vectors, vec![vec![s(&f, 1), s(&f, 0)], vec![s(&f, 0), s(&f, 1)]]);
    }

    #[test]
    fn rotation_in_h() {
        let h = alg(AlgebraKind::H2, &[1, 1]);
        let sh = h.shape().clone();
        let f = f5();
        // x1 ↦ x2, x2 ↦ -x1
        let g = mono(&sh, &[2, 1], &[1, -1]);
        let q = QuasiTorusRep::new(h, vec![g], None).unwrap();
        assert_eq!(q.orders, vec![4]);
        let res = diagonalize_h(&q).unwrap();
        let t = &res.torus_elements()[0];
        assert_eq!(f.mul(t[0], t[1]), Scalar::ONE);
        assert_eq!(f.mult_order(t[0]), Some(4));
        assert_eq!(res.conjugator.form_multiplier(FormKind::H), Some(Scalar::ONE));
    }

    #[test]
    fn contact_extension() {
        let f = f5();
        let sh = Shape::new(&f, &[1, 1, 1]).unwrap();
        let sub = sh.truncated(2).unwrap();
        let id = extend_to_contact(&ContAut::identity(&sub), Scalar::ONE, &sh).unwrap();
        assert!(id.is_identity());
        let d = ContAut::diagonal(&sub, &[s(&f, 2), s(&f, 3)]).unwrap();
        let bar = extend_to_contact(&d, s(&f, 6), &sh).unwrap();
        assert_eq!(bar.as_diagonal(), Some(vec![s(&f, 2), s(&f, 3), s(&f, 1)]));
        let d2 = ContAut::diagonal(&sub, &[s(&f, 2), s(&f, 2)]).unwrap();
        assert_eq!(extend_to_contact(&d2, Scalar::ONE, &sh).unwrap_err(), Error::FormMultiplierMismatch);
        let bar2 = extend_to_contact(&d2, s(&f, 4), &sh).unwrap();
        // d(pullback ω_K) = 2α ω_H
        let wk = omega(FormKind::K, &sh).unwrap();
        let wh_lift = omega(FormKind::K, &sh).unwrap().exterior_d();
        assert_eq!(wk.pullback(&bar2).unwrap().exterior_d(), wh_lift.scale(s(&f, 4)));
    }

    #[test]
    fn swap_in_k() {
        let k = alg(AlgebraKind::K1, &[1, 1, 1]);
        let sh = k.shape().clone();
        let f = f5();
        // x1 ↦ x2, x2 ↦ x1 has ω_H multiplier -1, so x3 ↦ -x3
        let g = mono(&sh, &[2, 1, 3], &[1, 1, -1]);
        let q = QuasiTorusRep::new(k, vec![g], None).unwrap();
        let res = diagonalize_k(&q).unwrap();
        let t = &res.torus_elements()[0];
        assert_eq!(f.mul(t[0], t[1]), t[2]);
        let x3 = res.conjugator.tuple()[2].clone();
        assert_eq!(x3, DpaElement::var(&x3.shape().clone(), 3).unwrap());
        let st = standardize(&q).unwrap();
        assert!(st.isomorphic);
        assert!(crate::grading::verify_grading(&st.standard).ok);
    }

    #[test]
    fn standardize_swap_in_w() {
        let w = alg(AlgebraKind::W, &[1, 1]);
        let sh = w.shape().clone();
        let q = QuasiTorusRep::new(w, vec![mono(&sh, &[2, 1], &[1, 1])], None).unwrap();
        let st = standardize(&q).unwrap();
        assert!(st.isomorphic);
        assert_eq!(st.hom.images, vec![vec![0], vec![1]]);
        assert_eq!(st.standard.dims(), vec![(vec![0], 25), (vec![1], 25)]);
        assert_eq!(st.original.dims(), st.standard.dims());
    }

    #[test]
    fn diagonal_standardize_is_direct() {
        let s1 = alg(AlgebraKind::S1, &[1, 1, 1]);
        let sh = s1.shape().clone();
        let f = f5();
        let g = ContAut::diagonal(&sh, &[s(&f, 2), s(&f, 4), s(&f, 1)]).unwrap();
        let q = QuasiTorusRep::new(s1, vec![g], None).unwrap();
        let st = standardize(&q).unwrap();
        assert!(st.conjugation.conjugator.is_identity());
        assert_eq!(st.standard, grading_from_quasitorus(&q).unwrap());
    }
}
