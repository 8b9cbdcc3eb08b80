//! Group gradings of the Cartan type algebras and their quasi-tori.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::autgrp::{Conjugation, ContAut};
use crate::error::{Error, Result};
use crate::field::{gcd, lcm, Field, FieldEmbedding, Scalar};
use crate::liealg::{canonical_multidegree, FormKind, LieAlgebra};
use crate::linalg::{axpy, SpanBuilder, SparseVec};

/// `Z^rank × Z/d_1 × … × Z/d_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl FgAbelianGroup {
    /// Torsion orders must exceed 1 and, when `p` is given, be prime to `p`.
    pub fn new(rank: usize, torsion: Vec<u64>, p: Option<u32>) -> Result<Self> {
        if torsion.iter().any(|&d| d < 2) {
            return Err(Error::InvalidInput("torsion orders must be at least 2".into()));
        }
        if let Some(p) = p {
            if torsion.iter().any(|&d| gcd(d, p as u64) != 1) {
                return Err(Error::InvalidInput("torsion orders must be prime to the characteristic".into()));
            }
        }
        Ok(FgAbelianGroup { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { rank, torsion: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Least common multiple of the torsion orders.
    pub fn exponent(&self) -> u64 {
        self.torsion.iter().fold(1, |a, &d| lcm(a, d))
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.len()]
    }

    pub fn reduce(&self, mut g: Vec<i64>) -> Vec<i64> {
        for (j, &d) in self.torsion.iter().enumerate() {
            g[self.rank + j] = g[self.rank + j].rem_euclid(d as i64);
        }
        g
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> Vec<i64> {
        self.reduce(a.iter().map(|x| k * x).collect())
    }

    pub fn check_elem(&self, g: &[i64]) -> Result<()> {
        if g.len() != self.len() {
            return Err(Error::InvalidInput("group element has the wrong length".into()));
        }
        Ok(())
    }
}

/// Homomorphism given by the images of the domain generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub domain: FgAbelianGroup,
    pub codomain: FgAbelianGroup,
    pub images: Vec<Vec<i64>>,
}

impl GroupHom {
    pub fn new(domain: FgAbelianGroup, codomain: FgAbelianGroup, images: Vec<Vec<i64>>) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(Error::InvalidInput("one image per domain generator is required".into()));
        }
        for g in &images {
            codomain.check_elem(g)?;
        }
        let images: Vec<Vec<i64>> = images.into_iter().map(|g| codomain.reduce(g)).collect();
        // d · (image of a torsion generator of order d) must vanish
        for (j, &d) in domain.torsion.iter().enumerate() {
            let img = codomain.scale(d as i64, &images[domain.rank + j]);
            if img.iter().any(|&x| x != 0) {
                return Err(Error::TorsionIncompatible);
            }
        }
        Ok(GroupHom { domain, codomain, images })
    }

    pub fn identity(g: &FgAbelianGroup) -> Self {
        let images = (0..g.len()).map(|i| (0..g.len()).map(|j| (i == j) as i64).collect()).collect();
        GroupHom { domain: g.clone(), codomain: g.clone(), images }
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let mut acc = self.codomain.zero();
        for (c, img) in x.iter().zip(&self.images) {
            for (a, b) in acc.iter_mut().zip(img) {
                *a += c * b;
            }
        }
        self.codomain.reduce(acc)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.codomain != other.domain {
            return Err(Error::GroupMismatch);
        }
        let images = self.images.iter().map(|g| other.apply(g)).collect();
        Ok(GroupHom { domain: self.domain.clone(), codomain: other.codomain.clone(), images })
    }
}

/// A grading of a Lie algebra by an abelian group: components as canonical
/// (reduced echelon) bases in `W` coordinates, sorted by degree.
#[derive(Clone, Debug)]
pub struct Grading {
    pub algebra: Arc<LieAlgebra>,
    pub group: FgAbelianGroup,
    pub components: Vec<(Vec<i64>, Vec<SparseVec>)>,
    /// The homomorphism `Z^m → G` when the grading is standard.
    pub source_hom: Option<GroupHom>,
}

impl PartialEq for Grading {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.kind() == other.algebra.kind()
            && self.algebra.shape() == other.algebra.shape()
            && self.group == other.group
            && self.components == other.components
    }
}

impl Grading {
    /// Builds from arbitrary spanning sets per degree (degrees reduced,
    /// components canonicalized, empty components dropped).
    pub fn from_parts(
        algebra: Arc<LieAlgebra>,
        group: FgAbelianGroup,
        parts: impl IntoIterator<Item = (Vec<i64>, Vec<SparseVec>)>,
        source_hom: Option<GroupHom>,
    ) -> Grading {
        let f = algebra.field().clone();
        let mut merged: BTreeMap<Vec<i64>, SpanBuilder> = BTreeMap::new();
        for (deg, vecs) in parts {
            let deg = group.reduce(deg);
            let sb = merged.entry(deg).or_insert_with(|| SpanBuilder::new(&f));
            for v in &vecs {
                sb.insert(v);
            }
        }
        let components = merged.into_iter().filter(|(_, s)| s.dim() > 0).map(|(d, s)| (d, s.into_rows())).collect();
        Grading { algebra, group, components, source_hom }
    }

    pub fn field(&self) -> &Field {
        self.algebra.field()
    }

    pub fn component(&self, degree: &[i64]) -> Option<&[SparseVec]> {
        self.components.iter().find(|(d, _)| d.as_slice() == degree).map(|(_, b)| b.as_slice())
    }

    pub fn support(&self) -> Vec<Vec<i64>> {
        self.components.iter().map(|(d, _)| d.clone()).collect()
    }

    pub fn dims(&self) -> Vec<(Vec<i64>, usize)> {
        self.components.iter().map(|(d, b)| (d.clone(), b.len())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.components.iter().map(|(_, b)| b.len()).sum()
    }

    /// The same grading over an extension field.
    pub fn lift(&self, algebra: Arc<LieAlgebra>, emb: &FieldEmbedding) -> Grading {
        let components =
            self.components.iter().map(|(d, b)| (d.clone(), b.iter().map(|v| lift_vec(emb, v)).collect())).collect();
        Grading { algebra, group: self.group.clone(), components, source_hom: self.source_hom.clone() }
    }
}

pub(crate) fn lift_vec(emb: &FieldEmbedding, v: &[(u32, Scalar)]) -> SparseVec {
    v.iter().map(|&(k, c)| (k, emb.map(c))).collect()
}

/// Checks that `hom: Z^m → G` factors through the weight lattice of the kind.
pub fn check_relations(kind: FormKind, hom: &GroupHom) -> Result<()> {
    let m = hom.domain.len();
    match kind {
        FormKind::W | FormKind::S => Ok(()),
        FormKind::H | FormKind::K => {
            let r = m / 2;
            let pair = |i: usize| hom.codomain.add(&hom.images[i], &hom.images[i + r]);
            let first = pair(0);
            if (1..r).any(|i| pair(i) != first) {
                return Err(Error::RelationViolation);
            }
            if kind == FormKind::K && hom.images[m - 1] != first {
                return Err(Error::RelationViolation);
            }
            Ok(())
        }
    }
}

/// The standard grading induced by `hom: Z^m → G`: `x^(a) ∂_k` has degree
/// `hom(a - ε_k)`.
pub fn standard_grading(algebra: &Arc<LieAlgebra>, hom: &GroupHom) -> Result<Grading> {
    let sh = algebra.shape();
    let m = sh.m();
    if hom.domain != FgAbelianGroup::free(m) {
        return Err(Error::InvalidInput("the homomorphism must be defined on Z^m".into()));
    }
    check_relations(algebra.kind().form_kind(), hom)?;
    let dim = sh.dim() as u32;
    let mut parts: BTreeMap<Vec<i64>, Vec<SparseVec>> = BTreeMap::new();
    for row in algebra.basis_coords() {
        let k = row[0].0;
        let b = canonical_multidegree(&sh.unpack(k % dim), (k / dim) as usize + 1);
        parts.entry(hom.apply(&b)).or_default().push(row.clone());
    }
    Ok(Grading::from_parts(algebra.clone(), hom.codomain.clone(), parts, Some(hom.clone())))
}

/// Pushes the degrees forward along `q`.
pub fn coarsen(gr: &Grading, q: &GroupHom) -> Result<Grading> {
    if q.domain != gr.group {
        return Err(Error::GroupMismatch);
    }
    let source = match &gr.source_hom {
        Some(h) => Some(h.then(q)?),
        None => None,
    };
    let parts: Vec<(Vec<i64>, Vec<SparseVec>)> = gr.components.iter().map(|(d, b)| (q.apply(d), b.clone())).collect();
    Ok(Grading::from_parts(gr.algebra.clone(), q.codomain.clone(), parts, source))
}

/// First failure found by [`verify_grading`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotInAlgebra { degree: Vec<i64>, index: usize },
    Dependent { degree: Vec<i64> },
    NotSpanning { rank: usize, expected: usize },
    Bracket { left: (Vec<i64>, usize), right: (Vec<i64>, usize) },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingCertificate {
    pub ok: bool,
    pub violation: Option<Violation>,
    pub pairs_checked: usize,
}

/// Checks the direct sum decomposition and `[L_g, L_h] ⊆ L_{g+h}`.
pub fn verify_grading(gr: &Grading) -> GradingCertificate {
    let alg = &gr.algebra;
    let f = alg.field();
    let fail = |v: Violation, n: usize| GradingCertificate { ok: false, violation: Some(v), pairs_checked: n };
    let mut all = SpanBuilder::new(f);
    let mut spans = Vec::with_capacity(gr.components.len());
    for (deg, basis) in &gr.components {
        let mut sb = SpanBuilder::new(f);
        for (i, v) in basis.iter().enumerate() {
            if !alg.contains_coords(v) {
                return fail(Violation::NotInAlgebra { degree: deg.clone(), index: i }, 0);
            }
            if !sb.insert(v) {
                return fail(Violation::Dependent { degree: deg.clone() }, 0);
            }
            if !all.insert(v) {
                return fail(Violation::Dependent { degree: deg.clone() }, 0);
            }
        }
        spans.push(sb);
    }
    if all.dim() != alg.dim() {
        return fail(Violation::NotSpanning { rank: all.dim(), expected: alg.dim() }, 0);
    }
    let index: BTreeMap<&Vec<i64>, usize> = gr.components.iter().enumerate().map(|(i, (d, _))| (d, i)).collect();
    let mut pairs = 0;
    for (x, (d1, b1)) in gr.components.iter().enumerate() {
        for (d2, b2) in &gr.components[x..] {
            let target = gr.group.add(d1, d2);
            let tspan = index.get(&target).map(|&t| &spans[t]);
            for (i, u) in b1.iter().enumerate() {
                for (j, v) in b2.iter().enumerate() {
                    pairs += 1;
                    let br = alg.bracket_coords(u, v);
                    if br.is_empty() {
                        continue;
                    }
                    let ok = tspan.is_some_and(|s| s.contains(&br));
                    if !ok {
                        return fail(Violation::Bracket { left: (d1.clone(), i), right: (d2.clone(), j) }, pairs);
                    }
                }
            }
        }
    }
    GradingCertificate { ok: true, violation: None, pairs_checked: pairs }
}

/// Commuting automorphisms of finite order prime to `p`, each preserving
/// the algebra, with declared orders (the true order divides the declared one).
#[derive(Clone, Debug)]
pub struct QuasiTorusRep {
    pub algebra: Arc<LieAlgebra>,
    pub generators: Vec<ContAut>,
    pub orders: Vec<u64>,
}

/// Search bound when computing generator orders.
pub const ORDER_LIMIT: u64 = 1 << 12;

impl QuasiTorusRep {
    pub fn new(algebra: Arc<LieAlgebra>, generators: Vec<ContAut>, orders: Option<Vec<u64>>) -> Result<Self> {
        let sh = algebra.shape();
        let p = sh.field().characteristic() as u64;
        if generators.iter().any(|g| g.shape() != sh) {
            return Err(Error::ShapeMismatch);
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes_with(b)? {
                    return Err(Error::NonCommuting);
                }
            }
        }
        let kind = algebra.kind().form_kind();
        for g in &generators {
            if !g.in_aut_group(kind)? {
                return Err(Error::NotInAutGroup);
            }
        }
        let orders = match orders {
            Some(o) => {
                if o.len() != generators.len() {
                    return Err(Error::InvalidInput("one order per generator is required".into()));
                }
                for (g, &e) in generators.iter().zip(&o) {
                    if e == 0 || e % p == 0 || !g.pow(e).is_identity() {
                        return Err(Error::NotSemisimple);
                    }
                }
                o
            }
            None => {
                let mut o = Vec::with_capacity(generators.len());
                for g in &generators {
                    let e = g.order(ORDER_LIMIT).ok_or(Error::NotSemisimple)?;
                    if e % p == 0 {
                        return Err(Error::NotSemisimple);
                    }
                    o.push(e);
                }
                o
            }
        };
        Ok(QuasiTorusRep { algebra, generators, orders })
    }

    pub fn trivial(algebra: Arc<LieAlgebra>) -> Self {
        QuasiTorusRep { algebra, generators: Vec::new(), orders: Vec::new() }
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, &e| lcm(a, e))
    }

    /// Moves everything to `F_{p^k'}` where all generator orders have
    /// primitive roots of unity; returns `self` unchanged if already so.
    pub fn with_eigenvalues(&self) -> Result<QuasiTorusRep> {
        self.lift_for_order(self.exponent())
    }

    /// Moves everything to the smallest extension containing a primitive
    /// `e`-th root of unity.
    pub fn lift_for_order(&self, e: u64) -> Result<QuasiTorusRep> {
        let f = self.algebra.field();
        let big = f.enlarged_for_order(e)?;
        if &big == f {
            return Ok(self.clone());
        }
        let emb = FieldEmbedding::new(f, &big)?;
        let algebra = Arc::new(self.algebra.lift(&emb));
        let generators = self.generators.iter().map(|g| g.lift(&emb, algebra.shape())).collect();
        Ok(QuasiTorusRep { algebra, generators, orders: self.orders.clone() })
    }
}

/// The eigenspace decomposition of the algebra under `Φ(Q)`, graded by
/// `Π Z/e_k` (generators of order 1 dropped); the degree of a joint
/// eigenvector with eigenvalues `ζ_{e_k}^{j_k}` is `(j_k)`.
pub fn grading_from_quasitorus(q: &QuasiTorusRep) -> Result<Grading> {
    let q = q.with_eigenvalues()?;
    let alg = &q.algebra;
    let f = alg.field().clone();
    let active: Vec<usize> = (0..q.generators.len()).filter(|&i| q.orders[i] > 1).collect();
    let group = FgAbelianGroup { rank: 0, torsion: active.iter().map(|&i| q.orders[i]).collect() };
    let mut parts: Vec<(Vec<i64>, Vec<SparseVec>)> = vec![(Vec::new(), alg.basis_coords().to_vec())];
    for &gi in &active {
        let e = q.orders[gi];
        let zeta = f.root_of_unity(e)?;
        let conj = Conjugation::new(&q.generators[gi])?;
        let mut next = Vec::new();
        for (label, vecs) in parts {
            let mut builders: Vec<SpanBuilder> = (0..e).map(|_| SpanBuilder::new(&f)).collect();
            for v in &vecs {
                // orbit v, g v, …, g^{e-1} v, then project onto each eigenvalue
                let mut orbit = Vec::with_capacity(e as usize);
                let mut cur = v.clone();
                for _ in 0..e {
                    orbit.push(cur.clone());
                    cur = conj.apply_coords(&cur);
                    if !alg.contains_coords(&cur) {
                        return Err(Error::NotInAutGroup);
                    }
                }
                if &cur != v {
                    return Err(Error::NotSemisimple);
                }
                for (j, sb) in builders.iter_mut().enumerate() {
                    let mut proj: SparseVec = Vec::new();
                    for (s, w) in orbit.iter().enumerate() {
                        let c = f.pow(zeta, -((j * s) as i64));
                        proj = axpy(&f, &proj, c, w);
                    }
                    if !proj.is_empty() {
                        sb.insert(&proj);
                    }
                }
            }
            for (j, sb) in builders.into_iter().enumerate() {
                if sb.dim() > 0 {
                    let mut l = label.clone();
                    l.push(j as i64);
                    next.push((l, sb.into_rows()));
                }
            }
        }
        parts = next;
    }
    Ok(Grading::from_parts(alg.clone(), group, parts, None))
}

/// The quasi-torus of a finite standard grading: one diagonal generator
/// `λ(t)` per torsion factor, `t_i = ζ_{d_j}^{hom(ε_i)_j}`.
pub fn quasitorus_from_grading(gr: &Grading) -> Result<QuasiTorusRep> {
    if !gr.group.is_finite() {
        return Err(Error::NonfiniteGroup);
    }
    let hom = gr.source_hom.as_ref().ok_or(Error::NotStandard)?;
    let f0 = gr.algebra.field();
    let big = f0.enlarged_for_order(gr.group.exponent())?;
    let algebra =
        if &big == f0 { gr.algebra.clone() } else { Arc::new(gr.algebra.lift(&FieldEmbedding::new(f0, &big)?)) };
    let sh = algebra.shape();
    let mut generators = Vec::new();
    for (j, &d) in gr.group.torsion.iter().enumerate() {
        let zeta = big.root_of_unity(d)?;
        let t: Vec<Scalar> = hom.images.iter().map(|img| big.pow(zeta, img[j])).collect();
        generators.push(ContAut::diagonal(sh, &t)?);
    }
    QuasiTorusRep::new(algebra, generators, Some(gr.group.torsion.clone()))
}

/// Whether `Φ(Ψ)` maps every component of `gr1` onto the component of
/// `gr2` of the same degree.
pub fn gradings_isomorphic(gr1: &Grading, gr2: &Grading, psi: &ContAut) -> Result<bool> {
    if gr1.group != gr2.group {
        return Err(Error::GroupMismatch);
    }
    if gr1.field() != gr2.field() || psi.shape() != gr1.algebra.shape() {
        return Err(Error::ContextMismatch);
    }
    if gr1.components.len() != gr2.components.len() {
        return Ok(false);
    }
    let conj = Conjugation::new(psi)?;
    let f = gr1.field();
    for (deg, basis) in &gr1.components {
        let Some(target) = gr2.component(deg) else {
            return Ok(false);
        };
        if target.len() != basis.len() {
            return Ok(false);
        }
        let tspan = SpanBuilder::from_rows(f, target.iter());
        for v in basis {
            if !tspan.contains(&conj.apply_coords(v)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpa::Shape;
    use crate::liealg::AlgebraKind;

    fn alg(kind: AlgebraKind, p: u32, n: &[u32]) -> Arc<LieAlgebra> {
        LieAlgebra::shared(kind, &Shape::new(&Field::prime(p).unwrap(), n).unwrap()).unwrap()
    }

    fn hom_to(group: &FgAbelianGroup, images: Vec<Vec<i64>>) -> GroupHom {
        GroupHom::new(FgAbelianGroup::free(images.len()), group.clone(), images).unwrap()
    }

    #[test]
    fn canonical_grading_of_w11() {
        let w = alg(AlgebraKind::W, 5, &[1]);
        let z = FgAbelianGroup::free(1);
        let gr = standard_grading(&w, &hom_to(&z, vec![vec![1]])).unwrap();
        assert_eq!(gr.support(), vec![vec![-1], vec![0], vec![1], vec![2], vec![3]]);
        assert!(gr.components.iter().all(|(_, b)| b.len() == 1));
        assert!(verify_grading(&gr).ok);
        let trivial = standard_grading(&w, &hom_to(&FgAbelianGroup::free(0), vec![vec![]])).unwrap();
        assert_eq!(trivial.components.len(), 1);
        assert_eq!(trivial.total_dim(), 5);
        // Z → Z/2
        let z2 = FgAbelianGroup::new(0, vec![2], Some(5)).unwrap();
        let q = GroupHom::new(z.clone(), z2, vec![vec![1]]).unwrap();
        let c = coarsen(&gr, &q).unwrap();
        assert_eq!(c.dims(), vec![(vec![0], 2), (vec![1], 3)]);
        assert!(verify_grading(&c).ok);
        assert_eq!(coarsen(&gr, &GroupHom::identity(&z)).unwrap(), gr);
    }

    #[test]
    fn multidegree_coarsens_to_total_degree() {
        let w = alg(AlgebraKind::W, 3, &[1, 1]);
        let z2 = FgAbelianGroup::free(2);
        let fine = standard_grading(&w, &hom_to(&z2, vec![vec![1, 0], vec![0, 1]])).unwrap();
        let sum = GroupHom::new(z2, FgAbelianGroup::free(1), vec![vec![1], vec![1]]).unwrap();
        let coarse = coarsen(&fine, &sum).unwrap();
        let direct = standard_grading(&w, &hom_to(&FgAbelianGroup::free(1), vec![vec![1], vec![1]])).unwrap();
        assert_eq!(coarse, direct);
        let table: Vec<(Vec<i64>, usize)> =
            w.canonical_grading_table().into_iter().map(|(d, n)| (vec![d], n)).collect();
        assert_eq!(coarse.dims(), table);
    }

    #[test]
    fn relation_and_torsion_errors() {
        let h = alg(AlgebraKind::H2, 5, &[1, 1, 1, 1]);
        let z = FgAbelianGroup::free(1);
        let bad = hom_to(&z, vec![vec![1], vec![0], vec![0], vec![0]]);
        assert_eq!(standard_grading(&h, &bad).unwrap_err(), Error::RelationViolation);
        let z4 = FgAbelianGroup::new(0, vec![4], Some(5)).unwrap();
        let z3 = FgAbelianGroup::new(0, vec![3], Some(5)).unwrap();
        assert_eq!(GroupHom::new(z4, z3, vec![vec![1]]).unwrap_err(), Error::TorsionIncompatible);
        assert!(FgAbelianGroup::new(0, vec![5], Some(5)).is_err());
    }

    #[test]
    fn broken_grading_is_caught() {
        let w = alg(AlgebraKind::W, 5, &[1, 1]);
        let z = FgAbelianGroup::free(1);
        let mut gr = standard_grading(&w, &hom_to(&z, vec![vec![1], vec![1]])).unwrap();
        let moved = gr.components[1].1.pop().unwrap();
        gr.components[2].1.push(moved);
        let cert = verify_grading(&gr);
        assert!(!cert.ok);
        assert!(matches!(cert.violation, Some(Violation::Bracket { .. })));
    }

    #[test]
    fn z4_grading_matches_eigenspaces() {
        let w = alg(AlgebraKind::W, 5, &[1, 1]);
        let f = w.field().clone();
        let z4 = FgAbelianGroup::new(0, vec![4], Some(5)).unwrap();
        let gr = standard_grading(&w, &hom_to(&z4, vec![vec![1], vec![0]])).unwrap();
        assert!(verify_grading(&gr).ok);
        // brute-force eigenspace oracle: λ(ζ,1) scales x^(a)∂_k by ζ^{a_1 - δ_{k1}}
        let zeta = f.root_of_unity(4).unwrap();
        let mut counts = BTreeMap::new();
        for row in w.basis_coords() {
            let d = Derivation::from_coords(w.shape(), row);
            let img = ContAut::diagonal(w.shape(), &[zeta, Scalar::ONE]).unwrap().phi_conjugate(&d).unwrap();
            let ratio = f.div(img.to_coords()[0].1, row[0].1).unwrap();
            *counts.entry(f.root_log(ratio, 4).unwrap() as i64).or_insert(0usize) += 1;
        }
        let expected: Vec<(Vec<i64>, usize)> = counts.into_iter().map(|(k, v)| (vec![k], v)).collect();
        assert_eq!(gr.dims(), expected);
        let q = quasitorus_from_grading(&gr).unwrap();
        assert_eq!(q.generators, vec![ContAut::diagonal(w.shape(), &[zeta, Scalar::ONE]).unwrap()]);
        assert_eq!(grading_from_quasitorus(&q).unwrap(), gr);
    }

    use crate::liealg::Derivation;

    #[test]
    fn swap_grading() {
        let w = alg(AlgebraKind::W, 5, &[1, 1]);
        let sh = w.shape().clone();
        let x = |i| crate::dpa::DpaElement::var(&sh, i).unwrap();
        let swap = ContAut::new(&sh, vec![x(2), x(1)]).unwrap();
        let q = QuasiTorusRep::new(w.clone(), vec![swap], None).unwrap();
        assert_eq!(q.orders, vec![2]);
        let gr = grading_from_quasitorus(&q).unwrap();
        assert!(verify_grading(&gr).ok);
        // x^(a)∂_k ↦ x^(swap a)∂_{swap k}: never fixed since k moves; all 2-cycles
        assert_eq!(gr.dims(), vec![(vec![0], 25), (vec![1], 25)]);
    }

    #[test]
    fn trivial_quasitorus() {
        let w = alg(AlgebraKind::W, 5, &[1]);
        let gr = grading_from_quasitorus(&QuasiTorusRep::trivial(w.clone())).unwrap();
        assert_eq!(gr.components.len(), 1);
        assert_eq!(gr.total_dim(), 5);
    }

    #[test]
    fn order_p_generator_rejected() {
        let w = alg(AlgebraKind::W, 5, &[1, 1]);
        let sh = w.shape().clone();
        let x = |i| crate::dpa::DpaElement::var(&sh, i).unwrap();
        let unip = ContAut::new(&sh, vec![&x(1) + &x(2), x(2)]).unwrap();
        assert_eq!(QuasiTorusRep::new(w, vec![unip], None).unwrap_err(), Error::NotSemisimple);
    }
}
