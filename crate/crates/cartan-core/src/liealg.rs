//! The Witt algebra `W(m; n)` and its Cartan type subalgebras.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use rand_core::RngCore;

use crate::dpa::{DpaElement, Shape};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::forms::{omega, DifferentialForm};
use crate::linalg::{axpy, scale, Matrix, SpanBuilder, SparseVec};

/// `Σ f_i ∂_i`.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    shape: Shape,
    comps: Vec<DpaElement>,
}

impl Derivation {
    pub fn zero(shape: &Shape) -> Self {
        Derivation { shape: shape.clone(), comps: vec![DpaElement::zero(shape); shape.m()] }
    }

    pub fn from_components(comps: Vec<DpaElement>) -> Result<Self> {
        let shape = comps.first().ok_or(Error::InvalidShape("empty derivation"))?.shape().clone();
        if comps.len() != shape.m() || comps.iter().any(|c| c.shape() != &shape) {
            return Err(Error::ShapeMismatch);
        }
        Ok(Derivation { shape, comps })
    }

    /// `c · x^(a) ∂_i` (1-based axis).
    pub fn monomial(shape: &Shape, a: &[u32], i: usize, c: Scalar) -> Result<Self> {
        shape.check_axis(i)?;
        let mut d = Self::zero(shape);
        d.comps[i - 1] = DpaElement::monomial(shape, a, c)?;
        Ok(d)
    }

    /// `∂_i`.
    pub fn partial(shape: &Shape, i: usize) -> Result<Self> {
        Self::monomial(shape, &vec![0; shape.m()], i, Scalar::ONE)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn components(&self) -> &[DpaElement] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.shape == other.shape {
            Ok(())
        } else {
            Err(Error::ShapeMismatch)
        }
    }

    /// `D(f) = Σ f_i ∂_i(f)`.
    pub fn apply(&self, f: &DpaElement) -> Result<DpaElement> {
        if f.shape() != &self.shape {
            return Err(Error::ShapeMismatch);
        }
        Ok(self.apply_unchecked(f))
    }

    pub(crate) fn apply_unchecked(&self, f: &DpaElement) -> DpaElement {
        let mut acc = DpaElement::zero(&self.shape);
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.partial0(i);
            if d.is_zero() {
                continue;
            }
            acc = acc.add_unchecked(Scalar::ONE, &c.mul_unchecked(&d));
        }
        acc
    }

    /// `[D, E]`, componentwise `D(E_j) - E(D_j)`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let minus = self.shape.field().from_i64(-1);
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(dj, ej)| self.apply_unchecked(ej).add_unchecked(minus, &other.apply_unchecked(dj)))
            .collect();
        Ok(Derivation { shape: self.shape.clone(), comps })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(Scalar::ONE, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(self.shape.field().from_i64(-1), other)
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: Scalar, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.add_unchecked(c, b)).collect();
        Ok(Derivation { shape: self.shape.clone(), comps })
    }

    pub fn scale(&self, c: Scalar) -> Self {
        Derivation { shape: self.shape.clone(), comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }

    /// Coordinates over the monomial basis `x^(a) ∂_i` of `W`, index
    /// `(i-1) · dim O + packed(a)`.
    pub fn to_coords(&self) -> SparseVec {
        let dim = self.shape.dim() as u32;
        let mut out = Vec::new();
        for (i, c) in self.comps.iter().enumerate() {
            out.extend(c.terms().iter().map(|&(u, x)| (i as u32 * dim + u, x)));
        }
        out
    }

    pub fn from_coords(shape: &Shape, v: &[(u32, Scalar)]) -> Self {
        let dim = shape.dim() as u32;
        let mut comps: Vec<SparseVec> = vec![Vec::new(); shape.m()];
        for &(k, x) in v {
            comps[(k / dim) as usize].push((k % dim, x));
        }
        Derivation {
            shape: shape.clone(),
            comps: comps.into_iter().map(|t| DpaElement::from_packed_unchecked(shape, t)).collect(),
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            write!(out, "({c})*d{}", i + 1)?;
        }
        if first {
            write!(out, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Bracket of two elements given in `W` coordinates, via
/// `[x^(a)∂_i, x^(b)∂_j] = x^(a) x^(b-ε_i) ∂_j - x^(b) x^(a-ε_j) ∂_i`.
pub fn bracket_coords(shape: &Shape, u: &[(u32, Scalar)], v: &[(u32, Scalar)]) -> SparseVec {
    let f = shape.field();
    let dim = shape.dim() as u32;
    let mut acc: BTreeMap<u32, Scalar> = BTreeMap::new();
    for &(ku, cu) in u {
        let (i, a) = ((ku / dim) as usize, ku % dim);
        for &(kv, cv) in v {
            let (j, b) = ((kv / dim) as usize, kv % dim);
            let c = f.mul(cu, cv);
            if let Some(bl) = shape.lower(b, i) {
                if let Some((w, s)) = shape.mono_mul(a, bl) {
                    let e = acc.entry(j as u32 * dim + w).or_insert(Scalar::ZERO);
                    *e = f.add(*e, f.mul(c, s));
                }
            }
            if let Some(al) = shape.lower(a, j) {
                if let Some((w, s)) = shape.mono_mul(b, al) {
                    let e = acc.entry(i as u32 * dim + w).or_insert(Scalar::ZERO);
                    *e = f.sub(*e, f.mul(c, s));
                }
            }
        }
    }
    acc.into_iter().filter(|x| !x.1.is_zero()).collect()
}

/// The family of a defining form.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormKind {
    W,
    S,
    H,
    K,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraKind {
    W,
    S,
    S1,
    H,
    H2,
    K,
    K1,
}

impl AlgebraKind {
    pub const ALL: [AlgebraKind; 7] = [
        AlgebraKind::W,
        AlgebraKind::S,
        AlgebraKind::S1,
        AlgebraKind::H,
        AlgebraKind::H2,
        AlgebraKind::K,
        AlgebraKind::K1,
    ];

    pub fn form_kind(self) -> FormKind {
        match self {
            AlgebraKind::W => FormKind::W,
            AlgebraKind::S | AlgebraKind::S1 => FormKind::S,
            AlgebraKind::H | AlgebraKind::H2 => FormKind::H,
            AlgebraKind::K | AlgebraKind::K1 => FormKind::K,
        }
    }

    /// Number of derived-algebra steps taken from the form stabilizer.
    pub fn derived_depth(self) -> usize {
        match self {
            AlgebraKind::S1 | AlgebraKind::K1 => 1,
            AlgebraKind::H2 => 2,
            _ => 0,
        }
    }

    /// The algebra this one is derived from.
    pub fn parent(self) -> Option<AlgebraKind> {
        match self {
            AlgebraKind::S1 => Some(AlgebraKind::S),
            AlgebraKind::H2 => Some(AlgebraKind::H),
            AlgebraKind::K1 => Some(AlgebraKind::K),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraKind::W => "W",
            AlgebraKind::S => "S",
            AlgebraKind::S1 => "S1",
            AlgebraKind::H => "H",
            AlgebraKind::H2 => "H2",
            AlgebraKind::K => "K",
            AlgebraKind::K1 => "K1",
        }
    }

    pub fn parse(s: &str) -> Option<AlgebraKind> {
        AlgebraKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }

    pub fn check(self, m: usize) -> Result<()> {
        check_form_kind(self.form_kind(), m)
    }
}

pub fn check_form_kind(kind: FormKind, m: usize) -> Result<()> {
    match kind {
        FormKind::W => Ok(()),
        FormKind::S if m < 3 => Err(Error::KindConstraintViolation("the special family needs m >= 3")),
        FormKind::H if !m.is_multiple_of(2) || m == 0 => {
            Err(Error::KindConstraintViolation("the Hamiltonian family needs m = 2r"))
        }
        FormKind::K if m % 2 != 1 || m < 3 => {
            Err(Error::KindConstraintViolation("the contact family needs m = 2r + 1 with r >= 1"))
        }
        _ => Ok(()),
    }
}

/// The index pairing `i ↦ i'` and sign `σ(i)` on `1..=2r`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SignConvention {
    pub r: usize,
}

impl SignConvention {
    pub fn prime(&self, i: usize) -> Option<usize> {
        if i >= 1 && i <= self.r {
            Some(i + self.r)
        } else if i > self.r && i <= 2 * self.r {
            Some(i - self.r)
        } else {
            None
        }
    }

    pub fn sigma(&self, i: usize) -> Option<i64> {
        if i >= 1 && i <= self.r {
            Some(1)
        } else if i > self.r && i <= 2 * self.r {
            Some(-1)
        } else {
            None
        }
    }
}

/// `φ_X(b)` for `b ∈ Z^m`: identity for W and S; for H and K the
/// coordinates `(b_i - b_{i'})_{i<=r}` followed by `Σ_{r<i<=2r} b_i`
/// (plus `b_m` for K).
pub fn lattice_weight(kind: FormKind, b: &[i64]) -> Vec<i64> {
    match kind {
        FormKind::W | FormKind::S => b.to_vec(),
        FormKind::H | FormKind::K => {
            let r = b.len() / 2;
            let mut w: Vec<i64> = (0..r).map(|i| b[i] - b[i + r]).collect();
            let mut last: i64 = b[r..2 * r].iter().sum();
            if kind == FormKind::K {
                last += b[2 * r];
            }
            w.push(last);
            w
        }
    }
}

/// Rank of the lattice `φ_X(Z^m)`.
pub fn lattice_rank(kind: FormKind, m: usize) -> usize {
    match kind {
        FormKind::W | FormKind::S => m,
        FormKind::H => m / 2 + 1,
        FormKind::K => (m - 1) / 2 + 1,
    }
}

/// Canonical `Z`-degree of `x^(a) ∂_i` (1-based `i`).
pub fn canonical_degree(a: &[u32], i: usize, kind: AlgebraKind) -> i64 {
    let m = a.len();
    match kind.form_kind() {
        FormKind::K => {
            let s: i64 = a[..m - 1].iter().map(|&x| x as i64).sum();
            s + 2 * a[m - 1] as i64 - 1 - if i == m { 1 } else { 0 }
        }
        _ => a.iter().map(|&x| x as i64).sum::<i64>() - 1,
    }
}

/// `a - ε_i`.
pub fn canonical_multidegree(a: &[u32], i: usize) -> Vec<i64> {
    let mut d: Vec<i64> = a.iter().map(|&x| x as i64).collect();
    d[i - 1] -= 1;
    d
}

pub const DEFAULT_DIMENSION_CAP: usize = 2000;

/// One of W, S, S^(1), H, H^(2), K, K^(1) on a fixed shape.
///
/// The basis is the reduced row echelon basis (in `W` coordinates) of the
/// subalgebra; every basis vector is homogeneous for the lattice weight
/// `φ_X(a - ε_i)` of its kind. Build once and share through an `Arc`.
pub struct LieAlgebra {
    kind: AlgebraKind,
    shape: Shape,
    span: SpanBuilder,
    weights: Vec<Vec<i64>>,
    blocks: BTreeMap<Vec<i64>, Vec<usize>>,
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({};{:?}) dim {}", self.kind.name(), self.shape.m(), self.shape.n(), self.dim())
    }
}

/// Lattice weight of the `W` coordinate `k`.
fn coord_weight(shape: &Shape, kind: FormKind, k: u32) -> Vec<i64> {
    let dim = shape.dim() as u32;
    let a = shape.unpack(k % dim);
    lattice_weight(kind, &canonical_multidegree(&a, (k / dim) as usize + 1))
}

impl LieAlgebra {
    pub fn new(kind: AlgebraKind, shape: &Shape) -> Result<LieAlgebra> {
        kind.check(shape.m())?;
        match kind.parent() {
            Some(parent) => {
                let mut cur = LieAlgebra::new(parent, shape)?;
                for _ in 0..kind.derived_depth() {
                    cur = cur.derived();
                }
                cur.kind = kind;
                Ok(cur)
            }
            None => Ok(Self::stabilizer(kind, shape)),
        }
    }

    pub fn shared(kind: AlgebraKind, shape: &Shape) -> Result<Arc<LieAlgebra>> {
        Self::new(kind, shape).map(Arc::new)
    }

    fn from_rows(kind: AlgebraKind, shape: &Shape, rows: Vec<SparseVec>) -> LieAlgebra {
        let f = shape.field();
        let fk = kind.form_kind();
        let mut span = SpanBuilder::new(f);
        for r in &rows {
            span.insert(r);
        }
        let weights: Vec<Vec<i64>> = span.rows().iter().map(|r| coord_weight(shape, fk, r[0].0)).collect();
        let mut blocks: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for (i, w) in weights.iter().enumerate() {
            blocks.entry(w.clone()).or_default().push(i);
        }
        LieAlgebra { kind, shape: shape.clone(), span, weights, blocks }
    }

    /// W, or the stabilizer of the defining form computed block by block.
    fn stabilizer(kind: AlgebraKind, shape: &Shape) -> LieAlgebra {
        let fk = kind.form_kind();
        let total = (shape.m() * shape.dim()) as u32;
        if fk == FormKind::W {
            let rows = (0..total).map(|k| vec![(k, Scalar::ONE)]).collect();
            return Self::from_rows(kind, shape, rows);
        }
        let f = shape.field();
        let form = omega(fk, shape).expect("kind checked");
        let mut w_blocks: BTreeMap<Vec<i64>, Vec<u32>> = BTreeMap::new();
        for k in 0..total {
            w_blocks.entry(coord_weight(shape, fk, k)).or_default().push(k);
        }
        let m = shape.m();
        let mut rows = Vec::new();
        for members in w_blocks.values() {
            let images: Vec<SparseVec> = members
                .iter()
                .map(|&k| {
                    let d = Derivation::from_coords(shape, &[(k, Scalar::ONE)]);
                    let mut img = form.derivation_action(&d).expect("same shape");
                    if fk == FormKind::K {
                        // subtract (dx_m coefficient) · ω_K
                        let c = img.coefficient(&[m]);
                        img = img.sub(&form.mul_function(&c).expect("same shape")).expect("same shape");
                    }
                    img.to_sparse()
                })
                .collect();
            let mut index: BTreeMap<u32, usize> = BTreeMap::new();
            for img in &images {
                for &(k, _) in img {
                    let n = index.len();
                    index.entry(k).or_insert(n);
                }
            }
            let mut mat = Matrix::zero(index.len(), members.len());
            for (j, img) in images.iter().enumerate() {
                for &(k, c) in img {
                    mat.set(index[&k], j, c);
                }
            }
            for kv in mat.kernel(f) {
                let row: SparseVec =
                    members.iter().zip(kv).filter(|(_, c)| !c.is_zero()).map(|(&k, c)| (k, c)).collect();
                rows.push(row);
            }
        }
        Self::from_rows(kind, shape, rows)
    }

    /// The same algebra over the target field of `emb`.
    pub fn lift(&self, emb: &crate::field::FieldEmbedding) -> LieAlgebra {
        let shape = self.shape.with_field(emb.target());
        let rows = self.span.rows().iter().map(|r| r.iter().map(|&(k, c)| (k, emb.map(c))).collect()).collect();
        Self::from_rows(self.kind, &shape, rows)
    }

    /// `[L, L]`, computed block by block over the lattice weights.
    pub fn derived(&self) -> LieAlgebra {
        let f = self.field();
        let keys: Vec<&Vec<i64>> = self.blocks.keys().collect();
        let mut targets: BTreeMap<Vec<i64>, SpanBuilder> = BTreeMap::new();
        for (x, w1) in keys.iter().enumerate() {
            for w2 in &keys[x..] {
                let w: Vec<i64> = w1.iter().zip(w2.iter()).map(|(a, b)| a + b).collect();
                let Some(cap) = self.blocks.get(&w).map(|b| b.len()) else {
                    continue;
                };
                let tgt = targets.entry(w).or_insert_with(|| SpanBuilder::new(f));
                if tgt.dim() == cap {
                    continue;
                }
                let b1 = &self.blocks[*w1];
                let b2 = &self.blocks[*w2];
                'outer: for (ia, &i) in b1.iter().enumerate() {
                    let start = if w1 == w2 { ia + 1 } else { 0 };
                    for &j in &b2[start..] {
                        let br = bracket_coords(&self.shape, &self.span.rows()[i], &self.span.rows()[j]);
                        if !br.is_empty() {
                            tgt.insert(&br);
                            if tgt.dim() == cap {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        let rows = targets.into_values().flat_map(|b| b.into_rows()).collect();
        Self::from_rows(self.kind, &self.shape, rows)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn field(&self) -> &Field {
        self.shape.field()
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    /// Basis in `W` coordinates (reduced echelon rows, sorted by pivot).
    pub fn basis_coords(&self) -> &[SparseVec] {
        self.span.rows()
    }

    pub fn basis(&self) -> Vec<Derivation> {
        self.span.rows().iter().map(|r| Derivation::from_coords(&self.shape, r)).collect()
    }

    pub fn basis_element(&self, i: usize) -> Derivation {
        Derivation::from_coords(&self.shape, &self.span.rows()[i])
    }

    /// Lattice weight of each basis vector.
    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    /// Canonical `Z`-degree of the `i`-th basis vector.
    pub fn degree_of(&self, i: usize) -> i64 {
        let dim = self.shape.dim() as u32;
        let k = self.span.rows()[i][0].0;
        canonical_degree(&self.shape.unpack(k % dim), (k / dim) as usize + 1, self.kind)
    }

    /// `(degree, dimension)` of the canonical `Z`-grading, sorted by degree.
    pub fn canonical_grading_table(&self) -> Vec<(i64, usize)> {
        let mut t: BTreeMap<i64, usize> = BTreeMap::new();
        for i in 0..self.dim() {
            *t.entry(self.degree_of(i)).or_default() += 1;
        }
        t.into_iter().collect()
    }

    pub fn contains_coords(&self, v: &[(u32, Scalar)]) -> bool {
        self.span.contains(v)
    }

    pub fn contains(&self, d: &Derivation) -> bool {
        d.shape() == &self.shape && self.span.contains(&d.to_coords())
    }

    /// Coordinates in the basis, or `None` if outside the algebra.
    pub fn coords(&self, v: &[(u32, Scalar)]) -> Option<Vec<Scalar>> {
        self.span.coords(v)
    }

    pub fn from_basis_coords(&self, c: &[Scalar]) -> SparseVec {
        let f = self.field();
        let mut acc = Vec::new();
        for (x, r) in c.iter().zip(self.span.rows()) {
            if !x.is_zero() {
                acc = axpy(f, &acc, *x, r);
            }
        }
        acc
    }

    pub fn bracket_coords(&self, u: &[(u32, Scalar)], v: &[(u32, Scalar)]) -> SparseVec {
        bracket_coords(&self.shape, u, v)
    }

    /// Random element: a combination of up to `terms` basis vectors.
    pub fn random_element(&self, rng: &mut dyn RngCore, terms: usize) -> SparseVec {
        let f = self.field();
        let q = f.order();
        let mut acc = Vec::new();
        for _ in 0..terms {
            let i = (rng.next_u64() % self.dim() as u64) as usize;
            let c = f.from_packed((rng.next_u64() % q) as u32).unwrap();
            acc = axpy(f, &acc, c, &self.span.rows()[i]);
        }
        acc
    }

    /// Jacobi identity and anticommutativity on one triple; returns whether both hold.
    pub fn check_axioms(&self, a: &SparseVec, b: &SparseVec, c: &SparseVec) -> bool {
        let f = self.field();
        let br = |x: &SparseVec, y: &SparseVec| bracket_coords(&self.shape, x, y);
        let j1 = br(a, &br(b, c));
        let j2 = br(b, &br(c, a));
        let j3 = br(c, &br(a, b));
        let jac = axpy(f, &axpy(f, &j1, Scalar::ONE, &j2), Scalar::ONE, &j3);
        let anti = axpy(f, &br(a, b), Scalar::ONE, &br(b, a));
        let closed = self.contains_coords(&br(a, b));
        jac.is_empty() && anti.is_empty() && closed
    }

    /// Whether every basis vector generates the whole algebra as an ideal.
    pub fn is_ideal_free(&self, cap: usize) -> Result<bool> {
        let n = self.dim();
        if n > cap {
            return Err(Error::DimensionCapExceeded { dim: n, cap });
        }
        let f = self.field();
        let rows = self.span.rows();
        let mut generating: BTreeSet<SparseVec> = BTreeSet::new();
        // process low degrees last: they tend to generate quickly once higher
        // ones are known
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| core::cmp::Reverse(self.degree_of(i)));
        for &start in &order {
            if generating.contains(&rows[start]) {
                continue;
            }
            let mut ideal = SpanBuilder::new(f);
            ideal.insert(&rows[start]);
            let mut queue = vec![rows[start].clone()];
            let mut full = false;
            while let Some(u) = queue.pop() {
                for b in rows {
                    let br = bracket_coords(&self.shape, b, &u);
                    if br.is_empty() {
                        continue;
                    }
                    let normalized = scale(f, f.inv(br[0].1).unwrap(), &br);
                    if generating.contains(&normalized) {
                        full = true;
                        break;
                    }
                    if ideal.insert(&br) {
                        if ideal.dim() == n {
                            full = true;
                            break;
                        }
                        queue.push(br);
                    }
                }
                if full {
                    break;
                }
            }
            if !full {
                return Ok(false);
            }
            generating.insert(rows[start].clone());
        }
        Ok(true)
    }

    pub fn weight_blocks(&self) -> &BTreeMap<Vec<i64>, Vec<usize>> {
        &self.blocks
    }

    pub fn index_range(&self) -> Range<usize> {
        0..self.dim()
    }

    /// Re-checks form membership of every basis vector through the forms module.
    pub fn verify_form_membership(&self) -> bool {
        let fk = self.kind.form_kind();
        if fk == FormKind::W {
            return true;
        }
        let form = omega(fk, &self.shape).expect("kind checked");
        self.basis().iter().all(|d| {
            let img = form.derivation_action(d).expect("same shape");
            match fk {
                FormKind::K => img.is_zero() || img.function_multiple(&form).is_some(),
                _ => img.is_zero(),
            }
        })
    }
}

/// Defining form of the algebra, or `None` for W.
pub fn defining_form(kind: AlgebraKind, shape: &Shape) -> Option<DifferentialForm> {
    omega(kind.form_kind(), shape).ok()
}
