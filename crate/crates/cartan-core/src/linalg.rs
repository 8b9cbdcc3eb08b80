//! Exact linear algebra over a [`Field`]: dense matrices, sparse vectors and
//! an incremental reduced-row-echelon span builder.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Sparse vector: `(coordinate, value)` pairs sorted by coordinate, no zeros.
pub type SparseVec = Vec<(u32, Scalar)>;

/// `a + c·b` for sparse vectors.
pub fn axpy(f: &Field, a: &[(u32, Scalar)], c: Scalar, b: &[(u32, Scalar)]) -> SparseVec {
    if c.is_zero() {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map(|x| x.0).unwrap_or(u32::MAX);
        let kb = b.get(j).map(|x| x.0).unwrap_or(u32::MAX);
        if ka < kb {
            out.push(a[i]);
            i += 1;
        } else if kb < ka {
            out.push((kb, f.mul(c, b[j].1)));
            j += 1;
        } else {
            let v = f.add(a[i].1, f.mul(c, b[j].1));
            if !v.is_zero() {
                out.push((ka, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(f: &Field, c: Scalar, a: &[(u32, Scalar)]) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|&(k, v)| (k, f.mul(c, v))).collect()
}

fn lookup(a: &[(u32, Scalar)], k: u32) -> Scalar {
    match a.binary_search_by_key(&k, |x| x.0) {
        Ok(i) => a[i].1,
        Err(_) => Scalar::ZERO,
    }
}

/// Incrementally maintained reduced row echelon basis of a subspace.
///
/// Every row has leading coefficient 1 at its pivot and zeros at every other
/// pivot column; rows are kept sorted by pivot, so two builders spanning the
/// same subspace hold identical rows.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    field: Field,
    rows: Vec<SparseVec>,
}

impl SpanBuilder {
    pub fn new(field: &Field) -> Self {
        SpanBuilder { field: field.clone(), rows: Vec::new() }
    }

    pub fn from_rows<'a>(field: &Field, rows: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut b = Self::new(field);
        for r in rows {
            b.insert(r);
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<SparseVec> {
        self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    fn pivot_pos(&self, col: u32) -> Option<usize> {
        self.rows.binary_search_by_key(&col, |r| r[0].0).ok()
    }

    /// Remainder of `v` after eliminating all pivot columns.
    pub fn reduce(&self, v: &[(u32, Scalar)]) -> SparseVec {
        let f = &self.field;
        let mut cur: SparseVec = v.to_vec();
        // pivots are increasing and each row is zero at the other pivots, so a
        // single left-to-right sweep suffices
        let mut idx = 0;
        while idx < cur.len() {
            let (col, val) = cur[idx];
            if let Some(p) = self.pivot_pos(col) {
                cur = axpy(f, &cur, f.neg(val), &self.rows[p]);
                // position idx now holds the next column (col was removed)
                continue;
            }
            idx += 1;
        }
        cur
    }

    pub fn contains(&self, v: &[(u32, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[(u32, Scalar)]) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let f = &self.field;
        let lead_inv = f.inv(r[0].1).unwrap();
        let r = scale(f, lead_inv, &r);
        let col = r[0].0;
        for row in self.rows.iter_mut() {
            let c = lookup(row, col);
            if !c.is_zero() {
                *row = axpy(f, row, f.neg(c), &r);
            }
        }
        let pos = self.rows.partition_point(|row| row[0].0 < col);
        self.rows.insert(pos, r);
        true
    }

    /// Coordinates of `v` in the row basis, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[(u32, Scalar)]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.rows.iter().map(|r| lookup(v, r[0].0)).collect())
    }

    /// Coordinates assuming `v` lies in the span (no membership check).
    pub fn coords_unchecked(&self, v: &[(u32, Scalar)]) -> Vec<Scalar> {
        self.rows.iter().map(|r| lookup(v, r[0].0)).collect()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let data = rows.into_iter().flatten().collect();
        Matrix { rows: r, cols: c, data }
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch);
        }
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, other.get(k, j))));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, f: &Field, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::ZERO;
                for j in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(i, j), v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn map(&self, mut g: impl FnMut(Scalar) -> Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| g(x)).collect() }
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, f: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if piv != r {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).unwrap();
            for j in 0..self.cols {
                let v = self.get(r, j);
                self.set(r, j, f.mul(v, inv));
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let fac = self.get(i, c);
                if fac.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(fac, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of the right null space `{v : A v = 0}`.
    pub fn kernel(&self, f: &Field) -> Vec<Vec<Scalar>> {
        let mut a = self.clone();
        let pivots = a.rref(f);
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![Scalar::ZERO; self.cols];
            v[free] = Scalar::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(a.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Scalar::ONE);
        }
        let piv = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }
}

/// Splits `space` (given by a basis) into joint eigenspaces of commuting
/// operators, each of known finite order `e_k` with eigenvalues powers of a
/// fixed root of unity `ζ_{e_k}`.
///
/// `ops[k]` acts on a vector in `space` and returns its image (which must lie
/// in `space` again). Returns `(exponent tuple, basis)` pairs sorted by
/// exponent tuple; basis vectors are in reduced echelon form.
pub fn joint_eigenspaces(
    f: &Field,
    space: &[SparseVec],
    orders: &[u64],
    ops: &mut [&mut dyn FnMut(&SparseVec) -> SparseVec],
) -> Result<Vec<(Vec<u64>, Vec<SparseVec>)>> {
    let mut parts: Vec<(Vec<u64>, Vec<SparseVec>)> = vec![(Vec::new(), space.to_vec())];
    for (k, op) in ops.iter_mut().enumerate() {
        let e = orders[k];
        let zeta = f.root_of_unity(e)?;
        let mut next = Vec::new();
        for (label, basis) in parts {
            if basis.is_empty() {
                continue;
            }
            let span = SpanBuilder::from_rows(f, basis.iter());
            let d = span.dim();
            // matrix of op restricted to the span, columns = images in row coords
            let mut mat = Matrix::zero(d, d);
            for (j, row) in span.rows().iter().enumerate() {
                let img = op(row);
                let c = span.coords(&img).ok_or(Error::NotInAutGroup)?;
                for (i, v) in c.into_iter().enumerate() {
                    mat.set(i, j, v);
                }
            }
            let mut total = 0;
            for j in 0..e {
                let ev = f.pow(zeta, j as i64);
                let shifted = {
                    let mut m = mat.clone();
                    for i in 0..d {
                        let v = f.sub(m.get(i, i), ev);
                        m.set(i, i, v);
                    }
                    m
                };
                let ker = shifted.kernel(f);
                if ker.is_empty() {
                    continue;
                }
                total += ker.len();
                let mut sub = SpanBuilder::new(f);
                for kv in ker {
                    let mut vec_acc: SparseVec = Vec::new();
                    for (i, c) in kv.into_iter().enumerate() {
                        if !c.is_zero() {
                            vec_acc = axpy(f, &vec_acc, c, &span.rows()[i]);
                        }
                    }
                    sub.insert(&vec_acc);
                }
                let mut l = label.clone();
                l.push(j);
                next.push((l, sub.into_rows()));
            }
            if total != d {
                return Err(Error::NotSemisimple);
            }
        }
        parts = next;
    }
    parts.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(parts)
}
