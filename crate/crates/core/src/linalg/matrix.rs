//! Dense row-major matrices over an exact [`Field`].
//!
//! Subspaces are represented by the row span of a matrix, while linear maps
//! act on column vectors: a `rows × cols` matrix is a map from a
//! `cols`-dimensional space to a `rows`-dimensional one.

use crate::error::{Error, Result};
use crate::linalg::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Output of Gauss–Jordan elimination.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<F: Field> {
    pub rank: usize,
    pub rref: Matrix<F>,
    pub pivots: Vec<usize>,
}

/// A chosen complement to a subspace, realizing `ambient / subspace`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quotient<F: Field> {
    /// `ambient × q`; its columns are representatives of a quotient basis.
    pub section: Matrix<F>,
    /// `q × ambient`; kills the subspace and satisfies `projection · section = I`.
    pub projection: Matrix<F>,
}

impl<F: Field> Quotient<F> {
    pub fn dim(&self) -> usize {
        self.projection.rows()
    }
}

impl<F: Field> Matrix<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}×{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let z = field.zero();
        Matrix { data: vec![z; rows * cols], field, rows, cols }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    /// Builds a matrix from explicit rows, each of length `cols`.
    pub fn from_rows(field: F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix { field, rows: r, cols, data })
    }

    /// Integer-literal constructor, mostly for tests and examples.
    pub fn from_i64(field: F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&v| field.from_i64(v)).collect::<Vec<_>>()
            })
            .collect();
        Matrix { field, rows: rows.len(), cols, data }
    }

    /// A single column.
    pub fn column(field: F, entries: Vec<F::Elem>) -> Self {
        let rows = entries.len();
        Matrix { field, rows, cols: 1, data: entries }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[F::Elem] {
        &self.data
    }
    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }
    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn col(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }
    pub fn row_vecs(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "cannot multiply {}×{} by {}×{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if f.is_zero(a) {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    if !f.is_zero(b) {
                        *o = f.mul_add(o, a, b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.mul_add(&acc, a, b))
            })
            .collect()
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&F::Elem, &F::Elem) -> F::Elem) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, s)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: &F::Elem, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        if self.field.is_zero(s) {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !self.field.is_zero(b) {
                *a = self.field.mul_add(a, s, b);
            }
        }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| self.field.neg(a)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Matrix { field: self.field.clone(), rows: self.rows, cols, data }
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix { field: self.field.clone(), rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for r in 0..self.rows {
            for &c in idx {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { field: self.field.clone(), rows: self.rows, cols: idx.len(), data }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = block.get(r, c).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(self.field.clone(), rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.data[r * cols + c] = self.get(r0 + r, c0 + c).clone();
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.field.clone(), self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    /// Gauss–Jordan elimination.
    pub fn rref(&self) -> Rref<F> {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col));
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), &inv);
                m.set(row, c, v);
            }
            let pivot_row: Vec<F::Elem> = m.row(row)[col..].to_vec();
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                let neg = f.neg(&factor);
                let base = r * m.cols;
                for (k, pv) in pivot_row.iter().enumerate() {
                    if !f.is_zero(pv) {
                        let idx = base + col + k;
                        m.data[idx] = f.mul_add(&m.data[idx], &neg, pv);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { rank: pivots.len(), rref: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Rows form a basis of the null space `{v : self · vᵀ = 0}`.
    pub fn kernel_basis(&self) -> Self {
        let Rref { rref, pivots, .. } = self.rref();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(f.clone(), free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(k, pc, f.neg(rref.get(i, fc)));
            }
        }
        out
    }

    /// Reduced basis of the row span.
    pub fn row_basis(&self) -> Self {
        let r = self.rref();
        r.rref.select_rows(&(0..r.rank).collect::<Vec<_>>())
    }

    /// Columns form a basis of the column span (a subset of the original columns).
    pub fn column_basis(&self) -> Self {
        let r = self.rref();
        self.select_cols(&r.pivots)
    }

    /// Some `X` with `self · X = rhs`, if one exists.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let aug = self.hstack(rhs);
        let Rref { rref, pivots, rank } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.field.clone(), self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate().take(rank) {
            for c in 0..rhs.cols {
                x.set(pc, c, rref.get(i, self.cols + c).clone());
            }
        }
        Some(x)
    }

    /// Some left inverse `Y` with `Y · self = I`, for a matrix of full column rank.
    pub fn left_inverse(&self) -> Option<Self> {
        let id = Self::identity(self.field.clone(), self.cols);
        self.transpose().solve(&id).map(|y| y.transpose())
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let id = Self::identity(self.field.clone(), self.rows);
        if self.rank() != self.rows {
            return None;
        }
        self.solve(&id)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// Free-function form of [`Matrix::rref`].
pub fn rank_and_rref<F: Field>(m: &Matrix<F>) -> (usize, Matrix<F>, Vec<usize>) {
    let r = m.rref();
    (r.rank, r.rref, r.pivots)
}

/// Free-function form of [`Matrix::kernel_basis`].
pub fn kernel_basis<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    m.kernel_basis()
}

/// Realizes `k^ambient / rowspan(subspace)` with a basis indexed by the
/// non-pivot columns of the reduced subspace.
pub fn quotient_basis<F: Field>(subspace: &Matrix<F>, ambient_dim: usize) -> Result<Quotient<F>> {
    if subspace.cols() != ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "subspace rows have length {}, ambient dimension is {ambient_dim}",
            subspace.cols()
        )));
    }
    let f = subspace.field().clone();
    let Rref { rref, pivots, .. } = subspace.rref();
    let free: Vec<usize> = (0..ambient_dim).filter(|c| !pivots.contains(c)).collect();
    let q = free.len();
    let mut section = Matrix::zeros(f.clone(), ambient_dim, q);
    let mut projection = Matrix::zeros(f.clone(), q, ambient_dim);
    let mut slot = vec![usize::MAX; ambient_dim];
    for (k, &c) in free.iter().enumerate() {
        section.set(c, k, f.one());
        projection.set(k, c, f.one());
        slot[c] = k;
    }
    for (i, &pc) in pivots.iter().enumerate() {
        for &c in &free {
            let v = rref.get(i, c);
            if !f.is_zero(v) {
                projection.set(slot[c], pc, f.neg(v));
            }
        }
    }
    Ok(Quotient { section, projection })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn identity_rank() {
        let f = PrimeField::new(5).unwrap();
        let (rank, _, piv) = rank_and_rref(&Matrix::identity(f, 2));
        assert_eq!((rank, piv), (2, vec![0, 1]));
    }

    #[test]
    fn zero_matrix_rank() {
        let (rank, _, piv) = rank_and_rref(&Matrix::zeros(f7(), 3, 4));
        assert_eq!(rank, 0);
        assert!(piv.is_empty());
    }

    #[test]
    fn dependent_rows_over_q() {
        let m = Matrix::from_i64(Rationals, &[&[1, 2], &[2, 4]]);
        let (rank, rref, piv) = rank_and_rref(&m);
        assert_eq!((rank, piv), (1, vec![0]));
        assert_eq!(rref, Matrix::from_i64(Rationals, &[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(f7(), 3).kernel_basis().rows(), 0);
        assert_eq!(Matrix::zeros(f7(), 2, 3).kernel_basis().rows(), 3);
        let m = Matrix::from_i64(f7(), &[&[1, 1, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 2);
        assert!(m.mul(&k.transpose()).is_zero());
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_basis(&Matrix::zeros(f7(), 0, 3), 3).unwrap();
        assert_eq!(q.projection, Matrix::identity(f7(), 3));
        let q = quotient_basis(&Matrix::identity(f7(), 3), 3).unwrap();
        assert_eq!(q.dim(), 0);
        let sub = Matrix::from_i64(Rationals, &[&[1, 1]]);
        let q = quotient_basis(&sub, 2).unwrap();
        assert_eq!(q.dim(), 1);
        assert!(q.projection.mul(&sub.transpose()).is_zero());
        assert!(quotient_basis(&sub, 3).is_err());
    }

    #[test]
    fn solve_and_inverse() {
        let m = Matrix::from_i64(Rationals, &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(Rationals, 2));
        let singular = Matrix::from_i64(Rationals, &[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
        let rhs = Matrix::from_i64(Rationals, &[&[1], &[3]]);
        assert!(singular.solve(&rhs).is_none());
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix<PrimeField>> {
        (0usize..6, 0usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(0u32..7, r * c)
                .prop_map(move |data| Matrix::new(f7(), r, c, data).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rank_plus_nullity(m in arb_matrix()) {
            prop_assert_eq!(m.rank() + m.kernel_basis().rows(), m.cols());
            prop_assert!(m.mul(&m.kernel_basis().transpose()).is_zero());
        }

        #[test]
        fn rref_is_idempotent(m in arb_matrix()) {
            let once = m.rref().rref;
            prop_assert_eq!(once.rref().rref, once.clone());
        }

        #[test]
        fn projection_inverts_section(m in arb_matrix()) {
            let q = quotient_basis(&m, m.cols()).unwrap();
            prop_assert_eq!(q.projection.mul(&q.section), Matrix::identity(f7(), q.dim()));
            prop_assert!(q.projection.mul(&m.transpose()).is_zero());
            prop_assert_eq!(q.dim(), m.cols() - m.rank());
        }
    }
}
