use std::fmt;

use super::scalar::Scalar;
use super::subspace::{Subspace, Tracked};
use super::vector::{Accumulator, SparseVec};

/// Sparse matrix stored column by column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols: vec![SparseVec::zero(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix { rows: n, cols: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn scalar(n: usize, c: &Scalar) -> Self {
        Matrix { rows: n, cols: (0..n).map(|i| SparseVec::single(i, c.clone())).collect() }
    }

    pub fn diagonal(d: &[Scalar]) -> Self {
        Matrix { rows: d.len(), cols: d.iter().enumerate().map(|(i, c)| SparseVec::single(i, c.clone())).collect() }
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.max_index().is_none_or(|m| m < rows)));
        Matrix { rows, cols }
    }

    pub fn from_rows_dense(rows: &[Vec<Scalar>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut cols = vec![Vec::new(); c];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    cols[j].push((i, x.clone()));
                }
            }
        }
        Matrix { rows: r, cols: cols.into_iter().map(SparseVec::from_pairs).collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Scalar>> =
            rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect();
        Matrix::from_rows_dense(&dense)
    }

    pub fn from_entries(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, Scalar)>) -> Self {
        let mut cs = vec![Vec::new(); cols];
        for (r, c, x) in entries {
            assert!(r < rows && c < cols, "entry out of range");
            cs[c].push((r, x));
        }
        Matrix { rows, cols: cs.into_iter().map(SparseVec::from_pairs).collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols.len()
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.cols[c].get(r)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.nnz()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.cols.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |(i, x)| (*i, j, x)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::ZERO; self.ncols()]; self.rows];
        for (i, j, x) in self.entries() {
            out[i][j] = x.clone();
        }
        out
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for (j, x) in v.iter() {
            for (i, y) in self.cols[*j].iter() {
                terms.push((*i, y * x));
            }
        }
        SparseVec::from_pairs(terms)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols(), other.rows, "dimension mismatch in product");
        if self.rows >= 64 {
            let mut acc = Accumulator::new(self.rows);
            let cols = other
                .cols
                .iter()
                .map(|c| {
                    for (j, x) in c.iter() {
                        acc.add_scaled(&self.cols[*j], x);
                    }
                    acc.drain()
                })
                .collect();
            return Matrix { rows: self.rows, cols };
        }
        Matrix { rows: self.rows, cols: other.cols.iter().map(|c| self.mul_vec(c)).collect() }
    }

    pub fn add_scaled(&self, other: &Matrix, c: &Scalar) -> Matrix {
        assert_eq!((self.rows, self.ncols()), (other.rows, other.ncols()), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.add_scaled(b, c)).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.add_scaled(other, &Scalar::ONE)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add_scaled(other, &Scalar::int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_entries(self.ncols(), self.rows, self.entries().map(|(i, j, x)| (j, i, x.clone())))
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::ZERO;
        for (j, c) in self.cols.iter().enumerate() {
            t += &c.get(j);
        }
        t
    }

    /// Row-major flattening, the coordinate used for spans of matrices.
    pub fn flatten(&self) -> SparseVec {
        let n = self.ncols();
        SparseVec::from_pairs(self.entries().map(|(i, j, x)| (i * n + j, x.clone())).collect())
    }

    pub fn rank(&self) -> usize {
        let mut t = Tracked::new(self.rows, self.ncols());
        for (j, c) in self.cols.iter().enumerate() {
            t.insert(c.clone(), SparseVec::unit(j));
        }
        t.rank()
    }

    /// Full null space; rank + dim = number of columns.
    pub fn kernel(&self) -> Subspace {
        let mut t = Tracked::new(self.rows, self.ncols());
        let mut ker = Subspace::zero(self.ncols());
        for (j, c) in self.cols.iter().enumerate() {
            if let Some(dep) = t.insert(c.clone(), SparseVec::unit(j)) {
                ker.insert(dep);
            }
        }
        ker
    }

    pub fn image(&self) -> Subspace {
        Subspace::span(self.rows, self.cols.iter())
    }

    /// Some x with self·x = b, or None when b is outside the column space.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let mut t = Tracked::new(self.rows, self.ncols());
        for (j, c) in self.cols.iter().enumerate() {
            t.insert(c.clone(), SparseVec::unit(j));
        }
        t.express(b)
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        let ncols = blocks.first().map_or(0, |m| m.ncols());
        let mut offset = 0;
        let mut cols = vec![Vec::new(); ncols];
        for m in blocks {
            assert_eq!(m.ncols(), ncols, "vstack column mismatch");
            for (i, j, x) in m.entries() {
                cols[j].push((i + offset, x.clone()));
            }
            offset += m.rows;
        }
        Matrix { rows: offset, cols: cols.into_iter().map(SparseVec::from_pairs).collect() }
    }

    /// Kronecker product self ⊗ other.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r2, c2) = (other.rows, other.ncols());
        let mut cols = Vec::with_capacity(self.ncols() * c2);
        for a in &self.cols {
            for b in &other.cols {
                let mut terms = Vec::with_capacity(a.nnz() * b.nnz());
                for (i, x) in a.iter() {
                    for (k, y) in b.iter() {
                        terms.push((i * r2 + k, x * y));
                    }
                }
                cols.push(SparseVec::from_pairs(terms));
            }
        }
        Matrix { rows: self.rows * r2, cols }
    }

    pub fn map_entries(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix::from_entries(self.rows, self.ncols(), self.entries().map(|(i, j, x)| (i, j, f(x))))
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        Matrix { rows: self.rows, cols: idx.iter().map(|&j| self.cols[j].clone()).collect() }
    }

    /// Is self a multiple c·I; returns c.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 0 {
            return Some(Scalar::ZERO);
        }
        let c = self.cols[0].get(0);
        for (j, col) in self.cols.iter().enumerate() {
            let ok = if c.is_zero() {
                col.is_zero()
            } else {
                col.nnz() == 1 && col.get(j) == c
            };
            if !ok {
                return None;
            }
        }
        Some(c)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.ncols())?;
        for row in self.to_dense() {
            let s: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", s.join(", "))?;
        }
        write!(f, "]")
    }
}
