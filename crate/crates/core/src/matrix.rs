// SPDX-License-Identifier: Apache-2.0

//! Dense row-major matrices and Gaussian elimination over any [`Field`].
//!
//! Pivots are always the first nonzero entry in column order, so echelon
//! forms are deterministic.

use std::ops::Range;

use crate::error::{dims, Result};
use crate::field::{ExtElement, Field, Fq};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

/// Matrix over F_{q^m}.
pub type ExtMatrix = Matrix<ExtElement>;
/// Matrix over F_q.
pub type BaseMatrix = Matrix<Fq>;

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(dims("entry count", rows * cols, data.len()));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds from explicit rows; `cols` is needed for the zero-row case.
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(dims("row length", cols, r.len()));
            }
            data.extend(r);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut E {
        &mut self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [E] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for r in rows.clone() {
            data.extend_from_slice(&self.row(r)[cols.clone()]);
        }
        Matrix { rows: rows.len(), cols: cols.len(), data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            data.extend(idx.iter().map(|&c| row[c].clone()));
        }
        Matrix { rows: self.rows, cols: idx.len(), data }
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(dims("vstack columns", self.cols, other.cols));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(dims("hstack rows", self.rows, other.rows));
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(Matrix { rows: self.rows, cols: self.cols + other.cols, data })
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn map<T, G: FnMut(&E) -> T>(&self, g: G) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(g).collect() }
    }
}

pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Matrix<F::Elem> {
    Matrix::filled(rows, cols, f.zero())
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    let mut m = zeros(f, n, n);
    for i in 0..n {
        m.set(i, i, f.one());
    }
    m
}

pub fn is_zero<F: Field>(f: &F, a: &Matrix<F::Elem>) -> bool {
    a.data.iter().all(|x| f.is_zero(x))
}

pub fn mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if a.cols != b.rows {
        return Err(dims("matrix product inner dimension", a.cols, b.rows));
    }
    let mut out = zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if f.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                f.add_mul_assign(out.get_mut(i, j), x, b.get(k, j));
            }
        }
    }
    Ok(out)
}

pub fn add<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if a.shape() != b.shape() {
        return Err(dims("matrix sum", a.shape(), b.shape()));
    }
    let data = a.data.iter().zip(&b.data).map(|(x, y)| f.add(x, y)).collect();
    Ok(Matrix { rows: a.rows, cols: a.cols, data })
}

pub fn sub<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if a.shape() != b.shape() {
        return Err(dims("matrix difference", a.shape(), b.shape()));
    }
    let data = a.data.iter().zip(&b.data).map(|(x, y)| f.sub(x, y)).collect();
    Ok(Matrix { rows: a.rows, cols: a.cols, data })
}

/// Row-reduces in place. With `full`, entries above pivots are cleared too
/// (reduced row echelon form). Only columns in `0..pivot_cols` are eligible
/// as pivots; the remaining columns are carried along. Returns the pivot
/// columns in order.
pub fn eliminate<F: Field>(
    f: &F,
    a: &mut Matrix<F::Elem>,
    pivot_cols: usize,
    full: bool,
) -> Vec<usize> {
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols.min(cols) {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(a.get(i, c))) else {
            continue;
        };
        if pr != r {
            for j in c..cols {
                a.data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a.get(r, c)).expect("pivot is nonzero");
        for j in c..cols {
            let v = f.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        let pivot_row: Vec<F::Elem> = a.row(r)[c..].to_vec();
        let targets: Box<dyn Iterator<Item = usize>> =
            if full { Box::new((0..rows).filter(|&i| i != r)) } else { Box::new(r + 1..rows) };
        for i in targets {
            let factor = a.get(i, c).clone();
            if f.is_zero(&factor) {
                continue;
            }
            let row = &mut a.row_mut(i)[c..];
            for (slot, pv) in row.iter_mut().zip(&pivot_row) {
                if !f.is_zero(pv) {
                    f.sub_mul_assign(slot, &factor, pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Reduced row echelon form and its pivot columns.
pub fn rref<F: Field>(f: &F, a: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut m = a.clone();
    let pivots = eliminate(f, &mut m, a.cols, true);
    (m, pivots)
}

pub fn rank<F: Field>(f: &F, a: &Matrix<F::Elem>) -> usize {
    let mut m = a.clone();
    eliminate(f, &mut m, a.cols, false).len()
}

pub fn inverse<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    if a.rows != a.cols {
        return None;
    }
    let n = a.rows;
    let mut aug = a.hstack(&identity(f, n)).ok()?;
    let pivots = eliminate(f, &mut aug, n, true);
    if pivots.len() < n {
        return None;
    }
    Some(aug.submatrix(0..n, n..2 * n))
}

/// Rows form a basis of `{x : a·xᵀ = 0}`.
pub fn null_space<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let (r, pivots) = rref(f, a);
    let n = a.cols;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut out = zeros(f, free.len(), n);
    for (k, &fc) in free.iter().enumerate() {
        out.set(k, fc, f.one());
        for (i, &pc) in pivots.iter().enumerate() {
            out.set(k, pc, f.neg(r.get(i, fc)));
        }
    }
    out
}

/// Greedy left-to-right selection of a maximal set of independent rows.
pub fn independent_rows<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Vec<usize> {
    // Pivots of the transpose are exactly the greedily chosen rows.
    let mut t = a.transpose();
    eliminate(f, &mut t, a.rows, false)
}

/// True when the row spaces of `a` and `b` coincide.
pub fn same_row_space<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> bool {
    if a.cols != b.cols {
        return false;
    }
    let ra = rank(f, a);
    ra == rank(f, b) && ra == rank(f, &a.vstack(b).expect("same width"))
}

/// Precomputed solver for `u·M = y` with a fixed `k×d` matrix `M` and many
/// right-hand sides.
#[derive(Clone, Debug)]
pub struct LeftSolver<E> {
    k: usize,
    d: usize,
    pivots: Vec<usize>,
    /// Row operations that bring Mᵀ to reduced echelon form (d×d).
    transform: Matrix<E>,
    /// Basis of `{u : u·M = 0}` as rows.
    kernel: Matrix<E>,
}

impl<E: Clone> LeftSolver<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, m: &Matrix<E>) -> Self {
        let (k, d) = m.shape();
        let mut aug = m.transpose().hstack(&identity(f, d)).expect("same height");
        let pivots = eliminate(f, &mut aug, k, true);
        let transform = aug.submatrix(0..d, k..k + d);
        let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
        let mut kernel = zeros(f, free.len(), k);
        for (row, &fc) in free.iter().enumerate() {
            kernel.set(row, fc, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                kernel.set(row, pc, f.neg(aug.get(i, fc)));
            }
        }
        LeftSolver { k, d, pivots, transform, kernel }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn kernel(&self) -> &Matrix<E> {
        &self.kernel
    }

    /// One solution with free variables set to zero, or `None` when
    /// `y` is not in the row space of `M`.
    pub fn solve<F: Field<Elem = E>>(&self, f: &F, y: &[E]) -> Option<Vec<E>> {
        assert_eq!(y.len(), self.d, "right-hand side length");
        let rank = self.pivots.len();
        let mut u = vec![f.zero(); self.k];
        for i in 0..self.d {
            let row = self.transform.row(i);
            let mut acc = f.zero();
            for (t, yv) in row.iter().zip(y) {
                f.add_mul_assign(&mut acc, t, yv);
            }
            if i < rank {
                u[self.pivots[i]] = acc;
            } else if !f.is_zero(&acc) {
                return None;
            }
        }
        Some(u)
    }
}
