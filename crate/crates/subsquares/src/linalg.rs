//! Interval vectors and matrices, real (point) matrices, and the mixed
//! products the solvers need. All interval results are outward-rounded.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::interval::{Interval, IntervalError};

/// Errors from point-matrix factorizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    /// Elimination hit a pivot below the singularity threshold.
    #[error("matrix is singular or numerically close to singular")]
    Singular,
    /// The operation requires a square matrix.
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
}

/// A box: one interval per component.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalVector {
    data: Vec<Interval>,
}

impl IntervalVector {
    pub fn new(data: Vec<Interval>) -> Self {
        IntervalVector { data }
    }

    /// A vector of `n` copies of `v`.
    pub fn filled(n: usize, v: Interval) -> Self {
        IntervalVector { data: vec![v; n] }
    }

    /// The symmetric box `[-r, r]^n`.
    pub fn symmetric(n: usize, r: f64) -> Self {
        Self::filled(n, Interval::new(-r, r))
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// True if any component is the empty interval (the box is empty as a set).
    pub fn has_empty_component(&self) -> bool {
        self.data.iter().any(Interval::is_empty)
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Interval> {
        self.data.iter()
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Interval] {
        &mut self.data
    }

    /// Componentwise midpoints.
    pub fn midpoint(&self) -> Result<Vec<f64>, IntervalError> {
        self.data.iter().map(Interval::midpoint).collect()
    }

    /// Componentwise radii.
    pub fn radius(&self) -> Result<Vec<f64>, IntervalError> {
        self.data.iter().map(Interval::radius).collect()
    }

    /// Sum of component widths. Errors if any component is empty or unbounded.
    pub fn width_sum(&self) -> Result<f64, IntervalError> {
        let mut s = 0.0;
        for x in &self.data {
            s += x.width()?;
        }
        Ok(s)
    }

    /// Product of component widths (box volume). Errors like [`Self::width_sum`].
    pub fn width_product(&self) -> Result<f64, IntervalError> {
        let mut p = 1.0;
        for x in &self.data {
            p *= x.width()?;
        }
        Ok(p)
    }

    /// Componentwise intersection. Components may come out empty; callers
    /// check [`Self::has_empty_component`] to detect an empty box.
    pub fn intersect(&self, other: &IntervalVector) -> IntervalVector {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        IntervalVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.intersect(b))
                .collect(),
        }
    }

    /// Componentwise set inclusion.
    pub fn subset_of(&self, other: &IntervalVector) -> bool {
        self.len() == other.len()
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.subset_of(b))
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        self.len() == x.len() && self.data.iter().zip(x).all(|(iv, &v)| iv.contains(v))
    }

    /// Keeps the rows listed in `idx`, in order.
    pub fn select(&self, idx: &[usize]) -> IntervalVector {
        IntervalVector {
            data: idx.iter().map(|&i| self.data[i]).collect(),
        }
    }
}

impl Index<usize> for IntervalVector {
    type Output = Interval;

    fn index(&self, i: usize) -> &Interval {
        &self.data[i]
    }
}

impl IndexMut<usize> for IntervalVector {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.data[i]
    }
}

impl FromIterator<Interval> for IntervalVector {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        IntervalVector {
            data: iter.into_iter().collect(),
        }
    }
}

/// Row-major matrix of intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Interval>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        IntervalMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Interval>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        IntervalMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Interval] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Keeps the rows listed in `idx`, in order.
    pub fn select_rows(&self, idx: &[usize]) -> IntervalMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        IntervalMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Entrywise midpoints (the center matrix).
    pub fn midpoint(&self) -> Result<PointMatrix, IntervalError> {
        let data = self
            .data
            .iter()
            .map(Interval::midpoint)
            .collect::<Result<_, _>>()?;
        Ok(PointMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Entrywise radii (the spread matrix).
    pub fn radius(&self) -> Result<PointMatrix, IntervalError> {
        let data = self
            .data
            .iter()
            .map(Interval::radius)
            .collect::<Result<_, _>>()?;
        Ok(PointMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Interval matrix-vector product, outward-rounded per operation.
    pub fn mul_vec(&self, v: &IntervalVector) -> IntervalVector {
        assert_eq!(self.cols, v.len(), "matrix/vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Interval::point(0.0);
                for (a, x) in self.row(i).iter().zip(v.iter()) {
                    acc = acc + *a * *x;
                }
                acc
            })
            .collect()
    }
}

impl Index<(usize, usize)> for IntervalMatrix {
    type Output = Interval;

    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntervalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Interval {
        &mut self.data[i * self.cols + j]
    }
}

/// Row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl PointMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        PointMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        PointMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Max row sum of absolute values (the infinity norm).
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    ///
    /// A pivot is rejected (the matrix reported singular) when its magnitude
    /// drops below `1e-12` times the matrix infinity norm, so near-singular
    /// inputs fail loudly instead of producing garbage preconditioners.
    pub fn inverse(&self) -> Result<PointMatrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let threshold = 1e-12 * self.inf_norm();
        // Augmented system [A | I], reduced in place to [I | A^-1].
        let mut a = self.data.clone();
        let mut inv = PointMatrix::identity(n).data;
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&p, &q| {
                    a[p * n + col]
                        .abs()
                        .partial_cmp(&a[q * n + col].abs())
                        .unwrap()
                })
                .unwrap();
            let pivot = a[pivot_row * n + col];
            if pivot.abs() <= threshold || !pivot.is_finite() {
                return Err(LinalgError::Singular);
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(pivot_row * n + j, col * n + j);
                    inv.swap(pivot_row * n + j, col * n + j);
                }
            }
            let inv_pivot = 1.0 / pivot;
            for j in 0..n {
                a[col * n + j] *= inv_pivot;
                inv[col * n + j] *= inv_pivot;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a[i * n + col];
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[i * n + j] -= f * a[col * n + j];
                    inv[i * n + j] -= f * inv[col * n + j];
                }
            }
        }
        Ok(PointMatrix {
            rows: n,
            cols: n,
            data: inv,
        })
    }

    /// Solves `self * x = rhs` by elimination (same pivoting as [`Self::inverse`]).
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        assert_eq!(rhs.len(), self.rows, "rhs length mismatch");
        let n = self.rows;
        let threshold = 1e-12 * self.inf_norm();
        let mut a = self.data.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&p, &q| {
                    a[p * n + col]
                        .abs()
                        .partial_cmp(&a[q * n + col].abs())
                        .unwrap()
                })
                .unwrap();
            let pivot = a[pivot_row * n + col];
            if pivot.abs() <= threshold || !pivot.is_finite() {
                return Err(LinalgError::Singular);
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(pivot_row * n + j, col * n + j);
                }
                b.swap(pivot_row, col);
            }
            for i in col + 1..n {
                let f = a[i * n + col] / pivot;
                if f == 0.0 {
                    continue;
                }
                for j in col..n {
                    a[i * n + j] -= f * a[col * n + j];
                }
                b[i] -= f * b[col];
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= a[i * n + j] * b[j];
            }
            b[i] = s / a[i * n + i];
        }
        Ok(b)
    }

    /// Point x interval matrix product; each real entry acts as a degenerate
    /// interval so the result is an outward-rounded enclosure of the exact
    /// product.
    pub fn mul_imat(&self, m: &IntervalMatrix) -> IntervalMatrix {
        assert_eq!(self.cols, m.rows(), "matrix dimension mismatch");
        let rows = self.rows;
        let cols = m.cols();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let mut acc = Interval::point(0.0);
                for k in 0..self.cols {
                    acc = acc + Interval::point(self.row(i)[k]) * m[(k, j)];
                }
                data.push(acc);
            }
        }
        IntervalMatrix::new(rows, cols, data)
    }

    /// Point matrix x interval vector product, outward-rounded.
    pub fn mul_ivec(&self, v: &IntervalVector) -> IntervalVector {
        assert_eq!(self.cols, v.len(), "matrix/vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Interval::point(0.0);
                for (a, x) in self.row(i).iter().zip(v.iter()) {
                    acc = acc + Interval::point(*a) * *x;
                }
                acc
            })
            .collect()
    }

    /// Real matrix-vector product (round-to-nearest, no interval bookkeeping).
    pub fn mul_point(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "matrix/vector dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for PointMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for PointMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}
