//! Dense matrices of exact scalars.
//!
//! Row-major storage, 0-based indexing. Every matrix carries the field it
//! lives over and all entries are checked against it at construction, so
//! the arithmetic kernels can skip per-operation field checks.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
    spec: FieldSpec,
}

impl ExactMatrix {
    pub fn zeros(spec: FieldSpec, rows: usize, cols: usize) -> ExactMatrix {
        ExactMatrix {
            rows,
            cols,
            entries: vec![spec.zero(); rows * cols],
            spec,
        }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(spec, n, n);
        for i in 0..n {
            m.set(i, i, spec.one());
        }
        m
    }

    pub fn from_rows(spec: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<ExactMatrix> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(height * width);
        for row in &rows {
            if row.len() != width {
                return Err(Error::ShapeMismatch {
                    expected: (height, width),
                    got: (height, row.len()),
                });
            }
            for s in row {
                if s.spec() != spec {
                    return Err(Error::FieldMismatch {
                        left: spec,
                        right: s.spec(),
                    });
                }
                entries.push(s.clone());
            }
        }
        Ok(ExactMatrix {
            rows: height,
            cols: width,
            entries,
            spec,
        })
    }

    /// Convenience constructor from integer literals.
    pub fn from_ints(spec: FieldSpec, rows: &[&[i64]]) -> ExactMatrix {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&n| Scalar::integer(spec, n)).collect())
            .collect();
        ExactMatrix::from_rows(spec, data).expect("literal rows have equal length")
    }

    pub fn from_fn(
        spec: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> ExactMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let s = f(i, j);
                assert_eq!(s.spec(), spec, "entry field must match the matrix field");
                entries.push(s);
            }
        }
        ExactMatrix {
            rows,
            cols,
            entries,
            spec,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        assert_eq!(value.spec(), self.spec, "entry field must match");
        self.entries[i * self.cols + j] = value;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.spec, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn add(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        self.require_same_shape(rhs)?;
        Ok(ExactMatrix::from_fn(
            self.spec,
            self.rows,
            self.cols,
            |i, j| self.get(i, j).add_unchecked(rhs.get(i, j)),
        ))
    }

    pub fn sub(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        self.require_same_shape(rhs)?;
        Ok(ExactMatrix::from_fn(
            self.spec,
            self.rows,
            self.cols,
            |i, j| self.get(i, j).sub_unchecked(rhs.get(i, j)),
        ))
    }

    pub fn scale(&self, factor: &Scalar) -> Result<ExactMatrix> {
        if factor.spec() != self.spec {
            return Err(Error::FieldMismatch {
                left: self.spec,
                right: factor.spec(),
            });
        }
        Ok(ExactMatrix::from_fn(
            self.spec,
            self.rows,
            self.cols,
            |i, j| self.get(i, j).mul_unchecked(factor),
        ))
    }

    fn require_same_shape(&self, rhs: &ExactMatrix) -> Result<()> {
        if self.spec != rhs.spec {
            return Err(Error::FieldMismatch {
                left: self.spec,
                right: rhs.spec,
            });
        }
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::ShapeMismatch {
                expected: (self.rows, self.cols),
                got: (rhs.rows, rhs.cols),
            });
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.spec != rhs.spec {
            return Err(Error::FieldMismatch {
                left: self.spec,
                right: rhs.spec,
            });
        }
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch {
                expected: (self.cols, self.cols),
                got: (rhs.rows, rhs.cols),
            });
        }
        let mut out = ExactMatrix::zeros(self.spec, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let acc = out.get(i, j).add_unchecked(&a.mul_unchecked(b));
                    out.set(i, j, acc);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product: block (i, j) of the result is `self[i][j] * rhs`.
    pub fn kron(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.spec != rhs.spec {
            return Err(Error::FieldMismatch {
                left: self.spec,
                right: rhs.spec,
            });
        }
        let (p, q) = (rhs.rows, rhs.cols);
        Ok(ExactMatrix::from_fn(
            self.spec,
            self.rows * p,
            self.cols * q,
            |i, j| self.get(i / p, j / q).mul_unchecked(rhs.get(i % p, j % q)),
        ))
    }

    /// Copy of the rectangle with the given row and column indices.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> ExactMatrix {
        ExactMatrix::from_fn(self.spec, row_idx.len(), col_idx.len(), |i, j| {
            self.get(row_idx[i], col_idx[j]).clone()
        })
    }

    /// The `size`×`size` block at block position (bi, bj) of a block matrix.
    pub fn block(&self, bi: usize, bj: usize, size: usize) -> ExactMatrix {
        ExactMatrix::from_fn(self.spec, size, size, |i, j| {
            self.get(bi * size + i, bj * size + j).clone()
        })
    }

    pub fn set_block(&mut self, bi: usize, bj: usize, block: &ExactMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(
                    bi * block.rows + i,
                    bj * block.cols + j,
                    block.get(i, j).clone(),
                );
            }
        }
    }

    /// Exact rank by Gaussian elimination with first-nonzero pivoting.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.echelonize()
    }

    /// dim ker = cols − rank.
    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    // Row echelon form in place; returns the rank. Pivot choice is the
    // first nonzero entry scanning down each column, so the result is
    // deterministic.
    fn echelonize(&mut self) -> usize {
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(src) = (pivot_row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(pivot_row, src);
            let inv = self.get(pivot_row, col).inv_unchecked();
            for j in col..self.cols {
                let v = self.get(pivot_row, j).mul_unchecked(&inv);
                self.set(pivot_row, j, v);
            }
            for r in 0..self.rows {
                if r == pivot_row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for j in col..self.cols {
                    let v = self
                        .get(r, j)
                        .sub_unchecked(&factor.mul_unchecked(self.get(pivot_row, j)));
                    self.set(r, j, v);
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// A canonical basis of the null space, one matrix column per basis
    /// vector. The basis comes from the reduced row echelon form with free
    /// variables in ascending column order, so it is deterministic.
    pub fn kernel_basis(&self) -> ExactMatrix {
        let mut work = self.clone();
        work.echelonize();
        // locate pivot columns
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        for r in 0..work.rows {
            if let Some(c) = (0..work.cols).find(|&c| !work.get(r, c).is_zero()) {
                pivots.push((r, c));
            }
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let free_cols: Vec<usize> = (0..work.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = ExactMatrix::zeros(self.spec, self.cols, free_cols.len());
        for (k, &fc) in free_cols.iter().enumerate() {
            basis.set(fc, k, self.spec.one());
            for &(r, c) in &pivots {
                basis.set(c, k, work.get(r, fc).neg());
            }
        }
        basis
    }

    /// Exact inverse via Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<ExactMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = ExactMatrix::identity(self.spec, n);
        for col in 0..n {
            let Some(src) = (col..n).find(|&r| !work.get(r, col).is_zero()) else {
                return Err(Error::Singular);
            };
            work.swap_rows(col, src);
            inv.swap_rows(col, src);
            let pivot_inv = work.get(col, col).inv_unchecked();
            for j in 0..n {
                let w = work.get(col, j).mul_unchecked(&pivot_inv);
                work.set(col, j, w);
                let v = inv.get(col, j).mul_unchecked(&pivot_inv);
                inv.set(col, j, v);
            }
            for r in 0..n {
                if r == col || work.get(r, col).is_zero() {
                    continue;
                }
                let factor = work.get(r, col).clone();
                for j in 0..n {
                    let w = work
                        .get(r, j)
                        .sub_unchecked(&factor.mul_unchecked(work.get(col, j)));
                    work.set(r, j, w);
                    let v = inv
                        .get(r, j)
                        .sub_unchecked(&factor.mul_unchecked(inv.get(col, j)));
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Stack `self` above `other`.
    pub fn vstack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch {
                left: self.spec,
                right: other.spec,
            });
        }
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                expected: (other.rows, self.cols),
                got: (other.rows, other.cols),
            });
        }
        Ok(ExactMatrix::from_fn(
            self.spec,
            self.rows + other.rows,
            self.cols,
            |i, j| {
                if i < self.rows {
                    self.get(i, j).clone()
                } else {
                    other.get(i - self.rows, j).clone()
                }
            },
        ))
    }

    /// Place `self` left of `other`.
    pub fn hstack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch {
                left: self.spec,
                right: other.spec,
            });
        }
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch {
                expected: (self.rows, other.cols),
                got: (other.rows, other.cols),
            });
        }
        Ok(ExactMatrix::from_fn(
            self.spec,
            self.rows,
            self.cols + other.cols,
            |i, j| {
                if j < self.cols {
                    self.get(i, j).clone()
                } else {
                    other.get(i, j - self.cols).clone()
                }
            },
        ))
    }

    /// Solve `self * x = b` for one particular solution, or `None` when the
    /// system is inconsistent. Free variables are set to zero, which makes
    /// the solution deterministic.
    pub fn solve(&self, b: &ExactMatrix) -> Option<ExactMatrix> {
        assert_eq!(b.rows, self.rows, "right-hand side height must match");
        assert_eq!(b.spec, self.spec, "right-hand side field must match");
        let mut work = self.hstack(b).expect("shapes checked");
        work.echelonize();
        // pivots of the augmented system
        let mut x = ExactMatrix::zeros(self.spec, self.cols, b.cols);
        for r in 0..work.rows {
            let Some(c) = (0..work.cols).find(|&c| !work.get(r, c).is_zero()) else {
                continue;
            };
            if c >= self.cols {
                return None; // a row 0 = nonzero
            }
            for k in 0..b.cols {
                x.set(c, k, work.get(r, self.cols + k).clone());
            }
        }
        Some(x)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
