//! Dense exact matrices over arbitrary-precision integers and rationals.
//!
//! Every decision made by this crate is exact: there are no floating-point
//! code paths. `IntMatrix` stores `BigInt` entries in row-major order,
//! `RatMatrix` stores normalized `BigRational` entries (lowest terms,
//! positive denominator — `num-rational` maintains this automatically).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Exact rational vector.
pub type RatVector = Vec<BigRational>;

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    /// Zero matrix of the given shape. Panics on a zero dimension.
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        IntMatrix {
            rows,
            cols,
            data: entries,
        }
    }

    /// Convenience constructor from machine integers (tests, examples).
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        assert!(r >= 1);
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&v| BigInt::from(v)));
        }
        IntMatrix::from_entries(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for l in 0..self.cols {
                    acc += self.get(i, l) * other.get(l, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    acc += self.get(i, j) * &v[j];
                }
                acc
            })
            .collect()
    }

    /// Submatrix with the given rows and all columns, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        assert!(!rows.is_empty());
        let mut out = IntMatrix::zero(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out.set(i, j, self.get(r, j).clone());
            }
        }
        out
    }

    /// Submatrix with the given columns and all rows, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> IntMatrix {
        assert!(!cols.is_empty());
        let mut out = IntMatrix::zero(self.rows, cols.len());
        for i in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(i, c).clone());
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        self.select_rows(rows).select_cols(cols)
    }

    /// Stack `other` below `self`.
    pub fn stack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "column count mismatch in stack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix::from_entries(self.rows + other.rows, self.cols, data)
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Entry growth stays bounded by the size of the minors, and every
    /// intermediate division is exact.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "det requires a square matrix");
        let n = self.rows;
        let mut w: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = 1i8;
        let mut prev = BigInt::one();
        for t in 0..n {
            // pivot: first row at or below t with nonzero entry in column t
            let pivot_row = match (t..n).find(|&r| !w[r][t].is_zero()) {
                Some(r) => r,
                None => return BigInt::zero(),
            };
            if pivot_row != t {
                w.swap(pivot_row, t);
                sign = -sign;
            }
            for i in (t + 1)..n {
                for j in (t + 1)..n {
                    let num = &w[t][t] * &w[i][j] - &w[i][t] * &w[t][j];
                    w[i][j] = num / &prev;
                }
                w[i][t] = BigInt::zero();
            }
            prev = w[t][t].clone();
        }
        if sign < 0 {
            -w[n - 1][n - 1].clone()
        } else {
            w[n - 1][n - 1].clone()
        }
    }

    /// Rank over the rationals (fraction-free elimination with pivoting).
    pub fn rank(&self) -> usize {
        let mut w: Vec<Vec<BigInt>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..n {
            let pivot_row = match (rank..m).find(|&r| !w[r][col].is_zero()) {
                Some(r) => r,
                None => continue,
            };
            w.swap(pivot_row, rank);
            for i in (rank + 1)..m {
                for j in (col + 1)..n {
                    let num = &w[rank][col] * &w[i][j] - &w[i][col] * &w[rank][j];
                    w[i][j] = num / &prev;
                }
                w[i][col] = BigInt::zero();
            }
            prev = w[rank][col].clone();
            rank += 1;
            if rank == m {
                break;
            }
        }
        rank
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Dense exact rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigRational>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        RatMatrix {
            rows,
            cols,
            data: entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = RatMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigRational::zero();
                for l in 0..self.cols {
                    acc += self.get(i, l) * other.get(l, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> RatVector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigRational::zero();
                for j in 0..self.cols {
                    acc += self.get(i, j) * &v[j];
                }
                acc
            })
            .collect()
    }

    pub fn select_rows(&self, rows: &[usize]) -> RatMatrix {
        assert!(!rows.is_empty());
        let mut out = RatMatrix::zero(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out.set(i, j, self.get(r, j).clone());
            }
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> RatMatrix {
        assert!(!cols.is_empty());
        let mut out = RatMatrix::zero(self.rows, cols.len());
        for i in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(i, c).clone());
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        self.select_rows(rows).select_cols(cols)
    }

    /// Exact determinant by Gaussian elimination with first-nonzero pivoting.
    pub fn det(&self) -> BigRational {
        assert_eq!(self.rows, self.cols, "det requires a square matrix");
        let n = self.rows;
        let mut w: Vec<Vec<BigRational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut det = BigRational::one();
        for t in 0..n {
            let pivot_row = match (t..n).find(|&r| !w[r][t].is_zero()) {
                Some(r) => r,
                None => return BigRational::zero(),
            };
            if pivot_row != t {
                w.swap(pivot_row, t);
                det = -det;
            }
            let pivot = w[t][t].clone();
            det *= &pivot;
            for i in (t + 1)..n {
                if w[i][t].is_zero() {
                    continue;
                }
                let factor = &w[i][t] / &pivot;
                for j in t..n {
                    let delta = &factor * &w[t][j];
                    w[i][j] -= delta;
                }
            }
        }
        det
    }

    /// Exact inverse via Gauss-Jordan. Returns `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse requires a square matrix");
        let n = self.rows;
        let mut w: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for t in 0..n {
            let pivot_row = (t..n).find(|&r| !w[r][t].is_zero())?;
            w.swap(pivot_row, t);
            let pivot = w[t][t].clone();
            for j in t..2 * n {
                w[t][j] = &w[t][j] / &pivot;
            }
            for i in 0..n {
                if i == t || w[i][t].is_zero() {
                    continue;
                }
                let factor = w[i][t].clone();
                for j in t..2 * n {
                    let delta = &factor * &w[t][j];
                    w[i][j] -= delta;
                }
            }
        }
        let mut out = RatMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, w[i][n + j].clone());
            }
        }
        Some(out)
    }

    /// Convert to an integer matrix; `None` when some entry has denominator > 1.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        let mut data = Vec::with_capacity(self.data.len());
        for v in &self.data {
            if !v.denom().is_one() {
                return None;
            }
            data.push(v.numer().clone());
        }
        Some(IntMatrix::from_entries(self.rows, self.cols, data))
    }

    pub fn max_abs_entry(&self) -> BigRational {
        self.data
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// max_i sum_j |M_ij|, the row-wise l1 norm bound.
    pub fn max_row_l1(&self) -> BigRational {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .fold(BigRational::zero(), |acc, v| acc + v.abs())
            })
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Infinity norm of a rational vector.
pub fn inf_norm(v: &[BigRational]) -> BigRational {
    v.iter()
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// Convert an integer vector to rationals.
pub fn int_to_rat_vec(v: &[BigInt]) -> RatVector {
    v.iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect()
}

/// Convert machine integers to a BigInt vector (tests, examples).
pub fn bigint_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
