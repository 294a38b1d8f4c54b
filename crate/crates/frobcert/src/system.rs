//! Problem forms and base selections shared across the solver modules.

use crate::delta::{self, DeltaError, DeltaStats};
use crate::matrix::{IntMatrix, RatMatrix};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("matrix must have rank {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("right-hand side length {found} does not match row count {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Delta(#[from] DeltaError),
    #[error("base must select {expected} indices, found {found}")]
    BadBaseSize { expected: usize, found: usize },
    #[error("selected base submatrix is singular")]
    SingularBase,
}

/// Canonical-form feasibility instance `A x <= b` with `A` of shape
/// `(n+k) x n` and full column rank `n`.
#[derive(Debug, Clone)]
pub struct CanonicalSystem {
    pub a: IntMatrix,
    pub b: Vec<BigInt>,
    stats: DeltaStats,
}

impl CanonicalSystem {
    pub fn new(a: IntMatrix, b: Vec<BigInt>) -> Result<Self, SystemError> {
        Self::with_minor_cap(a, b, delta::DEFAULT_MINOR_CAP)
    }

    pub fn with_minor_cap(a: IntMatrix, b: Vec<BigInt>, cap: u64) -> Result<Self, SystemError> {
        let n = a.cols();
        if a.rows() < n {
            return Err(SystemError::RankDeficient {
                expected: n,
                found: a.rank(),
            });
        }
        if b.len() != a.rows() {
            return Err(SystemError::LengthMismatch {
                expected: a.rows(),
                found: b.len(),
            });
        }
        let rank = a.rank();
        if rank != n {
            return Err(SystemError::RankDeficient {
                expected: n,
                found: rank,
            });
        }
        let stats = delta::delta_stats(&a, n, cap)?;
        Ok(CanonicalSystem { a, b, stats })
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    /// Number of extra rows beyond the dimension (`k` in `(n+k) x n`).
    pub fn codim(&self) -> usize {
        self.a.rows() - self.a.cols()
    }

    /// Certified `Delta(A)`, the maximum absolute rank-order minor.
    pub fn delta(&self) -> &BigInt {
        &self.stats.delta
    }

    pub fn stats(&self) -> &DeltaStats {
        &self.stats
    }

    /// Same matrix and cached statistics with a different right-hand side.
    pub fn with_rhs(&self, b: Vec<BigInt>) -> CanonicalSystem {
        assert_eq!(b.len(), self.a.rows());
        CanonicalSystem {
            a: self.a.clone(),
            b,
            stats: self.stats.clone(),
        }
    }

    /// Exact slacks `b - A x` at an integer point.
    pub fn slacks_at(&self, z: &[BigInt]) -> Vec<BigInt> {
        let az = self.a.mul_vec(z);
        self.b.iter().zip(az).map(|(b, v)| b - v).collect()
    }

    pub fn is_feasible(&self, z: &[BigInt]) -> bool {
        self.slacks_at(z).iter().all(|s| !s.is_negative())
    }
}

/// Standard-form feasibility instance `A x = b, x >= 0` with `A` of shape
/// `k x n` and full row rank `k`.
#[derive(Debug, Clone)]
pub struct StandardSystem {
    pub a: IntMatrix,
    pub b: Vec<BigInt>,
    stats: DeltaStats,
}

impl StandardSystem {
    pub fn new(a: IntMatrix, b: Vec<BigInt>) -> Result<Self, SystemError> {
        Self::with_minor_cap(a, b, delta::DEFAULT_MINOR_CAP)
    }

    pub fn with_minor_cap(a: IntMatrix, b: Vec<BigInt>, cap: u64) -> Result<Self, SystemError> {
        let k = a.rows();
        if b.len() != k {
            return Err(SystemError::LengthMismatch {
                expected: k,
                found: b.len(),
            });
        }
        let rank = a.rank();
        if rank != k {
            return Err(SystemError::RankDeficient {
                expected: k,
                found: rank,
            });
        }
        let stats = delta::delta_stats(&a, k, cap)?;
        Ok(StandardSystem { a, b, stats })
    }

    pub fn codim(&self) -> usize {
        self.a.rows()
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn delta(&self) -> &BigInt {
        &self.stats.delta
    }

    pub fn stats(&self) -> &DeltaStats {
        &self.stats
    }

    /// `Delta_gcd(A) = 1` means the instance is already normalized.
    pub fn is_normalized(&self) -> bool {
        self.stats.delta_gcd == BigInt::from(1)
    }

    pub fn is_feasible(&self, z: &[BigInt]) -> bool {
        z.iter().all(|v| !v.is_negative()) && self.a.mul_vec(z) == self.b
    }
}

/// A selected invertible square subsystem: rows of a canonical system or
/// columns of a standard one, with `delta_b = |det A_B|` and the derived
/// rational matrix `M` (`A_N A_B^{-1}` canonical, `A_B^{-1} A_N` standard).
#[derive(Debug, Clone)]
pub struct BaseSelection {
    pub indices: Vec<usize>,
    pub det_abs: BigInt,
    /// `None` when the base covers the whole system (no nonbase part).
    pub m: Option<RatMatrix>,
}

impl BaseSelection {
    /// Base of `n` rows for a canonical system; `M = A_N A_B^{-1}`.
    pub fn canonical(sys: &CanonicalSystem, rows: Vec<usize>) -> Result<Self, SystemError> {
        Self::canonical_rows(&sys.a, rows)
    }

    /// Same as [`BaseSelection::canonical`] on a bare matrix.
    pub fn canonical_rows(a: &IntMatrix, rows: Vec<usize>) -> Result<Self, SystemError> {
        let n = a.cols();
        if rows.len() != n {
            return Err(SystemError::BadBaseSize {
                expected: n,
                found: rows.len(),
            });
        }
        let a_b = a.select_rows(&rows);
        let det = a_b.det();
        if det.is_zero() {
            return Err(SystemError::SingularBase);
        }
        let inv = a_b.to_rational().inverse().expect("nonzero determinant");
        let nonbase = complement(&rows, a.rows());
        let m = if nonbase.is_empty() {
            None
        } else {
            Some(a.select_rows(&nonbase).to_rational().mul(&inv))
        };
        Ok(BaseSelection {
            indices: rows,
            det_abs: det.abs(),
            m,
        })
    }

    /// Base of `k` columns for a standard system; `M = A_B^{-1} A_N`.
    pub fn standard(a: &IntMatrix, cols: Vec<usize>) -> Result<Self, SystemError> {
        let k = a.rows();
        if cols.len() != k {
            return Err(SystemError::BadBaseSize {
                expected: k,
                found: cols.len(),
            });
        }
        let a_b = a.select_cols(&cols);
        let det = a_b.det();
        if det.is_zero() {
            return Err(SystemError::SingularBase);
        }
        let inv = a_b.to_rational().inverse().expect("nonzero determinant");
        let nonbase = complement(&cols, a.cols());
        let m = if nonbase.is_empty() {
            None
        } else {
            Some(inv.mul(&a.select_cols(&nonbase).to_rational()))
        };
        Ok(BaseSelection {
            indices: cols,
            det_abs: det.abs(),
            m,
        })
    }
}

/// Sorted complement of `selected` within `0..total`.
pub fn complement(selected: &[usize], total: usize) -> Vec<usize> {
    (0..total).filter(|i| !selected.contains(i)).collect()
}
