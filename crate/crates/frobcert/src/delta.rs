//! Subdeterminant statistics by exhaustive minor enumeration.
//!
//! `Delta_j` is the maximum absolute value over all `j x j` minors and
//! `Delta_gcd(.,j)` the gcd of those minors. Enumeration is capped: above
//! the cap the caller gets a `TooLarge` error instead of sampled values,
//! because downstream certificates must never rest on unverified bounds.

use crate::matrix::{IntMatrix, RatMatrix};
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub const DEFAULT_MINOR_CAP: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DeltaError {
    #[error("minor enumeration would visit {needed} minors, above the cap {cap}")]
    TooLarge { needed: u64, cap: u64 },
    #[error("requested order {order} exceeds rank {rank}")]
    OrderExceedsRank { order: usize, rank: usize },
}

/// Exact `max_t Delta_t^(1/t)` kept as the attaining pair `(t, Delta_t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetLowerBound {
    pub order: usize,
    pub value: BigInt,
}

/// Exact subdeterminant statistics of an integer matrix.
#[derive(Debug, Clone)]
pub struct DeltaStats {
    /// `Delta_j` for j = 1..=max_order (index j-1).
    pub delta_j: Vec<BigInt>,
    /// `Delta_gcd(.,j)` for j = 1..=max_order (index j-1).
    pub delta_gcd_j: Vec<BigInt>,
    /// `Delta_max_order`; equals `Delta(A)` when max_order = rank.
    pub delta: BigInt,
    /// `Delta_gcd(.,max_order)`.
    pub delta_gcd: BigInt,
    pub detlb: DetLowerBound,
    pub max_order: usize,
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn enumeration_cost(rows: usize, cols: usize, max_order: usize) -> u64 {
    let mut total: u64 = 0;
    for j in 1..=max_order {
        total = total.saturating_add(binomial(rows, j).saturating_mul(binomial(cols, j)));
    }
    total
}

/// Compares `a^(1/s)` vs `b^(1/t)` exactly via `a^t` vs `b^s`.
fn root_less(a: &BigInt, s: usize, b: &BigInt, t: usize) -> bool {
    a.pow(t as u32) < b.pow(s as u32)
}

/// Full minor enumeration up to `max_order`, capped.
pub fn delta_stats(m: &IntMatrix, max_order: usize, cap: u64) -> Result<DeltaStats, DeltaError> {
    let rank = m.rank();
    if max_order > rank || max_order == 0 {
        return Err(DeltaError::OrderExceedsRank {
            order: max_order,
            rank,
        });
    }
    let needed = enumeration_cost(m.rows(), m.cols(), max_order);
    if needed > cap {
        return Err(DeltaError::TooLarge { needed, cap });
    }
    let mut delta_j = Vec::with_capacity(max_order);
    let mut delta_gcd_j = Vec::with_capacity(max_order);
    for j in 1..=max_order {
        let mut best = BigInt::zero();
        let mut gcd = BigInt::zero();
        for rows in (0..m.rows()).combinations(j) {
            for cols in (0..m.cols()).combinations(j) {
                let d = m.submatrix(&rows, &cols).det();
                let a = d.abs();
                if a > best {
                    best = a.clone();
                }
                gcd = num_integer::gcd(gcd, a);
            }
        }
        delta_j.push(best);
        delta_gcd_j.push(gcd);
    }
    let mut detlb = DetLowerBound {
        order: 1,
        value: delta_j[0].clone(),
    };
    for (idx, v) in delta_j.iter().enumerate().skip(1) {
        let t = idx + 1;
        if root_less(&detlb.value, detlb.order, v, t) {
            detlb = DetLowerBound {
                order: t,
                value: v.clone(),
            };
        }
    }
    Ok(DeltaStats {
        delta: delta_j[max_order - 1].clone(),
        delta_gcd: delta_gcd_j[max_order - 1].clone(),
        delta_j,
        delta_gcd_j,
        detlb,
        max_order,
    })
}

/// Maximum absolute `j x j` minors of a rational matrix, `j = 1..=max_order`.
///
/// Used to audit base-search guarantees on `M(B)`, which is rational.
pub fn rat_delta_j(m: &RatMatrix, max_order: usize, cap: u64) -> Result<Vec<BigRational>, DeltaError> {
    let needed = enumeration_cost(m.rows(), m.cols(), max_order);
    if needed > cap {
        return Err(DeltaError::TooLarge { needed, cap });
    }
    let mut out = Vec::with_capacity(max_order);
    for j in 1..=max_order {
        let mut best = BigRational::zero();
        for rows in (0..m.rows()).combinations(j) {
            for cols in (0..m.cols()).combinations(j) {
                let a = m.submatrix(&rows, &cols).det().abs();
                if a > best {
                    best = a;
                }
            }
        }
        out.push(best);
    }
    Ok(out)
}

/// `max_t Delta_t^(1/t)` for a rational matrix as the attaining pair.
pub fn rat_detlb(delta_j: &[BigRational]) -> (usize, BigRational) {
    let mut best = (1usize, delta_j[0].clone());
    for (idx, v) in delta_j.iter().enumerate().skip(1) {
        let t = idx + 1;
        // a^(1/s) < b^(1/t)  <=>  a^t < b^s  for nonnegative rationals
        let lhs = best.1.pow(t as i32);
        let rhs = v.pow(best.0 as i32);
        if lhs < rhs {
            best = (t, v.clone());
        }
    }
    best
}

/// Smallest nonnegative integer `r` with `r^order >= x` (for envelope reporting).
pub fn ceil_root(x: &BigRational, order: usize) -> BigInt {
    if x <= &BigRational::zero() {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    loop {
        if BigRational::from_integer(r.pow(order as u32)) >= *x {
            return r;
        }
        r += 1;
    }
}
