//! Constructive rounding of nonnegative fractional vectors.
//!
//! `round_nonneg` finds `z >= 0` integer with `z_i` in
//! `{floor(x_i), ceil(x_i)}` minimizing `||M (x - z)||_inf`. Up to a
//! configurable support size the minimum is exhaustive and certified; above
//! it a seeded heuristic reports its best value honestly. Pipelines consume
//! the exact achieved error, never an asymptotic bound, so the certificates
//! do not depend on unspecified constants.

use crate::delta::{ceil_root, rat_detlb};
use crate::matrix::{inf_norm, RatMatrix, RatVector};
use crate::Config;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiscrepancyError {
    #[error("{cols} columns exceed the exhaustive cap {cap}")]
    TooLarge { cols: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundingMethod {
    Exhaustive,
    Heuristic,
}

/// Outcome of rounding `x` against `M`.
#[derive(Debug, Clone)]
pub struct RoundingResult {
    pub z: Vec<BigInt>,
    /// Exact `||M (x - z)||_inf`.
    pub achieved: BigRational,
    pub method: RoundingMethod,
    /// True iff the choice is a global minimizer over the fractional support.
    pub certified: bool,
}

struct Rounder {
    support_len: usize,
    columns: Vec<RatVector>,
    best_sigma: Vec<u8>,
    best_value: BigRational,
}

impl Rounder {
    /// DFS in lexicographic sigma order; the first strict minimum found is
    /// therefore the lexicographically smallest minimizer.
    fn dfs(&mut self, pos: usize, sigma: &mut Vec<u8>, residual: &mut RatVector) {
        if pos == self.support_len {
            let value = inf_norm(residual);
            if value < self.best_value {
                self.best_value = value;
                self.best_sigma = sigma.clone();
            }
            return;
        }
        sigma.push(0);
        self.dfs(pos + 1, sigma, residual);
        sigma.pop();
        for (r, c) in residual.iter_mut().zip(self.columns[pos].iter()) {
            *r -= c;
        }
        sigma.push(1);
        self.dfs(pos + 1, sigma, residual);
        sigma.pop();
        for (r, c) in residual.iter_mut().zip(self.columns[pos].iter()) {
            *r += c;
        }
    }

    fn value_of(&self, sigma: &[u8], base_residual: &[BigRational]) -> BigRational {
        let mut residual = base_residual.to_vec();
        for (i, &s) in sigma.iter().enumerate() {
            if s == 1 {
                for (r, c) in residual.iter_mut().zip(self.columns[i].iter()) {
                    *r -= c;
                }
            }
        }
        inf_norm(&residual)
    }
}

/// Rounds `x >= 0` to a nonnegative integer vector with small image error.
pub fn round_nonneg(m: &RatMatrix, x: &[BigRational], config: &Config) -> RoundingResult {
    assert_eq!(m.cols(), x.len(), "dimension mismatch");
    assert!(
        x.iter().all(|v| !v.is_negative()),
        "round_nonneg requires x >= 0"
    );
    let floor: Vec<BigInt> = x.iter().map(|v| v.floor().to_integer()).collect();
    let frac: RatVector = x
        .iter()
        .zip(floor.iter())
        .map(|(v, f)| v - BigRational::from_integer(f.clone()))
        .collect();
    let support: Vec<usize> = (0..x.len()).filter(|&j| !frac[j].is_zero()).collect();
    if support.is_empty() {
        return RoundingResult {
            z: floor,
            achieved: BigRational::zero(),
            method: RoundingMethod::Exhaustive,
            certified: true,
        };
    }
    // residual at sigma = 0 is M * frac (only support columns contribute)
    let base_residual: RatVector = m.mul_vec(&frac);
    let columns: Vec<RatVector> = support
        .iter()
        .map(|&j| (0..m.rows()).map(|i| m.get(i, j).clone()).collect())
        .collect();
    let mut rounder = Rounder {
        support_len: support.len(),
        columns,
        best_sigma: vec![0; support.len()],
        best_value: inf_norm(&base_residual) + BigRational::one(), // sentinel
    };
    let (method, certified) = if support.len() <= config.rounding_exhaustive_cap {
        let mut sigma = Vec::with_capacity(support.len());
        let mut residual = base_residual.clone();
        rounder.dfs(0, &mut sigma, &mut residual);
        (RoundingMethod::Exhaustive, true)
    } else {
        heuristic_search(&mut rounder, &base_residual, config);
        (RoundingMethod::Heuristic, false)
    };
    let mut z = floor;
    for (i, &j) in support.iter().enumerate() {
        if rounder.best_sigma[i] == 1 {
            z[j] += 1;
        }
    }
    let achieved = rounder.best_value.clone();
    debug_assert_eq!(
        achieved,
        exact_error(m, x, &z),
        "achieved value must match direct evaluation"
    );
    RoundingResult {
        z,
        achieved,
        method,
        certified,
    }
}

/// `||M (x - z)||_inf` evaluated directly.
pub fn exact_error(m: &RatMatrix, x: &[BigRational], z: &[BigInt]) -> BigRational {
    let diff: RatVector = x
        .iter()
        .zip(z.iter())
        .map(|(a, b)| a - BigRational::from_integer(b.clone()))
        .collect();
    inf_norm(&m.mul_vec(&diff))
}

fn heuristic_search(rounder: &mut Rounder, base_residual: &[BigRational], config: &Config) {
    let s = rounder.support_len;
    let mut best = (vec![0u8; s], rounder.value_of(&vec![0; s], base_residual));

    // local search: single flips plus 1<->0 pair swaps, first improvement
    fn improve(
        rounder: &Rounder,
        base_residual: &[BigRational],
        start: Vec<u8>,
        best: &mut (Vec<u8>, BigRational),
    ) {
        let s = rounder.support_len;
        let mut sigma = start;
        let mut value = rounder.value_of(&sigma, base_residual);
        loop {
            let mut moved = false;
            for i in 0..s {
                sigma[i] ^= 1;
                let v = rounder.value_of(&sigma, base_residual);
                if v < value {
                    value = v;
                    moved = true;
                } else {
                    sigma[i] ^= 1;
                }
            }
            for i in 0..s {
                for j in 0..s {
                    if sigma[i] == 1 && sigma[j] == 0 {
                        sigma[i] = 0;
                        sigma[j] = 1;
                        let v = rounder.value_of(&sigma, base_residual);
                        if v < value {
                            value = v;
                            moved = true;
                        } else {
                            sigma[i] = 1;
                            sigma[j] = 0;
                        }
                    }
                }
            }
            if !moved {
                break;
            }
        }
        if value < best.1 || (value == best.1 && sigma < best.0) {
            *best = (sigma, value);
        }
    }

    improve(rounder, base_residual, vec![0; s], &mut best);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut indices: Vec<usize> = (0..s).collect();
    for _ in 0..config.rounding_restarts {
        let ones = rng.gen_range(0..=s);
        indices.shuffle(&mut rng);
        let mut sigma = vec![0u8; s];
        for &i in indices.iter().take(ones) {
            sigma[i] = 1;
        }
        improve(rounder, base_residual, sigma, &mut best);
    }
    rounder.best_sigma = best.0;
    rounder.best_value = best.1;
}

/// Exact discrepancy `min_{z in {-1,1}^n} ||M z||_inf` by enumeration.
pub fn exact_disc(m: &RatMatrix, cap: usize) -> Result<BigRational, DiscrepancyError> {
    let n = m.cols();
    if n > cap {
        return Err(DiscrepancyError::TooLarge { cols: n, cap });
    }
    let columns: Vec<RatVector> = (0..n)
        .map(|j| (0..m.rows()).map(|i| m.get(i, j).clone()).collect())
        .collect();
    // start from z = (1,...,1)
    let mut residual: RatVector = (0..m.rows())
        .map(|i| {
            columns
                .iter()
                .fold(BigRational::zero(), |acc, c| acc + &c[i])
        })
        .collect();
    let mut best: Option<BigRational> = None;
    fn dfs(
        pos: usize,
        n: usize,
        columns: &[RatVector],
        residual: &mut RatVector,
        best: &mut Option<BigRational>,
    ) {
        if pos == n {
            let v = inf_norm(residual);
            if best.as_ref().is_none_or(|b| v < *b) {
                *best = Some(v);
            }
            return;
        }
        dfs(pos + 1, n, columns, residual, best);
        // flip coordinate pos from +1 to -1
        for (r, c) in residual.iter_mut().zip(columns[pos].iter()) {
            *r -= c + c;
        }
        dfs(pos + 1, n, columns, residual, best);
        for (r, c) in residual.iter_mut().zip(columns[pos].iter()) {
            *r += c + c;
        }
    }
    dfs(0, n, &columns, &mut residual, &mut best);
    Ok(best.expect("nonempty enumeration"))
}

/// Which discrepancy upper-bound family an envelope was taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundForm {
    /// `Delta_1 * sqrt(k)` shape (partial-coloring bound, reduced form).
    Spencer,
    /// `detlb * log k` shape.
    DetlbLog,
    /// `detlb * sqrt(log k * log n)` shape.
    DetlbSqrtLog,
}

impl BoundForm {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundForm::Spencer => "spencer",
            BoundForm::DetlbLog => "detlb-log",
            BoundForm::DetlbSqrtLog => "detlb-sqrtlog",
        }
    }
}

/// Reporting-only envelope for the rounding error of a matrix.
///
/// The symbolic `bound_form` records which asymptotic family is smallest
/// under unit-constant surrogates; `numeric_envelope` additionally
/// dominates the half-l1 rounding bound, so it always upper-bounds
/// certified `round_nonneg` values. Pipelines never branch on it.
#[derive(Debug, Clone)]
pub struct DiscBound {
    pub detlb_pair: (usize, BigRational),
    pub bound_form: BoundForm,
    pub numeric_envelope: BigRational,
}

fn isqrt_ceil(v: u64) -> u64 {
    let mut r = 0u64;
    while r * r < v {
        r += 1;
    }
    r
}

fn log2_ceil(v: u64) -> u64 {
    let mut bits = 0u64;
    let mut acc = 1u64;
    while acc < v {
        acc = acc.saturating_mul(2);
        bits += 1;
    }
    bits
}

/// Selects the smallest applicable envelope among the three bound forms.
///
/// `delta_j` are the exact maximal minors of `m` for orders 1..=len.
pub fn disc_bound(m: &RatMatrix, delta_j: &[BigRational]) -> DiscBound {
    let k = m.rows() as u64;
    let n = m.cols() as u64;
    let detlb_pair = rat_detlb(delta_j);
    let detlb_up = BigRational::from_integer(ceil_root(&detlb_pair.1, detlb_pair.0));
    let delta1 = delta_j[0].clone();

    let spencer = &delta1 * BigRational::from_integer(BigInt::from(isqrt_ceil(k)));
    let detlb_log = &detlb_up * BigRational::from_integer(BigInt::from(log2_ceil(2 * k)));
    let detlb_sqrtlog = &detlb_up
        * BigRational::from_integer(BigInt::from(isqrt_ceil(
            log2_ceil(2 * k) * log2_ceil(2 * n),
        )));

    let (bound_form, selected) = [
        (BoundForm::Spencer, spencer),
        (BoundForm::DetlbLog, detlb_log),
        (BoundForm::DetlbSqrtLog, detlb_sqrtlog),
    ]
    .into_iter()
    .min_by(|a, b| a.1.cmp(&b.1))
    .expect("three candidates");

    // twice half_l1 bounds every row image, so this dominates achieved
    // rounding errors regardless of the unknown asymptotic constants
    let half_l1 = m.max_row_l1() / BigRational::from_integer(BigInt::from(2));
    let numeric_envelope = selected.max(half_l1);
    DiscBound {
        detlb_pair,
        bound_form,
        numeric_envelope,
    }
}
