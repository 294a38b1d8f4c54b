//! Base-improvement searches.
//!
//! Three procedures producing bases with certified bounds on the derived
//! matrix `M(B)`:
//! - `poly_subdet_search`: entrywise pivoting until `Delta_1(M(B)) <= c`;
//! - `exp_subdet_search`: a `2^k` subset sweep driving `Delta_i(M(B))`
//!   below `c^(i+1)` with the max-determinant oracle;
//! - `exp_subdet_search_dual`: the same sweep for tall `n x (n-k)` inputs,
//!   sweeping only the `k` nonbase rows.
//!
//! The irrational threshold `e` is replaced everywhere by the fixed
//! rational `c = 2718281828459045 / 10^15 < e`, so every comparison and
//! every recorded growth factor is exact. Each accepted swap multiplies
//! `|det A_B|` by more than `c`, which bounds the number of iterations by
//! `log_c Delta` and makes termination a checkable arithmetic fact.

use crate::matrix::{IntMatrix, RatMatrix};
use crate::system::BaseSelection;
use crate::Config;
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// The exact rational stand-in for `e` used by all threshold comparisons.
pub fn e_surrogate() -> BigRational {
    BigRational::new(
        BigInt::from(2_718_281_828_459_045u64),
        BigInt::from(10u64).pow(15),
    )
}

#[derive(Debug, Error)]
pub enum BaseSearchError {
    #[error("matrix is rank deficient: no nonsingular base of the requested order")]
    RankDeficient,
    #[error("subset sweep budget exceeded: k = {k} above cap {cap}")]
    BudgetExceeded { k: usize, cap: usize },
}

/// How the returned column set was certified by `maxdet_subset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxdetGuarantee {
    /// Exhaustive enumeration: the exact maximizer, ratio 1.
    Exact,
    /// Greedy volume growth plus single-swap local search; the achieved
    /// determinant is within a `c_loc^order * order!` factor of optimal.
    Greedy,
}

/// Guarantee attached to a finished base search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchGuarantee {
    /// Every entry of `M(B)` is at most `c` in absolute value.
    Delta1LeC,
    /// `Delta_i(M(B)) <= c^(i+1)` for all orders `i` (exact oracle), or the
    /// greedy-weakened version of the same sweep.
    DeltaiLeExp { oracle_exact: bool },
}

#[derive(Debug, Clone)]
pub struct SwapRecord {
    pub removed: Vec<usize>,
    pub inserted: Vec<usize>,
    /// Exact factor by which `|det A_B|` grew; always > c.
    pub growth: BigRational,
}

#[derive(Debug, Clone)]
pub struct BaseSearchReport {
    pub base: BaseSelection,
    /// Base the search started from, so the swap trail can be replayed.
    pub initial_base: Vec<usize>,
    /// Full passes over the swap candidates (the final clean pass included).
    pub iterations: usize,
    pub swaps: Vec<SwapRecord>,
    pub guarantee: SearchGuarantee,
    /// Subset rounds skipped because the row block was singular.
    pub skipped_singular: usize,
    /// True iff every max-determinant call during the search was exact.
    pub oracle_exact: bool,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// Columns of `m` as vectors.
fn columns(m: &RatMatrix) -> Vec<Vec<BigRational>> {
    (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| m.get(i, j).clone()).collect())
        .collect()
}

fn gram_det(cols: &[Vec<BigRational>], selected: &[usize]) -> BigRational {
    let d = selected.len();
    let mut g = RatMatrix::zero(d, d);
    for (a, &i) in selected.iter().enumerate() {
        for (b, &j) in selected.iter().enumerate() {
            let dot = cols[i]
                .iter()
                .zip(cols[j].iter())
                .fold(BigRational::zero(), |acc, (x, y)| acc + x * y);
            g.set(a, b, dot);
        }
    }
    g.det()
}

/// Best absolute `order x order` minor within the chosen columns.
fn best_minor_in_cols(m: &RatMatrix, cols_sel: &[usize], order: usize) -> BigRational {
    let mut best = BigRational::zero();
    for rows in (0..m.rows()).combinations(order) {
        let d = m.submatrix(&rows, cols_sel).det().abs();
        if d > best {
            best = d;
        }
    }
    best
}

/// Selects `order` columns of `m` carrying a maximal `order x order` minor.
///
/// Under the enumeration cap the result is the exact maximizer with
/// lexicographic tie-breaking; above it, a greedy volume heuristic plus
/// single-swap local search is used and flagged as such.
pub fn maxdet_subset(
    m: &RatMatrix,
    order: usize,
    config: &Config,
) -> Result<(Vec<usize>, MaxdetGuarantee), BaseSearchError> {
    assert!(order >= 1 && order <= m.rows(), "order must be 1..=rows");
    if order > m.cols() {
        // no order-sized column subset exists, hence no nonsingular minor
        return Err(BaseSearchError::RankDeficient);
    }
    let cost = binomial(m.cols(), order).saturating_mul(binomial(m.rows(), order));
    if cost <= config.maxdet_enum_cap as u128 {
        let mut best: Option<(BigRational, Vec<usize>)> = None;
        for cols_sel in (0..m.cols()).combinations(order) {
            let v = best_minor_in_cols(m, &cols_sel, order);
            match &best {
                Some((bv, _)) if *bv >= v => {}
                _ => best = Some((v, cols_sel)),
            }
        }
        let (value, sel) = best.expect("at least one subset");
        if value.is_zero() {
            return Err(BaseSearchError::RankDeficient);
        }
        return Ok((sel, MaxdetGuarantee::Exact));
    }

    // greedy volume growth on column Gram determinants
    let cols = columns(m);
    let mut selected: Vec<usize> = Vec::with_capacity(order);
    for _ in 0..order {
        let mut best: Option<(BigRational, usize)> = None;
        for j in 0..m.cols() {
            if selected.contains(&j) {
                continue;
            }
            let mut trial = selected.clone();
            trial.push(j);
            let v = gram_det(&cols, &trial);
            match &best {
                Some((bv, _)) if *bv >= v => {}
                _ => best = Some((v, j)),
            }
        }
        let (v, j) = best.ok_or(BaseSearchError::RankDeficient)?;
        if v.is_zero() {
            return Err(BaseSearchError::RankDeficient);
        }
        selected.push(j);
    }
    selected.sort_unstable();
    // single-swap local search, accepting growth above c_loc^2 on the Gram
    let threshold = &config.local_search_factor * &config.local_search_factor;
    let mut current = gram_det(&cols, &selected);
    loop {
        let mut improved = false;
        'scan: for pos in 0..order {
            for j in 0..m.cols() {
                if selected.contains(&j) {
                    continue;
                }
                let mut trial = selected.clone();
                trial[pos] = j;
                trial.sort_unstable();
                let v = gram_det(&cols, &trial);
                if v > &current * &threshold {
                    selected = trial;
                    current = v;
                    improved = true;
                    break 'scan;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok((selected, MaxdetGuarantee::Greedy))
}

/// Lexicographically first independent column set of full row rank.
fn first_column_base(a: &IntMatrix) -> Result<Vec<usize>, BaseSearchError> {
    let k = a.rows();
    let ar = a.to_rational();
    let mut chosen: Vec<usize> = Vec::new();
    for j in 0..a.cols() {
        if chosen.len() == k {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(j);
        let cols: Vec<Vec<BigRational>> = trial
            .iter()
            .map(|&c| (0..k).map(|r| ar.get(r, c).clone()).collect())
            .collect();
        let idx: Vec<usize> = (0..trial.len()).collect();
        if !gram_det(&cols, &idx).is_zero() {
            chosen = trial;
        }
    }
    if chosen.len() == k {
        Ok(chosen)
    } else {
        Err(BaseSearchError::RankDeficient)
    }
}

/// Entrywise pivoting: swaps any base column against a column whose `M`
/// entry exceeds `c` until `Delta_1(M(B)) <= c`.
pub fn poly_subdet_search(a: &IntMatrix) -> Result<BaseSearchReport, BaseSearchError> {
    let k = a.rows();
    if a.rank() < k {
        return Err(BaseSearchError::RankDeficient);
    }
    let c = e_surrogate();
    let ar = a.to_rational();
    let mut base = first_column_base(a)?;
    let initial_base = base.clone();
    let mut swaps = Vec::new();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let inv = ar
            .select_cols(&base)
            .inverse()
            .expect("base is nonsingular");
        let m = inv.mul(&ar);
        let mut swapped = false;
        'scan: for i in 0..k {
            for j in 0..a.cols() {
                if m.get(i, j).abs() > c {
                    let removed = base[i];
                    swaps.push(SwapRecord {
                        removed: vec![removed],
                        inserted: vec![j],
                        growth: m.get(i, j).abs(),
                    });
                    base[i] = j;
                    base.sort_unstable();
                    swapped = true;
                    break 'scan;
                }
            }
        }
        if !swapped {
            break;
        }
    }
    let selection = BaseSelection::standard(a, base).expect("searched base is nonsingular");
    Ok(BaseSearchReport {
        base: selection,
        initial_base,
        iterations,
        swaps,
        guarantee: SearchGuarantee::Delta1LeC,
        skipped_singular: 0,
        oracle_exact: true,
    })
}

/// A triggering swap: the row subset, the column subset, and the exact
/// growth factor.
type SweepHit = (Vec<usize>, Vec<usize>, BigRational);

/// One subset-sweep pass shared by the wide and tall searches.
///
/// `m` is the current derived matrix, `sweep_rows` the row indices to draw
/// subsets `J` from (all rows in the wide case, nonbase rows in the tall
/// case). Returns the first triggering `(J, I, growth)` in size-then-lex
/// order, plus the number of singular row blocks skipped.
fn sweep_once(
    m: &RatMatrix,
    sweep_rows: &[usize],
    config: &Config,
    oracle_exact: &mut bool,
) -> (Option<SweepHit>, usize) {
    let c = e_surrogate();
    let mut skipped = 0;
    for size in 1..=sweep_rows.len() {
        for j_set in sweep_rows.iter().copied().combinations(size) {
            let sub = m.select_rows(&j_set);
            match maxdet_subset(&sub, size, config) {
                Ok((i_set, guar)) => {
                    if guar == MaxdetGuarantee::Greedy {
                        *oracle_exact = false;
                    }
                    let growth = m.submatrix(&j_set, &i_set).det().abs();
                    if growth > c {
                        return (Some((j_set, i_set, growth)), skipped);
                    }
                }
                Err(BaseSearchError::RankDeficient) => skipped += 1,
                Err(BaseSearchError::BudgetExceeded { .. }) => {
                    unreachable!("maxdet oracle has no sweep budget")
                }
            }
        }
    }
    (None, skipped)
}

/// `2^k` subset sweep for a wide `k x n` matrix of rank `k`.
pub fn exp_subdet_search(
    a: &IntMatrix,
    config: &Config,
) -> Result<BaseSearchReport, BaseSearchError> {
    let k = a.rows();
    if k > config.sweep_k_cap {
        return Err(BaseSearchError::BudgetExceeded {
            k,
            cap: config.sweep_k_cap,
        });
    }
    if a.rank() < k {
        return Err(BaseSearchError::RankDeficient);
    }
    let ar = a.to_rational();
    let mut oracle_exact = true;
    let (mut base, guar) = maxdet_subset(&ar, k, config)?;
    if guar == MaxdetGuarantee::Greedy {
        oracle_exact = false;
    }
    let initial_base = base.clone();
    let mut swaps = Vec::new();
    let mut iterations = 0;
    let mut skipped_singular = 0;
    loop {
        iterations += 1;
        let inv = ar
            .select_cols(&base)
            .inverse()
            .expect("base is nonsingular");
        let m = inv.mul(&ar);
        let all_rows: Vec<usize> = (0..k).collect();
        let (hit, skipped) = sweep_once(&m, &all_rows, config, &mut oracle_exact);
        skipped_singular += skipped;
        match hit {
            Some((j_set, i_set, growth)) => {
                // row p of M corresponds to base column base[p]
                let removed: Vec<usize> = j_set.iter().map(|&p| base[p]).collect();
                let mut next: Vec<usize> = base
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| !j_set.contains(p))
                    .map(|(_, &col)| col)
                    .collect();
                next.extend(i_set.iter().copied());
                next.sort_unstable();
                next.dedup();
                debug_assert_eq!(next.len(), k, "swap must preserve base size");
                swaps.push(SwapRecord {
                    removed,
                    inserted: i_set,
                    growth,
                });
                base = next;
            }
            None => break,
        }
    }
    let selection = BaseSelection::standard(a, base).expect("searched base is nonsingular");
    Ok(BaseSearchReport {
        base: selection,
        initial_base,
        iterations,
        swaps,
        guarantee: SearchGuarantee::DeltaiLeExp { oracle_exact },
        skipped_singular,
        oracle_exact,
    })
}

/// Subset sweep for a tall `n x (n-k)` matrix of rank `n-k`, sweeping the
/// `k` nonbase rows only (the base rows of `M(B)` form an identity block,
/// so their minors never exceed 1).
pub fn exp_subdet_search_dual(
    b: &IntMatrix,
    config: &Config,
) -> Result<BaseSearchReport, BaseSearchError> {
    let n = b.rows();
    let m_dim = b.cols();
    if m_dim > n {
        return Err(BaseSearchError::RankDeficient);
    }
    let k = n - m_dim;
    if k > config.sweep_k_cap {
        return Err(BaseSearchError::BudgetExceeded {
            k,
            cap: config.sweep_k_cap,
        });
    }
    if b.rank() < m_dim {
        return Err(BaseSearchError::RankDeficient);
    }
    let br = b.to_rational();
    let mut oracle_exact = true;
    // row base of b = column base of b^T
    let (mut base, guar) = maxdet_subset(&b.transpose().to_rational(), m_dim, config)?;
    if guar == MaxdetGuarantee::Greedy {
        oracle_exact = false;
    }
    let initial_base = base.clone();
    let mut swaps = Vec::new();
    let mut iterations = 0;
    let mut skipped_singular = 0;
    loop {
        iterations += 1;
        let inv = br
            .select_rows(&base)
            .inverse()
            .expect("base is nonsingular");
        let m = br.mul(&inv); // n x (n-k), identity on base rows
        let nonbase: Vec<usize> = (0..n).filter(|r| !base.contains(r)).collect();
        if nonbase.is_empty() {
            break;
        }
        let (hit, skipped) = sweep_once(&m, &nonbase, config, &mut oracle_exact);
        skipped_singular += skipped;
        match hit {
            Some((j_set, i_set, growth)) => {
                // column p of M corresponds to base row base[p]
                let removed: Vec<usize> = i_set.iter().map(|&p| base[p]).collect();
                let mut next: Vec<usize> = base
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| !i_set.contains(p))
                    .map(|(_, &row)| row)
                    .collect();
                next.extend(j_set.iter().copied());
                next.sort_unstable();
                next.dedup();
                debug_assert_eq!(next.len(), m_dim, "swap must preserve base size");
                swaps.push(SwapRecord {
                    removed,
                    inserted: j_set,
                    growth,
                });
                base = next;
            }
            None => break,
        }
    }
    let selection = BaseSelection::canonical_rows(b, base).expect("searched base is nonsingular");
    Ok(BaseSearchReport {
        base: selection,
        initial_base,
        iterations,
        swaps,
        guarantee: SearchGuarantee::DeltaiLeExp { oracle_exact },
        skipped_singular,
        oracle_exact,
    })
}
