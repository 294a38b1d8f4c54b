//! Exact rational linear programming.
//!
//! A two-phase tableau simplex over `BigRational` with Bland's rule
//! (smallest eligible index enters; ratio ties leave by smallest basis
//! index), which terminates on every input and makes all outputs
//! deterministic. On top of it sit the operations the pipelines need:
//! max-min-slack points, purification of a feasible point to a feasible
//! base, exact bounding boxes, and lattice-point enumeration.

use crate::matrix::{IntMatrix, RatMatrix, RatVector};
use crate::system::{BaseSelection, CanonicalSystem};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("matrix has rank {rank} < {dim}, no base of full dimension exists")]
    NoBase { rank: usize, dim: usize },
    #[error("the supplied point violates row {0}")]
    InfeasiblePoint(usize),
    #[error("polyhedron is unbounded in coordinate {coord} (direction {dir})")]
    UnboundedPolytope { coord: usize, dir: i8 },
    #[error("enumeration would visit {needed} lattice points, above the cap {cap}")]
    BudgetExceeded { needed: u128, cap: u64 },
}

/// Outcome of `maximize c^T v  s.t.  E v = f, v >= 0`.
#[derive(Debug, Clone)]
pub enum SimplexOutcome {
    Optimal { value: BigRational, solution: RatVector },
    Unbounded { solution: RatVector, ray: RatVector },
    Infeasible,
}

/// Two-phase exact simplex in standard form.
pub fn simplex_max(e: &RatMatrix, f: &[BigRational], c: &[BigRational]) -> SimplexOutcome {
    let n = e.cols();
    assert_eq!(f.len(), e.rows());
    assert_eq!(c.len(), n);
    let m = e.rows();

    // phase 1 tableau: structural columns, artificial columns, rhs
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<BigRational> = e.row(i).to_vec();
        let negate = f[i].is_negative();
        if negate {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        row.extend((0..m).map(|j| {
            if j == i {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        }));
        row.push(if negate { -f[i].clone() } else { f[i].clone() });
        rows.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let width = n + m;

    // phase-1 objective: maximize -(sum of artificials)
    let mut d = vec![BigRational::zero(); width];
    for v in d.iter_mut().take(width).skip(n) {
        *v = -BigRational::one();
    }
    run_simplex(&mut rows, &mut basis, &d, width);
    let phase1: BigRational = basis
        .iter()
        .zip(rows.iter())
        .map(|(&b, row)| &d[b] * &row[width])
        .sum();
    if phase1.is_negative() {
        return SimplexOutcome::Infeasible;
    }

    // drive remaining artificials out of the basis or drop redundant rows
    let mut r = 0;
    while r < rows.len() {
        if basis[r] >= n {
            match (0..n).find(|&j| !rows[r][j].is_zero()) {
                Some(j) => {
                    pivot(&mut rows, &mut basis, r, j, width);
                }
                None => {
                    rows.remove(r);
                    basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    // phase 2: strip artificial columns, maximize c
    for row in rows.iter_mut() {
        let rhs = row.pop().expect("rhs present");
        row.truncate(n);
        row.push(rhs);
    }
    if let Some(enter) = run_simplex(&mut rows, &mut basis, c, n) {
        // unbounded: the entering column has no blocking row
        let mut solution = vec![BigRational::zero(); n];
        for (i, &b) in basis.iter().enumerate() {
            solution[b] = rows[i][n].clone();
        }
        let mut ray = vec![BigRational::zero(); n];
        ray[enter] = BigRational::one();
        for (i, &b) in basis.iter().enumerate() {
            ray[b] = -rows[i][enter].clone();
        }
        return SimplexOutcome::Unbounded { solution, ray };
    }
    let mut solution = vec![BigRational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        solution[b] = rows[i][n].clone();
    }
    let value = c.iter().zip(solution.iter()).map(|(a, b)| a * b).sum();
    SimplexOutcome::Optimal { value, solution }
}

/// Runs Bland-rule pivots until optimal (returns `None`) or an unbounded
/// entering column is found (returns `Some(column)`). `width` is the number
/// of decision columns; `rows[i][width]` holds the rhs.
fn run_simplex(
    rows: &mut [Vec<BigRational>],
    basis: &mut [usize],
    d: &[BigRational],
    width: usize,
) -> Option<usize> {
    loop {
        // reduced costs z_j - d_j; entering = smallest index with negative value
        let mut enter: Option<usize> = None;
        for j in 0..width {
            if basis.contains(&j) {
                continue;
            }
            let mut zj = BigRational::zero();
            for (i, &b) in basis.iter().enumerate() {
                if !d[b].is_zero() {
                    zj += &d[b] * &rows[i][j];
                }
            }
            if zj - &d[j] < BigRational::zero() {
                enter = Some(j);
                break;
            }
        }
        let enter = enter?;
        // leaving row: min ratio, ties broken by smallest basis index
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in rows.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width] / &row[enter];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr || (ratio == lr && basis[i] < basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
        }
        match leave {
            Some((r, _)) => pivot(rows, basis, r, enter, width),
            None => return Some(enter),
        }
    }
}

fn pivot(rows: &mut [Vec<BigRational>], basis: &mut [usize], r: usize, j: usize, width: usize) {
    let piv = rows[r][j].clone();
    debug_assert!(!piv.is_zero());
    for v in rows[r].iter_mut().take(width + 1) {
        *v = &*v / &piv;
    }
    let pivot_row = rows[r].clone();
    for (i, row) in rows.iter_mut().enumerate() {
        if i == r || row[j].is_zero() {
            continue;
        }
        let factor = row[j].clone();
        for col in 0..=width {
            let delta = &factor * &pivot_row[col];
            row[col] -= delta;
        }
    }
    basis[r] = j;
}

/// A point together with its exact worst slack over all rows.
#[derive(Debug, Clone)]
pub struct SlackPoint {
    pub x: RatVector,
    pub min_slack: BigRational,
    pub tight_rows: Vec<usize>,
}

impl SlackPoint {
    /// Builds the slack profile of `x` for `A x <= b`.
    pub fn at(a: &IntMatrix, b: &[BigInt], x: &[BigRational]) -> SlackPoint {
        let slacks = row_slacks(a, b, x);
        let min_slack = slacks.iter().min().expect("at least one row").clone();
        let tight_rows = slacks
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == min_slack)
            .map(|(i, _)| i)
            .collect();
        SlackPoint {
            x: x.to_vec(),
            min_slack,
            tight_rows,
        }
    }
}

pub fn row_slacks(a: &IntMatrix, b: &[BigInt], x: &[BigRational]) -> RatVector {
    let ax = a.to_rational().mul_vec(x);
    b.iter()
        .zip(ax)
        .map(|(bi, v)| BigRational::from_integer(bi.clone()) - v)
        .collect()
}

/// Result of maximizing the uniform slack `min_i (b_i - A_i x)`.
#[derive(Debug, Clone)]
pub enum MaxMinSlack {
    Bounded(SlackPoint),
    /// The slack grows without bound along `x + lambda * ray`, at rate
    /// at least `rate` per unit step.
    Unbounded {
        x: RatVector,
        ray: RatVector,
        rate: BigRational,
    },
}

/// Solves `max s  s.t.  A x + s 1 <= b` exactly.
///
/// The auxiliary LP is always feasible, so the only non-optimal outcome is
/// unboundedness, reported with a certificate ray.
pub fn max_min_slack(sys: &CanonicalSystem) -> MaxMinSlack {
    max_min_slack_raw(&sys.a, &sys.b)
}

pub fn max_min_slack_raw(a: &IntMatrix, b: &[BigInt]) -> MaxMinSlack {
    let (m, n) = (a.rows(), a.cols());
    // variables: x+ (n), x- (n), s+, s-, slack u (m)
    let width = 2 * n + 2 + m;
    let mut e = RatMatrix::zero(m, width);
    for i in 0..m {
        for j in 0..n {
            let v = BigRational::from_integer(a.get(i, j).clone());
            e.set(i, j, v.clone());
            e.set(i, n + j, -v);
        }
        e.set(i, 2 * n, BigRational::one());
        e.set(i, 2 * n + 1, -BigRational::one());
        e.set(i, 2 * n + 2 + i, BigRational::one());
    }
    let f: RatVector = b
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect();
    let mut c = vec![BigRational::zero(); width];
    c[2 * n] = BigRational::one();
    c[2 * n + 1] = -BigRational::one();
    match simplex_max(&e, &f, &c) {
        SimplexOutcome::Optimal { solution, .. } => {
            let x: RatVector = (0..n).map(|j| &solution[j] - &solution[n + j]).collect();
            MaxMinSlack::Bounded(SlackPoint::at(a, b, &x))
        }
        SimplexOutcome::Unbounded { solution, ray } => {
            let x: RatVector = (0..n).map(|j| &solution[j] - &solution[n + j]).collect();
            let ray_x: RatVector = (0..n).map(|j| &ray[j] - &ray[n + j]).collect();
            let rate = &ray[2 * n] - &ray[2 * n + 1];
            debug_assert!(rate.is_positive());
            MaxMinSlack::Unbounded { x, ray: ray_x, rate }
        }
        SimplexOutcome::Infeasible => unreachable!("auxiliary slack LP is always feasible"),
    }
}

/// Walks an unbounded slack ray far enough to reach uniform slack >= target.
pub fn walk_ray_to_slack(
    a: &IntMatrix,
    b: &[BigInt],
    x: &[BigRational],
    ray: &[BigRational],
    rate: &BigRational,
    target: &BigRational,
) -> SlackPoint {
    let here = SlackPoint::at(a, b, x);
    if &here.min_slack >= target {
        return here;
    }
    let lambda = (target - &here.min_slack) / rate;
    let moved: RatVector = x
        .iter()
        .zip(ray.iter())
        .map(|(xi, ri)| xi + &lambda * ri)
        .collect();
    let out = SlackPoint::at(a, b, &moved);
    debug_assert!(&out.min_slack >= target);
    out
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut [RatVector]) -> Vec<usize> {
    if rows.is_empty() {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let piv = rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v = &*v / &piv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            for j in 0..n {
                let delta = &factor * &rows[r][j];
                rows[i][j] -= delta;
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// A nonzero direction in the null space of the given rows, chosen
/// deterministically (unit weight on the smallest free column). `None`
/// when the rows have full column rank.
fn null_direction(rows: &[RatVector], n: usize) -> Option<RatVector> {
    if rows.is_empty() {
        let mut d = vec![BigRational::zero(); n];
        d[0] = BigRational::one();
        return Some(d);
    }
    let mut work: Vec<RatVector> = rows.to_vec();
    let pivots = rref(&mut work);
    if pivots.len() == n {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c)).expect("free column");
    let mut d = vec![BigRational::zero(); n];
    d[free] = BigRational::one();
    for (row_idx, &pc) in pivots.iter().enumerate() {
        d[pc] = -work[row_idx][free].clone();
    }
    Some(d)
}

/// Purifies a feasible point into a feasible base by exact pivoting toward
/// tightness: move along null directions of the tight rows (positive
/// orientation first, lexicographic free-column choice) until the tight
/// rows reach full rank, then select the lexicographically smallest
/// independent subset.
pub fn feasible_base(
    a: &IntMatrix,
    b: &[BigInt],
    x: &[BigRational],
) -> Result<BaseSelection, LpError> {
    let n = a.cols();
    let rank = a.rank();
    if rank < n {
        return Err(LpError::NoBase { rank, dim: n });
    }
    let slacks = row_slacks(a, b, x);
    if let Some(i) = slacks.iter().position(|s| s.is_negative()) {
        return Err(LpError::InfeasiblePoint(i));
    }
    let ar = a.to_rational();
    let mut x = x.to_vec();
    loop {
        let slacks = row_slacks(a, b, &x);
        let tight: Vec<usize> = (0..a.rows()).filter(|&i| slacks[i].is_zero()).collect();
        let tight_rows: Vec<RatVector> = tight.iter().map(|&i| ar.row(i).to_vec()).collect();
        let Some(d) = null_direction(&tight_rows, n) else {
            // tight rows span R^n: pick the lex-smallest independent subset
            let mut chosen = Vec::new();
            let mut span: Vec<RatVector> = Vec::new();
            for &i in &tight {
                let mut candidate = span.clone();
                candidate.push(ar.row(i).to_vec());
                let rank_with = rref(&mut candidate).len();
                if rank_with > chosen.len() {
                    span = candidate;
                    chosen.push(i);
                    if chosen.len() == n {
                        break;
                    }
                }
            }
            let base = BaseSelection::canonical_rows(a, chosen)
                .expect("independent tight rows form a base");
            return Ok(base);
        };
        let ad = ar.mul_vec(&d);
        let min_step = |adir: &RatVector| -> Option<BigRational> {
            let mut best: Option<BigRational> = None;
            for i in 0..a.rows() {
                if adir[i].is_positive() {
                    let lambda = &slacks[i] / &adir[i];
                    best = Some(match best {
                        None => lambda,
                        Some(cur) => cur.min(lambda),
                    });
                }
            }
            best
        };
        if let Some(lambda) = min_step(&ad) {
            for j in 0..n {
                x[j] += &lambda * &d[j];
            }
        } else {
            let neg_ad: RatVector = ad.iter().map(|v| -v.clone()).collect();
            let lambda = min_step(&neg_ad)
                .expect("full column rank forbids a two-sided recession direction");
            for j in 0..n {
                x[j] -= &lambda * &d[j];
            }
        }
    }
}

/// Outcome of maximizing a linear objective over a polyhedron.
#[derive(Debug, Clone)]
pub enum LinOutcome {
    Optimal { value: BigRational, x: RatVector },
    Unbounded,
    Infeasible,
}

/// `max w^T x  s.t.  A x <= b` with free variables.
pub fn maximize_over_canonical(a: &IntMatrix, b: &[BigInt], w: &[BigRational]) -> LinOutcome {
    let (m, n) = (a.rows(), a.cols());
    let width = 2 * n + m;
    let mut e = RatMatrix::zero(m, width);
    for i in 0..m {
        for j in 0..n {
            let v = BigRational::from_integer(a.get(i, j).clone());
            e.set(i, j, v.clone());
            e.set(i, n + j, -v);
        }
        e.set(i, 2 * n + i, BigRational::one());
    }
    let f: RatVector = b
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect();
    let mut c = vec![BigRational::zero(); width];
    for j in 0..n {
        c[j] = w[j].clone();
        c[n + j] = -w[j].clone();
    }
    match simplex_max(&e, &f, &c) {
        SimplexOutcome::Optimal { value, solution } => {
            let x = (0..n).map(|j| &solution[j] - &solution[n + j]).collect();
            LinOutcome::Optimal { value, x }
        }
        SimplexOutcome::Unbounded { .. } => LinOutcome::Unbounded,
        SimplexOutcome::Infeasible => LinOutcome::Infeasible,
    }
}

/// `max w^T z  s.t.  A z = b, z >= 0`.
pub fn maximize_over_standard(a: &IntMatrix, b: &[BigInt], w: &[BigRational]) -> LinOutcome {
    let e = a.to_rational();
    let f: RatVector = b
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect();
    match simplex_max(&e, &f, w) {
        SimplexOutcome::Optimal { value, solution } => LinOutcome::Optimal {
            value,
            x: solution,
        },
        SimplexOutcome::Unbounded { .. } => LinOutcome::Unbounded,
        SimplexOutcome::Infeasible => LinOutcome::Infeasible,
    }
}

/// `max s  s.t.  A x = b, x >= s 1` — the uniform coordinate bound used by
/// the standard-form slack condition.
pub fn max_min_coordinate(a: &IntMatrix, b: &[BigInt]) -> LinOutcome {
    let (k, n) = (a.rows(), a.cols());
    // variables: s+, s-, u (n) with x = s 1 + u
    let width = 2 + n;
    let mut e = RatMatrix::zero(k, width);
    let a1 = a.mul_vec(&vec![BigInt::one(); n]);
    for i in 0..k {
        let v = BigRational::from_integer(a1[i].clone());
        e.set(i, 0, v.clone());
        e.set(i, 1, -v);
        for j in 0..n {
            e.set(i, 2 + j, BigRational::from_integer(a.get(i, j).clone()));
        }
    }
    let f: RatVector = b
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect();
    let mut c = vec![BigRational::zero(); width];
    c[0] = BigRational::one();
    c[1] = -BigRational::one();
    match simplex_max(&e, &f, &c) {
        SimplexOutcome::Optimal { value, solution } => {
            let s = &solution[0] - &solution[1];
            let x: RatVector = (0..n).map(|j| &s + &solution[2 + j]).collect();
            LinOutcome::Optimal { value, x }
        }
        SimplexOutcome::Unbounded { .. } => LinOutcome::Unbounded,
        SimplexOutcome::Infeasible => LinOutcome::Infeasible,
    }
}

/// True when `{x : A x <= b}` is bounded for every right-hand side, i.e.
/// the recession cone `{d : A d <= 0}` is trivial.
pub fn canonical_recession_trivial(a: &IntMatrix) -> bool {
    let n = a.cols();
    let zero = vec![BigInt::zero(); a.rows()];
    for j in 0..n {
        for sign in [1i64, -1] {
            let mut w = vec![BigRational::zero(); n];
            w[j] = BigRational::from_integer(BigInt::from(sign));
            match maximize_over_canonical(a, &zero, &w) {
                LinOutcome::Unbounded => return false,
                LinOutcome::Optimal { value, .. } => {
                    if value.is_positive() {
                        return false;
                    }
                }
                LinOutcome::Infeasible => unreachable!("0 is always in the recession cone"),
            }
        }
    }
    true
}

/// True when `{z >= 0 : A z = 0}` is trivial, so standard-form polytopes
/// are bounded.
pub fn standard_recession_trivial(a: &IntMatrix) -> bool {
    let n = a.cols();
    let zero = vec![BigInt::zero(); a.rows()];
    let ones = vec![BigRational::one(); n];
    match maximize_over_standard(a, &zero, &ones) {
        LinOutcome::Unbounded => false,
        LinOutcome::Optimal { value, .. } => !value.is_positive(),
        LinOutcome::Infeasible => unreachable!("0 is always feasible"),
    }
}

/// Exact integer bounding box of `{x : A x <= b}` from per-coordinate LPs
/// (each optimum is attained at a vertex). `Ok(None)` when empty.
pub fn canonical_bounding_box(
    a: &IntMatrix,
    b: &[BigInt],
) -> Result<Option<Vec<(BigInt, BigInt)>>, LpError> {
    let n = a.cols();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut w = vec![BigRational::zero(); n];
        w[j] = BigRational::one();
        let hi = match maximize_over_canonical(a, b, &w) {
            LinOutcome::Infeasible => return Ok(None),
            LinOutcome::Unbounded => return Err(LpError::UnboundedPolytope { coord: j, dir: 1 }),
            LinOutcome::Optimal { value, .. } => value.floor().to_integer(),
        };
        w[j] = -BigRational::one();
        let lo = match maximize_over_canonical(a, b, &w) {
            LinOutcome::Infeasible => return Ok(None),
            LinOutcome::Unbounded => return Err(LpError::UnboundedPolytope { coord: j, dir: -1 }),
            LinOutcome::Optimal { value, .. } => (-value).ceil().to_integer(),
        };
        out.push((lo, hi));
    }
    Ok(Some(out))
}

/// Exact integer bounding box of `{z >= 0 : A z = b}`. `Ok(None)` when empty.
pub fn standard_bounding_box(
    a: &IntMatrix,
    b: &[BigInt],
) -> Result<Option<Vec<(BigInt, BigInt)>>, LpError> {
    let n = a.cols();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut w = vec![BigRational::zero(); n];
        w[j] = BigRational::one();
        let hi = match maximize_over_standard(a, b, &w) {
            LinOutcome::Infeasible => return Ok(None),
            LinOutcome::Unbounded => return Err(LpError::UnboundedPolytope { coord: j, dir: 1 }),
            LinOutcome::Optimal { value, .. } => value.floor().to_integer(),
        };
        out.push((BigInt::zero(), hi));
    }
    Ok(Some(out))
}

fn box_volume(bounds: &[(BigInt, BigInt)]) -> u128 {
    let mut vol: u128 = 1;
    for (lo, hi) in bounds {
        if hi < lo {
            return 0;
        }
        let span: BigInt = (hi - lo) + 1;
        let span: u128 = span.try_into().unwrap_or(u128::MAX);
        vol = vol.saturating_mul(span);
    }
    vol
}

/// All integer points of `A x <= b`, lexicographically sorted.
pub fn enumerate_canonical(
    a: &IntMatrix,
    b: &[BigInt],
    cap: u64,
) -> Result<Vec<Vec<BigInt>>, LpError> {
    let Some(bounds) = canonical_bounding_box(a, b)? else {
        return Ok(Vec::new());
    };
    enumerate_box(&bounds, cap, |z| {
        a.mul_vec(z).iter().zip(b.iter()).all(|(az, bi)| az <= bi)
    })
}

/// All integer points of `A z = b, z >= 0`, lexicographically sorted.
pub fn enumerate_standard(
    a: &IntMatrix,
    b: &[BigInt],
    cap: u64,
) -> Result<Vec<Vec<BigInt>>, LpError> {
    let Some(bounds) = standard_bounding_box(a, b)? else {
        return Ok(Vec::new());
    };
    enumerate_box(&bounds, cap, |z| a.mul_vec(z) == b)
}

/// Integer points of a box passing the filter, in lexicographic order.
pub fn enumerate_box(
    bounds: &[(BigInt, BigInt)],
    cap: u64,
    mut keep: impl FnMut(&[BigInt]) -> bool,
) -> Result<Vec<Vec<BigInt>>, LpError> {
    let vol = box_volume(bounds);
    if vol > cap as u128 {
        return Err(LpError::BudgetExceeded { needed: vol, cap });
    }
    if vol == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut cursor: Vec<BigInt> = bounds.iter().map(|(lo, _)| lo.clone()).collect();
    'outer: loop {
        if keep(&cursor) {
            out.push(cursor.clone());
        }
        let mut pos = bounds.len();
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            if cursor[pos] < bounds[pos].1 {
                cursor[pos] += 1;
                for i in (pos + 1)..bounds.len() {
                    cursor[i] = bounds[i].0.clone();
                }
                break;
            }
        }
    }
    Ok(out)
}
