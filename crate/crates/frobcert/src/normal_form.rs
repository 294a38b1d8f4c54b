//! Hermite and Smith normal forms with unimodular witnesses.
//!
//! Both forms are computed by elementary gcd reductions with the
//! transformation matrices accumulated explicitly, so every result can be
//! re-verified by exact reconstruction: `A = (H|0) * Q` for the Hermite
//! form and `S = P * A * Q` for the Smith form.

use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormalFormError {
    #[error("matrix does not have full row rank")]
    RankDeficient,
    #[error("rows are not primitive: gcd of maximal minors is {0}, expected 1")]
    NotPrimitive(BigInt),
}

/// Column-style Hermite normal form of a full-row-rank matrix.
///
/// `original = (H | 0) * Q` with `Q` unimodular, `H` square lower-triangular,
/// `H[i][i] > 0` and `0 <= H[i][j] < H[i][i]` for `j < i`. The HNF is unique,
/// so the computation is deterministic by construction.
#[derive(Debug, Clone)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub q: IntMatrix,
    pub original: IntMatrix,
}

impl HermiteForm {
    /// `(H | 0)` padded back to the original shape.
    pub fn h_padded(&self) -> IntMatrix {
        let k = self.h.rows();
        let n = self.original.cols();
        let mut out = IntMatrix::zero(k, n);
        for i in 0..k {
            for j in 0..k {
                out.set(i, j, self.h.get(i, j).clone());
            }
        }
        out
    }

    /// Exact reconstruction check `(H|0) * Q == original`.
    pub fn verify(&self) -> bool {
        if self.h_padded().mul(&self.q) != self.original {
            return false;
        }
        if !self.q.det().abs().is_one() {
            return false;
        }
        let k = self.h.rows();
        for i in 0..k {
            if !self.h.get(i, i).is_positive() {
                return false;
            }
            for j in 0..k {
                if j > i && !self.h.get(i, j).is_zero() {
                    return false;
                }
                if j < i
                    && (self.h.get(i, j).is_negative() || self.h.get(i, j) >= self.h.get(i, i))
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Applies column operations to the work matrix while accumulating a
/// unimodular witness. With `forward = false` the witness is `V^{-1}` for
/// the op product `V` (HNF convention `original = (H|0) * V^{-1}`, tracked
/// by applying each inverse op as a row operation); with `forward = true`
/// it is `V` itself (SNF convention `S = P * original * V`).
struct ColumnOps {
    q: IntMatrix,
    forward: bool,
}

impl ColumnOps {
    fn new(n: usize, forward: bool) -> Self {
        ColumnOps {
            q: IntMatrix::identity(n),
            forward,
        }
    }

    fn swap(&mut self, w: &mut IntMatrix, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..w.rows() {
            let va = w.get(r, a).clone();
            let vb = w.get(r, b).clone();
            w.set(r, a, vb);
            w.set(r, b, va);
        }
        if self.forward {
            for r in 0..self.q.rows() {
                let va = self.q.get(r, a).clone();
                let vb = self.q.get(r, b).clone();
                self.q.set(r, a, vb);
                self.q.set(r, b, va);
            }
        } else {
            for c in 0..self.q.cols() {
                let va = self.q.get(a, c).clone();
                let vb = self.q.get(b, c).clone();
                self.q.set(a, c, vb);
                self.q.set(b, c, va);
            }
        }
    }

    /// col_dst += lambda * col_src on the work matrix.
    fn add_col(&mut self, w: &mut IntMatrix, dst: usize, src: usize, lambda: &BigInt) {
        if lambda.is_zero() {
            return;
        }
        for r in 0..w.rows() {
            let v = w.get(r, dst) + lambda * w.get(r, src);
            w.set(r, dst, v);
        }
        if self.forward {
            for r in 0..self.q.rows() {
                let v = self.q.get(r, dst) + lambda * self.q.get(r, src);
                self.q.set(r, dst, v);
            }
        } else {
            // inverse op: row_src -= lambda * row_dst
            for c in 0..self.q.cols() {
                let v = self.q.get(src, c) - lambda * self.q.get(dst, c);
                self.q.set(src, c, v);
            }
        }
    }

    fn negate_col(&mut self, w: &mut IntMatrix, col: usize) {
        for r in 0..w.rows() {
            let v = -w.get(r, col);
            w.set(r, col, v);
        }
        if self.forward {
            for r in 0..self.q.rows() {
                let v = -self.q.get(r, col);
                self.q.set(r, col, v);
            }
        } else {
            for c in 0..self.q.cols() {
                let v = -self.q.get(col, c);
                self.q.set(col, c, v);
            }
        }
    }
}

/// Hermite normal form of a full-row-rank matrix (square case included).
pub fn hnf(m: &IntMatrix) -> Result<HermiteForm, NormalFormError> {
    let (k, n) = (m.rows(), m.cols());
    if k > n || m.rank() < k {
        return Err(NormalFormError::RankDeficient);
    }
    let mut w = m.clone();
    let mut ops = ColumnOps::new(n, false);
    for i in 0..k {
        // gcd reduction across columns >= i until only column i is nonzero in row i
        loop {
            let mut best: Option<usize> = None;
            for j in i..n {
                if w.get(i, j).is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(j),
                    Some(b) => {
                        if w.get(i, j).abs() < w.get(i, b).abs() {
                            Some(j)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            let pivot = best.expect("full row rank guarantees a nonzero entry");
            ops.swap(&mut w, i, pivot);
            let mut reduced_any = false;
            for j in (i + 1)..n {
                if w.get(i, j).is_zero() {
                    continue;
                }
                let q = w.get(i, j).div_floor(w.get(i, i));
                ops.add_col(&mut w, j, i, &-q);
                reduced_any = true;
            }
            if !reduced_any {
                break;
            }
            // after floor reduction, remainders in [0, |pivot|) remain; loop shrinks the pivot
            if (i + 1..n).all(|j| w.get(i, j).is_zero()) {
                break;
            }
        }
        if w.get(i, i).is_negative() {
            ops.negate_col(&mut w, i);
        }
        // normalize entries left of the diagonal into [0, H_ii)
        for j in 0..i {
            let q = w.get(i, j).div_floor(w.get(i, i));
            ops.add_col(&mut w, j, i, &-q);
        }
    }
    let h = w.submatrix(&(0..k).collect::<Vec<_>>(), &(0..k).collect::<Vec<_>>());
    Ok(HermiteForm {
        h,
        q: ops.q,
        original: m.clone(),
    })
}

/// Smith normal form `S = P * original * Q` with unimodular `P`, `Q`.
///
/// `S` has the original shape with diagonal entries `s_1 | s_2 | ...` for
/// the first `rank` positions and zeros elsewhere.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub p: IntMatrix,
    pub q: IntMatrix,
    pub original: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `s_1, ..., s_min(k,n)` (zeros beyond the rank).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|v| !v.is_zero()).count()
    }

    pub fn verify(&self) -> bool {
        if self.p.mul(&self.original).mul(&self.q) != self.s {
            return false;
        }
        if !self.p.det().abs().is_one() || !self.q.det().abs().is_one() {
            return false;
        }
        let d = self.diagonal();
        for (i, v) in d.iter().enumerate() {
            if v.is_negative() {
                return false;
            }
            if i + 1 < d.len() && !v.is_zero() && !d[i + 1].is_zero() && !(&d[i + 1] % v).is_zero()
            {
                return false;
            }
            if v.is_zero() && i + 1 < d.len() && !d[i + 1].is_zero() {
                return false;
            }
        }
        // off-diagonal entries must vanish
        for i in 0..self.s.rows() {
            for j in 0..self.s.cols() {
                if i != j && !self.s.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

pub fn snf(m: &IntMatrix) -> SmithForm {
    let (k, n) = (m.rows(), m.cols());
    let mut w = m.clone();
    let mut p = IntMatrix::identity(k);
    let mut ops = ColumnOps::new(n, true);
    // row helpers operating on (w, p) simultaneously
    fn row_swap(w: &mut IntMatrix, p: &mut IntMatrix, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..w.cols() {
            let va = w.get(a, c).clone();
            let vb = w.get(b, c).clone();
            w.set(a, c, vb);
            w.set(b, c, va);
        }
        for c in 0..p.cols() {
            let va = p.get(a, c).clone();
            let vb = p.get(b, c).clone();
            p.set(a, c, vb);
            p.set(b, c, va);
        }
    }
    fn row_add(w: &mut IntMatrix, p: &mut IntMatrix, dst: usize, src: usize, lambda: &BigInt) {
        if lambda.is_zero() {
            return;
        }
        for c in 0..w.cols() {
            let v = w.get(dst, c) + lambda * w.get(src, c);
            w.set(dst, c, v);
        }
        for c in 0..p.cols() {
            let v = p.get(dst, c) + lambda * p.get(src, c);
            p.set(dst, c, v);
        }
    }
    fn row_negate(w: &mut IntMatrix, p: &mut IntMatrix, r: usize) {
        for c in 0..w.cols() {
            let v = -w.get(r, c);
            w.set(r, c, v);
        }
        for c in 0..p.cols() {
            let v = -p.get(r, c);
            p.set(r, c, v);
        }
    }

    let dim = k.min(n);
    for t in 0..dim {
        'pivot: loop {
            // smallest nonzero entry in the trailing submatrix becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..k {
                for j in t..n {
                    if w.get(i, j).is_zero() {
                        continue;
                    }
                    best = match best {
                        None => Some((i, j)),
                        Some((bi, bj)) => {
                            if w.get(i, j).abs() < w.get(bi, bj).abs() {
                                Some((i, j))
                            } else {
                                Some((bi, bj))
                            }
                        }
                    };
                }
            }
            let (pi, pj) = match best {
                Some(x) => x,
                None => break 'pivot, // trailing block is zero; rank reached
            };
            row_swap(&mut w, &mut p, t, pi);
            ops.swap(&mut w, t, pj);
            // clear column t below the pivot
            let mut dirty = false;
            for i in (t + 1)..k {
                if w.get(i, t).is_zero() {
                    continue;
                }
                let q = w.get(i, t).div_floor(w.get(t, t));
                row_add(&mut w, &mut p, i, t, &-q);
                if !w.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // clear row t right of the pivot
            for j in (t + 1)..n {
                if w.get(t, j).is_zero() {
                    continue;
                }
                let q = w.get(t, j).div_floor(w.get(t, t));
                ops.add_col(&mut w, j, t, &-q);
                if !w.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // pivot must divide the whole trailing block for the chain s_i | s_{i+1}
            for i in (t + 1)..k {
                for j in (t + 1)..n {
                    if !(w.get(i, j) % w.get(t, t)).is_zero() {
                        row_add(&mut w, &mut p, t, i, &BigInt::one());
                        continue 'pivot;
                    }
                }
            }
            if w.get(t, t).is_negative() {
                row_negate(&mut w, &mut p, t);
            }
            break 'pivot;
        }
    }
    SmithForm {
        s: w,
        p,
        q: ops.q,
        original: m.clone(),
    }
}

/// Completes primitive rows `M` (gcd of maximal minors equal to 1) to a
/// unimodular matrix: returns `G` such that `stack(M, G)` has determinant ±1.
///
/// Built from the HNF transform: primitivity forces `H = I`, so `M` is the
/// top block of the unimodular `Q` and the remaining rows of `Q` complete it.
pub fn unimodular_completion(m: &IntMatrix) -> Result<IntMatrix, NormalFormError> {
    let (k, n) = (m.rows(), m.cols());
    if k >= n {
        return Err(NormalFormError::RankDeficient);
    }
    let form = hnf(m)?;
    if form.h != IntMatrix::identity(k) {
        // gcd of all maximal minors is |det H|
        return Err(NormalFormError::NotPrimitive(form.h.det().abs()));
    }
    let rows: Vec<usize> = (k..n).collect();
    Ok(form.q.select_rows(&rows))
}
