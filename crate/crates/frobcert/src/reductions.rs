//! Parameter-preserving transformations between the problem forms.
//!
//! - `normalize_gcd`: left-multiplies a standard system by the inverse of
//!   its Smith diagonal so that the gcd of maximal minors becomes 1, or
//!   certifies integral infeasibility when the transformed right-hand side
//!   is fractional;
//! - `standard_to_canonical`: rewrites `A x = b, x >= 0` over the integer
//!   kernel lattice as `W xh <= x0` in `n - k` variables, preserving the
//!   maximal minors (`Delta(W) = Delta(A)`);
//! - `canonical_to_modular_standard`: the reverse direction, producing the
//!   slack-variable system with congruence constraints whose modulus
//!   matrix has `|det S| = Delta_gcd(A)`.
//!
//! Every transformation returns an explicit affine bijection between the
//! integer solution sets, so round trips are testable point by point.

use crate::matrix::{IntMatrix, RatMatrix, RatVector};
use crate::normal_form::{hnf, snf, unimodular_completion, NormalFormError};
use crate::system::{CanonicalSystem, StandardSystem, SystemError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("system is integrally infeasible (certified by the gcd obstruction)")]
    Infeasible,
    #[error("gcd of maximal minors is {0}, run normalize_gcd first")]
    NotNormalized(BigInt),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
}

/// `v -> offset + matrix * v` with exact rational entries.
///
/// Maps between integer solution sets are integral on valid inputs even
/// when the matrix itself has fractional entries.
#[derive(Debug, Clone)]
pub struct AffineMap {
    pub offset: RatVector,
    pub matrix: RatMatrix,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        AffineMap {
            offset: vec![BigRational::zero(); n],
            matrix: RatMatrix::identity(n),
        }
    }

    pub fn from_int(offset: &[BigInt], matrix: &IntMatrix) -> Self {
        AffineMap {
            offset: offset
                .iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect(),
            matrix: matrix.to_rational(),
        }
    }

    pub fn apply_rat(&self, v: &[BigRational]) -> RatVector {
        self.matrix
            .mul_vec(v)
            .into_iter()
            .zip(self.offset.iter())
            .map(|(m, o)| m + o)
            .collect()
    }

    /// Applies the map to an integer point; `None` when the image is not
    /// integral (the point was outside the solution set the map is for).
    pub fn apply_int(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let rat: RatVector = v
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        let image = self.apply_rat(&rat);
        let mut out = Vec::with_capacity(image.len());
        for x in image {
            if !x.denom().is_one() {
                return None;
            }
            out.push(x.numer().clone());
        }
        Some(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    GcdNormalization,
    StandardToCanonical,
    CanonicalToModularStandard,
}

/// Affine bijection between the integer solution sets of two systems.
#[derive(Debug, Clone)]
pub struct SolutionBijection {
    pub forward: AffineMap,
    pub backward: AffineMap,
    pub provenance: Provenance,
}

/// Left-normalizes a standard system to `Delta_gcd = 1`.
///
/// The solution set is unchanged (the transformation only multiplies the
/// equations by an invertible rational matrix), so the bijection is the
/// identity. A fractional transformed right-hand side certifies that
/// `A x = b` has no integer solution at all.
pub fn normalize_gcd(
    sys: &StandardSystem,
) -> Result<(StandardSystem, SolutionBijection), ReductionError> {
    let k = sys.codim();
    let n = sys.dim();
    let identity = SolutionBijection {
        forward: AffineMap::identity(n),
        backward: AffineMap::identity(n),
        provenance: Provenance::GcdNormalization,
    };
    if sys.is_normalized() {
        return Ok((sys.clone(), identity));
    }
    let form = snf(&sys.a);
    let diag = form.diagonal();
    let pb = form.p.mul_vec(&sys.b);
    let mut b_new = Vec::with_capacity(k);
    for i in 0..k {
        let (q, r) = pb[i].div_rem(&diag[i]);
        if !r.is_zero() {
            return Err(ReductionError::Infeasible);
        }
        b_new.push(q);
    }
    // D^{-1} P A = (I | 0) Q^{-1}: the first k rows of Q^{-1}
    let q_inv = form
        .q
        .to_rational()
        .inverse()
        .expect("unimodular")
        .to_integer()
        .expect("inverse of a unimodular matrix is integral");
    let rows: Vec<usize> = (0..k).collect();
    let a_new = q_inv.select_rows(&rows);
    let out = StandardSystem::new(a_new, b_new)?;
    debug_assert!(out.is_normalized());
    Ok((out, identity))
}

/// Result of rewriting a standard system in canonical form.
#[derive(Debug)]
pub enum CanonicalReduction {
    Reduced {
        sys: CanonicalSystem,
        bijection: SolutionBijection,
    },
    /// `n = k`: the matrix is square unimodular and `x0 = A^{-1} b` decides
    /// feasibility outright.
    Degenerate { x0: Vec<BigInt>, feasible: bool },
}

/// Round to nearest with half-up tie breaking.
fn round_half_up(q: &BigRational) -> BigInt {
    (q + BigRational::new(BigInt::one(), BigInt::from(2)))
        .floor()
        .to_integer()
}

/// Rewrites `A x = b, x >= 0` (with `Delta_gcd(A) = 1`) as the canonical
/// system `W xh <= x0` over the kernel lattice of `A`.
///
/// `W` holds a primitive integer kernel basis taken from the inverse of the
/// unimodular completion of `A`, which transfers the maximal minors of `A`
/// to `W` one for one. The returned bijection is `x = x0 - W xh` with
/// inverse `xh = G (x0 - x)`.
pub fn standard_to_canonical(
    sys: &StandardSystem,
) -> Result<CanonicalReduction, ReductionError> {
    if !sys.is_normalized() {
        return Err(ReductionError::NotNormalized(sys.stats().delta_gcd.clone()));
    }
    let k = sys.codim();
    let n = sys.dim();
    let d = n - k;
    if d == 0 {
        // |det A| = Delta_gcd = 1
        let x0 = sys
            .a
            .to_rational()
            .inverse()
            .expect("full rank")
            .mul_vec(
                &sys.b
                    .iter()
                    .map(|v| BigRational::from_integer(v.clone()))
                    .collect::<Vec<_>>(),
            )
            .into_iter()
            .map(|v| {
                debug_assert!(v.denom().is_one());
                v.numer().clone()
            })
            .collect::<Vec<_>>();
        let feasible = x0.iter().all(|v| !v.is_negative());
        return Ok(CanonicalReduction::Degenerate { x0, feasible });
    }
    let g = unimodular_completion(&sys.a)?;
    let u = sys.a.stack(&g);
    let u_inv = u
        .to_rational()
        .inverse()
        .expect("unimodular")
        .to_integer()
        .expect("inverse of a unimodular matrix is integral");
    let kernel_cols: Vec<usize> = (k..n).collect();
    let w = u_inv.select_cols(&kernel_cols);
    let first_cols: Vec<usize> = (0..k).collect();
    let v = u_inv.select_cols(&first_cols);
    let mut x0 = v.mul_vec(&sys.b);
    // size-reduce the particular solution against the kernel columns
    for j in 0..d {
        let col: Vec<BigInt> = (0..n).map(|i| w.get(i, j).clone()).collect();
        let dot: BigInt = col.iter().zip(x0.iter()).map(|(a, b)| a * b).sum();
        let norm: BigInt = col.iter().map(|a| a * a).sum();
        let mu = round_half_up(&BigRational::new(dot, norm));
        if !mu.is_zero() {
            for i in 0..n {
                x0[i] = &x0[i] - &mu * &col[i];
            }
        }
    }
    debug_assert_eq!(sys.a.mul_vec(&x0), sys.b);
    let canonical = CanonicalSystem::new(w.clone(), x0.clone())?;
    let g_x0 = g.mul_vec(&x0);
    let bijection = SolutionBijection {
        forward: AffineMap::from_int(&g_x0, &g.neg()),
        backward: AffineMap::from_int(&x0, &w.neg()),
        provenance: Provenance::StandardToCanonical,
    };
    Ok(CanonicalReduction::Reduced {
        sys: canonical,
        bijection,
    })
}

/// Standard-form system augmented with congruence constraints
/// `G x = g (mod diag(S))`; the parameter-preserving image of a canonical
/// system.
#[derive(Debug, Clone)]
pub struct ModularStandardSystem {
    /// Equality block, `None` when the canonical system was square (k = 0).
    pub a: Option<IntMatrix>,
    /// Right-hand side of the equality block (length k).
    pub b: Vec<BigInt>,
    /// Congruence block, `n x (n+k)`.
    pub g: IntMatrix,
    /// Congruence right-hand side, reduced into `[0, s_i)`.
    pub g_rhs: Vec<BigInt>,
    /// Smith diagonal moduli `s_1 | ... | s_n` as a diagonal matrix.
    pub s: IntMatrix,
}

impl ModularStandardSystem {
    pub fn is_solution(&self, xhat: &[BigInt]) -> bool {
        if xhat.iter().any(|v| v.is_negative()) {
            return false;
        }
        if let Some(a) = &self.a {
            if a.mul_vec(xhat) != self.b {
                return false;
            }
        }
        let gx = self.g.mul_vec(xhat);
        for i in 0..gx.len() {
            let s_i = self.s.get(i, i);
            let diff = &gx[i] - &self.g_rhs[i];
            if !diff.mod_floor(s_i).is_zero() {
                return false;
            }
        }
        true
    }

    pub fn det_s_abs(&self) -> BigInt {
        (0..self.s.rows())
            .map(|i| self.s.get(i, i).clone())
            .product::<BigInt>()
            .abs()
    }
}

/// Rewrites `A x <= b` as the modular-standard system over the slack vector
/// `xh = b - A x`.
///
/// The Smith form `P A Q = (D; 0)` characterizes membership in the shifted
/// lattice `b - A Z^n`: the last `k` rows of `P` become exact equalities
/// and the first `n` rows become congruences modulo the Smith diagonal, so
/// `|det S| = Delta_gcd(A)` and the stacked `(A; G)` is unimodular.
pub fn canonical_to_modular_standard(
    sys: &CanonicalSystem,
) -> Result<(ModularStandardSystem, SolutionBijection), ReductionError> {
    let n = sys.dim();
    let k = sys.codim();
    let form = snf(&sys.a);
    let diag = form.diagonal();
    debug_assert_eq!(diag.len(), n);
    let pb = form.p.mul_vec(&sys.b);
    let g_rows: Vec<usize> = (0..n).collect();
    let g = form.p.select_rows(&g_rows);
    let mut s = IntMatrix::zero(n, n);
    let mut g_rhs = Vec::with_capacity(n);
    for i in 0..n {
        s.set(i, i, diag[i].clone());
        g_rhs.push(pb[i].mod_floor(&diag[i]));
    }
    let (a_block, b_block) = if k > 0 {
        let rows: Vec<usize> = (n..n + k).collect();
        (
            Some(form.p.select_rows(&rows)),
            pb[n..].to_vec(),
        )
    } else {
        (None, Vec::new())
    };
    // backward map: x = Q D^{-1} (P (b - xh))_{1..n}
    let mut d_inv_p = RatMatrix::zero(n, n + k);
    for i in 0..n {
        for j in 0..n + k {
            d_inv_p.set(
                i,
                j,
                BigRational::new(form.p.get(i, j).clone(), diag[i].clone()),
            );
        }
    }
    let qd = form.q.to_rational().mul(&d_inv_p);
    let b_rat: RatVector = sys
        .b
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect();
    let backward = AffineMap {
        offset: qd.mul_vec(&b_rat),
        matrix: RatMatrix::from_entries(
            n,
            n + k,
            (0..n)
                .flat_map(|i| (0..n + k).map(move |j| (i, j)))
                .map(|(i, j)| -qd.get(i, j).clone())
                .collect(),
        ),
    };
    let forward = AffineMap::from_int(&sys.b, &sys.a.neg());
    let system = ModularStandardSystem {
        a: a_block,
        b: b_block,
        g,
        g_rhs,
        s,
    };
    Ok((
        system,
        SolutionBijection {
            forward,
            backward,
            provenance: Provenance::CanonicalToModularStandard,
        },
    ))
}

/// Unimodular stack `(A; G)` of the modular-standard pieces, for audits.
pub fn stacked_transform(sys: &ModularStandardSystem) -> IntMatrix {
    match &sys.a {
        Some(a) => a.stack(&sys.g),
        None => sys.g.clone(),
    }
}

/// HNF-backed existence check for `A x = b` over the integers (no sign
/// constraint), used by tests as an independent oracle.
pub fn has_integer_solution(a: &IntMatrix, b: &[BigInt]) -> bool {
    let Ok(form) = hnf(a) else {
        return false;
    };
    // solve (H|0) y = b by forward substitution; integrality decides
    let k = a.rows();
    let mut y = Vec::with_capacity(k);
    for i in 0..k {
        let mut acc = BigRational::from_integer(b[i].clone());
        for (j, yj) in y.iter().enumerate().take(i) {
            acc -= BigRational::from_integer(form.h.get(i, j).clone()) * yj;
        }
        let hi = BigRational::from_integer(form.h.get(i, i).clone());
        y.push(acc / hi);
    }
    y.iter().all(|v: &BigRational| v.denom().is_one())
}
