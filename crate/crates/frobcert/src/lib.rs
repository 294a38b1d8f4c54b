//! Exact-arithmetic feasibility certificates for integer linear systems.
//!
//! The crate decides and certifies integer feasibility of systems in
//! canonical form (`A x <= b`) and standard form (`A x = b, x >= 0`) under
//! slack conditions controlled by the maximum absolute subdeterminant
//! `Delta(A)`. All arithmetic is exact (`BigInt` / `BigRational`); every
//! positive answer carries an independently checkable certificate and every
//! negative answer states the exact slack gap that caused it.
//!
//! Module map:
//! - [`matrix`], [`normal_form`], [`delta`]: exact linear algebra (Bareiss
//!   determinants, HNF/SNF with unimodular witnesses, minor statistics);
//! - [`lp`]: exact rational simplex (max-min-slack points, feasible bases,
//!   bounding boxes, lattice-point enumeration);
//! - [`gomory`]: corner-polyhedron rounding for square subsystems and the
//!   slack-condition solvers built on it;
//! - [`discrepancy`]: constructive rounding of fractional slack vectors
//!   with exact achieved error;
//! - [`basefind`]: base-improvement searches (entrywise pivoting, subset
//!   sweeps, max-determinant selection);
//! - [`reductions`]: parameter-preserving standard/canonical reductions
//!   and gcd normalization;
//! - [`frobenius`]: the end-to-end pipelines and brute-force box oracles;
//! - [`textio`], [`report`], [`cli`]: file formats, structured certificate
//!   records, and the command-line surface.

pub mod basefind;
pub mod cli;
pub mod delta;
pub mod discrepancy;
pub mod frobenius;
pub mod gomory;
pub mod lp;
pub mod matrix;
pub mod normal_form;
pub mod reductions;
pub mod report;
pub mod system;
pub mod textio;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Caps and seeds shared by the search and enumeration routines.
///
/// All randomness in the crate is driven by `seed`; two runs with equal
/// configs produce identical output.
#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    /// Fractional-support size up to which rounding is exhaustively minimized.
    pub rounding_exhaustive_cap: usize,
    /// Random restarts for the rounding heuristic above the cap.
    pub rounding_restarts: usize,
    /// Largest codimension `k` admitted by the `2^k` subset sweeps.
    pub sweep_k_cap: usize,
    /// Cap on enumerated minors for delta statistics.
    pub minor_cap: u64,
    /// Cap on enumerated column subsets inside the max-determinant oracle.
    pub maxdet_enum_cap: u64,
    /// Cap on lattice points visited by box enumeration oracles.
    pub enum_cap: u64,
    /// Improvement factor required to accept a local-search swap.
    pub local_search_factor: BigRational,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 0,
            rounding_exhaustive_cap: 24,
            rounding_restarts: 10_000,
            sweep_k_cap: 20,
            minor_cap: delta::DEFAULT_MINOR_CAP,
            maxdet_enum_cap: 1_000_000,
            enum_cap: 10_000_000,
            local_search_factor: BigRational::new(BigInt::from(101), BigInt::from(100)),
        }
    }
}
