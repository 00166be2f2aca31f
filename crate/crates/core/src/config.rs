//! Numerical tolerances shared by every module.
//!
//! Every verdict the crate produces can be traced back to one of these
//! fields; nothing downstream hard-codes its own threshold.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Admissible deviation from Hermitian symmetry when admitting a matrix.
    pub hermitian: f64,
    /// Jacobi sweeps stop once the off-diagonal Frobenius mass drops below
    /// this multiple of the matrix norm.
    pub jacobi_offdiag: f64,
    /// Eigenvalues closer than this are treated as the same eigenvalue
    /// when merging blocks.
    pub eigenvalue_merge: f64,
    /// Singular values below this count towards the commutant nullspace.
    pub commutant_null: f64,
    /// Membership tolerance for numerical-range queries.
    pub numrange: f64,
    /// Number of support-function directions.
    pub n_theta: usize,
    /// Equality tolerance for exact closed-form threshold comparisons.
    pub threshold_equality: f64,
    /// Combined residual below which the feasibility oracle accepts.
    pub oracle_feasible: f64,
    /// Gap above which a stalled oracle run is declared infeasible.
    pub oracle_infeasible_gap: f64,
    /// Number of consecutive iterations the gap must stay flat.
    pub oracle_stall_window: usize,
    /// Relative spread of the gap over the stall window counted as flat.
    pub oracle_stall_spread: f64,
    /// Iteration cap for the feasibility oracle.
    pub oracle_max_iter: usize,
    /// Tolerance used when re-verifying a returned Choi certificate.
    pub certificate: f64,
    /// Largest realized Jordan operator.
    pub max_dimension: usize,
    /// Largest Choi matrix the oracle accepts.
    pub max_choi_dimension: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-12,
        jacobi_offdiag: 1e-14,
        eigenvalue_merge: 1e-9,
        commutant_null: 1e-8,
        numrange: 1e-7,
        n_theta: 720,
        threshold_equality: 1e-12,
        oracle_feasible: 1e-7,
        oracle_infeasible_gap: 1e-5,
        oracle_stall_window: 500,
        oracle_stall_spread: 1e-3,
        oracle_max_iter: 20_000,
        certificate: 1e-7,
        max_dimension: 512,
        max_choi_dimension: 256,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
