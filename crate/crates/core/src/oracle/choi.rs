//! Semidefinite feasibility: is there a unital completely positive map on the
//! block-diagonal algebra of the source that sends the source to the target?
//!
//! A map `Φ` on `⊕_j M_{n_j}` into `M_k` is encoded by its Choi blocks
//! `C_j = Σ_{ab} E_ab ⊗ Φ(E^{(j)}_ab)`, each of size `n_j k`; `Φ` is
//! completely positive exactly when every block is positive semidefinite.
//! The unital and source constraints are real-linear in the blocks, so the
//! question is whether an affine subspace meets the PSD cone.
//!
//! Dykstra's alternating projections run first. They settle well-posed
//! instances quickly but crawl when the two sets only touch, so an
//! unfinished run is handed to a log-det barrier stage that brackets the
//! largest feasible shift `t` in `C - t·1 ⪰ 0`. Infeasibility is reported
//! from Farkas certificates where possible and from a stabilized gap only
//! as a last resort.

use std::collections::VecDeque;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigen, jacobi_in_place, Complex, ComplexMatrix, HermitianMatrix};

use super::affine::{add, block_matrix, identity_blocks, norm, sub, vnorm, Affine, Blocks, ZERO};
use super::barrier::{refine, BarrierOutcome};

/// Dykstra iterations before the barrier stage takes over.
const ESCALATE_AFTER: usize = 400;
/// Iterations between dual-certificate attempts.
const DUAL_INTERVAL: usize = 25;
/// Iterations between full (cold) eigendecompositions in the PSD projection.
const REFRESH_INTERVAL: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiProgram {
    source: Vec<ComplexMatrix>,
    target: ComplexMatrix,
}

impl ChoiProgram {
    /// `source` lists the direct summands of the source operator.
    pub fn new(source: Vec<ComplexMatrix>, target: ComplexMatrix) -> Result<Self> {
        if source.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        for m in source.iter().chain(std::iter::once(&target)) {
            if !m.is_square() {
                return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
            }
        }
        Ok(Self { source, target })
    }

    pub fn source_blocks(&self) -> &[ComplexMatrix] {
        &self.source
    }

    pub fn source(&self) -> ComplexMatrix {
        ComplexMatrix::direct_sum(&self.source)
    }

    pub fn target(&self) -> &ComplexMatrix {
        &self.target
    }

    pub fn target_dim(&self) -> usize {
        self.target.rows()
    }

    pub fn source_dim(&self) -> usize {
        self.source.iter().map(|b| b.rows()).sum()
    }

    pub fn choi_dim(&self) -> usize {
        self.source_dim() * self.target_dim()
    }

    pub(super) fn block_dims(&self) -> Vec<usize> {
        self.source.iter().map(|b| b.rows() * self.target_dim()).collect()
    }

    /// Re-verifies a candidate Choi matrix against the program, independently
    /// of how it was produced.
    pub fn check(&self, choi: &ChoiMatrix) -> CertificateCheck {
        let identities: Vec<ComplexMatrix> = self.source.iter().map(|b| ComplexMatrix::identity(b.rows())).collect();
        let adjoints: Vec<ComplexMatrix> = self.source.iter().map(|b| b.adjoint()).collect();
        let k = self.target_dim();
        CertificateCheck {
            unital_residual: (&choi.apply(&identities) - &ComplexMatrix::identity(k)).max_abs(),
            source_residual: (&choi.apply(&self.source) - &self.target).max_abs(),
            adjoint_residual: (&choi.apply(&adjoints) - &self.target.adjoint()).max_abs(),
            min_eigenvalue: choi.min_eigenvalue(),
        }
    }
}

/// Block-diagonal Choi matrix of a map from `⊕_j M_{n_j}` into `M_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    k: usize,
    blocks: Vec<ComplexMatrix>,
}

impl ChoiMatrix {
    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    /// Choi matrix of `X ↦ Σ_t K_t X K_t*` restricted to the block-diagonal
    /// algebra of `program`'s source; each `K_t` is `k × N`.
    pub fn from_kraus(program: &ChoiProgram, kraus: &[ComplexMatrix]) -> Result<Self> {
        let k = program.target_dim();
        let n = program.source_dim();
        let mut blocks: Vec<ComplexMatrix> =
            program.block_dims().iter().map(|&d| ComplexMatrix::zeros(d, d)).collect();
        for op in kraus {
            if op.rows() != k || op.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator is {}x{}, expected {k}x{n}",
                    op.rows(),
                    op.cols()
                )));
            }
            let mut offset = 0;
            for (j, src) in program.source.iter().enumerate() {
                let nj = src.rows();
                let v: Vec<Complex> = (0..nj * k).map(|i| op[(i % k, offset + i / k)]).collect();
                let d = nj * k;
                let add = ComplexMatrix::from_fn(d, d, |r, c| v[r] * v[c].conj());
                blocks[j] = &blocks[j] + &add;
                offset += nj;
            }
        }
        Ok(Self { k, blocks })
    }

    /// `Φ(⊕_j X_j)`.
    pub fn apply(&self, x: &[ComplexMatrix]) -> ComplexMatrix {
        assert_eq!(x.len(), self.blocks.len(), "one input block per Choi block");
        let k = self.k;
        let mut out = ComplexMatrix::zeros(k, k);
        for (xj, cj) in x.iter().zip(&self.blocks) {
            let nj = xj.rows();
            for a in 0..nj {
                for b in 0..nj {
                    let s = xj[(a, b)];
                    if s == ZERO {
                        continue;
                    }
                    for p in 0..k {
                        for q in 0..k {
                            let v = out[(p, q)] + s * cj[(a * k + p, b * k + q)];
                            out.set(p, q, v);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| hermitian_eigen(&HermitianMatrix::real_part(b)).min())
            .fold(f64::INFINITY, f64::min)
    }

    /// The full Choi matrix (block diagonal).
    pub fn full(&self) -> ComplexMatrix {
        ComplexMatrix::direct_sum(&self.blocks)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateCheck {
    pub unital_residual: f64,
    pub source_residual: f64,
    pub adjoint_residual: f64,
    pub min_eigenvalue: f64,
}

impl CertificateCheck {
    pub fn residual(&self) -> f64 {
        self.unital_residual.max(self.source_residual).max(self.adjoint_residual)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.residual() <= tol && self.min_eigenvalue >= -tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibleEvidence {
    /// The alternating projections converged.
    Converged,
    /// The barrier stage found a point with `C ⪰ -slack·1`.
    InteriorPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfeasibleEvidence {
    /// The linear constraints alone have no solution.
    InconsistentConstraints,
    /// A combination of the constraints is PSD-separated from the data.
    DualCertificate,
    /// The gap between the two sets stopped moving and the barrier stage
    /// could not settle the instance either.
    GapStabilized,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChoiVerdict {
    Feasible { choi: ChoiMatrix, check: CertificateCheck, evidence: FeasibleEvidence, iterations: usize },
    Infeasible { margin: f64, evidence: InfeasibleEvidence, iterations: usize },
    Unknown { gap: f64, residual: f64, iterations: usize },
}

impl ChoiVerdict {
    pub fn iterations(&self) -> usize {
        match self {
            Self::Feasible { iterations, .. } | Self::Infeasible { iterations, .. } | Self::Unknown { iterations, .. } => {
                *iterations
            }
        }
    }
}

fn to_matrices(dims: &[usize], x: &Blocks) -> Vec<ComplexMatrix> {
    dims.iter().zip(x).map(|(&d, b)| block_matrix(d, b)).collect()
}

/// Projection of the Hermitian `x` onto the PSD cone, reusing (and
/// updating) an approximate eigenbasis `v` from the previous iteration.
fn psd_project_warm(d: usize, x: &[Complex], v: &mut [Complex], tol: f64) -> Vec<Complex> {
    // b = v* x v
    let mut xv = vec![ZERO; d * d];
    for r in 0..d {
        for c in 0..d {
            let mut s = ZERO;
            for t in 0..d {
                s += x[r * d + t] * v[t * d + c];
            }
            xv[r * d + c] = s;
        }
    }
    let mut b = vec![ZERO; d * d];
    for r in 0..d {
        for c in r..d {
            let mut s = ZERO;
            for t in 0..d {
                s += v[t * d + r].conj() * xv[t * d + c];
            }
            b[r * d + c] = s;
            b[c * d + r] = s.conj();
        }
    }
    jacobi_in_place(d, &mut b, v, tol);
    let w: Vec<f64> = (0..d).map(|i| b[i * d + i].re.max(0.0)).collect();
    let mut out = vec![ZERO; d * d];
    for r in 0..d {
        for c in r..d {
            let mut s = ZERO;
            for t in 0..d {
                if w[t] > 0.0 {
                    s += v[r * d + t] * v[c * d + t].conj() * w[t];
                }
            }
            out[r * d + c] = s;
            out[c * d + r] = s.conj();
        }
    }
    out
}

/// Decides whether some unital completely positive map sends the source of
/// `p` to its target. Dykstra iterations and barrier Newton steps share the
/// `oracle_max_iter` budget.
pub fn choi_feasible(p: &ChoiProgram, tol: &Tolerances) -> Result<ChoiVerdict> {
    let dim = p.choi_dim();
    if dim > tol.max_choi_dimension {
        return Err(Error::ChoiGuard { dim, limit: tol.max_choi_dimension });
    }
    let k = p.target_dim();
    let affine = Affine::new(p);
    let scale = 1.0 + vnorm(&affine.b);

    let ls = affine.least_squares();
    let inconsistency = vnorm(&affine.residual(&ls));
    if inconsistency > 1e-9 * scale {
        return Ok(ChoiVerdict::Infeasible {
            margin: inconsistency,
            evidence: InfeasibleEvidence::InconsistentConstraints,
            iterations: 0,
        });
    }

    let finish = |c: Blocks, evidence, iterations| {
        let choi = ChoiMatrix { k, blocks: to_matrices(&affine.dims, &c) };
        let check = p.check(&choi);
        check.passes(tol.certificate).then_some(ChoiVerdict::Feasible { choi, check, evidence, iterations })
    };

    let dims = affine.dims.clone();
    let mut x = identity_blocks(&dims, 1.0 / p.source_dim() as f64);
    let mut corr = affine.zeros();
    let mut vecs = identity_blocks(&dims, 1.0);
    let mut gaps: VecDeque<f64> = VecDeque::with_capacity(tol.oracle_stall_window + 1);
    let (mut gap, mut res) = (f64::INFINITY, f64::INFINITY);
    let mut stalled = false;
    let dykstra_budget = tol.oracle_max_iter.min(ESCALATE_AFTER);
    let mut used = 0;

    while used < dykstra_budget {
        used += 1;
        let it = used;
        if it % REFRESH_INTERVAL == 0 {
            vecs = identity_blocks(&dims, 1.0);
        }
        let y = affine.project(&x);
        let w = add(&y, &corr);
        let z: Blocks = dims
            .iter()
            .enumerate()
            .map(|(j, &d)| psd_project_warm(d, &w[j], &mut vecs[j], tol.jacobi_offdiag))
            .collect();
        corr = sub(&w, &z);
        let diff = sub(&y, &z);
        gap = norm(&diff);
        res = vnorm(&affine.residual(&z));

        if res < tol.oracle_feasible {
            if let Some(v) = finish(z.clone(), FeasibleEvidence::Converged, it) {
                return Ok(v);
            }
        }
        if it % DUAL_INTERVAL == 0 {
            let margin = affine.certify_direction(&diff).or_else(|| affine.certify_direction(&corr));
            if let Some(margin) = margin {
                return Ok(ChoiVerdict::Infeasible { margin, evidence: InfeasibleEvidence::DualCertificate, iterations: it });
            }
        }
        gaps.push_back(gap);
        if gaps.len() > tol.oracle_stall_window {
            gaps.pop_front();
        }
        if gaps.len() == tol.oracle_stall_window {
            let lo = gaps.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = gaps.iter().copied().fold(0.0, f64::max);
            if lo > tol.oracle_infeasible_gap && (hi - lo) / hi < tol.oracle_stall_spread {
                stalled = true;
                break;
            }
        }
        x = z;
    }

    let remaining = tol.oracle_max_iter - used;
    if remaining > 0 {
        let run = refine(&affine, remaining, 0.5 * tol.certificate);
        used += run.steps;
        match run.outcome {
            BarrierOutcome::Feasible(c) => {
                // Projecting removes the affine drift at a cost of at most
                // its size in the smallest eigenvalue.
                let projected = affine.project(&c);
                let v = finish(projected, FeasibleEvidence::InteriorPoint, used)
                    .or_else(|| finish(c, FeasibleEvidence::InteriorPoint, used));
                if let Some(v) = v {
                    return Ok(v);
                }
            }
            BarrierOutcome::Infeasible(margin) => {
                return Ok(ChoiVerdict::Infeasible {
                    margin,
                    evidence: InfeasibleEvidence::DualCertificate,
                    iterations: used,
                });
            }
            BarrierOutcome::Stalled => {}
        }
    }
    if stalled {
        return Ok(ChoiVerdict::Infeasible { margin: gap, evidence: InfeasibleEvidence::GapStabilized, iterations: used });
    }
    Ok(ChoiVerdict::Unknown { gap, residual: res, iterations: used })
}
