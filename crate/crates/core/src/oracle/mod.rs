//! Matricial-range membership `T_k ∈ W_{m_k}(⊕_{j≠k} T_j)` for Jordan
//! blocks, decided by numerical ranges, explicit compressions or the Choi
//! feasibility oracle.

mod affine;
mod barrier;
pub mod choi;
pub mod witness;

pub use choi::{
    choi_feasible, CertificateCheck, ChoiMatrix, ChoiProgram, ChoiVerdict, FeasibleEvidence, InfeasibleEvidence,
};
pub use witness::{
    apply_plan, block_program, compression_witness, omega, omega_blocks, omega_dilation, plan_choi, plan_kraus,
    CompressionPlan, PlanTerm,
};

use crate::classify::Rule;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::jordan::JordanSpec;
use crate::numrange::HullOfDisks;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeMembership {
    In,
    Out,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipVerdict {
    pub block: usize,
    pub membership: RangeMembership,
    pub rule: Rule,
    /// Rule-specific quantity: the signed hull margin for scalar blocks,
    /// the certificate residual for feasible oracle runs, the separation
    /// margin for infeasible ones and the last gap for undecided ones.
    pub margin: Option<f64>,
    pub plan: Option<CompressionPlan>,
    pub oracle: Option<ChoiVerdict>,
}

impl MembershipVerdict {
    fn new(block: usize, membership: RangeMembership, rule: Rule, margin: Option<f64>) -> Self {
        Self { block, membership, rule, margin, plan: None, oracle: None }
    }
}

fn check_index(spec: &JordanSpec, k: usize) -> Result<()> {
    if k >= spec.len() {
        return Err(Error::BlockIndex { index: k, len: spec.len() });
    }
    if spec.len() < 2 {
        return Err(Error::SingleBlock);
    }
    Ok(())
}

/// For a scalar block `W_1` is the numerical range, i.e. the hull of the
/// other blocks' disks, tested exactly. `None` when `m_k > 1`.
pub fn scalar_membership(spec: &JordanSpec, k: usize, tol: &Tolerances) -> Result<Option<MembershipVerdict>> {
    check_index(spec, k)?;
    let b = spec.blocks()[k];
    if b.size != 1 {
        return Ok(None);
    }
    let hull = HullOfDisks::of_spec(&spec.without(k)?);
    let margin = hull.point_margin(b.eigenvalue);
    let membership = if margin >= -tol.threshold_equality { RangeMembership::In } else { RangeMembership::Out };
    Ok(Some(MembershipVerdict::new(k, membership, Rule::ScalarNumrange, Some(margin))))
}

/// `In` with an explicit compression plan, or `None` when there is none.
pub fn witness_membership(spec: &JordanSpec, k: usize) -> Result<Option<MembershipVerdict>> {
    check_index(spec, k)?;
    Ok(compression_witness(spec, k)?.map(|plan| {
        let residual = apply_plan(&plan, spec, k)
            .map(|m| (&m - &spec.blocks()[k].matrix()).max_abs())
            .unwrap_or(f64::INFINITY);
        let mut v = MembershipVerdict::new(k, RangeMembership::In, Rule::CompressionWitness, Some(residual));
        v.plan = Some(plan);
        v
    }))
}

pub fn choi_membership(spec: &JordanSpec, k: usize, tol: &Tolerances) -> Result<MembershipVerdict> {
    check_index(spec, k)?;
    let verdict = choi_feasible(&block_program(spec, k)?, tol)?;
    let (membership, margin) = match &verdict {
        ChoiVerdict::Feasible { check, .. } => (RangeMembership::In, check.residual()),
        ChoiVerdict::Infeasible { margin, .. } => (RangeMembership::Out, *margin),
        ChoiVerdict::Unknown { gap, .. } => (RangeMembership::Unknown, *gap),
    };
    let mut v = MembershipVerdict::new(k, membership, Rule::ChoiOracle, Some(margin));
    v.oracle = Some(verdict);
    Ok(v)
}

/// Scalar numerical range, then compression witness, then the Choi oracle;
/// the first conclusive answer wins.
pub fn in_matricial_range(spec: &JordanSpec, k: usize, tol: &Tolerances) -> Result<MembershipVerdict> {
    if let Some(v) = scalar_membership(spec, k, tol)? {
        return Ok(v);
    }
    if let Some(v) = witness_membership(spec, k)? {
        return Ok(v);
    }
    choi_membership(spec, k, tol)
}
