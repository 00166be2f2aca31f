//! Explicit unital completely positive maps that realize one Jordan block
//! from the others: convex combinations of corner compressions, and
//! isometric conjugations.

use crate::error::{Error, Result};
use crate::jordan::JordanSpec;
use crate::matrix::{jordan_block, Complex, ComplexMatrix};

use super::choi::{ChoiMatrix, ChoiProgram};

const WEIGHT_TOL: f64 = 1e-12;

/// `ψ(⊕ A_j) = Σ_t a_t P_t A_{s_t} P_t*`, where `P_t` keeps the leading
/// `m_k × m_k` corner of block `s_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressionPlan {
    pub target: usize,
    pub terms: Vec<PlanTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanTerm {
    pub block: usize,
    pub weight: f64,
}

/// Looks for a plan realizing block `k` from the blocks at least as large:
/// `λ_k` must be a convex combination of their eigenvalues, since the
/// leading corner of `J_n(μ)` is `J_{m_k}(μ)` whenever `n >= m_k`.
pub fn compression_witness(spec: &JordanSpec, k: usize) -> Result<Option<CompressionPlan>> {
    let blocks = spec.blocks();
    if k >= blocks.len() {
        return Err(Error::BlockIndex { index: k, len: blocks.len() });
    }
    let mk = blocks[k].size;
    let lambda = blocks[k].eigenvalue;
    let eligible: Vec<usize> = (0..blocks.len()).filter(|&j| j != k && blocks[j].size >= mk).collect();
    let ev = |j: usize| blocks[j].eigenvalue;
    let plan = |terms: Vec<PlanTerm>| Ok(Some(CompressionPlan { target: k, terms }));

    if let Some(&j) = eligible.iter().find(|&&j| (ev(j) - lambda).norm() <= WEIGHT_TOL) {
        return plan(vec![PlanTerm { block: j, weight: 1.0 }]);
    }
    let real = |z: Complex| z.im.abs() <= WEIGHT_TOL;
    if real(lambda) && eligible.iter().all(|&j| real(ev(j))) {
        let lo = eligible.iter().copied().min_by(|&a, &b| ev(a).re.total_cmp(&ev(b).re));
        let hi = eligible.iter().copied().max_by(|&a, &b| ev(a).re.total_cmp(&ev(b).re));
        if let (Some(lo), Some(hi)) = (lo, hi) {
            let (a, b) = (ev(lo).re, ev(hi).re);
            if a < lambda.re && lambda.re < b {
                let t = (lambda.re - a) / (b - a);
                return plan(vec![PlanTerm { block: hi, weight: t }, PlanTerm { block: lo, weight: 1.0 - t }]);
            }
        }
        return Ok(None);
    }
    // Planar case: a segment or triangle of eligible eigenvalues around λ_k.
    for (x, &a) in eligible.iter().enumerate() {
        for &b in &eligible[x + 1..] {
            if let Some(t) = segment_weight(ev(a), ev(b), lambda) {
                return plan(vec![PlanTerm { block: a, weight: t }, PlanTerm { block: b, weight: 1.0 - t }]);
            }
        }
    }
    for (x, &a) in eligible.iter().enumerate() {
        for (y, &b) in eligible.iter().enumerate().skip(x + 1) {
            for &c in &eligible[y + 1..] {
                if let Some(w) = barycentric(ev(a), ev(b), ev(c), lambda) {
                    return plan(
                        [a, b, c].iter().zip(w).map(|(&block, weight)| PlanTerm { block, weight }).collect(),
                    );
                }
            }
        }
    }
    Ok(None)
}

/// `t` with `z = t a + (1 - t) b`, `t ∈ [0, 1]`.
fn segment_weight(a: Complex, b: Complex, z: Complex) -> Option<f64> {
    let d = a - b;
    let n = d.norm_sqr();
    if n == 0.0 {
        return None;
    }
    let t = ((z - b) * d.conj()).re / n;
    let off = (z - (a * t + b * (1.0 - t))).norm();
    ((-WEIGHT_TOL..=1.0 + WEIGHT_TOL).contains(&t) && off <= WEIGHT_TOL).then(|| t.clamp(0.0, 1.0))
}

fn barycentric(a: Complex, b: Complex, c: Complex, z: Complex) -> Option<[f64; 3]> {
    let cross = |u: Complex, v: Complex| u.re * v.im - u.im * v.re;
    let area = cross(b - a, c - a);
    if area.abs() <= WEIGHT_TOL {
        return None;
    }
    let wa = cross(b - z, c - z) / area;
    let wb = cross(c - z, a - z) / area;
    let wc = 1.0 - wa - wb;
    [wa, wb, wc].iter().all(|&w| w >= -WEIGHT_TOL).then(|| [wa.max(0.0), wb.max(0.0), wc.max(0.0)])
}

fn validate(plan: &CompressionPlan, spec: &JordanSpec, k: usize) -> Result<()> {
    let blocks = spec.blocks();
    if plan.target != k || k >= blocks.len() {
        return Err(Error::PlanMismatch(format!("plan targets block {}, asked for {k}", plan.target)));
    }
    let mut total = 0.0;
    for t in &plan.terms {
        if t.block >= blocks.len() || t.block == k {
            return Err(Error::PlanMismatch(format!("term refers to block {}", t.block)));
        }
        if blocks[t.block].size < blocks[k].size {
            return Err(Error::PlanMismatch(format!("block {} is smaller than the target", t.block)));
        }
        if t.weight < 0.0 {
            return Err(Error::PlanMismatch("negative weight".into()));
        }
        total += t.weight;
    }
    if (total - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::PlanMismatch(format!("weights sum to {total}")));
    }
    Ok(())
}

/// `Σ_t a_t P_t J_{m_{s_t}}(λ_{s_t}) P_t*`.
pub fn apply_plan(plan: &CompressionPlan, spec: &JordanSpec, k: usize) -> Result<ComplexMatrix> {
    validate(plan, spec, k)?;
    let mk = spec.blocks()[k].size;
    let mut out = ComplexMatrix::zeros(mk, mk);
    for t in &plan.terms {
        let corner = spec.blocks()[t.block].matrix().truncate(mk, mk);
        out = &out + &corner.scale_real(t.weight);
    }
    Ok(out)
}

/// The program "block `k` from all other blocks", multiplicities dropped.
pub fn block_program(spec: &JordanSpec, k: usize) -> Result<ChoiProgram> {
    let blocks = spec.blocks();
    if k >= blocks.len() {
        return Err(Error::BlockIndex { index: k, len: blocks.len() });
    }
    if blocks.len() < 2 {
        return Err(Error::SingleBlock);
    }
    let source = blocks.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, b)| b.matrix()).collect();
    ChoiProgram::new(source, blocks[k].matrix())
}

/// Kraus operators `sqrt(a_t) P_t`, embedded at the source offsets of
/// [`block_program`].
pub fn plan_kraus(plan: &CompressionPlan, spec: &JordanSpec, k: usize) -> Result<Vec<ComplexMatrix>> {
    validate(plan, spec, k)?;
    let blocks = spec.blocks();
    let mk = blocks[k].size;
    let mut offsets = Vec::new();
    let mut n = 0;
    for (j, b) in blocks.iter().enumerate() {
        offsets.push(n);
        if j != k {
            n += b.size;
        }
    }
    Ok(plan
        .terms
        .iter()
        .map(|t| {
            let o = offsets[t.block];
            let s = t.weight.sqrt();
            ComplexMatrix::from_fn(mk, n, |p, c| if c == o + p { Complex::new(s, 0.0) } else { Complex::new(0.0, 0.0) })
        })
        .collect())
}

/// Choi matrix of the plan's map, as a certificate for [`block_program`].
pub fn plan_choi(plan: &CompressionPlan, spec: &JordanSpec, k: usize) -> Result<ChoiMatrix> {
    ChoiMatrix::from_kraus(&block_program(spec, k)?, &plan_kraus(plan, spec, k)?)
}

/// `ω = (-1 - i√3)/2`, a primitive cube root of unity.
pub fn omega() -> Complex {
    Complex::new(-0.5, -(3f64.sqrt()) / 2.0)
}

/// Conjugation `ψ(D) = W D W*` with `W = V U*`, mapping the diagonal
/// `diag(1, ω, ω²)` onto `J_2(0)`; `W W* = 1` so `ψ` is unital.
pub fn omega_dilation() -> ComplexMatrix {
    let w = omega();
    let w2 = w * w;
    let one = Complex::new(1.0, 0.0);
    let u = ComplexMatrix::from_rows(&[vec![one, one, one], vec![w2, w, one], vec![w, w2, one]]).expect("finite");
    let s = 1.0 / 3f64.sqrt();
    let v = ComplexMatrix::from_real_rows(&[vec![s, 0.0, 0.0], vec![0.0, s, 0.0]]).expect("finite");
    &v * &u.adjoint()
}

/// The Jordan blocks of the ω-operator `1 ⊕ ω ⊕ ω² ⊕ J_2(0)`.
pub fn omega_blocks() -> Vec<ComplexMatrix> {
    let w = omega();
    vec![
        jordan_block(1, Complex::new(1.0, 0.0)).expect("valid"),
        jordan_block(1, w).expect("valid"),
        jordan_block(1, w * w).expect("valid"),
        jordan_block(2, Complex::new(0.0, 0.0)).expect("valid"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(pairs: &[(usize, f64)]) -> JordanSpec {
        JordanSpec::real(pairs).unwrap()
    }

    #[test]
    fn midpoint_plan() {
        let s = spec(&[(2, 2.0), (2, 1.0), (2, 0.0)]);
        let plan = compression_witness(&s, 1).unwrap().unwrap();
        assert_eq!(plan.terms, vec![PlanTerm { block: 0, weight: 0.5 }, PlanTerm { block: 2, weight: 0.5 }]);
        let img = apply_plan(&plan, &s, 1).unwrap();
        assert!((&img - &s.blocks()[1].matrix()).max_abs() <= 1e-12);
    }

    #[test]
    fn plans_from_the_larger_extremes() {
        let s = spec(&[(1, 1.0), (2, 0.5), (2, 0.0), (2, 2.0)]);
        for k in 0..2 {
            let plan = compression_witness(&s, k).unwrap().unwrap();
            let used: Vec<usize> = plan.terms.iter().map(|t| t.block).collect();
            assert_eq!(used, vec![3, 2], "block {k}");
            let img = apply_plan(&plan, &s, k).unwrap();
            assert!((&img - &s.blocks()[k].matrix()).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn extreme_eigenvalue_has_no_plan() {
        let s = spec(&[(1, 3.0), (2, 2.0)]);
        assert_eq!(compression_witness(&s, 0).unwrap(), None);
        assert_eq!(compression_witness(&s, 1).unwrap(), None);
        assert!(compression_witness(&s, 2).is_err());
    }

    #[test]
    fn single_extreme_truncation() {
        let s = spec(&[(3, 0.0), (2, 0.0)]);
        let plan = compression_witness(&s, 1).unwrap().unwrap();
        assert_eq!(plan.terms, vec![PlanTerm { block: 0, weight: 1.0 }]);
        assert_eq!(apply_plan(&plan, &s, 1).unwrap(), s.blocks()[0].matrix().truncate(2, 2));
    }

    #[test]
    fn planar_plan_for_complex_eigenvalues() {
        let blocks = vec![
            crate::jordan::JordanBlockSpec::new(2, Complex::new(1.0, 0.0), 1).unwrap(),
            crate::jordan::JordanBlockSpec::new(2, Complex::new(-1.0, 1.0), 1).unwrap(),
            crate::jordan::JordanBlockSpec::new(2, Complex::new(-1.0, -1.0), 1).unwrap(),
            crate::jordan::JordanBlockSpec::new(1, Complex::new(0.0, 0.0), 1).unwrap(),
        ];
        let s = JordanSpec::new(blocks).unwrap();
        let plan = compression_witness(&s, 3).unwrap().unwrap();
        assert_eq!(plan.terms.len(), 3);
        let img = apply_plan(&plan, &s, 3).unwrap();
        assert!((&img - &s.blocks()[3].matrix()).max_abs() <= 1e-12);
    }

    #[test]
    fn bad_plans_are_rejected() {
        let s = spec(&[(2, 2.0), (2, 1.0), (1, 0.0)]);
        let bad = CompressionPlan { target: 1, terms: vec![PlanTerm { block: 2, weight: 1.0 }] };
        assert!(matches!(apply_plan(&bad, &s, 1), Err(Error::PlanMismatch(_))));
        let bad = CompressionPlan { target: 1, terms: vec![PlanTerm { block: 0, weight: 0.7 }] };
        assert!(matches!(apply_plan(&bad, &s, 1), Err(Error::PlanMismatch(_))));
    }

    #[test]
    fn plan_choi_matrix_is_a_certificate() {
        let s = spec(&[(2, 2.0), (2, 1.0), (2, 0.0)]);
        let plan = compression_witness(&s, 1).unwrap().unwrap();
        let choi = plan_choi(&plan, &s, 1).unwrap();
        let check = block_program(&s, 1).unwrap().check(&choi);
        assert!(check.passes(1e-12), "{check:?}");
    }

    #[test]
    fn omega_dilation_maps_the_triangle_onto_the_jordan_block() {
        let w = omega();
        assert!((w * w * w - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let v = omega_dilation();
        let one = Complex::new(1.0, 0.0);
        let unit = &(&v * &ComplexMatrix::diagonal(&[one, one, one])) * &v.adjoint();
        assert!((&unit - &ComplexMatrix::identity(2)).max_abs() < 1e-15);
        let img = &(&v * &ComplexMatrix::diagonal(&[one, w, w * w])) * &v.adjoint();
        let j = jordan_block(2, Complex::new(0.0, 0.0)).unwrap();
        assert!((&img - &j).max_abs() < 1e-15, "{img:?}");
    }
}
