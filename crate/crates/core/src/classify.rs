//! Boundary representations of `S_J = span{1, J, J*}` and the C*-envelope.
//!
//! Each distinct block `π_k` of a normalized Jordan operator is either a
//! boundary representation or not; the envelope is the direct sum of
//! `M_{m_k}` over the boundary blocks. Closed forms cover selfadjoint and
//! real-eigenvalue operators; everything else goes block by block through
//! the matricial-range membership test.

use std::fmt;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::jordan::{
    is_irreducible_family, nilpotent_numerical_radius, normalize, InfiniteJordanSpec, InfiniteSizes,
    JordanBlockSpec, JordanSpec, NormalizedSpec,
};
use crate::matrix::Complex;
use crate::numrange::HullOfDisks;
use crate::oracle::{choi_membership, scalar_membership, witness_membership, MembershipVerdict, RangeMembership};

/// Imaginary parts up to this size count as real.
const REAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Selfadjoint,
    FullClassificationInterior,
    FullClassificationExtreme,
    ScalarNumrange,
    CompressionWitness,
    ChoiOracle,
    DimensionForcing,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Selfadjoint => "Selfadjoint",
            Rule::FullClassificationInterior => "FullClassificationInterior",
            Rule::FullClassificationExtreme => "FullClassificationExtreme",
            Rule::ScalarNumrange => "ScalarNumrange",
            Rule::CompressionWitness => "CompressionWitness",
            Rule::ChoiOracle => "ChoiOracle",
            Rule::DimensionForcing => "DimensionForcing",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Yes,
    No,
    Undecided,
}

impl Boundary {
    fn from_bool(b: bool) -> Self {
        if b {
            Boundary::Yes
        } else {
            Boundary::No
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryVerdict {
    /// Index into the normalized spec.
    pub block: usize,
    pub boundary: Boundary,
    pub rule: Rule,
    /// Signed distance from the deciding threshold, when the rule has one.
    pub margin: Option<f64>,
    /// Full membership record when the verdict came from the oracle module.
    pub membership: Option<MembershipVerdict>,
}

impl BoundaryVerdict {
    fn new(block: usize, boundary: Boundary, rule: Rule, margin: Option<f64>) -> Self {
        Self { block, boundary, rule, margin, membership: None }
    }

    fn from_membership(m: MembershipVerdict) -> Self {
        let boundary = match m.membership {
            RangeMembership::In => Boundary::No,
            RangeMembership::Out => Boundary::Yes,
            RangeMembership::Unknown => Boundary::Undecided,
        };
        Self { block: m.block, boundary, rule: m.rule, margin: m.margin, membership: Some(m) }
    }
}

/// A direct summand of the envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Summand {
    /// `M_m(C)`; `m = 1` is `C`.
    Matrix(usize),
    /// `C(T)`, continuous functions on the circle.
    ContinuousFunctions,
}

impl Summand {
    pub fn dimension(self) -> Option<usize> {
        match self {
            Summand::Matrix(m) => Some(m * m),
            Summand::ContinuousFunctions => None,
        }
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summand::Matrix(1) => f.write_str("C"),
            Summand::Matrix(m) => write!(f, "M{m}"),
            Summand::ContinuousFunctions => f.write_str("C(T)"),
        }
    }
}

/// Sorted largest first, so `M2 ⊕ C` reads `["M2", "C"]`.
pub fn sort_summands(mut s: Vec<Summand>) -> Vec<Summand> {
    s.sort_by(|a, b| b.cmp(a));
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeReport {
    pub spec: NormalizedSpec,
    /// One verdict per normalized block, in order.
    pub verdicts: Vec<BoundaryVerdict>,
}

impl EnvelopeReport {
    fn collect(&self, keep: impl Fn(Boundary) -> bool) -> Vec<Summand> {
        sort_summands(
            self.verdicts
                .iter()
                .filter(|v| keep(v.boundary))
                .map(|v| Summand::Matrix(self.spec.blocks()[v.block].size))
                .collect(),
        )
    }

    /// Summands of the definite boundary blocks: a lower bound for the
    /// envelope when some verdict is undecided.
    pub fn envelope(&self) -> Vec<Summand> {
        self.collect(|b| b == Boundary::Yes)
    }

    /// Boundary and undecided blocks together.
    pub fn envelope_upper(&self) -> Vec<Summand> {
        self.collect(|b| b != Boundary::No)
    }

    /// `None` while some verdict is undecided.
    pub fn reduced(&self) -> Option<bool> {
        if self.has_undecided() {
            None
        } else {
            Some(self.verdicts.iter().all(|v| v.boundary == Boundary::Yes))
        }
    }

    pub fn has_undecided(&self) -> bool {
        self.verdicts.iter().any(|v| v.boundary == Boundary::Undecided)
    }

    /// Normalized indices of the definite boundary blocks.
    pub fn boundary_blocks(&self) -> Vec<usize> {
        self.verdicts.iter().filter(|v| v.boundary == Boundary::Yes).map(|v| v.block).collect()
    }

    /// Verdict for entry `i` of the caller's original spec.
    pub fn verdict_for_input(&self, i: usize) -> Result<&BoundaryVerdict> {
        Ok(&self.verdicts[self.spec.block_of_input(i)?])
    }

    pub fn envelope_dimension(&self) -> usize {
        self.envelope().iter().filter_map(|s| s.dimension()).sum()
    }
}

fn real_eigenvalues(blocks: &[JordanBlockSpec]) -> Result<()> {
    match blocks.iter().find(|b| b.eigenvalue.im.abs() > REAL_TOL) {
        Some(b) => Err(Error::NonRealEigenvalue { re: b.eigenvalue.re, im: b.eigenvalue.im }),
        None => Ok(()),
    }
}

fn checked_normalize(spec: &JordanSpec) -> Result<NormalizedSpec> {
    let normalized = normalize(spec);
    let report = is_irreducible_family(&normalized);
    if !report.irreducible {
        return Err(Error::Reducible(report.reason));
    }
    Ok(normalized)
}

/// Dimension of `span{1, T, T*}` for `T = ⊕ blocks`: 0 for no blocks, 3 once
/// a block is not scalar, otherwise 1, 2 or 3 as the eigenvalues are a
/// point, collinear, or span the plane.
pub fn operator_system_dimension(blocks: &[JordanBlockSpec], eq_tol: f64) -> usize {
    let Some(first) = blocks.first() else {
        return 0;
    };
    if blocks.iter().any(|b| b.size > 1) {
        return 3;
    }
    let z0 = first.eigenvalue;
    let Some(far) = blocks.iter().map(|b| b.eigenvalue - z0).max_by(|a, b| a.norm().total_cmp(&b.norm())) else {
        return 1;
    };
    if far.norm() <= eq_tol {
        return 1;
    }
    let u = far / far.norm();
    let off_line = blocks.iter().any(|b| ((b.eigenvalue - z0) * u.conj()).im.abs() > eq_tol);
    if off_line {
        3
    } else {
        2
    }
}

/// Selfadjoint diagonal case: only the largest and smallest eigenvalues
/// are boundary. `None` when some block is not a real scalar.
pub fn classify_selfadjoint(spec: &JordanSpec) -> Option<EnvelopeReport> {
    let normalized = normalize(spec);
    let blocks = normalized.blocks();
    if blocks.iter().any(|b| b.size != 1 || b.eigenvalue.im.abs() > REAL_TOL) {
        return None;
    }
    // Canonical order is descending, so the ends are the extremes.
    let n = blocks.len();
    let verdicts = (0..n)
        .map(|k| BoundaryVerdict::new(k, Boundary::from_bool(k == 0 || k == n - 1), Rule::Selfadjoint, None))
        .collect();
    Some(EnvelopeReport { spec: normalized, verdicts })
}

fn real_verdict(blocks: &[JordanBlockSpec], k: usize, tol: &Tolerances) -> BoundaryVerdict {
    let n = blocks.len();
    if n == 1 {
        return BoundaryVerdict::new(k, Boundary::Yes, Rule::FullClassificationExtreme, None);
    }
    let lam = |j: usize| blocks[j].eigenvalue.re;
    let tied = |j: usize| (lam(j) - lam(k)).abs() <= tol.eigenvalue_merge;
    let mk = blocks[k].size;
    let tied_larger = (0..n).any(|j| j != k && tied(j) && blocks[j].size >= mk);
    let hi = (0..n).map(lam).fold(f64::NEG_INFINITY, f64::max);
    let lo = (0..n).map(lam).fold(f64::INFINITY, f64::min);
    let extreme = (lam(k) - hi).abs() <= tol.eigenvalue_merge || (lam(k) - lo).abs() <= tol.eigenvalue_merge;

    if extreme {
        if mk > 1 {
            return BoundaryVerdict::new(k, Boundary::from_bool(!tied_larger), Rule::FullClassificationExtreme, None);
        }
        // Strictly outside every other block's disk.
        let margin = (0..n)
            .filter(|&j| j != k)
            .map(|j| (lam(k) - lam(j)).abs() - nilpotent_numerical_radius(blocks[j].size))
            .fold(f64::INFINITY, f64::min);
        let boundary = Boundary::from_bool(margin > tol.threshold_equality);
        return BoundaryVerdict::new(k, boundary, Rule::FullClassificationExtreme, Some(margin));
    }
    if tied_larger {
        return BoundaryVerdict::new(k, Boundary::No, Rule::FullClassificationInterior, None);
    }
    let side_max = |above: bool| {
        (0..n)
            .filter(|&j| !tied(j) && (lam(j) > lam(k)) == above)
            .map(|j| blocks[j].size)
            .max()
            .unwrap_or(0)
    };
    let boundary = side_max(true) < mk || side_max(false) < mk;
    BoundaryVerdict::new(k, Boundary::from_bool(boundary), Rule::FullClassificationInterior, None)
}

/// Closed-form classification for real eigenvalues. With the canonical
/// order `λ_1 >= ⋯ >= λ_n`, an interior block is boundary iff all blocks on
/// one side are strictly smaller; an extreme block is boundary iff it is
/// not scalar, or it is scalar and lies outside every other block's disk.
/// Eigenvalue ties are read as: a block is absorbed by a tied block at
/// least as large.
pub fn classify_real(spec: &JordanSpec, tol: &Tolerances) -> Result<EnvelopeReport> {
    let normalized = normalize(spec);
    real_eigenvalues(normalized.blocks())?;
    let verdicts = (0..normalized.len()).map(|k| real_verdict(normalized.blocks(), k, tol)).collect();
    Ok(EnvelopeReport { spec: normalized, verdicts })
}

/// The six-case table for real spectra whose inner blocks are no larger
/// than both end blocks: only the two ends can be boundary. `None` when
/// the size hypothesis fails, eigenvalues tie, or there is one block.
pub fn classify_corollary(spec: &JordanSpec, tol: &Tolerances) -> Result<Option<EnvelopeReport>> {
    let normalized = normalize(spec);
    let blocks = normalized.blocks();
    real_eigenvalues(blocks)?;
    let n = blocks.len();
    if n < 2 || blocks.windows(2).any(|w| w[0].eigenvalue.re - w[1].eigenvalue.re <= tol.eigenvalue_merge) {
        return Ok(None);
    }
    let (m1, mn) = (blocks[0].size, blocks[n - 1].size);
    if blocks[1..n - 1].iter().any(|b| b.size > m1.min(mn)) {
        return Ok(None);
    }
    let gap = blocks[0].eigenvalue.re - blocks[n - 1].eigenvalue.re;
    // The scalar end survives only strictly outside the other end's disk.
    let scalar_end = |other: usize| {
        let margin = gap - nilpotent_numerical_radius(other);
        (margin > tol.threshold_equality, Some(margin))
    };
    let ((first, first_margin), (last, last_margin)) = match (m1, mn) {
        (1, 1) => ((true, None), (true, None)),
        (1, _) => (scalar_end(mn), (true, None)),
        (_, 1) => ((true, None), scalar_end(m1)),
        _ => ((true, None), (true, None)),
    };
    let verdicts = (0..n)
        .map(|k| match k {
            0 => BoundaryVerdict::new(k, Boundary::from_bool(first), Rule::FullClassificationExtreme, first_margin),
            _ if k == n - 1 => {
                BoundaryVerdict::new(k, Boundary::from_bool(last), Rule::FullClassificationExtreme, last_margin)
            }
            _ => BoundaryVerdict::new(k, Boundary::No, Rule::FullClassificationInterior, None),
        })
        .collect();
    Ok(Some(EnvelopeReport { spec: normalized, verdicts }))
}

/// For real eigenvalues the envelope is commutative exactly when every
/// block is scalar.
pub fn classify_abelian_test(spec: &JordanSpec) -> Result<bool> {
    real_eigenvalues(spec.blocks())?;
    Ok(spec.blocks().iter().all(|b| b.size == 1))
}

/// Block `ℓ` must be boundary when the blocks that could still carry the
/// envelope without it (everything except `ℓ` and the known non-boundary
/// blocks) span a smaller operator system than the whole operator.
fn dimension_forced(blocks: &[JordanBlockSpec], l: usize, excluded: &[bool], eq_tol: f64) -> Option<f64> {
    let full = operator_system_dimension(blocks, eq_tol);
    let rest: Vec<JordanBlockSpec> =
        blocks.iter().enumerate().filter(|&(j, _)| j != l && !excluded[j]).map(|(_, b)| *b).collect();
    let left = operator_system_dimension(&rest, eq_tol);
    (left < full).then_some((full - left) as f64)
}

/// Membership chain for one block: compression witness, scalar numerical
/// range, then the Choi oracle.
fn membership_verdict(spec: &JordanSpec, k: usize, tol: &Tolerances) -> Result<BoundaryVerdict> {
    if let Some(m) = witness_membership(spec, k)? {
        return Ok(BoundaryVerdict::from_membership(m));
    }
    if let Some(m) = scalar_membership(spec, k, tol)? {
        return Ok(BoundaryVerdict::from_membership(m));
    }
    Ok(BoundaryVerdict::from_membership(choi_membership(spec, k, tol)?))
}

fn dimension_post_pass(blocks: &[JordanBlockSpec], verdicts: &mut [BoundaryVerdict], tol: &Tolerances) {
    let excluded: Vec<bool> = verdicts.iter().map(|v| v.boundary == Boundary::No).collect();
    for v in verdicts.iter_mut().filter(|v| v.boundary == Boundary::Undecided) {
        if let Some(gap) = dimension_forced(blocks, v.block, &excluded, tol.threshold_equality) {
            *v = BoundaryVerdict { rule: Rule::DimensionForcing, boundary: Boundary::Yes, margin: Some(gap), ..v.clone() };
        }
    }
}

/// Block-by-block classification through matricial-range membership,
/// valid for any eigenvalues. Oracle `Unknown` becomes `Undecided`.
pub fn classify_general(spec: &JordanSpec, tol: &Tolerances) -> Result<EnvelopeReport> {
    let normalized = checked_normalize(spec)?;
    let nspec = normalized.spec().clone();
    let blocks = nspec.blocks();
    let n = blocks.len();
    if n == 1 {
        let v = BoundaryVerdict::new(0, Boundary::Yes, Rule::DimensionForcing, None);
        return Ok(EnvelopeReport { spec: normalized, verdicts: vec![v] });
    }
    let none = vec![false; n];
    // Blocks are independent; each oracle run gets its own thread and the
    // verdicts are collected in block order.
    let mut verdicts = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..n)
            .map(|k| {
                let nspec = &nspec;
                let none = &none;
                scope.spawn(move || match dimension_forced(nspec.blocks(), k, none, tol.threshold_equality) {
                    Some(gap) => Ok(BoundaryVerdict::new(k, Boundary::Yes, Rule::DimensionForcing, Some(gap))),
                    None => membership_verdict(nspec, k, tol),
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("block classification panicked")).collect::<Result<Vec<_>>>()
    })?;
    dimension_post_pass(blocks, &mut verdicts, tol);
    Ok(EnvelopeReport { spec: normalized, verdicts })
}

/// Full pipeline. Selfadjoint and real-eigenvalue operators use the closed
/// forms, except that an interior block declared boundary while some other
/// block is at least as large is re-checked by membership: on such blocks
/// the interior rule is not reliable (a size-two block between a scalar
/// and a size-three block can be a compression of the two). Complex
/// spectra go through [`classify_general`].
pub fn classify(spec: &JordanSpec, tol: &Tolerances) -> Result<EnvelopeReport> {
    let normalized = checked_normalize(spec)?;
    if normalized.len() == 1 {
        return classify_general(spec, tol);
    }
    if let Some(report) = classify_selfadjoint(spec) {
        return Ok(report);
    }
    if !normalized.spec().has_real_eigenvalues() {
        return classify_general(spec, tol);
    }
    let mut report = classify_real(spec, tol)?;
    if let Some(table) = classify_corollary(spec, tol)? {
        debug_assert_eq!(table.boundary_blocks(), report.boundary_blocks(), "table and full classification disagree");
    }
    let nspec = normalized.spec().clone();
    let blocks = nspec.blocks();
    let mut rechecked = false;
    for k in 0..blocks.len() {
        let v = &report.verdicts[k];
        let largest_elsewhere = blocks.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, b)| b.size).max();
        let unreliable = v.rule == Rule::FullClassificationInterior
            && v.boundary == Boundary::Yes
            && largest_elsewhere.is_some_and(|m| m >= blocks[k].size);
        if unreliable {
            report.verdicts[k] = membership_verdict(&nspec, k, tol)?;
            rechecked = true;
        }
    }
    if rechecked {
        dimension_post_pass(blocks, &mut report.verdicts, tol);
    }
    Ok(report)
}

/// Infinite direct sums of blocks with one eigenvalue: `C(T)` when the
/// sizes are unbounded, `M_m` for the largest size `m` otherwise.
pub fn classify_infinite_same_eigenvalue(spec: &InfiniteJordanSpec) -> Summand {
    match spec.sizes {
        InfiniteSizes::Bounded { max } => Summand::Matrix(max),
        InfiniteSizes::Unbounded => Summand::ContinuousFunctions,
    }
}

/// Eigenvalues of scalar blocks that are extreme points of the hull of all
/// block numerical ranges: the only candidates for one-dimensional boundary
/// representations.
pub fn scalar_boundary_candidates(spec: &JordanSpec, tol: &Tolerances) -> Vec<Complex> {
    let normalized = normalize(spec);
    let hull = HullOfDisks::of_spec(normalized.spec());
    hull.extreme_point_disks(tol.threshold_equality)
        .into_iter()
        .map(|k| normalized.blocks()[k].eigenvalue)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::omega;

    const TOL: Tolerances = Tolerances::DEFAULT;

    fn real(pairs: &[(usize, f64)]) -> JordanSpec {
        JordanSpec::real(pairs).unwrap()
    }

    fn names(s: &[Summand]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    fn omega_spec() -> JordanSpec {
        let w = omega();
        JordanSpec::new(vec![
            JordanBlockSpec::new(1, Complex::new(1.0, 0.0), 1).unwrap(),
            JordanBlockSpec::new(1, w, 1).unwrap(),
            JordanBlockSpec::new(1, w * w, 1).unwrap(),
            JordanBlockSpec::new(2, Complex::new(0.0, 0.0), 1).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn summand_names_and_order() {
        let s = sort_summands(vec![Summand::Matrix(1), Summand::ContinuousFunctions, Summand::Matrix(3)]);
        assert_eq!(names(&s), ["C(T)", "M3", "C"]);
    }

    #[test]
    fn operator_system_dimensions() {
        let d = |s: &JordanSpec| operator_system_dimension(s.blocks(), 1e-12);
        assert_eq!(d(&real(&[(1, 2.0)])), 1);
        assert_eq!(d(&real(&[(1, 2.0), (1, 0.0), (1, 1.0)])), 2);
        assert_eq!(d(&real(&[(2, 2.0)])), 3);
        assert_eq!(d(&omega_spec().without(3).unwrap()), 3);
        assert_eq!(operator_system_dimension(&[], 1e-12), 0);
    }

    #[test]
    fn selfadjoint_keeps_the_ends() {
        let r = classify_selfadjoint(&real(&[(1, 0.0), (1, 1.0), (1, 2.0)])).unwrap();
        assert_eq!(names(&r.envelope()), ["C", "C"]);
        let ends: Vec<f64> = r.boundary_blocks().iter().map(|&k| r.spec.blocks()[k].eigenvalue.re).collect();
        assert_eq!(ends, [2.0, 0.0]);
        assert_eq!(names(&classify_selfadjoint(&real(&[(1, 5.0)])).unwrap().envelope()), ["C"]);
        assert!(classify_selfadjoint(&real(&[(2, 0.0)])).is_none());
    }

    #[test]
    fn example_operator_threshold() {
        for (lambda, expected) in [(0.3, vec!["M2"]), (0.5, vec!["M2"]), (0.8, vec!["M2", "C"]), (-0.8, vec!["M2", "C"])] {
            let s = real(&[(2, 0.0), (1, lambda)]);
            assert_eq!(names(&classify_real(&s, &TOL).unwrap().envelope()), expected, "λ = {lambda}");
            assert_eq!(names(&classify_general(&s, &TOL).unwrap().envelope()), expected, "λ = {lambda}");
        }
    }

    #[test]
    fn golden_real_examples() {
        let r = classify_real(&real(&[(1, 0.0), (2, 1.0), (1, 2.0)]), &TOL).unwrap();
        assert_eq!(r.reduced(), Some(true));
        let r = classify_real(&real(&[(1, 3.0), (2, 2.0), (2, 1.0), (1, 0.0)]), &TOL).unwrap();
        assert_eq!(r.reduced(), Some(true));
        let r = classify_real(&real(&[(1, 3.0), (2, 2.0), (2, 0.5), (1, 0.0)]), &TOL).unwrap();
        assert_eq!(r.reduced(), Some(false));
        let non: Vec<f64> = r
            .verdicts
            .iter()
            .filter(|v| v.boundary == Boundary::No)
            .map(|v| r.spec.blocks()[v.block].eigenvalue.re)
            .collect();
        assert_eq!(non, [0.0]);
    }

    #[test]
    fn corollary_cases() {
        let c = |pairs: &[(usize, f64)]| names(&classify_corollary(&real(pairs), &TOL).unwrap().unwrap().envelope());
        assert_eq!(c(&[(2, 1.0), (1, 0.5), (3, 0.0)]), ["M3", "M2"]);
        assert_eq!(c(&[(1, 1.0), (1, 0.5), (1, 0.0)]), ["C", "C"]);
        assert_eq!(c(&[(1, 0.5), (3, 0.0)]), ["M3"]);
        assert_eq!(c(&[(1, 0.8), (3, 0.0)]), ["M3", "C"]);
        assert_eq!(c(&[(2, 0.5), (1, 0.0)]), ["M2"]);
        assert_eq!(c(&[(2, 0.6), (1, 0.0)]), ["M2", "C"]);
        assert!(classify_corollary(&real(&[(1, 1.0), (3, 0.5), (1, 0.0)]), &TOL).unwrap().is_none());
    }

    #[test]
    fn abelian_test_needs_real_spectrum() {
        assert!(classify_abelian_test(&real(&[(1, 0.0), (1, 1.0)])).unwrap());
        assert!(!classify_abelian_test(&real(&[(2, 0.0), (1, 1.0)])).unwrap());
        assert!(matches!(classify_abelian_test(&omega_spec()), Err(Error::NonRealEigenvalue { .. })));
    }

    #[test]
    fn omega_envelope_is_commutative() {
        let r = classify_general(&omega_spec(), &TOL).unwrap();
        assert_eq!(names(&r.envelope()), ["C", "C", "C"]);
        let jblock = r.verdicts.iter().find(|v| r.spec.blocks()[v.block].size == 2).unwrap();
        assert_eq!((jblock.boundary, jblock.rule), (Boundary::No, Rule::ChoiOracle));
    }

    #[test]
    fn nested_sizes_at_one_eigenvalue() {
        let s = real(&[(3, 0.0), (2, 0.0), (1, 0.0)]);
        assert_eq!(names(&classify(&s, &TOL).unwrap().envelope()), ["M3"]);
        assert_eq!(names(&classify_general(&s, &TOL).unwrap().envelope()), ["M3"]);
    }

    #[test]
    fn interior_rule_is_rechecked_against_larger_blocks() {
        // J_2(1/2) is a compression of J_1(3) ⊕ J_3(0).
        let s = real(&[(1, 3.0), (2, 0.5), (3, 0.0)]);
        let lit = classify_real(&s, &TOL).unwrap();
        assert_eq!(lit.verdicts[1].boundary, Boundary::Yes);
        let r = classify(&s, &TOL).unwrap();
        assert_eq!((r.verdicts[1].boundary, r.verdicts[1].rule), (Boundary::No, Rule::ChoiOracle));
    }

    #[test]
    fn dimension_forcing_with_one_scalar() {
        // Removing the scalar leaves a single scalar: too small.
        let s = real(&[(1, 0.0), (1, 1.0)]);
        let r = classify_general(&s, &TOL).unwrap();
        assert!(r.verdicts.iter().all(|v| v.rule == Rule::DimensionForcing && v.boundary == Boundary::Yes));
    }

    #[test]
    fn infinite_sums() {
        let l = Complex::new(0.0, 0.0);
        let bounded = InfiniteJordanSpec { eigenvalue: l, sizes: InfiniteSizes::Bounded { max: 4 } };
        assert_eq!(classify_infinite_same_eigenvalue(&bounded).to_string(), "M4");
        let one = InfiniteJordanSpec { eigenvalue: l, sizes: InfiniteSizes::Bounded { max: 1 } };
        assert_eq!(classify_infinite_same_eigenvalue(&one).to_string(), "C");
        let unbounded = InfiniteJordanSpec { eigenvalue: l, sizes: InfiniteSizes::Unbounded };
        assert_eq!(classify_infinite_same_eigenvalue(&unbounded).to_string(), "C(T)");
    }

    #[test]
    fn scalar_candidates() {
        let c = |pairs: &[(usize, f64)]| -> Vec<f64> {
            scalar_boundary_candidates(&real(pairs), &TOL).iter().map(|z| z.re).collect()
        };
        assert_eq!(c(&[(1, 0.0), (1, 1.0), (1, 2.0)]), [2.0, 0.0]);
        assert_eq!(c(&[(2, 0.0), (1, 0.8)]), [0.8]);
        assert!(c(&[(2, 0.0), (1, 0.3)]).is_empty());
    }

    #[test]
    fn verdicts_map_back_to_input_order() {
        let s = real(&[(1, 0.0), (2, 1.0), (1, 3.0), (1, 0.0)]);
        let r = classify(&s, &TOL).unwrap();
        assert_eq!(r.verdict_for_input(0).unwrap(), r.verdict_for_input(3).unwrap());
        assert_eq!(r.spec.blocks()[r.verdict_for_input(2).unwrap().block].eigenvalue.re, 3.0);
    }
}
