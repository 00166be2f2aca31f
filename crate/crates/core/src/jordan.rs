//! Jordan operator specifications: validation, normalization, realization
//! as explicit matrices and the irreducibility check for block families.

use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::matrix::{jordan_block, singular_values, Complex, ComplexMatrix};

/// One summand `J_m(λ) ⊗ 1_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanBlockSpec {
    pub size: usize,
    pub eigenvalue: Complex,
    pub multiplicity: usize,
}

impl JordanBlockSpec {
    pub fn new(size: usize, eigenvalue: Complex, multiplicity: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::ZeroBlockSize);
        }
        if multiplicity == 0 {
            return Err(Error::ZeroMultiplicity);
        }
        if !(eigenvalue.re.is_finite() && eigenvalue.im.is_finite()) {
            return Err(Error::NonFinite("eigenvalue"));
        }
        Ok(Self { size, eigenvalue, multiplicity })
    }

    /// A single copy of `J_m(λ)` with real eigenvalue.
    pub fn real(size: usize, lambda: f64) -> Result<Self> {
        Self::new(size, Complex::new(lambda, 0.0), 1)
    }

    /// Numerical radius of `J_m(0)`, i.e. `cos(π/(m+1))`; exactly 0 for `m = 1`.
    pub fn numerical_radius(&self) -> f64 {
        nilpotent_numerical_radius(self.size)
    }

    /// The basic block `J_m(λ)` without multiplicity.
    pub fn matrix(&self) -> ComplexMatrix {
        jordan_block(self.size, self.eigenvalue).expect("validated block")
    }

    fn same_pair(&self, other: &Self, tol: f64) -> bool {
        self.size == other.size && (self.eigenvalue - other.eigenvalue).norm() <= tol
    }
}

pub fn nilpotent_numerical_radius(m: usize) -> f64 {
    if m <= 1 {
        0.0
    } else {
        (PI / (m as f64 + 1.0)).cos()
    }
}

/// Non-empty ordered list of Jordan summands, as entered by the caller.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanSpec {
    blocks: Vec<JordanBlockSpec>,
}

impl JordanSpec {
    pub fn new(blocks: Vec<JordanBlockSpec>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::EmptySpec);
        }
        Ok(Self { blocks })
    }

    /// Convenience constructor from `(size, real eigenvalue)` pairs.
    pub fn real(pairs: &[(usize, f64)]) -> Result<Self> {
        pairs.iter().map(|&(m, l)| JordanBlockSpec::real(m, l)).collect::<Result<Vec<_>>>().and_then(Self::new)
    }

    pub fn blocks(&self) -> &[JordanBlockSpec] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Total dimension `Σ m_k d_k`.
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.size * b.multiplicity).sum()
    }

    pub fn has_real_eigenvalues(&self) -> bool {
        self.blocks.iter().all(|b| b.eigenvalue.im.abs() <= Tolerances::DEFAULT.threshold_equality)
    }

    /// Applies `f` to every eigenvalue, keeping sizes and multiplicities.
    pub fn map_eigenvalues(&self, f: impl Fn(Complex) -> Complex) -> Result<Self> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| JordanBlockSpec::new(b.size, f(b.eigenvalue), b.multiplicity))
            .collect::<Result<Vec<_>>>()?;
        Self::new(blocks)
    }

    /// The specification with block `index` removed.
    pub fn without(&self, index: usize) -> Result<Self> {
        if index >= self.len() {
            return Err(Error::BlockIndex { index, len: self.len() });
        }
        let mut blocks = self.blocks.clone();
        blocks.remove(index);
        Self::new(blocks)
    }

    /// Same blocks with every multiplicity set to one.
    pub fn multiplicity_free(&self) -> Self {
        let blocks = self.blocks.iter().map(|b| JordanBlockSpec { multiplicity: 1, ..*b }).collect();
        Self { blocks }
    }
}

/// A normalized specification: duplicate `(m, λ)` pairs merged, blocks in
/// canonical order, plus the record of which input entries ended up where.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedSpec {
    spec: JordanSpec,
    origins: Vec<Vec<usize>>,
    input_len: usize,
}

impl NormalizedSpec {
    pub fn spec(&self) -> &JordanSpec {
        &self.spec
    }

    pub fn blocks(&self) -> &[JordanBlockSpec] {
        self.spec.blocks()
    }

    pub fn len(&self) -> usize {
        self.spec.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spec.is_empty()
    }

    /// Input indices merged into normalized block `k`.
    pub fn origins(&self, k: usize) -> &[usize] {
        &self.origins[k]
    }

    pub fn input_len(&self) -> usize {
        self.input_len
    }

    /// Normalized block holding input entry `i`.
    pub fn block_of_input(&self, i: usize) -> Result<usize> {
        self.origins
            .iter()
            .position(|o| o.contains(&i))
            .ok_or(Error::BlockIndex { index: i, len: self.input_len })
    }
}

/// Canonical order: real part descending, then imaginary part descending,
/// then size descending.
fn canonical_order(a: &JordanBlockSpec, b: &JordanBlockSpec) -> Ordering {
    b.eigenvalue
        .re
        .total_cmp(&a.eigenvalue.re)
        .then_with(|| b.eigenvalue.im.total_cmp(&a.eigenvalue.im))
        .then_with(|| b.size.cmp(&a.size))
}

pub fn normalize(spec: &JordanSpec) -> NormalizedSpec {
    let tol = Tolerances::DEFAULT.eigenvalue_merge;
    let mut merged: Vec<(JordanBlockSpec, Vec<usize>)> = Vec::new();
    for (i, b) in spec.blocks().iter().enumerate() {
        match merged.iter_mut().find(|(m, _)| m.same_pair(b, tol)) {
            Some((m, origin)) => {
                m.multiplicity += b.multiplicity;
                origin.push(i);
            }
            None => merged.push((*b, vec![i])),
        }
    }
    merged.sort_by(|(a, _), (b, _)| canonical_order(a, b));
    let (blocks, origins): (Vec<_>, Vec<_>) = merged.into_iter().unzip();
    NormalizedSpec { spec: JordanSpec { blocks }, origins, input_len: spec.len() }
}

/// Block-diagonal matrix `⊕ J_{m_k}(λ_k) ⊗ 1_{d_k}` in the given block order.
pub fn realize(spec: &JordanSpec) -> Result<ComplexMatrix> {
    realize_with_limit(spec, Tolerances::DEFAULT.max_dimension)
}

pub fn realize_with_limit(spec: &JordanSpec, limit: usize) -> Result<ComplexMatrix> {
    let dim = spec.dimension();
    if dim > limit {
        return Err(Error::DimensionGuard { dim, limit });
    }
    let mut summands = Vec::new();
    for b in spec.blocks() {
        let j = b.matrix();
        for _ in 0..b.multiplicity {
            summands.push(j.clone());
        }
    }
    Ok(ComplexMatrix::direct_sum(&summands))
}

/// Infinite direct sum of Jordan blocks sharing one eigenvalue; only used
/// symbolically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfiniteJordanSpec {
    pub eigenvalue: Complex,
    pub sizes: InfiniteSizes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfiniteSizes {
    /// Block sizes bounded, with the given maximum.
    Bounded { max: usize },
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrreducibilityReport {
    pub irreducible: bool,
    /// Some block carried a multiplicity above one and was reduced.
    pub reduced_multiplicity: bool,
    pub block_count: usize,
    /// Numerically computed dimension of the commutant of `{J, J*}` for the
    /// multiplicity-free operator; `None` when the operator was too large
    /// for the cross-check.
    pub commutant_dimension: Option<usize>,
    pub reason: String,
}

/// Largest multiplicity-free dimension for which the commutant is computed.
const COMMUTANT_CHECK_LIMIT: usize = 16;

pub fn is_irreducible_family(spec: &NormalizedSpec) -> IrreducibilityReport {
    let tol = Tolerances::DEFAULT;
    let blocks = spec.blocks();
    let n = blocks.len();
    let distinct = (0..n).all(|i| (i + 1..n).all(|j| !blocks[i].same_pair(&blocks[j], tol.eigenvalue_merge)));
    let reduced_multiplicity = blocks.iter().any(|b| b.multiplicity > 1);

    let free = spec.spec().multiplicity_free();
    let commutant_dimension = (free.dimension() <= COMMUTANT_CHECK_LIMIT)
        .then(|| commutant_dimension(&realize(&free).expect("small operator"), tol.commutant_null));

    let (irreducible, reason) = match (distinct, commutant_dimension) {
        (false, _) => (false, "repeated (size, eigenvalue) pair".to_string()),
        (true, Some(d)) if d != n => {
            (false, format!("commutant has dimension {d} but there are {n} blocks"))
        }
        (true, _) if reduced_multiplicity => {
            (true, "irreducible after multiplicity reduction".to_string())
        }
        (true, _) => (true, "pairwise distinct blocks".to_string()),
    };
    IrreducibilityReport { irreducible, reduced_multiplicity, block_count: n, commutant_dimension, reason }
}

/// Dimension of `{X : XT = TX, XT* = T*X}`, counted as the number of
/// singular values of the stacked commutator map below `null_tol`
/// (relative to the largest singular value).
pub fn commutant_dimension(t: &ComplexMatrix, null_tol: f64) -> usize {
    let n = t.rows();
    let ta = t.adjoint();
    let mut rows = Vec::with_capacity(2 * n * n * n * n);
    for op in [t, &ta] {
        for i in 0..n {
            for j in 0..n {
                // (XT - TX)_{ij} = Σ_b X_{ib} T_{bj} - Σ_a T_{ia} X_{aj}
                for a in 0..n {
                    for b in 0..n {
                        let mut c = Complex::new(0.0, 0.0);
                        if a == i {
                            c += op[(b, j)];
                        }
                        if b == j {
                            c -= op[(i, a)];
                        }
                        rows.push(c);
                    }
                }
            }
        }
    }
    let m = ComplexMatrix::from_row_major(2 * n * n, n * n, rows).expect("finite entries");
    let sv = singular_values(&m);
    let scale = sv.first().copied().unwrap_or(0.0).max(1.0);
    sv.iter().filter(|&&s| s < null_tol * scale).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec3(entries: &[(usize, f64, usize)]) -> JordanSpec {
        JordanSpec::new(
            entries
                .iter()
                .map(|&(m, l, d)| JordanBlockSpec::new(m, Complex::new(l, 0.0), d).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_invalid_blocks() {
        assert_eq!(JordanSpec::new(vec![]), Err(Error::EmptySpec));
        assert_eq!(JordanBlockSpec::real(0, 1.0), Err(Error::ZeroBlockSize));
        assert_eq!(JordanBlockSpec::new(1, Complex::new(0.0, 0.0), 0), Err(Error::ZeroMultiplicity));
    }

    #[test]
    fn duplicates_merge_into_multiplicity() {
        let n = normalize(&spec3(&[(2, 0.0, 1), (2, 0.0, 1)]));
        assert_eq!(n.blocks(), &[JordanBlockSpec::new(2, Complex::new(0.0, 0.0), 2).unwrap()]);
        assert_eq!(n.origins(0), &[0, 1]);
    }

    #[test]
    fn near_equal_eigenvalues_merge_within_tolerance() {
        let n = normalize(&spec3(&[(2, 1.0, 1), (2, 1.0 + 1e-11, 3)]));
        assert_eq!(n.len(), 1);
        assert_eq!(n.blocks()[0].multiplicity, 4);
        let n = normalize(&spec3(&[(2, 1.0, 1), (2, 1.0 + 1e-6, 1)]));
        assert_eq!(n.len(), 2);
    }

    #[test]
    fn sorts_by_descending_real_part() {
        let n = normalize(&spec3(&[(1, 0.0, 1), (2, 1.0, 1), (1, 3.0, 1)]));
        let ls: Vec<f64> = n.blocks().iter().map(|b| b.eigenvalue.re).collect();
        assert_eq!(ls, vec![3.0, 1.0, 0.0]);
        assert_eq!(n.block_of_input(0).unwrap(), 2);
        assert_eq!(n.block_of_input(2).unwrap(), 0);
    }

    #[test]
    fn normalize_is_idempotent() {
        let n = normalize(&spec3(&[(1, 0.0, 1), (2, 1.0, 2), (2, 1.0, 1), (3, -1.0, 1)]));
        let again = normalize(n.spec());
        assert_eq!(again.blocks(), n.blocks());
    }

    #[test]
    fn realize_example_operator() {
        let lambda = Complex::new(0.3, -0.2);
        let spec = JordanSpec::new(vec![
            JordanBlockSpec::new(2, Complex::new(0.0, 0.0), 1).unwrap(),
            JordanBlockSpec::new(1, lambda, 1).unwrap(),
        ])
        .unwrap();
        let t = realize(&spec).unwrap();
        let mut want = ComplexMatrix::zeros(3, 3);
        want.set(0, 1, Complex::new(1.0, 0.0));
        want.set(2, 2, lambda);
        assert_eq!(t, want);
    }

    #[test]
    fn realize_expands_multiplicity_and_guards_dimension() {
        let t = realize(&spec3(&[(2, 1.0, 3)])).unwrap();
        assert_eq!(t.rows(), 6);
        assert_eq!(t[(2, 3)], Complex::new(1.0, 0.0));
        assert_eq!(t[(1, 2)], Complex::new(0.0, 0.0));
        let big = spec3(&[(100, 0.0, 6)]);
        assert_eq!(realize(&big), Err(Error::DimensionGuard { dim: 600, limit: 512 }));
    }

    #[test]
    fn example_families_are_irreducible() {
        let r = is_irreducible_family(&normalize(&spec3(&[(2, 0.0, 1), (1, 0.7, 1)])));
        assert!(r.irreducible);
        assert_eq!(r.commutant_dimension, Some(2));

        let r = is_irreducible_family(&normalize(&spec3(&[(2, 0.0, 1), (2, 0.0, 1)])));
        assert!(r.irreducible && r.reduced_multiplicity);
        assert_eq!(r.block_count, 1);
        assert_eq!(r.reason, "irreducible after multiplicity reduction");
    }

    #[test]
    fn commutant_of_repeated_block_is_matrix_algebra() {
        // J ⊕ J has commutant M_2 ⊗ 1, dimension 4.
        let j = jordan_block(2, Complex::new(1.0, 0.0)).unwrap();
        let t = ComplexMatrix::direct_sum(&[j.clone(), j]);
        assert_eq!(commutant_dimension(&t, 1e-8), 4);
    }
}
