//! Cyclic Jacobi eigensolver for Hermitian matrices and one-sided Jacobi
//! singular values.

use super::{Complex, ComplexMatrix, HermitianMatrix, ZERO};
use crate::config::Tolerances;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored column by column.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    /// `V f(Λ) V*` for a spectral function `f`.
    pub fn recompose(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let w: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut s = ZERO;
            for k in 0..n {
                if w[k] != 0.0 {
                    s += v[(i, k)] * v[(j, k)].conj() * w[k];
                }
            }
            s
        })
    }
}

pub fn hermitian_eigen(h: &HermitianMatrix) -> HermitianEigen {
    let n = h.dim();
    let mut a = h.as_matrix().entries().to_vec();
    let mut v = ComplexMatrix::identity(n).entries().to_vec();
    jacobi_in_place(n, &mut a, &mut v, Tolerances::DEFAULT.jacobi_offdiag);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[r * n + order[c]]);
    HermitianEigen { values, vectors }
}

fn offdiag_sqr(n: usize, a: &[Complex]) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s
}

/// Diagonalizes the Hermitian `a` in place, accumulating rotations into `v`.
pub(crate) fn jacobi_in_place(n: usize, a: &mut [Complex], v: &mut [Complex], rel_tol: f64) {
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 || n == 1 {
        for i in 0..n {
            a[i * n + i].im = 0.0;
        }
        return;
    }
    let stop = (rel_tol * rel_tol) * total;
    for _ in 0..MAX_SWEEPS {
        if offdiag_sqr(n, a) <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(n, a, v, p, q);
            }
        }
    }
    for i in 0..n {
        a[i * n + i].im = 0.0;
    }
}

fn rotate(n: usize, a: &mut [Complex], v: &mut [Complex], p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    // Phase u with apq = |apq| u; the rotation acts on the real 2x2 problem
    // [[app, |apq|], [|apq|, aqq]] after conjugating row/column q by u.
    let u = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let ub = u.conj();

    // A <- A G with G = [[c, s], [-s ub, c ub]] on columns (p, q).
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c - akq * ub * s;
        a[k * n + q] = akp * s + akq * ub * c;
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c - vkq * ub * s;
        v[k * n + q] = vkp * s + vkq * ub * c;
    }
    // A <- G* A on rows (p, q).
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c - aqk * u * s;
        a[q * n + k] = apk * s + aqk * u * c;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
}

/// Singular values of `m` in descending order (one-sided Jacobi on columns).
///
/// Small singular values come out with absolute accuracy close to machine
/// precision times the norm, which is what nullspace counting needs.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    // Work on the orientation with fewer columns.
    let a = if m.cols() > m.rows() { m.adjoint() } else { m.clone() };
    let (rows, cols) = (a.rows(), a.cols());
    let mut col: Vec<Vec<Complex>> =
        (0..cols).map(|j| (0..rows).map(|i| a[(i, j)]).collect()).collect();

    let eps = 1e-15;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = col[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = col[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex = col[p].iter().zip(&col[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let u = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ub = u.conj();
                #[allow(clippy::needless_range_loop)]
                for i in 0..rows {
                    let xp = col[p][i];
                    let xq = col[q][i];
                    col[p][i] = xp * c - xq * ub * s;
                    col[q][i] = xp * s + xq * ub * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> =
        col.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}
