use super::{hermitian_eigen, Complex, ComplexMatrix};
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// A square matrix equal to its conjugate transpose.
///
/// Inputs within the symmetry tolerance are accepted and symmetrized, so the
/// stored entries are exactly Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite("Hermitian matrix"));
        }
        let n = m.rows();
        let mut deviation: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                deviation = deviation.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        let scale = m.max_abs().max(1.0);
        if deviation > Tolerances::DEFAULT.hermitian * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrized(&m))
    }

    /// `(A + A*) / 2`.
    pub fn real_part(m: &ComplexMatrix) -> Self {
        assert!(m.is_square(), "real part of a non-square matrix");
        Self::symmetrized(m)
    }

    /// `(A - A*) / 2i`.
    pub fn imaginary_part(m: &ComplexMatrix) -> Self {
        Self::real_part(&m.scale(Complex::new(0.0, -1.0)))
    }

    fn symmetrized(m: &ComplexMatrix) -> Self {
        let n = m.rows();
        let inner = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(m[(i, i)].re, 0.0)
            } else {
                (m[(i, j)] + m[(j, i)].conj()) * 0.5
            }
        });
        Self { inner }
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.inner
    }

    /// Real-linear combination `a H + b K`, which stays Hermitian.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let m = &self.inner.scale_real(a) + &other.inner.scale_real(b);
        Self { inner: m }
    }

    /// Frobenius inner product `Re tr(H K)`.
    pub fn inner_product(&self, other: &Self) -> f64 {
        self.inner
            .entries()
            .iter()
            .zip(other.inner.entries())
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }
}

/// Smallest eigenvalue; `h >= 0` exactly when this is non-negative.
pub fn min_eigenvalue(h: &HermitianMatrix) -> f64 {
    hermitian_eigen(h).min()
}

/// Largest singular value, computed as `sqrt(λ_max(A* A))`.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    let gram = HermitianMatrix::real_part(&(&a.adjoint() * a));
    hermitian_eigen(&gram).max().max(0.0).sqrt()
}

/// Nearest positive semidefinite matrix in Frobenius norm (eigenvalue clipping).
pub fn psd_project(h: &HermitianMatrix) -> HermitianMatrix {
    let e = hermitian_eigen(h);
    if e.min() >= 0.0 {
        return h.clone();
    }
    HermitianMatrix::symmetrized(&e.recompose(|x| x.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{jordan_block, ONE, ZERO};

    fn c(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    fn pencil(alpha: f64, beta: Complex, k: usize) -> HermitianMatrix {
        let j = jordan_block(k, ZERO).unwrap();
        let m = &(&ComplexMatrix::identity(k).scale_real(alpha) + &j.scale(beta))
            + &j.adjoint().scale(beta.conj());
        HermitianMatrix::new(m).unwrap()
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let j = jordan_block(2, ZERO).unwrap();
        assert!(matches!(HermitianMatrix::new(j), Err(Error::NotHermitian { .. })));
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(HermitianMatrix::new(r), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn admits_and_symmetrizes_tiny_asymmetry() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0), Complex::new(0.5, 1e-14)], vec![c(0.5), c(2.0)]])
            .unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        let a = h.as_matrix();
        assert_eq!(a[(0, 1)], a[(1, 0)].conj());
    }

    #[test]
    fn operator_norm_examples() {
        assert!((operator_norm(&ComplexMatrix::identity(3)) - 1.0).abs() < 1e-15);
        assert!((operator_norm(&jordan_block(2, ZERO).unwrap()) - 1.0).abs() < 1e-15);
        let n = operator_norm(&jordan_block(2, c(2.0)).unwrap());
        let exact = ((9.0 + 17f64.sqrt()) / 2.0).sqrt();
        assert!((n - exact).abs() < 1e-9 * exact);
        assert!(n >= 5f64.sqrt() && n <= 3.0);
    }

    #[test]
    fn psd_project_examples() {
        let psd = pencil(2.0, c(0.5), 3);
        assert!((&psd_project(&psd).into_matrix() - psd.as_matrix()).max_abs() < 1e-10);

        let d = HermitianMatrix::new(ComplexMatrix::diagonal(&[ONE, c(-1.0)])).unwrap();
        let p = psd_project(&d).into_matrix();
        assert!((&p - &ComplexMatrix::diagonal(&[ONE, ZERO])).max_abs() < 1e-15);

        // Re J_2(0) = [[0,1/2],[1/2,0]]: keep the +1/2 eigenvector (1,1)/sqrt 2.
        let h = HermitianMatrix::real_part(&jordan_block(2, ZERO).unwrap());
        let p = psd_project(&h).into_matrix();
        let want = ComplexMatrix::from_real_rows(&[vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        assert!((&p - &want).max_abs() < 1e-15);
    }

    #[test]
    fn min_eigenvalue_examples() {
        // k = 2, alpha = 1: threshold |beta| = (1/2) sec(pi/3) = 1 is attained.
        assert!(min_eigenvalue(&pencil(1.0, c(1.0), 2)).abs() < 1e-15);
        assert_eq!(min_eigenvalue(&pencil(1.0, ZERO, 4)), 1.0);
        // Tridiagonal Toeplitz: eigenvalues 1 + 1.8 cos(j pi / 4).
        let got = min_eigenvalue(&pencil(1.0, c(0.9), 3));
        let want = 1.0 - 1.8 * (std::f64::consts::PI / 4.0).cos();
        assert!(got < 0.0);
        assert!((got - want).abs() < 1e-14);
    }
}
