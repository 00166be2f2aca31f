//! The linear constraints of a Choi program, `<H_i, C> = b_i`, on
//! block-diagonal Hermitian matrices with the Frobenius inner product
//! `<X, Y> = Re tr(X Y)`.

use crate::matrix::{hermitian_eigen, Complex, ComplexMatrix, HermitianMatrix};

use super::choi::ChoiProgram;

pub(super) const ZERO: Complex = Complex::new(0.0, 0.0);

/// Relative cut-off for pseudo-inverses of small symmetric systems.
const PINV_CUTOFF: f64 = 1e-11;

/// Hermitian block-diagonal matrix, one dense row-major block per summand.
pub(super) type Blocks = Vec<Vec<Complex>>;

pub(super) fn sub(a: &Blocks, b: &Blocks) -> Blocks {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - v).collect()).collect()
}

pub(super) fn add(a: &Blocks, b: &Blocks) -> Blocks {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u + v).collect()).collect()
}

pub(super) fn norm(a: &Blocks) -> f64 {
    a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(super) fn vnorm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(super) fn block_matrix(d: usize, b: &[Complex]) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |r, c| b[r * d + c])
}

pub(super) fn identity_blocks(dims: &[usize], scale: f64) -> Blocks {
    dims.iter()
        .map(|&d| {
            let mut b = vec![ZERO; d * d];
            for i in 0..d {
                b[i * d + i] = Complex::new(scale, 0.0);
            }
            b
        })
        .collect()
}

/// `Re Σ w · X[block][index]`.
#[derive(Debug, Clone)]
struct Functional {
    terms: Vec<(usize, usize, Complex)>,
}

pub(super) struct Affine {
    pub(super) dims: Vec<usize>,
    /// Target dimension `k`; every feasible point has trace `k`.
    pub(super) k: usize,
    rows: Vec<Functional>,
    pub(super) b: Vec<f64>,
    gram: Vec<f64>,
    gram_pinv: Vec<f64>,
}

impl Affine {
    /// Constraints `Φ(1) = 1_k` and `Φ(S) = T`. Hermitian blocks make `Φ`
    /// Hermitian-preserving, so `Φ(1)` only needs its upper triangle and
    /// `Φ(S*) = T*` holds automatically.
    pub(super) fn new(p: &ChoiProgram) -> Self {
        let k = p.target_dim();
        let dims = p.block_dims();
        let source = p.source_blocks();
        let target = p.target();
        let mut rows = Vec::new();
        let mut b = Vec::new();
        let minus_i = Complex::new(0.0, -1.0);
        let rotate = |f: &Functional| Functional { terms: f.terms.iter().map(|&(j, i, w)| (j, i, w * minus_i)).collect() };
        for pi in 0..k {
            for qi in 0..k {
                if pi <= qi {
                    // Φ(1)_{pq} = Σ_j Σ_a C_j[a k + p, a k + q]
                    let mut terms = Vec::new();
                    for (j, src) in source.iter().enumerate() {
                        let d = dims[j];
                        for a in 0..src.rows() {
                            terms.push((j, (a * k + pi) * d + a * k + qi, Complex::new(1.0, 0.0)));
                        }
                    }
                    let f = Functional { terms };
                    if pi < qi {
                        rows.push(rotate(&f));
                        b.push(0.0);
                    }
                    rows.push(f);
                    b.push(if pi == qi { 1.0 } else { 0.0 });
                }
                // Φ(S)_{pq} = Σ_j Σ_ab S_j[a,b] C_j[a k + p, b k + q]
                let mut terms = Vec::new();
                for (j, src) in source.iter().enumerate() {
                    let d = dims[j];
                    let n = src.rows();
                    for a in 0..n {
                        for c in 0..n {
                            let s = src[(a, c)];
                            if s != ZERO {
                                terms.push((j, (a * k + pi) * d + c * k + qi, s));
                            }
                        }
                    }
                }
                let f = Functional { terms };
                let tpq = target[(pi, qi)];
                rows.push(rotate(&f));
                b.push(tpq.im);
                rows.push(f);
                b.push(tpq.re);
            }
        }
        let mut affine = Self { dims, k, rows, b, gram: Vec::new(), gram_pinv: Vec::new() };
        let m = affine.rows.len();
        let mut gram = vec![0.0; m * m];
        for i in 0..m {
            let vals = affine.apply(&affine.adjoint_row(i));
            gram[i * m..(i + 1) * m].copy_from_slice(&vals);
        }
        affine.gram_pinv = pseudo_inverse(m, &gram);
        affine.gram = gram;
        affine
    }

    pub(super) fn len(&self) -> usize {
        self.rows.len()
    }

    pub(super) fn zeros(&self) -> Blocks {
        self.dims.iter().map(|&d| vec![ZERO; d * d]).collect()
    }

    pub(super) fn apply(&self, x: &Blocks) -> Vec<f64> {
        self.rows
            .iter()
            .map(|f| f.terms.iter().map(|&(j, i, w)| (w * x[j][i]).re).sum())
            .collect()
    }

    /// Accumulates `y · H_i` into `out`: `w/2` at the transposed position
    /// and `conj(w)/2` at the stored one, so that `<H_i, X> = Re Σ w X`.
    fn add_adjoint(&self, i: usize, y: f64, out: &mut Blocks) {
        for &(j, idx, w) in &self.rows[i].terms {
            let d = self.dims[j];
            let (r, c) = (idx / d, idx % d);
            out[j][c * d + r] += w * (0.5 * y);
            out[j][idx] += w.conj() * (0.5 * y);
        }
    }

    pub(super) fn adjoint_row(&self, i: usize) -> Blocks {
        let mut out = self.zeros();
        self.add_adjoint(i, 1.0, &mut out);
        out
    }

    pub(super) fn adjoint(&self, y: &[f64]) -> Blocks {
        let mut out = self.zeros();
        for (i, &yi) in y.iter().enumerate() {
            if yi != 0.0 {
                self.add_adjoint(i, yi, &mut out);
            }
        }
        out
    }

    fn gram_solve(&self, r: &[f64]) -> Vec<f64> {
        let m = r.len();
        (0..m).map(|i| (0..m).map(|l| self.gram_pinv[i * m + l] * r[l]).sum()).collect()
    }

    pub(super) fn residual(&self, x: &Blocks) -> Vec<f64> {
        self.apply(x).iter().zip(&self.b).map(|(a, b)| a - b).collect()
    }

    /// Orthogonal projection onto the affine set.
    pub(super) fn project(&self, x: &Blocks) -> Blocks {
        let u = self.gram_solve(&self.residual(x));
        sub(x, &self.adjoint(&u))
    }

    /// Minimum-norm solution of the constraints, positivity ignored.
    pub(super) fn least_squares(&self) -> Blocks {
        self.adjoint(&self.gram_solve(&self.b))
    }

    /// Farkas test for multipliers `y`: with `G = Σ y_i H_i`, every feasible
    /// `C` has `y·b = <G, C> >= λ_min(G) tr C = k λ_min(G)`. Returns the
    /// normalized violation of that inequality (for `y` or `-y`) when it is
    /// impossible to satisfy.
    pub(super) fn certify(&self, y: &[f64]) -> Option<f64> {
        let g = self.adjoint(y);
        let gnorm = norm(&g);
        if gnorm == 0.0 || !gnorm.is_finite() {
            return None;
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (&d, blk) in self.dims.iter().zip(&g) {
            let e = hermitian_eigen(&HermitianMatrix::real_part(&block_matrix(d, blk)));
            lo = lo.min(e.min());
            hi = hi.max(e.max());
        }
        let yb: f64 = y.iter().zip(&self.b).map(|(a, b)| a * b).sum();
        let kf = self.k as f64;
        let best = ((kf * lo - yb) / gnorm).max((yb - kf * hi) / gnorm);
        (best > 1e-9).then_some(best)
    }

    /// The same affine set written with orthonormal, linearly independent
    /// dense constraint matrices: `(H'_i, b'_i)` with `<H'_i, H'_l> = δ_il`.
    pub(super) fn orthonormal_rows(&self) -> (Vec<Blocks>, Vec<f64>) {
        let m = self.len();
        let h = HermitianMatrix::real_part(&ComplexMatrix::from_fn(m, m, |i, j| Complex::new(self.gram[i * m + j], 0.0)));
        let e = hermitian_eigen(&h);
        let top = e.max();
        let mut rows = Vec::new();
        let mut b = Vec::new();
        for (c, &lam) in e.values.iter().enumerate() {
            if lam <= PINV_CUTOFF * top {
                continue;
            }
            // Real eigenvector up to a global phase; undo the phase.
            let pivot = (0..m).max_by(|&x, &y| e.vectors[(x, c)].norm().total_cmp(&e.vectors[(y, c)].norm())).unwrap_or(0);
            let phase = e.vectors[(pivot, c)].conj() / e.vectors[(pivot, c)].norm();
            let u: Vec<f64> = (0..m).map(|i| (e.vectors[(i, c)] * phase).re / lam.sqrt()).collect();
            b.push(u.iter().zip(&self.b).map(|(x, y)| x * y).sum());
            rows.push(self.adjoint(&u));
        }
        (rows, b)
    }

    /// [`Affine::certify`] with multipliers read off a direction `g` by
    /// projecting it onto the span of the constraint matrices.
    pub(super) fn certify_direction(&self, g: &Blocks) -> Option<f64> {
        self.certify(&self.gram_solve(&self.apply(g)))
    }
}

/// Pseudo-inverse of a real symmetric `m × m` matrix.
pub(super) fn pseudo_inverse(m: usize, a: &[f64]) -> Vec<f64> {
    let h = HermitianMatrix::real_part(&ComplexMatrix::from_fn(m, m, |i, j| Complex::new(a[i * m + j], 0.0)));
    let e = hermitian_eigen(&h);
    let top = e.values.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let mut out = vec![0.0; m * m];
    if top == 0.0 {
        return out;
    }
    for (c, &lam) in e.values.iter().enumerate() {
        if lam.abs() <= PINV_CUTOFF * top {
            continue;
        }
        for i in 0..m {
            let vi = e.vectors[(i, c)] / lam;
            for j in 0..m {
                out[i * m + j] += (vi * e.vectors[(j, c)].conj()).re;
            }
        }
    }
    out
}

/// Cholesky factor (lower, row-major) of a symmetric positive definite matrix.
pub(super) fn cholesky(m: usize, a: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let s = a[i * m + j] - (0..j).map(|t| l[i * m + t] * l[j * m + t]).sum::<f64>();
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * m + i] = s.sqrt();
            } else {
                l[i * m + j] = s / l[j * m + j];
            }
        }
    }
    Some(l)
}

pub(super) fn cholesky_solve(m: usize, l: &[f64], rhs: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; m];
    for i in 0..m {
        y[i] = (rhs[i] - (0..i).map(|t| l[i * m + t] * y[t]).sum::<f64>()) / l[i * m + i];
    }
    for i in (0..m).rev() {
        y[i] = (y[i] - (i + 1..m).map(|t| l[t * m + i] * y[t]).sum::<f64>()) / l[i * m + i];
    }
    y
}
