//! Log-det barrier refinement for Choi programs whose feasible set is thin.
//!
//! Solves `max t` over `C = S + t·1` with `S ≻ 0` and `A(C) = b` by damped
//! infeasible-start Newton steps on `-t/μ - log det S`. Near the central
//! path `y = μλ` is dual feasible with `A*y = μ S⁻¹ ≻ 0` and the duality gap
//! is `μ·n`, so the optimum is bracketed in `[t, t + μ n]`: `t >= 0` gives a
//! feasible point and `t + μ n < 0` gives multipliers that the Farkas test
//! in [`Affine::certify`] turns into an infeasibility certificate.

use crate::matrix::{hermitian_eigen, jacobi_in_place, Complex, HermitianMatrix};

use super::affine::{block_matrix, cholesky, cholesky_solve, identity_blocks, vnorm, Affine, Blocks, ZERO};

const MU_START: f64 = 1.0;
const MU_SHRINK: f64 = 0.2;
const MU_FLOOR: f64 = 1e-14;
/// Newton decrement below which a point counts as centered.
const CENTERED: f64 = 0.25;
const STEP_FRACTION: f64 = 0.9;
/// Relative affine residual treated as zero; Newton steps drift to about 1e-10.
const RESIDUAL: f64 = 1e-8;

pub(super) enum BarrierOutcome {
    /// `C = S + t·1` with `t` no smaller than `-feasible_slack`.
    Feasible(Blocks),
    Infeasible(f64),
    /// Budget exhausted or numerical breakdown.
    Stalled,
}

pub(super) struct BarrierRun {
    pub(super) outcome: BarrierOutcome,
    pub(super) steps: usize,
}

/// Dense `a · b` for `d × d` row-major blocks.
fn matmul(d: usize, a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    let mut out = vec![ZERO; d * d];
    for r in 0..d {
        for t in 0..d {
            let x = a[r * d + t];
            if x == ZERO {
                continue;
            }
            for c in 0..d {
                out[r * d + c] += x * b[t * d + c];
            }
        }
    }
    out
}

/// Eigendecomposition of a Hermitian block: `(values, row-major vectors)`.
fn eig(d: usize, x: &[Complex]) -> (Vec<f64>, Vec<Complex>) {
    let mut a = x.to_vec();
    let mut v = identity_blocks(&[d], 1.0).pop().unwrap_or_default();
    jacobi_in_place(d, &mut a, &mut v, 1e-15);
    ((0..d).map(|i| a[i * d + i].re).collect(), v)
}

/// `V diag(f(w)) V*`.
fn recompose(d: usize, w: &[f64], v: &[Complex], f: impl Fn(f64) -> f64) -> Vec<Complex> {
    let fw: Vec<f64> = w.iter().map(|&x| f(x)).collect();
    let mut out = vec![ZERO; d * d];
    for r in 0..d {
        for c in r..d {
            let mut s = ZERO;
            for t in 0..d {
                s += v[r * d + t] * v[c * d + t].conj() * fw[t];
            }
            out[r * d + c] = s;
            out[c * d + r] = s.conj();
        }
    }
    out
}

/// Smallest eigenvalue and squared Frobenius norm of `S^{-1/2} D S^{-1/2}`
/// over all blocks.
fn scaled_step(dims: &[usize], inv_sqrt: &[Vec<Complex>], ds: &Blocks) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut fro = 0.0;
    for ((&d, r), x) in dims.iter().zip(inv_sqrt).zip(ds) {
        let m = matmul(d, &matmul(d, r, x), r);
        fro += m.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let e = hermitian_eigen(&HermitianMatrix::real_part(&block_matrix(d, &m)));
        lo = lo.min(e.min());
    }
    (lo, fro)
}

fn inner(a: &Blocks, b: &Blocks) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x.conj() * y).re).sum()
}

pub(super) fn refine(affine: &Affine, budget: usize, feasible_slack: f64) -> BarrierRun {
    let dims = affine.dims.clone();
    let n: usize = dims.iter().sum();
    let (rows, b) = affine.orthonormal_rows();
    let m = rows.len();
    let apply = |x: &Blocks| -> Vec<f64> { rows.iter().map(|h| inner(h, x)).collect() };
    let scale = 1.0 + vnorm(&b);
    let id = identity_blocks(&dims, 1.0);
    let a_id = apply(&id);

    let mut s = identity_blocks(&dims, affine.k as f64 / n as f64);
    let mut t = 0.0;
    let mut mu = MU_START;

    for step in 1..=budget {
        let as_ = apply(&s);
        let r: Vec<f64> = (0..m).map(|i| b[i] - as_[i] - t * a_id[i]).collect();
        let residual = vnorm(&r);

        // Q_l = S H_l S and K_il = <H_i, Q_l>.
        let q: Vec<Blocks> = rows
            .iter()
            .map(|h| dims.iter().enumerate().map(|(j, &d)| matmul(d, &matmul(d, &s[j], &h[j]), &s[j])).collect())
            .collect();
        let mut kmat = vec![0.0; m * m];
        for i in 0..m {
            for l in i..m {
                let v = inner(&rows[i], &q[l]);
                kmat[i * m + l] = v;
                kmat[l * m + i] = v;
            }
        }
        let Some(chol) = cholesky(m, &kmat) else {
            return stalled(&dims, &s, t, feasible_slack, step);
        };
        // K λ - dt a = A(S) - r and a·λ = 1/μ.
        let c: Vec<f64> = (0..m).map(|i| as_[i] - r[i]).collect();
        let kc = cholesky_solve(m, &chol, &c);
        let ka = cholesky_solve(m, &chol, &a_id);
        let a_ka: f64 = a_id.iter().zip(&ka).map(|(x, y)| x * y).sum();
        let a_kc: f64 = a_id.iter().zip(&kc).map(|(x, y)| x * y).sum();
        let dt = (1.0 / mu - a_kc) / a_ka;
        let lambda: Vec<f64> = kc.iter().zip(&ka).map(|(x, y)| x + dt * y).collect();
        if !dt.is_finite() || lambda.iter().any(|x| !x.is_finite()) {
            return stalled(&dims, &s, t, feasible_slack, step);
        }

        let mut ds = s.clone();
        for (l, &lam) in lambda.iter().enumerate() {
            for (dj, qj) in ds.iter_mut().zip(&q[l]) {
                for (x, y) in dj.iter_mut().zip(qj) {
                    *x -= y * lam;
                }
            }
        }

        let mut inv_sqrt = Vec::with_capacity(dims.len());
        for (j, &d) in dims.iter().enumerate() {
            let (w, v) = eig(d, &s[j]);
            if w.iter().any(|&x| x <= 0.0) {
                return stalled(&dims, &s, t, feasible_slack, step);
            }
            inv_sqrt.push(recompose(d, &w, &v, |x| 1.0 / x.sqrt()));
        }
        let (lo, fro) = scaled_step(&dims, &inv_sqrt, &ds);
        let decrement = fro.sqrt();
        let centered = decrement < CENTERED && residual <= RESIDUAL * scale;

        if centered {
            if t >= -feasible_slack {
                return BarrierRun { outcome: BarrierOutcome::Feasible(with_shift(&dims, &s, t)), steps: step };
            }
            if t + mu * n as f64 + feasible_slack < 0.0 {
                let mut g = affine.zeros();
                for (h, &lam) in rows.iter().zip(&lambda) {
                    for (gj, hj) in g.iter_mut().zip(h) {
                        for (x, y) in gj.iter_mut().zip(hj) {
                            *x += y * (lam * mu);
                        }
                    }
                }
                if let Some(margin) = affine.certify_direction(&g) {
                    return BarrierRun { outcome: BarrierOutcome::Infeasible(margin), steps: step };
                }
            }
            if mu < MU_FLOOR {
                break;
            }
            mu *= MU_SHRINK;
            continue;
        }

        let mut alpha: f64 = 1.0;
        if lo < 0.0 {
            alpha = alpha.min(STEP_FRACTION / -lo);
        }
        if decrement > 0.5 {
            alpha = alpha.min(1.0 / (1.0 + decrement));
        }
        for (sj, dj) in s.iter_mut().zip(&ds) {
            for (x, y) in sj.iter_mut().zip(dj) {
                *x += y * alpha;
            }
        }
        t += alpha * dt;
        if (1.0 - alpha) * residual <= RESIDUAL * scale && t > feasible_slack {
            // Strictly feasible: no need to follow the path further.
            return BarrierRun { outcome: BarrierOutcome::Feasible(with_shift(&dims, &s, t)), steps: step };
        }
    }
    stalled(&dims, &s, t, feasible_slack, budget)
}

/// Breakdown near the optimum still leaves a usable point when `t` is
/// within the slack; the caller re-verifies it.
fn stalled(dims: &[usize], s: &Blocks, t: f64, feasible_slack: f64, steps: usize) -> BarrierRun {
    let outcome =
        if t >= -feasible_slack { BarrierOutcome::Feasible(with_shift(dims, s, t)) } else { BarrierOutcome::Stalled };
    BarrierRun { outcome, steps }
}

fn with_shift(dims: &[usize], s: &Blocks, t: f64) -> Blocks {
    dims.iter()
        .zip(s)
        .map(|(&d, b)| {
            let mut out = b.clone();
            for i in 0..d {
                out[i * d + i] += Complex::new(t, 0.0);
            }
            out
        })
        .collect()
}
