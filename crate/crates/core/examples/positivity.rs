//! Where α + βJ_k(0) + β̄J_k(0)* stops being positive, and the norm bounds
//! for α + βJ_m(λ).

use std::f64::consts::PI;

use jordan_envelope::matrix::{jordan_block, operator_norm, Complex, ComplexMatrix};
use jordan_envelope::verify::pencil_min_eigenvalue;

fn main() {
    for k in 2..=6 {
        let edge = 0.5 / (PI / (k as f64 + 1.0)).cos();
        let below = pencil_min_eigenvalue(k, 1.0, Complex::new(edge - 1e-4, 0.0)).unwrap();
        let above = pencil_min_eigenvalue(k, 1.0, Complex::new(edge + 1e-4, 0.0)).unwrap();
        println!("k = {k}: |β| = {edge:.6}, min eigenvalue {below:+.2e} below, {above:+.2e} above");
    }

    let (a, b, l) = (Complex::new(1.0, -0.5), Complex::new(0.3, 2.0), Complex::new(-1.0, 0.7));
    for m in 2..=5 {
        let x = &ComplexMatrix::identity(m).scale(a) + &jordan_block(m, l).unwrap().scale(b);
        let lower = ((a + l * b).norm_sqr() + b.norm_sqr()).sqrt();
        let upper = (a + l * b).norm() + b.norm();
        println!("m = {m}: {lower:.6} ≤ {:.6} ≤ {upper:.6}", operator_norm(&x));
    }
}
