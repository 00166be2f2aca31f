//! Numerical ranges: the radius of W(J_m(0)) from the support function
//! against cos(π/(m+1)), and a few samples of the hull of several blocks.

use std::f64::consts::PI;

use jordan_envelope::jordan::JordanSpec;
use jordan_envelope::matrix::{jordan_block, Complex};
use jordan_envelope::numrange::{support_profile, HullOfDisks};

fn main() {
    for m in 1..=6 {
        let p = support_profile(&jordan_block(m, Complex::new(0.0, 0.0)).unwrap(), 360).unwrap();
        let max = p.values.iter().cloned().fold(f64::MIN, f64::max);
        println!("m = {m}: support {max:.9}, cos(π/(m+1)) = {:.9}", (PI / (m as f64 + 1.0)).cos());
    }

    let spec = JordanSpec::real(&[(1, 3.0), (2, 2.0), (2, 1.0), (1, 0.0)]).unwrap();
    let hull = HullOfDisks::of_spec(&spec);
    for (theta, z) in hull.boundary_sample(256).unwrap().iter().step_by(32) {
        println!("θ = {theta:.3}: ({:.4}, {:.4})", z.re, z.im);
    }
}
