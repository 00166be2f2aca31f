//! The cube roots of unity next to J_2(0): the size-two block is the
//! compression of diag(1, ω, ω²) by an explicit isometry, so the envelope
//! is C ⊕ C ⊕ C.

use jordan_envelope::classify::classify_general;
use jordan_envelope::config::Tolerances;
use jordan_envelope::verify::{omega_certificate_residual, omega_spec};

fn main() {
    let r = classify_general(&omega_spec(), &Tolerances::DEFAULT).unwrap();
    for v in &r.verdicts {
        let b = r.spec.blocks()[v.block];
        println!("J_{}({:.4}{:+.4}i): {:?} by {}", b.size, b.eigenvalue.re, b.eigenvalue.im, v.boundary, v.rule);
    }
    let env: Vec<String> = r.envelope().iter().map(|s| s.to_string()).collect();
    println!("envelope {}", env.join(" ⊕ "));
    println!("explicit isometry residual {:.1e}", omega_certificate_residual().unwrap());
}
