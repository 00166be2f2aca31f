//! Envelope of J_2(0) ⊕ J_1(λ) as λ crosses 1/2, then a four-block operator
//! with two size-two blocks in the middle.
//!
//! `cargo run --example classify`

use jordan_envelope::classify::classify;
use jordan_envelope::config::Tolerances;
use jordan_envelope::jordan::JordanSpec;

fn main() {
    let tol = Tolerances::DEFAULT;
    for l in [0.0, 0.25, 0.5, 0.51, 1.0] {
        let r = classify(&JordanSpec::real(&[(2, 0.0), (1, l)]).unwrap(), &tol).unwrap();
        let env: Vec<String> = r.envelope().iter().map(|s| s.to_string()).collect();
        println!("J_2(0) ⊕ J_1({l}): {}", env.join(" ⊕ "));
    }

    let spec = JordanSpec::real(&[(1, 3.0), (2, 2.0), (2, 0.5), (1, 0.0)]).unwrap();
    let r = classify(&spec, &tol).unwrap();
    for v in &r.verdicts {
        let b = r.spec.blocks()[v.block];
        println!("J_{}({}): {:?} by {}", b.size, b.eigenvalue.re, v.boundary, v.rule);
    }
    println!("reduced: {:?}", r.reduced());
}
