//! Direct sums of blocks sharing one eigenvalue: finite sums collapse to
//! the largest block, infinite ones are labelled symbolically.

use jordan_envelope::classify::{classify, classify_infinite_same_eigenvalue};
use jordan_envelope::config::Tolerances;
use jordan_envelope::jordan::{InfiniteJordanSpec, InfiniteSizes, JordanSpec};
use jordan_envelope::matrix::Complex;

fn main() {
    let spec = JordanSpec::real(&[(3, 0.0), (2, 0.0), (1, 0.0)]).unwrap();
    let r = classify(&spec, &Tolerances::DEFAULT).unwrap();
    println!("J_3(0) ⊕ J_2(0) ⊕ J_1(0): {:?}", r.envelope().iter().map(|s| s.to_string()).collect::<Vec<_>>());
    for sizes in [InfiniteSizes::Bounded { max: 4 }, InfiniteSizes::Unbounded] {
        let s = InfiniteJordanSpec { eigenvalue: Complex::new(0.0, 0.0), sizes };
        println!("{sizes:?}: {}", classify_infinite_same_eigenvalue(&s));
    }
}
