//! Runs every real spec with at most four distinct blocks of size at most
//! three and eigenvalues in {0, 1/2, 1, 2, 3} through both the closed-form
//! classification and the block-by-block membership pipeline, and lists
//! where they disagree.

use std::time::Instant;

use jordan_envelope::config::Tolerances;
use jordan_envelope::verify::oracle_sweep;

fn main() {
    let start = Instant::now();
    let s = oracle_sweep(&Tolerances::DEFAULT).expect("sweep specs are irreducible");
    for d in &s.disagreements {
        println!("{d}");
    }
    println!(
        "{} specs, {} blocks, {} disagreements, {} undecided, {:.1} s",
        s.specs,
        s.blocks,
        s.disagreements.len(),
        s.undecided,
        start.elapsed().as_secs_f64()
    );
}
