//! Matricial-range membership through the Choi oracle: a size-two block
//! between a scalar and a size-three block is a compression of the two,
//! while a slightly shifted copy is certified out.

use jordan_envelope::config::Tolerances;
use jordan_envelope::jordan::JordanSpec;
use jordan_envelope::oracle::{block_program, choi_feasible, in_matricial_range, ChoiVerdict};

fn main() {
    let tol = Tolerances::DEFAULT;
    for l in [0.5, 1.5] {
        let spec = JordanSpec::real(&[(1, 3.0), (2, l), (3, 0.0)]).unwrap();
        let v = in_matricial_range(&spec, 1, &tol).unwrap();
        println!("J_2({l}) from J_1(3) ⊕ J_3(0): {:?} via {} (margin {:?})", v.membership, v.rule, v.margin);
        match choi_feasible(&block_program(&spec, 1).unwrap(), &tol).unwrap() {
            ChoiVerdict::Feasible { check, evidence, iterations, .. } => println!(
                "  certificate: {evidence:?} after {iterations} steps, residual {:.1e}, min eigenvalue {:.1e}",
                check.residual(),
                check.min_eigenvalue
            ),
            ChoiVerdict::Infeasible { margin, evidence, iterations } => {
                println!("  {evidence:?} after {iterations} steps, margin {margin:.3e}")
            }
            ChoiVerdict::Unknown { gap, .. } => println!("  undecided, gap {gap:.1e}"),
        }
    }
}
