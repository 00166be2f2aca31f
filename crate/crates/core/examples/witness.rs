//! Explicit compressions: a block realized as a convex combination of
//! corners of larger blocks, checked as a Choi matrix.

use jordan_envelope::jordan::JordanSpec;
use jordan_envelope::oracle::{apply_plan, block_program, compression_witness, plan_choi};

fn main() {
    let spec = JordanSpec::real(&[(3, 2.0), (2, 1.0), (3, 0.0)]).unwrap();
    let plan = compression_witness(&spec, 1).unwrap().expect("1 lies between 0 and 2");
    for t in &plan.terms {
        let b = spec.blocks()[t.block];
        println!("weight {:.3} on the leading 2×2 corner of J_{}({})", t.weight, b.size, b.eigenvalue.re);
    }
    let image = apply_plan(&plan, &spec, 1).unwrap();
    println!("max deviation from J_2(1): {:.1e}", (&image - &spec.blocks()[1].matrix()).max_abs());
    let check = block_program(&spec, 1).unwrap().check(&plan_choi(&plan, &spec, 1).unwrap());
    println!("Choi residual {:.1e}, min eigenvalue {:.1e}", check.residual(), check.min_eigenvalue);
}
