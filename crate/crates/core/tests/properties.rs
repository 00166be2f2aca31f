use std::f64::consts::PI;

use jordan_envelope::classify::{classify, classify_real, Boundary};
use jordan_envelope::config::Tolerances;
use jordan_envelope::jordan::{commutant_dimension, normalize, realize, JordanBlockSpec, JordanSpec};
use jordan_envelope::matrix::{
    hermitian_eigen, jordan_block, operator_norm, psd_project, Complex, ComplexMatrix, HermitianMatrix,
};
use jordan_envelope::numrange::{jordan_numrange, point_in_numrange, support_profile, HullOfDisks, Membership};
use proptest::prelude::*;

fn lattice() -> impl Strategy<Value = f64> {
    (-8i32..=8).prop_map(|i| i as f64 / 4.0)
}

fn block() -> impl Strategy<Value = JordanBlockSpec> {
    (1usize..=3, lattice(), lattice(), 1usize..=2)
        .prop_map(|(m, re, im, d)| JordanBlockSpec::new(m, Complex::new(re, im), d).unwrap())
}

fn spec() -> impl Strategy<Value = JordanSpec> {
    prop::collection::vec(block(), 1..=4).prop_map(|b| JordanSpec::new(b).unwrap())
}

fn real_spec() -> impl Strategy<Value = JordanSpec> {
    prop::collection::vec((1usize..=3, lattice()), 2..=4).prop_map(|p| JordanSpec::real(&p).unwrap())
}

fn hermitian(n: usize) -> impl Strategy<Value = HermitianMatrix> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n * n).prop_map(move |v| {
        let m = ComplexMatrix::from_fn(n, n, |i, j| Complex::new(v[i * n + j].0, v[i * n + j].1));
        HermitianMatrix::real_part(&m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotated_nilpotent_real_part(m in 1usize..=8, phi in 0.0..(2.0 * PI)) {
        let n = jordan_block(m, Complex::new(0.0, 0.0)).unwrap();
        let h = HermitianMatrix::real_part(&n.scale(Complex::from_polar(1.0, phi)));
        let top = hermitian_eigen(&h).max();
        prop_assert!((top - (PI / (m as f64 + 1.0)).cos()).abs() < 1e-9);
    }

    #[test]
    fn psd_projection_is_idempotent_and_nonexpansive(a in hermitian(4), b in hermitian(4)) {
        let pa = psd_project(&a);
        let again = psd_project(&pa);
        prop_assert!((pa.as_matrix() - again.as_matrix()).frobenius_norm() < 1e-10);
        let pb = psd_project(&b);
        let moved = (pa.as_matrix() - pb.as_matrix()).frobenius_norm();
        prop_assert!(moved <= (a.as_matrix() - b.as_matrix()).frobenius_norm() + 1e-10);
    }

    #[test]
    fn normalize_is_idempotent_and_keeps_the_norm(s in spec()) {
        let n = normalize(&s);
        let twice = normalize(n.spec());
        prop_assert_eq!(twice.spec(), n.spec());
        let a = operator_norm(&realize(&s).unwrap());
        let b = operator_norm(&realize(n.spec()).unwrap());
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn support_profile_matches_the_disk(m in 1usize..=8, re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let l = Complex::new(re, im);
        let disk = jordan_numrange(m, l).unwrap();
        let p = support_profile(&jordan_block(m, l).unwrap(), 180).unwrap();
        for (th, h) in p.directions.iter().zip(&p.values) {
            prop_assert!((h - disk.support(*th)).abs() <= 1e-6);
        }
    }

    #[test]
    fn numerical_range_moves_with_real_affine_maps(
        s in spec(), zr in -3.0..3.0f64, zi in -3.0..3.0f64, a in prop_oneof![-2.0..-0.25f64, 0.25..2.0f64], b in -2.0..2.0f64,
    ) {
        let t = realize(&s).unwrap();
        let z = Complex::new(zr, zi);
        let before = point_in_numrange(z, &t, 1e-7).unwrap();
        let moved = &t.scale_real(a) + &ComplexMatrix::identity(t.rows()).scale_real(b);
        let after = point_in_numrange(z * a + b, &moved, 1e-7).unwrap();
        if before != Membership::BoundaryAmbiguous && after != Membership::BoundaryAmbiguous {
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn hull_of_disks_agrees_with_the_realized_operator(s in spec(), zr in -3.0..3.0f64, zi in -3.0..3.0f64) {
        let z = Complex::new(zr, zi);
        let hull = HullOfDisks::of_spec(&s).classify(z, 1e-7);
        let direct = point_in_numrange(z, &realize(&s).unwrap(), 1e-7).unwrap();
        if hull != Membership::BoundaryAmbiguous && direct != Membership::BoundaryAmbiguous {
            prop_assert_eq!(hull, direct);
        }
    }

    #[test]
    fn reduced_iff_all_boundary_iff_full_dimension(s in real_spec()) {
        let Ok(r) = classify(&s, &Tolerances::DEFAULT) else { return Ok(()) };
        prop_assume!(!r.has_undecided());
        let all = r.verdicts.iter().all(|v| v.boundary == Boundary::Yes);
        let full: usize = r.spec.blocks().iter().map(|b| b.size * b.size).sum();
        prop_assert_eq!(r.reduced(), Some(all));
        prop_assert_eq!(all, r.envelope_dimension() == full);
    }

    #[test]
    fn verdicts_follow_input_order(s in real_spec(), seed in any::<u64>()) {
        let Ok(r) = classify_real(&s, &Tolerances::DEFAULT) else { return Ok(()) };
        let mut blocks = s.blocks().to_vec();
        let n = blocks.len();
        blocks.rotate_left((seed as usize) % n);
        let shifted = (seed as usize) % n;
        let r2 = classify_real(&JordanSpec::new(blocks).unwrap(), &Tolerances::DEFAULT).unwrap();
        for i in 0..n {
            let j = (i + n - shifted) % n;
            prop_assert_eq!(r.verdict_for_input(i).unwrap().boundary, r2.verdict_for_input(j).unwrap().boundary);
        }
    }
}

#[test]
fn commutant_dimension_counts_distinct_blocks() {
    let pairs: Vec<(usize, f64)> = (1..=3).flat_map(|m| [0.0, 1.0, 2.0].map(|l| (m, l))).collect();
    let mut checked = 0;
    for mask in 1u32..(1 << pairs.len()) {
        let chosen: Vec<(usize, f64)> = (0..pairs.len()).filter(|i| mask & (1 << i) != 0).map(|i| pairs[i]).collect();
        if chosen.iter().map(|p| p.0).sum::<usize>() > 10 {
            continue;
        }
        let spec = JordanSpec::real(&chosen).unwrap();
        let d = commutant_dimension(&realize(&spec).unwrap(), Tolerances::DEFAULT.commutant_null);
        assert_eq!(d, chosen.len(), "{chosen:?}");
        checked += 1;
    }
    assert!(checked > 100);
}

#[test]
fn norm_bounds_on_a_fixed_grid() {
    for m in 2..=6 {
        for (a, b, l) in [(1.0, 1.0, 0.0), (0.0, 1.0, 2.0), (-1.5, 0.5, 3.0), (2.0, -3.0, -1.0)] {
            let (a, b, l) = (Complex::new(a, 0.5), Complex::new(b, -0.25), Complex::new(l, 1.0));
            let x = &ComplexMatrix::identity(m).scale(a) + &jordan_block(m, l).unwrap().scale(b);
            let norm = operator_norm(&x);
            assert!(norm >= ((a + l * b).norm_sqr() + b.norm_sqr()).sqrt() - 1e-9);
            assert!(norm <= (a + l * b).norm() + b.norm() + 1e-9);
        }
    }
}
