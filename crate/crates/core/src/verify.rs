//! Self-check suite run by `jordan-envelope verify`: golden operators with
//! known envelopes, the oracle-versus-closed-form sweep, numerical-range
//! and positivity thresholds, and invariance under relabelling.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{
    classify, classify_corollary, classify_general, classify_infinite_same_eigenvalue, classify_real, Boundary,
    EnvelopeReport, Summand,
};
use crate::config::Tolerances;
use crate::error::Result;
use crate::jordan::{nilpotent_numerical_radius, InfiniteJordanSpec, InfiniteSizes, JordanBlockSpec, JordanSpec};
use crate::matrix::{jordan_block, min_eigenvalue, operator_norm, Complex, ComplexMatrix, HermitianMatrix};
use crate::numrange::support_profile;
use crate::oracle::{block_program, omega, omega_dilation, ChoiMatrix};

pub const CHECKS: [&str; 9] = [
    "two-block-threshold",
    "end-block-table",
    "golden-reduced",
    "cube-roots-of-unity",
    "nested-sizes",
    "oracle-sweep",
    "disk-radii",
    "positivity-threshold",
    "invariance",
];

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub tol: Tolerances,
    /// Radius assumed by the two-block threshold check; anything but 1/2
    /// is a negative control and must fail.
    pub threshold: f64,
    /// Run only these checks (all when empty).
    pub only: Vec<String>,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { tol: Tolerances::DEFAULT, threshold: 0.5, only: Vec::new(), seed: 2024 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Every real spec with 2 to 4 blocks, sizes at most 3, eigenvalues in
/// {0, 1/2, 1, 2, 3} and pairwise distinct `(m, λ)`.
pub fn sweep_specs() -> Vec<Vec<(usize, f64)>> {
    let pairs: Vec<(usize, f64)> =
        (1..=3).flat_map(|m| [0.0, 0.5, 1.0, 2.0, 3.0].into_iter().map(move |l| (m, l))).collect();
    let n = pairs.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            out.push(vec![pairs[a], pairs[b]]);
            for c in b + 1..n {
                out.push(vec![pairs[a], pairs[b], pairs[c]]);
                for d in c + 1..n {
                    out.push(vec![pairs[a], pairs[b], pairs[c], pairs[d]]);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutcome {
    pub specs: usize,
    pub blocks: usize,
    pub undecided: usize,
    /// Undecided blocks whose closed-form verdict exists (all of them, for
    /// real spectra).
    pub undecided_resolved: usize,
    pub disagreements: Vec<String>,
}

pub fn oracle_sweep(tol: &Tolerances) -> Result<SweepOutcome> {
    let mut out = SweepOutcome::default();
    for pairs in sweep_specs() {
        let spec = JordanSpec::real(&pairs)?;
        let closed = classify_real(&spec, tol)?;
        let general = classify_general(&spec, tol)?;
        out.specs += 1;
        for (c, g) in closed.verdicts.iter().zip(&general.verdicts) {
            out.blocks += 1;
            match g.boundary {
                Boundary::Undecided => {
                    out.undecided += 1;
                    if c.boundary != Boundary::Undecided {
                        out.undecided_resolved += 1;
                    }
                }
                b if b != c.boundary => {
                    let blk = closed.spec.blocks()[c.block];
                    // For a non-boundary verdict the margin is the residual
                    // of the re-verified Choi certificate.
                    let evidence = match (b, g.margin) {
                        (Boundary::No, Some(m)) => format!("certificate residual {m:.1e}"),
                        (_, Some(m)) => format!("margin {m:.3e}"),
                        (_, None) => "no margin".to_string(),
                    };
                    out.disagreements.push(format!(
                        "{pairs:?} J_{}({}): closed form {:?}, {} says {:?}, {evidence}",
                        blk.size, blk.eigenvalue.re, c.boundary, g.rule, b
                    ));
                }
                _ => {}
            }
        }
    }
    Ok(out)
}

fn names(s: &[Summand]) -> Vec<String> {
    s.iter().map(|x| x.to_string()).collect()
}

fn envelope_of(r: &EnvelopeReport) -> std::result::Result<Vec<String>, String> {
    if r.has_undecided() {
        return Err(format!("undecided verdicts, envelope between {:?} and {:?}", names(&r.envelope()), names(&r.envelope_upper())));
    }
    Ok(names(&r.envelope()))
}

type Outcome = std::result::Result<String, String>;
type Check = fn(&VerifyOptions) -> Outcome;
type TableCase = (Vec<(usize, f64)>, Vec<&'static str>);

fn expect_envelope(label: &str, r: &EnvelopeReport, expected: &[&str]) -> std::result::Result<(), String> {
    let got = envelope_of(r).map_err(|e| format!("{label}: {e}"))?;
    if got != expected {
        return Err(format!("{label}: expected {expected:?}, got {got:?}"));
    }
    Ok(())
}

fn two_block_threshold(opts: &VerifyOptions) -> Outcome {
    let mut lambdas: Vec<f64> = (0..=4).map(|i| i as f64 / 10.0).collect();
    lambdas.extend([0.49, 0.5, 0.51]);
    lambdas.extend((6..=10).map(|i| i as f64 / 10.0));
    lambdas.push(2.0);
    for &l in &lambdas {
        let spec = JordanSpec::real(&[(2, 0.0), (1, l)]).map_err(|e| e.to_string())?;
        let r = classify(&spec, &opts.tol).map_err(|e| e.to_string())?;
        let expected: &[&str] = if l.abs() <= opts.threshold { &["M2"] } else { &["M2", "C"] };
        expect_envelope(&format!("λ = {l}"), &r, expected)?;
    }
    Ok(format!("{} values of λ", lambdas.len()))
}

fn end_block_table(opts: &VerifyOptions) -> Outcome {
    let c2 = nilpotent_numerical_radius(2);
    let c3 = nilpotent_numerical_radius(3);
    let cases: Vec<TableCase> = vec![
        (vec![(2, 1.0), (1, 0.5), (3, 0.0)], vec!["M3", "M2"]),
        (vec![(3, 2.0), (2, 1.0), (2, 0.0)], vec!["M3", "M2"]),
        (vec![(1, 1.0), (1, 0.5), (1, 0.0)], vec!["C", "C"]),
        (vec![(1, c3 - 1e-3), (3, 0.0)], vec!["M3"]),
        (vec![(1, c3), (3, 0.0)], vec!["M3"]),
        (vec![(1, c3 + 1e-3), (3, 0.0)], vec!["M3", "C"]),
        (vec![(1, 2.0), (1, 1.5), (3, 0.0)], vec!["M3", "C"]),
        (vec![(2, c2 - 1e-3), (1, 0.0)], vec!["M2"]),
        (vec![(2, c2), (1, 0.0)], vec!["M2"]),
        (vec![(2, c2 + 1e-3), (1, 0.0)], vec!["M2", "C"]),
    ];
    for (pairs, expected) in &cases {
        let spec = JordanSpec::real(pairs).map_err(|e| e.to_string())?;
        let table = classify_corollary(&spec, &opts.tol)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("{pairs:?}: table not applicable"))?;
        expect_envelope(&format!("{pairs:?} (table)"), &table, expected)?;
        let full = classify(&spec, &opts.tol).map_err(|e| e.to_string())?;
        expect_envelope(&format!("{pairs:?}"), &full, expected)?;
    }
    Ok(format!("{} specs", cases.len()))
}

fn golden_reduced(opts: &VerifyOptions) -> Outcome {
    let run = |pairs: &[(usize, f64)]| -> std::result::Result<EnvelopeReport, String> {
        classify(&JordanSpec::real(pairs).map_err(|e| e.to_string())?, &opts.tol).map_err(|e| e.to_string())
    };
    for pairs in [&[(1, 0.0), (2, 1.0), (1, 2.0)][..], &[(1, 3.0), (2, 2.0), (2, 1.0), (1, 0.0)][..]] {
        let r = run(pairs)?;
        if r.reduced() != Some(true) {
            return Err(format!("{pairs:?} should be reduced, got {:?}", r.reduced()));
        }
    }
    let pairs = [(1, 3.0), (2, 2.0), (2, 0.5), (1, 0.0)];
    let r = run(&pairs)?;
    let non: Vec<(usize, f64)> = r
        .verdicts
        .iter()
        .filter(|v| v.boundary != Boundary::Yes)
        .map(|v| (r.spec.blocks()[v.block].size, r.spec.blocks()[v.block].eigenvalue.re))
        .collect();
    if r.reduced() != Some(false) || non != [(1, 0.0)] {
        return Err(format!("{pairs:?}: expected only J_1(0) non-boundary, got {non:?}"));
    }
    Ok("3 specs".into())
}

pub fn omega_spec() -> JordanSpec {
    let w = omega();
    JordanSpec::new(vec![
        JordanBlockSpec::new(1, Complex::new(1.0, 0.0), 1).expect("valid block"),
        JordanBlockSpec::new(1, w, 1).expect("valid block"),
        JordanBlockSpec::new(1, w * w, 1).expect("valid block"),
        JordanBlockSpec::new(2, Complex::new(0.0, 0.0), 1).expect("valid block"),
    ])
    .expect("non-empty spec")
}

/// Residual of the explicit compression `ψ(X) = W X W*` as a Choi
/// certificate for the size-two block of [`omega_spec`].
pub fn omega_certificate_residual() -> Result<f64> {
    let spec = omega_spec();
    let k = (0..spec.len()).find(|&k| spec.blocks()[k].size == 2).expect("one size-two block");
    let program = block_program(&spec, k)?;
    let choi = ChoiMatrix::from_kraus(&program, &[omega_dilation()])?;
    let check = program.check(&choi);
    Ok(check.residual().max(-check.min_eigenvalue))
}

fn cube_roots(opts: &VerifyOptions) -> Outcome {
    let r = classify_general(&omega_spec(), &opts.tol).map_err(|e| e.to_string())?;
    expect_envelope("cube roots with J_2(0)", &r, &["C", "C", "C"])?;
    let residual = omega_certificate_residual().map_err(|e| e.to_string())?;
    if residual >= 1e-9 {
        return Err(format!("explicit compression residual {residual:e}"));
    }
    Ok(format!("explicit compression residual {residual:.1e}"))
}

fn nested_sizes(opts: &VerifyOptions) -> Outcome {
    let spec = JordanSpec::real(&[(3, 0.0), (2, 0.0), (1, 0.0)]).map_err(|e| e.to_string())?;
    expect_envelope("closed form", &classify(&spec, &opts.tol).map_err(|e| e.to_string())?, &["M3"])?;
    expect_envelope("membership", &classify_general(&spec, &opts.tol).map_err(|e| e.to_string())?, &["M3"])?;
    let l = Complex::new(0.0, 0.0);
    let symbolic = [
        (InfiniteSizes::Unbounded, "C(T)"),
        (InfiniteSizes::Bounded { max: 3 }, "M3"),
        (InfiniteSizes::Bounded { max: 1 }, "C"),
    ];
    for (sizes, expected) in symbolic {
        let got = classify_infinite_same_eigenvalue(&InfiniteJordanSpec { eigenvalue: l, sizes }).to_string();
        if got != expected {
            return Err(format!("{sizes:?}: expected {expected}, got {got}"));
        }
    }
    Ok("finite and symbolic".into())
}

fn sweep(opts: &VerifyOptions) -> Outcome {
    let s = oracle_sweep(&opts.tol).map_err(|e| e.to_string())?;
    let rate = s.undecided as f64 / s.blocks.max(1) as f64;
    let summary = format!(
        "{} specs, {} blocks, {} disagreements, {} undecided ({:.2}%)",
        s.specs,
        s.blocks,
        s.disagreements.len(),
        s.undecided,
        100.0 * rate
    );
    if s.disagreements.is_empty() && rate < 0.05 && s.undecided_resolved == s.undecided {
        Ok(summary)
    } else {
        let first: Vec<&str> = s.disagreements.iter().take(3).map(String::as_str).collect();
        Err(format!("{summary}; first: {}", first.join("; ")))
    }
}

fn disk_radii(opts: &VerifyOptions) -> Outcome {
    for m in 1..=8 {
        let t = jordan_block(m, Complex::new(0.0, 0.0)).map_err(|e| e.to_string())?;
        let profile = support_profile(&t, opts.tol.n_theta).map_err(|e| e.to_string())?;
        let r = (PI / (m as f64 + 1.0)).cos();
        let worst = profile.values.iter().map(|v| (v - r).abs()).fold(0.0, f64::max);
        if worst > 1e-6 {
            return Err(format!("m = {m}: support deviates from {r} by {worst:e}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let c = |rng: &mut ChaCha8Rng| Complex::new(rng.gen_range(-3.0..=3.0), rng.gen_range(-3.0..=3.0));
    for _ in 0..100 {
        let (a, b, l) = (c(&mut rng), c(&mut rng), c(&mut rng));
        let m = rng.gen_range(2..=6);
        let j = jordan_block(m, l).map_err(|e| e.to_string())?;
        let x = &ComplexMatrix::identity(m).scale(a) + &j.scale(b);
        let norm = operator_norm(&x);
        let lower = ((a + l * b).norm_sqr() + b.norm_sqr()).sqrt();
        let upper = (a + l * b).norm() + b.norm();
        if norm < lower - 1e-9 || norm > upper + 1e-9 {
            return Err(format!("norm {norm} outside [{lower}, {upper}] for m = {m}"));
        }
    }
    Ok("m ≤ 8 radii, 100 norm samples".into())
}

/// Smallest eigenvalue of `α + β J_k(0) + β̄ J_k(0)*`.
pub fn pencil_min_eigenvalue(k: usize, alpha: f64, beta: Complex) -> Result<f64> {
    let n = jordan_block(k, Complex::new(0.0, 0.0))?;
    let x = &(&ComplexMatrix::identity(k).scale_real(alpha) + &n.scale(beta)) + &n.adjoint().scale(beta.conj());
    Ok(min_eigenvalue(&HermitianMatrix::new(x)?))
}

fn positivity(_: &VerifyOptions) -> Outcome {
    let step = 1e-4;
    for k in 2..=8 {
        let threshold = 0.5 / (PI / (k as f64 + 1.0)).cos();
        // Last grid point with a non-negative minimum eigenvalue; every
        // point before it must be non-negative as well.
        let mut last = 0.0;
        let points = ((threshold + 0.01) / step) as usize;
        for i in 0..=points {
            let beta = i as f64 * step;
            let e = pencil_min_eigenvalue(k, 1.0, Complex::new(beta, 0.0)).map_err(|e| e.to_string())?;
            if e >= 0.0 {
                if last + step < beta - 1e-12 {
                    return Err(format!("k = {k}: positivity returns at |β| = {beta}"));
                }
                last = beta;
            }
        }
        if (last - threshold).abs() > step {
            return Err(format!("k = {k}: sign flips at {last}, expected {threshold}"));
        }
    }
    Ok("k = 2..8".into())
}

fn boundary_keys(r: &EnvelopeReport, f: impl Fn(Complex) -> Complex) -> BTreeSet<(usize, i64, i64)> {
    // Eigenvalues on a 1e-6 lattice so transformed copies compare exactly.
    let key = |z: Complex| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64);
    r.boundary_blocks()
        .iter()
        .map(|&k| {
            let b = r.spec.blocks()[k];
            let (x, y) = key(f(b.eigenvalue));
            (b.size, x, y)
        })
        .collect()
}

fn invariance(opts: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for sample in 0..200 {
        let n = rng.gen_range(2..=5);
        let blocks: Vec<JordanBlockSpec> = (0..n)
            .map(|_| {
                let l = rng.gen_range(-8..=8) as f64 / 4.0;
                JordanBlockSpec::new(rng.gen_range(1..=3), Complex::new(l, 0.0), 1).expect("valid block")
            })
            .collect();
        let spec = JordanSpec::new(blocks.clone()).map_err(|e| e.to_string())?;
        let base = classify_real(&spec, &opts.tol).map_err(|e| e.to_string())?;
        let id = boundary_keys(&base, |z| z);

        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let shift = rng.gen_range(-8..=8) as f64 / 4.0;
        let moved = spec.map_eigenvalues(|z| z * sign + shift).map_err(|e| e.to_string())?;
        let r = classify_real(&moved, &opts.tol).map_err(|e| e.to_string())?;
        if boundary_keys(&r, |z| (z - shift) * sign) != id {
            return Err(format!("sample {sample}: affine map λ ↦ {sign}λ + {shift} changed the boundary set"));
        }

        let mut shuffled = blocks.clone();
        shuffled.shuffle(&mut rng);
        let r = classify_real(&JordanSpec::new(shuffled).map_err(|e| e.to_string())?, &opts.tol)
            .map_err(|e| e.to_string())?;
        if boundary_keys(&r, |z| z) != id {
            return Err(format!("sample {sample}: permutation changed the boundary set"));
        }

        let repeated: Vec<JordanBlockSpec> =
            blocks.iter().map(|b| JordanBlockSpec { multiplicity: rng.gen_range(1..=3), ..*b }).collect();
        let r = classify_real(&JordanSpec::new(repeated).map_err(|e| e.to_string())?, &opts.tol)
            .map_err(|e| e.to_string())?;
        if boundary_keys(&r, |z| z) != id {
            return Err(format!("sample {sample}: multiplicities changed the boundary set"));
        }
    }
    Ok("200 random specs".into())
}

pub fn run(opts: &VerifyOptions) -> Vec<CheckResult> {
    let checks: [(&'static str, Check); 9] = [
        (CHECKS[0], two_block_threshold),
        (CHECKS[1], end_block_table),
        (CHECKS[2], golden_reduced),
        (CHECKS[3], cube_roots),
        (CHECKS[4], nested_sizes),
        (CHECKS[5], sweep),
        (CHECKS[6], disk_radii),
        (CHECKS[7], positivity),
        (CHECKS[8], invariance),
    ];
    checks
        .into_iter()
        .filter(|(name, _)| opts.only.is_empty() || opts.only.iter().any(|o| o == name))
        .map(|(name, check)| {
            let start = Instant::now();
            let outcome = check(opts);
            let seconds = start.elapsed().as_secs_f64();
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult { name, passed, detail, seconds }
        })
        .collect()
}
