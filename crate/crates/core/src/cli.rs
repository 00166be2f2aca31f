//! Command-line front end. Exit codes: 0 decided, 1 parse or I/O error,
//! 2 structural (reducible family, single block, size guards), 3 some
//! verdict undecided, 4 a verify check failed.

use std::fs;
use std::io::Read as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classify::{classify, classify_infinite_same_eigenvalue, Boundary, EnvelopeReport};
use crate::config::Tolerances;
use crate::error::Error;
use crate::io::{
    infinite_report_json, membership_json, numrange_csv, parse_spec, report_json, round12, to_pretty, SpecInput,
};
use crate::jordan::{normalize, JordanSpec};
use crate::oracle::{in_matricial_range, RangeMembership};
use crate::verify::{self, VerifyOptions, CHECKS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_STRUCTURAL: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "jordan-envelope", version, about = "Boundary representations and C*-envelopes of span{1, T, T*} for Jordan operators T")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify every block and report the envelope.
    Classify(SpecArgs),
    /// Sample the boundary of the numerical range.
    Numrange(SpecArgs),
    /// Decide whether one block lies in the matricial range of the others.
    CheckMembership(MembershipArgs),
    /// Run the built-in checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// A bare number sets the oracle and certificate tolerances; `name=value`
    /// sets one named tolerance. Repeatable.
    #[arg(long)]
    pub tol: Vec<String>,
    /// Number of support directions.
    #[arg(long)]
    pub n_theta: Option<usize>,
    /// Oracle iteration budget.
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Spec document; `-` or absent reads stdin.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct MembershipArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Index of the block in the input document.
    #[arg(long)]
    pub block: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Threshold radius used by the two-block check (negative control).
    #[arg(long, default_value_t = 0.5)]
    pub inject_threshold: f64,
    /// Run only the named checks. Repeatable.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(CHECKS))]
    pub only: Vec<String>,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Reducible(_) | Error::SingleBlock | Error::DimensionGuard { .. } | Error::ChoiGuard { .. } => {
                EXIT_STRUCTURAL
            }
            _ => EXIT_PARSE,
        };
        Failure { code, message: e.to_string() }
    }
}

type Run = std::result::Result<i32, Failure>;

pub fn tolerances(common: &Common) -> std::result::Result<Tolerances, Error> {
    let mut tol = Tolerances::DEFAULT;
    for item in &common.tol {
        match item.split_once('=') {
            None => {
                let v: f64 = item.parse().map_err(|_| Error::Parse(format!("--tol {item}: not a number")))?;
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Parse(format!("--tol {item}: must be positive")));
                }
                tol.oracle_feasible = v;
                tol.certificate = v;
            }
            Some((name, value)) => {
                let mut fields = serde_json::to_value(tol).expect("tolerances serialize");
                let slot = fields
                    .get_mut(name)
                    .ok_or_else(|| Error::Parse(format!("--tol: unknown tolerance {name:?}")))?;
                *slot = serde_json::from_str(value).map_err(|_| Error::Parse(format!("--tol {item}: bad value")))?;
                tol = serde_json::from_value(fields).map_err(|e| Error::Parse(format!("--tol {item}: {e}")))?;
            }
        }
    }
    if let Some(n) = common.n_theta {
        tol.n_theta = n;
    }
    if let Some(n) = common.max_iter {
        tol.oracle_max_iter = n;
    }
    Ok(tol)
}

fn meta(command: &str, tol: &Tolerances) -> Value {
    json!({
        "tool": "jordan-envelope",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "tolerances": tol,
    })
}

fn read_input(path: &Option<PathBuf>) -> std::result::Result<String, Error> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Io(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> std::result::Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finite(input: SpecInput, command: &str) -> std::result::Result<JordanSpec, Failure> {
    match input {
        SpecInput::Finite(s) => Ok(s),
        SpecInput::Infinite { .. } => Err(Failure {
            code: EXIT_STRUCTURAL,
            message: format!("{command} needs a finite spec; infinite sums are only classified"),
        }),
    }
}

fn csv_number(x: f64) -> String {
    serde_json::Number::from_f64(round12(x)).map(|n| n.to_string()).unwrap_or_default()
}

fn report_csv(report: &EnvelopeReport) -> String {
    let mut out = String::from("block,m,re,im,d,boundary,rule,margin\n");
    for v in &report.verdicts {
        let b = report.spec.blocks()[v.block];
        let boundary = match v.boundary {
            Boundary::Yes => "true",
            Boundary::No => "false",
            Boundary::Undecided => "undecided",
        };
        let margin = v.margin.map(csv_number).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{boundary},{},{margin}\n",
            v.block,
            b.size,
            csv_number(b.eigenvalue.re),
            csv_number(b.eigenvalue.im),
            b.multiplicity,
            v.rule.name()
        ));
    }
    out
}

fn cmd_classify(args: &SpecArgs) -> Run {
    let tol = tolerances(&args.common)?;
    let input = parse_spec(&read_input(&args.input)?)?;
    let meta = meta("classify", &tol);
    let format = args.common.format.unwrap_or(Format::Json);
    let (text, undecided) = match input {
        SpecInput::Infinite { spec, .. } => {
            let summand = classify_infinite_same_eigenvalue(&spec);
            if format == Format::Csv {
                (format!("envelope\n{summand}\n"), false)
            } else {
                (to_pretty(&infinite_report_json(summand, meta)), false)
            }
        }
        SpecInput::Finite(spec) => {
            let report = classify(&spec, &tol)?;
            let text = match format {
                Format::Json => to_pretty(&report_json(&report, meta)),
                Format::Csv => report_csv(&report),
            };
            (text, report.has_undecided())
        }
    };
    write_output(&args.common.output, &text)?;
    Ok(if undecided { EXIT_UNDECIDED } else { EXIT_OK })
}

fn cmd_numrange(args: &SpecArgs) -> Run {
    let tol = tolerances(&args.common)?;
    let spec = finite(parse_spec(&read_input(&args.input)?)?, "numrange")?;
    let csv = numrange_csv(&spec, tol.n_theta)?;
    let text = match args.common.format.unwrap_or(Format::Csv) {
        Format::Csv => csv,
        Format::Json => {
            // Same samples, one array of [theta, x, y] rows per section.
            let mut sections: Vec<Value> = Vec::new();
            for line in csv.lines().skip(1) {
                if let Some(title) = line.strip_prefix("# ") {
                    sections.push(json!({ "section": title, "samples": [] }));
                } else {
                    let row: Vec<f64> = line.split(',').map(|x| x.parse().expect("numbers we wrote")).collect();
                    let last = sections.last_mut().expect("hull section comes first");
                    last["samples"].as_array_mut().expect("array").push(json!(row));
                }
            }
            to_pretty(&json!({ "sections": sections, "meta": meta("numrange", &tol) }))
        }
    };
    write_output(&args.common.output, &text)?;
    Ok(EXIT_OK)
}

fn cmd_check_membership(args: &MembershipArgs) -> Run {
    let tol = tolerances(&args.spec.common)?;
    let spec = finite(parse_spec(&read_input(&args.spec.input)?)?, "check-membership")?;
    let normalized = normalize(&spec);
    let k = normalized.block_of_input(args.block)?;
    if normalized.len() < 2 {
        return Err(Error::SingleBlock.into());
    }
    let verdict = in_matricial_range(normalized.spec(), k, &tol)?;
    let v = membership_json(&verdict, args.block, &normalized, meta("check-membership", &tol));
    write_output(&args.spec.common.output, &to_pretty(&v))?;
    Ok(if verdict.membership == RangeMembership::Unknown { EXIT_UNDECIDED } else { EXIT_OK })
}

fn cmd_verify(args: &VerifyArgs) -> Run {
    let tol = tolerances(&args.common)?;
    let opts = VerifyOptions { tol, threshold: args.inject_threshold, only: args.only.clone(), seed: args.seed };
    let results = verify::run(&opts);
    let all = results.iter().all(|r| r.passed);
    let text = match args.common.format.unwrap_or(Format::Csv) {
        Format::Json => to_pretty(&json!({
            "checks": results.iter().map(|r| json!({
                "name": r.name, "passed": r.passed, "detail": r.detail, "seconds": round12(r.seconds),
            })).collect::<Vec<_>>(),
            "passed": all,
            "meta": meta("verify", &tol),
        })),
        Format::Csv => {
            let mut out = String::new();
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("{status}  {:<22} {:>8.2} s  {}\n", r.name, r.seconds, r.detail));
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            out.push_str(&format!("{} checks, {failed} failed\n", results.len()));
            out
        }
    };
    write_output(&args.common.output, &text)?;
    Ok(if all { EXIT_OK } else { EXIT_VERIFY })
}

pub fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Numrange(a) => cmd_numrange(a),
        Command::CheckMembership(a) => cmd_check_membership(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

/// Parses the process arguments, runs, and returns the exit code. Usage
/// errors share code 1 with malformed input.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common(tol: &[&str]) -> Common {
        Common { output: None, tol: tol.iter().map(|s| s.to_string()).collect(), n_theta: None, max_iter: Some(50), format: None }
    }

    #[test]
    fn tolerance_flags() {
        let t = tolerances(&common(&["1e-8", "n_theta=64"])).unwrap();
        assert_eq!((t.certificate, t.oracle_feasible, t.n_theta, t.oracle_max_iter), (1e-8, 1e-8, 64, 50));
        assert!(tolerances(&common(&["nope=1"])).is_err());
        assert!(tolerances(&common(&["n_theta=0.5"])).is_err());
        assert!(tolerances(&common(&["-1"])).is_err());
    }

    #[test]
    fn exit_codes_for_errors() {
        assert_eq!(Failure::from(Error::SingleBlock).code, EXIT_STRUCTURAL);
        assert_eq!(Failure::from(Error::Parse("x".into())).code, EXIT_PARSE);
    }
}
