//! Spec documents in, reports out.
//!
//! Input: `{"blocks":[{"m":2,"re":0.0,"im":0.0,"d":1}, ...]}`, optionally with
//! `"infinite":{"re":..,"im":..,"bounded":bool,"max_m":int}` for an infinite
//! sum of blocks at one eigenvalue. `im` defaults to 0 and `d` to 1.
//!
//! JSON output rounds every float to 12 significant digits and contains
//! nothing that depends on the run (no timestamps), so equal inputs give
//! byte-identical reports.

use std::fmt::Write as _;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::classify::{Boundary, EnvelopeReport, Summand};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::jordan::{InfiniteJordanSpec, InfiniteSizes, JordanBlockSpec, JordanSpec, NormalizedSpec};
use crate::matrix::Complex;
use crate::numrange::{spec_disks, HullOfDisks};
use crate::oracle::{MembershipVerdict, RangeMembership};

fn one() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockEntry {
    m: usize,
    re: f64,
    #[serde(default)]
    im: f64,
    #[serde(default = "one")]
    d: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InfiniteEntry {
    re: f64,
    #[serde(default)]
    im: f64,
    bounded: bool,
    max_m: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default)]
    blocks: Vec<BlockEntry>,
    infinite: Option<InfiniteEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpecInput {
    Finite(JordanSpec),
    /// Blocks listed next to an infinite sum are read as its generating
    /// sizes and must share its eigenvalue.
    Infinite { spec: InfiniteJordanSpec, generators: Option<JordanSpec> },
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

pub fn parse_spec(text: &str) -> Result<SpecInput> {
    let doc: Document = serde_json::from_str(text).map_err(parse_err)?;
    let blocks = doc
        .blocks
        .iter()
        .map(|b| JordanBlockSpec::new(b.m, Complex::new(b.re, b.im), b.d))
        .collect::<Result<Vec<_>>>()
        .map_err(parse_err)?;
    let generators = if blocks.is_empty() { None } else { Some(JordanSpec::new(blocks).map_err(parse_err)?) };

    let Some(inf) = doc.infinite else {
        return generators.map(SpecInput::Finite).ok_or_else(|| Error::Parse("no blocks given".into()));
    };
    let eigenvalue = Complex::new(inf.re, inf.im);
    if !(inf.re.is_finite() && inf.im.is_finite()) {
        return Err(Error::Parse("non-finite eigenvalue in \"infinite\"".into()));
    }
    let largest = generators.as_ref().and_then(|g| g.blocks().iter().map(|b| b.size).max());
    if let Some(g) = &generators {
        let tol = Tolerances::DEFAULT.eigenvalue_merge;
        if g.blocks().iter().any(|b| (b.eigenvalue - eigenvalue).norm() > tol) {
            return Err(Error::Parse("blocks next to \"infinite\" must share its eigenvalue".into()));
        }
    }
    let sizes = match (inf.bounded, inf.max_m.or(largest)) {
        (false, _) => InfiniteSizes::Unbounded,
        (true, None) => return Err(Error::Parse("bounded infinite sum needs \"max_m\" or blocks".into())),
        (true, Some(0)) => return Err(Error::Parse("\"max_m\" must be at least 1".into())),
        (true, Some(max)) => {
            if largest.is_some_and(|l| l > max) {
                return Err(Error::Parse(format!("a listed block exceeds \"max_m\" = {max}")));
            }
            InfiniteSizes::Bounded { max }
        }
    };
    Ok(SpecInput::Infinite { spec: InfiniteJordanSpec { eigenvalue, sizes }, generators })
}

/// Rounds to 12 significant digits; `-0` becomes `0`.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse::<f64>().map(|y| y + 0.0).unwrap_or(x)
}

fn number(x: f64) -> Value {
    // JSON has no infinities; they only appear as "no finite margin".
    serde_json::Number::from_f64(round12(x)).map(Value::Number).unwrap_or(Value::Null)
}

fn optional(x: Option<f64>) -> Value {
    x.map(number).unwrap_or(Value::Null)
}

fn summands(s: &[Summand]) -> Value {
    Value::Array(s.iter().map(|x| Value::String(x.to_string())).collect())
}

fn block_fields(spec: &NormalizedSpec, k: usize) -> Map<String, Value> {
    let b = spec.blocks()[k];
    let mut m = Map::new();
    m.insert("m".into(), json!(b.size));
    m.insert("re".into(), number(b.eigenvalue.re));
    m.insert("im".into(), number(b.eigenvalue.im));
    m.insert("d".into(), json!(b.multiplicity));
    m.insert("inputs".into(), json!(spec.origins(k)));
    m
}

pub fn report_json(report: &EnvelopeReport, meta: Value) -> Value {
    let blocks: Vec<Value> = report
        .verdicts
        .iter()
        .map(|v| {
            let mut m = block_fields(&report.spec, v.block);
            let boundary = match v.boundary {
                Boundary::Yes => json!(true),
                Boundary::No => json!(false),
                Boundary::Undecided => json!("undecided"),
            };
            m.insert("boundary".into(), boundary);
            m.insert("rule".into(), json!(v.rule.name()));
            m.insert("margin".into(), optional(v.margin));
            Value::Object(m)
        })
        .collect();
    json!({
        "blocks": blocks,
        "envelope": summands(&report.envelope()),
        "envelope_upper": summands(&report.envelope_upper()),
        "reduced": report.reduced(),
        "meta": meta,
    })
}

/// Report for an infinite sum: only the symbolic envelope.
pub fn infinite_report_json(summand: Summand, meta: Value) -> Value {
    json!({
        "blocks": [],
        "envelope": summands(&[summand]),
        "envelope_upper": summands(&[summand]),
        "reduced": Value::Null,
        "meta": meta,
    })
}

/// `block` is the caller's input index; the verdict itself refers to the
/// normalized spec.
pub fn membership_json(v: &MembershipVerdict, block: usize, spec: &NormalizedSpec, meta: Value) -> Value {
    let member = match v.membership {
        RangeMembership::In => json!(true),
        RangeMembership::Out => json!(false),
        RangeMembership::Unknown => json!("unknown"),
    };
    json!({
        "block": block,
        "normalized": Value::Object(block_fields(spec, v.block)),
        "in_matricial_range": member,
        "rule": v.rule.name(),
        "margin": optional(v.margin),
        "meta": meta,
    })
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values built from finite numbers serialize");
    s.push('\n');
    s
}

/// `theta,x,y` samples of the hull of the block numerical ranges, then, for
/// two or more blocks, one `#`-headed section per block disk.
pub fn numrange_csv(spec: &JordanSpec, n_theta: usize) -> Result<String> {
    let disks = spec_disks(spec);
    let mut out = String::from("theta,x,y\n# hull\n");
    let section = |out: &mut String, hull: &HullOfDisks| -> Result<()> {
        for (th, z) in hull.boundary_sample(n_theta)? {
            writeln!(out, "{th:.9},{:.9},{:.9}", z.re, z.im).expect("writing to a String");
        }
        Ok(())
    };
    section(&mut out, &HullOfDisks::new(disks.clone())?)?;
    if disks.len() > 1 {
        for (k, (b, d)) in spec.blocks().iter().zip(&disks).enumerate() {
            writeln!(out, "# block {k} m={} re={} im={} radius={:.9}", b.size, b.eigenvalue.re, b.eigenvalue.im, d.radius)
                .expect("writing to a String");
            section(&mut out, &HullOfDisks::new(vec![*d])?)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_defaults_and_rejects_garbage() {
        let s = parse_spec(r#"{"blocks":[{"m":2,"re":0},{"m":1,"re":0.8,"im":0,"d":2}]}"#).unwrap();
        let SpecInput::Finite(s) = s else { panic!("finite spec expected") };
        assert_eq!(s.blocks()[0].multiplicity, 1);
        assert_eq!(s.blocks()[1].multiplicity, 2);
        for bad in ["{", r#"{"blocks":[]}"#, r#"{"blocks":[{"m":0,"re":0}]}"#, r#"{"blocks":[{"m":1,"re":0,"x":1}]}"#] {
            assert!(matches!(parse_spec(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn parses_infinite_sums() {
        let s = parse_spec(r#"{"infinite":{"re":0,"im":0,"bounded":false}}"#).unwrap();
        assert!(matches!(s, SpecInput::Infinite { spec: InfiniteJordanSpec { sizes: InfiniteSizes::Unbounded, .. }, .. }));
        let s = parse_spec(r#"{"blocks":[{"m":3,"re":1}],"infinite":{"re":1,"bounded":true}}"#).unwrap();
        assert!(matches!(s, SpecInput::Infinite { spec: InfiniteJordanSpec { sizes: InfiniteSizes::Bounded { max: 3 }, .. }, .. }));
        assert!(parse_spec(r#"{"blocks":[{"m":3,"re":2}],"infinite":{"re":1,"bounded":true}}"#).is_err());
        assert!(parse_spec(r#"{"infinite":{"re":1,"bounded":true}}"#).is_err());
    }

    #[test]
    fn rounding() {
        assert_eq!(round12(0.1 + 0.2), 0.3);
        assert_eq!(round12(-0.0).to_string(), "0");
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
    }

    #[test]
    fn csv_sections() {
        let s = JordanSpec::real(&[(2, 0.0)]).unwrap();
        let csv = numrange_csv(&s, 720).unwrap();
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 721);
        assert!(!csv.contains("# block"));
        let s = JordanSpec::real(&[(2, 0.0), (1, 1.0)]).unwrap();
        let csv = numrange_csv(&s, 256).unwrap();
        assert_eq!(csv.matches("# block").count(), 2);
        assert_eq!(csv.lines().count(), 2 + 256 + 2 * 257);
    }
}
