//! `fibpow linform`: batch evaluation of linear forms for instances supplied
//! as JSON lines.

use std::io::Read;
use std::path::PathBuf;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use fibpow_core::linform::{certified_forms, InstanceAB, PowerClaim, Verdict};
use fibpow_core::zeck::ZeckendorfRep;

use crate::config::{self, FileConfig, Format};
use crate::report::{real_fields, Sink};
use crate::{OutputOpts, PrecisionOpts, EXIT_OK, EXIT_UNDECIDED, EXIT_VERIFY_FAILED};

/// Accepts numbers or decimal strings for the big value `y`.
#[derive(Deserialize)]
#[serde(untagged)]
enum BigField {
    Int(u64),
    Str(String),
}

impl BigField {
    fn to_bigint(&self) -> Result<BigInt, String> {
        match self {
            BigField::Int(v) => Ok(BigInt::from(*v)),
            BigField::Str(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        }
    }
}

#[derive(Deserialize)]
struct InstanceLine {
    y: BigField,
    #[serde(default)]
    indices: Option<Vec<u64>>,
    #[serde(default)]
    a: Option<u32>,
    #[serde(default)]
    n: Option<u64>,
    #[serde(default)]
    m: Option<u64>,
}

#[derive(Serialize)]
struct FormRecord {
    instance: usize,
    tag: String,
    mid: String,
    radius: String,
    bound: String,
    x: u64,
    applicable: bool,
    verdict: &'static str,
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Certified => "certified",
        Verdict::Violated => "violated",
        Verdict::Undecided => "undecided",
        Verdict::NotApplicable => "not-applicable",
    }
}

fn build_instance(line: &InstanceLine) -> Result<InstanceAB, String> {
    let y = line.y.to_bigint()?;
    let power = match (line.a, line.n, line.m) {
        (Some(a), Some(n), Some(m)) => Some(PowerClaim { a, n, m }),
        (None, None, None) => None,
        _ => return Err("a, n, m must be given together".into()),
    };
    let rep = match &line.indices {
        Some(idx) => ZeckendorfRep::new(idx.clone()).map_err(|e| e.to_string())?,
        None => fibpow_core::zeck::zeckendorf(&y).map_err(|e| e.to_string())?,
    };
    InstanceAB::new(y, rep, power).map_err(|e| e.to_string())
}

pub fn run(
    cfg: &FileConfig,
    input: Option<PathBuf>,
    precision: PrecisionOpts,
    output: OutputOpts,
) -> Result<u8, String> {
    let prec = config::resolve_precision(&precision, cfg)?;
    let format = config::resolve_format(&output, cfg)?;
    let input = match input {
        Some(p) => Some(p),
        None => cfg.get::<PathBuf>("input")?,
    };
    let text = match &input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("cannot read stdin: {e}"))?;
            buf
        }
    };
    let mut sink = Sink::create(&output, format)?;
    if format == Format::Csv {
        sink.line("instance,tag,mid,radius,bound,x,applicable,verdict")?;
    }
    let mut any_undecided = false;
    let mut any_violated = false;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: InstanceLine =
            serde_json::from_str(line).map_err(|e| format!("line {}: {e}", i + 1))?;
        let inst = build_instance(&parsed).map_err(|e| format!("line {}: {e}", i + 1))?;
        for f in certified_forms(&inst, prec.start, prec.cap) {
            any_undecided |= f.verdict == Verdict::Undecided;
            any_violated |= f.verdict == Verdict::Violated;
            let (mid, radius) = real_fields(&f.value, 17);
            let rec = FormRecord {
                instance: i,
                tag: f.tag.to_string(),
                mid,
                radius,
                bound: f.claimed_bound.to_decimal(8),
                x: f.exponent,
                applicable: f.applicable,
                verdict: verdict_name(f.verdict),
            };
            match format {
                Format::Json => sink.json(&rec)?,
                Format::Csv => sink.line(&format!(
                    "{},{},{},{},{},{},{},{}",
                    rec.instance,
                    rec.tag,
                    rec.mid,
                    rec.radius,
                    rec.bound,
                    rec.x,
                    rec.applicable,
                    rec.verdict
                ))?,
                Format::Human => sink.line(&format!(
                    "instance {}: {:>4}  value {} (radius {})  bound {}  X={}  {}",
                    rec.instance, rec.tag, rec.mid, rec.radius, rec.bound, rec.x, rec.verdict
                ))?,
            }
        }
    }
    sink.finish()?;
    Ok(if any_violated {
        EXIT_VERIFY_FAILED
    } else if any_undecided {
        EXIT_UNDECIDED
    } else {
        EXIT_OK
    })
}
