//! Optional key=value config file and shared option resolution. Flags always
//! take precedence over file values.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::{OutputOpts, PrecisionOpts};

#[derive(Default)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let mut values = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("{}:{}: expected key=value", path.display(), i + 1))?;
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, String> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| format!("config key {key}: cannot parse {raw:?}")),
        }
    }

    pub fn get_flag(&self, key: &str) -> Result<bool, String> {
        Ok(self.get::<bool>(key)?.unwrap_or(false))
    }
}

/// Resolved precision window.
#[derive(Clone, Copy, Debug)]
pub struct Precision {
    pub start: u32,
    pub cap: u32,
}

/// Default starting precision and cap (bits).
pub const DEFAULT_PRECISION: u32 = 64;
pub const DEFAULT_PRECISION_CAP: u32 = 1 << 16;

pub fn resolve_precision(opts: &PrecisionOpts, cfg: &FileConfig) -> Result<Precision, String> {
    let start = match opts.precision {
        Some(v) => v,
        None => cfg.get("precision")?.unwrap_or(DEFAULT_PRECISION),
    };
    let cap = match opts.precision_cap {
        Some(v) => v,
        None => cfg.get("precision-cap")?.unwrap_or(DEFAULT_PRECISION_CAP),
    };
    if start < 16 {
        return Err("precision must be at least 16 bits".into());
    }
    if cap < start {
        return Err("precision-cap must be at least the starting precision".into());
    }
    Ok(Precision { start, cap })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Human,
}

pub fn resolve_format(opts: &OutputOpts, cfg: &FileConfig) -> Result<Format, String> {
    let name = match &opts.format {
        Some(f) => f.clone(),
        None => cfg.get::<String>("format")?.unwrap_or_else(|| "human".into()),
    };
    match name.as_str() {
        "json" => Ok(Format::Json),
        "csv" => Ok(Format::Csv),
        "human" => Ok(Format::Human),
        other => Err(format!("unknown format {other:?}")),
    }
}

/// Parse `p/q`, a decimal like `0.5`, or an integer, into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let den: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if den == BigInt::from(0) {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.starts_with('-');
        let digits: BigInt = format!("{}{}", int_part.trim_start_matches('-'), frac_part)
            .parse()
            .map_err(|_| format!("bad decimal {s:?}"))?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let r = BigRational::new(digits, den);
        return Ok(if neg { -r } else { r });
    }
    let v: BigInt = s.parse().map_err(|_| format!("bad rational {s:?}"))?;
    Ok(BigRational::from_integer(v))
}

/// Parse `K` or an inclusive range `LO..HI` / `LO..=HI`.
pub fn parse_k_range(s: &str) -> Result<(u64, u64), String> {
    let s = s.trim();
    if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: u64 = lo.parse().map_err(|_| format!("bad k range {s:?}"))?;
        let hi: u64 = hi.parse().map_err(|_| format!("bad k range {s:?}"))?;
        if lo == 0 || hi < lo {
            return Err(format!("k range must satisfy 1 <= lo <= hi, got {s:?}"));
        }
        return Ok((lo, hi));
    }
    let k: u64 = s.parse().map_err(|_| format!("bad k {s:?}"))?;
    if k == 0 {
        return Err("k must be at least 1".into());
    }
    Ok((k, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_forms() {
        assert_eq!(
            parse_rational("1/2").unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
        assert_eq!(
            parse_rational("0.25").unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(4))
        );
        assert_eq!(
            parse_rational("3").unwrap(),
            BigRational::from_integer(BigInt::from(3))
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn k_ranges() {
        assert_eq!(parse_k_range("5").unwrap(), (5, 5));
        assert_eq!(parse_k_range("1..3").unwrap(), (1, 3));
        assert_eq!(parse_k_range("2..=4").unwrap(), (2, 4));
        assert!(parse_k_range("0").is_err());
        assert!(parse_k_range("3..1").is_err());
    }
}
