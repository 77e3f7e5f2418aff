//! Report sinks: stdout or file, with an optional timestamp header and
//! deterministic rendering otherwise.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use fibpow_core::real::Real;

use crate::config::Format;
use crate::OutputOpts;

pub struct Sink {
    inner: Box<dyn Write>,
    pub format: Format,
}

impl Sink {
    pub fn create(output: &OutputOpts, format: Format) -> Result<Sink, String> {
        let inner: Box<dyn Write> = match &output.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?,
            )),
            None => Box::new(io::stdout().lock()),
        };
        let mut sink = Sink { inner, format };
        if !output.no_timestamp {
            sink.timestamp_header()?;
        }
        Ok(sink)
    }

    fn timestamp_header(&mut self) -> Result<(), String> {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        match self.format {
            Format::Json => self.line(&format!("{{\"generated_at_epoch\":{secs}}}")),
            Format::Csv | Format::Human => self.line(&format!("# generated at epoch {secs}")),
        }
    }

    pub fn line(&mut self, s: &str) -> Result<(), String> {
        writeln!(self.inner, "{s}").map_err(|e| format!("write failed: {e}"))
    }

    pub fn json<T: serde::Serialize>(&mut self, value: &T) -> Result<(), String> {
        let s = serde_json::to_string(value).map_err(|e| format!("serialize failed: {e}"))?;
        self.line(&s)
    }

    pub fn finish(mut self) -> Result<(), String> {
        self.inner
            .flush()
            .map_err(|e| format!("flush failed: {e}"))
    }
}

/// Decimal rendering of an enclosure midpoint with a radius tag.
pub fn real_fields(v: &Real, sig: usize) -> (String, String) {
    (v.to_decimal(sig), v.rad().to_decimal(3))
}

/// Base-10 logarithm of a positive big integer, as f64 (display only).
pub fn log10_of(n: &num_bigint::BigInt) -> f64 {
    let p = 96;
    let ln_n = fibpow_core::real::log_int(n, p).expect("positive");
    let ln_10 = fibpow_core::real::log_int(&num_bigint::BigInt::from(10), p).expect("positive");
    ln_n.div(&ln_10, p).map(|v| v.to_f64()).unwrap_or(f64::NAN)
}
