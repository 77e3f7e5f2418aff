//! `fibpow bound`: per-weight certified upper bounds.

use num_traits::ToPrimitive;
use serde::Serialize;

use fibpow_core::pipeline::{
    self, asymptotic_shape_exponent, finish, path_bounds, simplified_n1_bound, FinishMethod,
    PipelineError,
};

use crate::config::{self, FileConfig, Format};
use crate::report::{log10_of, real_fields, Sink};
use crate::{OutputOpts, PrecisionOpts, EXIT_CONFIG, EXIT_OK, EXIT_UNDECIDED};

#[derive(Serialize)]
struct PathRecord {
    path: String,
    coeff: String,
    exponent: u32,
}

#[derive(Serialize)]
struct BoundRecord {
    k: u64,
    paths: Vec<PathRecord>,
    dominant_path: String,
    final_coeff: String,
    final_exponent: u32,
    method: String,
    delta: Option<String>,
    n_bound: String,
    n_bound_digits: usize,
    n_bound_log10: f64,
    log_ya_bound: String,
    log_ya_radius: String,
    iterations: u32,
    parity_floor_applied: bool,
    simplified_coeff_log10: f64,
    simplified_log_exponent: String,
    simplified_printed_k_exponent: String,
    simplified_recomputed_k_exponent: String,
    simplified_exponents_disagree: bool,
    asymptotic_shape_exponent: Option<String>,
}

#[allow(clippy::too_many_arguments)]
pub fn run(
    cfg: &FileConfig,
    k: Option<String>,
    method: Option<String>,
    delta: Option<String>,
    epsilon: Option<String>,
    full_decimal: bool,
    precision: PrecisionOpts,
    output: OutputOpts,
) -> Result<u8, String> {
    let prec = config::resolve_precision(&precision, cfg)?;
    let format = config::resolve_format(&output, cfg)?;
    let k_spec = match k {
        Some(s) => s,
        None => cfg
            .get::<String>("k")?
            .ok_or("bound requires --k (a weight or an inclusive range)")?,
    };
    let (k_lo, k_hi) = config::parse_k_range(&k_spec)?;
    let method_name = match method {
        Some(m) => m,
        None => cfg
            .get::<String>("method")?
            .unwrap_or_else(|| "iteration".into()),
    };
    let methods: Vec<FinishMethod> = match method_name.as_str() {
        "iteration" => vec![FinishMethod::Iteration],
        "closed-form" => vec![FinishMethod::ClosedForm],
        "both" => vec![FinishMethod::Iteration, FinishMethod::ClosedForm],
        other => return Err(format!("unknown method {other:?}")),
    };
    let delta = match delta {
        Some(d) => Some(config::parse_rational(&d)?),
        None => match cfg.get::<String>("delta")? {
            Some(d) => Some(config::parse_rational(&d)?),
            None => None,
        },
    };
    let epsilon = match epsilon {
        Some(e) => Some(config::parse_rational(&e)?),
        None => None,
    };
    let full_decimal = full_decimal || cfg.get_flag("full-decimal")?;

    let mut sink = Sink::create(&output, format)?;
    if format == Format::Csv {
        sink.line(
            "k,method,delta,dominant_path,final_exponent,n_bound_digits,n_bound_log10,iterations",
        )?;
    }
    let mut undecided = false;
    for k in k_lo..=k_hi {
        for &m in &methods {
            let delta_arg = if m == FinishMethod::ClosedForm {
                Some(delta.clone().unwrap_or_else(|| {
                    num_rational::BigRational::new(1.into(), 2.into())
                }))
            } else {
                None
            };
            let fb = match finish(k, m, delta_arg.as_ref(), prec.start, prec.cap) {
                Ok(fb) => fb,
                Err(PipelineError::PrecisionExceeded) => {
                    eprintln!("k={k}: undecided at the precision cap {}", prec.cap);
                    undecided = true;
                    continue;
                }
                Err(e) => {
                    eprintln!("k={k}: {e}");
                    return Ok(EXIT_CONFIG);
                }
            };
            emit(&mut sink, format, &fb, epsilon.as_ref(), full_decimal)?;
        }
    }
    sink.finish()?;
    Ok(if undecided { EXIT_UNDECIDED } else { EXIT_OK })
}

fn emit(
    sink: &mut Sink,
    format: Format,
    fb: &pipeline::FinalBound,
    epsilon: Option<&num_rational::BigRational>,
    full_decimal: bool,
) -> Result<(), String> {
    let digits = fb.n_bound.to_string().len();
    let l10 = log10_of(&fb.n_bound);
    let (ya_mid, ya_rad) = real_fields(&fb.log_ya_bound, 20);
    let simplified = simplified_n1_bound(fb.k);
    let method = match fb.method {
        FinishMethod::Iteration => "iteration",
        FinishMethod::ClosedForm => "closed-form",
    };
    match format {
        Format::Json => {
            let rec = BoundRecord {
                k: fb.k,
                paths: path_bounds(fb.k)
                    .into_iter()
                    .map(|(l, b)| PathRecord {
                        path: l.to_string(),
                        coeff: b.coeff.to_string(),
                        exponent: b.exponent,
                    })
                    .collect(),
                dominant_path: fb.dominant_path.to_string(),
                final_coeff: fb.final_coeff.to_string(),
                final_exponent: fb.final_exponent,
                method: method.into(),
                delta: fb.delta.as_ref().map(|d| d.to_string()),
                n_bound: fb.n_bound.to_string(),
                n_bound_digits: digits,
                n_bound_log10: l10,
                log_ya_bound: ya_mid,
                log_ya_radius: ya_rad,
                iterations: fb.iterations,
                parity_floor_applied: fb.parity_floor_applied,
                simplified_coeff_log10: {
                    let num = simplified.coeff_upper.numer().clone();
                    log10_of(&num)
                        - simplified
                            .coeff_upper
                            .denom()
                            .to_f64()
                            .map(f64::log10)
                            .unwrap_or(0.0)
                },
                simplified_log_exponent: simplified.log_exponent.to_string(),
                simplified_printed_k_exponent: simplified.printed_k_exponent.to_string(),
                simplified_recomputed_k_exponent: simplified.recomputed_k_exponent.to_string(),
                simplified_exponents_disagree: simplified.exponents_disagree(),
                asymptotic_shape_exponent: epsilon
                    .map(|e| asymptotic_shape_exponent(fb.k, e).to_string()),
            };
            sink.json(&rec)
        }
        Format::Csv => sink.line(&format!(
            "{},{},{},{},{},{},{:.6},{}",
            fb.k,
            method,
            fb.delta
                .as_ref()
                .map(|d| d.to_string())
                .unwrap_or_default(),
            fb.dominant_path,
            fb.final_exponent,
            digits,
            l10,
            fb.iterations
        )),
        Format::Human => {
            sink.line(&format!("k = {} [{}]", fb.k, method))?;
            sink.line(&format!(
                "  final inequality: n < c * (log n)^{} with log10(c) ~ {:.3}",
                fb.final_exponent,
                log10_of(fb.final_coeff.numer())
            ))?;
            sink.line(&format!("  dominant path:    {}", fb.dominant_path))?;
            sink.line(&format!(
                "  n_bound:          10^{:.6}  ({} digits)",
                l10, digits
            ))?;
            if full_decimal {
                sink.line(&format!("  n_bound exactly:  {}", fb.n_bound))?;
            }
            sink.line(&format!("  log(y^a) bound:   {ya_mid} (radius {ya_rad})"))?;
            if let Some(d) = &fb.delta {
                sink.line(&format!("  delta:            {d}"))?;
            }
            if simplified.exponents_disagree() {
                sink.line(&format!(
                    "  note: simplified closed form prints k-exponent {} but the exponent arithmetic gives {}; the certified path uses the exact per-path maximum instead",
                    simplified.printed_k_exponent, simplified.recomputed_k_exponent
                ))?;
            }
            if let Some(e) = epsilon {
                sink.line(&format!(
                    "  asymptotic shape: k^((3+eps) k^2) exponent = {} at eps = {e}",
                    asymptotic_shape_exponent(fb.k, e)
                ))?;
            }
            Ok(())
        }
    }
}
