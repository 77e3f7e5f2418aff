//! `fibpow verify`: the invariant battery. Every suite re-derives its facts
//! with exact or certified arithmetic and reports pass/fail; any failure
//! exits nonzero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use fibpow_core::fib::{fib, lucas};
use fibpow_core::linform::{
    basic_forms, eliminated_forms, max_star_coefficient, verify_nonzero, FormTag, InstanceAB,
    PowerClaim, Verdict,
};
use fibpow_core::matveev::certify_step_constant;
use fibpow_core::pipeline::{
    closed_form_log_bound, crossover_closed_form, crossover_exponent, finish, finish_rhs,
    max_over_paths, walk_case1, walk_case2, FinishMethod,
};
use fibpow_core::quad::{alpha_pow, alpha_pow_signed, v_sqrt5, NonvanishingOutcome, QuadInt};
use fibpow_core::real::{log_deviation_check, log_int, Real};
use fibpow_core::search::census_check;
use fibpow_core::zeck::zeckendorf;

use crate::config::{self, FileConfig, Format, Precision};
use crate::report::Sink;
use crate::{OutputOpts, PrecisionOpts, EXIT_OK, EXIT_UNDECIDED, EXIT_VERIFY_FAILED};

#[derive(Serialize, Clone)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub description: &'static str,
    pub checks: u64,
    pub passed: bool,
    pub undecided: bool,
    pub detail: String,
}

struct SuiteCtx {
    prec: Precision,
    max_x: u64,
    max_n: u64,
    max_y: u64,
    step_constant: BigRational,
}

fn suite(
    name: &'static str,
    description: &'static str,
    body: impl FnOnce() -> (u64, Result<(), String>),
) -> SuiteResult {
    let (checks, outcome) = body();
    match outcome {
        Ok(()) => SuiteResult {
            suite: name,
            description,
            checks,
            passed: true,
            undecided: false,
            detail: "ok".into(),
        },
        Err(detail) => SuiteResult {
            suite: name,
            description,
            checks,
            passed: false,
            undecided: detail.starts_with("undecided"),
            detail,
        },
    }
}

fn fibonacci_suite(_: &SuiteCtx) -> SuiteResult {
    suite(
        "fibonacci",
        "fast doubling agrees with the additive recurrence; Lucas companions",
        || {
            let mut checks = 0;
            let mut a = BigInt::zero();
            let mut b = BigInt::one();
            for n in 0..=2000u64 {
                if fib(n) != a {
                    return (checks, Err(format!("F_{n} mismatch")));
                }
                if n >= 1 && lucas(n) != fib(n - 1) + fib(n + 1) {
                    return (checks, Err(format!("L_{n} mismatch")));
                }
                let c = &a + &b;
                a = b;
                b = c;
                checks += 2;
            }
            if fib(12) != BigInt::from(144) || fib(36) != BigInt::from(14930352u64) {
                return (checks, Err("fixed values mismatch".into()));
            }
            (checks, Ok(()))
        },
    )
}

fn zeckendorf_suite(ctx: &SuiteCtx) -> SuiteResult {
    let limit = ctx.max_y.max(1000);
    suite(
        "zeckendorf",
        "greedy representation round-trips and respects the gap invariants",
        || {
            let mut checks = 0;
            for y in 1..=limit {
                let v = BigInt::from(y);
                let rep = match zeckendorf(&v) {
                    Ok(r) => r,
                    Err(e) => return (checks, Err(format!("encode failed at {y}: {e}"))),
                };
                if rep.decode() != v {
                    return (checks, Err(format!("round trip failed at {y}")));
                }
                checks += 1;
            }
            (checks, Ok(()))
        },
    )
}

fn lucas_mod5_suite(ctx: &SuiteCtx) -> SuiteResult {
    let limit = ctx.max_x;
    suite(
        "lucas-mod5",
        "the Lucas sequence mod 5 is the 4-cycle 2,1,3,4 and never 0",
        || {
            let mut checks = 0;
            let expected = [2u8, 1, 3, 4];
            let five = BigInt::from(5);
            let mut a = BigInt::from(2);
            let mut b = BigInt::from(1);
            for x in 0..=limit {
                let r = &a % &five;
                if r.is_zero() {
                    return (checks, Err(format!("L_{x} is divisible by 5")));
                }
                if r != BigInt::from(expected[(x % 4) as usize]) {
                    return (checks, Err(format!("L_{x} breaks the 4-cycle")));
                }
                let c = &a + &b;
                a = b;
                b = c;
                checks += 1;
            }
            (checks, Ok(()))
        },
    )
}

fn golden_ring_suite(_: &SuiteCtx) -> SuiteResult {
    suite(
        "golden-ring",
        "phi-power coordinates, norms of phi^x + 1, and sqrt5 valuations",
        || {
            let mut checks = 0;
            for x in 1..=1000u64 {
                let z = alpha_pow(x);
                if z.a != fib(x - 1) || z.b != fib(x) {
                    return (checks, Err(format!("phi^{x} coordinates mismatch")));
                }
                let w = &z + &QuadInt::one();
                let n = w.norm();
                let want = if x % 2 == 1 { lucas(x) } else { lucas(x) + 2 };
                if n != want {
                    return (checks, Err(format!("norm(phi^{x}+1) mismatch")));
                }
                if x % 2 == 1 {
                    match v_sqrt5(&w) {
                        Ok(0) => {}
                        _ => return (checks, Err(format!("sqrt5 divides phi^{x}+1"))),
                    }
                }
                checks += 3;
            }
            if v_sqrt5(&QuadInt::sqrt5()) != Ok(1) || v_sqrt5(&QuadInt::from_i64(5)) != Ok(2) {
                return (checks, Err("normalization of the valuation broke".into()));
            }
            (checks, Ok(()))
        },
    )
}

fn log_deviation_suite(ctx: &SuiteCtx) -> SuiteResult {
    suite(
        "log-deviation",
        "|log x| <= 2|x - 1| certified on a grid of [0.5, 1.5]",
        || {
            let mut checks = 0;
            let steps = 1000i64;
            for i in 0..=steps {
                let x = BigRational::new(BigInt::from(5_000 + 5 * i), BigInt::from(10_000));
                match log_deviation_check(&Real::from_ratio(&x, ctx.prec.start), ctx.prec.start) {
                    Ok(c) if c.certified => checks += 1,
                    Ok(_) => return (checks, Err(format!("undecided at grid point {i}"))),
                    Err(e) => return (checks, Err(format!("precondition failed at {i}: {e:?}"))),
                }
            }
            (checks, Ok(()))
        },
    )
}

fn sum_bounds_suite(ctx: &SuiteCtx) -> SuiteResult {
    suite(
        "sum-bounds",
        "sums of inverse phi powers over decreasing indices stay below 3",
        || {
            let p = ctx.prec.start;
            let mut checks = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(0x50b0);
            let three = Real::from_i64(3);
            for _ in 0..500 {
                let len = rng.gen_range(1usize..=8);
                let mut acc = QuadInt::zero();
                let mut next = rng.gen_range(0i64..6);
                for _ in 0..len {
                    acc = &acc + &alpha_pow_signed(-next);
                    next += rng.gen_range(1i64..7);
                }
                if !acc.embed(p).lt_certain(&three) {
                    return (checks, Err("inverse power sum reached 3".into()));
                }
                checks += 1;
            }
            (checks, Ok(()))
        },
    )
}

fn matveev_constant_suite(ctx: &SuiteCtx) -> SuiteResult {
    suite(
        "matveev-constant",
        "the step-constant product certifies below the declared constant",
        || {
            let cert = certify_step_constant(&ctx.step_constant, ctx.prec.start.max(128));
            let detail = format!(
                "product mid {} vs candidate {}",
                cert.product.to_decimal(17),
                ctx.step_constant
            );
            if cert.holds {
                (1, Ok(()))
            } else {
                (1, Err(format!("certificate failed: {detail}")))
            }
        },
    )
}

fn step_algebra_suite(_: &SuiteCtx) -> SuiteResult {
    suite(
        "step-algebra",
        "step recursion equals the closed form; exponent law and maximum",
        || {
            let mut checks = 0;
            for k in 1..=10u64 {
                let w1 = walk_case1(k);
                if w1.trace.len() != k as usize {
                    return (checks, Err(format!("left-only trace length at k={k}")));
                }
                for l0 in 1..=k {
                    let w = walk_case2(k, l0);
                    if w.final_bound != crossover_closed_form(k, l0) {
                        return (checks, Err(format!("closed form mismatch k={k} l0={l0}")));
                    }
                    if w.final_bound.exponent as u64 != crossover_exponent(k, l0) {
                        return (checks, Err(format!("exponent law broke k={k} l0={l0}")));
                    }
                    if 4 * crossover_exponent(k, l0) > k * k + 6 * k + 1 {
                        return (checks, Err(format!("exponent exceeds the cap k={k} l0={l0}")));
                    }
                    checks += 3;
                }
                let _ = max_over_paths(k);
                checks += 1;
            }
            (checks, Ok(()))
        },
    )
}

fn bound_solver_suite(ctx: &SuiteCtx) -> SuiteResult {
    suite(
        "bound-solver",
        "weight-1 bound lands in the frozen band; solver implication samples",
        || {
            let mut checks = 0;
            let fb = match finish(
                1,
                FinishMethod::Iteration,
                None,
                ctx.prec.start.max(160),
                ctx.prec.cap,
            ) {
                Ok(fb) => fb,
                Err(e) => return (checks, Err(format!("undecided: finish(1) failed: {e}"))),
            };
            let digits = fb.n_bound.to_string().len();
            if digits != 174 || !fb.n_bound.to_string().starts_with("1449561165340335") {
                return (checks, Err(format!("weight-1 bound moved: {digits} digits")));
            }
            checks += 1;
            // sampled implication property of the closed-form solver
            let mut rng = ChaCha8Rng::seed_from_u64(0x10b0);
            for _ in 0..200 {
                let c = BigRational::from_integer(BigInt::from(
                    rng.gen_range(1i64..=1_000_000_000_000),
                ));
                let x_int = rng.gen_range(1u32..=50);
                let x = BigRational::from_integer(BigInt::from(x_int));
                let d = BigRational::new(BigInt::from(rng.gen_range(1i64..=999)), BigInt::from(1000));
                let log_bound = match closed_form_log_bound(&c, &x, &d, 96) {
                    Ok(v) => v,
                    Err(e) => return (checks, Err(format!("solver failed: {e:?}"))),
                };
                for _ in 0..3 {
                    let n = BigInt::from(rng.gen_range(2u64..=1_000_000_000));
                    let rhs = finish_rhs(&c, x_int, &n, 96);
                    if Real::from_bigint(&n).le_certain(&rhs) {
                        let ln_n = log_int(&n, 96).expect("n >= 2");
                        if !ln_n.le_certain(&log_bound) {
                            return (checks, Err(format!("implication failed at n={n}")));
                        }
                    }
                    checks += 1;
                }
            }
            (checks, Ok(()))
        },
    )
}

fn linear_forms_suite(ctx: &SuiteCtx) -> SuiteResult {
    suite(
        "linear-forms",
        "every applicable form certifies its printed decay bound",
        || {
            let mut checks = 0;
            // the known solution, with eliminated forms and nonvanishing
            let inst = InstanceAB::new(
                BigInt::from(3864),
                zeckendorf(&BigInt::from(3864)).expect("positive"),
                Some(PowerClaim { a: 2, n: 36, m: 12 }),
            )
            .expect("the known solution instance");
            let mut forms = basic_forms(&inst, ctx.prec.start.max(160));
            forms.extend(
                eliminated_forms(&inst, ctx.prec.start.max(160)).expect("power side present"),
            );
            for f in &forms {
                match f.verdict {
                    Verdict::Certified | Verdict::NotApplicable => checks += 1,
                    Verdict::Undecided => {
                        return (checks, Err(format!("undecided: form {}", f.tag)))
                    }
                    Verdict::Violated => {
                        return (checks, Err(format!("form {} violated its bound", f.tag)))
                    }
                }
            }
            let max_coeff = max_star_coefficient(&inst).expect("power side present");
            if max_coeff > BigInt::from(36 * 36) {
                return (checks, Err("coefficient bound n^2 exceeded".into()));
            }
            match verify_nonzero(&inst, FormTag::BStar(1), ctx.prec.start.max(160)) {
                Ok(ev) => {
                    if ev.outcome != NonvanishingOutcome::ParityException {
                        return (checks, Err("even-parity instance missed the exception".into()));
                    }
                    if ev.numeric_witness.is_none() {
                        return (checks, Err("numeric witness missing for B*1".into()));
                    }
                }
                Err(e) => return (checks, Err(format!("nonvanishing check failed: {e}"))),
            }
            checks += 2;
            // representation-side forms across small y
            for y in 2..=ctx.max_y {
                let inst = InstanceAB::from_y(BigInt::from(y)).expect("positive");
                for f in basic_forms(&inst, ctx.prec.start) {
                    match f.verdict {
                        Verdict::Certified | Verdict::NotApplicable => checks += 1,
                        v => return (checks, Err(format!("y={y} form {}: {v:?}", f.tag))),
                    }
                }
            }
            (checks, Ok(()))
        },
    )
}

fn census_suite(ctx: &SuiteCtx) -> SuiteResult {
    suite(
        "census",
        "solution census, parity slice, size bounds, and log y < n_1",
        || {
            let report = census_check(ctx.max_n.max(36), 96);
            let mut checks = report.solutions.len() as u64;
            // log y < n_1 for every found base with y >= 2
            for s in &report.solutions {
                if s.y < BigInt::from(2) {
                    continue;
                }
                let n1 = zeckendorf(&s.y).expect("y >= 2").largest();
                let ln_y = log_int(&s.y, 96).expect("y >= 2");
                if !ln_y.lt_certain(&Real::from_i64(n1 as i64)) {
                    return (
                        checks,
                        Err(format!("log y >= n_1 at ({}, {})", s.n, s.m)),
                    );
                }
                checks += 1;
            }
            if !report.parity_violations.is_empty() {
                return (
                    checks,
                    Err(format!(
                        "{} even-parity solution(s) with n > 36",
                        report.parity_violations.len()
                    )),
                );
            }
            if !report.size_violations.is_empty() {
                return (
                    checks,
                    Err(format!(
                        "{} solution(s) violating the fixed-y size bound",
                        report.size_violations.len()
                    )),
                );
            }
            if report.max_n >= 60 && report.matching.is_empty() {
                return (checks, Err("no counting convention yields 18".into()));
            }
            checks += 3;
            (checks, Ok(()))
        },
    )
}

type SuiteFn = fn(&SuiteCtx) -> SuiteResult;

const ALL_SUITES: &[(&str, SuiteFn)] = &[
    ("fibonacci", fibonacci_suite),
    ("zeckendorf", zeckendorf_suite),
    ("lucas-mod5", lucas_mod5_suite),
    ("golden-ring", golden_ring_suite),
    ("log-deviation", log_deviation_suite),
    ("sum-bounds", sum_bounds_suite),
    ("matveev-constant", matveev_constant_suite),
    ("step-algebra", step_algebra_suite),
    ("bound-solver", bound_solver_suite),
    ("linear-forms", linear_forms_suite),
    ("census", census_suite),
];

#[allow(clippy::too_many_arguments)]
pub fn run(
    cfg: &FileConfig,
    only: Option<String>,
    max_x: Option<u64>,
    max_n: Option<u64>,
    max_y: Option<u64>,
    step_constant: Option<String>,
    precision: PrecisionOpts,
    output: OutputOpts,
) -> Result<u8, String> {
    let prec = config::resolve_precision(&precision, cfg)?;
    let format = config::resolve_format(&output, cfg)?;
    let only = match only {
        Some(s) => Some(s),
        None => cfg.get::<String>("only")?,
    };
    let selected: Option<Vec<String>> =
        only.map(|s| s.split(',').map(|t| t.trim().to_string()).collect());
    if let Some(names) = &selected {
        for n in names {
            if !ALL_SUITES.iter().any(|(name, _)| name == n) {
                return Err(format!("unknown suite {n:?}"));
            }
        }
    }
    let ctx = SuiteCtx {
        prec,
        max_x: match max_x {
            Some(v) => v,
            None => cfg.get("max-x")?.unwrap_or(100_000),
        },
        max_n: match max_n {
            Some(v) => v,
            None => cfg.get("max-n")?.unwrap_or(60),
        },
        max_y: match max_y {
            Some(v) => v,
            None => cfg.get("max-y")?.unwrap_or(2000),
        },
        step_constant: match step_constant {
            Some(s) => config::parse_rational(&s)?,
            None => match cfg.get::<String>("step-constant")? {
                Some(s) => config::parse_rational(&s)?,
                None => BigRational::from_integer(fibpow_core::matveev::step_constant_value()),
            },
        },
    };

    let mut sink = Sink::create(&output, format)?;
    if format == Format::Csv {
        sink.line("suite,checks,passed,undecided,detail")?;
    }
    let mut any_failed = false;
    let mut any_undecided = false;
    for (name, body) in ALL_SUITES {
        if let Some(names) = &selected {
            if !names.iter().any(|n| n == name) {
                continue;
            }
        }
        let result = body(&ctx);
        any_failed |= !result.passed && !result.undecided;
        any_undecided |= result.undecided;
        match format {
            Format::Json => sink.json(&result)?,
            Format::Csv => sink.line(&format!(
                "{},{},{},{},{}",
                result.suite,
                result.checks,
                result.passed,
                result.undecided,
                result.detail.replace(',', ";")
            ))?,
            Format::Human => {
                let mark = if result.passed {
                    "pass"
                } else if result.undecided {
                    "UNDECIDED"
                } else {
                    "FAIL"
                };
                sink.line(&format!(
                    "[{mark}] {} ({} checks) - {}{}",
                    result.suite,
                    result.checks,
                    result.description,
                    if result.passed {
                        String::new()
                    } else {
                        format!(": {}", result.detail)
                    }
                ))?;
            }
        }
    }
    sink.finish()?;
    Ok(if any_failed {
        EXIT_VERIFY_FAILED
    } else if any_undecided {
        EXIT_UNDECIDED
    } else {
        EXIT_OK
    })
}
