//! `fibpow`: explicit bounds and exhaustive desk-scale verification for
//! perfect powers that are sums of two Fibonacci numbers.

mod bound_cmd;
mod config;
mod linform_cmd;
mod report;
mod search_cmd;
mod verify_cmd;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exit codes: 0 ok, 1 verification failure, 2 config error, 3 undecided at
/// the precision cap.
pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_UNDECIDED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fibpow",
    version,
    about = "Explicit bounds and desk-scale verification for perfect powers that are sums of two Fibonacci numbers"
)]
struct Cli {
    /// Optional key=value config file; explicit flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct OutputOpts {
    /// Output format.
    #[arg(long, value_parser = ["json", "csv", "human"])]
    format: Option<String>,

    /// Write the report to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<std::path::PathBuf>,

    /// Suppress the timestamp header for byte-reproducible output.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args, Debug, Clone)]
pub struct PrecisionOpts {
    /// Starting working precision in bits.
    #[arg(long)]
    precision: Option<u32>,

    /// Precision cap for certified decisions, in bits.
    #[arg(long)]
    precision_cap: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the certified upper bound for n (and log y^a) for one or more
    /// Hamming weights k.
    Bound {
        /// Weight k, or an inclusive range like `1..3`.
        #[arg(long, value_name = "K|LO..HI")]
        k: Option<String>,

        /// Resolution method for the final inequality.
        #[arg(long, value_parser = ["iteration", "closed-form", "both"])]
        method: Option<String>,

        /// Delta parameter of the closed-form method, in (0, 1) (e.g. `1/2`).
        #[arg(long, value_name = "RATIONAL")]
        delta: Option<String>,

        /// Also report the asymptotic shape exponent (3+eps) k^2.
        #[arg(long, value_name = "RATIONAL")]
        epsilon: Option<String>,

        /// Print full decimal expansions instead of digit counts.
        #[arg(long)]
        full_decimal: bool,

        #[command(flatten)]
        precision: PrecisionOpts,

        #[command(flatten)]
        output: OutputOpts,
    },
    /// Enumerate all solutions of F_n + F_m = y^a with n <= max-n and run
    /// the census.
    Search {
        /// Largest index n to search.
        #[arg(long, value_name = "N")]
        max_n: Option<u64>,

        /// Cross-check the enumeration against the exhaustive second oracle
        /// (slow; intended for small max-n).
        #[arg(long)]
        oracle: bool,

        /// Worker threads for the n-shards.
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,

        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run the verification battery; nonzero exit on any failure.
    Verify {
        /// Comma-separated suite names (default: all). Known suites:
        /// fibonacci, zeckendorf, lucas-mod5, golden-ring, log-deviation,
        /// sum-bounds, matveev-constant, step-algebra, bound-solver,
        /// linear-forms, census.
        #[arg(long, value_name = "SUITES")]
        only: Option<String>,

        /// Largest index for the Lucas mod-5 sweep.
        #[arg(long, value_name = "N")]
        max_x: Option<u64>,

        /// Largest index for the census slice.
        #[arg(long, value_name = "N")]
        max_n: Option<u64>,

        /// Largest y for the representation-form certification sweep.
        #[arg(long, value_name = "N")]
        max_y: Option<u64>,

        /// Override the step constant (fault injection for the certificate
        /// check; the default is the certified 2.1e15).
        #[arg(long, value_name = "RATIONAL")]
        step_constant: Option<String>,

        #[command(flatten)]
        precision: PrecisionOpts,

        #[command(flatten)]
        output: OutputOpts,
    },
    /// Evaluate and certify the linear forms for instances given as JSON
    /// lines on stdin or a file.
    Linform {
        /// Input path (defaults to stdin). One instance per line:
        /// {"y": "...", "indices": [...], "a": 2, "n": 36, "m": 12}
        /// with indices and the power triple optional.
        #[arg(long, value_name = "PATH")]
        input: Option<std::path::PathBuf>,

        #[command(flatten)]
        precision: PrecisionOpts,

        #[command(flatten)]
        output: OutputOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_cfg = match config::FileConfig::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let code = match cli.command {
        Command::Bound {
            k,
            method,
            delta,
            epsilon,
            full_decimal,
            precision,
            output,
        } => bound_cmd::run(
            &file_cfg,
            k,
            method,
            delta,
            epsilon,
            full_decimal,
            precision,
            output,
        ),
        Command::Search {
            max_n,
            oracle,
            jobs,
            output,
        } => search_cmd::run(&file_cfg, max_n, oracle, jobs, output),
        Command::Verify {
            only,
            max_x,
            max_n,
            max_y,
            step_constant,
            precision,
            output,
        } => verify_cmd::run(
            &file_cfg,
            only,
            max_x,
            max_n,
            max_y,
            step_constant,
            precision,
            output,
        ),
        Command::Linform {
            input,
            precision,
            output,
        } => linform_cmd::run(&file_cfg, input, precision, output),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
