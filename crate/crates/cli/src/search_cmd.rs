//! `fibpow search`: sharded enumeration with checkpoint/resume, census
//! report, and the optional exhaustive cross-check oracle.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use fibpow_core::search::{
    census_check, enumerate_exhaustive, enumerate_shard, fib_ladder, Solution,
};

use crate::config::{self, FileConfig, Format};
use crate::report::Sink;
use crate::{OutputOpts, EXIT_OK, EXIT_VERIFY_FAILED};

#[derive(Serialize)]
struct SolutionRecord {
    n: u64,
    m: u64,
    y: String,
    a: u32,
    value: String,
    k: Option<usize>,
    parity: &'static str,
}

impl SolutionRecord {
    fn of(s: &Solution) -> Self {
        SolutionRecord {
            n: s.n,
            m: s.m,
            y: s.y.to_string(),
            a: s.a,
            value: s.value.to_string(),
            k: s.weight(),
            parity: if s.even_parity() { "even" } else { "odd" },
        }
    }
}

#[derive(Serialize)]
struct CensusRecord {
    max_n: u64,
    expected: usize,
    counts: Vec<CountRecord>,
    matching_conventions: Vec<String>,
    parity_violations: usize,
    size_violations: usize,
    oracle_agreed: Option<bool>,
}

#[derive(Serialize)]
struct CountRecord {
    convention: String,
    count: usize,
}

fn convention_label(c: &fibpow_core::search::Convention) -> String {
    format!(
        "unit-y={} equal-indices={}",
        if c.include_unit_y { "yes" } else { "no" },
        if c.include_equal_indices { "yes" } else { "no" }
    )
}

/// Enumerate with worker threads over n-shards, merged deterministically.
fn enumerate_parallel(max_n: u64, jobs: usize, done: &BTreeSet<u64>) -> Vec<(u64, Vec<Solution>)> {
    let ladder = fib_ladder(max_n);
    let pending: Vec<u64> = (0..=max_n).filter(|n| !done.contains(n)).collect();
    if jobs <= 1 || pending.len() <= 1 {
        return pending
            .into_iter()
            .map(|n| (n, enumerate_shard(n, &ladder)))
            .collect();
    }
    let mut results: Vec<(u64, Vec<Solution>)> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for worker in 0..jobs {
            let ladder = &ladder;
            let chunk: Vec<u64> = pending
                .iter()
                .copied()
                .filter(|n| (*n as usize) % jobs == worker)
                .collect();
            handles.push(scope.spawn(move || {
                chunk
                    .into_iter()
                    .map(|n| (n, enumerate_shard(n, ladder)))
                    .collect::<Vec<_>>()
            }));
        }
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("search worker panicked"))
            .collect()
    });
    results.sort_by_key(|(n, _)| *n);
    results
}

/// Plain-text progress journal next to the output file: `done <n>` per
/// completed shard and `sol <json>` per found solution, so an interrupted
/// run resumes instead of restarting.
struct Checkpoint {
    path: PathBuf,
}

impl Checkpoint {
    fn for_output(out: &std::path::Path) -> Checkpoint {
        let mut path = out.to_path_buf();
        let mut name = path.file_name().unwrap_or_default().to_os_string();
        name.push(".progress");
        path.set_file_name(name);
        Checkpoint { path }
    }

    fn load(&self) -> (BTreeSet<u64>, Vec<Solution>) {
        let mut done = BTreeSet::new();
        let mut sols = Vec::new();
        let Ok(text) = std::fs::read_to_string(&self.path) else {
            return (done, sols);
        };
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("done ") {
                if let Ok(n) = rest.trim().parse::<u64>() {
                    done.insert(n);
                }
            } else if let Some(rest) = line.strip_prefix("sol ") {
                if let Ok(rec) = serde_json::from_str::<serde_json::Value>(rest) {
                    let get_u64 = |k: &str| rec.get(k).and_then(|v| v.as_u64());
                    let get_str = |k: &str| rec.get(k).and_then(|v| v.as_str());
                    if let (Some(n), Some(m), Some(y), Some(a), Some(value)) = (
                        get_u64("n"),
                        get_u64("m"),
                        get_str("y"),
                        get_u64("a"),
                        get_str("value"),
                    ) {
                        if let (Ok(y), Ok(value)) = (y.parse(), value.parse()) {
                            sols.push(Solution {
                                n,
                                m,
                                y,
                                a: a as u32,
                                value,
                            });
                        }
                    }
                }
            }
        }
        (done, sols)
    }

    fn append(&self, shard: u64, sols: &[Solution]) {
        let Ok(mut f) = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
        else {
            return;
        };
        for s in sols {
            let _ = writeln!(
                f,
                "sol {}",
                serde_json::to_string(&SolutionRecord::of(s)).unwrap_or_default()
            );
        }
        let _ = writeln!(f, "done {shard}");
    }

    fn remove(&self) {
        let _ = std::fs::remove_file(&self.path);
    }
}

pub fn run(
    cfg: &FileConfig,
    max_n: Option<u64>,
    oracle: bool,
    jobs: Option<usize>,
    output: OutputOpts,
) -> Result<u8, String> {
    let format = config::resolve_format(&output, cfg)?;
    let max_n = match max_n {
        Some(v) => v,
        None => cfg.get("max-n")?.unwrap_or(200),
    };
    let jobs = match jobs {
        Some(v) => v.max(1),
        None => cfg.get("jobs")?.unwrap_or(1),
    };
    let oracle = oracle || cfg.get_flag("oracle")?;

    let checkpoint = output.out.as_deref().map(Checkpoint::for_output);
    let (done, mut solutions) = match &checkpoint {
        Some(c) => c.load(),
        None => (BTreeSet::new(), Vec::new()),
    };
    for (shard, sols) in enumerate_parallel(max_n, jobs, &done) {
        if let Some(c) = &checkpoint {
            c.append(shard, &sols);
        }
        solutions.extend(sols);
    }
    solutions.sort_by_key(|s| (s.n, s.m));
    solutions.dedup();

    let oracle_agreed = if oracle {
        let reference = enumerate_exhaustive(max_n);
        Some(reference == solutions)
    } else {
        None
    };

    let mut sink = Sink::create(&output, format)?;
    match format {
        Format::Csv => {
            sink.line("n,m,y,a,value,k,parity")?;
            for s in &solutions {
                let r = SolutionRecord::of(s);
                sink.line(&format!(
                    "{},{},{},{},{},{},{}",
                    r.n,
                    r.m,
                    r.y,
                    r.a,
                    r.value,
                    r.k.map(|k| k.to_string()).unwrap_or_default(),
                    r.parity
                ))?;
            }
        }
        Format::Json => {
            for s in &solutions {
                sink.json(&SolutionRecord::of(s))?;
            }
        }
        Format::Human => {
            sink.line(&format!(
                "solutions of F_n + F_m = y^a with n <= {max_n} (canonical maximal a):"
            ))?;
            for s in &solutions {
                let r = SolutionRecord::of(s);
                sink.line(&format!(
                    "  F_{} + F_{} = {} = {}^{}   [k={}, {} parity]",
                    r.n,
                    r.m,
                    r.value,
                    r.y,
                    r.a,
                    r.k.map(|k| k.to_string()).unwrap_or_else(|| "-".into()),
                    r.parity
                ))?;
            }
        }
    }

    let census = if max_n >= 36 {
        Some(census_check(max_n, 96))
    } else {
        None
    };
    let mut failed = false;
    if let Some(report) = &census {
        let rec = CensusRecord {
            max_n: report.max_n,
            expected: report.expected,
            counts: report
                .counts
                .iter()
                .map(|(c, n)| CountRecord {
                    convention: convention_label(c),
                    count: *n,
                })
                .collect(),
            matching_conventions: report.matching.iter().map(convention_label).collect(),
            parity_violations: report.parity_violations.len(),
            size_violations: report.size_violations.len(),
            oracle_agreed,
        };
        failed = !report.parity_violations.is_empty() || !report.size_violations.is_empty();
        match format {
            Format::Json => sink.json(&rec)?,
            Format::Csv => {
                sink.line("# census")?;
                for c in &rec.counts {
                    sink.line(&format!("# {}: {}", c.convention, c.count))?;
                }
                sink.line(&format!(
                    "# matching expected {}: {}",
                    rec.expected,
                    rec.matching_conventions.join("; ")
                ))?;
            }
            Format::Human => {
                sink.line("census (counts per convention):")?;
                for c in &rec.counts {
                    let mark = if c.count == rec.expected { " <- matches the known census" } else { "" };
                    sink.line(&format!("  {}: {}{}", c.convention, c.count, mark))?;
                }
                sink.line(&format!(
                    "  parity slice: {} violation(s); size-bound slice: {} violation(s)",
                    rec.parity_violations, rec.size_violations
                ))?;
                if let Some(ok) = oracle_agreed {
                    sink.line(&format!(
                        "  exhaustive oracle: {}",
                        if ok { "identical list" } else { "MISMATCH" }
                    ))?;
                }
            }
        }
    } else if let Some(ok) = oracle_agreed {
        match format {
            Format::Json => sink.line(&format!("{{\"oracle_agreed\":{ok}}}"))?,
            Format::Csv => sink.line(&format!("# oracle_agreed: {ok}"))?,
            Format::Human => sink.line(&format!(
                "exhaustive oracle: {}",
                if ok { "identical list" } else { "MISMATCH" }
            ))?,
        }
    }
    if oracle_agreed == Some(false) {
        failed = true;
    }
    sink.finish()?;
    if let Some(c) = &checkpoint {
        c.remove();
    }
    Ok(if failed { EXIT_VERIFY_FAILED } else { EXIT_OK })
}
