//! Command-line surface: argument parsing, configuration, report emission,
//! and the mapping of library errors onto process exit codes
//! (0 success, 1 mathematical failure, 2 usage error, 3 precision cap).
//!
//! Machine-readable output goes to stdout as a single JSON document per run
//! with a `"schema": 1` stamp; progress and summaries go to stderr. Every
//! command is deterministic given its flags and configuration; wall-clock
//! fields are the documented exception.

use crate::error::{Error, Result};
use crate::family::{
    check_regulator, check_root_envelopes, check_unit_log_envelopes, envelope_window,
    isolate_roots, regulator_window, unit_log_system, FamilyInstance,
};
use crate::lattice::{final_bound_chain, ChainStep};
use crate::numerics::{Dyadic, PrecReal};
use crate::reduction::{reduce_case, sweep_range, ReduceOptions, ReductionCertificate};
use crate::report::{ConfigSnapshot, SweepReport, SCHEMA_VERSION};
use crate::search::{brute_search, check_solution, SolutionRecord};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "thuefam",
    version,
    about = "Certified verification pipeline for a family of cubic Thue equations"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Isolate the roots at one n and certify the root, unit-log, and
    /// regulator envelopes (the envelope checks apply from n = 29 on)
    VerifyLemmas {
        #[arg(long)]
        n: u32,
        /// Starting working precision in bits
        #[arg(long)]
        prec: Option<u32>,
    },
    /// Run the convergent-based bound reduction for one (n, type) case and
    /// emit its certificate
    Reduce {
        #[arg(long)]
        n: u32,
        /// Solution type: which root the hypothetical solution approaches (1-3)
        #[arg(long = "type", value_name = "J")]
        type_j: u8,
        /// Starting working precision in bits
        #[arg(long)]
        prec: Option<u32>,
        /// Largest number of continued-fraction terms to scan
        #[arg(long)]
        max_convergents: Option<usize>,
    },
    /// Reduce every case of a range in parallel and write a JSON report
    Sweep {
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        /// Worker threads (default: one per CPU)
        #[arg(long)]
        jobs: Option<usize>,
        /// Report destination path
        #[arg(long)]
        out: PathBuf,
    },
    /// Chain the absolute bound through lattice rounds until it drops into
    /// the sweep range
    FinalBound,
    /// Exhaustively test every |y| <= ymax for exact solutions
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        ymax: u64,
    },
    /// Test one candidate pair exactly
    Check {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
}

/// Optional key-value configuration file named by THUEFAM_CONFIG.
#[derive(Clone, Debug, Default)]
struct FileConfig {
    default_prec_bits: Option<u32>,
    prec_cap_bits: Option<u32>,
    max_convergents: Option<usize>,
    jobs: Option<usize>,
}

fn load_config() -> Result<FileConfig> {
    let mut cfg = FileConfig::default();
    let Some(path) = std::env::var_os("THUEFAM_CONFIG") else {
        return Ok(cfg);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| {
        Error::Usage(format!(
            "cannot read config file {}: {e}",
            path.to_string_lossy()
        ))
    })?;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Usage(format!("config line {} is not 'key = value'", idx + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |e: std::num::ParseIntError| {
            Error::Usage(format!("config value for '{key}' is not a number: {e}"))
        };
        match key {
            "default_prec_bits" => cfg.default_prec_bits = Some(value.parse().map_err(bad)?),
            "prec_cap_bits" => cfg.prec_cap_bits = Some(value.parse().map_err(bad)?),
            "max_convergents" => cfg.max_convergents = Some(value.parse().map_err(bad)?),
            "jobs" => cfg.jobs = Some(value.parse().map_err(bad)?),
            _ => {
                return Err(Error::Usage(format!("unknown config key '{key}'")));
            }
        }
    }
    Ok(cfg)
}

/// Flags override the file; hard defaults fill the rest.
fn resolve_options(
    cfg: &FileConfig,
    prec_flag: Option<u32>,
    max_convergents_flag: Option<usize>,
) -> ReduceOptions {
    let defaults = ReduceOptions::default();
    ReduceOptions {
        start_prec: prec_flag.or(cfg.default_prec_bits),
        prec_cap: cfg.prec_cap_bits.unwrap_or(defaults.prec_cap),
        max_convergents: max_convergents_flag
            .or(cfg.max_convergents)
            .unwrap_or(defaults.max_convergents),
    }
}

fn snapshot(opts: &ReduceOptions, jobs: Option<usize>) -> ConfigSnapshot {
    ConfigSnapshot {
        default_prec_bits: opts.start_prec,
        prec_cap_bits: opts.prec_cap,
        max_convergents: opts.max_convergents,
        jobs,
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<()> {
    let cfg = load_config()?;
    match command {
        Command::VerifyLemmas { n, prec } => {
            let opts = resolve_options(&cfg, prec, None);
            verify_lemmas(n, opts.start_prec, opts.prec_cap)
        }
        Command::Reduce {
            n,
            type_j,
            prec,
            max_convergents,
        } => {
            let opts = resolve_options(&cfg, prec, max_convergents);
            let cert = reduce_case(n, type_j, &opts)?;
            #[derive(Serialize)]
            struct Doc {
                schema: u32,
                config: ConfigSnapshot,
                certificate: ReductionCertificate,
            }
            emit(&Doc {
                schema: SCHEMA_VERSION,
                config: snapshot(&opts, None),
                certificate: cert,
            })
        }
        Command::Sweep {
            from,
            to,
            jobs,
            out,
        } => sweep(from, to, jobs.or(cfg.jobs), &out, &cfg),
        Command::FinalBound => final_bound(),
        Command::Search { n, ymax } => {
            let solutions = brute_search(n, ymax)?;
            #[derive(Serialize)]
            struct Doc {
                schema: u32,
                n: u32,
                y_max: u64,
                solutions: Vec<SolutionRecord>,
            }
            emit(&Doc {
                schema: SCHEMA_VERSION,
                n,
                y_max: ymax,
                solutions,
            })
        }
        Command::Check { n, x, y } => {
            let parse = |name: &str, s: &str| {
                BigInt::from_str(s)
                    .map_err(|e| Error::Usage(format!("--{name} is not an integer: {e}")))
            };
            let record = check_solution(n, &parse("x", &x)?, &parse("y", &y)?)?;
            #[derive(Serialize)]
            struct Doc {
                schema: u32,
                n: u32,
                x: String,
                y: String,
                verdict: &'static str,
                record: Option<SolutionRecord>,
            }
            emit(&Doc {
                schema: SCHEMA_VERSION,
                n,
                x,
                y,
                verdict: if record.is_some() {
                    "solution"
                } else {
                    "not a solution"
                },
                record,
            })
        }
    }
}

/// Prints one pretty JSON document to stdout.
fn emit<T: Serialize>(doc: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(doc)?);
    Ok(())
}

fn sci(d: &Dyadic) -> String {
    PrecReal::exact(d.clone(), 64).to_sci_string(6)
}

fn verify_lemmas(n: u32, prec: Option<u32>, prec_cap: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::Usage(format!(
            "the three real roots exist from n = 3 on, got {n}"
        )));
    }
    let start = prec.unwrap_or(160);
    let lines = crate::error::with_precision_ladder(
        start,
        prec_cap,
        "verifying the envelope lemmas",
        |p| {
            let inst = FamilyInstance::new(n);
            let mut lines = Vec::new();
            lines.push(format!(
                "n = {n}: shifts (0, {}, {}), working precision {p} bits",
                inst.fib, inst.pow2
            ));
            if n < 29 {
                let roots = isolate_roots(&inst, p)?;
                for (i, r) in roots.iter().enumerate() {
                    lines.push(format!("root {}: {}", i + 1, r.to_sci_string(20)));
                }
                lines.push("envelopes skipped (n < 29)".to_string());
                return Ok(lines);
            }
            let sys = unit_log_system(&inst, p)?;
            let margins = check_root_envelopes(&inst, &sys.roots)?;
            for (i, m) in margins.iter().enumerate() {
                lines.push(format!(
                    "root envelope {}: |alpha - G| < 0.5^{n}  pass (margin {})",
                    i + 1,
                    sci(m)
                ));
            }
            check_unit_log_envelopes(&sys)?;
            let wprec = sys.logs[0][0].prec_bits().max(128);
            for i in 0..3 {
                for k in 0..3 {
                    let (center, halfwidth) = envelope_window(n, i, k, wprec);
                    let margin = halfwidth.sub(&sys.logs[i][k].sub(&center).abs()).lo();
                    lines.push(format!(
                        "unit-log envelope ({}, {}): value {}  pass (margin {})",
                        i + 1,
                        k + 1,
                        sys.logs[i][k].to_sci_string(12),
                        sci(&margin)
                    ));
                }
            }
            check_regulator(&sys)?;
            lines.push(format!(
                "regulator: {} inside ({}, {})  pass",
                sys.regulator.to_sci_string(12),
                (n as u64) * (n as u64),
                2 * (n as u64) * (n as u64)
            ));
            let (center, halfwidth) = regulator_window(n, wprec);
            let margin = halfwidth.sub(&sys.regulator.sub(&center).abs()).lo();
            lines.push(format!(
                "regulator envelope: |R - K n^2| bounded  pass (margin {})",
                sci(&margin)
            ));
            lines.push("all envelopes certified".to_string());
            Ok(lines)
        },
    )?;
    for line in lines {
        println!("{line}");
    }
    Ok(())
}

fn sweep(from: u32, to: u32, jobs: Option<usize>, out: &PathBuf, cfg: &FileConfig) -> Result<()> {
    if !(29 <= from && from <= to) {
        return Err(Error::Usage(format!(
            "sweep range must satisfy 29 <= from <= to, got {from}..={to}"
        )));
    }
    let opts = resolve_options(cfg, None, None);
    let cases = 3 * (to - from + 1);
    eprintln!("sweeping {cases} cases over n = {from}..={to}");
    let results = match jobs {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Usage(format!("cannot build a {threads}-thread pool: {e}")))?;
            pool.install(|| sweep_range(from, to, &opts))
        }
        None => sweep_range(from, to, &opts),
    };
    let report = SweepReport::build(from, to, snapshot(&opts, jobs), results);
    std::fs::write(out, serde_json::to_string_pretty(&report)?)?;
    let nontrivial = report.solutions.iter().filter(|s| !s.trivial).count();
    eprintln!(
        "{} reduced, {} failed, {} non-trivial solution(s); report written to {}",
        report.cases.len(),
        report.failures.len(),
        nontrivial,
        out.display()
    );
    if !report.clean() {
        return Err(Error::Integrity(format!(
            "sweep left {} unreduced case(s) and {nontrivial} non-trivial solution(s)",
            report.failures.len()
        )));
    }
    Ok(())
}

fn final_bound() -> Result<()> {
    let (start, steps) = final_bound_chain()?;
    let chain: Vec<String> = std::iter::once(start.to_string())
        .chain(steps.iter().map(|s| s.n_out.to_string()))
        .collect();
    eprintln!("bound chain: {}", chain.join(" -> "));
    #[derive(Serialize)]
    struct Doc {
        schema: u32,
        start_bound: u64,
        rounds: Vec<ChainStep>,
        final_bound: u64,
    }
    let final_bound = steps.last().map(|s| s.n_out).unwrap_or(start);
    emit(&Doc {
        schema: SCHEMA_VERSION,
        start_bound: start,
        rounds: steps,
        final_bound,
    })
}
