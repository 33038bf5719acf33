//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 verification failure.

mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::anchor::{solve_series, AVTConfig, Algo, AnchorSolution, SolutionRecord};
use crate::graph::{generate_series, load_series, save_series, Churn, SeriesParams};
pub use verify::{report, verify_with, Counterexample, FastPaths, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "avt", version, about = "Anchored vertex tracking over snapshot series")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve every snapshot of a series and write the report.
    Run(RunArgs),
    /// Generate a synthetic series directory.
    Gen(GenArgs),
    /// Check the fast paths against brute-force oracles on random cases.
    Verify(VerifyArgs),
    /// Per-snapshot timings and counters for one or more algorithms.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Series directory holding base.edges and step_*.delta files.
    #[arg(long)]
    series: PathBuf,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    l: usize,
    /// Probe candidates on worker threads (same output).
    #[arg(long)]
    parallel: bool,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    solve: SolveArgs,
    #[arg(long, value_enum, default_value_t = Algo::Inc)]
    algo: Algo,
    /// Echoed into the report.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// Edges in the base snapshot.
    #[arg(long)]
    m: usize,
    /// Number of snapshots.
    #[arg(long = "T", value_name = "T")]
    snapshots: usize,
    /// Edges removed per step, `a:b` inclusive; as many are inserted.
    #[arg(long, value_parser = parse_range, default_value = "0:0")]
    churn: (usize, usize),
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cases per suite.
    #[arg(long, default_value_t = 200)]
    cases: usize,
    /// Largest random graph.
    #[arg(long, default_value_t = 30)]
    max_n: usize,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    solve: SolveArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algo::Greedy, Algo::Inc])]
    algo: Vec<Algo>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected `a:b`, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad lower bound {a:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad upper bound {b:?}"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub k: u32,
    pub l: usize,
    pub algo: Algo,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub followers: usize,
    pub candidates_probed: u64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub solutions: Vec<SolutionRecord>,
    pub totals: Totals,
}

impl RunReport {
    pub fn new(config: RunConfig, sols: &[AnchorSolution]) -> Self {
        let solutions: Vec<SolutionRecord> = sols.iter().map(AnchorSolution::record).collect();
        let totals = Totals {
            followers: solutions.iter().map(|r| r.followers).sum(),
            candidates_probed: solutions.iter().map(|r| r.candidates_probed).sum(),
            elapsed_ms: solutions.iter().map(|r| r.elapsed_ms).sum(),
        };
        RunReport {
            config,
            solutions,
            totals,
        }
    }
}

/// One bench CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub t: usize,
    pub algo: Algo,
    pub elapsed_ms: f64,
    pub candidates_probed: u64,
    pub followers: usize,
}

fn bench_rows(algo: Algo, sols: &[AnchorSolution]) -> Vec<BenchRow> {
    sols.iter()
        .map(|s| BenchRow {
            t: s.t,
            algo,
            elapsed_ms: s.elapsed.as_secs_f64() * 1e3,
            candidates_probed: s.candidates_probed,
            followers: s.followers.len(),
        })
        .collect()
}

fn csv_bytes(rows: &[BenchRow]) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Data(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Failure::Data(e.to_string()))
}

enum Failure {
    Data(String),
    Verify,
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn data<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Data(e.to_string())
}

fn emit(bytes: &[u8], path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Failure::Data(format!("{}: {e}", p.display()))),
        None => Ok(stdout.write_all(bytes)?),
    }
}

fn solve(args: &SolveArgs, algo: Algo) -> Result<Vec<AnchorSolution>, Failure> {
    let cfg = AVTConfig::new(args.k, args.l).map_err(data)?.with_parallel(args.parallel);
    let g = load_series(&args.series).map_err(data)?;
    solve_series(&g, &cfg, algo).map_err(data)
}

fn cmd_run(a: &RunArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let sols = solve(&a.solve, a.algo)?;
    let bytes = match a.format {
        Format::Json => {
            let config = RunConfig {
                k: a.solve.k,
                l: a.solve.l,
                algo: a.algo,
                seed: a.seed,
            };
            let mut b = serde_json::to_vec_pretty(&RunReport::new(config, &sols)).map_err(data)?;
            b.push(b'\n');
            b
        }
        Format::Csv => csv_bytes(&bench_rows(a.algo, &sols))?,
    };
    emit(&bytes, a.solve.out.as_deref(), stdout)
}

fn cmd_gen(a: &GenArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let params = SeriesParams {
        n: a.n,
        m0: a.m,
        snapshots: a.snapshots,
        churn: Churn::equal(a.churn.0..=a.churn.1),
        seed: a.seed,
    };
    let g = generate_series(&params).map_err(data)?;
    save_series(&a.out, &g).map_err(data)?;
    writeln!(
        stdout,
        "wrote {} snapshots ({} deltas) to {}",
        g.len(),
        g.deltas().len(),
        a.out.display()
    )?;
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, fast: &FastPaths, stdout: &mut dyn Write) -> Result<(), Failure> {
    let cfg = VerifyConfig {
        seed: a.seed,
        cases: a.cases,
        max_n: a.max_n,
    };
    match verify_with(&cfg, fast, stdout)? {
        None => Ok(()),
        Some(cx) => {
            report(&cx, stdout)?;
            Err(Failure::Verify)
        }
    }
}

fn cmd_bench(a: &BenchArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for &algo in &a.algo {
        rows.extend(bench_rows(algo, &solve(&a.solve, algo)?));
    }
    let bytes = match a.format {
        Format::Csv => csv_bytes(&rows)?,
        Format::Json => {
            let mut b = serde_json::to_vec_pretty(&rows).map_err(data)?;
            b.push(b'\n');
            b
        }
    };
    emit(&bytes, a.solve.out.as_deref(), stdout)
}

/// Runs the CLI with the library's own fast paths.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    main_with_paths(args, &FastPaths::default(), stdout, stderr)
}

/// Same as [`main_with`] but `verify` checks `fast` instead.
pub fn main_with_paths<I, T>(args: I, fast: &FastPaths, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let res = match &cli.cmd {
        Command::Run(a) => cmd_run(a, stdout),
        Command::Gen(a) => cmd_gen(a, stdout),
        Command::Verify(a) => cmd_verify(a, fast, stdout),
        Command::Bench(a) => cmd_bench(a, stdout),
    };
    match res {
        Ok(()) => EXIT_OK,
        Err(Failure::Verify) => EXIT_VERIFY,
        Err(Failure::Data(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_DATA
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_DATA
        }
    }
}
