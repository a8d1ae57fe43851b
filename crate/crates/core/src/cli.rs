//! Command-line front end.
//!
//! ```text
//! hashcons taut (--urquhart N | --pigeonhole N | --file PATH) [--json]
//! hashcons bench (urquhart | pigeonhole) --max N [--json]
//! hashcons lambda-sort --list CSV [--no-memo] [--json]
//! ```
//!
//! Results and JSON reports go to standard output, diagnostics to standard
//! error. Exit codes:
//!
//! | command       | 0                 | 1                | 2            | 3                      |
//! |---------------|-------------------|------------------|--------------|------------------------|
//! | `taut`        | tautology         | not a tautology  | usage/input  |                        |
//! | `bench`       | all tautologies   |                  | usage        | some size is not       |
//! | `lambda-sort` | sorted            |                  | usage/input  | reduction/decode error |

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bdd::BddManager;
use crate::formula::{self, Formula};
use crate::intern::PoolStats;
use crate::lambda::{self, LambdaConfig, LambdaManager, TermRef};
use crate::memo::MemoStats;

pub const SCHEMA_VERSION: u32 = 1;

/// Largest list element accepted by `lambda-sort --no-memo`.
pub const NO_MEMO_MAX_ELEMENT: u64 = 8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_TAUTOLOGY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ENGINE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hashcons", version, about = "Tautology checking and normalization with hash-consing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a formula is a tautology.
    Taut(TautArgs),
    /// Run a benchmark family for sizes 1..=max on fresh managers.
    Bench(BenchArgs),
    /// Sort a list of naturals by normalizing a λ-term.
    LambdaSort(LambdaSortArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct SourceArgs {
    /// Urquhart's formula U(N).
    #[arg(long, value_name = "N")]
    pub urquhart: Option<u32>,
    /// Pigeonhole formula P(N), N + 1 pigeons in N holes.
    #[arg(long, value_name = "N")]
    pub pigeonhole: Option<u32>,
    /// A formula file.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TautArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Print the run report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Urquhart,
    Pigeonhole,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Urquhart => "urquhart",
            Suite::Pigeonhole => "pigeonhole",
        }
    }

    fn formula(self, n: u32) -> Result<Formula, formula::FormulaError> {
        match self {
            Suite::Urquhart => formula::urquhart(n),
            Suite::Pigeonhole => formula::pigeonhole(n),
        }
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    pub suite: Suite,
    /// Largest size to run.
    #[arg(long, value_name = "N")]
    pub max: u32,
    /// Emit one JSON report per line.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct LambdaSortArgs {
    /// Comma-separated naturals, e.g. `0,3,5,2,4,1`.
    #[arg(long, value_name = "CSV", allow_hyphen_values = true)]
    pub list: String,
    /// Plain evaluation: no sharing and no caches.
    #[arg(long)]
    pub no_memo: bool,
    /// Print the run report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum RunResult {
    Bool(bool),
    List(Vec<u64>),
}

/// Machine-readable outcome of one run. Field order is fixed; everything
/// but `wall_time_ms` is deterministic.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub result: RunResult,
    pub node_count: u64,
    pub pool_stats: PoolStats,
    pub memo_stats: BTreeMap<String, MemoStats>,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

fn memo_map(stats: BTreeMap<&'static str, MemoStats>) -> BTreeMap<String, MemoStats> {
    stats.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl ToString) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    fn engine(message: impl ToString) -> Self {
        CliError {
            code: EXIT_ENGINE,
            message: message.to_string(),
        }
    }
}

/// Compiles `f` on a fresh manager and reports whether it is a tautology.
pub fn check_formula(command: String, f: &Formula) -> Result<RunReport, CliError> {
    check_formula_in(&mut BddManager::new(), command, f)
}

/// Like [`check_formula`], reusing `mgr`. Pool and memo statistics in the
/// report are cumulative for the manager.
pub fn check_formula_in(mgr: &mut BddManager, command: String, f: &Formula) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let root = formula::compile(mgr, f).map_err(CliError::engine)?;
    let elapsed = start.elapsed();
    Ok(RunReport {
        schema: SCHEMA_VERSION,
        command,
        result: RunResult::Bool(mgr.is_tautology(root)),
        node_count: mgr.node_count(root) as u64,
        pool_stats: mgr.pool_stats(),
        memo_stats: memo_map(mgr.memo_stats()),
        wall_time_ms: elapsed.as_secs_f64() * 1e3,
    })
}

fn load_source(source: &SourceArgs) -> Result<(String, Formula), CliError> {
    if let Some(n) = source.urquhart {
        let f = formula::urquhart(n).map_err(CliError::usage)?;
        Ok((format!("taut --urquhart {n}"), f))
    } else if let Some(n) = source.pigeonhole {
        let f = formula::pigeonhole(n).map_err(CliError::usage)?;
        Ok((format!("taut --pigeonhole {n}"), f))
    } else if let Some(path) = &source.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        let f = formula::parse(&text)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        Ok((format!("taut --file {}", path.display()), f))
    } else {
        Err(CliError::usage("one of --urquhart, --pigeonhole or --file is required"))
    }
}

pub fn cmd_taut(args: &TautArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (command, f) = load_source(&args.source)?;
    let report = check_formula(command, &f)?;
    let taut = report.result == RunResult::Bool(true);
    if args.json {
        writeln!(out, "{}", report.to_json()).map_err(CliError::engine)?;
    } else {
        let verdict = if taut { "tautology" } else { "not a tautology" };
        writeln!(out, "{verdict}").map_err(CliError::engine)?;
    }
    Ok(if taut { EXIT_OK } else { EXIT_NOT_TAUTOLOGY })
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    if args.max == 0 {
        return Err(CliError::usage("--max must be at least 1"));
    }
    let suite = args.suite.name();
    let mut all_taut = true;
    if !args.json {
        writeln!(out, "{:>5} {:>10} {:>12} {:>12}  result", "size", "pool", "and-evals", "ms")
            .map_err(CliError::engine)?;
    }
    for n in 1..=args.max {
        let f = args.suite.formula(n).map_err(CliError::usage)?;
        let report = check_formula(format!("taut --{suite} {n}"), &f)?;
        let taut = report.result == RunResult::Bool(true);
        if !taut {
            all_taut = false;
            writeln!(err, "{suite}({n}) is not a tautology").map_err(CliError::engine)?;
        }
        if args.json {
            writeln!(out, "{}", report.to_json()).map_err(CliError::engine)?;
        } else {
            writeln!(
                out,
                "{:>5} {:>10} {:>12} {:>12.3}  {}",
                n,
                report.pool_stats.node_count,
                report.memo_stats["and"].body_evaluations,
                report.wall_time_ms,
                taut
            )
            .map_err(CliError::engine)?;
        }
    }
    Ok(if all_taut { EXIT_OK } else { EXIT_ENGINE })
}

/// Parses a comma-separated list of naturals; the empty string is the
/// empty list.
pub fn parse_list(csv: &str) -> Result<Vec<u64>, String> {
    if csv.trim().is_empty() {
        return Ok(Vec::new());
    }
    csv.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<u64>()
                .map_err(|_| format!("`{s}` is not a natural number"))
        })
        .collect()
}

/// A finished `lambda-sort` run.
pub struct SortRun {
    pub sorted: Vec<u64>,
    /// Normal form of the sort applied to the encoded input.
    pub normal: TermRef,
    pub manager: LambdaManager,
    pub report: RunReport,
}

/// Sorts `xs` with the λ-term quicksort, memoized with sharing or plain.
pub fn lambda_sort(xs: &[u64], memoized: bool) -> Result<SortRun, CliError> {
    let config = if memoized {
        LambdaConfig::default()
    } else {
        LambdaConfig::plain()
    };
    let start = Instant::now();
    let mut manager = LambdaManager::with_config(config);
    let (sorted, normal) = lambda::sort_with(&mut manager, xs).map_err(CliError::engine)?;
    let elapsed = start.elapsed();
    let mut command = format!("lambda-sort --list {}", join(xs));
    if !memoized {
        command.push_str(" --no-memo");
    }
    let report = RunReport {
        schema: SCHEMA_VERSION,
        command,
        result: RunResult::List(sorted.clone()),
        node_count: manager.node_count(normal) as u64,
        pool_stats: manager.pool_stats(),
        memo_stats: memo_map(manager.memo_stats()),
        wall_time_ms: elapsed.as_secs_f64() * 1e3,
    };
    Ok(SortRun {
        sorted,
        normal,
        manager,
        report,
    })
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

pub fn cmd_lambda_sort(args: &LambdaSortArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let xs = parse_list(&args.list).map_err(CliError::usage)?;
    if args.no_memo {
        if let Some(x) = xs.iter().find(|&&x| x > NO_MEMO_MAX_ELEMENT) {
            return Err(CliError::usage(format!(
                "--no-memo accepts elements up to {NO_MEMO_MAX_ELEMENT}, got {x}"
            )));
        }
    }
    let run = lambda_sort(&xs, !args.no_memo)?;
    if !run.sorted.is_empty() {
        writeln!(out, "{}", join(&run.sorted)).map_err(CliError::engine)?;
    }
    if args.json {
        writeln!(out, "{}", run.report.to_json()).map_err(CliError::engine)?;
    }
    Ok(EXIT_OK)
}

/// Runs a parsed command; errors are reported on `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Taut(args) => cmd_taut(args, out),
        Command::Bench(args) => cmd_bench(args, out, err),
        Command::LambdaSort(args) => cmd_lambda_sort(args, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{rendered}");
            code
        }
    }
}
