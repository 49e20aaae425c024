//! `fewrows` — solve, generate, and benchmark equality-form integer programs
//! `max { c^T x : Ax = b, x >= 0 }` with few rows.
//!
//! Exit codes: 0 optimal/feasible (and successful gen/bench runs),
//! 1 infeasible, 2 unbounded, 64 usage, 65 malformed input, 66 capacity or
//! budget exceeded (including unreadable files), 70 internal error.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use serde::Serialize;

use fewrows::applications::{schedule_dual_approx, SchedulingInstance};
use fewrows::dp::{feasible_with, solve_with, SolverConfig, Strategy};
use fewrows::error::Error;
use fewrows::proximity::solve_with_proximity_outcome;
use fewrows::{parse_instance, IlpInstance, SolveStatus};
use fewrows_cli::report::RunReport;
use fewrows_cli::{bench, gen};

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_CAPACITY: u8 = 66;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(
    name = "fewrows",
    version,
    about = "Exact solver for integer programs max{c^T x : Ax = b, x >= 0} with few rows"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Maximize c^T x over Ax = b with x integral and nonnegative.
    Solve(SolveArgs),
    /// Decide whether Ax = b has any integral nonnegative solution.
    Feasible(SolveArgs),
    /// Write a generated instance in the shared text format.
    Gen(GenCommand),
    /// Time every merge strategy across instance families; emit CSV.
    Bench(bench::BenchArgs),
    /// Approximate minimum-makespan scheduling of a job list.
    Schedule(ScheduleArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file ('-' reads standard input).
    file: PathBuf,
    /// Override the certified discrepancy bound, e.g. '9/2' or '4'.
    #[arg(long = "H", value_name = "RATIONAL")]
    h: Option<String>,
    /// Merge back-end.
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
    /// Shrink a large right-hand side through the LP vertex first.
    #[arg(long, value_enum, default_value_t = Toggle::Off)]
    proximity: Toggle,
    /// Emit the run report as JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Ceiling on solver table memory, in bytes.
    #[arg(long, value_name = "N")]
    budget_bytes: Option<u64>,
}

#[derive(Args)]
struct GenCommand {
    #[command(flatten)]
    args: gen::GenArgs,
    /// Write here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScheduleArgs {
    /// Job file: first line '<machines> <eps>', then one processing time
    /// per line ('-' reads standard input).
    file: PathBuf,
    /// Override the accuracy parameter from the file, e.g. '1/4'.
    #[arg(long, value_name = "RATIONAL")]
    eps: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Naive,
    Conv,
    Auto,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Naive => Strategy::Naive,
            StrategyArg::Conv => Strategy::Conv,
            StrategyArg::Auto => Strategy::Auto,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

/// A failure already mapped to its exit code and message.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

/// Solver-library errors keep their own severity except where a subcommand
/// reclassifies them (generation treats guard/capacity as bad parameters).
fn lib_failure(e: Error) -> Failure {
    let code = match e {
        Error::Parse { .. } => EXIT_DATA,
        Error::Capacity { .. } | Error::Budget { .. } | Error::Guard { .. } => EXIT_CAPACITY,
        Error::Internal { .. } => EXIT_INTERNAL,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version render on stdout and exit 0; real argument
            // errors must not collide with exit 2 = unbounded.
            let code = if e.exit_code() == 0 { 0 } else { EXIT_USAGE };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.cmd {
        Cmd::Solve(args) => run_solve(args, false),
        Cmd::Feasible(args) => run_solve(args, true),
        Cmd::Gen(cmd) => run_gen(cmd),
        Cmd::Bench(args) => run_bench(args),
        Cmd::Schedule(args) => run_schedule(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("fewrows: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure {
                code: EXIT_CAPACITY,
                message: format!("reading standard input: {e}"),
            })?;
        return Ok(text);
    }
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_CAPACITY,
        message: format!("reading {}: {e}", path.display()),
    })
}

fn parse_rational(text: &str, what: &str) -> Result<BigRational, Failure> {
    BigRational::from_str(text)
        .map_err(|_| Failure::usage(format!("{what} must be a rational like '9/2' or '4': got '{text}'")))
}

fn status_code(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Optimal | SolveStatus::Feasible => 0,
        SolveStatus::Infeasible => 1,
        SolveStatus::Unbounded => 2,
    }
}

fn run_solve(args: &SolveArgs, feasibility: bool) -> Result<u8, Failure> {
    let text = read_input(&args.file)?;
    let mut inst = parse_instance(&text).map_err(lib_failure)?;
    if feasibility && !inst.feasibility_only() {
        // The feasibility question ignores the objective line.
        let rows: Vec<Vec<i128>> = (0..inst.m()).map(|k| inst.row(k)).collect();
        inst = IlpInstance::new_feasibility(rows, inst.b().to_vec()).map_err(lib_failure)?;
    }
    let mut config = SolverConfig {
        strategy: args.strategy.into(),
        ..SolverConfig::default()
    };
    if let Some(h) = &args.h {
        config.h_override = Some(parse_rational(h, "--H")?);
    }
    if let Some(budget) = args.budget_bytes {
        config.budget_bytes = budget;
    }
    let proximity = args.proximity == Toggle::On;

    let start = Instant::now();
    let (solution, stats) = if proximity {
        solve_with_proximity_outcome(&inst, &config).map_err(lib_failure)?
    } else if feasibility {
        let outcome = feasible_with(&inst, &config).map_err(lib_failure)?;
        (outcome.solution, Some(outcome.stats))
    } else {
        let outcome = solve_with(&inst, &config).map_err(lib_failure)?;
        (outcome.solution, Some(outcome.stats))
    };
    let total_micros = start.elapsed().as_micros() as u64;

    let report = RunReport::build(
        &solution,
        args.strategy.into(),
        stats.as_ref(),
        proximity,
        total_micros,
    );
    if args.json {
        println!("{}", serde_json::to_string(&report).map_err(json_failure)?);
    } else {
        print!("{}", report.render_human());
    }
    Ok(status_code(solution.status))
}

fn run_gen(cmd: &GenCommand) -> Result<u8, Failure> {
    let text = gen::generate(&cmd.args.family).map_err(|e| match e {
        // Bad family parameters are usage errors here, not solver limits.
        Error::Guard { .. } | Error::Capacity { .. } => Failure::usage(e.to_string()),
        other => lib_failure(other),
    })?;
    write_output(cmd.out.as_deref(), &text)?;
    Ok(0)
}

fn run_bench(args: &bench::BenchArgs) -> Result<u8, Failure> {
    let csv = bench::run(args).map_err(|e| match e {
        Error::Guard { .. } => Failure::usage(e.to_string()),
        other => lib_failure(other),
    })?;
    write_output(args.out.as_deref(), &csv)?;
    Ok(0)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => fs::write(p, text).map_err(|e| Failure {
            code: EXIT_CAPACITY,
            message: format!("writing {}: {e}", p.display()),
        }),
    }
}

fn json_failure(e: serde_json::Error) -> Failure {
    Failure {
        code: EXIT_INTERNAL,
        message: format!("rendering JSON report: {e}"),
    }
}

#[derive(Serialize)]
struct ScheduleReport {
    machines: usize,
    eps: String,
    makespan: i128,
    /// Job indices (0-based into the input order) per machine.
    assignment: Vec<Vec<usize>>,
    loads: Vec<i128>,
}

fn run_schedule(args: &ScheduleArgs) -> Result<u8, Failure> {
    let text = read_input(&args.file)?;
    let (machines, mut eps, jobs) = parse_schedule_file(&text)?;
    if let Some(e) = &args.eps {
        eps = parse_rational(e, "--eps")?;
    }
    let inst = SchedulingInstance::new(jobs.clone(), machines, eps.clone()).map_err(lib_failure)?;
    let schedule = schedule_dual_approx(&inst).map_err(lib_failure)?;
    let loads: Vec<i128> = schedule
        .assignment
        .iter()
        .map(|jobs_on| jobs_on.iter().map(|&j| jobs[j]).sum())
        .collect();
    let report = ScheduleReport {
        machines,
        eps: eps.to_string(),
        makespan: schedule.makespan,
        assignment: schedule.assignment,
        loads,
    };
    if args.json {
        println!("{}", serde_json::to_string(&report).map_err(json_failure)?);
    } else {
        println!("makespan: {}", report.makespan);
        println!("eps: {}", report.eps);
        for (i, (jobs_on, load)) in report.assignment.iter().zip(&report.loads).enumerate() {
            let ids: Vec<String> = jobs_on.iter().map(|j| j.to_string()).collect();
            println!("machine {i}: load {load}; jobs [{}]", ids.join(" "));
        }
    }
    Ok(0)
}

/// First meaningful line: `<machines> <eps>`; every further line one
/// positive processing time. `#` comments and blank lines are skipped.
fn parse_schedule_file(text: &str) -> Result<(usize, BigRational, Vec<i128>), Failure> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line_no, head) = lines.next().ok_or_else(|| Failure {
        code: EXIT_DATA,
        message: "empty schedule file".into(),
    })?;
    let mut parts = head.split_whitespace();
    let data = |line: usize, message: String| Failure {
        code: EXIT_DATA,
        message: format!("line {line}: {message}"),
    };
    let machines: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| data(line_no, "expected '<machines> <eps>'".into()))?;
    let eps_text = parts
        .next()
        .ok_or_else(|| data(line_no, "expected '<machines> <eps>'".into()))?;
    let eps = BigRational::from_str(eps_text)
        .map_err(|_| data(line_no, format!("bad eps '{eps_text}'")))?;
    if parts.next().is_some() {
        return Err(data(line_no, "trailing tokens after '<machines> <eps>'".into()));
    }
    let mut jobs = Vec::new();
    for (no, line) in lines {
        let p: i128 = line
            .parse()
            .map_err(|_| data(no, format!("bad processing time '{line}'")))?;
        jobs.push(p);
    }
    Ok((machines, eps, jobs))
}
