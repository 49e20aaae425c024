//! Timing harness: run each instance family at two right-hand-side scales
//! under every merge strategy and report medians as CSV.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use fewrows::dp::{feasible_with, solve_with, SolveStats, SolverConfig, Strategy};
use fewrows::error::{Error, Result};
use fewrows::{max_abs_entry, parse_instance, IlpInstance};

use crate::gen::{self, Family};

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated subset of: uks1, uksm, ksum, random.
    #[arg(long, value_delimiter = ',', default_value = "uks1,uksm,ksum,random")]
    pub families: Vec<String>,
    /// Runs per (family, size, strategy) cell; the median is reported.
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

pub const CSV_HEADER: &str = "family,m,delta,b_inf,strategy,wall_micros,table_cells,levels";

/// Runs the suite and renders the CSV (header plus one row per
/// family x size x strategy). Each family appears at a base size and with a
/// doubled right-hand side, which makes the logarithmic level growth visible
/// in the `levels` column.
pub fn run(args: &BenchArgs) -> Result<String> {
    if args.repeats == 0 {
        return Err(Error::Guard {
            message: "bench needs at least one repeat".into(),
        });
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for name in &args.families {
        for scale in [1, 2] {
            let family = family_config(name, scale, args.seed)?;
            let inst = parse_instance(&gen::generate(&family)?)?;
            let b_inf = inst.b().iter().map(|v| v.abs()).max().unwrap_or(0);
            let delta = max_abs_entry(&inst);
            for strategy in [Strategy::Naive, Strategy::Conv, Strategy::Auto] {
                let (micros, stats) = median_run(&inst, strategy, args.repeats)?;
                let cells = stats.box_cells.saturating_mul(stats.levels as u64 + 1);
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    name,
                    inst.m(),
                    delta,
                    b_inf,
                    crate::report::strategy_name(strategy),
                    micros,
                    cells,
                    stats.levels,
                ));
            }
        }
    }
    Ok(out)
}

fn family_config(name: &str, scale: i128, seed: u64) -> Result<Family> {
    let family = match name {
        "uks1" => Family::Uks1 {
            n: 8,
            delta: 30,
            capacity: 20_000 * scale,
            profit_max: 100,
            at_most: false,
            seed,
        },
        "uksm" => Family::Uksm {
            n: 5,
            m: 2,
            capacity: 30 * scale,
            profit_max: 40,
            at_most: false,
            seed,
        },
        "ksum" => Family::Ksum {
            k: 2,
            set_size: 3,
            target: 12 * scale,
            m: 1,
            seed,
        },
        "random" => Family::Random {
            m: 2,
            n: 5,
            delta: 5,
            b_max: 25 * scale,
            c_max: 10,
            positive_row: true,
            seed,
        },
        other => {
            return Err(Error::Guard {
                message: format!("unknown benchmark family '{other}'"),
            })
        }
    };
    Ok(family)
}

/// Median wall time over `repeats` runs, with the stats of one run.
fn median_run(
    inst: &IlpInstance,
    strategy: Strategy,
    repeats: usize,
) -> Result<(u64, SolveStats)> {
    let config = SolverConfig {
        strategy,
        ..SolverConfig::default()
    };
    let mut times = Vec::with_capacity(repeats);
    let mut stats = None;
    for _ in 0..repeats {
        let start = Instant::now();
        let outcome = if inst.feasibility_only() {
            feasible_with(inst, &config)?
        } else {
            solve_with(inst, &config)?
        };
        times.push(start.elapsed().as_micros() as u64);
        stats = Some(outcome.stats);
    }
    times.sort_unstable();
    Ok((
        times[times.len() / 2],
        stats.expect("at least one repeat ran"),
    ))
}
