//! The solver core: a divide-and-conquer dynamic program over boxes of
//! right-hand sides.
//!
//! Level `i` tabulates, for every right-hand side `b'` in a box around the
//! scaled target `2^(i-K) * b`, the best objective of any solution the level
//! structure can certify for `b'`. Level 0 holds the trivial solutions (the
//! zero vector and single columns); each subsequent level merges the
//! previous one with itself by splitting `b'` into two box points of the
//! previous level. A certified hereditary-discrepancy bound guarantees the
//! fixed box radius suffices, which is what keeps the table polynomial in
//! the discrepancy bound rather than in `|b|`.
//!
//! Verdicts: a missing entry at the level-`K` target cell means Infeasible;
//! otherwise a rerun against the zero right-hand side decides Unbounded
//! (a strictly profitable circulation exists), and the backpointer chain
//! reconstructs an optimal witness for the bounded case.

mod level;
mod merge;
pub mod plan;
mod reconstruct;

pub use plan::{
    aggregated_row_cap, l1_norm_bound, plan_levels, plan_levels_with, row_adaptive_radii,
    BoxShape, LevelPlan,
};

use std::time::Instant;

use num::rational::BigRational;

use crate::discrepancy::{best_certified_bound, choose_h, HerdiscBound, Provenance};
use crate::error::{Error, Result};
use crate::instance::{max_abs_entry, normalize, IlpInstance, Solution};
use level::{init_level0, shed, StoredLevel};

/// Merge back-end selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Always the direct merge.
    Naive,
    /// The convolution merge wherever capacity allows (falling back to the
    /// direct merge where it does not).
    Conv,
    /// Direct merge for small tables (< 2^14 cells), convolution for large
    /// ones within capacity.
    #[default]
    Auto,
}

/// Box radius selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RadiiMode {
    /// One radius from the certified discrepancy bound of the whole matrix.
    #[default]
    Uniform,
    /// Per-row radii scaled by each row's largest entry.
    RowAdaptive,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Caller-asserted hereditary-discrepancy bound (checked against the
    /// Delta/2 floor). `None` computes the best affordable certified bound.
    pub h_override: Option<BigRational>,
    pub strategy: Strategy,
    pub radii: RadiiMode,
    /// Soft ceiling on solver memory; runs fail fast with an estimate when
    /// the plan cannot fit, and incrementally when sparse tables grow.
    pub budget_bytes: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            h_override: None,
            strategy: Strategy::Auto,
            radii: RadiiMode::Uniform,
            budget_bytes: 1 << 30,
        }
    }
}

/// What a run did: bound used, kernels chosen, sizes, and per-phase timings
/// (microseconds).
#[derive(Debug, Clone)]
pub struct SolveStats {
    pub h_value: BigRational,
    pub h_provenance: Provenance,
    pub strategy: Strategy,
    /// Kernel actually used per merge level.
    pub kernels: Vec<&'static str>,
    pub levels: usize,
    pub box_cells: u64,
    pub radii: Vec<i64>,
    pub l1_cap: i128,
    pub normalize_micros: u64,
    pub plan_micros: u64,
    pub level_micros: Vec<u64>,
    pub reconstruct_micros: u64,
    pub total_micros: u64,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub solution: Solution,
    pub stats: SolveStats,
}

/// Exact optimization with default configuration.
pub fn solve(inst: &IlpInstance) -> Result<Solution> {
    solve_with(inst, &SolverConfig::default()).map(|o| o.solution)
}

/// Exact optimization: Optimal with witness and value, or Infeasible, or
/// Unbounded (via the zero-right-hand-side rerun), or Feasible for instances
/// flagged feasibility-only.
pub fn solve_with(inst: &IlpInstance, config: &SolverConfig) -> Result<SolveOutcome> {
    run_pipeline(inst, config, Mode::Optimize)
}

/// Feasibility with default configuration.
pub fn feasible(inst: &IlpInstance) -> Result<Solution> {
    feasible_with(inst, &SolverConfig::default()).map(|o| o.solution)
}

/// Feasibility: Feasible with witness, or Infeasible. Values play no role;
/// under the convolution strategy the merge runs in the boolean semiring.
pub fn feasible_with(inst: &IlpInstance, config: &SolverConfig) -> Result<SolveOutcome> {
    run_pipeline(inst, config, Mode::Feasible)
}

/// Is `max{c^T x : Ax = 0, x >= 0}` strictly positive? Callers use this on
/// instances already known feasible; the answer is independent of `b`.
pub fn detect_unbounded(inst: &IlpInstance) -> Result<bool> {
    detect_unbounded_with(inst, &SolverConfig::default())
}

pub fn detect_unbounded_with(inst: &IlpInstance, config: &SolverConfig) -> Result<bool> {
    let norm = normalize(inst);
    if norm.instance.n() == 0 {
        return Ok(false);
    }
    let h = pick_h(&norm.instance, config);
    detect_unbounded_inner(&norm.instance, &h, config)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Optimize,
    Feasible,
}

/// Dense tables above this cell count would thrash memory; use sparse maps.
const DENSE_CUTOFF_CELLS: u64 = 1 << 23;

/// Below this table size the automatic strategy always picks the direct
/// merge.
const AUTO_NAIVE_CELLS: u64 = 1 << 14;

/// Work-estimate comparison for the automatic strategy. The direct merge
/// costs about the smaller of (finite entries)^2 and the full window scan;
/// the boolean transform costs about `len log len` with a heavy constant
/// for modular multiplies. The (max,+) path is itself quadratic in the
/// finite entries plus scatter/decode overhead, so it never undercuts the
/// direct merge and the estimate reflects that.
fn conv_is_cheaper(
    prev: &level::Table,
    shape: &plan::BoxShape,
    shift: &[i64],
    feasibility: bool,
) -> bool {
    let Some(len) = merge::conv_len(shape) else {
        return false;
    };
    let fc = prev.finite_count() as u128;
    let naive_cost = (fc * fc).min(merge::window_pair_estimate(shape, shift));
    let len = len as u128;
    let conv_cost = if feasibility {
        let lg = (128 - len.leading_zeros()) as u128;
        len.saturating_mul(lg).saturating_mul(6)
    } else {
        len.saturating_mul(2).saturating_add(fc * fc)
    };
    naive_cost > conv_cost.saturating_mul(2)
}

fn pick_h(normalized: &IlpInstance, config: &SolverConfig) -> HerdiscBound {
    match &config.h_override {
        Some(v) => choose_h(normalized, Some(v.clone())),
        None => best_certified_bound(normalized),
    }
}

fn combine_caps(n1: Option<i128>, row: Option<i128>) -> Result<i128> {
    let cap = match (n1, row) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => {
            return Err(Error::capacity(
                "no certified l1 bound on solutions fits in 128 bits; instance too large",
            ))
        }
    };
    Ok(cap.max(1))
}

/// Tightest certified `|x|_1` cap over feasible solutions: the worst-case
/// bound intersected with any aggregated-row cap.
fn certified_l1_cap(inst: &IlpInstance, b: &[i128]) -> Result<i128> {
    let delta = max_abs_entry(inst);
    let b_inf = b.iter().map(|v| v.abs()).max().unwrap_or(0);
    let n1 = l1_norm_bound(inst.n(), inst.m(), delta, b_inf).ok();
    combine_caps(n1, aggregated_row_cap(inst, b))
}

struct EngineRun {
    value: Option<i128>,
    witness: Option<Vec<i128>>,
    kernels: Vec<&'static str>,
    level_micros: Vec<u64>,
    plan_micros: u64,
    reconstruct_micros: u64,
    box_cells: u64,
    radii: Vec<i64>,
    levels: usize,
}

/// One full DP run on an instance whose width is already deduplicated (or
/// where duplicates are acceptable): plan, level 0, K merges, readout, and
/// optionally a reconstructed witness.
fn engine(
    inst: &IlpInstance,
    mode: Mode,
    h: &HerdiscBound,
    l1_cap: i128,
    config: &SolverConfig,
    want_witness: bool,
) -> Result<EngineRun> {
    let t_plan = Instant::now();
    let radii = match config.radii {
        RadiiMode::Uniform => vec![plan::uniform_radius(h)?; inst.m()],
        RadiiMode::RowAdaptive => plan::row_adaptive_radii_with(inst, h)?,
    };
    let plan = plan::plan_levels_with(inst.b(), radii.clone(), l1_cap)?;
    let shape = &plan.shape;
    let budget = config.budget_bytes;

    let dense = shape.cells() <= DENSE_CUTOFF_CELLS
        && plan::dense_budget_check(shape, budget).is_ok();
    if shape.cells() <= DENSE_CUTOFF_CELLS && !dense {
        // A dense-sized box that misses the budget would also blow it as a
        // near-full sparse map; fail fast with the dense estimate.
        plan::dense_budget_check(shape, budget)?;
    }
    let conv_extra = if dense { merge::conv_extra_bytes(shape) } else { None };
    // Aggregates certifying 0 <= u^T b' <= u^T b for every reachable partial
    // sum b' let each level drop cells outside that band.
    let cuts = plan::reachability_cuts(inst, inst.b());
    let plan_micros = t_plan.elapsed().as_micros() as u64;

    let feasibility = mode == Mode::Feasible;
    let mut kernels = Vec::with_capacity(plan.k_levels);
    let mut level_micros = Vec::with_capacity(plan.k_levels);
    let mut stored: Vec<StoredLevel> = Vec::with_capacity(plan.k_levels + 1);
    let mut stored_bytes: u64 = 0;

    let filter0 = plan::CellFilter::at_center(&cuts, &plan.centers[0]);
    let mut cur = init_level0(&plan, inst, !feasibility, dense, &filter0)?;
    for i in 1..=plan.k_levels {
        let t_level = Instant::now();
        let shift = plan.doubling_shift(i);
        let filter = plan::CellFilter::at_center(&cuts, &plan.centers[i]);
        let conv_fits = conv_extra.is_some_and(|extra| {
            stored_bytes
                .saturating_add(2 * cur.approx_bytes())
                .saturating_add(extra)
                <= budget
        });
        let use_conv = match config.strategy {
            Strategy::Naive => false,
            Strategy::Conv => conv_fits,
            Strategy::Auto => {
                shape.cells() >= AUTO_NAIVE_CELLS
                    && conv_fits
                    && conv_is_cheaper(&cur, shape, &shift, feasibility)
            }
        };
        let next = if use_conv {
            kernels.push(if feasibility {
                "conv-boolean"
            } else {
                "conv-maxplus"
            });
            merge::merge_convolution(&cur, shape, &shift, feasibility, &filter)?
        } else {
            kernels.push("naive");
            merge::merge_naive(&cur, shape, &shift, &filter)?
        };
        let prev = std::mem::replace(&mut cur, next);
        let prev_stored = shed(prev);
        stored_bytes = stored_bytes.saturating_add(prev_stored.approx_bytes());
        stored.push(prev_stored);

        let projected = stored_bytes.saturating_add(2 * cur.approx_bytes());
        if projected > budget {
            return Err(Error::Budget {
                estimated_bytes: projected as u128,
                budget_bytes: budget,
            });
        }
        level_micros.push(t_level.elapsed().as_micros() as u64);
    }

    let target = shape.center_index();
    let value = cur.get(target);

    let mut witness = None;
    let mut reconstruct_micros = 0;
    if want_witness && value.is_some() {
        let t_rec = Instant::now();
        stored.push(shed(cur));
        witness = Some(reconstruct::reconstruct(&stored, &plan, target, inst.n())?);
        reconstruct_micros = t_rec.elapsed().as_micros() as u64;
    }

    Ok(EngineRun {
        value,
        witness,
        kernels,
        level_micros,
        plan_micros,
        reconstruct_micros,
        box_cells: shape.cells(),
        radii,
        levels: plan.k_levels,
    })
}

fn detect_unbounded_inner(
    normalized: &IlpInstance,
    h: &HerdiscBound,
    config: &SolverConfig,
) -> Result<bool> {
    let m = normalized.m();
    let rows: Vec<Vec<i128>> = (0..m).map(|k| normalized.row(k)).collect();
    let zero = IlpInstance::new(rows, vec![0; m], normalized.c().to_vec())?;
    // The |b| = 0 specialization of the worst-case cap (with Delta + 1 for
    // headroom), intersected with any aggregated-row cap at b = 0.
    let n1 = l1_norm_bound(zero.n(), m, max_abs_entry(&zero), 1).ok();
    let cap = combine_caps(n1, aggregated_row_cap(&zero, zero.b()))?;
    let run = engine(&zero, Mode::Optimize, h, cap, config, false)?;
    Ok(run.value.is_some_and(|v| v > 0))
}

fn degenerate_stats(h: &HerdiscBound, config: &SolverConfig, normalize_micros: u64) -> SolveStats {
    SolveStats {
        h_value: h.value.clone(),
        h_provenance: h.provenance,
        strategy: config.strategy,
        kernels: Vec::new(),
        levels: 0,
        box_cells: 0,
        radii: Vec::new(),
        l1_cap: 0,
        normalize_micros,
        plan_micros: 0,
        level_micros: Vec::new(),
        reconstruct_micros: 0,
        total_micros: normalize_micros,
    }
}

fn run_pipeline(inst: &IlpInstance, config: &SolverConfig, mode: Mode) -> Result<SolveOutcome> {
    let t_total = Instant::now();
    let t_norm = Instant::now();
    let norm = normalize(inst);
    let normalize_micros = t_norm.elapsed().as_micros() as u64;
    let ni = &norm.instance;

    if ni.n() == 0 {
        let h = HerdiscBound {
            value: BigRational::from_integer(0.into()),
            provenance: Provenance::Exact,
        };
        let solution = if ni.b().iter().any(|&v| v != 0) {
            Solution::infeasible()
        } else if mode == Mode::Feasible || inst.feasibility_only() {
            Solution::feasible(vec![0; inst.n()])
        } else {
            Solution::optimal(0, vec![0; inst.n()])
        };
        return Ok(SolveOutcome {
            solution,
            stats: degenerate_stats(&h, config, normalize_micros),
        });
    }

    let h = pick_h(ni, config);
    let l1_cap = certified_l1_cap(ni, ni.b())?;
    let run = engine(ni, mode, &h, l1_cap, config, true)?;

    let solution = match run.value {
        None => Solution::infeasible(),
        Some(value) => {
            let x_norm = run
                .witness
                .as_ref()
                .ok_or_else(|| Error::internal("finite value without a witness"))?;
            let x = norm.lift_witness(x_norm, inst.n());
            if inst.eval_ax(&x)?.as_slice() != inst.b() {
                return Err(Error::internal(
                    "reconstructed witness violates the constraints",
                ));
            }
            if mode == Mode::Optimize && !inst.feasibility_only() {
                if inst.objective(&x)? != value {
                    return Err(Error::internal(
                        "reconstructed witness does not achieve the table value",
                    ));
                }
                if detect_unbounded_inner(ni, &h, config)? {
                    Solution::unbounded()
                } else {
                    Solution::optimal(value, x)
                }
            } else {
                Solution::feasible(x)
            }
        }
    };

    let stats = SolveStats {
        h_value: h.value.clone(),
        h_provenance: h.provenance,
        strategy: config.strategy,
        kernels: run.kernels,
        levels: run.levels,
        box_cells: run.box_cells,
        radii: run.radii,
        l1_cap,
        normalize_micros,
        plan_micros: run.plan_micros,
        level_micros: run.level_micros,
        reconstruct_micros: run.reconstruct_micros,
        total_micros: t_total.elapsed().as_micros() as u64,
    };
    Ok(SolveOutcome { solution, stats })
}

/// Exact optimization by binary search over the objective encoded as an
/// extra constraint: feasibility of `c^T x - s = tau` (slack `s >= 0`) is
/// monotone in `tau`, so the optimum is the largest feasible `tau` in
/// `[-N1 |c|_inf, N1 |c|_inf]` where `N1` is the worst-case solution cap.
///
/// Intended for bounded instances (run [`detect_unbounded`] first);
/// unboundedness is still detected here and reported rather than looping.
pub fn optimize_via_feasibility(inst: &IlpInstance) -> Result<Solution> {
    optimize_via_feasibility_with(inst, &SolverConfig::default())
}

pub fn optimize_via_feasibility_with(
    inst: &IlpInstance,
    config: &SolverConfig,
) -> Result<Solution> {
    let norm = normalize(inst);
    let ni = &norm.instance;
    let m = ni.m();

    if ni.n() == 0 {
        return Ok(if ni.b().iter().any(|&v| v != 0) {
            Solution::infeasible()
        } else if inst.feasibility_only() {
            Solution::feasible(vec![0; inst.n()])
        } else {
            Solution::optimal(0, vec![0; inst.n()])
        });
    }

    let delta = max_abs_entry(ni);
    let b_inf = ni.b().iter().map(|v| v.abs()).max().unwrap_or(0);
    let n1 = l1_norm_bound(ni.n(), m, delta, b_inf)?;
    let c_inf = ni.c().iter().map(|v| v.abs()).max().unwrap_or(0);
    let bound = n1
        .checked_mul(c_inf)
        .filter(|&v| v <= i128::MAX / 4)
        .ok_or_else(|| Error::capacity("objective range too wide for binary search"))?;

    // One augmented matrix serves every guess; only the right-hand side's
    // top entry moves, so the discrepancy bound is computed once.
    let build = |tau: i128| -> Result<IlpInstance> {
        let mut rows: Vec<Vec<i128>> = Vec::with_capacity(m + 1);
        let mut top = ni.c().to_vec();
        top.push(-1);
        rows.push(top);
        for k in 0..m {
            let mut row = ni.row(k);
            row.push(0);
            rows.push(row);
        }
        let mut b = Vec::with_capacity(m + 1);
        b.push(tau);
        b.extend_from_slice(ni.b());
        IlpInstance::new_feasibility(rows, b)
    };
    let h_aug = best_certified_bound(&build(0)?);

    let probe = |tau: i128| -> Result<Option<Vec<i128>>> {
        let aug = build(tau)?;
        let cap = certified_l1_cap(&aug, aug.b())?;
        let run = engine(&aug, Mode::Feasible, &h_aug, cap, config, true)?;
        Ok(run.value.and(run.witness))
    };

    let mut lo = -bound;
    let mut hi = bound;
    let Some(first) = probe(lo)? else {
        return Ok(Solution::infeasible());
    };
    if detect_unbounded_inner(ni, &pick_h(ni, config), config)? {
        return Ok(Solution::unbounded());
    }
    let mut best = first;
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        match probe(mid)? {
            Some(w) => {
                best = w;
                lo = mid;
            }
            None => hi = mid - 1,
        }
    }

    // Strip the slack column, lift through the duplicate-column map, verify.
    best.pop();
    let x = norm.lift_witness(&best, inst.n());
    if inst.eval_ax(&x)?.as_slice() != inst.b() {
        return Err(Error::internal("binary-search witness violates constraints"));
    }
    if inst.feasibility_only() {
        return Ok(Solution::feasible(x));
    }
    let value = inst.objective(&x)?;
    if value != lo {
        return Err(Error::internal(
            "binary-search witness does not achieve the final threshold",
        ));
    }
    Ok(Solution::optimal(value, x))
}
