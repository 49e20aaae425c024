//! End-user problems on top of the solver: unbounded knapsack, unbounded
//! subset-sum, and identical-machines makespan scheduling.
//!
//! Knapsack and subset-sum are one-row instances whose fractional optimum
//! has a closed form (pour everything into the most efficient item), so the
//! proximity reduction applies without any LP enumeration and the solver
//! runs on a right-hand side bounded by the weights, not by `C`.
//!
//! Scheduling uses the configuration ILP: jobs larger than `eps*tau` are
//! rounded up to a geometric grid, a configuration is a multiset of rounded
//! sizes fitting in `(1+eps)*tau`, and a feasibility instance with one row
//! per size class (plus one counting machines) decides whether `M`
//! configurations cover every large job. Small jobs go greedily onto the
//! least-loaded machine. A geometric search over `tau` turns the decision
//! into a `(1+eps)^3`-approximation of the optimal makespan.

use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::dp::{feasible_with, solve, SolverConfig};
use crate::error::{Error, Result};
use crate::instance::{IlpInstance, Solution, SolveStatus};
use crate::proximity::{proximity_reduce, FractionalVertex, LpStatus};
use crate::reductions::{uks_to_ilp1, KnapsackInstance, KnapsackMode};
use crate::util::{rat_ceil_i128, rat_from_i128};

/// Exact unbounded-knapsack optimum: `Some((value, x))` over the original
/// items, or `None` when an equality-mode instance has no exact fill.
///
/// The fractional vertex puts `C / w_i` on the item of maximal efficiency
/// `p_i / w_i` (ties to the lowest index), so the proximity reduction
/// shrinks the capacity to a few multiples of the largest weight before
/// the solver runs.
pub fn solve_unbounded_knapsack(k: &KnapsackInstance) -> Result<Option<(i128, Vec<i128>)>> {
    let inst = uks_to_ilp1(k)?;
    let sol = if inst.n() == 0 {
        solve(&inst)?
    } else {
        let weights = inst.row(0);
        let profits = inst.c();
        let mut best = 0usize;
        for j in 1..inst.n() {
            // p_j / w_j > p_best / w_best, cross-multiplied (weights > 0).
            if profits[j] * weights[best] > profits[best] * weights[j] {
                best = j;
            }
        }
        let mut x_star = vec![BigRational::zero(); inst.n()];
        x_star[best] = rat_from_i128(k.capacity) / rat_from_i128(weights[best]);
        let vertex = FractionalVertex {
            x_star,
            basis: vec![best],
            lp_status: LpStatus::Optimal,
        };
        let reduction = proximity_reduce(&inst, &vertex)?;
        let reduced = solve(&reduction.reduced)?;
        match reduced.status {
            SolveStatus::Infeasible => Solution::infeasible(),
            SolveStatus::Optimal => {
                let x: Vec<i128> = reduced
                    .x
                    .as_ref()
                    .expect("optimal status carries a witness")
                    .iter()
                    .zip(&reduction.ell)
                    .map(|(&a, &l)| a + l)
                    .collect();
                let value = inst.objective(&x)?;
                Solution::optimal(value, x)
            }
            other => {
                return Err(Error::internal(format!(
                    "positive-weight knapsack cannot be {other:?}"
                )))
            }
        }
    };

    match sol.status {
        SolveStatus::Infeasible => Ok(None),
        SolveStatus::Optimal => {
            let mut x = sol.x.expect("optimal status carries a witness");
            x.truncate(k.weights.len()); // drop the at-most slack item
            Ok(Some((sol.value.expect("optimal status carries a value"), x)))
        }
        other => Err(Error::internal(format!(
            "positive-weight knapsack cannot be {other:?}"
        ))),
    }
}

/// Unbounded subset-sum (profits all zero): Feasible with a witness over
/// the original items, or Infeasible. The fractional point puts `C / w_0`
/// on the first item; feasibility of the reduced instance transfers back.
pub fn solve_unbounded_subset_sum(k: &KnapsackInstance) -> Result<Solution> {
    if k.profits.iter().any(|&p| p != 0) {
        return Err(Error::guard("subset-sum expects all profits zero"));
    }
    let inst = uks_to_ilp1(k)?;
    if inst.n() == 0 {
        return Ok(if k.capacity == 0 {
            Solution::feasible(Vec::new())
        } else {
            Solution::infeasible()
        });
    }
    let mut x_star = vec![BigRational::zero(); inst.n()];
    x_star[0] = rat_from_i128(k.capacity) / rat_from_i128(inst.row(0)[0]);
    let vertex = FractionalVertex {
        x_star,
        basis: vec![0],
        lp_status: LpStatus::Optimal,
    };
    let reduction = proximity_reduce(&inst, &vertex)?;
    let sol = feasible_with(&reduction.reduced, &SolverConfig::default())?.solution;
    match sol.status {
        SolveStatus::Infeasible => Ok(Solution::infeasible()),
        SolveStatus::Feasible => {
            let mut x: Vec<i128> = sol
                .x
                .as_ref()
                .expect("feasible status carries a witness")
                .iter()
                .zip(&reduction.ell)
                .map(|(&a, &l)| a + l)
                .collect();
            x.truncate(k.weights.len());
            Ok(Solution::feasible(x))
        }
        other => Err(Error::internal(format!(
            "feasibility run cannot be {other:?}"
        ))),
    }
}

/// Memory ceiling for the classic table (entries of 16 bytes).
const ORACLE_MAX_CAPACITY: i128 = 1 << 27;

/// Classic `O(n C)` unbounded-knapsack table; the reference the solver is
/// tested against. `None` means no exact fill in equality mode.
pub fn knapsack_dp_oracle(k: &KnapsackInstance) -> Result<Option<i128>> {
    if k.capacity > ORACLE_MAX_CAPACITY {
        return Err(Error::capacity(format!(
            "oracle table of {} entries exceeds the budget",
            k.capacity
        )));
    }
    let cap = k.capacity as usize;
    let mut table: Vec<Option<i128>> = vec![None; cap + 1];
    table[0] = Some(0);
    for t in 1..=cap {
        for (w, p) in k.weights.iter().zip(&k.profits) {
            let w = *w as usize;
            if w <= t {
                if let Some(prev) = table[t - w] {
                    let v = prev + p;
                    if table[t].is_none_or(|cur| v > cur) {
                        table[t] = Some(v);
                    }
                }
            }
        }
    }
    Ok(match k.mode {
        KnapsackMode::Equality => table[cap],
        KnapsackMode::AtMost => table.into_iter().flatten().max(),
    })
}

/// Makespan scheduling input: assign every job to one of `machines`
/// identical machines, minimizing the largest total processing time.
#[derive(Debug, Clone)]
pub struct SchedulingInstance {
    pub processing_times: Vec<i128>,
    pub machines: usize,
    /// Accuracy parameter in (0, 1]; the returned makespan is within
    /// `(1+eps)^3` of optimal.
    pub eps: BigRational,
}

impl SchedulingInstance {
    pub fn new(processing_times: Vec<i128>, machines: usize, eps: BigRational) -> Result<Self> {
        if processing_times.iter().any(|&p| p < 1) {
            return Err(Error::guard("processing times must be positive"));
        }
        if machines == 0 {
            return Err(Error::guard("need at least one machine"));
        }
        if !eps.is_positive() || eps > BigRational::one() {
            return Err(Error::guard("eps must lie in (0, 1]"));
        }
        Ok(SchedulingInstance {
            processing_times,
            machines,
            eps,
        })
    }
}

/// How many jobs of each rounded size class one machine receives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub multiplicities: Vec<i128>,
}

/// A complete assignment: `assignment[i]` lists the job indices on machine
/// `i`; `makespan` is the true (unrounded) maximum load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub assignment: Vec<Vec<usize>>,
    pub makespan: i128,
}

impl Schedule {
    fn from_assignment(assignment: Vec<Vec<usize>>, p: &[i128]) -> Schedule {
        let makespan = assignment
            .iter()
            .map(|jobs| jobs.iter().map(|&j| p[j]).sum::<i128>())
            .max()
            .unwrap_or(0);
        Schedule {
            assignment,
            makespan,
        }
    }
}

/// Refuse configuration ILPs that would dwarf the solver.
const CONFIG_BUDGET: usize = 150_000;

/// All multiplicity vectors over `sizes` with total rounded load at most
/// `cap` and at most `max_count` jobs. Sizes ascending; lexicographic
/// output order, the all-zero configuration first.
fn enumerate_configurations(
    sizes: &[BigRational],
    cap: &BigRational,
    max_count: i128,
) -> Result<Vec<Configuration>> {
    fn go(
        sizes: &[BigRational],
        idx: usize,
        room: BigRational,
        count_left: i128,
        cur: &mut Vec<i128>,
        out: &mut Vec<Configuration>,
    ) -> Result<()> {
        if idx == sizes.len() {
            if out.len() >= CONFIG_BUDGET {
                return Err(Error::capacity(
                    "configuration count exceeds the budget; increase eps",
                ));
            }
            out.push(Configuration {
                multiplicities: cur.clone(),
            });
            return Ok(());
        }
        let mut used = BigRational::zero();
        let mut taken: i128 = 0;
        while used <= room && taken <= count_left {
            cur[idx] = taken;
            go(sizes, idx + 1, &room - &used, count_left - taken, cur, out)?;
            used += &sizes[idx];
            taken += 1;
        }
        cur[idx] = 0;
        Ok(())
    }
    let mut out = Vec::new();
    go(
        sizes,
        0,
        cap.clone(),
        max_count,
        &mut vec![0; sizes.len()],
        &mut out,
    )?;
    Ok(out)
}

/// Decision procedure: a schedule of makespan at most `(1+eps) * tau` plus
/// small-job overflow, or `None` if no schedule of makespan `tau` exists
/// (never a false `None`).
///
/// Large jobs (`> eps*tau`) are rounded up to the grid
/// `eps*tau*(1+eps)^i`; a feasibility instance asks for `M` configurations
/// covering every rounded size exactly. Small jobs then go to the
/// least-loaded machine in decreasing order.
pub fn schedule_decide_tau(inst: &SchedulingInstance, tau: i128) -> Result<Option<Schedule>> {
    let p = &inst.processing_times;
    let m_machines = inst.machines;
    if p.is_empty() {
        return Ok(Some(Schedule::from_assignment(
            vec![Vec::new(); m_machines],
            p,
        )));
    }
    let eps = &inst.eps;
    let tau_rat = rat_from_i128(tau);
    let cap = (BigRational::one() + eps) * &tau_rat;
    if p.iter().any(|&pj| rat_from_i128(pj) > cap) {
        return Ok(None);
    }
    let small_cut = eps * &tau_rat;

    // Round each large job up to the geometric grid.
    let mut rounded: Vec<Option<BigRational>> = Vec::with_capacity(p.len());
    for &pj in p {
        let pj_rat = rat_from_i128(pj);
        if pj_rat <= small_cut {
            rounded.push(None);
            continue;
        }
        let mut g = small_cut.clone();
        while g < pj_rat {
            g *= BigRational::one() + eps;
        }
        rounded.push(Some(g));
    }

    let mut sizes: Vec<BigRational> = rounded.iter().flatten().cloned().collect();
    sizes.sort();
    sizes.dedup();
    let counts: Vec<i128> = sizes
        .iter()
        .map(|s| rounded.iter().flatten().filter(|r| *r == s).count() as i128)
        .collect();

    let max_count = if sizes.is_empty() {
        0
    } else {
        rat_ceil_i128(&(&cap / &small_cut))? // floor((1+eps)/eps) <= this ceil
    };
    let configs = enumerate_configurations(&sizes, &cap, max_count)?;

    // Rows: machine count, then one per size class.
    let mut rows = vec![vec![0i128; configs.len()]; 1 + sizes.len()];
    for (j, config) in configs.iter().enumerate() {
        rows[0][j] = 1;
        for (k, &mult) in config.multiplicities.iter().enumerate() {
            rows[1 + k][j] = mult;
        }
    }
    let mut b = vec![m_machines as i128];
    b.extend_from_slice(&counts);
    let ilp = IlpInstance::new_feasibility(rows, b)?;

    // Columns have l1 norm at most 1 + (jobs per configuration).
    let h_override = BigRational::one() + (BigRational::one() / eps).ceil();
    let config_solver = SolverConfig {
        h_override: Some(h_override),
        ..SolverConfig::default()
    };
    let sol = feasible_with(&ilp, &config_solver)?.solution;
    let Some(x) = sol.x else {
        return Ok(None);
    };

    // Expand multiplicities into one configuration per machine.
    let mut machine_configs: Vec<&Configuration> = Vec::with_capacity(m_machines);
    for (config, &count) in configs.iter().zip(&x) {
        for _ in 0..count {
            machine_configs.push(config);
        }
    }
    debug_assert_eq!(machine_configs.len(), m_machines);

    // Hand out the actual large jobs class by class.
    let mut assignment: Vec<Vec<usize>> = vec![Vec::new(); m_machines];
    for (k, size) in sizes.iter().enumerate() {
        let mut jobs = rounded
            .iter()
            .enumerate()
            .filter(|(_, r)| r.as_ref() == Some(size))
            .map(|(j, _)| j);
        for (machine, config) in machine_configs.iter().enumerate() {
            for _ in 0..config.multiplicities[k] {
                let job = jobs.next().ok_or_else(|| {
                    Error::internal("configuration selection covers more jobs than exist")
                })?;
                assignment[machine].push(job);
            }
        }
        if jobs.next().is_some() {
            return Err(Error::internal(
                "configuration selection leaves a large job unassigned",
            ));
        }
    }

    // Small jobs: decreasing size onto the least-loaded machine.
    let mut loads: Vec<i128> = assignment
        .iter()
        .map(|jobs| jobs.iter().map(|&j| p[j]).sum())
        .collect();
    let mut small: Vec<usize> = (0..p.len()).filter(|&j| rounded[j].is_none()).collect();
    small.sort_by_key(|&j| std::cmp::Reverse(p[j]));
    for j in small {
        let target = (0..m_machines).min_by_key(|&i| loads[i]).expect("machines");
        assignment[target].push(j);
        loads[target] += p[j];
    }

    Ok(Some(Schedule::from_assignment(assignment, p)))
}

/// Smallest `tau` on the geometric grid between
/// `max(ceil(sum p / M), max p)` and `sum p` whose decision succeeds;
/// the returned makespan is at most `(1+eps)^3` times optimal.
pub fn schedule_dual_approx(inst: &SchedulingInstance) -> Result<Schedule> {
    let p = &inst.processing_times;
    if p.is_empty() {
        return Ok(Schedule::from_assignment(
            vec![Vec::new(); inst.machines],
            p,
        ));
    }
    let total: i128 = p.iter().sum();
    let max_p: i128 = *p.iter().max().expect("nonempty");
    let avg = rat_from_i128(total) / rat_from_i128(inst.machines as i128);
    let lower = rat_ceil_i128(&avg)?.max(max_p);

    // Grid tau_i = ceil(lower * (1+eps)^i), capped at the trivial total.
    let mut grid: Vec<i128> = Vec::new();
    let mut point = rat_from_i128(lower);
    let step = BigRational::one() + &inst.eps;
    loop {
        let tau = rat_ceil_i128(&point)?.min(total);
        if grid.last() != Some(&tau) {
            grid.push(tau);
        }
        if tau >= total {
            break;
        }
        point *= &step;
    }

    // Find the first grid point that succeeds. Success at `total` is
    // guaranteed, so binary search for the boundary and keep the witness.
    let mut lo = 0usize;
    let mut hi = grid.len() - 1;
    let mut best = schedule_decide_tau(inst, grid[hi])?
        .ok_or_else(|| Error::internal("decision failed at the trivial makespan"))?;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match schedule_decide_tau(inst, grid[mid])? {
            Some(s) => {
                best = s;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rat;

    fn knap(c: i128, w: &[i128], p: &[i128], mode: KnapsackMode) -> KnapsackInstance {
        KnapsackInstance::new(c, w.to_vec(), p.to_vec(), mode).unwrap()
    }

    #[test]
    fn knapsack_worked_example() {
        let k = knap(7, &[2, 3], &[3, 4], KnapsackMode::Equality);
        let (value, x) = solve_unbounded_knapsack(&k).unwrap().unwrap();
        assert_eq!(value, 10);
        assert_eq!(x, vec![2, 1]);
    }

    #[test]
    fn knapsack_zero_capacity() {
        let k = knap(0, &[2, 3], &[3, 4], KnapsackMode::Equality);
        let (value, x) = solve_unbounded_knapsack(&k).unwrap().unwrap();
        assert_eq!(value, 0);
        assert_eq!(x, vec![0, 0]);
    }

    #[test]
    fn knapsack_huge_capacity_single_item() {
        let k = knap(1_000_000, &[1], &[1], KnapsackMode::Equality);
        let (value, x) = solve_unbounded_knapsack(&k).unwrap().unwrap();
        assert_eq!(value, 1_000_000);
        assert_eq!(x, vec![1_000_000]);
    }

    #[test]
    fn knapsack_equality_can_be_infeasible() {
        let k = knap(3, &[2], &[5], KnapsackMode::Equality);
        assert_eq!(solve_unbounded_knapsack(&k).unwrap(), None);
        // At-most mode always has an answer.
        let k = knap(3, &[2], &[5], KnapsackMode::AtMost);
        assert_eq!(solve_unbounded_knapsack(&k).unwrap(), Some((5, vec![1])));
    }

    #[test]
    fn knapsack_matches_oracle_on_random_instances() {
        let mut state = 0x853C_49E6_748F_EA9Bu64;
        let mut next = |range: u64| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 33) % range
        };
        for trial in 0..30 {
            let n = 1 + (next(8) as usize);
            let c = next(500) as i128;
            let w: Vec<i128> = (0..n).map(|_| 1 + next(40) as i128).collect();
            let p: Vec<i128> = (0..n).map(|_| next(30) as i128).collect();
            let mode = if next(2) == 0 {
                KnapsackMode::Equality
            } else {
                KnapsackMode::AtMost
            };
            let k = KnapsackInstance::new(c, w.clone(), p.clone(), mode).unwrap();
            let expect = knapsack_dp_oracle(&k).unwrap();
            let got = solve_unbounded_knapsack(&k).unwrap();
            assert_eq!(got.as_ref().map(|(v, _)| *v), expect, "trial {trial}: {k:?}");
            if let Some((value, x)) = got {
                let weight: i128 = x.iter().zip(&w).map(|(&a, &b)| a * b).sum();
                let profit: i128 = x.iter().zip(&p).map(|(&a, &b)| a * b).sum();
                assert_eq!(profit, value, "trial {trial}");
                match mode {
                    KnapsackMode::Equality => assert_eq!(weight, c, "trial {trial}"),
                    KnapsackMode::AtMost => assert!(weight <= c, "trial {trial}"),
                }
            }
        }
    }

    #[test]
    fn subset_sum_examples() {
        let s = solve_unbounded_subset_sum(&knap(7, &[2, 3], &[0, 0], KnapsackMode::Equality))
            .unwrap();
        assert_eq!(s.status, SolveStatus::Feasible);
        let x = s.x.unwrap();
        assert_eq!(2 * x[0] + 3 * x[1], 7);

        let s = solve_unbounded_subset_sum(&knap(1, &[2, 4], &[0, 0], KnapsackMode::Equality))
            .unwrap();
        assert_eq!(s.status, SolveStatus::Infeasible);

        let s =
            solve_unbounded_subset_sum(&knap(5, &[5], &[0], KnapsackMode::Equality)).unwrap();
        assert_eq!(s.status, SolveStatus::Feasible);
        assert_eq!(s.x.unwrap(), vec![1]);
    }

    #[test]
    fn subset_sum_rejects_profits() {
        assert!(
            solve_unbounded_subset_sum(&knap(5, &[5], &[1], KnapsackMode::Equality)).is_err()
        );
    }

    /// Reachability over 0..=c with unlimited copies of each weight.
    fn bitset_reachable(c: i128, w: &[i128]) -> bool {
        let c = c as usize;
        let mut reach = vec![false; c + 1];
        reach[0] = true;
        for t in 1..=c {
            reach[t] = w
                .iter()
                .any(|&wi| (wi as usize) <= t && reach[t - wi as usize]);
        }
        reach[c]
    }

    #[test]
    fn subset_sum_matches_bitset_oracle() {
        let mut state = 0x9E37_79B9_7F4A_7C15u64;
        let mut next = |range: u64| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 33) % range
        };
        for trial in 0..40 {
            let n = 1 + (next(5) as usize);
            let c = next(300) as i128;
            let w: Vec<i128> = (0..n).map(|_| 1 + next(25) as i128).collect();
            let k = KnapsackInstance::new(c, w.clone(), vec![0; n], KnapsackMode::Equality)
                .unwrap();
            let expect = bitset_reachable(c, &w);
            let s = solve_unbounded_subset_sum(&k).unwrap();
            assert_eq!(
                s.status == SolveStatus::Feasible,
                expect,
                "trial {trial}: C={c} w={w:?}"
            );
        }
    }

    #[test]
    fn oracle_examples() {
        let k = knap(7, &[2, 3], &[3, 4], KnapsackMode::Equality);
        assert_eq!(knapsack_dp_oracle(&k).unwrap(), Some(10));
        let k = knap(3, &[2], &[1], KnapsackMode::Equality);
        assert_eq!(knapsack_dp_oracle(&k).unwrap(), None);
        let k = knap(4, &[2], &[3], KnapsackMode::Equality);
        assert_eq!(knapsack_dp_oracle(&k).unwrap(), Some(6));
    }

    fn sched(p: &[i128], machines: usize, eps: BigRational) -> SchedulingInstance {
        SchedulingInstance::new(p.to_vec(), machines, eps).unwrap()
    }

    fn check_schedule(s: &Schedule, inst: &SchedulingInstance) {
        assert_eq!(s.assignment.len(), inst.machines);
        let mut seen = vec![false; inst.processing_times.len()];
        for jobs in &s.assignment {
            for &j in jobs {
                assert!(!seen[j], "job {j} assigned twice");
                seen[j] = true;
            }
        }
        assert!(seen.iter().all(|&b| b), "some job unassigned");
        let true_makespan = s
            .assignment
            .iter()
            .map(|jobs| jobs.iter().map(|&j| inst.processing_times[j]).sum::<i128>())
            .max()
            .unwrap_or(0);
        assert_eq!(s.makespan, true_makespan);
    }

    #[test]
    fn decide_all_small_jobs() {
        let inst = sched(&[5, 5, 5, 5], 2, rat(1, 2));
        let s = schedule_decide_tau(&inst, 10).unwrap().unwrap();
        check_schedule(&s, &inst);
        assert_eq!(s.makespan, 10);
    }

    #[test]
    fn decide_oversized_job_fails_fast() {
        let inst = sched(&[10], 1, rat(1, 2));
        assert!(schedule_decide_tau(&inst, 5).unwrap().is_none());
    }

    #[test]
    fn decide_one_large_job_per_machine() {
        let inst = sched(&[6, 6], 2, rat(1, 4));
        let s = schedule_decide_tau(&inst, 6).unwrap().unwrap();
        check_schedule(&s, &inst);
        assert_eq!(s.makespan, 6);
    }

    #[test]
    fn dual_approx_examples() {
        let inst = sched(&[3, 3, 3, 3], 2, rat(1, 4));
        let s = schedule_dual_approx(&inst).unwrap();
        check_schedule(&s, &inst);
        assert_eq!(s.makespan, 6);

        // More machines than jobs: one job each.
        let inst = sched(&[4, 7, 2], 5, rat(1, 2));
        let s = schedule_dual_approx(&inst).unwrap();
        check_schedule(&s, &inst);
        assert_eq!(s.makespan, 7);

        // One machine: everything on it.
        let inst = sched(&[4, 7, 2], 1, rat(1, 2));
        let s = schedule_dual_approx(&inst).unwrap();
        check_schedule(&s, &inst);
        assert_eq!(s.makespan, 13);
    }

    #[test]
    fn dual_approx_no_jobs() {
        let inst = sched(&[], 3, rat(1, 2));
        let s = schedule_dual_approx(&inst).unwrap();
        assert_eq!(s.makespan, 0);
        assert_eq!(s.assignment, vec![Vec::<usize>::new(); 3]);
    }

    /// Exact optimal makespan by branching over machines (first-fit order).
    fn brute_opt(p: &[i128], machines: usize) -> i128 {
        fn go(p: &[i128], j: usize, loads: &mut Vec<i128>, best: &mut i128) {
            let cur = *loads.iter().max().unwrap();
            if cur >= *best {
                return;
            }
            if j == p.len() {
                *best = cur;
                return;
            }
            let mut tried_empty = false;
            for i in 0..loads.len() {
                if loads[i] == 0 {
                    if tried_empty {
                        continue; // identical machines: one empty suffices
                    }
                    tried_empty = true;
                }
                loads[i] += p[j];
                go(p, j + 1, loads, best);
                loads[i] -= p[j];
            }
        }
        let mut best = p.iter().sum::<i128>() + 1;
        go(p, 0, &mut vec![0; machines], &mut best);
        best
    }

    #[test]
    fn dual_approx_quality_and_decide_completeness() {
        let mut state = 0xB529_7A4D_2CC1_D99Fu64;
        let mut next = |range: u64| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 33) % range
        };
        for trial in 0..12 {
            let n = 2 + (next(6) as usize);
            let machines = 1 + (next(3) as usize);
            let p: Vec<i128> = (0..n).map(|_| 1 + next(12) as i128).collect();
            let eps = if next(2) == 0 { rat(1, 2) } else { rat(1, 4) };
            let inst = sched(&p, machines, eps.clone());
            let opt = brute_opt(&p, machines);
            let s = schedule_dual_approx(&inst).unwrap();
            check_schedule(&s, &inst);
            let bound = rat_from_i128(opt)
                * (BigRational::one() + &eps)
                * (BigRational::one() + &eps)
                * (BigRational::one() + &eps);
            assert!(
                rat_from_i128(s.makespan) <= bound,
                "trial {trial}: makespan {} vs opt {opt} (eps {eps})",
                s.makespan
            );

            // Decision completeness: None only below the true optimum.
            for tau in [opt - 1, opt, opt + 2] {
                if tau < 1 {
                    continue;
                }
                if schedule_decide_tau(&inst, tau).unwrap().is_none() {
                    assert!(tau < opt, "trial {trial}: false None at tau {tau} >= opt {opt}");
                }
            }
        }
    }
}
