//! Right-hand-side reduction through an optimal fractional vertex.
//!
//! An optimal vertex `x*` of the relaxation `max{c^T x : Ax = b, x >= 0}`
//! lies within `m(2m*Delta+1)^m` of some optimal integral solution in the
//! l1 norm. Rounding `x*` down by that margin gives a nonnegative integer
//! shift `ell` such that solving the instance with right-hand side
//! `b - A*ell` (whose entries are bounded by `Delta*m^2*(2m*Delta+1)^m`
//! independently of `|b|`) and adding `ell` back recovers an optimum of the
//! original. This makes the dynamic program's level count independent of
//! how large `b` is.
//!
//! The relaxation is solved exactly over the rationals by basis
//! enumeration: every basic solution is the unique solution of a column
//! subset of size at most `m`, and LP unboundedness is witnessed by a
//! sign-uniform kernel vector of some subset of size at most `m + 1` with
//! positive objective. Fixed small `m` keeps the enumeration polynomial.

use itertools::Itertools;
use num::rational::BigRational;
use num::{Signed, Zero};

use crate::dp::{solve_with, SolveStats, SolverConfig};
use crate::error::{Error, Result};
use crate::instance::{max_abs_entry, IlpInstance, Solution, SolveStatus};
use crate::util::{checked_pow, rat_ceil_i128, rat_from_i128};

/// Outcome class of the fractional relaxation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// An optimal basic solution of the relaxation (exact rationals).
#[derive(Debug, Clone)]
pub struct FractionalVertex {
    /// Length-n solution vector; zero outside `basis`.
    pub x_star: Vec<BigRational>,
    /// Indices of the (at most m) columns allowed to be nonzero,
    /// ascending.
    pub basis: Vec<usize>,
    pub lp_status: LpStatus,
}

impl FractionalVertex {
    /// `c^T x_star` as an exact rational.
    pub fn objective(&self, inst: &IlpInstance) -> BigRational {
        self.x_star
            .iter()
            .zip(inst.c())
            .map(|(x, &c)| x * rat_from_i128(c))
            .sum()
    }
}

/// A shift `ell` and the instance with right-hand side `b - A*ell`.
#[derive(Debug, Clone)]
pub struct ProximityReduction {
    pub ell: Vec<i128>,
    pub reduced: IlpInstance,
}

/// Subset-enumeration ceiling: the LP path refuses instances whose basis
/// count would not finish promptly, pointing callers at the plain solver.
const ENUM_BUDGET: u128 = 5_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Solves `cols * y = b` exactly. `Some(y)` iff the columns are linearly
/// independent and the system is consistent (so `y` is unique).
fn solve_unique(cols: &[&[i128]], b: &[i128]) -> Option<Vec<BigRational>> {
    let m = b.len();
    let s = cols.len();
    let mut mat: Vec<Vec<BigRational>> = (0..m)
        .map(|k| {
            let mut row: Vec<BigRational> = cols.iter().map(|col| rat_from_i128(col[k])).collect();
            row.push(rat_from_i128(b[k]));
            row
        })
        .collect();

    let mut pivot_rows = Vec::with_capacity(s);
    let mut row = 0usize;
    for col in 0..s {
        let Some(p) = (row..m).find(|&r| !mat[r][col].is_zero()) else {
            return None; // dependent columns: no unique solution
        };
        mat.swap(row, p);
        for r in 0..m {
            if r != row && !mat[r][col].is_zero() {
                let factor = &mat[r][col] / &mat[row][col];
                for t in col..=s {
                    let delta = &factor * &mat[row][t];
                    mat[r][t] = &mat[r][t] - delta;
                }
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    // Rows beyond the pivots must have zero right-hand side.
    if (row..m).any(|r| !mat[r][s].is_zero()) {
        return None;
    }
    Some(
        (0..s)
            .map(|col| &mat[pivot_rows[col]][s] / &mat[pivot_rows[col]][col])
            .collect(),
    )
}

/// One-dimensional kernel vector of the column subset, if its rank is
/// exactly `s - 1` (the minimal-support case that generates extreme rays).
fn kernel_vector(cols: &[&[i128]], m: usize) -> Option<Vec<BigRational>> {
    let s = cols.len();
    let mut mat: Vec<Vec<BigRational>> = (0..m)
        .map(|k| cols.iter().map(|col| rat_from_i128(col[k])).collect())
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut free_col = None;
    let mut row = 0usize;
    for col in 0..s {
        match (row..m).find(|&r| !mat[r][col].is_zero()) {
            None => {
                if free_col.is_some() {
                    return None; // kernel dimension >= 2
                }
                free_col = Some(col);
            }
            Some(p) => {
                mat.swap(row, p);
                for r in 0..m {
                    if r != row && !mat[r][col].is_zero() {
                        let factor = &mat[r][col] / &mat[row][col];
                        for t in col..s {
                            let delta = &factor * &mat[row][t];
                            mat[r][t] = &mat[r][t] - delta;
                        }
                    }
                }
                pivots.push((row, col));
                row += 1;
            }
        }
    }
    let free = free_col?;
    let mut v = vec![BigRational::zero(); s];
    v[free] = BigRational::from_integer(1.into());
    for &(r, c) in &pivots {
        v[c] = -(&mat[r][free] / &mat[r][c]);
    }
    Some(v)
}

/// Exact optimum of the relaxation by enumerating basic solutions, with
/// unboundedness detected over kernel vectors of subsets one larger.
///
/// Errors with a capacity message when the subset count is not desk-scale;
/// such instances should go straight to the plain solver.
pub fn lp_vertex_optimum(inst: &IlpInstance) -> Result<FractionalVertex> {
    let m = inst.m();
    let n = inst.n();
    let max_subset = (m + 1).min(n);
    let total: u128 = (0..=max_subset).map(|s| binomial(n, s)).sum();
    if total > ENUM_BUDGET {
        return Err(Error::capacity(format!(
            "LP basis enumeration needs {total} subsets (budget {ENUM_BUDGET}); \
             use the plain solver instead"
        )));
    }

    let cols: Vec<&[i128]> = (0..n).map(|j| inst.col(j)).collect();

    // Unboundedness: a nonnegative kernel direction with positive objective.
    for s in 1..=max_subset {
        for subset in (0..n).combinations(s) {
            let sub_cols: Vec<&[i128]> = subset.iter().map(|&j| cols[j]).collect();
            let Some(mut v) = kernel_vector(&sub_cols, m) else {
                continue;
            };
            if v.iter().all(|t| !t.is_positive()) {
                for t in v.iter_mut() {
                    *t = -t.clone();
                }
            }
            if v.iter().any(|t| t.is_negative()) {
                continue; // mixed signs: not a direction of the cone
            }
            let gain: BigRational = subset
                .iter()
                .zip(&v)
                .map(|(&j, t)| rat_from_i128(inst.c()[j]) * t)
                .sum();
            if gain.is_positive() {
                return Ok(FractionalVertex {
                    x_star: vec![BigRational::zero(); n],
                    basis: Vec::new(),
                    lp_status: LpStatus::Unbounded,
                });
            }
        }
    }

    let mut best: Option<(BigRational, Vec<usize>, Vec<BigRational>)> = None;
    for s in 0..=m.min(n) {
        for subset in (0..n).combinations(s) {
            let sub_cols: Vec<&[i128]> = subset.iter().map(|&j| cols[j]).collect();
            let Some(y) = solve_unique(&sub_cols, inst.b()) else {
                continue;
            };
            if y.iter().any(|t| t.is_negative()) {
                continue;
            }
            let value: BigRational = subset
                .iter()
                .zip(&y)
                .map(|(&j, t)| rat_from_i128(inst.c()[j]) * t)
                .sum();
            let better = match &best {
                None => true,
                Some((bv, bb, _)) => value > *bv || (value == *bv && subset < *bb),
            };
            if better {
                best = Some((value, subset, y));
            }
        }
    }

    match best {
        None => Ok(FractionalVertex {
            x_star: vec![BigRational::zero(); n],
            basis: Vec::new(),
            lp_status: LpStatus::Infeasible,
        }),
        Some((_, basis, y)) => {
            let mut x_star = vec![BigRational::zero(); n];
            for (&j, t) in basis.iter().zip(y) {
                x_star[j] = t;
            }
            debug_assert!(exact_ax_matches(inst, &x_star));
            Ok(FractionalVertex {
                x_star,
                basis,
                lp_status: LpStatus::Optimal,
            })
        }
    }
}

fn exact_ax_matches(inst: &IlpInstance, x: &[BigRational]) -> bool {
    (0..inst.m()).all(|k| {
        let lhs: BigRational = (0..inst.n())
            .map(|j| rat_from_i128(inst.entry(k, j)) * &x[j])
            .sum();
        lhs == rat_from_i128(inst.b()[k])
    })
}

/// `m * (2m*Delta + 1)^m`: the certified l1 distance from an optimal vertex
/// to some optimal integral solution.
fn proximity_distance(m: usize, delta: i128) -> Result<i128> {
    let base = (2 * m as i128)
        .checked_mul(delta)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::capacity("proximity distance overflows 128 bits"))?;
    let pow = checked_pow(base, m as u32, "proximity distance")?;
    (m as i128)
        .checked_mul(pow)
        .ok_or_else(|| Error::capacity("proximity distance overflows 128 bits"))
}

/// Shifts the instance by `ell_i = max{0, ceil(x*_i) - m(2m*Delta+1)^m}` and
/// checks the guaranteed bound on the reduced right-hand side.
pub fn proximity_reduce(inst: &IlpInstance, v: &FractionalVertex) -> Result<ProximityReduction> {
    if v.lp_status != LpStatus::Optimal {
        return Err(Error::guard(
            "proximity reduction requires an optimal fractional vertex",
        ));
    }
    let m = inst.m();
    let delta = max_abs_entry(inst);
    let dist = proximity_distance(m, delta)?;

    let ell: Vec<i128> = v
        .x_star
        .iter()
        .map(|x| Ok(rat_ceil_i128(x)?.saturating_sub(dist).max(0)))
        .collect::<Result<_>>()?;
    let shift = inst.eval_ax(&ell)?;
    let b_reduced: Vec<i128> = inst
        .b()
        .iter()
        .zip(&shift)
        .map(|(&b, &s)| {
            b.checked_sub(s)
                .ok_or_else(|| Error::capacity("reduced right-hand side overflows 128 bits"))
        })
        .collect::<Result<_>>()?;

    // ||b - A*ell||_inf <= Delta * m^2 * (2m*Delta+1)^m; a violation means
    // the vertex fed in was not an exact optimal basic solution.
    let bound = delta
        .checked_mul(m as i128)
        .and_then(|v| v.checked_mul(dist))
        .ok_or_else(|| Error::capacity("reduced right-hand-side bound overflows 128 bits"))?;
    if let Some(&bad) = b_reduced.iter().find(|v| v.abs() > bound) {
        return Err(Error::internal(format!(
            "reduced right-hand side entry {bad} exceeds the certified bound {bound}"
        )));
    }

    let rows: Vec<Vec<i128>> = (0..m).map(|k| inst.row(k)).collect();
    let reduced = if inst.feasibility_only() {
        IlpInstance::new_feasibility(rows, b_reduced)?
    } else {
        IlpInstance::new(rows, b_reduced, inst.c().to_vec())?
    };
    Ok(ProximityReduction { ell, reduced })
}

/// Full pipeline: relaxation, reduction, plain solve on the shrunk
/// right-hand side, and shift back. Matches [`solve_with`] on every
/// instance; pays off when `|b|` is much larger than the matrix entries.
///
/// An unbounded relaxation proves nothing about the integral problem, so
/// that case falls through to the plain solver.
pub fn solve_with_proximity(inst: &IlpInstance) -> Result<Solution> {
    solve_with_proximity_config(inst, &SolverConfig::default())
}

pub fn solve_with_proximity_config(
    inst: &IlpInstance,
    config: &SolverConfig,
) -> Result<Solution> {
    Ok(solve_with_proximity_outcome(inst, config)?.0)
}

/// Like [`solve_with_proximity_config`], but also hands back the stats of
/// the dynamic program that ran on the shrunk instance — `None` when the
/// infeasible relaxation short-circuited before any table was built.
pub fn solve_with_proximity_outcome(
    inst: &IlpInstance,
    config: &SolverConfig,
) -> Result<(Solution, Option<SolveStats>)> {
    let v = lp_vertex_optimum(inst)?;
    match v.lp_status {
        LpStatus::Infeasible => Ok((Solution::infeasible(), None)),
        LpStatus::Unbounded => {
            let out = solve_with(inst, config)?;
            Ok((out.solution, Some(out.stats)))
        }
        LpStatus::Optimal => {
            let reduction = proximity_reduce(inst, &v)?;
            let out = solve_with(&reduction.reduced, config)?;
            let (sol, stats) = (out.solution, out.stats);
            match sol.status {
                SolveStatus::Infeasible => Ok((Solution::infeasible(), Some(stats))),
                SolveStatus::Unbounded => Err(Error::internal(
                    "bounded relaxation but unbounded integral problem",
                )),
                SolveStatus::Optimal | SolveStatus::Feasible => {
                    let x_red = sol
                        .x
                        .ok_or_else(|| Error::internal("solved status without witness"))?;
                    let x: Vec<i128> = x_red
                        .iter()
                        .zip(&reduction.ell)
                        .map(|(&a, &l)| {
                            a.checked_add(l).ok_or_else(|| {
                                Error::capacity("shifted witness overflows 128 bits")
                            })
                        })
                        .collect::<Result<_>>()?;
                    if inst.eval_ax(&x)?.as_slice() != inst.b() {
                        return Err(Error::internal(
                            "proximity-shifted witness violates the constraints",
                        ));
                    }
                    if sol.status == SolveStatus::Feasible {
                        Ok((Solution::feasible(x), Some(stats)))
                    } else {
                        let value = inst.objective(&x)?;
                        Ok((Solution::optimal(value, x), Some(stats)))
                    }
                }
            }
        }
    }
}
