//! Level planning: how many merge levels to run, where each level's box of
//! right-hand sides sits, and how large the boxes are.
//!
//! Level `i` covers targets within a fixed radius of the scaled right-hand
//! side `2^(i-K) * b` (componentwise floor). Level `K` is centered on `b`
//! itself, level 0 near the origin, and each center is the doubling of the
//! previous one up to a 0/1 rounding correction. `K` is chosen so that
//! `(6/5)^K` covers the certified l1 bound on solutions and `2^K` covers
//! `|b|_inf`, which is what lets the centers shrink all the way down.

use num::rational::BigRational;
use num::BigUint;

use crate::discrepancy::{choose_h, HerdiscBound};
use crate::error::{Error, Result};
use crate::instance::IlpInstance;
use crate::util::{checked_pow, rat_ceil_i128};

/// Geometry of one level's box: offsets `delta` with `|delta_k| <= radii[k]`,
/// linearized with row 0 as the most significant digit so that ascending
/// linear index equals lexicographic order on offset vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxShape {
    radii: Vec<i64>,
    dims: Vec<u64>,
    strides: Vec<u64>,
    cells: u64,
}

/// Hard ceiling on cells per level so linear indices stay well inside `u64`
/// (and inside backpointer payloads). Sparse tables never materialize cells,
/// so this is an index-arithmetic bound, not a memory bound.
const MAX_CELLS: u64 = 1 << 61;

impl BoxShape {
    pub fn new(radii: Vec<i64>) -> Result<Self> {
        if radii.is_empty() || radii.iter().any(|&r| r < 0) {
            return Err(Error::internal("box radii must be nonempty and nonnegative"));
        }
        let dims: Vec<u64> = radii.iter().map(|&r| 2 * r as u64 + 1).collect();
        let mut cells: u64 = 1;
        for &d in &dims {
            cells = cells
                .checked_mul(d)
                .filter(|&c| c <= MAX_CELLS)
                .ok_or_else(|| Error::capacity("level box exceeds the cell ceiling"))?;
        }
        let m = radii.len();
        let mut strides = vec![1u64; m];
        for k in (0..m.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        Ok(BoxShape {
            radii,
            dims,
            strides,
            cells,
        })
    }

    pub fn m(&self) -> usize {
        self.radii.len()
    }

    pub fn radii(&self) -> &[i64] {
        &self.radii
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn strides(&self) -> &[u64] {
        &self.strides
    }

    pub fn cells(&self) -> u64 {
        self.cells
    }

    pub fn contains(&self, delta: &[i64]) -> bool {
        delta
            .iter()
            .zip(&self.radii)
            .all(|(&d, &r)| d.abs() <= r)
    }

    pub fn index_of(&self, delta: &[i64]) -> u64 {
        debug_assert!(self.contains(delta));
        delta
            .iter()
            .zip(self.radii.iter().zip(&self.strides))
            .map(|(&d, (&r, &s))| (d + r) as u64 * s)
            .sum()
    }

    pub fn delta_of(&self, idx: u64, out: &mut [i64]) {
        let mut rest = idx;
        for k in 0..self.radii.len() {
            let digit = rest / self.strides[k];
            rest %= self.strides[k];
            out[k] = digit as i64 - self.radii[k];
        }
    }

    /// Index of the all-zero offset (the box center).
    pub fn center_index(&self) -> u64 {
        self.radii
            .iter()
            .zip(&self.strides)
            .map(|(&r, &s)| r as u64 * s)
            .sum()
    }
}

/// The full schedule for one run: `K`, the shared box shape, and the center
/// of every level's box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPlan {
    /// Number of merges; levels run `0..=k_levels`.
    pub k_levels: usize,
    pub shape: BoxShape,
    /// `centers[i]` is the box center of level `i` (length `m` each).
    pub centers: Vec<Vec<i128>>,
    /// The l1 cap the schedule was sized for.
    pub l1_cap: i128,
}

impl LevelPlan {
    /// `centers[i] - 2 * centers[i-1]`, each component 0 or 1.
    pub fn doubling_shift(&self, level: usize) -> Vec<i64> {
        let cur = &self.centers[level];
        let prev = &self.centers[level - 1];
        cur.iter()
            .zip(prev)
            .map(|(&c, &p)| {
                let r = c - 2 * p;
                debug_assert!(r == 0 || r == 1, "center doubling drifted: {r}");
                r as i64
            })
            .collect()
    }
}

/// Uniform radius `ceil(4H) + 2`. The `+2` margin absorbs the rounding of the
/// scaled centers to integer points.
pub fn uniform_radius(h: &HerdiscBound) -> Result<i64> {
    let four_h = BigRational::from_integer(4.into()) * &h.value;
    let r = rat_ceil_i128(&four_h)?
        .checked_add(2)
        .ok_or_else(|| Error::capacity("box radius overflows"))?;
    i64::try_from(r).map_err(|_| Error::capacity("box radius exceeds 64 bits"))
}

/// Per-row radii `ceil(4 * H' * Delta_k) + 2` with `H' = ceil(6 sqrt(m))`,
/// i.e. the uniform rule applied to the matrix with every row rescaled to
/// entries of magnitude at most 1. Rows of zeros fall back to the uniform
/// radius so they stay cheap without special cases downstream.
pub fn row_adaptive_radii(inst: &IlpInstance) -> Result<Vec<i64>> {
    let h = choose_h(inst, None);
    row_adaptive_radii_with(inst, &h)
}

pub(crate) fn row_adaptive_radii_with(inst: &IlpInstance, h: &HerdiscBound) -> Result<Vec<i64>> {
    let m = inst.m();
    let h_prime = crate::util::ceil_sqrt(36 * m as u128) as i128;
    let uniform = uniform_radius(h)?;
    (0..m)
        .map(|k| {
            let row_delta = inst.row(k).iter().map(|v| v.abs()).max().unwrap_or(0);
            if row_delta == 0 {
                return Ok(uniform);
            }
            let r = 4i128
                .checked_mul(h_prime)
                .and_then(|v| v.checked_mul(row_delta))
                .and_then(|v| v.checked_add(2))
                .ok_or_else(|| Error::capacity("row-adaptive radius overflows"))?;
            i64::try_from(r).map_err(|_| Error::capacity("row-adaptive radius exceeds 64 bits"))
        })
        .collect()
}

/// Worst-case l1 norm of some optimal solution:
/// `n^2 * (m * (Delta + |b|_inf))^(2m+1)`. Everything checked; callers treat
/// an overflow as "instance too large for this bound".
pub fn l1_norm_bound(n: usize, m: usize, delta: i128, b_inf: i128) -> Result<i128> {
    if n == 0 || m == 0 {
        return Err(Error::internal("l1_norm_bound needs n >= 1 and m >= 1"));
    }
    let base = (m as i128)
        .checked_mul(
            delta
                .checked_add(b_inf)
                .ok_or_else(|| Error::capacity("l1 bound: Delta + |b| overflows"))?,
        )
        .ok_or_else(|| Error::capacity("l1 bound: m * (Delta + |b|) overflows"))?;
    let exp = u32::try_from(2 * m + 1).map_err(|_| Error::capacity("l1 bound exponent"))?;
    let pow = checked_pow(base, exp, "l1 bound")?;
    (n as i128)
        .checked_mul(n as i128)
        .and_then(|v| v.checked_mul(pow))
        .ok_or_else(|| Error::capacity("l1 bound overflows 128 bits"))
}

/// A cheap, certified cap on `|x|_1` over *all* feasible solutions.
///
/// For any aggregation vector `u`, feasibility forces `u^T b = u^T A x`; if
/// every aggregated column coefficient `u^T A_j` is `>= 1` this pins
/// `|x|_1 <= u^T b / min_j u^T A_j` (symmetrically for all `<= -1`). A sign
/// contradiction (`u^T A >= 1` but `u^T b < 0`) caps at 0: nothing beyond
/// `x = 0` can be feasible.
///
/// Candidates tried: each single row, the all-ones combination, and the
/// positional weights `u_1 = 1, u_{l+1} = Delta * u_l + 1` that collapse
/// digit-split systems (low digits plus carries) back into the original
/// magnitude. Returns `None` when no candidate qualifies.
pub fn aggregated_row_cap(inst: &IlpInstance, b: &[i128]) -> Option<i128> {
    let mut best: Option<i128> = None;
    for cand in candidate_aggregates(inst) {
        if let Some((_, min_w, ub)) = qualify_aggregate(inst, b, &cand) {
            let cap = if ub < 0 { 0 } else { ub / min_w };
            best = Some(best.map_or(cap, |old: i128| old.min(cap)));
        }
    }
    best
}

/// The aggregation vectors worth trying: each single row, the all-ones
/// combination, and the positional weights `u_1 = 1, u_{l+1} = Delta * u_l + 1`
/// that collapse digit-split systems (low digits plus carries) back into the
/// original magnitude.
fn candidate_aggregates(inst: &IlpInstance) -> Vec<Vec<i128>> {
    let m = inst.m();
    let mut cands = Vec::with_capacity(m + 2);
    for k in 0..m {
        let mut u = vec![0i128; m];
        u[k] = 1;
        cands.push(u);
    }
    cands.push(vec![1i128; m]);
    if m > 1 {
        let delta = crate::instance::max_abs_entry(inst);
        if delta >= 1 {
            let mut chain = vec![1i128; m];
            let mut ok = true;
            for k in 1..m {
                match delta
                    .checked_mul(chain[k - 1])
                    .and_then(|v| v.checked_add(1))
                {
                    Some(v) => chain[k] = v,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                cands.push(chain);
            }
        }
    }
    cands
}

/// Checks one aggregate and orients it positively: returns
/// `Some((u', min_w, ub))` with `u' in {u, -u}` such that every column weight
/// `u'^T A_j >= 1`, `min_w` the smallest such weight and `ub = u'^T b`.
/// `None` if any weight is zero, signs are mixed, or arithmetic overflows.
fn qualify_aggregate(
    inst: &IlpInstance,
    b: &[i128],
    u: &[i128],
) -> Option<(Vec<i128>, i128, i128)> {
    let n = inst.n();
    if n == 0 {
        return None;
    }
    let mut min_pos: Option<i128> = None;
    let mut max_neg: Option<i128> = None;
    for j in 0..n {
        let mut w: i128 = 0;
        for (k, &uk) in u.iter().enumerate() {
            w = uk
                .checked_mul(inst.entry(k, j))
                .and_then(|t| w.checked_add(t))?;
        }
        if w >= 1 {
            if max_neg.is_some() {
                return None; // mixed signs: candidate certifies nothing
            }
            min_pos = Some(min_pos.map_or(w, |old: i128| old.min(w)));
        } else if w <= -1 {
            if min_pos.is_some() {
                return None;
            }
            max_neg = Some(max_neg.map_or(w, |old: i128| old.max(w)));
        } else {
            return None; // a zero coefficient leaves x_j unconstrained
        }
    }
    let mut ub: i128 = 0;
    for (k, &uk) in u.iter().enumerate() {
        ub = uk.checked_mul(b[k]).and_then(|t| ub.checked_add(t))?;
    }
    match (min_pos, max_neg) {
        (Some(w), None) => Some((u.to_vec(), w, ub)),
        (None, Some(w)) => {
            let flipped: Option<Vec<i128>> = u.iter().map(|&v| v.checked_neg()).collect();
            Some((flipped?, w.checked_neg()?, ub.checked_neg()?))
        }
        _ => None,
    }
}

/// A certified band on reachable right-hand sides: `u^T A_j >= 1` for every
/// column `j`, so every partial sum `b'` of any nonnegative decomposition of
/// `b` (a sub-multiset of columns) satisfies `0 <= u^T b' <= u^T b = ub`.
/// Cells outside the band can never contribute to a solution for `b` and may
/// be dropped from every level table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ReachCut {
    pub u: Vec<i128>,
    pub ub: i128,
}

/// All qualifying aggregates for this target, oriented positively.
pub(crate) fn reachability_cuts(inst: &IlpInstance, b: &[i128]) -> Vec<ReachCut> {
    let mut cuts: Vec<ReachCut> = Vec::new();
    for cand in candidate_aggregates(inst) {
        if let Some((u, _, ub)) = qualify_aggregate(inst, b, &cand) {
            // Distinct candidates can orient to the same vector (all-ones
            // equals the single row at m = 1); duplicates only cost time.
            if !cuts.iter().any(|c| c.u == u) {
                cuts.push(ReachCut { u, ub });
            }
        }
    }
    cuts
}

/// Per-level admissibility test derived from [`ReachCut`]s. A level stores
/// offsets `delta` relative to its center `c`, so the band `0 <= u^T (c +
/// delta) <= ub` becomes `-u^T c <= u^T delta <= ub - u^T c`; the constructor
/// precomputes those ends. Cuts whose band arithmetic would overflow are
/// dropped: the filter is an optimization, never a correctness requirement.
#[derive(Debug, Clone)]
pub(crate) struct CellFilter {
    bands: Vec<(Vec<i128>, i128, i128)>,
}

impl CellFilter {
    /// A filter that admits everything.
    #[cfg(test)]
    pub fn none() -> CellFilter {
        CellFilter { bands: Vec::new() }
    }

    pub fn at_center(cuts: &[ReachCut], center: &[i128]) -> CellFilter {
        let mut bands = Vec::with_capacity(cuts.len());
        'cut: for cut in cuts {
            let mut s: i128 = 0;
            for (k, &uk) in cut.u.iter().enumerate() {
                match uk.checked_mul(center[k]).and_then(|t| s.checked_add(t)) {
                    Some(v) => s = v,
                    None => continue 'cut,
                }
            }
            let (lo, hi) = match (0i128.checked_sub(s), cut.ub.checked_sub(s)) {
                (Some(lo), Some(hi)) => (lo, hi),
                _ => continue 'cut,
            };
            bands.push((cut.u.clone(), lo, hi));
        }
        CellFilter { bands }
    }

    /// Whether the cell at this offset can be part of some decomposition of
    /// the target. Overflow in the dot product means the offset is far
    /// outside every certified band, so the cell is rejected.
    #[inline]
    pub fn admits(&self, delta: &[i64]) -> bool {
        for (u, lo, hi) in &self.bands {
            let mut s: i128 = 0;
            for (k, &uk) in u.iter().enumerate() {
                match uk.checked_mul(delta[k] as i128).and_then(|t| s.checked_add(t)) {
                    Some(v) => s = v,
                    None => return false,
                }
            }
            if s < *lo || s > *hi {
                return false;
            }
        }
        true
    }
}

/// Smallest `K` with `(6/5)^K >= cap`, exactly.
pub(crate) fn ceil_log_six_fifths(cap: i128) -> usize {
    if cap <= 1 {
        return 0;
    }
    let mut num = BigUint::from(1u32); // 6^K
    let mut den = BigUint::from(cap as u128); // cap * 5^K
    let mut k = 0usize;
    while num < den {
        num *= 6u32;
        den *= 5u32;
        k += 1;
    }
    k
}

/// Smallest `K` with `2^K >= v` (for `v >= 1`).
pub(crate) fn ceil_log2(v: i128) -> usize {
    if v <= 1 {
        return 0;
    }
    (128 - ((v - 1) as u128).leading_zeros()) as usize
}

/// Floor of `v / 2^s` (toward minus infinity).
fn floor_shift(v: i128, s: usize) -> i128 {
    if s == 0 {
        v
    } else if s >= 127 {
        if v >= 0 {
            0
        } else {
            -1
        }
    } else {
        v.div_euclid(1i128 << s)
    }
}

/// Bytes per cell of a dense value-resident level: 16 (value) + 1
/// (finiteness) + 8 (backpointer).
pub(crate) const DENSE_CELL_BYTES: u64 = 25;

/// Fails fast, with the byte estimate, if two dense value-resident levels
/// would already exceed `budget_bytes`. That pair is the allocation floor of
/// a dense run; sparse runs are accounted incrementally instead.
pub(crate) fn dense_budget_check(shape: &BoxShape, budget_bytes: u64) -> Result<()> {
    let estimate = 2u128 * shape.cells() as u128 * DENSE_CELL_BYTES as u128;
    if estimate > budget_bytes as u128 {
        return Err(Error::Budget {
            estimated_bytes: estimate,
            budget_bytes,
        });
    }
    Ok(())
}

/// Builds the level schedule for right-hand side `b` and the given radii.
pub fn plan_levels_with(b: &[i128], radii: Vec<i64>, l1_cap: i128) -> Result<LevelPlan> {
    if l1_cap < 1 {
        return Err(Error::internal("plan_levels requires l1_cap >= 1"));
    }
    let shape = BoxShape::new(radii)?;
    if b.len() != shape.m() {
        return Err(Error::internal("plan_levels: b length != radii length"));
    }
    let b_inf = b.iter().map(|v| v.abs()).max().unwrap_or(0);
    let k_levels = ceil_log_six_fifths(l1_cap).max(ceil_log2(b_inf + 1)).max(1);
    let centers: Vec<Vec<i128>> = (0..=k_levels)
        .map(|i| b.iter().map(|&v| floor_shift(v, k_levels - i)).collect())
        .collect();
    Ok(LevelPlan {
        k_levels,
        shape,
        centers,
        l1_cap,
    })
}

/// Level schedule from an instance and a certified discrepancy bound, with
/// uniform radii, failing fast if a dense run cannot fit the byte budget.
pub fn plan_levels(
    inst: &IlpInstance,
    h: &HerdiscBound,
    l1_cap: i128,
    budget_bytes: u64,
) -> Result<LevelPlan> {
    let r = uniform_radius(h)?;
    let plan = plan_levels_with(inst.b(), vec![r; inst.m()], l1_cap)?;
    dense_budget_check(&plan.shape, budget_bytes)?;
    Ok(plan)
}
