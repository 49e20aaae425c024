//! Encodings between problem families: unbounded knapsack and k-SUM into
//! the row-count-m equality form the solver consumes.
//!
//! Two constructions do the heavy lifting:
//!
//! * `digit_split` rewrites a single nonnegative equality row in base
//!   `Delta = floor(C^(1/m)) + 1` as `m` rows chained by carry variables,
//!   trading one row with huge coefficients for `m` rows with coefficients
//!   `O(C^(1/m))`.
//! * `ksum_to_ilp` bit-packs a k-SUM instance into one equality over
//!   disjoint bit fields (value, set marker, element count) separated by
//!   buffer zeros wide enough that field sums never carry across.
//!
//! Both are exact: feasibility and optima transfer in each direction, which
//! the tests check against brute-force enumeration.

use crate::error::{Error, Result};
use crate::instance::IlpInstance;
use crate::util::checked_pow;

/// Unbounded knapsack: multiplicities `x >= 0` with `sum w_i x_i (= | <=) C`
/// maximizing `sum p_i x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInstance {
    pub capacity: i128,
    pub weights: Vec<i128>,
    pub profits: Vec<i128>,
    pub mode: KnapsackMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnapsackMode {
    /// `sum w_i x_i = C` exactly.
    Equality,
    /// `sum w_i x_i <= C`.
    AtMost,
}

impl KnapsackInstance {
    pub fn new(
        capacity: i128,
        weights: Vec<i128>,
        profits: Vec<i128>,
        mode: KnapsackMode,
    ) -> Result<Self> {
        if capacity < 0 {
            return Err(Error::guard("knapsack capacity must be nonnegative"));
        }
        if weights.len() != profits.len() {
            return Err(Error::guard("knapsack weights and profits differ in length"));
        }
        if weights.iter().any(|&w| w <= 0) {
            return Err(Error::guard("knapsack weights must be positive"));
        }
        if profits.iter().any(|&p| p < 0) {
            return Err(Error::guard("knapsack profits must be nonnegative"));
        }
        Ok(KnapsackInstance {
            capacity,
            weights,
            profits,
            mode,
        })
    }
}

/// k-SUM: pick one element from each of the `k >= 2` sets so the picks sum
/// to `T`. Elements exceeding `T` can never participate and are dropped on
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSumInstance {
    pub target: i128,
    pub sets: Vec<Vec<i128>>,
}

impl KSumInstance {
    pub fn new(target: i128, sets: Vec<Vec<i128>>) -> Result<Self> {
        if target < 0 {
            return Err(Error::guard("k-SUM target must be nonnegative"));
        }
        if sets.len() < 2 {
            return Err(Error::guard("k-SUM needs at least two sets"));
        }
        if sets.iter().flatten().any(|&z| z < 0) {
            return Err(Error::guard("k-SUM elements must be nonnegative"));
        }
        let sets = sets
            .into_iter()
            .map(|s| s.into_iter().filter(|&z| z <= target).collect())
            .collect();
        Ok(KSumInstance { target, sets })
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    /// Column order used by [`ksum_to_ilp`]: sets in order, elements in
    /// stored order, as `(set_index, element)`.
    pub fn columns(&self) -> Vec<(usize, i128)> {
        self.sets
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&z| (i, z)))
            .collect()
    }

    /// Interprets a solver witness for the packed instance: `Some` tuple of
    /// one element per set iff the multiplicities select exactly that.
    pub fn decode_witness(&self, x: &[i128]) -> Option<Vec<i128>> {
        let columns = self.columns();
        if x.len() != columns.len() {
            return None;
        }
        let mut picks: Vec<Option<i128>> = vec![None; self.k()];
        for (&(set, z), &count) in columns.iter().zip(x) {
            match count {
                0 => {}
                1 if picks[set].is_none() => picks[set] = Some(z),
                _ => return None,
            }
        }
        let tuple: Option<Vec<i128>> = picks.into_iter().collect();
        let tuple = tuple?;
        (tuple.iter().sum::<i128>() == self.target).then_some(tuple)
    }
}

/// `floor(C^(1/m))`: the unique `r >= 0` with `r^m <= C < (r+1)^m`.
pub fn integer_root(c: i128, m: u32) -> Result<i128> {
    if c < 0 {
        return Err(Error::guard("integer root of a negative number"));
    }
    if m == 0 {
        return Err(Error::guard("integer root needs a positive exponent"));
    }
    if m == 1 {
        return Ok(c);
    }
    let fits = |r: i128| checked_pow(r, m, "integer root").map_or(false, |p| p <= c);
    let mut lo: i128 = 0;
    let mut hi: i128 = c.min(1 << (127 / m + 1));
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

/// Transcribes unbounded knapsack as a one-row equality instance. The
/// at-most mode first appends a weight-1 profit-0 item whose multiplicity
/// absorbs the slack.
pub fn uks_to_ilp1(k: &KnapsackInstance) -> Result<IlpInstance> {
    let mut weights = k.weights.clone();
    let mut profits = k.profits.clone();
    if k.mode == KnapsackMode::AtMost {
        weights.push(1);
        profits.push(0);
    }
    IlpInstance::new(vec![weights], vec![k.capacity], profits)
}

/// Splits a nonnegative single-row instance into `m` rows of base-`Delta`
/// digits, `Delta = floor(b^(1/m)) + 1`, linked by `m - 1` carry variables
/// (coefficient `-Delta` in their own row, `+1` in the next). Carries get
/// objective 0; witnesses project to the original by dropping the final
/// `m - 1` entries.
pub fn digit_split(inst1: &IlpInstance, m_rows: usize) -> Result<IlpInstance> {
    if inst1.m() != 1 {
        return Err(Error::guard("digit split expects a single-row instance"));
    }
    if m_rows == 0 {
        return Err(Error::guard("digit split needs at least one output row"));
    }
    let c_target = inst1.b()[0];
    if c_target < 0 || inst1.row(0).iter().any(|&w| w < 0) {
        return Err(Error::guard(
            "digit split expects nonnegative coefficients and right-hand side",
        ));
    }
    if m_rows == 1 {
        return Ok(inst1.clone());
    }

    let m = m_rows;
    let delta = integer_root(c_target, m as u32)? + 1;
    let limit = checked_pow(delta, m as u32, "digit split range")?;
    let digits = |mut v: i128| -> Vec<i128> {
        let mut out = Vec::with_capacity(m);
        for _ in 0..m {
            out.push(v % delta);
            v /= delta;
        }
        out
    };

    let n = inst1.n();
    let mut rows = vec![vec![0i128; n + m - 1]; m];
    for (j, &w) in inst1.row(0).iter().enumerate() {
        if w >= limit {
            return Err(Error::guard(format!(
                "coefficient {w} needs more than {m} base-{delta} digits"
            )));
        }
        for (ell, d) in digits(w).into_iter().enumerate() {
            rows[ell][j] = d;
        }
    }
    for ell in 0..m - 1 {
        // Carry y_ell: subtracted at its own row, fed into the next.
        rows[ell][n + ell] = -delta;
        rows[ell + 1][n + ell] = 1;
    }
    let b = digits(c_target);

    if inst1.feasibility_only() {
        IlpInstance::new_feasibility(rows, b)
    } else {
        let mut c = inst1.c().to_vec();
        c.resize(n + m - 1, 0);
        IlpInstance::new(rows, b, c)
    }
}

/// Bit widths and offsets of the k-SUM packing. Layout, least significant
/// first: value field (`w_t` bits), buffer, set-marker field (`k + 1`
/// bits), buffer, count field; buffers are `w_k` bits of zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct PackingLayout {
    value_bits: u32,
    guard_bits: u32,
    marker_bits: u32,
}

impl PackingLayout {
    fn for_instance(target: i128, k: usize) -> Result<PackingLayout> {
        let bits = |v: i128| 128 - (v as u128).leading_zeros();
        let layout = PackingLayout {
            value_bits: bits(target + 1) + 1,
            guard_bits: bits(k as i128 + 1) + 1,
            marker_bits: k as u32 + 1,
        };
        if layout.total_bits() > 126 {
            return Err(Error::capacity(
                "packed k-SUM numbers exceed 126 bits; shrink T or k",
            ));
        }
        Ok(layout)
    }

    fn marker_shift(&self) -> u32 {
        self.value_bits + self.guard_bits
    }

    fn count_shift(&self) -> u32 {
        self.marker_shift() + self.marker_bits + self.guard_bits
    }

    fn total_bits(&self) -> u32 {
        self.count_shift() + self.guard_bits
    }
}

/// Packs k-SUM as a single-row feasibility instance: one column per
/// element. An element `z` of the `i`-th set (1-based) packs its value,
/// the marker `2^i`, and a count of 1; the target packs `T`, the full
/// marker sum `2 + 4 + ... + 2^k`, and count `k`. Buffer fields keep the
/// three sums from interfering, so multiplicities solving the packed
/// equality are exactly selections of one element per set summing to `T`.
pub fn ksum_to_ilp(ks: &KSumInstance) -> Result<IlpInstance> {
    if ks.target < 1 {
        return Err(Error::guard("k-SUM packing expects a positive target"));
    }
    let k = ks.k();
    let layout = PackingLayout::for_instance(ks.target, k)?;
    let marker_shift = layout.marker_shift();
    let count_shift = layout.count_shift();

    let row: Vec<i128> = ks
        .columns()
        .into_iter()
        .map(|(set, z)| z + (1i128 << (set + 1) << marker_shift) + (1i128 << count_shift))
        .collect();
    // Sum of the per-set markers 2^1 .. 2^k.
    let all_markers = (1i128 << (k + 1)) - 2;
    let target = ks.target + (all_markers << marker_shift) + ((k as i128) << count_shift);
    IlpInstance::new_feasibility(vec![row], vec![target])
}

/// The packing followed by the digit split: coefficients drop from
/// `O(k^3 2^k T)` to the `m`-th root of that.
pub fn ksum_to_ilpm(ks: &KSumInstance, m_rows: usize) -> Result<IlpInstance> {
    digit_split(&ksum_to_ilp(ks)?, m_rows)
}
