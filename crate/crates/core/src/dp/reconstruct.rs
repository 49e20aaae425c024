//! Witness reconstruction: descend the backpointer chain from the target
//! cell down to level-0 columns.
//!
//! A naive recursive descent would branch twofold per level (2^K leaves).
//! Instead the walk carries a multiset of (cell, multiplicity) per level:
//! splitting a cell pushes both halves with the same multiplicity, and
//! shared cells accumulate. The work per level is proportional to the number
//! of distinct finite cells, never to the leaf count. Multiplicities are
//! exact big integers: the all-zero subtrees hanging off a deep chain can
//! number 2^K even though every actual column count is small.

use std::collections::HashMap;

use num::bigint::BigUint;
use num::One;

use crate::dp::level::{BackKind, StoredLevel};
use crate::dp::plan::LevelPlan;
use crate::error::{Error, Result};

/// Walks `stored[0..=K]` backpointers from `target_idx` at level K and
/// returns column multiplicities (length `n`).
pub(crate) fn reconstruct(
    stored: &[StoredLevel],
    plan: &LevelPlan,
    target_idx: u64,
    n: usize,
) -> Result<Vec<i128>> {
    let shape = &plan.shape;
    let m = shape.m();
    let mut counts: HashMap<u64, BigUint> = HashMap::new();
    counts.insert(target_idx, BigUint::one());

    let mut d_cur = vec![0i64; m];
    let mut d_half = vec![0i64; m];
    for level in (1..=plan.k_levels).rev() {
        let shift = plan.doubling_shift(level);
        let mut next: HashMap<u64, BigUint> = HashMap::with_capacity(counts.len() * 2);
        for (&idx, mult) in &counts {
            match stored[level].back(idx).kind() {
                BackKind::Split(first_half) => {
                    shape.delta_of(idx, &mut d_cur);
                    shape.delta_of(first_half, &mut d_half);
                    for d in 0..m {
                        // Second half: d''' = d' + shift - d''.
                        d_half[d] = d_cur[d] + shift[d] - d_half[d];
                        if d_half[d].abs() > shape.radii()[d] {
                            return Err(Error::internal(
                                "backpointer names a half outside the previous box",
                            ));
                        }
                    }
                    let second_half = shape.index_of(&d_half);
                    for half in [first_half, second_half] {
                        *next.entry(half).or_default() += mult;
                    }
                }
                other => {
                    return Err(Error::internal(format!(
                        "level {level} cell holds {other:?} instead of a split"
                    )));
                }
            }
        }
        counts = next;
    }

    let mut x = vec![BigUint::default(); n];
    for (&idx, mult) in &counts {
        match stored[0].back(idx).kind() {
            BackKind::Zero => {}
            BackKind::Column(j) => x[j] += mult,
            other => {
                return Err(Error::internal(format!(
                    "level 0 cell holds {other:?} instead of a column or zero marker"
                )));
            }
        }
    }
    x.into_iter()
        .map(|v| {
            i128::try_from(&v)
                .map_err(|_| Error::capacity("witness component overflows 128 bits"))
        })
        .collect()
}
