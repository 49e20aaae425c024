//! Certified bounds on the hereditary discrepancy of the column set of `A`.
//!
//! For a column subset `I`, the discrepancy is
//! `min_{z in {0,1}^I} || A_I (z - 1/2) ||_inf`, and the hereditary
//! discrepancy `herdisc(A)` is the maximum over all `I`. The dynamic program's
//! box radius is proportional to a certified upper bound `H >= herdisc(A)`, so
//! tighter bounds mean smaller tables. Values are exact rationals (the true
//! quantity is half-integral).

use num::rational::BigRational;
use num::Zero;

use crate::error::{Error, Result};
use crate::instance::{max_abs_entry, IlpInstance};
use crate::util::{rat, rat_from_i128};

/// How a hereditary-discrepancy bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// `ceil(6 * sqrt(m) * Delta)`, valid for any column set.
    Spencer,
    /// Strictly below the largest column l1-norm.
    BeckFiala,
    /// Caller-asserted value, trusted after clamping.
    UserSupplied,
    /// Computed by exhaustive enumeration (or a closed form that matches it).
    Exact,
}

/// A certified upper bound on `herdisc(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HerdiscBound {
    pub value: BigRational,
    pub provenance: Provenance,
}

impl HerdiscBound {
    fn new(value: BigRational, provenance: Provenance) -> Self {
        HerdiscBound { value, provenance }
    }
}

/// `ceil(6 * sqrt(m) * Delta)`, computed exactly via integer square roots:
/// the result is the least integer `s` with `s^2 >= 36 * m * Delta^2`.
pub fn spencer_bound(inst: &IlpInstance) -> HerdiscBound {
    let delta = max_abs_entry(inst) as u128;
    let t = 36u128 * inst.m() as u128 * delta * delta;
    let s = crate::util::ceil_sqrt(t);
    HerdiscBound::new(rat_from_i128(s as i128), Provenance::Spencer)
}

/// Largest column l1-norm; hereditary discrepancy is strictly below it, so it
/// is a valid (integral) bound.
pub fn beck_fiala_bound(inst: &IlpInstance) -> HerdiscBound {
    let mut best: i128 = 0;
    for j in 0..inst.n() {
        let mut l1: i128 = 0;
        for &v in inst.col(j) {
            l1 = l1.saturating_add(v.abs());
        }
        best = best.max(l1);
    }
    HerdiscBound::new(rat_from_i128(best), Provenance::BeckFiala)
}

/// Picks the bound the solver will use: the override when supplied, otherwise
/// the smaller of [`spencer_bound`] and [`beck_fiala_bound`]. Any value below
/// the floor `Delta / 2` (never a valid bound for a nonempty matrix) is
/// clamped up to it with a warning.
pub fn choose_h(inst: &IlpInstance, override_h: Option<BigRational>) -> HerdiscBound {
    let mut chosen = match override_h {
        Some(v) => HerdiscBound::new(v, Provenance::UserSupplied),
        None => {
            let s = spencer_bound(inst);
            let bf = beck_fiala_bound(inst);
            if bf.value <= s.value {
                bf
            } else {
                s
            }
        }
    };
    if inst.n() > 0 {
        let floor = rat(max_abs_entry(inst), 2);
        if chosen.value < floor {
            log::warn!(
                "herdisc bound {} is below the floor Delta/2 = {}; clamping up",
                chosen.value,
                floor
            );
            chosen.value = floor;
        }
    }
    chosen
}

/// Largest matrix width accepted by [`exact_herdisc`].
pub const EXACT_HERDISC_MAX_N: usize = 16;

/// Exact hereditary discrepancy by enumerating every column subset and every
/// coloring of it. Exponential (`3^n` pairs), guarded to `n <= 16`; intended
/// as a reference oracle and for genuinely small matrices.
pub fn exact_herdisc(inst: &IlpInstance) -> Result<HerdiscBound> {
    let n = inst.n();
    if n > EXACT_HERDISC_MAX_N {
        return Err(Error::guard(format!(
            "exact_herdisc enumerates 3^n colorings; n = {n} exceeds the limit {EXACT_HERDISC_MAX_N}"
        )));
    }
    let m = inst.m();
    // disc(A_I) = 1/2 * min over sign patterns s of max_k |sum_{j in I} s_j A[k][j]|;
    // z_j = 1 corresponds to s_j = +1. Everything below is integer arithmetic
    // on the doubled quantity.
    let mut doubled_herdisc: i128 = 0;
    for mask in 0u32..(1u32 << n) {
        let members: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let mut doubled_disc = i128::MAX;
        let mut zmask = mask;
        loop {
            let mut worst_row: i128 = 0;
            for k in 0..m {
                let mut sum: i128 = 0;
                for &j in &members {
                    let v = inst.entry(k, j);
                    if zmask >> j & 1 == 1 {
                        sum += v;
                    } else {
                        sum -= v;
                    }
                }
                worst_row = worst_row.max(sum.abs());
            }
            doubled_disc = doubled_disc.min(worst_row);
            if zmask == 0 {
                break;
            }
            zmask = (zmask - 1) & mask;
        }
        doubled_herdisc = doubled_herdisc.max(doubled_disc);
    }
    Ok(HerdiscBound::new(
        rat(doubled_herdisc, 2),
        Provenance::Exact,
    ))
}

/// Exact hereditary discrepancy of a single-row matrix: `Delta / 2`.
///
/// Upper bound: process entries by decreasing absolute value, signing each one
/// against the running sum; the running sum never leaves `[-Delta, Delta]`,
/// so every subset has discrepancy at most `Delta / 2`. Lower bound: the
/// singleton holding the largest entry achieves exactly `Delta / 2`.
pub fn single_row_herdisc(inst: &IlpInstance) -> Result<HerdiscBound> {
    if inst.m() != 1 {
        return Err(Error::internal("single_row_herdisc requires m = 1"));
    }
    Ok(HerdiscBound::new(
        rat(max_abs_entry(inst), 2),
        Provenance::Exact,
    ))
}

/// Width limit under which [`best_certified_bound`] runs the exact
/// enumeration; above it the enumeration would dominate the solve.
const EXACT_IN_SOLVER_MAX_N: usize = 10;

/// Sharpest certified bound the solver can afford to compute: the single-row
/// closed form when `m = 1`, the exact enumeration for narrow matrices, and
/// `min(Spencer, Beck-Fiala)` otherwise.
pub fn best_certified_bound(inst: &IlpInstance) -> HerdiscBound {
    if inst.n() == 0 {
        return HerdiscBound::new(BigRational::zero(), Provenance::Exact);
    }
    if inst.m() == 1 {
        return single_row_herdisc(inst).expect("m = 1 checked");
    }
    if inst.n() <= EXACT_IN_SOLVER_MAX_N {
        return exact_herdisc(inst).expect("n within enumeration guard");
    }
    choose_h(inst, None)
}

/// Guards for [`split_witness_exists`].
const SPLIT_MAX_L1: i128 = 20;
const SPLIT_MAX_POINTS: i128 = 1_000_000;

/// Exhaustively checks the splitting property for one solution `x`: is there
/// a `z` with `0 <= z <= x`, `ceil(|x|_1 / 6) <= |z|_1 <= floor(5 |x|_1 / 6)`,
/// and `|| A (z - x/2) ||_inf <= 2 H`?
///
/// This is the structural fact the level merge relies on; the solver never
/// calls it, but the test suites do. Guarded to `|x|_1 <= 20` and at most
/// `10^6` candidate points.
pub fn split_witness_exists(inst: &IlpInstance, x: &[i128], h: &BigRational) -> Result<bool> {
    if x.len() != inst.n() {
        return Err(Error::internal("x has the wrong width"));
    }
    if x.iter().any(|&v| v < 0) {
        return Err(Error::internal("x must be nonnegative"));
    }
    let l1: i128 = x.iter().sum();
    if l1 <= 1 {
        return Err(Error::guard("splitting needs |x|_1 > 1"));
    }
    if l1 > SPLIT_MAX_L1 {
        return Err(Error::guard(format!(
            "|x|_1 = {l1} exceeds the enumeration limit {SPLIT_MAX_L1}"
        )));
    }
    let mut points: i128 = 1;
    for &v in x {
        points = points.saturating_mul(v + 1);
        if points > SPLIT_MAX_POINTS {
            return Err(Error::guard(format!(
                "candidate count exceeds the enumeration limit {SPLIT_MAX_POINTS}"
            )));
        }
    }

    let lo = (l1 + 5) / 6; // ceil(l1 / 6)
    let hi = 5 * l1 / 6; // floor(5 l1 / 6)
    let ax = inst.eval_ax(x)?;
    let four_h = rat(4, 1) * h;

    let mut z = vec![0i128; x.len()];
    loop {
        let zl1: i128 = z.iter().sum();
        if zl1 >= lo && zl1 <= hi {
            // || A(z - x/2) ||_inf <= 2H  <=>  |2 (Az)_k - (Ax)_k| <= 4H for all k.
            let az = inst.eval_ax(&z)?;
            let ok = (0..inst.m()).all(|k| {
                let doubled_dev = (2 * az[k] - ax[k]).abs();
                rat_from_i128(doubled_dev) <= four_h
            });
            if ok {
                return Ok(true);
            }
        }
        // Advance the odometer over 0..=x componentwise.
        let mut d = 0;
        loop {
            if d == z.len() {
                return Ok(false);
            }
            if z[d] < x[d] {
                z[d] += 1;
                break;
            }
            z[d] = 0;
            d += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rat;

    fn inst(rows: Vec<Vec<i128>>, n: usize) -> IlpInstance {
        let m = rows.len();
        IlpInstance::new(rows, vec![0; m], vec![0; n]).unwrap()
    }

    #[test]
    fn spencer_examples() {
        assert_eq!(spencer_bound(&inst(vec![vec![5]], 1)).value, rat(30, 1));
        let four_rows = inst(vec![vec![2], vec![1], vec![-2], vec![0]], 1);
        assert_eq!(spencer_bound(&four_rows).value, rat(24, 1));
        assert_eq!(spencer_bound(&inst(vec![vec![0, 0]], 2)).value, rat(0, 1));
    }

    #[test]
    fn beck_fiala_examples() {
        let a = inst(vec![vec![1, 2], vec![-3, 0]], 2);
        assert_eq!(beck_fiala_bound(&a).value, rat(4, 1));
        assert_eq!(beck_fiala_bound(&inst(vec![vec![1]], 1)).value, rat(1, 1));
        assert_eq!(beck_fiala_bound(&inst(vec![vec![]], 0)).value, rat(0, 1));
    }

    #[test]
    fn choose_h_picks_the_smaller_bound() {
        let a = inst(vec![vec![1, 2], vec![-3, 0]], 2);
        let h = choose_h(&a, None);
        assert_eq!(h.value, rat(4, 1));
        assert_eq!(h.provenance, Provenance::BeckFiala);
    }

    #[test]
    fn choose_h_honors_override_and_clamps() {
        let a = inst(vec![vec![1, 2], vec![-3, 0]], 2);
        let h = choose_h(&a, Some(rat(7, 1)));
        assert_eq!(h.value, rat(7, 1));
        assert_eq!(h.provenance, Provenance::UserSupplied);

        // An override below Delta/2 cannot be a valid bound; it is raised.
        let five = inst(vec![vec![5]], 1);
        let h = choose_h(&five, Some(rat(1, 1)));
        assert_eq!(h.value, rat(5, 2));
    }

    #[test]
    fn exact_herdisc_tiny_matrices() {
        assert_eq!(exact_herdisc(&inst(vec![vec![1]], 1)).unwrap().value, rat(1, 2));
        assert_eq!(
            exact_herdisc(&inst(vec![vec![1, -1]], 2)).unwrap().value,
            rat(1, 2)
        );
        // Two identical columns: the pair {1,2} can be split evenly, so only
        // the singletons contribute and the value stays 1/2.
        assert_eq!(
            exact_herdisc(&inst(vec![vec![1, 1]], 2)).unwrap().value,
            rat(1, 2)
        );
    }

    #[test]
    fn exact_herdisc_guard() {
        let wide = inst(vec![vec![1; 17]], 17);
        assert!(matches!(exact_herdisc(&wide), Err(Error::Guard { .. })));
    }

    #[test]
    fn single_row_closed_form_matches_enumeration() {
        for cols in [
            vec![3i128, 5, 1],
            vec![2, 2, 2],
            vec![7],
            vec![1, -4, 2, 4],
            vec![0, 0],
        ] {
            let n = cols.len();
            let a = inst(vec![cols], n);
            let exact = exact_herdisc(&a).unwrap().value;
            let closed = single_row_herdisc(&a).unwrap().value;
            assert_eq!(exact, closed, "matrix {:?}", a.row(0));
        }
    }

    #[test]
    fn split_witness_spec_cases() {
        let a = inst(vec![vec![1]], 1);
        assert!(split_witness_exists(&a, &[4], &rat(1, 2)).unwrap());
        // |x|_1 = 2 forces |z|_1 = 1 exactly (window [1, 1]).
        assert!(split_witness_exists(&a, &[2], &rat(1, 2)).unwrap());

        let two = inst(vec![vec![1, -1]], 2);
        assert!(split_witness_exists(&two, &[3, 3], &rat(1, 2)).unwrap());
    }

    #[test]
    fn split_witness_guards() {
        let a = inst(vec![vec![1]], 1);
        assert!(matches!(
            split_witness_exists(&a, &[1], &rat(1, 2)),
            Err(Error::Guard { .. })
        ));
        assert!(matches!(
            split_witness_exists(&a, &[25], &rat(1, 2)),
            Err(Error::Guard { .. })
        ));
    }

    #[test]
    fn bounds_dominate_exact_value() {
        let candidates = [
            inst(vec![vec![1, 2], vec![-3, 0]], 2),
            inst(vec![vec![2, -1, 3], vec![1, 1, 0], vec![0, 2, -2]], 3),
            inst(vec![vec![5, 4, -5, 1]], 4),
        ];
        for a in &candidates {
            let exact = exact_herdisc(a).unwrap().value;
            assert!(exact <= spencer_bound(a).value);
            assert!(exact <= beck_fiala_bound(a).value);
            assert!(exact >= rat(max_abs_entry(a), 2));
        }
    }
}
