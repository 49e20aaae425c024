//! The level merge: combine a level's table with itself to build the next
//! level. Two interchangeable back-ends produce bit-identical value tables:
//!
//! * `merge_naive` — direct maximization over split pairs, either by scanning
//!   each output cell's window or by combining the finite-cell list with
//!   itself, whichever is cheaper.
//! * `merge_convolution` — encode the box into a mixed-radix sequence, run
//!   one self-convolution ((max,+) for optimization, boolean for
//!   feasibility), and decode. Backpointers are re-derived by probing finite
//!   cells in the same lexicographic order the naive merge uses, so
//!   reconstruction is back-end-independent.
//!
//! Geometry: if level `i` has center `c_i` and the previous level `c_{i-1}`,
//! a split of the absolute target `c_i + d'` into two previous-box points
//! `c_{i-1} + d''` and `c_{i-1} + d'''` requires `d'' + d''' = d' + shift`
//! where `shift = c_i - 2 * c_{i-1}` (componentwise 0 or 1).

use crate::convolution::{exact_integer_conv, maxplus_conv, MaxPlusSeq};
use crate::dp::level::{Back, DenseTable, Table};
use crate::dp::plan::{BoxShape, CellFilter};
use crate::error::{Error, Result};

/// Headroom check: merges add two table values with plain `+`, so insist
/// every |value| stays below a quarter of the `i128` range.
fn check_headroom(prev: &Table) -> Result<()> {
    if prev.max_abs_value() > i128::MAX / 4 {
        return Err(Error::capacity(
            "level values too large to merge without overflow risk",
        ));
    }
    Ok(())
}

/// Direct merge. For every output offset `d'` admitted by the reachability
/// filter, the new value is the maximum of `prev[d''] + prev[d''']` over
/// splits with both halves in the previous box; the backpointer records the
/// lexicographically smallest maximizing `d''`.
pub(crate) fn merge_naive(
    prev: &Table,
    shape: &BoxShape,
    shift: &[i64],
    filter: &CellFilter,
) -> Result<Table> {
    check_headroom(prev)?;
    match prev {
        Table::Dense(d) => {
            let pairs = (prev.finite_count() as u128).saturating_mul(prev.finite_count() as u128);
            if pairs < window_pair_estimate(shape, shift) {
                merge_pairs(prev, shape, shift, true, filter)
            } else {
                Ok(Table::Dense(merge_window(d, shape, shift, filter)))
            }
        }
        Table::Sparse(_) => merge_pairs(prev, shape, shift, false, filter),
    }
}

/// Total split-pair count of a full window scan, for the kernel choice.
pub(crate) fn window_pair_estimate(shape: &BoxShape, shift: &[i64]) -> u128 {
    let mut total: u128 = 1;
    for (d, &r) in shape.radii().iter().enumerate() {
        let dim = 2 * r as i128 + 1;
        let mut sum: u128 = 0;
        for out in -r..=r {
            let u = (out + shift[d]) as i128;
            sum += dim.saturating_sub(u.abs()).max(0) as u128;
        }
        total = total.saturating_mul(sum.max(1));
    }
    total
}

/// Pair-list merge: walk finite cells (ascending index = lexicographic) as
/// the first half `d''`, combine with every finite second half, and improve
/// output cells. Strict improvement keeps the first (smallest `d''`) argmax.
fn merge_pairs(
    prev: &Table,
    shape: &BoxShape,
    shift: &[i64],
    dense_out: bool,
    filter: &CellFilter,
) -> Result<Table> {
    let m = shape.m();
    let list = prev.finite_sorted();
    let mut deltas = vec![0i64; list.len() * m];
    for (pos, &(idx, _)) in list.iter().enumerate() {
        shape.delta_of(idx, &mut deltas[pos * m..(pos + 1) * m]);
    }

    let mut out = Table::new(shape.cells(), dense_out)?;
    let mut d_out = vec![0i64; m];
    for (a_pos, &(ia, va)) in list.iter().enumerate() {
        let da = &deltas[a_pos * m..(a_pos + 1) * m];
        'pair: for (b_pos, &(_, vb)) in list.iter().enumerate() {
            let db = &deltas[b_pos * m..(b_pos + 1) * m];
            for d in 0..m {
                let v = da[d] + db[d] - shift[d];
                if v.abs() > shape.radii()[d] {
                    continue 'pair;
                }
                d_out[d] = v;
            }
            if filter.admits(&d_out) {
                out.improve(shape.index_of(&d_out), va + vb, Back::split(ia));
            }
        }
    }
    Ok(out)
}

/// Window-scan merge over a dense table: for each output cell, iterate the
/// first half `d''` over its admissible window in lexicographic order; the
/// innermost dimension advances both half-indices by ±1.
fn merge_window(
    prev: &DenseTable,
    shape: &BoxShape,
    shift: &[i64],
    filter: &CellFilter,
) -> DenseTable {
    let m = shape.m();
    let cells = prev.vals.len();
    let mut out = DenseTable {
        vals: vec![0; cells],
        finite: vec![false; cells],
        backs: vec![Back::NONE; cells],
    };

    let radii = shape.radii();
    let mut d_out: Vec<i64> = radii.iter().map(|&r| -r).collect();
    let mut lo = vec![0i64; m];
    let mut hi = vec![0i64; m];
    let mut sum = vec![0i64; m];

    for idx in 0..cells {
        let mut nonempty = filter.admits(&d_out);
        for d in 0..m {
            if !nonempty {
                break;
            }
            sum[d] = d_out[d] + shift[d];
            lo[d] = (-radii[d]).max(sum[d] - radii[d]);
            hi[d] = radii[d].min(sum[d] + radii[d]);
            if lo[d] > hi[d] {
                nonempty = false;
            }
        }
        if nonempty {
            let mut scan = WindowScan {
                shape,
                prev,
                lo: &lo,
                hi: &hi,
                sum: &sum,
                best_val: 0,
                best_arg: 0,
                found: false,
            };
            scan.run(0, 0, 0);
            if scan.found {
                out.vals[idx] = scan.best_val;
                out.finite[idx] = true;
                out.backs[idx] = Back::split(scan.best_arg);
            }
        }

        // Advance the output odometer (last dimension fastest, matching
        // ascending linear index).
        for d in (0..m).rev() {
            if d_out[d] < radii[d] {
                d_out[d] += 1;
                break;
            }
            d_out[d] = -radii[d];
        }
    }
    out
}

struct WindowScan<'a> {
    shape: &'a BoxShape,
    prev: &'a DenseTable,
    lo: &'a [i64],
    hi: &'a [i64],
    sum: &'a [i64],
    best_val: i128,
    best_arg: u64,
    found: bool,
}

impl WindowScan<'_> {
    fn run(&mut self, dim: usize, idx_a: u64, idx_b: u64) {
        let r = self.shape.radii()[dim];
        let stride = self.shape.strides()[dim];
        let (lo, hi, sum) = (self.lo[dim], self.hi[dim], self.sum[dim]);
        if dim + 1 == self.shape.m() {
            let base_a = idx_a + (lo + r) as u64 * stride;
            let base_b = idx_b + (sum - lo + r) as u64 * stride;
            for step in 0..=(hi - lo) as u64 {
                let a = base_a + step * stride;
                let b = base_b - step * stride;
                let (ia, ib) = (a as usize, b as usize);
                if self.prev.finite[ia] && self.prev.finite[ib] {
                    let v = self.prev.vals[ia] + self.prev.vals[ib];
                    if !self.found || v > self.best_val {
                        self.found = true;
                        self.best_val = v;
                        self.best_arg = a;
                    }
                }
            }
        } else {
            for t in lo..=hi {
                self.run(
                    dim + 1,
                    idx_a + (t + r) as u64 * stride,
                    idx_b + (sum - t + r) as u64 * stride,
                );
            }
        }
    }
}

/// Longest usable convolution sequence: the boolean transform needs the
/// padded length within the largest supported transform order.
const CONV_MAX_LEN: u64 = 1 << 25;

/// Mixed-radix encoding of the box for the convolution merge: dimension `d`
/// contributes digit `R_d + 1 + delta_d` (range `[1, 2R_d+1]`) with base
/// `4R_d + 3`, dimension 0 least significant. Because digits start at 1 and
/// sums of two digits stay below the base, addition of encodings never
/// carries between dimensions.
struct ConvEncoding {
    weights: Vec<u64>,
    len: u64,
}

fn conv_encoding(shape: &BoxShape) -> Result<ConvEncoding> {
    let mut weights = vec![0u64; shape.m()];
    let mut len: u64 = 1;
    for (d, &r) in shape.radii().iter().enumerate() {
        weights[d] = len;
        let base = 4 * r as u64 + 3;
        len = len
            .checked_mul(base)
            .filter(|&l| l <= CONV_MAX_LEN)
            .ok_or_else(|| {
                Error::capacity("convolution index space exceeds the transform capacity")
            })?;
    }
    Ok(ConvEncoding { weights, len })
}

fn encode_index(enc: &ConvEncoding, shape: &BoxShape, delta: &[i64]) -> u64 {
    delta
        .iter()
        .zip(shape.radii().iter().zip(&enc.weights))
        .map(|(&d, (&r, &w))| (r + 1 + d) as u64 * w)
        .sum()
}

/// Index holding the merged value for output offset `d'`: the digit sum
/// `2(R_d + 1) + d'_d + shift_d` per dimension.
fn decode_index(enc: &ConvEncoding, shape: &BoxShape, d_out: &[i64], shift: &[i64]) -> u64 {
    d_out
        .iter()
        .zip(shift)
        .zip(shape.radii().iter().zip(&enc.weights))
        .map(|((&d, &s), (&r, &w))| (2 * (r + 1) + d + s) as u64 * w)
        .sum()
}

/// Sequence length of the box's mixed-radix encoding, `None` when it
/// exceeds the convolution ceiling.
pub(crate) fn conv_len(shape: &BoxShape) -> Option<u64> {
    let mut len: u64 = 1;
    for &r in shape.radii() {
        len = len.checked_mul(4 * r as u64 + 3)?;
        if len > CONV_MAX_LEN {
            return None;
        }
    }
    Some(len)
}

/// Bytes the convolution merge allocates beyond the level tables, roughly:
/// used for the capacity decision in the automatic strategy.
pub(crate) fn conv_extra_bytes(shape: &BoxShape) -> Option<u64> {
    // (max,+): one Option<i128> sequence of `len` and one of `2 len - 1`
    // (32 bytes each); boolean is smaller. Charge the larger mode.
    conv_len(shape)?.checked_mul(96)
}

/// Convolution merge; produces the same value table as [`merge_naive`].
pub(crate) fn merge_convolution(
    prev: &Table,
    shape: &BoxShape,
    shift: &[i64],
    feasibility: bool,
    filter: &CellFilter,
) -> Result<Table> {
    check_headroom(prev)?;
    let Table::Dense(dense_prev) = prev else {
        return Err(Error::capacity(
            "convolution merge requires a dense level table",
        ));
    };
    let enc = conv_encoding(shape)?;
    let m = shape.m();
    let cells = dense_prev.vals.len();
    let len = usize::try_from(enc.len)
        .map_err(|_| Error::capacity("convolution sequence exceeds the address space"))?;

    let mut delta = vec![0i64; m];

    // Forward: scatter finite cells into the sequence.
    enum ConvOut {
        Counts(Vec<i128>),
        Values(MaxPlusSeq),
    }
    let conv = if feasibility {
        let mut seq = vec![0i128; len];
        for (idx, &f) in dense_prev.finite.iter().enumerate() {
            if f {
                shape.delta_of(idx as u64, &mut delta);
                seq[encode_index(&enc, shape, &delta) as usize] = 1;
            }
        }
        ConvOut::Counts(exact_integer_conv(&seq, &seq)?)
    } else {
        let mut seq = MaxPlusSeq::neg_inf(len);
        for (idx, &f) in dense_prev.finite.iter().enumerate() {
            if f {
                shape.delta_of(idx as u64, &mut delta);
                seq.values[encode_index(&enc, shape, &delta) as usize] =
                    Some(dense_prev.vals[idx]);
            }
        }
        ConvOut::Values(maxplus_conv(&seq, &seq)?)
    };

    // Backward: read each output cell, then re-derive a backpointer by
    // probing candidate first halves in lexicographic order.
    let list = prev.finite_sorted();
    let mut list_deltas = vec![0i64; list.len() * m];
    for (pos, &(idx, _)) in list.iter().enumerate() {
        shape.delta_of(idx, &mut list_deltas[pos * m..(pos + 1) * m]);
    }

    let mut out = DenseTable {
        vals: vec![0; cells],
        finite: vec![false; cells],
        backs: vec![Back::NONE; cells],
    };
    let radii = shape.radii();
    let mut d_out: Vec<i64> = radii.iter().map(|&r| -r).collect();
    let mut d_probe = vec![0i64; m];
    for idx in 0..cells {
        let value = if filter.admits(&d_out) {
            let slot = decode_index(&enc, shape, &d_out, shift) as usize;
            match &conv {
                ConvOut::Counts(c) => {
                    if c[slot] > 0 {
                        Some(0)
                    } else {
                        None
                    }
                }
                ConvOut::Values(v) => v.values[slot],
            }
        } else {
            None
        };
        if let Some(value) = value {
            let mut back = Back::NONE;
            'probe: for (a_pos, &(ia, va)) in list.iter().enumerate() {
                let da = &list_deltas[a_pos * m..(a_pos + 1) * m];
                for d in 0..m {
                    let v = d_out[d] + shift[d] - da[d];
                    if v.abs() > radii[d] {
                        continue 'probe;
                    }
                    d_probe[d] = v;
                }
                let other = shape.index_of(&d_probe);
                if let Some(vb) = prev.get(other) {
                    if va + vb == value || feasibility {
                        back = Back::split(ia);
                        break 'probe;
                    }
                }
            }
            if !back.is_present() {
                return Err(Error::internal(
                    "convolution merge produced a value with no witnessing split",
                ));
            }
            out.vals[idx] = value;
            out.finite[idx] = true;
            out.backs[idx] = back;
        }

        for d in (0..m).rev() {
            if d_out[d] < radii[d] {
                d_out[d] += 1;
                break;
            }
            d_out[d] = -radii[d];
        }
    }
    Ok(Table::Dense(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::level::BackKind;

    fn shape1(r: i64) -> BoxShape {
        BoxShape::new(vec![r]).unwrap()
    }

    fn dense_from(shape: &BoxShape, entries: &[(Vec<i64>, i128)]) -> Table {
        let mut t = Table::new(shape.cells(), true).unwrap();
        for (pos, (delta, val)) in entries.iter().enumerate() {
            t.improve(shape.index_of(delta), *val, Back::column(pos));
        }
        t
    }

    fn sparse_from(shape: &BoxShape, entries: &[(Vec<i64>, i128)]) -> Table {
        let mut t = Table::new(shape.cells(), false).unwrap();
        for (pos, (delta, val)) in entries.iter().enumerate() {
            t.improve(shape.index_of(delta), *val, Back::column(pos));
        }
        t
    }

    fn read(table: &Table, shape: &BoxShape, delta: &[i64]) -> Option<i128> {
        table.get(shape.index_of(delta))
    }

    #[test]
    fn encoding_matches_worked_example() {
        // m = 2, radii (6, 6): digits R+1+delta, base 27, dimension 0 least
        // significant. delta = (-2, 3) -> digits (5, 10) -> 5 + 27*10 = 275.
        let shape = BoxShape::new(vec![6, 6]).unwrap();
        let enc = conv_encoding(&shape).unwrap();
        assert_eq!(enc.len, 27 * 27);
        assert_eq!(encode_index(&enc, &shape, &[-2, 3]), 275);
    }

    #[test]
    fn encoding_is_additive_at_the_decode_offset() {
        let shape = BoxShape::new(vec![6, 6]).unwrap();
        let enc = conv_encoding(&shape).unwrap();
        let a = [1i64, 0];
        let b = [2i64, 1];
        let fa = encode_index(&enc, &shape, &a);
        let fb = encode_index(&enc, &shape, &b);
        assert_eq!(fa, 197);
        assert_eq!(fb, 225);
        let d_out = [a[0] + b[0], a[1] + b[1]];
        assert_eq!(decode_index(&enc, &shape, &d_out, &[0, 0]), fa + fb);
        assert_eq!(fa + fb, 422);
        // A doubling shift moves the decode slot, not the encoding.
        let shifted = [d_out[0] - 1, d_out[1]];
        assert_eq!(decode_index(&enc, &shape, &shifted, &[1, 0]), fa + fb);
    }

    #[test]
    fn naive_merge_single_row_example() {
        // prev {0 -> 0, 1 -> 1}: merged box gets {0 -> 0, 1 -> 1, 2 -> 2}.
        let shape = shape1(6);
        let prev = dense_from(&shape, &[(vec![0], 0), (vec![1], 1)]);
        let out = merge_naive(&prev, &shape, &[0], &CellFilter::none()).unwrap();
        for d in -6..=6 {
            let expect = match d {
                0 => Some(0),
                1 => Some(1),
                2 => Some(2),
                _ => None,
            };
            assert_eq!(read(&out, &shape, &[d]), expect, "delta {d}");
        }
    }

    #[test]
    fn naive_merge_zero_and_empty() {
        let shape = shape1(4);
        let zero = dense_from(&shape, &[(vec![0], 0)]);
        let out = merge_naive(&zero, &shape, &[0], &CellFilter::none()).unwrap();
        assert_eq!(out.finite_count(), 1);
        assert_eq!(read(&out, &shape, &[0]), Some(0));

        let empty = Table::new(shape.cells(), true).unwrap();
        let out = merge_naive(&empty, &shape, &[0], &CellFilter::none()).unwrap();
        assert_eq!(out.finite_count(), 0);
    }

    #[test]
    fn backpointer_prefers_lexicographically_smallest_half() {
        // Two splits of delta 0 tie in value: (-1) + (+1) and (+1) + (-1).
        // The recorded half must be -1, under every back-end.
        let shape = shape1(3);
        let entries = [(vec![-1i64], 5i128), (vec![1], 5)];
        for table in [dense_from(&shape, &entries), sparse_from(&shape, &entries)] {
            let out = merge_naive(&table, &shape, &[0], &CellFilter::none()).unwrap();
            assert_eq!(read(&out, &shape, &[0]), Some(10));
            match out.back(shape.index_of(&[0])).kind() {
                BackKind::Split(prev_idx) => assert_eq!(prev_idx, shape.index_of(&[-1])),
                other => panic!("unexpected back {other:?}"),
            }
        }
        let conv = merge_convolution(&dense_from(&shape, &entries), &shape, &[0], false, &CellFilter::none()).unwrap();
        match conv.back(shape.index_of(&[0])).kind() {
            BackKind::Split(prev_idx) => assert_eq!(prev_idx, shape.index_of(&[-1])),
            other => panic!("unexpected back {other:?}"),
        }
    }

    #[test]
    fn doubling_shift_moves_the_window() {
        // With shift 1, halves must sum to d' + 1: prev {0, 1} merges to
        // d' = 1 only via 1 + 0 - wait: d'' + d''' = d' + 1.
        let shape = shape1(2);
        let prev = dense_from(&shape, &[(vec![0], 0), (vec![1], 3)]);
        let out = merge_naive(&prev, &shape, &[1], &CellFilter::none()).unwrap();
        // d' = -1: halves sum 0: (0,0) -> 0.
        assert_eq!(read(&out, &shape, &[-1]), Some(0));
        // d' = 0: halves sum 1: (0,1)/(1,0) -> 3.
        assert_eq!(read(&out, &shape, &[0]), Some(3));
        // d' = 1: halves sum 2: (1,1) -> 6.
        assert_eq!(read(&out, &shape, &[1]), Some(6));
        assert_eq!(read(&out, &shape, &[2]), None);
    }

    fn random_table(shape: &BoxShape, seed: u64, fill_num: u64, fill_den: u64) -> Table {
        // Small deterministic LCG so the cross-checks don't need an RNG dep.
        let mut state = seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
        let mut next = || {
            state = state
                .wrapping_mul(2862933555777941757)
                .wrapping_add(3037000493);
            state >> 11
        };
        let mut t = Table::new(shape.cells(), true).unwrap();
        for idx in 0..shape.cells() {
            if next() % fill_den < fill_num {
                let val = (next() % 41) as i128 - 20;
                t.improve(idx, val, Back::zero());
            }
        }
        t
    }

    #[test]
    fn convolution_merge_equals_naive_merge() {
        for (radii, seeds) in [
            (vec![5i64], vec![1u64, 2, 3, 4]),
            (vec![3, 4], vec![5, 6, 7]),
            (vec![2, 2, 2], vec![8, 9]),
        ] {
            let shape = BoxShape::new(radii.clone()).unwrap();
            let shifts: Vec<Vec<i64>> = match radii.len() {
                1 => vec![vec![0], vec![1]],
                2 => vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
                _ => vec![vec![0, 0, 0], vec![1, 1, 0]],
            };
            for &seed in &seeds {
                let prev = random_table(&shape, seed, 1, 3);
                for shift in &shifts {
                    let naive = merge_naive(&prev, &shape, shift, &CellFilter::none()).unwrap();
                    for feasibility in [false, true] {
                        let conv =
                            merge_convolution(&prev, &shape, shift, feasibility, &CellFilter::none()).unwrap();
                        for idx in 0..shape.cells() {
                            let expect = if feasibility {
                                naive.get(idx).map(|_| 0)
                            } else {
                                naive.get(idx)
                            };
                            assert_eq!(
                                conv.get(idx),
                                expect,
                                "radii {radii:?} seed {seed} shift {shift:?} idx {idx}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sparse_merge_equals_dense_merge() {
        let shape = BoxShape::new(vec![3, 3]).unwrap();
        for seed in [11u64, 12, 13] {
            let dense = random_table(&shape, seed, 1, 4);
            let entries: Vec<(Vec<i64>, i128)> = dense
                .finite_sorted()
                .into_iter()
                .map(|(idx, v)| {
                    let mut d = vec![0i64; 2];
                    shape.delta_of(idx, &mut d);
                    (d, v)
                })
                .collect();
            let sparse = sparse_from(&shape, &entries);
            for shift in [[0i64, 0], [1, 0], [0, 1], [1, 1]] {
                let a = merge_naive(&dense, &shape, &shift, &CellFilter::none()).unwrap();
                let b = merge_naive(&sparse, &shape, &shift, &CellFilter::none()).unwrap();
                for idx in 0..shape.cells() {
                    assert_eq!(a.get(idx), b.get(idx), "seed {seed} shift {shift:?}");
                    assert_eq!(a.back(idx), b.back(idx), "seed {seed} shift {shift:?}");
                }
            }
        }
    }

    #[test]
    fn feasibility_merge_values_are_zero() {
        let shape = shape1(4);
        let prev = dense_from(&shape, &[(vec![0], 0), (vec![2], 0)]);
        let out = merge_convolution(&prev, &shape, &[0], true, &CellFilter::none()).unwrap();
        assert_eq!(read(&out, &shape, &[0]), Some(0));
        assert_eq!(read(&out, &shape, &[2]), Some(0));
        assert_eq!(read(&out, &shape, &[4]), Some(0));
        assert_eq!(read(&out, &shape, &[1]), None);
    }

    #[test]
    fn reachability_filter_prunes_identically_across_back_ends() {
        use crate::dp::plan::ReachCut;
        // Band 0 <= delta <= 1 around center 0: the pair (1,1) would land on
        // delta 2 but is certified unreachable and must be dropped everywhere.
        let shape = shape1(3);
        let cut = ReachCut { u: vec![1], ub: 1 };
        let filter = CellFilter::at_center(std::slice::from_ref(&cut), &[0]);
        let entries = [(vec![0i64], 0i128), (vec![1], 1)];
        let dense = dense_from(&shape, &entries);
        let sparse = sparse_from(&shape, &entries);
        let outs = [
            merge_naive(&dense, &shape, &[0], &filter).unwrap(),
            merge_naive(&sparse, &shape, &[0], &filter).unwrap(),
            merge_convolution(&dense, &shape, &[0], false, &filter).unwrap(),
        ];
        for out in &outs {
            assert_eq!(read(out, &shape, &[0]), Some(0));
            assert_eq!(read(out, &shape, &[1]), Some(1));
            assert_eq!(read(out, &shape, &[2]), None, "out-of-band cell kept");
            assert_eq!(out.finite_count(), 2);
        }

        // A center shifts the admissible band: center 3, ub 4 admits deltas
        // in [-3, 1] only.
        let filter = CellFilter::at_center(&[ReachCut { u: vec![1], ub: 4 }], &[3]);
        let out = merge_naive(&dense, &shape, &[0], &filter).unwrap();
        assert_eq!(read(&out, &shape, &[1]), Some(1));
        assert_eq!(read(&out, &shape, &[2]), None);

        // An empty filter admits everything.
        let out = merge_naive(&dense, &shape, &[0], &CellFilter::none()).unwrap();
        assert_eq!(read(&out, &shape, &[2]), Some(2));
    }

    #[test]
    fn window_estimate_counts_pairs_exactly_for_m1() {
        // R = 2, shift 0: windows per output -4..: cells with nonempty
        // windows: sum over d' of overlap = sum_{u=-2..2} (5 - |u|) = 19.
        let shape = shape1(2);
        assert_eq!(window_pair_estimate(&shape, &[0]), 19);
    }
}
