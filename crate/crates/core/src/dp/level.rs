//! Level tables: the value-and-backpointer mapping of one level, in dense
//! (whole box) or sparse (finite cells only) form, plus the backs-only
//! storage kept after a level's values are no longer needed.

use std::collections::HashMap;

use crate::dp::plan::{CellFilter, LevelPlan};
use crate::error::{Error, Result};
use crate::instance::IlpInstance;

/// Reconstruction datum packed into one word: a 2-bit tag and a 62-bit
/// payload (column index at level 0, previous-level cell index above).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Back(u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BackKind {
    /// Cell is -inf; no witness.
    None,
    /// Level 0: the all-zero solution.
    Zero,
    /// Level 0: single column `j`.
    Column(usize),
    /// Level i > 0: the cell of the first half in the previous level's box.
    Split(u64),
}

const TAG_SHIFT: u32 = 62;
const PAYLOAD_MASK: u64 = (1u64 << TAG_SHIFT) - 1;

impl Back {
    pub const NONE: Back = Back(0);

    pub fn zero() -> Back {
        Back(1 << TAG_SHIFT)
    }

    pub fn column(j: usize) -> Back {
        debug_assert!((j as u64) <= PAYLOAD_MASK);
        Back((2 << TAG_SHIFT) | j as u64)
    }

    pub fn split(prev_idx: u64) -> Back {
        debug_assert!(prev_idx <= PAYLOAD_MASK);
        Back((3 << TAG_SHIFT) | prev_idx)
    }

    pub fn kind(self) -> BackKind {
        match self.0 >> TAG_SHIFT {
            0 => BackKind::None,
            1 => BackKind::Zero,
            2 => BackKind::Column((self.0 & PAYLOAD_MASK) as usize),
            _ => BackKind::Split(self.0 & PAYLOAD_MASK),
        }
    }

    pub fn is_present(self) -> bool {
        self.0 != 0
    }
}

pub(crate) struct DenseTable {
    pub vals: Vec<i128>,
    pub finite: Vec<bool>,
    pub backs: Vec<Back>,
}

pub(crate) struct SparseTable {
    pub map: HashMap<u64, (i128, Back)>,
}

/// One level's table. Cells absent from a sparse map (or with `finite =
/// false` in a dense table) are -inf; the sentinel is never a number.
pub(crate) enum Table {
    Dense(DenseTable),
    Sparse(SparseTable),
}

/// Rough per-entry cost of a sparse map (key + value + bucket overhead).
const SPARSE_ENTRY_BYTES: u64 = 48;

impl Table {
    pub fn new(cells: u64, dense: bool) -> Result<Table> {
        if dense {
            let len = usize::try_from(cells)
                .map_err(|_| Error::capacity("dense level exceeds the address space"))?;
            Ok(Table::Dense(DenseTable {
                vals: vec![0; len],
                finite: vec![false; len],
                backs: vec![Back::NONE; len],
            }))
        } else {
            Ok(Table::Sparse(SparseTable {
                map: HashMap::new(),
            }))
        }
    }

    pub fn get(&self, idx: u64) -> Option<i128> {
        match self {
            Table::Dense(d) => {
                let i = idx as usize;
                if d.finite[i] {
                    Some(d.vals[i])
                } else {
                    None
                }
            }
            Table::Sparse(s) => s.map.get(&idx).map(|&(v, _)| v),
        }
    }

    #[cfg(test)]
    pub fn back(&self, idx: u64) -> Back {
        match self {
            Table::Dense(d) => d.backs[idx as usize],
            Table::Sparse(s) => s.map.get(&idx).map_or(Back::NONE, |&(_, b)| b),
        }
    }

    /// Strictly-greater update; on ties the earlier entry wins, which is what
    /// makes ascending-order insertion produce lexicographically smallest
    /// backpointers.
    pub fn improve(&mut self, idx: u64, val: i128, back: Back) {
        match self {
            Table::Dense(d) => {
                let i = idx as usize;
                if !d.finite[i] || val > d.vals[i] {
                    d.vals[i] = val;
                    d.finite[i] = true;
                    d.backs[i] = back;
                }
            }
            Table::Sparse(s) => {
                s.map
                    .entry(idx)
                    .and_modify(|e| {
                        if val > e.0 {
                            *e = (val, back);
                        }
                    })
                    .or_insert((val, back));
            }
        }
    }

    pub fn finite_count(&self) -> u64 {
        match self {
            Table::Dense(d) => d.finite.iter().filter(|&&f| f).count() as u64,
            Table::Sparse(s) => s.map.len() as u64,
        }
    }

    /// Largest |value| over finite cells (0 when none) — the merge uses this
    /// to certify that unchecked adds cannot overflow.
    pub fn max_abs_value(&self) -> i128 {
        match self {
            Table::Dense(d) => d
                .vals
                .iter()
                .zip(&d.finite)
                .filter(|&(_, &f)| f)
                .map(|(&v, _)| v.abs())
                .max()
                .unwrap_or(0),
            Table::Sparse(s) => s.map.values().map(|&(v, _)| v.abs()).max().unwrap_or(0),
        }
    }

    /// Finite cells as (index, value), ascending index — i.e. lexicographic
    /// order on box offsets.
    pub fn finite_sorted(&self) -> Vec<(u64, i128)> {
        match self {
            Table::Dense(d) => d
                .finite
                .iter()
                .enumerate()
                .filter(|&(_, &f)| f)
                .map(|(i, _)| (i as u64, d.vals[i]))
                .collect(),
            Table::Sparse(s) => {
                let mut out: Vec<(u64, i128)> =
                    s.map.iter().map(|(&i, &(v, _))| (i, v)).collect();
                out.sort_unstable_by_key(|&(i, _)| i);
                out
            }
        }
    }

    pub fn approx_bytes(&self) -> u64 {
        match self {
            Table::Dense(d) => d.vals.len() as u64 * super::plan::DENSE_CELL_BYTES,
            Table::Sparse(s) => s.map.len() as u64 * SPARSE_ENTRY_BYTES,
        }
    }
}

/// Backpointers of a finished level, values dropped.
pub(crate) enum BacksStore {
    Dense(Vec<Back>),
    Sparse(HashMap<u64, Back>),
}

pub(crate) struct StoredLevel {
    backs: BacksStore,
}

impl StoredLevel {
    pub fn back(&self, idx: u64) -> Back {
        match &self.backs {
            BacksStore::Dense(v) => v[idx as usize],
            BacksStore::Sparse(m) => m.get(&idx).copied().unwrap_or(Back::NONE),
        }
    }

    pub fn approx_bytes(&self) -> u64 {
        match &self.backs {
            BacksStore::Dense(v) => v.len() as u64 * 8,
            BacksStore::Sparse(m) => m.len() as u64 * (SPARSE_ENTRY_BYTES - 16),
        }
    }
}

/// Drops a level to backs-only storage. A dense level with few finite cells
/// converts to a sparse map so that deep runs don't pay a full-box word per
/// level.
pub(crate) fn shed(table: Table) -> StoredLevel {
    match table {
        Table::Dense(d) => {
            let finite = d.backs.iter().filter(|b| b.is_present()).count() as u64;
            if finite * (SPARSE_ENTRY_BYTES - 16) < d.backs.len() as u64 * 8 {
                let map: HashMap<u64, Back> = d
                    .backs
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| b.is_present())
                    .map(|(i, &b)| (i as u64, b))
                    .collect();
                StoredLevel {
                    backs: BacksStore::Sparse(map),
                }
            } else {
                StoredLevel {
                    backs: BacksStore::Dense(d.backs),
                }
            }
        }
        Table::Sparse(s) => StoredLevel {
            backs: BacksStore::Sparse(s.map.into_iter().map(|(i, (_, b))| (i, b)).collect()),
        },
    }
}

/// Builds level 0: the all-zero solution at absolute right-hand side 0 and
/// one entry per column `A_j` at absolute `A_j`, each valued at its objective
/// coefficient (0 in feasibility mode). Ties at a shared cell keep the
/// earliest writer: the zero marker, then the lowest column index.
pub(crate) fn init_level0(
    plan: &LevelPlan,
    inst: &IlpInstance,
    optimize: bool,
    dense: bool,
    filter: &CellFilter,
) -> Result<Table> {
    let shape = &plan.shape;
    let center = &plan.centers[0];
    let m = inst.m();
    let mut table = Table::new(shape.cells(), dense)?;
    let mut delta = vec![0i64; m];
    let zero_col = vec![0i128; m];

    let place = |col: &[i128], val: i128, back: Back, delta: &mut [i64], table: &mut Table| {
        for d in 0..m {
            let v = col[d] - center[d];
            if v.abs() > shape.radii()[d] as i128 {
                return Err(Error::internal(
                    "level-0 entry fell outside the box; the radius floor is broken",
                ));
            }
            delta[d] = v as i64;
        }
        if filter.admits(delta) {
            table.improve(shape.index_of(delta), val, back);
        }
        Ok(())
    };

    place(&zero_col, 0, Back::zero(), &mut delta, &mut table)?;
    for j in 0..inst.n() {
        let val = if optimize { inst.c()[j] } else { 0 };
        place(inst.col(j), val, Back::column(j), &mut delta, &mut table)?;
    }
    Ok(table)
}
