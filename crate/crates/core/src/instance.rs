//! Problem instances: `max { c^T x : A x = b, x in Z^n, x >= 0 }` with a small
//! number `m` of equality rows, plus the text format used by the CLI.
//!
//! Columns are the unit of work everywhere downstream (a solution is a
//! multiset of columns), so the matrix is stored column-major.

use crate::error::{Error, Result};

/// An integer program `max { c^T x : A x = b, x >= 0 }` over `Z^n`.
///
/// `A` is `m x n` with `m >= 1`. Feasibility-only instances carry `c = 0` and
/// the `feasibility_only` flag; their answers never report `Optimal`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpInstance {
    m: usize,
    n: usize,
    /// Column-major entries: `cols[j * m + k]` is `A[k][j]`.
    cols: Vec<i128>,
    b: Vec<i128>,
    c: Vec<i128>,
    feasibility_only: bool,
}

impl IlpInstance {
    /// Builds an instance from row-major `rows` (each of length `n`).
    pub fn new(rows: Vec<Vec<i128>>, b: Vec<i128>, c: Vec<i128>) -> Result<Self> {
        Self::build(rows, b, Some(c))
    }

    /// Builds a feasibility-only instance (`c = 0`).
    pub fn new_feasibility(rows: Vec<Vec<i128>>, b: Vec<i128>) -> Result<Self> {
        Self::build(rows, b, None)
    }

    fn build(rows: Vec<Vec<i128>>, b: Vec<i128>, c: Option<Vec<i128>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::internal("instance must have at least one row"));
        }
        let n = rows[0].len();
        for (k, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::internal(format!(
                    "row {k} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        if b.len() != m {
            return Err(Error::internal(format!(
                "b has {} entries, expected {m}",
                b.len()
            )));
        }
        let (c, feasibility_only) = match c {
            Some(c) => {
                if c.len() != n {
                    return Err(Error::internal(format!(
                        "c has {} entries, expected {n}",
                        c.len()
                    )));
                }
                (c, false)
            }
            None => (vec![0; n], true),
        };
        let mut cols = vec![0i128; m * n];
        for (k, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                cols[j * m + k] = v;
            }
        }
        Ok(IlpInstance {
            m,
            n,
            cols,
            b,
            c,
            feasibility_only,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Column `j` of `A` as a slice of length `m`.
    pub fn col(&self, j: usize) -> &[i128] {
        &self.cols[j * self.m..(j + 1) * self.m]
    }

    /// Entry `A[k][j]`.
    pub fn entry(&self, k: usize, j: usize) -> i128 {
        self.cols[j * self.m + k]
    }

    pub fn b(&self) -> &[i128] {
        &self.b
    }

    pub fn c(&self) -> &[i128] {
        &self.c
    }

    pub fn feasibility_only(&self) -> bool {
        self.feasibility_only
    }

    /// Row `k` of `A` collected into a vector.
    pub fn row(&self, k: usize) -> Vec<i128> {
        (0..self.n).map(|j| self.entry(k, j)).collect()
    }

    /// `A x`, checked.
    pub fn eval_ax(&self, x: &[i128]) -> Result<Vec<i128>> {
        if x.len() != self.n {
            return Err(Error::internal(format!(
                "witness has {} entries, expected {}",
                x.len(),
                self.n
            )));
        }
        let mut out = vec![0i128; self.m];
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0 {
                continue;
            }
            for k in 0..self.m {
                let term = self
                    .entry(k, j)
                    .checked_mul(xj)
                    .ok_or_else(|| Error::capacity("A*x overflows 128 bits"))?;
                out[k] = out[k]
                    .checked_add(term)
                    .ok_or_else(|| Error::capacity("A*x overflows 128 bits"))?;
            }
        }
        Ok(out)
    }

    /// `c^T x`, checked.
    pub fn objective(&self, x: &[i128]) -> Result<i128> {
        let mut acc: i128 = 0;
        for (j, &xj) in x.iter().enumerate() {
            let term = self.c[j]
                .checked_mul(xj)
                .ok_or_else(|| Error::capacity("c^T x overflows 128 bits"))?;
            acc = acc
                .checked_add(term)
                .ok_or_else(|| Error::capacity("c^T x overflows 128 bits"))?;
        }
        Ok(acc)
    }

    /// Whether `x >= 0` and `A x = b`.
    pub fn is_feasible(&self, x: &[i128]) -> Result<bool> {
        if x.iter().any(|&v| v < 0) {
            return Ok(false);
        }
        Ok(self.eval_ax(x)? == self.b)
    }
}

/// Largest absolute entry of `A` (the usual `Delta`); 0 for an empty matrix.
pub fn max_abs_entry(inst: &IlpInstance) -> i128 {
    inst.cols.iter().map(|v| v.abs()).max().unwrap_or(0)
}

/// Outcome classification for a solve or feasibility run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Feasible,
    Infeasible,
    Unbounded,
}

/// Result of a run. `value` is present exactly for `Optimal`; a witness `x`
/// is present for `Optimal` and `Feasible`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub status: SolveStatus,
    pub value: Option<i128>,
    pub x: Option<Vec<i128>>,
}

impl Solution {
    pub fn optimal(value: i128, x: Vec<i128>) -> Self {
        Solution {
            status: SolveStatus::Optimal,
            value: Some(value),
            x: Some(x),
        }
    }

    pub fn feasible(x: Vec<i128>) -> Self {
        Solution {
            status: SolveStatus::Feasible,
            value: None,
            x: Some(x),
        }
    }

    pub fn infeasible() -> Self {
        Solution {
            status: SolveStatus::Infeasible,
            value: None,
            x: None,
        }
    }

    pub fn unbounded() -> Self {
        Solution {
            status: SolveStatus::Unbounded,
            value: None,
            x: None,
        }
    }
}

/// An instance with duplicate columns merged away, plus the map back.
///
/// For each group of identical columns the copy with the largest objective
/// coefficient is kept (ties: lowest original index). `origin_map[j]` is the
/// original index of kept column `j`; kept columns preserve original order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedInstance {
    pub instance: IlpInstance,
    pub origin_map: Vec<usize>,
}

impl NormalizedInstance {
    /// Scatters a witness for the normalized instance back to original width.
    pub fn lift_witness(&self, x: &[i128], original_n: usize) -> Vec<i128> {
        let mut out = vec![0i128; original_n];
        for (j, &xj) in x.iter().enumerate() {
            out[self.origin_map[j]] = xj;
        }
        out
    }
}

/// Merges duplicate columns, keeping the best objective coefficient per
/// distinct column. Idempotent.
pub fn normalize(inst: &IlpInstance) -> NormalizedInstance {
    // best[column vector] = (c, original index) under "larger c, then lower index".
    let mut best: Vec<(usize, &[i128])> = Vec::new(); // representative indices
    'cols: for j in 0..inst.n {
        let col = inst.col(j);
        for entry in best.iter_mut() {
            if entry.1 == col {
                if inst.c[j] > inst.c[entry.0] {
                    entry.0 = j;
                }
                continue 'cols;
            }
        }
        best.push((j, col));
    }
    let mut keep: Vec<usize> = best.into_iter().map(|(j, _)| j).collect();
    keep.sort_unstable();

    let rows: Vec<Vec<i128>> = (0..inst.m)
        .map(|k| keep.iter().map(|&j| inst.entry(k, j)).collect())
        .collect();
    let c: Vec<i128> = keep.iter().map(|&j| inst.c[j]).collect();
    let instance = if inst.feasibility_only {
        IlpInstance::new_feasibility(rows, inst.b.clone())
    } else {
        IlpInstance::new(rows, inst.b.clone(), c)
    }
    .expect("normalized dimensions are consistent");
    NormalizedInstance {
        instance,
        origin_map: keep,
    }
}

/// Parses the shared text format:
///
/// ```text
/// # comment lines start with '#'
/// m n
/// <m rows of A, n integers each>
/// <b: m integers>
/// <c: n integers; omit the line for a feasibility-only instance>
/// ```
///
/// Blank lines are ignored. Errors carry 1-based line numbers.
pub fn parse_instance(text: &str) -> Result<IlpInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut last_line = 0usize;

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty input: expected a header line \"m n\""))?;
    last_line = last_line.max(line_no);
    let header_fields = parse_ints(header, line_no)?;
    if header_fields.len() != 2 {
        return Err(Error::parse(
            line_no,
            format!(
                "header has {} fields, expected 2 (\"m n\")",
                header_fields.len()
            ),
        ));
    }
    let m = usize::try_from(header_fields[0])
        .map_err(|_| Error::parse(line_no, "m must be nonnegative"))?;
    let n = usize::try_from(header_fields[1])
        .map_err(|_| Error::parse(line_no, "n must be nonnegative"))?;
    if m == 0 {
        return Err(Error::parse(line_no, "m must be at least 1"));
    }

    let mut rows = Vec::with_capacity(m);
    for k in 0..m {
        let (line_no, row_text) = lines.next().ok_or_else(|| {
            Error::parse(last_line, format!("missing row {} of A ({m} expected)", k + 1))
        })?;
        last_line = line_no;
        let row = parse_ints(row_text, line_no)?;
        if row.len() != n {
            return Err(Error::parse(
                line_no,
                format!("row {} of A has {} entries, expected {n}", k + 1, row.len()),
            ));
        }
        rows.push(row);
    }

    let (line_no, b_text) = lines
        .next()
        .ok_or_else(|| Error::parse(last_line, "missing right-hand-side line b"))?;
    let b = parse_ints(b_text, line_no)?;
    if b.len() != m {
        return Err(Error::parse(
            line_no,
            format!("b has {} entries, expected {m}", b.len()),
        ));
    }

    let c = match lines.next() {
        None => None,
        Some((line_no, c_text)) => {
            let c = parse_ints(c_text, line_no)?;
            if c.len() != n {
                return Err(Error::parse(
                    line_no,
                    format!("c has {} entries, expected {n}", c.len()),
                ));
            }
            if let Some((extra_line, _)) = lines.next() {
                return Err(Error::parse(extra_line, "unexpected content after c line"));
            }
            Some(c)
        }
    };

    match c {
        Some(c) => IlpInstance::new(rows, b, c),
        None => IlpInstance::new_feasibility(rows, b),
    }
}

/// Renders an instance in the text format accepted by [`parse_instance`].
pub fn format_instance(inst: &IlpInstance) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", inst.m(), inst.n()));
    for k in 0..inst.m() {
        push_int_line(&mut out, &inst.row(k));
    }
    push_int_line(&mut out, inst.b());
    if !inst.feasibility_only() {
        push_int_line(&mut out, inst.c());
    }
    out
}

fn push_int_line(out: &mut String, vals: &[i128]) {
    let line: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
    out.push_str(&line.join(" "));
    out.push('\n');
}

fn parse_ints(text: &str, line_no: usize) -> Result<Vec<i128>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<i128>()
                .map_err(|_| Error::parse(line_no, format!("invalid integer {tok:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_instance() {
        let inst = parse_instance("1 2\n2 3\n7\n3 4\n").unwrap();
        assert_eq!(inst.m(), 1);
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.row(0), vec![2, 3]);
        assert_eq!(inst.b(), &[7]);
        assert_eq!(inst.c(), &[3, 4]);
        assert!(!inst.feasibility_only());
    }

    #[test]
    fn parses_comments_and_blanks() {
        let inst = parse_instance("# weights\n1 2\n\n2 3\n# rhs\n7\n3 4\n").unwrap();
        assert_eq!(inst.b(), &[7]);
    }

    #[test]
    fn omitted_c_line_means_feasibility_only() {
        let inst = parse_instance("1 2\n2 3\n7\n").unwrap();
        assert!(inst.feasibility_only());
        assert_eq!(inst.c(), &[0, 0]);
    }

    #[test]
    fn two_row_file_parses_per_format() {
        // Five lines: header, two rows of A, b (2 entries), c (1 entry).
        let inst = parse_instance("2 1\n1\n-1\n0 0\n5\n").unwrap();
        assert_eq!(inst.m(), 2);
        assert_eq!(inst.n(), 1);
        assert_eq!(inst.col(0), &[1, -1]);
        assert_eq!(inst.b(), &[0, 0]);
        assert_eq!(inst.c(), &[5]);
    }

    #[test]
    fn dimension_mismatch_reports_line() {
        // b line has 1 entry where m = 2.
        let err = parse_instance("2 1\n1\n-1\n0\n").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 4);
                assert!(message.contains("b has 1 entries, expected 2"), "{message}");
            }
            other => panic!("unexpected error {other:?}"),
        }

        // Row of A with the wrong width.
        let err = parse_instance("1 3\n1 2\n5\n1 1 1\n").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("row 1 of A has 2 entries, expected 3"), "{message}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            parse_instance(""),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_instance("# only comments\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn bad_integer_reports_line() {
        let err = parse_instance("1 1\nx\n3\n1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn trailing_content_rejected() {
        let err = parse_instance("1 1\n2\n3\n1\n9 9\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err:?}");
    }

    #[test]
    fn normalize_keeps_best_duplicate() {
        let inst = IlpInstance::new(vec![vec![1, 1]], vec![4], vec![3, 5]).unwrap();
        let norm = normalize(&inst);
        assert_eq!(norm.instance.n(), 1);
        assert_eq!(norm.instance.c(), &[5]);
        assert_eq!(norm.origin_map, vec![1]);
    }

    #[test]
    fn normalize_breaks_ties_toward_lowest_index() {
        let inst = IlpInstance::new(vec![vec![0, 0], vec![1, 1]], vec![0, 2], vec![4, 4]).unwrap();
        let norm = normalize(&inst);
        assert_eq!(norm.instance.n(), 1);
        assert_eq!(norm.origin_map, vec![0]);
    }

    #[test]
    fn normalize_is_idempotent() {
        let inst = IlpInstance::new(
            vec![vec![2, 2, -1, 2], vec![0, 0, 3, 0]],
            vec![4, 3],
            vec![1, 7, 2, 7],
        )
        .unwrap();
        let once = normalize(&inst);
        let twice = normalize(&once.instance);
        assert_eq!(once.instance, twice.instance);
        assert_eq!(twice.origin_map, (0..once.instance.n()).collect::<Vec<_>>());
        // Best duplicate kept: columns 0,1,3 are identical, c = 7 wins at index 1.
        assert_eq!(once.origin_map, vec![1, 2]);
        assert_eq!(once.instance.c(), &[7, 2]);
    }

    #[test]
    fn lift_witness_scatters() {
        let inst = IlpInstance::new(vec![vec![1, 1]], vec![4], vec![3, 5]).unwrap();
        let norm = normalize(&inst);
        assert_eq!(norm.lift_witness(&[4], 2), vec![0, 4]);
    }

    #[test]
    fn max_abs_entry_examples() {
        let inst = IlpInstance::new(vec![vec![2, -5], vec![1, 0]], vec![0, 0], vec![0, 0]).unwrap();
        assert_eq!(max_abs_entry(&inst), 5);
        let zero = IlpInstance::new(vec![vec![0]], vec![0], vec![1]).unwrap();
        assert_eq!(max_abs_entry(&zero), 0);
    }

    #[test]
    fn eval_and_feasibility_helpers() {
        let inst = IlpInstance::new(vec![vec![2, 3]], vec![7], vec![3, 4]).unwrap();
        assert_eq!(inst.eval_ax(&[2, 1]).unwrap(), vec![7]);
        assert!(inst.is_feasible(&[2, 1]).unwrap());
        assert!(!inst.is_feasible(&[1, 1]).unwrap());
        assert!(!inst.is_feasible(&[-1, 3]).unwrap());
        assert_eq!(inst.objective(&[2, 1]).unwrap(), 10);
    }

    #[test]
    fn format_round_trips() {
        let inst = parse_instance("2 3\n1 -2 0\n4 5 6\n7 -8\n1 2 3\n").unwrap();
        assert_eq!(parse_instance(&format_instance(&inst)).unwrap(), inst);
        let feas = parse_instance("1 1\n3\n9\n").unwrap();
        assert_eq!(parse_instance(&format_instance(&feas)).unwrap(), feas);
    }
}
