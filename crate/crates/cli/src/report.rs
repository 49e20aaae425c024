//! Machine- and human-readable run reports.

use fewrows::discrepancy::Provenance;
use fewrows::dp::{SolveStats, Strategy};
use fewrows::{Solution, SolveStatus};
use serde::{Deserialize, Serialize};

/// Everything one solver run produced. Serialized as JSON with `--json`;
/// `parse(print(r)) == r` holds exactly (128-bit integers are emitted as
/// plain JSON integer literals, which `serde_json` reads back losslessly).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    /// "optimal" | "feasible" | "infeasible" | "unbounded".
    pub status: String,
    pub value: Option<i128>,
    pub witness: Option<Vec<i128>>,
    /// Discrepancy bound the box radius came from, as an exact rational
    /// string, with where it came from. Absent when no table was built
    /// (e.g. the LP relaxation already proved infeasibility).
    pub h_value: Option<String>,
    pub h_provenance: Option<String>,
    /// Requested merge strategy and the kernel that actually ran per level.
    pub strategy: String,
    pub kernels: Vec<String>,
    pub levels: Option<usize>,
    pub box_cells: Option<u64>,
    pub radii: Vec<i64>,
    pub l1_cap: Option<i128>,
    /// Whether the LP-vertex right-hand-side reduction ran first.
    pub proximity: bool,
    pub timings: Timings,
}

/// Per-phase wall-clock microseconds. The phases are disjoint sub-intervals
/// of the run, so their sum is at most `total_micros`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub normalize_micros: u64,
    pub plan_micros: u64,
    /// One entry per merge level.
    pub level_micros: Vec<u64>,
    pub reconstruct_micros: u64,
    pub total_micros: u64,
}

pub fn status_name(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Feasible => "feasible",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::Unbounded => "unbounded",
    }
}

pub fn strategy_name(strategy: Strategy) -> &'static str {
    match strategy {
        Strategy::Naive => "naive",
        Strategy::Conv => "conv",
        Strategy::Auto => "auto",
    }
}

fn provenance_name(p: Provenance) -> &'static str {
    match p {
        Provenance::Spencer => "spencer",
        Provenance::BeckFiala => "beck-fiala",
        Provenance::UserSupplied => "user-supplied",
        Provenance::Exact => "exact",
    }
}

impl RunReport {
    /// Assembles the report; `stats` is `None` when the run short-circuited
    /// before building any level table. `total_micros` is the caller's wall
    /// clock for the whole run (at least the solver-internal total).
    pub fn build(
        solution: &Solution,
        requested: Strategy,
        stats: Option<&SolveStats>,
        proximity: bool,
        total_micros: u64,
    ) -> RunReport {
        RunReport {
            status: status_name(solution.status).to_string(),
            value: solution.value,
            witness: solution.x.clone(),
            h_value: stats.map(|s| s.h_value.to_string()),
            h_provenance: stats.map(|s| provenance_name(s.h_provenance).to_string()),
            strategy: strategy_name(requested).to_string(),
            kernels: stats
                .map(|s| s.kernels.iter().map(|k| k.to_string()).collect())
                .unwrap_or_default(),
            levels: stats.map(|s| s.levels),
            box_cells: stats.map(|s| s.box_cells),
            radii: stats.map(|s| s.radii.clone()).unwrap_or_default(),
            l1_cap: stats.map(|s| s.l1_cap),
            proximity,
            timings: Timings {
                normalize_micros: stats.map_or(0, |s| s.normalize_micros),
                plan_micros: stats.map_or(0, |s| s.plan_micros),
                level_micros: stats.map(|s| s.level_micros.clone()).unwrap_or_default(),
                reconstruct_micros: stats.map_or(0, |s| s.reconstruct_micros),
                total_micros,
            },
        }
    }

    /// Multi-line plain-text rendering (the default, non-`--json` output).
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("status: {}\n", self.status));
        if let Some(v) = self.value {
            out.push_str(&format!("value: {v}\n"));
        }
        if let Some(x) = &self.witness {
            let xs: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("witness: {}\n", xs.join(" ")));
        }
        match (&self.h_value, &self.h_provenance) {
            (Some(h), Some(p)) => out.push_str(&format!("H: {h} ({p})\n")),
            _ => out.push_str("H: not computed\n"),
        }
        out.push_str(&format!("strategy: {}", self.strategy));
        if !self.kernels.is_empty() {
            out.push_str(&format!("; kernels: {}", summarize_kernels(&self.kernels)));
        }
        out.push('\n');
        if let (Some(levels), Some(cells)) = (self.levels, self.box_cells) {
            out.push_str(&format!(
                "levels: {levels}; box cells: {cells}; radii: {:?}",
                self.radii
            ));
            if let Some(cap) = self.l1_cap {
                out.push_str(&format!("; l1 cap: {cap}"));
            }
            out.push('\n');
        }
        if self.proximity {
            out.push_str("proximity reduction: on\n");
        }
        let t = &self.timings;
        let level_total: u64 = t.level_micros.iter().sum();
        out.push_str(&format!(
            "timing: normalize {}us, plan {}us, levels {}us, reconstruct {}us, total {}us\n",
            t.normalize_micros, t.plan_micros, level_total, t.reconstruct_micros, t.total_micros
        ));
        out
    }
}

/// `["naive", "naive", "conv-maxplus"]` -> `"naive x2, conv-maxplus"`.
fn summarize_kernels(kernels: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < kernels.len() {
        let mut j = i;
        while j + 1 < kernels.len() && kernels[j + 1] == kernels[i] {
            j += 1;
        }
        if j > i {
            parts.push(format!("{} x{}", kernels[i], j - i + 1));
        } else {
            parts.push(kernels[i].clone());
        }
        i = j + 1;
    }
    parts.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        RunReport {
            status: "optimal".into(),
            value: Some(10),
            witness: Some(vec![5]),
            h_value: Some("9/2".into()),
            h_provenance: Some("user-supplied".into()),
            strategy: "auto".into(),
            kernels: vec!["naive".into(), "naive".into(), "conv-maxplus".into()],
            levels: Some(3),
            box_cells: Some(41),
            radii: vec![20],
            l1_cap: Some(5),
            proximity: false,
            timings: Timings {
                normalize_micros: 12,
                plan_micros: 34,
                level_micros: vec![40, 40, 40],
                reconstruct_micros: 8,
                total_micros: 190,
            },
        }
    }

    #[test]
    fn json_round_trips_exactly() {
        let r = sample();
        let text = serde_json::to_string(&r).unwrap();
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn json_round_trips_extreme_wide_integers() {
        let mut r = sample();
        r.value = Some(i128::MAX);
        r.witness = Some(vec![i128::MAX, 0, -3]);
        r.l1_cap = Some(i128::MAX);
        let text = serde_json::to_string(&r).unwrap();
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn human_rendering_mentions_the_essentials() {
        let text = sample().render_human();
        assert!(text.contains("status: optimal"));
        assert!(text.contains("value: 10"));
        assert!(text.contains("witness: 5"));
        assert!(text.contains("H: 9/2 (user-supplied)"));
        assert!(text.contains("kernels: naive x2, conv-maxplus"));
        assert!(text.contains("total 190us"));
    }

    #[test]
    fn kernel_summary_groups_runs() {
        let ks: Vec<String> = ["a", "a", "b", "a"].iter().map(|s| s.to_string()).collect();
        assert_eq!(summarize_kernels(&ks), "a x2, b, a");
        assert_eq!(summarize_kernels(&[]), "");
    }
}
