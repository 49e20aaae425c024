//! Library half of the `fewrows` command-line tool: report shapes, instance
//! generators, and the benchmark harness. The binary in `main.rs` is a thin
//! argument-parsing shell over these.

pub mod bench;
pub mod gen;
pub mod report;
