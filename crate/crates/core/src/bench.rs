//! BFS versus SPUL statistics per source vertex.
//!
//! For each source, every BFS-reachable target is classified by whether its
//! BFS-tree path happens to repeat a label, and the exact search reports
//! how many targets have a rainbow path at all.

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{LabeledDigraph, VertexId};
use crate::search::{preprocess, solve, Algorithm, SearchBudget};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BenchCounts {
    /// Targets reachable from the source, the source itself excluded.
    pub sp_total: usize,
    /// Targets whose BFS path has pairwise-distinct labels.
    pub sp_correct: usize,
    /// Targets whose BFS path repeats a label.
    pub sp_infeasible: usize,
    /// Targets with a rainbow path found by the exact search.
    pub spul_found: usize,
    pub nodes_allocated: usize,
    pub aborted: bool,
}

impl BenchCounts {
    fn add(&mut self, other: &BenchCounts) {
        self.sp_total += other.sp_total;
        self.sp_correct += other.sp_correct;
        self.sp_infeasible += other.sp_infeasible;
        self.spul_found += other.spul_found;
        self.nodes_allocated += other.nodes_allocated;
        self.aborted |= other.aborted;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub source: VertexId,
    pub counts: BenchCounts,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BenchReport {
    /// Sorted by source id.
    pub rows: Vec<BenchRow>,
    pub totals: BenchCounts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub algorithm: Algorithm,
    pub budget: SearchBudget,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::A,
            budget: SearchBudget::unlimited(),
        }
    }
}

/// Counts for one source. The exact search always runs with preprocessing,
/// so every rainbow BFS path is counted even if the budget runs out.
pub fn bench_source(g: &LabeledDigraph, s: VertexId, config: BenchConfig) -> BenchCounts {
    let pre = preprocess(g, s);
    let sp_total = pre.reachable.len() - 1;
    let sp_correct = pre.early_found.len() - 1;
    let result = solve(g, s, None, config.algorithm, true, config.budget);
    BenchCounts {
        sp_total,
        sp_correct,
        sp_infeasible: sp_total - sp_correct,
        spul_found: result.paths_found,
        nodes_allocated: result.nodes_allocated,
        aborted: result.aborted,
    }
}

/// Runs every source in parallel over the shared graph.
pub fn bench(g: &LabeledDigraph, sources: &[VertexId], config: BenchConfig) -> BenchReport {
    let mut sources = sources.to_vec();
    sources.sort_unstable();
    sources.dedup();
    let rows: Vec<BenchRow> = sources
        .par_iter()
        .map(|&source| BenchRow {
            source,
            counts: bench_source(g, source, config),
        })
        .collect();
    let mut totals = BenchCounts::default();
    rows.iter().for_each(|r| totals.add(&r.counts));
    BenchReport { rows, totals }
}
