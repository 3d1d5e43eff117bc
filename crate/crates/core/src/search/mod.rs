//! Shortest-path searches: plain BFS and the two exact SPUL searches.
//!
//! Both exact searches grow a FIFO tree of every feasible prefix path from
//! the source. Since the tree is explored level by level, the first time a
//! vertex is reached its path is a shortest feasible one. Out-edges are
//! expanded in insertion order, which fixes the reported witness among
//! equal-length alternatives.

mod sdr;
mod tree;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;

use serde::Serialize;

use crate::graph::{compress_parallel, EdgeId, LabeledDigraph, RainbowPath, VertexId};

pub use sdr::sdr_backtrack;
use tree::{grow_tree, ArcExpansion, EdgeExpansion, TreeRun};

/// Stand-in for memory exhaustion: searches stop and report partial results
/// once growing the tree would exceed either limit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchBudget {
    /// Cap on tree nodes, the root included.
    pub max_tree_nodes: Option<NonZeroUsize>,
    /// Cap on nodes waiting in the queue.
    pub max_queue_entries: Option<NonZeroUsize>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn with_max_tree_nodes(n: NonZeroUsize) -> Self {
        Self {
            max_tree_nodes: Some(n),
            max_queue_entries: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Edge-tree search.
    A,
    /// Compressed-arc search with SDR backtracking.
    B,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::A => "a",
            Algorithm::B => "b",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" | "A" => Ok(Algorithm::A),
            "b" | "B" => Ok(Algorithm::B),
            other => Err(format!("unknown algorithm '{other}', expected a or b")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TargetStatus {
    #[serde(rename = "found")]
    Found,
    /// Not reachable even ignoring labels.
    #[serde(rename = "unreachable")]
    Unreachable,
    /// Reachable, but the search finished without a feasible path.
    #[serde(rename = "infeasible")]
    Infeasible,
    /// Reachable, and the budget ran out before a feasible path was found.
    #[serde(rename = "not-found-before-budget")]
    NotFoundBeforeBudget,
}

impl TargetStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TargetStatus::Found => "found",
            TargetStatus::Unreachable => "unreachable",
            TargetStatus::Infeasible => "infeasible",
            TargetStatus::NotFoundBeforeBudget => "not-found-before-budget",
        }
    }
}

impl fmt::Display for TargetStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetOutcome {
    pub target: VertexId,
    pub status: TargetStatus,
    /// Unlabeled shortest distance, if reachable at all.
    pub bfs_distance: Option<usize>,
    /// Present iff `status == Found`.
    pub witness: Option<RainbowPath>,
}

impl TargetOutcome {
    /// SPUL distance, when found.
    pub fn distance(&self) -> Option<usize> {
        self.witness.as_ref().map(RainbowPath::len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub source: VertexId,
    /// Sorted by target id.
    pub outcomes: Vec<TargetOutcome>,
    pub aborted: bool,
    /// Tree nodes created by the main search, root included.
    pub nodes_allocated: usize,
    /// Found targets other than the source.
    pub paths_found: usize,
    /// Tree nodes per depth; index 0 is the root.
    pub nodes_per_depth: Vec<usize>,
}

impl SearchResult {
    pub fn outcome(&self, target: VertexId) -> Option<&TargetOutcome> {
        self.outcomes
            .binary_search_by_key(&target, |o| o.target)
            .ok()
            .map(|i| &self.outcomes[i])
    }

    pub fn distance(&self, target: VertexId) -> Option<usize> {
        self.outcome(target).and_then(TargetOutcome::distance)
    }

    pub fn found(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.outcomes
            .iter()
            .filter(|o| o.status == TargetStatus::Found)
            .map(|o| o.target)
    }
}

/// Unlabeled BFS tree from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsTree {
    source: VertexId,
    dist: Vec<Option<usize>>,
    pred: Vec<Option<EdgeId>>,
}

impl BfsTree {
    pub fn source(&self) -> VertexId {
        self.source
    }

    /// `(distance, predecessor edge)`; `None` when unreachable.
    pub fn get(&self, v: VertexId) -> Option<(usize, Option<EdgeId>)> {
        self.dist[v.index()].map(|d| (d, self.pred[v.index()]))
    }

    pub fn distance(&self, v: VertexId) -> Option<usize> {
        self.dist[v.index()]
    }

    pub fn is_reachable(&self, v: VertexId) -> bool {
        self.dist[v.index()].is_some()
    }

    pub fn reachable(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.dist
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_some())
            .map(|(v, _)| VertexId::from(v))
    }

    /// Tree path from the source, edges in order.
    pub fn path_edges(&self, g: &LabeledDigraph, v: VertexId) -> Option<Vec<EdgeId>> {
        self.dist[v.index()]?;
        let mut edges = Vec::new();
        let mut at = v;
        while let Some(e) = self.pred[at.index()] {
            edges.push(e);
            at = g.edge(e).source;
        }
        edges.reverse();
        Some(edges)
    }
}

/// Breadth-first search ignoring labels. Out-edges are scanned in insertion
/// order, so each predecessor is the first edge that discovered its vertex.
pub fn bfs(g: &LabeledDigraph, s: VertexId) -> BfsTree {
    assert!(g.contains_vertex(s), "source {s} not in graph");
    let n = g.vertex_count();
    let mut dist = vec![None; n];
    let mut pred = vec![None; n];
    let mut queue = VecDeque::new();
    dist[s.index()] = Some(0);
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        let d = dist[v.index()].unwrap();
        for &e in g.out_edges(v) {
            let w = g.edge(e).target;
            if dist[w.index()].is_none() {
                dist[w.index()] = Some(d + 1);
                pred[w.index()] = Some(e);
                queue.push_back(w);
            }
        }
    }
    BfsTree {
        source: s,
        dist,
        pred,
    }
}

/// Output of the two BFS preprocessing stages.
#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub bfs: BfsTree,
    /// BFS-reachable vertices, ascending.
    pub reachable: Vec<VertexId>,
    /// Vertices whose BFS-tree path already has distinct labels. Those paths
    /// are optimal: nothing feasible can be shorter than the BFS distance.
    pub early_found: BTreeMap<VertexId, RainbowPath>,
}

pub fn preprocess(g: &LabeledDigraph, s: VertexId) -> Preprocessed {
    // BFS is deterministic, so one tree serves both stages: reachability
    // first, then the tree paths that happen to be rainbow.
    let tree = bfs(g, s);
    let reachable: Vec<VertexId> = tree.reachable().collect();
    let early_found = reachable
        .iter()
        .filter_map(|&v| {
            let edges = tree.path_edges(g, v)?;
            RainbowPath::new(g, s, edges).ok().map(|p| (v, p))
        })
        .collect();
    Preprocessed {
        bfs: tree,
        reachable,
        early_found,
    }
}

/// Algorithm A over all vertices (`targets == None`) or the given targets.
pub fn alg_a(
    g: &LabeledDigraph,
    s: VertexId,
    targets: Option<&[VertexId]>,
    budget: SearchBudget,
) -> SearchResult {
    solve(g, s, targets, Algorithm::A, false, budget)
}

/// Algorithm B over all vertices (`targets == None`) or the given targets.
pub fn alg_b(
    g: &LabeledDigraph,
    s: VertexId,
    targets: Option<&[VertexId]>,
    budget: SearchBudget,
) -> SearchResult {
    solve(g, s, targets, Algorithm::B, false, budget)
}

/// Runs the chosen exact search, optionally after BFS preprocessing.
///
/// Without preprocessing and without explicit targets the tree is grown to
/// exhaustion (or until the budget runs out). With preprocessing, targets
/// whose BFS path is already rainbow are answered directly, and the main
/// search stops once every remaining reachable target has been found.
///
/// Outcomes cover every vertex when `targets` is `None`, otherwise exactly
/// the given targets. An explicit empty target list does no work at all.
pub fn solve(
    g: &LabeledDigraph,
    s: VertexId,
    targets: Option<&[VertexId]>,
    algorithm: Algorithm,
    use_preprocess: bool,
    budget: SearchBudget,
) -> SearchResult {
    assert!(g.contains_vertex(s), "source {s} not in graph");
    let report: Vec<VertexId> = match targets {
        None => g.vertices().collect(),
        Some(ts) => {
            let mut ts = ts.to_vec();
            ts.sort_unstable();
            ts.dedup();
            assert!(
                ts.iter().all(|&t| g.contains_vertex(t)),
                "target not in graph"
            );
            ts
        }
    };
    if report.is_empty() {
        return SearchResult {
            source: s,
            outcomes: Vec::new(),
            aborted: false,
            nodes_allocated: 0,
            paths_found: 0,
            nodes_per_depth: Vec::new(),
        };
    }

    let pre = preprocess(g, s);
    let mut found: BTreeMap<VertexId, RainbowPath> = BTreeMap::new();
    let wanted: Option<Vec<bool>> = if use_preprocess {
        for &t in &report {
            if let Some(p) = pre.early_found.get(&t) {
                found.insert(t, p.clone());
            }
        }
        let mut mask = vec![false; g.vertex_count()];
        for &t in &report {
            if pre.bfs.is_reachable(t) && !found.contains_key(&t) {
                mask[t.index()] = true;
            }
        }
        Some(mask)
    } else {
        targets.map(|_| {
            let mut mask = vec![false; g.vertex_count()];
            report.iter().for_each(|t| mask[t.index()] = true);
            mask
        })
    };

    let skip_main = wanted.as_ref().is_some_and(|w| !w.iter().any(|&b| b));
    let mut aborted = false;
    let mut nodes_allocated = 0;
    let mut nodes_per_depth = Vec::new();
    if !skip_main {
        let wanted = wanted.as_deref();
        match algorithm {
            Algorithm::A => {
                let mut x = EdgeExpansion::new(g);
                let run = grow_tree(&mut x, g.vertex_count(), s, wanted, budget);
                collect_witnesses(&run, &report, &mut found, |path| {
                    let edges = path.into_iter().map(EdgeId).collect();
                    RainbowPath::new(g, s, edges).expect("tree path is rainbow")
                });
                aborted = run.aborted;
                nodes_allocated = run.nodes.len();
                nodes_per_depth = run.nodes_per_depth();
            }
            Algorithm::B => {
                let arcs = compress_parallel(g);
                let mut x = ArcExpansion::new(g.vertex_count(), &arcs);
                let run = grow_tree(&mut x, g.vertex_count(), s, wanted, budget);
                collect_witnesses(&run, &report, &mut found, |path| {
                    let sets: Vec<&[_]> = path
                        .iter()
                        .map(|&a| arcs[a as usize].labels.as_slice())
                        .collect();
                    let reps = sdr_backtrack(&sets).expect("tree path admits an SDR");
                    let edges = path
                        .iter()
                        .zip(reps)
                        .map(|(&a, l)| arcs[a as usize].edge_with_label(g, l).unwrap())
                        .collect();
                    RainbowPath::new(g, s, edges).expect("SDR yields a rainbow path")
                });
                aborted = run.aborted;
                nodes_allocated = run.nodes.len();
                nodes_per_depth = run.nodes_per_depth();
            }
        }
    }

    let outcomes: Vec<TargetOutcome> = report
        .iter()
        .map(|&t| {
            let bfs_distance = pre.bfs.distance(t);
            let witness = found.remove(&t);
            let status = if witness.is_some() {
                TargetStatus::Found
            } else if bfs_distance.is_none() {
                TargetStatus::Unreachable
            } else if aborted {
                TargetStatus::NotFoundBeforeBudget
            } else {
                TargetStatus::Infeasible
            };
            TargetOutcome {
                target: t,
                status,
                bfs_distance,
                witness,
            }
        })
        .collect();
    let paths_found = outcomes
        .iter()
        .filter(|o| o.status == TargetStatus::Found && o.target != s)
        .count();
    SearchResult {
        source: s,
        outcomes,
        aborted,
        nodes_allocated,
        paths_found,
        nodes_per_depth,
    }
}

fn collect_witnesses(
    run: &TreeRun,
    report: &[VertexId],
    found: &mut BTreeMap<VertexId, RainbowPath>,
    materialize: impl Fn(Vec<u32>) -> RainbowPath,
) {
    for &t in report {
        if found.contains_key(&t) {
            continue;
        }
        if let Some(node) = run.first_arrival[t.index()] {
            found.insert(t, materialize(run.path(node)));
        }
    }
}
