//! FIFO search over a tree of feasible prefix paths.
//!
//! Each tree node extends its parent's path by one unit (an edge for
//! algorithm A, a compressed arc for algorithm B). Nodes are appended to the
//! arena in creation order and dequeued in the same order, so the arena
//! doubles as the queue: everything past `head` is pending.

use crate::graph::{CompressedArc, Label, LabeledDigraph, VertexId};

use super::sdr::sdr_exists;
use super::SearchBudget;

const ROOT: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
pub(crate) struct TreeNode {
    /// Edge or arc id; `ROOT` for the dummy edge into the source.
    pub unit: u32,
    pub parent: u32,
    pub depth: u32,
    pub head: VertexId,
}

/// What the tree grows over.
pub(crate) trait Expansion {
    fn successors(&self, v: VertexId) -> &[u32];
    fn head(&self, unit: u32) -> VertexId;
    /// Called once per dequeued node with its root path.
    fn begin(&mut self, path: &[u32]);
    /// Whether `path + unit` stays feasible.
    fn admits(&mut self, unit: u32) -> bool;
}

#[derive(Debug)]
pub(crate) struct TreeRun {
    pub nodes: Vec<TreeNode>,
    /// Node through which each vertex was first reached.
    pub first_arrival: Vec<Option<u32>>,
    pub aborted: bool,
}

impl TreeRun {
    /// Units on the root path of `node`, root first.
    pub fn path(&self, node: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.nodes[node as usize].depth as usize);
        let mut at = node;
        while self.nodes[at as usize].unit != ROOT {
            out.push(self.nodes[at as usize].unit);
            at = self.nodes[at as usize].parent;
        }
        out.reverse();
        out
    }

    pub fn nodes_per_depth(&self) -> Vec<usize> {
        let mut hist = Vec::new();
        for n in &self.nodes {
            let d = n.depth as usize;
            if hist.len() <= d {
                hist.resize(d + 1, 0);
            }
            hist[d] += 1;
        }
        hist
    }
}

/// Grows the tree from `source` until the queue drains, every vertex flagged
/// in `wanted` has been reached, or the budget would be exceeded.
///
/// With `wanted == None` the search runs to exhaustion.
pub(crate) fn grow_tree<X: Expansion>(
    x: &mut X,
    vertex_count: usize,
    source: VertexId,
    wanted: Option<&[bool]>,
    budget: SearchBudget,
) -> TreeRun {
    let mut run = TreeRun {
        nodes: vec![TreeNode {
            unit: ROOT,
            parent: ROOT,
            depth: 0,
            head: source,
        }],
        first_arrival: vec![None; vertex_count],
        aborted: false,
    };
    run.first_arrival[source.index()] = Some(0);

    let mut remaining = wanted.map(|w| {
        w.iter()
            .enumerate()
            .filter(|&(v, &flag)| flag && v != source.index())
            .count()
    });
    if remaining == Some(0) {
        return run;
    }

    let max_nodes = budget.max_tree_nodes.map_or(usize::MAX, |n| n.get());
    let max_queue = budget.max_queue_entries.map_or(usize::MAX, |n| n.get());

    let mut path = Vec::new();
    let mut head = 0usize;
    while head < run.nodes.len() {
        let current = head as u32;
        let node = run.nodes[head];
        head += 1;

        path.clear();
        path.extend(run.path(current));
        x.begin(&path);

        for i in 0..x.successors(node.head).len() {
            let unit = x.successors(node.head)[i];
            if !x.admits(unit) {
                continue;
            }
            if run.nodes.len() >= max_nodes || run.nodes.len() - head >= max_queue {
                run.aborted = true;
                return run;
            }
            let child = run.nodes.len() as u32;
            let target = x.head(unit);
            run.nodes.push(TreeNode {
                unit,
                parent: current,
                depth: node.depth + 1,
                head: target,
            });
            let slot = &mut run.first_arrival[target.index()];
            if slot.is_none() {
                *slot = Some(child);
                if let (Some(rem), Some(w)) = (remaining.as_mut(), wanted) {
                    if w[target.index()] {
                        *rem -= 1;
                        if *rem == 0 {
                            return run;
                        }
                    }
                }
            }
        }
    }
    run
}

/// Algorithm A: one unit per edge, feasible iff the edge's label is unused.
pub(crate) struct EdgeExpansion<'g> {
    g: &'g LabeledDigraph,
    out: Vec<Vec<u32>>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl<'g> EdgeExpansion<'g> {
    pub fn new(g: &'g LabeledDigraph) -> Self {
        let out = g
            .vertices()
            .map(|v| g.out_edges(v).iter().map(|e| e.0).collect())
            .collect();
        Self {
            g,
            out,
            stamp: vec![0; g.label_count()],
            epoch: 0,
        }
    }

    fn label(&self, unit: u32) -> Label {
        self.g.edges()[unit as usize].label
    }
}

impl Expansion for EdgeExpansion<'_> {
    fn successors(&self, v: VertexId) -> &[u32] {
        &self.out[v.index()]
    }

    fn head(&self, unit: u32) -> VertexId {
        self.g.edges()[unit as usize].target
    }

    fn begin(&mut self, path: &[u32]) {
        self.epoch = self.epoch.checked_add(1).unwrap_or_else(|| {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            1
        });
        for &u in path {
            let l = self.label(u).index();
            self.stamp[l] = self.epoch;
        }
    }

    fn admits(&mut self, unit: u32) -> bool {
        self.stamp[self.label(unit).index()] != self.epoch
    }
}

/// Algorithm B: one unit per compressed arc, feasible iff the label sets
/// along the path admit a system of distinct representatives.
pub(crate) struct ArcExpansion<'a> {
    arcs: &'a [CompressedArc],
    out: Vec<Vec<u32>>,
    sets: Vec<&'a [Label]>,
}

impl<'a> ArcExpansion<'a> {
    pub fn new(vertex_count: usize, arcs: &'a [CompressedArc]) -> Self {
        let mut out = vec![Vec::new(); vertex_count];
        for (i, arc) in arcs.iter().enumerate() {
            out[arc.source.index()].push(i as u32);
        }
        Self {
            arcs,
            out,
            sets: Vec::new(),
        }
    }
}

impl Expansion for ArcExpansion<'_> {
    fn successors(&self, v: VertexId) -> &[u32] {
        &self.out[v.index()]
    }

    fn head(&self, unit: u32) -> VertexId {
        self.arcs[unit as usize].target
    }

    fn begin(&mut self, path: &[u32]) {
        let arcs = self.arcs;
        self.sets.clear();
        self.sets
            .extend(path.iter().map(|&u| arcs[u as usize].labels.as_slice()));
    }

    fn admits(&mut self, unit: u32) -> bool {
        self.sets.push(self.arcs[unit as usize].labels.as_slice());
        let ok = sdr_exists(&self.sets);
        self.sets.pop();
        ok
    }
}
