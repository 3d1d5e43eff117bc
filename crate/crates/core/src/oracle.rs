//! Brute-force ground truth for small instances.
//!
//! Everything here is deliberately naive and shares no code with the
//! searches it checks.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Label, LabeledDigraph, VertexId};
use crate::reduction::SatInstance;

/// Largest variable count `sat_brute_force` accepts.
pub const MAX_SAT_VARIABLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_labels: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_vertices: 8,
            max_edges: 20,
            max_labels: 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {actual} vertices, oracle limit is {limit}")]
    TooManyVertices { actual: usize, limit: usize },
    #[error("graph has {actual} edges, oracle limit is {limit}")]
    TooManyEdges { actual: usize, limit: usize },
    #[error("graph has {actual} labels, oracle limit is {limit}")]
    TooManyLabels { actual: usize, limit: usize },
    #[error("instance has {actual} variables, brute force limit is {limit}")]
    TooManyVariables { actual: usize, limit: usize },
    #[error("instance has {actual} clauses, harness limit is {limit}")]
    TooManyClauses { actual: usize, limit: usize },
}

/// Minimum rainbow distance and number of minimum-length rainbow walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RainbowStats {
    pub distance: usize,
    pub count: u64,
}

/// Enumerates every label-distinct edge sequence from `s` by depth-first
/// search and records, per reached vertex, the shortest length and how many
/// sequences attain it.
pub fn enumerate_rainbow(
    g: &LabeledDigraph,
    s: VertexId,
    limits: OracleLimits,
) -> Result<BTreeMap<VertexId, RainbowStats>, OracleError> {
    if g.vertex_count() > limits.max_vertices {
        return Err(OracleError::TooManyVertices {
            actual: g.vertex_count(),
            limit: limits.max_vertices,
        });
    }
    if g.edge_count() > limits.max_edges {
        return Err(OracleError::TooManyEdges {
            actual: g.edge_count(),
            limit: limits.max_edges,
        });
    }
    if g.label_count() > limits.max_labels {
        return Err(OracleError::TooManyLabels {
            actual: g.label_count(),
            limit: limits.max_labels,
        });
    }

    let mut best: BTreeMap<VertexId, RainbowStats> = BTreeMap::new();
    let mut used = vec![false; g.label_count()];
    walk(g, s, 0, &mut used, &mut best);
    Ok(best)
}

fn walk(
    g: &LabeledDigraph,
    at: VertexId,
    len: usize,
    used: &mut [bool],
    best: &mut BTreeMap<VertexId, RainbowStats>,
) {
    debug_assert!(len <= used.len());
    best.entry(at)
        .and_modify(|b| {
            if len < b.distance {
                *b = RainbowStats {
                    distance: len,
                    count: 1,
                };
            } else if len == b.distance {
                b.count += 1;
            }
        })
        .or_insert(RainbowStats {
            distance: len,
            count: 1,
        });
    for e in g.edges().iter().filter(|e| e.source == at) {
        let l = e.label.index();
        if used[l] {
            continue;
        }
        used[l] = true;
        walk(g, e.target, len + 1, used, best);
        used[l] = false;
    }
}

/// Decides whether the family has a system of distinct representatives via
/// maximum bipartite matching (Kuhn's augmenting paths).
pub fn sdr_matching<S: AsRef<[Label]>>(sets: &[S]) -> bool {
    let universe = sets
        .iter()
        .flat_map(|s| s.as_ref().iter())
        .map(|l| l.index() + 1)
        .max()
        .unwrap_or(0);
    let mut owner: Vec<Option<usize>> = vec![None; universe];
    for pos in 0..sets.len() {
        let mut seen = vec![false; universe];
        if !augment(sets, pos, &mut seen, &mut owner) {
            return false;
        }
    }
    true
}

fn augment<S: AsRef<[Label]>>(
    sets: &[S],
    pos: usize,
    seen: &mut [bool],
    owner: &mut [Option<usize>],
) -> bool {
    for &l in sets[pos].as_ref() {
        let l = l.index();
        if seen[l] {
            continue;
        }
        seen[l] = true;
        if owner[l].is_none_or(|other| augment(sets, other, seen, owner)) {
            owner[l] = Some(pos);
            return true;
        }
    }
    false
}

/// Tries all assignments in lexicographic order (false before true, `x1`
/// most significant) and returns the first satisfying one.
pub fn sat_brute_force(inst: &SatInstance) -> Result<Option<Vec<bool>>, OracleError> {
    let n = inst.num_vars();
    if n > MAX_SAT_VARIABLES {
        return Err(OracleError::TooManyVariables {
            actual: n,
            limit: MAX_SAT_VARIABLES,
        });
    }
    let mut assignment = vec![false; n];
    for bits in 0u32..(1u32 << n) {
        for (j, x) in assignment.iter_mut().enumerate() {
            *x = bits >> (n - 1 - j) & 1 == 1;
        }
        if inst.is_satisfied_by(&assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}
