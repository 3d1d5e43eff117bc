//! CNF satisfiability reduced to rainbow s–t reachability.
//!
//! For `n` variables and `m` clauses the encoded graph is a left-to-right
//! chain of gadgets starting at `s`:
//!
//! * variable `j`: two parallel chains of `m` edges each. Edge `i` of the
//!   positive chain carries label `j.i.p`, of the negative chain `j.i.n`.
//! * clause `i`: one parallel edge per literal. A literal `x_j` carries
//!   `j.i.p`, a literal `¬x_j` carries `j.i.n`.
//!
//! The last gadget ends in `t`. Walking the positive chain of `x_j` burns
//! every `j.·.p` label, so afterwards clauses can only be crossed through
//! `¬x_j` literals: the positive chain means `x_j = false`, the negative
//! chain means `x_j = true`. A rainbow s–t path exists iff the formula is
//! satisfiable.

use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeId, GraphBuilder, LabeledDigraph, PathError, RainbowPath, VertexId};
use crate::oracle::{sat_brute_force, OracleError};
use crate::search::{alg_a, SearchBudget};

/// Variable limit for [`rainbow_iff_sat`].
pub const HARNESS_MAX_VARIABLES: usize = 10;
/// Clause limit for [`rainbow_iff_sat`].
pub const HARNESS_MAX_CLAUSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    /// 1-based variable index.
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    /// From a nonzero DIMACS integer: `3` is `x3`, `-3` is `¬x3`.
    pub fn from_dimacs(v: i32) -> Self {
        assert!(v != 0, "DIMACS literal 0 is the clause terminator");
        Self {
            var: v.unsigned_abs(),
            negated: v < 0,
        }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -i64::from(self.var)
        } else {
            i64::from(self.var)
        }
    }

    pub fn is_satisfied_by(self, assignment: &[bool]) -> bool {
        assignment[self.var as usize - 1] != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("clause {clause} mentions variable {var}, but there are only {num_vars}")]
    VariableOutOfRange {
        clause: usize,
        var: u32,
        num_vars: usize,
    },
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
}

/// CNF formula over `x_1..x_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatInstance {
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
}

impl SatInstance {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self, SatError> {
        for (i, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(SatError::EmptyClause { clause: i + 1 });
            }
            if let Some(l) = clause
                .iter()
                .find(|l| l.var == 0 || l.var as usize > num_vars)
            {
                return Err(SatError::VariableOutOfRange {
                    clause: i + 1,
                    var: l.var,
                    num_vars,
                });
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assert_eq!(assignment.len(), self.num_vars);
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.is_satisfied_by(assignment)))
    }
}

/// The encoded graph plus the bookkeeping needed to read an assignment back.
#[derive(Debug, Clone)]
pub struct ReductionMap {
    pub graph: LabeledDigraph,
    pub source: VertexId,
    pub sink: VertexId,
    /// Per variable, the edges of its positive chain in path order.
    pub positive_chains: Vec<Vec<EdgeId>>,
    /// Per variable, the edges of its negative chain in path order.
    pub negative_chains: Vec<Vec<EdgeId>>,
    /// `s`, the vertex after each variable gadget, then the vertex after
    /// each clause gadget (the last being `t`). Collapses to `[s]` when
    /// there are no clauses.
    pub gadget_boundaries: Vec<VertexId>,
    pub instance: SatInstance,
}

/// Label on edge `clause` of variable `var`'s chain (both 1-based).
pub fn chain_label(var: usize, clause: usize, negated: bool) -> String {
    format!("{var}.{clause}.{}", if negated { 'n' } else { 'p' })
}

pub fn encode(inst: &SatInstance) -> ReductionMap {
    let n = inst.num_vars();
    let m = inst.clauses().len();
    let mut b = GraphBuilder::new();
    let source = b.add_vertex("s");
    let mut boundaries = vec![source];
    let mut positive_chains = Vec::with_capacity(n);
    let mut negative_chains = Vec::with_capacity(n);

    if m == 0 {
        // every chain is empty, so all gadget boundaries coincide with s
        positive_chains.resize(n, Vec::new());
        negative_chains.resize(n, Vec::new());
        return ReductionMap {
            graph: b.build(),
            source,
            sink: source,
            positive_chains,
            negative_chains,
            gadget_boundaries: boundaries,
            instance: inst.clone(),
        };
    }

    let mut at = source;
    for j in 1..=n {
        let end = b.add_vertex(&format!("x{j}"));
        for negated in [false, true] {
            let tag = if negated { 'n' } else { 'p' };
            let mut chain = Vec::with_capacity(m);
            let mut from = at;
            for i in 1..=m {
                let to = if i == m {
                    end
                } else {
                    b.add_vertex(&format!("x{j}{tag}{i}"))
                };
                let label = b.add_label(&chain_label(j, i, negated));
                chain.push(b.add_edge_ids(from, to, label));
                from = to;
            }
            if negated {
                negative_chains.push(chain);
            } else {
                positive_chains.push(chain);
            }
        }
        boundaries.push(end);
        at = end;
    }

    for (i, clause) in inst.clauses().iter().enumerate() {
        let i = i + 1;
        let end = if i == m {
            b.add_vertex("t")
        } else {
            b.add_vertex(&format!("c{i}"))
        };
        for lit in clause {
            let label = b.add_label(&chain_label(lit.var as usize, i, lit.negated));
            b.add_edge_ids(at, end, label);
        }
        boundaries.push(end);
        at = end;
    }

    ReductionMap {
        graph: b.build(),
        source,
        sink: at,
        positive_chains,
        negative_chains,
        gadget_boundaries: boundaries,
        instance: inst.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("path does not lead from s to t")]
    NotSourceToSink,
    #[error("path is not a rainbow path in the encoded graph: {0}")]
    Infeasible(#[from] PathError),
    #[error("path crosses neither or both chains of variable {0}")]
    AmbiguousVariable(usize),
    #[error("decoded assignment does not satisfy the formula")]
    Unsatisfied,
}

/// Reads `x_j = true` off a negative-chain traversal.
pub fn decode(rmap: &ReductionMap, path: &RainbowPath) -> Result<Vec<bool>, DecodeError> {
    let path = RainbowPath::new(&rmap.graph, path.start(), path.edges().to_vec())?;
    if path.start() != rmap.source || path.end(&rmap.graph) != rmap.sink {
        return Err(DecodeError::NotSourceToSink);
    }
    let on_path = |chain: &[EdgeId]| chain.iter().any(|e| path.edges().contains(e));
    let has_clauses = !rmap.instance.clauses().is_empty();
    let mut assignment = Vec::with_capacity(rmap.instance.num_vars());
    for (j, (pos, neg)) in rmap
        .positive_chains
        .iter()
        .zip(&rmap.negative_chains)
        .enumerate()
    {
        let (p, n) = (on_path(pos), on_path(neg));
        if has_clauses && p == n {
            return Err(DecodeError::AmbiguousVariable(j + 1));
        }
        assignment.push(n);
    }
    if !rmap.instance.is_satisfied_by(&assignment) {
        return Err(DecodeError::Unsatisfied);
    }
    Ok(assignment)
}

/// Searches the encoded graph for a rainbow s–t path.
pub fn find_witness(rmap: &ReductionMap) -> Option<RainbowPath> {
    let r = alg_a(
        &rmap.graph,
        rmap.source,
        Some(&[rmap.sink]),
        SearchBudget::unlimited(),
    );
    r.outcome(rmap.sink).and_then(|o| o.witness.clone())
}

/// `(rainbow s–t path exists, formula satisfiable)`, computed independently.
pub fn rainbow_iff_sat(inst: &SatInstance) -> Result<(bool, bool), OracleError> {
    if inst.num_vars() > HARNESS_MAX_VARIABLES {
        return Err(OracleError::TooManyVariables {
            actual: inst.num_vars(),
            limit: HARNESS_MAX_VARIABLES,
        });
    }
    if inst.clauses().len() > HARNESS_MAX_CLAUSES {
        return Err(OracleError::TooManyClauses {
            actual: inst.clauses().len(),
            limit: HARNESS_MAX_CLAUSES,
        });
    }
    let sat = sat_brute_force(inst)?.is_some();
    let spul = find_witness(&encode(inst)).is_some();
    Ok((spul, sat))
}
