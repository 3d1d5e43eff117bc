//! Shortest paths with unique labels (SPUL) in directed labeled multigraphs.
//!
//! A path is *feasible* (a rainbow path) when no two of its edges carry the
//! same label. Vertices may repeat; only labels are constrained. Finding a
//! shortest feasible path is NP-hard, so the exact searches here are
//! exponential in the worst case and accept an explicit [`SearchBudget`].
//!
//! * [`graph`]: the multigraph model, rainbow paths and parallel-edge compression.
//! * [`search`]: plain BFS, the edge-tree search (algorithm A), the
//!   compressed-arc search with SDR backtracking (algorithm B), and
//!   BFS preprocessing.
//! * [`oracle`]: brute-force ground truth for small instances.
//! * [`reduction`]: CNF to SPUL encoding and witness decoding.
//! * [`io`]: edge-list, DIMACS, result and reduction-map formats.
//! * [`bench`]: BFS versus SPUL path statistics per source vertex.

pub mod bench;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod reduction;
pub mod search;

pub use graph::{
    compress_parallel, CompressedArc, Edge, EdgeId, GraphBuilder, Label, LabeledDigraph, PathError,
    RainbowPath, VertexId,
};
pub use search::{
    alg_a, alg_b, bfs, preprocess, sdr_backtrack, solve, Algorithm, BfsTree, Preprocessed,
    SearchBudget, SearchResult, TargetOutcome, TargetStatus,
};
