//! Directed labeled multigraph.
//!
//! Vertices and labels are external strings interned to dense ids in
//! first-appearance order. Parallel edges and self-loops are kept as-is;
//! edge insertion order is the tie-break order used by every search.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

macro_rules! dense_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            #[inline]
            fn from(i: usize) -> Self {
                $name(u32::try_from(i).expect(concat!(stringify!($name), " overflow")))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

dense_id!(
    /// Dense vertex index, `0 <= id < vertex_count`.
    VertexId
);
dense_id!(
    /// Dense label index, `0 <= id < label_count`.
    Label
);
dense_id!(
    /// Dense edge index in insertion order.
    EdgeId
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub source: VertexId,
    pub target: VertexId,
    pub label: Label,
}

/// Bijection between external names and dense ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Interner {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Interner {
    fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = u32::try_from(self.names.len()).expect("interner overflow");
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    fn get(&self, name: &str) -> Option<u32> {
        self.ids.get(name).copied()
    }

    fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    fn len(&self) -> usize {
        self.names.len()
    }
}

/// Incremental construction of a [`LabeledDigraph`].
#[derive(Debug, Default)]
pub struct GraphBuilder {
    vertices: Interner,
    labels: Interner,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeId>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns a vertex name, returning the existing id if already known.
    pub fn add_vertex(&mut self, name: &str) -> VertexId {
        let id = self.vertices.intern(name);
        if self.out.len() < self.vertices.len() {
            self.out.push(Vec::new());
        }
        VertexId(id)
    }

    pub fn add_label(&mut self, name: &str) -> Label {
        Label(self.labels.intern(name))
    }

    /// Appends an edge. Identical triples produce parallel edges.
    pub fn add_edge(&mut self, source: &str, target: &str, label: &str) -> EdgeId {
        let source = self.add_vertex(source);
        let target = self.add_vertex(target);
        let label = self.add_label(label);
        self.add_edge_ids(source, target, label)
    }

    pub fn add_edge_ids(&mut self, source: VertexId, target: VertexId, label: Label) -> EdgeId {
        assert!(source.index() < self.out.len() && target.index() < self.out.len());
        assert!(label.index() < self.labels.len());
        let id = EdgeId::from(self.edges.len());
        self.edges.push(Edge {
            id,
            source,
            target,
            label,
        });
        self.out[source.index()].push(id);
        id
    }

    pub fn build(self) -> LabeledDigraph {
        LabeledDigraph {
            vertices: self.vertices,
            labels: self.labels,
            edges: self.edges,
            out: self.out,
        }
    }
}

/// Immutable directed multigraph with one label per edge.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledDigraph {
    vertices: Interner,
    labels: Interner,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeId>>,
}

impl LabeledDigraph {
    /// Builds a graph from `(source, target, label)` name triples.
    pub fn from_triples<I, S>(triples: I) -> Self
    where
        I: IntoIterator<Item = (S, S, S)>,
        S: AsRef<str>,
    {
        let mut b = GraphBuilder::new();
        for (s, t, l) in triples {
            b.add_edge(s.as_ref(), t.as_ref(), l.as_ref());
        }
        b.build()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> {
        (0..self.vertex_count() as u32).map(VertexId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    /// Out-edges of `v` in insertion order.
    #[inline]
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out[v.index()]
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices.get(name).map(VertexId)
    }

    pub fn label_id(&self, name: &str) -> Option<Label> {
        self.labels.get(name).map(Label)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        self.vertices.name(v.0)
    }

    pub fn label_name(&self, l: Label) -> &str {
        self.labels.name(l.0)
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.index() < self.vertex_count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("edge {0} does not exist")]
    UnknownEdge(EdgeId),
    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),
    #[error("edge {edge} does not start at vertex {expected}")]
    Disconnected { edge: EdgeId, expected: VertexId },
    #[error("label {label} is used more than once")]
    RepeatedLabel { label: Label },
}

/// A walk whose edges carry pairwise-distinct labels. Vertices may repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RainbowPath {
    start: VertexId,
    edges: Vec<EdgeId>,
    used_labels: BTreeSet<Label>,
}

impl RainbowPath {
    /// The zero-length path at `start`.
    pub fn empty(start: VertexId) -> Self {
        Self {
            start,
            edges: Vec::new(),
            used_labels: BTreeSet::new(),
        }
    }

    /// Validates connectivity and label distinctness.
    pub fn new(g: &LabeledDigraph, start: VertexId, edges: Vec<EdgeId>) -> Result<Self, PathError> {
        if !g.contains_vertex(start) {
            return Err(PathError::UnknownVertex(start));
        }
        let mut at = start;
        let mut used_labels = BTreeSet::new();
        for &e in &edges {
            if e.index() >= g.edge_count() {
                return Err(PathError::UnknownEdge(e));
            }
            let edge = g.edge(e);
            if edge.source != at {
                return Err(PathError::Disconnected {
                    edge: e,
                    expected: at,
                });
            }
            if !used_labels.insert(edge.label) {
                return Err(PathError::RepeatedLabel { label: edge.label });
            }
            at = edge.target;
        }
        Ok(Self {
            start,
            edges,
            used_labels,
        })
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self, g: &LabeledDigraph) -> VertexId {
        self.edges.last().map_or(self.start, |&e| g.edge(e).target)
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn used_labels(&self) -> &BTreeSet<Label> {
        &self.used_labels
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Labels in path order.
    pub fn labels(&self, g: &LabeledDigraph) -> Vec<Label> {
        self.edges.iter().map(|&e| g.edge(e).label).collect()
    }

    /// Visited vertices including the start, so `len() + 1` entries.
    pub fn vertices(&self, g: &LabeledDigraph) -> Vec<VertexId> {
        std::iter::once(self.start)
            .chain(self.edges.iter().map(|&e| g.edge(e).target))
            .collect()
    }
}

/// All parallel edges `source -> target` merged into one super-edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedArc {
    pub source: VertexId,
    pub target: VertexId,
    /// Distinct labels of the underlying edges, ascending.
    pub labels: Vec<Label>,
    /// Underlying edges, ascending by id.
    pub edges: Vec<EdgeId>,
}

impl CompressedArc {
    /// Lowest-id underlying edge carrying `label`.
    pub fn edge_with_label(&self, g: &LabeledDigraph, label: Label) -> Option<EdgeId> {
        self.edges
            .iter()
            .copied()
            .find(|&e| g.edge(e).label == label)
    }
}

/// Groups edges by ordered vertex pair. Arcs appear in order of their first edge.
pub fn compress_parallel(g: &LabeledDigraph) -> Vec<CompressedArc> {
    let mut index: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    let mut arcs: Vec<CompressedArc> = Vec::new();
    for edge in g.edges() {
        let slot = *index.entry((edge.source, edge.target)).or_insert_with(|| {
            arcs.push(CompressedArc {
                source: edge.source,
                target: edge.target,
                labels: Vec::new(),
                edges: Vec::new(),
            });
            arcs.len() - 1
        });
        let arc = &mut arcs[slot];
        arc.edges.push(edge.id);
        if let Err(pos) = arc.labels.binary_search(&edge.label) {
            arc.labels.insert(pos, edge.label);
        }
    }
    arcs
}


#[cfg(test)]
mod tests {
    use super::fixtures::{detour, parallel};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_graph() {
        let g = LabeledDigraph::from_triples(Vec::<(&str, &str, &str)>::new());
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(g.edge_count(), 0);
        assert!(compress_parallel(&g).is_empty());
    }

    #[test]
    fn detour_counts() {
        let g = detour();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.label_count(), 4);
        assert_eq!(g.vertex_name(VertexId(0)), "S");
        assert_eq!(g.vertex_id("T"), Some(VertexId(3)));
        let a = g.vertex_id("A").unwrap();
        let outs: Vec<_> = g.out_edges(a).iter().map(|&e| g.edge(e).target).collect();
        assert_eq!(
            outs,
            vec![g.vertex_id("B").unwrap(), g.vertex_id("C").unwrap()]
        );
    }

    #[test]
    fn duplicate_triple_makes_parallel_edges() {
        let g = LabeledDigraph::from_triples([("S", "A", "1"), ("S", "A", "1")]);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.label_count(), 1);
        assert_eq!(g.out_edges(VertexId(0)), &[EdgeId(0), EdgeId(1)]);
        let arcs = compress_parallel(&g);
        assert_eq!(arcs.len(), 1);
        assert_eq!(arcs[0].labels, vec![Label(0)]);
        assert_eq!(arcs[0].edges, vec![EdgeId(0), EdgeId(1)]);
    }

    #[test]
    fn compress_parallel_bundles() {
        let g = parallel();
        let arcs = compress_parallel(&g);
        assert_eq!(arcs.len(), 2);
        for arc in &arcs {
            assert_eq!(arc.labels, vec![Label(0), Label(1), Label(2)]);
            assert_eq!(arc.edges.len(), 3);
        }
        assert_eq!(arcs[0].target, arcs[1].source);
    }

    #[test]
    fn compress_detour_is_identity() {
        let g = detour();
        let arcs = compress_parallel(&g);
        assert_eq!(arcs.len(), 6);
        for (arc, edge) in arcs.iter().zip(g.edges()) {
            assert_eq!(arc.labels, vec![edge.label]);
            assert_eq!(arc.edges, vec![edge.id]);
        }
    }

    #[test]
    fn rainbow_path_validation() {
        let g = detour();
        let s = g.vertex_id("S").unwrap();
        // S-A-B-T repeats label 1
        let err = RainbowPath::new(&g, s, vec![EdgeId(0), EdgeId(1), EdgeId(2)]).unwrap_err();
        assert_eq!(err, PathError::RepeatedLabel { label: Label(0) });
        let err = RainbowPath::new(&g, s, vec![EdgeId(1)]).unwrap_err();
        assert!(matches!(err, PathError::Disconnected { .. }));
        let p = RainbowPath::new(&g, s, vec![EdgeId(0), EdgeId(3), EdgeId(4), EdgeId(5)]).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.used_labels().len(), 4);
        assert_eq!(p.end(&g), g.vertex_id("T").unwrap());
        let names: Vec<_> = p
            .vertices(&g)
            .into_iter()
            .map(|v| g.vertex_name(v))
            .collect();
        assert_eq!(names, ["S", "A", "C", "D", "T"]);
    }

    #[test]
    fn self_loop_allowed() {
        let g = LabeledDigraph::from_triples([("a", "a", "x"), ("a", "b", "y")]);
        let p = RainbowPath::new(&g, VertexId(0), vec![EdgeId(0), EdgeId(1)]).unwrap();
        assert_eq!(p.vertices(&g), vec![VertexId(0), VertexId(0), VertexId(1)]);
    }

    fn triples() -> impl Strategy<Value = Vec<(String, String, String)>> {
        prop::collection::vec(("[a-e]", "[a-e]", "[0-4]"), 0..30)
    }

    proptest! {
        #[test]
        fn compression_preserves_edges(ts in triples()) {
            let g = LabeledDigraph::from_triples(ts.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())));
            let arcs = compress_parallel(&g);
            prop_assert_eq!(arcs.iter().map(|a| a.edges.len()).sum::<usize>(), g.edge_count());
            for arc in &arcs {
                prop_assert!(!arc.labels.is_empty());
                prop_assert!(arc.labels.windows(2).all(|w| w[0] < w[1]));
            }
        }

        #[test]
        fn interning_roundtrip_and_determinism(ts in triples()) {
            let iter = || ts.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str()));
            let g = LabeledDigraph::from_triples(iter());
            let h = LabeledDigraph::from_triples(iter());
            prop_assert_eq!(&g, &h);
            for v in g.vertices() {
                prop_assert_eq!(g.vertex_id(g.vertex_name(v)), Some(v));
                let out = g.out_edges(v);
                prop_assert!(out.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(out.iter().all(|&e| g.edge(e).source == v));
            }
            for l in 0..g.label_count() {
                let l = Label::from(l);
                prop_assert_eq!(g.label_id(g.label_name(l)), Some(l));
            }
            prop_assert_eq!(g.vertices().map(|v| g.out_edges(v).len()).sum::<usize>(), g.edge_count());
        }
    }
}
