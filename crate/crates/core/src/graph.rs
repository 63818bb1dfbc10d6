//! Simplicial graphs and the induced-subgraph calculus.
//!
//! A [`SimplicialGraph`] is a finite graph without loops or multiple edges;
//! it stays fixed while we compute with it, so induced subgraphs are just
//! vertex sets ([`VertexSet`]) keyed to their ambient graph. All the link,
//! star, join and clique machinery lives here.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex index inside a fixed ambient graph.
pub type Vertex = usize;

/// Hard limit on vertex counts; the calculus is intended for desk-scale
/// graphs and uses fixed-width membership sets.
pub const MAX_VERTICES: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("too many vertices: {0} (limit {MAX_VERTICES})")]
    TooManyVertices(usize),
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown vertex label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate edge {0:?}-{1:?}")]
    DuplicateEdge(String, String),
    #[error("edge {0:?}-{0:?} is a loop")]
    LoopEdge(String),
    #[error("vertex sets belong to different ambient graphs")]
    AmbientMismatch,
    #[error("expected {0} to be a subset of {1}")]
    NotSubset(String, String),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
}

/// A finite simplicial graph: labelled vertices plus a symmetric,
/// irreflexive adjacency relation stored as bitset rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplicialGraph {
    labels: Vec<String>,
    adj: Vec<u32>,
}

impl SimplicialGraph {
    /// Build a graph from labels and label pairs. Duplicate labels,
    /// duplicate edges and loops are rejected.
    pub fn new<S: AsRef<str>>(labels: &[S], edges: &[(S, S)]) -> Result<Self, GraphError> {
        if labels.len() > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(labels.len()));
        }
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        let index = |l: &str| -> Result<usize, GraphError> {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| GraphError::UnknownLabel(l.to_owned()))
        };
        let mut adj = vec![0u32; labels.len()];
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let (i, j) = (index(a)?, index(b)?);
            if i == j {
                return Err(GraphError::LoopEdge(a.to_owned()));
            }
            if adj[i] & (1 << j) != 0 {
                return Err(GraphError::DuplicateEdge(a.to_owned(), b.to_owned()));
            }
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        Ok(SimplicialGraph { labels, adj })
    }

    /// Graph with vertices `v0..v{n-1}` and the given index edges; handy in tests.
    pub fn from_indices(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let pairs: Vec<(String, String)> = edges
            .iter()
            .map(|&(i, j)| {
                (
                    labels.get(i).cloned().unwrap_or_default(),
                    labels.get(j).cloned().unwrap_or_default(),
                )
            })
            .collect();
        SimplicialGraph::new(&labels, &pairs)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &str) -> Result<Vertex, GraphError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| GraphError::UnknownLabel(label.to_owned()))
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.adj[u] & (1 << v) != 0
    }

    /// Neighbourhood of a single vertex as a bitset.
    pub fn neighbours(&self, v: Vertex) -> u32 {
        self.adj[v]
    }

    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for u in 0..self.vertex_count() {
            for v in (u + 1)..self.vertex_count() {
                if self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    fn full_bits(&self) -> u32 {
        if self.vertex_count() == 32 {
            u32::MAX
        } else {
            (1u32 << self.vertex_count()) - 1
        }
    }
}

/// Shared handle to a frozen ambient graph.
pub type GraphRef = Arc<SimplicialGraph>;

/// An induced subgraph, represented by its vertex membership set.
#[derive(Clone)]
pub struct VertexSet {
    graph: GraphRef,
    bits: u32,
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.label_list().join(","))
    }
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && *self.graph == *other.graph
    }
}
impl Eq for VertexSet {}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bits.cmp(&other.bits)
    }
}

impl VertexSet {
    pub fn new(graph: &GraphRef, members: &[Vertex]) -> Result<Self, GraphError> {
        let mut bits = 0u32;
        for &v in members {
            if v >= graph.vertex_count() {
                return Err(GraphError::VertexOutOfRange(v));
            }
            bits |= 1 << v;
        }
        Ok(VertexSet { graph: graph.clone(), bits })
    }

    pub fn from_bits(graph: &GraphRef, bits: u32) -> Self {
        debug_assert_eq!(bits & !graph.full_bits(), 0);
        VertexSet { graph: graph.clone(), bits: bits & graph.full_bits() }
    }

    pub fn from_labels<S: AsRef<str>>(graph: &GraphRef, labels: &[S]) -> Result<Self, GraphError> {
        let mut members = Vec::new();
        for l in labels {
            members.push(graph.vertex(l.as_ref())?);
        }
        VertexSet::new(graph, &members)
    }

    pub fn empty(graph: &GraphRef) -> Self {
        VertexSet { graph: graph.clone(), bits: 0 }
    }

    pub fn full(graph: &GraphRef) -> Self {
        VertexSet { graph: graph.clone(), bits: graph.full_bits() }
    }

    pub fn graph(&self) -> &GraphRef {
        &self.graph
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == self.graph.full_bits()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.graph.vertex_count() && self.bits & (1 << v) != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        let bits = self.bits;
        (0..self.graph.vertex_count()).filter(move |v| bits & (1 << v) != 0)
    }

    pub fn label_list(&self) -> Vec<String> {
        self.iter().map(|v| self.graph.label(v).to_owned()).collect()
    }

    fn check_ambient(&self, other: &VertexSet) -> Result<(), GraphError> {
        if *self.graph == *other.graph {
            Ok(())
        } else {
            Err(GraphError::AmbientMismatch)
        }
    }

    pub fn union(&self, other: &VertexSet) -> Result<VertexSet, GraphError> {
        self.check_ambient(other)?;
        Ok(VertexSet::from_bits(&self.graph, self.bits | other.bits))
    }

    pub fn intersection(&self, other: &VertexSet) -> Result<VertexSet, GraphError> {
        self.check_ambient(other)?;
        Ok(VertexSet::from_bits(&self.graph, self.bits & other.bits))
    }

    pub fn difference(&self, other: &VertexSet) -> Result<VertexSet, GraphError> {
        self.check_ambient(other)?;
        Ok(VertexSet::from_bits(&self.graph, self.bits & !other.bits))
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet::from_bits(&self.graph, !self.bits & self.graph.full_bits())
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> Result<bool, GraphError> {
        self.check_ambient(other)?;
        Ok(self.bits & !other.bits == 0)
    }

    /// The link: common neighbours of all members. The empty set has the
    /// whole graph as its link (empty intersection convention).
    pub fn link(&self) -> VertexSet {
        let mut bits = self.graph.full_bits();
        for v in self.iter() {
            bits &= self.graph.neighbours(v);
        }
        VertexSet::from_bits(&self.graph, bits)
    }

    /// The star: link joined with the set itself.
    pub fn star(&self) -> VertexSet {
        VertexSet::from_bits(&self.graph, self.link().bits | self.bits)
    }

    /// The extended star: star of the link.
    pub fn extended_star(&self) -> VertexSet {
        self.link().star()
    }

    /// Link intersected with an ambient subgraph containing the set.
    pub fn restricted_link(&self, within: &VertexSet) -> Result<VertexSet, GraphError> {
        if !self.is_subset_of(within)? {
            return Err(GraphError::NotSubset(
                format!("{self:?}"),
                format!("{within:?}"),
            ));
        }
        self.link().intersection(within)
    }

    /// Star intersected with an ambient subgraph containing the set.
    pub fn restricted_star(&self, within: &VertexSet) -> Result<VertexSet, GraphError> {
        if !self.is_subset_of(within)? {
            return Err(GraphError::NotSubset(
                format!("{self:?}"),
                format!("{within:?}"),
            ));
        }
        self.star().intersection(within)
    }

    /// Do this set and `other` span a join (every cross pair adjacent)?
    pub fn forms_join_with(&self, other: &VertexSet) -> Result<bool, GraphError> {
        self.check_ambient(other)?;
        if self.bits & other.bits != 0 {
            return Ok(false);
        }
        for u in self.iter() {
            for v in other.iter() {
                if !self.graph.adjacent(u, v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Join decomposition: the factors are the connected components of the
    /// complement graph restricted to this set. Returns the factors together
    /// with the union of the singleton factors.
    pub fn join_decomposition(&self) -> (Vec<VertexSet>, VertexSet) {
        let mut remaining = self.bits;
        let mut factors = Vec::new();
        let mut z_bits = 0u32;
        while remaining != 0 {
            let seed = remaining.trailing_zeros() as usize;
            // flood-fill along non-edges within the set
            let mut comp = 1u32 << seed;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0u32;
                let mut f = frontier;
                while f != 0 {
                    let v = f.trailing_zeros() as usize;
                    f &= f - 1;
                    let non_nbrs = !self.graph.neighbours(v) & self.bits & !(1 << v);
                    next |= non_nbrs & !comp;
                }
                comp |= next;
                frontier = next;
            }
            if comp.count_ones() == 1 {
                z_bits |= comp;
            }
            factors.push(VertexSet::from_bits(&self.graph, comp));
            remaining &= !comp;
        }
        (factors, VertexSet::from_bits(&self.graph, z_bits))
    }

    /// Union of the singleton factors of the join decomposition; generates
    /// the centre of the corresponding special subgroup.
    pub fn centre_part(&self) -> VertexSet {
        self.join_decomposition().1
    }

    /// Is the induced subgraph a join of two non-empty parts?
    pub fn is_join(&self) -> bool {
        self.join_decomposition().0.len() >= 2
    }

    /// A cone has a vertex adjacent to every other member.
    pub fn is_cone(&self) -> bool {
        self.iter().any(|v| {
            let star_v = self.graph.neighbours(v) | (1 << v);
            self.bits & !star_v == 0
        })
    }

    /// Members whose link is not contained in the set.
    pub fn boundary(&self) -> VertexSet {
        let mut bits = 0u32;
        for v in self.iter() {
            if self.graph.neighbours(v) & !self.bits != 0 {
                bits |= 1 << v;
            }
        }
        VertexSet::from_bits(&self.graph, bits)
    }

    /// Connected components of the induced subgraph, in order of least
    /// member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut remaining = self.bits;
        let mut out = Vec::new();
        while remaining != 0 {
            let seed = remaining.trailing_zeros() as usize;
            let mut comp = 1u32 << seed;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0u32;
                let mut f = frontier;
                while f != 0 {
                    let v = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= self.graph.neighbours(v) & self.bits & !comp;
                }
                comp |= next;
                frontier = next;
            }
            out.push(VertexSet::from_bits(&self.graph, comp));
            remaining &= !comp;
        }
        out
    }

    /// Is this set a union of connected components of the whole graph?
    pub fn is_union_of_components(&self) -> bool {
        VertexSet::full(&self.graph)
            .components()
            .iter()
            .all(|c| c.bits & self.bits == 0 || c.bits & !self.bits == 0)
    }

    /// Exact clique number of the induced subgraph.
    pub fn clique_number(&self) -> usize {
        max_clique_bits(&self.graph, self.bits).count_ones() as usize
    }

    /// The induced subgraph as a standalone graph with the same labels.
    pub fn induced_graph(&self) -> SimplicialGraph {
        let members: Vec<Vertex> = self.iter().collect();
        let labels: Vec<String> = members.iter().map(|&v| self.graph.label(v).to_owned()).collect();
        let mut edges = Vec::new();
        for (i, &u) in members.iter().enumerate() {
            for &v in members.iter().skip(i + 1) {
                if self.graph.adjacent(u, v) {
                    edges.push((labels[i].clone(), self.graph.label(v).to_owned()));
                }
            }
        }
        SimplicialGraph::new(&labels, &edges).expect("induced subgraph is well formed")
    }

    /// All subsets of this vertex set, as bitsets in increasing order.
    pub fn subsets(&self) -> impl Iterator<Item = VertexSet> + '_ {
        let graph = self.graph.clone();
        let mask = self.bits;
        SubsetIter { mask, current: 0, done: false }.map(move |b| VertexSet::from_bits(&graph, b))
    }
}

struct SubsetIter {
    mask: u32,
    current: u32,
    done: bool,
}

impl Iterator for SubsetIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.done {
            return None;
        }
        let out = self.current;
        if self.current == self.mask {
            self.done = true;
        } else {
            // enumerate submasks in increasing order
            self.current = (self.current | !self.mask).wrapping_add(1) & self.mask;
        }
        Some(out)
    }
}

/// Number of vertices in a largest clique; the dimension of the graph.
pub fn dimension(graph: &SimplicialGraph) -> usize {
    if graph.vertex_count() == 0 {
        return 0;
    }
    max_clique_bits(graph, graph.full_bits()).count_ones() as usize
}

/// Exact maximum clique within `candidates`, by branch and bound over
/// bitsets. Returns the clique as a bitset (lexicographically determined).
fn max_clique_bits(graph: &SimplicialGraph, candidates: u32) -> u32 {
    let mut best = 0u32;
    fn expand(graph: &SimplicialGraph, current: u32, mut cands: u32, best: &mut u32) {
        if current.count_ones() + cands.count_ones() <= best.count_ones() {
            return;
        }
        if cands == 0 {
            if current.count_ones() > best.count_ones() {
                *best = current;
            }
            return;
        }
        while cands != 0 {
            if current.count_ones() + cands.count_ones() <= best.count_ones() {
                return;
            }
            let v = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            expand(
                graph,
                current | (1 << v),
                cands & graph.neighbours(v),
                best,
            );
        }
    }
    expand(graph, 0, candidates, &mut best);
    best
}

/// JSON form of a graph: named vertices and unordered label edges.
#[derive(Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl SimplicialGraph {
    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.labels.clone(),
            edges: self
                .edges()
                .into_iter()
                .map(|(u, v)| (self.label(u).to_owned(), self.label(v).to_owned()))
                .collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self, GraphError> {
        let edges: Vec<(&str, &str)> = json
            .edges
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let labels: Vec<&str> = json.vertices.iter().map(|s| s.as_str()).collect();
        SimplicialGraph::new(&labels, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> GraphRef {
        Arc::new(SimplicialGraph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap())
    }

    fn cycle4() -> GraphRef {
        Arc::new(
            SimplicialGraph::new(
                &["v1", "v2", "v3", "v4"],
                &[("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")],
            )
            .unwrap(),
        )
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            SimplicialGraph::new(&["a", "a"], &[]),
            Err(GraphError::DuplicateLabel(_))
        ));
        assert!(matches!(
            SimplicialGraph::new(&["a", "b"], &[("a", "b"), ("b", "a")]),
            Err(GraphError::DuplicateEdge(..))
        ));
        assert!(matches!(
            SimplicialGraph::new(&["a"], &[("a", "a")]),
            Err(GraphError::LoopEdge(_))
        ));
        assert!(matches!(
            SimplicialGraph::new(&["a"], &[("a", "b")]),
            Err(GraphError::UnknownLabel(_))
        ));
    }

    #[test]
    fn link_of_middle_vertex() {
        let g = path3();
        let s = VertexSet::from_labels(&g, &["b"]).unwrap();
        assert_eq!(s.link(), VertexSet::from_labels(&g, &["a", "c"]).unwrap());
    }

    #[test]
    fn link_of_endpoints_is_middle() {
        let g = path3();
        let s = VertexSet::from_labels(&g, &["a", "c"]).unwrap();
        assert_eq!(s.link(), VertexSet::from_labels(&g, &["b"]).unwrap());
    }

    #[test]
    fn link_of_empty_is_full() {
        let g = path3();
        assert!(VertexSet::empty(&g).link().is_full());
    }

    #[test]
    fn star_and_extended_star() {
        let g = path3();
        let b = VertexSet::from_labels(&g, &["b"]).unwrap();
        assert!(b.star().is_full());

        let c4 = cycle4();
        let v1 = VertexSet::from_labels(&c4, &["v1"]).unwrap();
        assert!(v1.extended_star().is_full());
    }

    #[test]
    fn restricted_variants_enforce_subset() {
        let g = path3();
        let a = VertexSet::from_labels(&g, &["a"]).unwrap();
        let ab = VertexSet::from_labels(&g, &["a", "b"]).unwrap();
        assert_eq!(
            a.restricted_link(&ab).unwrap(),
            VertexSet::from_labels(&g, &["b"]).unwrap()
        );
        let c = VertexSet::from_labels(&g, &["c"]).unwrap();
        assert!(a.restricted_link(&c).is_err());
    }

    #[test]
    fn join_decomposition_triangle() {
        let g: GraphRef = Arc::new(
            SimplicialGraph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap(),
        );
        let full = VertexSet::full(&g);
        let (factors, z) = full.join_decomposition();
        assert_eq!(factors.len(), 3);
        assert!(z.is_full());
    }

    #[test]
    fn join_decomposition_discrete_and_path() {
        let g: GraphRef = Arc::new(SimplicialGraph::new(&["a", "b"], &[]).unwrap());
        let (factors, z) = VertexSet::full(&g).join_decomposition();
        assert_eq!(factors.len(), 1);
        assert!(z.is_empty());

        // the path is a cone over its middle vertex: {b} * {a,c}
        let p = path3();
        let (factors, z) = VertexSet::full(&p).join_decomposition();
        assert_eq!(factors.len(), 2);
        assert_eq!(z, VertexSet::from_labels(&p, &["b"]).unwrap());
    }

    #[test]
    fn dimension_examples() {
        let discrete: GraphRef = Arc::new(SimplicialGraph::new(&["a", "b", "c"], &[]).unwrap());
        assert_eq!(dimension(&discrete), 1);
        let edge: GraphRef = Arc::new(SimplicialGraph::new(&["a", "b"], &[("a", "b")]).unwrap());
        assert_eq!(dimension(&edge), 2);
        assert_eq!(dimension(&cycle4()), 2);
    }

    #[test]
    fn dimension_matches_exhaustive_enumeration() {
        // all graphs on up to 8 vertices would be too many; sample densely on 5,
        // exhaust on <= 4
        for n in 0..=4usize {
            let edge_slots: Vec<(usize, usize)> =
                (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
            for mask in 0..(1u64 << edge_slots.len()) {
                let edges: Vec<(usize, usize)> = edge_slots
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let g = SimplicialGraph::from_indices(n, &edges).unwrap();
                let brute = {
                    let mut best = 0;
                    for bits in 0..(1u32 << n) {
                        let vs: Vec<usize> =
                            (0..n).filter(|v| bits & (1 << v) != 0).collect();
                        let is_clique = vs
                            .iter()
                            .all(|&u| vs.iter().all(|&v| u == v || g.adjacent(u, v)));
                        if is_clique {
                            best = best.max(vs.len());
                        }
                    }
                    best
                };
                assert_eq!(dimension(&g), brute, "graph {n} mask {mask}");
            }
        }
    }

    #[test]
    fn boundary_examples() {
        let g = path3();
        let ab = VertexSet::from_labels(&g, &["a", "b"]).unwrap();
        assert_eq!(ab.boundary(), VertexSet::from_labels(&g, &["b"]).unwrap());
        assert!(VertexSet::full(&g).boundary().is_empty());
    }

    #[test]
    fn cone_detection() {
        let g = path3();
        assert!(VertexSet::full(&g).is_cone());
        let c4 = cycle4();
        assert!(!VertexSet::full(&c4).is_cone());
    }

    #[test]
    fn triple_link_identity_small_graphs() {
        for n in 0..=5usize {
            let edge_slots: Vec<(usize, usize)> =
                (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
            let samples = if edge_slots.len() <= 6 {
                (0..(1u64 << edge_slots.len())).collect::<Vec<_>>()
            } else {
                // deterministic stride through edge masks
                (0..(1u64 << edge_slots.len())).step_by(7).collect()
            };
            for mask in samples {
                let edges: Vec<(usize, usize)> = edge_slots
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let g: GraphRef = Arc::new(SimplicialGraph::from_indices(n, &edges).unwrap());
                for s in VertexSet::full(&g).subsets() {
                    assert_eq!(s.link().link().link(), s.link());
                }
            }
        }
    }

    #[test]
    fn link_duality_small_graphs() {
        // S ⊆ link(T) ⇔ T ⊆ link(S), exhaustively on all graphs with ≤ 4 vertices
        for n in 0..=4usize {
            let edge_slots: Vec<(usize, usize)> =
                (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
            for mask in 0..(1u64 << edge_slots.len()) {
                let edges: Vec<(usize, usize)> = edge_slots
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let g: GraphRef = Arc::new(SimplicialGraph::from_indices(n, &edges).unwrap());
                let full = VertexSet::full(&g);
                for s in full.subsets() {
                    for t in full.subsets() {
                        assert_eq!(
                            s.is_subset_of(&t.link()).unwrap(),
                            t.is_subset_of(&s.link()).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn join_factors_reassemble() {
        let c4 = cycle4();
        let full = VertexSet::full(&c4);
        let (factors, _) = full.join_decomposition();
        // C4 = {v1,v3} * {v2,v4}
        assert_eq!(factors.len(), 2);
        let mut union = VertexSet::empty(&c4);
        for (i, f) in factors.iter().enumerate() {
            assert!(!f.is_join());
            union = union.union(f).unwrap();
            for g in factors.iter().skip(i + 1) {
                assert!(f.forms_join_with(g).unwrap());
            }
        }
        assert_eq!(union, full);
    }

    #[test]
    fn json_round_trip() {
        let g = cycle4();
        let j = g.to_json();
        let back = SimplicialGraph::from_json(&j).unwrap();
        assert_eq!(*g, back);
    }

    #[test]
    fn subsets_enumeration() {
        let g = path3();
        assert_eq!(VertexSet::full(&g).subsets().count(), 8);
        let s = VertexSet::from_labels(&g, &["a", "c"]).unwrap();
        let subs: Vec<u32> = s.subsets().map(|x| x.bits()).collect();
        assert_eq!(subs, vec![0b000, 0b001, 0b100, 0b101]);
    }
}
