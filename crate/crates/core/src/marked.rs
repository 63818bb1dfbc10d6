//! Marked cube complexes: a basepoint, a spanning tree, and values for the
//! non-tree edges identifying the fundamental group with a special subgroup
//! of the ambient RAAG.
//!
//! Evaluation collapses the spanning tree: a closed edge path maps to the
//! ordered product of its non-tree edge values. Constructors ship explicit
//! generator loops so that the marking is surjective by witness and induced
//! automorphisms can be read off without inverting the marking.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Cell, CellComplexJson, ComplexError, CubeComplex, Length};
use crate::graph::{GraphError, GraphRef, Vertex, VertexSet};
use crate::words::{reduce, Letter, NormalForm, Word, WordError};

#[derive(Debug, Error)]
pub enum MarkedError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("spanning tree is invalid: {0}")]
    BadTree(String),
    #[error("marking missing for non-tree edge {0}")]
    MissingMarking(usize),
    #[error("marking value for edge {0} leaves the declared subgraph")]
    MarkingOutsideDomain(usize),
    #[error("2-cell {0} boundary word does not die under the marking")]
    RelatorSurvives(usize),
    #[error("generator loop for {0} is broken: {1}")]
    BadGeneratorLoop(String, String),
    #[error("domains do not form a join")]
    NotAJoin,
    #[error("complexes live over different ambient graphs")]
    AmbientMismatch,
    #[error("path endpoints do not match")]
    BrokenPath,
}

/// A directed edge of a cube complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirEdge {
    pub edge: usize,
    pub forward: bool,
}

impl DirEdge {
    pub fn new(edge: usize, forward: bool) -> Self {
        DirEdge { edge, forward }
    }

    pub fn reversed(self) -> Self {
        DirEdge { edge: self.edge, forward: !self.forward }
    }
}

pub fn reverse_path(path: &[DirEdge]) -> Vec<DirEdge> {
    path.iter().rev().map(|d| d.reversed()).collect()
}

/// A cube complex marked by the special subgroup on `domain`.
#[derive(Debug, Clone)]
pub struct MarkedComplex {
    complex: CubeComplex,
    graph: GraphRef,
    domain: VertexSet,
    basepoint: usize,
    tree: Vec<bool>,
    marking: BTreeMap<usize, NormalForm>,
    generator_loops: BTreeMap<Vertex, Vec<DirEdge>>,
}

impl MarkedComplex {
    pub fn new(
        complex: CubeComplex,
        graph: &GraphRef,
        domain: VertexSet,
        basepoint: usize,
        tree: Vec<bool>,
        marking: BTreeMap<usize, NormalForm>,
        generator_loops: BTreeMap<Vertex, Vec<DirEdge>>,
    ) -> Result<Self, MarkedError> {
        let m = MarkedComplex {
            complex,
            graph: graph.clone(),
            domain,
            basepoint,
            tree,
            marking,
            generator_loops,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn complex(&self) -> &CubeComplex {
        &self.complex
    }

    pub fn graph(&self) -> &GraphRef {
        &self.graph
    }

    pub fn domain(&self) -> &VertexSet {
        &self.domain
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.tree[e]
    }

    pub fn marking(&self) -> &BTreeMap<usize, NormalForm> {
        &self.marking
    }

    pub fn generator_loop(&self, v: Vertex) -> Option<&[DirEdge]> {
        self.generator_loops.get(&v).map(|l| l.as_slice())
    }

    fn validate(&self) -> Result<(), MarkedError> {
        self.complex.validate()?;
        let nv = self.complex.vertex_count();
        let ne = self.complex.edge_count();
        if self.tree.len() != ne {
            return Err(MarkedError::BadTree("tree mask has wrong length".into()));
        }
        let tree_count = self.tree.iter().filter(|&&b| b).count();
        if nv > 0 && tree_count != nv - 1 {
            return Err(MarkedError::BadTree(format!(
                "{tree_count} tree edges for {nv} vertices"
            )));
        }
        // the tree spans
        let mut seen = vec![false; nv];
        seen[self.basepoint] = true;
        let mut queue = VecDeque::from([self.basepoint]);
        let ends = self.vertex_edges();
        while let Some(v) = queue.pop_front() {
            for &(e, _, other) in &ends[v] {
                if self.tree[e] && !seen[other] {
                    seen[other] = true;
                    queue.push_back(other);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(MarkedError::BadTree("tree does not span".into()));
        }
        // marking coverage and domain
        for e in 0..ne {
            if self.tree[e] {
                if self.marking.contains_key(&e) {
                    return Err(MarkedError::BadTree(format!("tree edge {e} carries a value")));
                }
            } else {
                let value =
                    self.marking.get(&e).ok_or(MarkedError::MissingMarking(e))?;
                if !value.support().is_subset_of(&self.domain)? {
                    return Err(MarkedError::MarkingOutsideDomain(e));
                }
            }
        }
        // relators die
        for s in 0..self.complex.count(2) {
            let boundary = self.square_boundary(s);
            if !self.eval_path(&boundary)?.is_identity() {
                return Err(MarkedError::RelatorSurvives(s));
            }
        }
        // generator loops witness the marking
        for v in self.domain.iter() {
            let label = self.graph.label(v).to_owned();
            let l = self
                .generator_loops
                .get(&v)
                .ok_or_else(|| MarkedError::BadGeneratorLoop(label.clone(), "missing".into()))?;
            self.check_closed(l, self.basepoint)
                .map_err(|e| MarkedError::BadGeneratorLoop(label.clone(), e.to_string()))?;
            let value = self.eval_path(l)?;
            let expect = NormalForm::generator(&self.graph, v)?;
            if value != expect {
                return Err(MarkedError::BadGeneratorLoop(
                    label,
                    format!("evaluates to {:?}", value),
                ));
            }
        }
        Ok(())
    }

    /// `(edge, forward?, other endpoint)` triples at each vertex, ordered by
    /// edge index then direction.
    pub fn vertex_edges(&self) -> Vec<Vec<(usize, bool, usize)>> {
        let mut out = vec![Vec::new(); self.complex.vertex_count()];
        for e in 0..self.complex.edge_count() {
            let t = self.complex.edge_tail(e);
            let h = self.complex.edge_head(e);
            out[t].push((e, true, h));
            if h != t {
                out[h].push((e, false, t));
            }
        }
        out
    }

    pub fn path_target(&self, start: usize, path: &[DirEdge]) -> Result<usize, MarkedError> {
        let mut cur = start;
        for d in path {
            let (t, h) = (self.complex.edge_tail(d.edge), self.complex.edge_head(d.edge));
            let (from, to) = if d.forward { (t, h) } else { (h, t) };
            if from != cur {
                return Err(MarkedError::BrokenPath);
            }
            cur = to;
        }
        Ok(cur)
    }

    fn check_closed(&self, path: &[DirEdge], base: usize) -> Result<(), MarkedError> {
        if self.path_target(base, path)? != base {
            return Err(MarkedError::BrokenPath);
        }
        Ok(())
    }

    /// Tree-collapse value of one directed edge.
    fn omega(&self, d: DirEdge) -> NormalForm {
        if self.tree[d.edge] {
            NormalForm::identity(&self.graph)
        } else {
            let v = &self.marking[&d.edge];
            if d.forward {
                v.clone()
            } else {
                v.inverse()
            }
        }
    }

    /// Product of edge values along a path. For closed loops this is the
    /// marking image of the homotopy class.
    pub fn eval_path(&self, path: &[DirEdge]) -> Result<NormalForm, MarkedError> {
        let mut letters: Vec<Letter> = Vec::new();
        for d in path {
            let w = self.omega(*d);
            letters.extend_from_slice(w.letters());
        }
        Ok(reduce(&Word::new(&self.graph, letters)?))
    }

    /// Boundary loop of a square: bottom, right, reversed top, reversed left.
    pub fn square_boundary(&self, s: usize) -> Vec<DirEdge> {
        let cell = &self.complex.cells[2][s];
        vec![
            DirEdge::new(cell.facets[1][0], true),
            DirEdge::new(cell.facets[0][1], true),
            DirEdge::new(cell.facets[1][1], false),
            DirEdge::new(cell.facets[0][0], false),
        ]
    }

    /// Deterministic breadth-first path in the 1-skeleton.
    pub fn bfs_path(&self, from: usize, to: usize) -> Vec<DirEdge> {
        self.bfs_path_filtered(from, to, |_| true)
    }

    /// Breadth-first path using tree edges only.
    pub fn tree_path(&self, from: usize, to: usize) -> Vec<DirEdge> {
        self.bfs_path_filtered(from, to, |e| self.tree[e])
    }

    fn bfs_path_filtered(
        &self,
        from: usize,
        to: usize,
        allow: impl Fn(usize) -> bool,
    ) -> Vec<DirEdge> {
        if from == to {
            return Vec::new();
        }
        let ends = self.vertex_edges();
        let mut parent: Vec<Option<(usize, DirEdge)>> = vec![None; self.complex.vertex_count()];
        let mut seen = vec![false; self.complex.vertex_count()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &(e, fwd, other) in &ends[v] {
                if allow(e) && !seen[other] {
                    seen[other] = true;
                    parent[other] = Some((v, DirEdge::new(e, fwd)));
                    if other == to {
                        queue.clear();
                        break;
                    }
                    queue.push_back(other);
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let (prev, d) = parent[cur].expect("complex is connected");
            path.push(d);
            cur = prev;
        }
        path.reverse();
        path
    }

    /// Generator loop transported to another basepoint along the tree.
    pub fn generator_loop_at(&self, v: Vertex, base: usize) -> Option<Vec<DirEdge>> {
        let l = self.generator_loops.get(&v)?;
        let mut path = self.tree_path(base, self.basepoint);
        path.extend_from_slice(l);
        path.extend(self.tree_path(self.basepoint, base));
        Some(path)
    }

    pub fn to_json(&self) -> MarkedComplexJson {
        MarkedComplexJson {
            complex: crate::complex::complex_to_json(&self.complex),
            domain: self.domain.label_list(),
            basepoint: self.basepoint,
            tree: (0..self.complex.edge_count()).filter(|&e| self.tree[e]).collect(),
            marking: self
                .marking
                .iter()
                .map(|(e, w)| (e.to_string(), w.format()))
                .collect(),
            generator_loops: self
                .generator_loops
                .iter()
                .map(|(v, l)| {
                    (
                        self.graph.label(*v).to_owned(),
                        l.iter().map(|d| (d.edge, d.forward)).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn from_json(graph: &GraphRef, json: &MarkedComplexJson) -> Result<Self, MarkedError> {
        let complex = crate::complex::complex_from_json(&json.complex);
        let domain = VertexSet::from_labels(graph, &json.domain)?;
        let mut tree = vec![false; complex.edge_count()];
        for &e in &json.tree {
            if e >= tree.len() {
                return Err(MarkedError::BadTree(format!("edge {e} out of range")));
            }
            tree[e] = true;
        }
        let mut marking = BTreeMap::new();
        for (e, w) in &json.marking {
            let e: usize = e
                .parse()
                .map_err(|_| MarkedError::BadTree(format!("bad edge key {e}")))?;
            marking.insert(e, NormalForm::parse(graph, w)?);
        }
        let mut generator_loops = BTreeMap::new();
        for (label, l) in &json.generator_loops {
            let v = graph.vertex(label)?;
            generator_loops
                .insert(v, l.iter().map(|&(e, f)| DirEdge::new(e, f)).collect());
        }
        MarkedComplex::new(
            complex,
            graph,
            domain,
            json.basepoint,
            tree,
            marking,
            generator_loops,
        )
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MarkedComplexJson {
    pub complex: CellComplexJson,
    pub domain: Vec<String>,
    pub basepoint: usize,
    pub tree: Vec<usize>,
    pub marking: BTreeMap<String, String>,
    pub generator_loops: BTreeMap<String, Vec<(usize, bool)>>,
}

/// Position of a coordinate on a subdivided circle: an intermediate vertex
/// `V(i)` (the base vertex `V(0)` is dropped from cell keys) or an edge
/// `E(i)` from position i to i+1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CircleCoord {
    V(usize),
    E(usize),
}

pub type SalvettiKey = Vec<(Vertex, CircleCoord)>;

/// A Salvetti-style complex together with its coordinate tables; rotations
/// of circle factors and explicit subcomplexes are looked up through the
/// keys.
#[derive(Debug, Clone)]
pub struct SalvettiComplex {
    pub marked: MarkedComplex,
    pub keys: Vec<Vec<SalvettiKey>>,
    pub index: HashMap<SalvettiKey, (usize, usize)>,
    /// per edge: the circle vertex and the circle position of the edge
    pub edge_info: Vec<(Vertex, usize)>,
    pub subdiv: BTreeMap<Vertex, usize>,
}

impl SalvettiComplex {
    pub fn cell_index(&self, key: &SalvettiKey) -> Option<(usize, usize)> {
        self.index.get(key).copied()
    }
}

/// Build the subdivided Salvetti complex of the induced subgraph on
/// `domain`: one base vertex, a circle with `subdiv(v)` edges per
/// generator, one torus family per clique. Loops are subdivided into at
/// least two edges so flips act cellularly.
pub fn salvetti_on(
    graph: &GraphRef,
    domain: &VertexSet,
    subdiv: &BTreeMap<Vertex, usize>,
) -> Result<SalvettiComplex, MarkedError> {
    let m = |v: Vertex| -> usize { subdiv.get(&v).copied().unwrap_or(2).max(2) };
    // enumerate cliques inside the domain
    let mut cliques: Vec<Vec<Vertex>> = Vec::new();
    for s in domain.subsets() {
        let vs: Vec<Vertex> = s.iter().collect();
        let is_clique = vs
            .iter()
            .all(|&u| vs.iter().all(|&w| u == w || graph.adjacent(u, w)));
        if is_clique {
            cliques.push(vs);
        }
    }
    // enumerate cells: clique + per-vertex non-base coordinate
    let mut layers: Vec<Vec<SalvettiKey>> = Vec::new();
    for clique in &cliques {
        let mut assignments: Vec<SalvettiKey> = vec![Vec::new()];
        for &v in clique {
            let mut options: Vec<CircleCoord> = (1..m(v)).map(CircleCoord::V).collect();
            options.extend((0..m(v)).map(CircleCoord::E));
            let mut next = Vec::with_capacity(assignments.len() * options.len());
            for a in &assignments {
                for &o in &options {
                    let mut b = a.clone();
                    b.push((v, o));
                    next.push(b);
                }
            }
            assignments = next;
        }
        for key in assignments {
            let dim = key
                .iter()
                .filter(|(_, c)| matches!(c, CircleCoord::E(_)))
                .count();
            while layers.len() <= dim {
                layers.push(Vec::new());
            }
            layers[dim].push(key);
        }
    }
    for layer in &mut layers {
        layer.sort();
    }
    let mut index: HashMap<SalvettiKey, (usize, usize)> = HashMap::new();
    for (dim, layer) in layers.iter().enumerate() {
        for (i, key) in layer.iter().enumerate() {
            index.insert(key.clone(), (dim, i));
        }
    }
    // facets: replace one edge coordinate by its endpoints, dropping V(0)
    let mut cells: Vec<Vec<Cell>> = Vec::new();
    for (dim, layer) in layers.iter().enumerate() {
        let mut cl = Vec::with_capacity(layer.len());
        for key in layer {
            let mut facets = Vec::new();
            let mut lengths = Vec::new();
            for (pos, &(v, c)) in key.iter().enumerate() {
                if let CircleCoord::E(i) = c {
                    let endpoint = |j: usize| -> SalvettiKey {
                        let mut k = key.clone();
                        if j == 0 {
                            k.remove(pos);
                        } else {
                            k[pos] = (v, CircleCoord::V(j));
                        }
                        k
                    };
                    let neg = index[&endpoint(i)].1;
                    let pos_side = index[&endpoint((i + 1) % m(v))].1;
                    facets.push([neg, pos_side]);
                    lengths.push(Length::new(1, m(v) as i64));
                }
            }
            debug_assert_eq!(facets.len(), dim);
            cl.push(Cell { facets, lengths });
        }
        cells.push(cl);
    }
    let complex = CubeComplex { cells };
    let edge_info: Vec<(Vertex, usize)> = layers
        .get(1)
        .map(|layer| {
            layer
                .iter()
                .map(|key| {
                    key.iter()
                        .find_map(|&(v, c)| match c {
                            CircleCoord::E(i) => Some((v, i)),
                            _ => None,
                        })
                        .expect("edge has an edge coordinate")
                })
                .collect()
        })
        .unwrap_or_default();
    let subdiv_map: BTreeMap<Vertex, usize> = domain.iter().map(|v| (v, m(v))).collect();
    let basepoint = index[&Vec::new()].1;

    // spanning tree by breadth-first search in edge index order
    let nv = complex.vertex_count();
    let ne = complex.edge_count();
    let mut tree = vec![false; ne];
    {
        let mut seen = vec![false; nv];
        seen[basepoint] = true;
        let mut ends: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
        for e in 0..ne {
            ends[complex.edge_tail(e)].push((e, complex.edge_head(e)));
            ends[complex.edge_head(e)].push((e, complex.edge_tail(e)));
        }
        let mut queue = VecDeque::from([basepoint]);
        while let Some(v) = queue.pop_front() {
            for &(e, other) in &ends[v] {
                if !seen[other] {
                    seen[other] = true;
                    tree[e] = true;
                    queue.push_back(other);
                }
            }
        }
    }

    // winding evaluator for tree loops of the non-tree edges
    let winding_value = |path: &[DirEdge]| -> Result<NormalForm, MarkedError> {
        let mut open: BTreeMap<Vertex, i64> = BTreeMap::new();
        let mut letters: Vec<Letter> = Vec::new();
        for d in path {
            let (v, _) = edge_info[d.edge];
            let mv = subdiv_map[&v] as i64;
            let delta = if d.forward { 1 } else { -1 };
            let entry = open.entry(v).or_insert(0);
            *entry += delta;
            if entry.rem_euclid(mv) == 0 {
                let turns = *entry / mv;
                for _ in 0..turns.unsigned_abs() {
                    letters.push(Letter::new(v, turns > 0));
                }
                open.remove(&v);
            }
        }
        if !open.is_empty() {
            return Err(MarkedError::BrokenPath);
        }
        Ok(reduce(&Word::new(graph, letters)?))
    };

    // a throwaway marked shell to reuse the path utilities
    let shell = MarkedComplex {
        complex: complex.clone(),
        graph: graph.clone(),
        domain: domain.clone(),
        basepoint,
        tree: tree.clone(),
        marking: BTreeMap::new(),
        generator_loops: BTreeMap::new(),
    };
    let mut marking = BTreeMap::new();
    for e in 0..ne {
        if tree[e] {
            continue;
        }
        let mut l = shell.tree_path(basepoint, complex.edge_tail(e));
        l.push(DirEdge::new(e, true));
        l.extend(shell.tree_path(complex.edge_head(e), basepoint));
        marking.insert(e, winding_value(&l)?);
    }
    let mut generator_loops = BTreeMap::new();
    for v in domain.iter() {
        let mut l = Vec::new();
        for i in 0..m(v) {
            let key: SalvettiKey = vec![(v, CircleCoord::E(i))];
            l.push(DirEdge::new(index[&key].1, true));
        }
        generator_loops.insert(v, l);
    }

    let marked = MarkedComplex::new(
        complex,
        graph,
        domain.clone(),
        basepoint,
        tree,
        marking,
        generator_loops,
    )?;
    Ok(SalvettiComplex { marked, keys: layers, index, edge_info, subdiv: subdiv_map })
}

/// Salvetti complex of the whole graph with uniform subdivision.
pub fn salvetti(graph: &GraphRef, subdiv: usize) -> Result<SalvettiComplex, MarkedError> {
    let domain = VertexSet::full(graph);
    let map: BTreeMap<Vertex, usize> = domain.iter().map(|v| (v, subdiv.max(2))).collect();
    salvetti_on(graph, &domain, &map)
}

/// Index arithmetic for product complexes.
pub struct ProductIndex {
    x_counts: Vec<usize>,
    y_counts: Vec<usize>,
}

impl ProductIndex {
    pub fn new(x: &CubeComplex, y: &CubeComplex) -> Self {
        ProductIndex {
            x_counts: (0..=x.dim()).map(|d| x.count(d)).collect(),
            y_counts: (0..=y.dim()).map(|d| y.count(d)).collect(),
        }
    }

    /// Global index of the product of an x-cell and a y-cell.
    pub fn id(&self, dx: usize, ix: usize, dy: usize, iy: usize) -> usize {
        let k = dx + dy;
        let mut offset = 0;
        for ax in 0..dx {
            let ay = k - ax;
            if ax < self.x_counts.len() && ay < self.y_counts.len() {
                offset += self.x_counts[ax] * self.y_counts[ay];
            }
        }
        offset + ix * self.y_counts[dy] + iy
    }

    pub fn split(&self, k: usize, id: usize) -> (usize, usize, usize, usize) {
        let mut rest = id;
        for dx in 0..=k {
            let dy = k - dx;
            if dx >= self.x_counts.len() || dy >= self.y_counts.len() {
                continue;
            }
            let block = self.x_counts[dx] * self.y_counts[dy];
            if rest < block {
                return (dx, rest / self.y_counts[dy], dy, rest % self.y_counts[dy]);
            }
            rest -= block;
        }
        panic!("product cell id out of range");
    }
}

/// Product of two marked complexes over subgraphs forming a join; the
/// marking concatenates, letters commuting across the factors.
pub fn product(x: &MarkedComplex, y: &MarkedComplex) -> Result<MarkedComplex, MarkedError> {
    if **x.graph() != **y.graph() {
        return Err(MarkedError::AmbientMismatch);
    }
    let graph = x.graph().clone();
    if !x.domain().forms_join_with(y.domain())? {
        return Err(MarkedError::NotAJoin);
    }
    let idx = ProductIndex::new(&x.complex, &y.complex);
    let max_dim = x.complex.dim() + y.complex.dim();
    let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); max_dim + 1];
    for k in 0..=max_dim {
        for dx in 0..=k {
            let dy = k - dx;
            if dx > x.complex.dim() || dy > y.complex.dim() {
                continue;
            }
            for ix in 0..x.complex.count(dx) {
                for iy in 0..y.complex.count(dy) {
                    let cx = &x.complex.cells[dx][ix];
                    let cy = &y.complex.cells[dy][iy];
                    let mut facets = Vec::with_capacity(k);
                    for a in 0..dx {
                        facets.push([
                            idx.id(dx - 1, cx.facets[a][0], dy, iy),
                            idx.id(dx - 1, cx.facets[a][1], dy, iy),
                        ]);
                    }
                    for b in 0..dy {
                        facets.push([
                            idx.id(dx, ix, dy - 1, cy.facets[b][0]),
                            idx.id(dx, ix, dy - 1, cy.facets[b][1]),
                        ]);
                    }
                    let mut lengths = cx.lengths.clone();
                    lengths.extend_from_slice(&cy.lengths);
                    debug_assert_eq!(idx.id(dx, ix, dy, iy), cells[k].len());
                    cells[k].push(Cell { facets, lengths });
                }
            }
        }
    }
    let complex = CubeComplex { cells };
    let basepoint = idx.id(0, x.basepoint, 0, y.basepoint);

    // tree: x-tree at the y-basepoint plus the whole y-tree at every x-vertex
    let ne = complex.edge_count();
    let mut tree = vec![false; ne];
    let mut marking = BTreeMap::new();
    for k_edge in 0..ne {
        let (dx, ix, _dy, iy) = idx.split(1, k_edge);
        if dx == 1 {
            // x-type edge at y-vertex iy
            if x.tree[ix] && iy == y.basepoint {
                tree[k_edge] = true;
            } else {
                let value = if x.tree[ix] {
                    NormalForm::identity(&graph)
                } else {
                    x.marking[&ix].clone()
                };
                marking.insert(k_edge, value);
            }
        } else {
            // y-type edge at x-vertex ix
            if y.tree[iy] {
                tree[k_edge] = true;
            } else {
                marking.insert(k_edge, y.marking[&iy].clone());
            }
        }
    }
    let mut generator_loops = BTreeMap::new();
    for v in x.domain().iter() {
        let l = x.generator_loops[&v]
            .iter()
            .map(|d| DirEdge::new(idx.id(1, d.edge, 0, y.basepoint), d.forward))
            .collect();
        generator_loops.insert(v, l);
    }
    for v in y.domain().iter() {
        let l = y.generator_loops[&v]
            .iter()
            .map(|d| DirEdge::new(idx.id(0, x.basepoint, 1, d.edge), d.forward))
            .collect();
        generator_loops.insert(v, l);
    }
    MarkedComplex::new(
        complex,
        &graph,
        x.domain().union(y.domain())?,
        basepoint,
        tree,
        marking,
        generator_loops,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::npc_check;
    use crate::graph::{dimension, SimplicialGraph};
    use std::sync::Arc;

    fn graph(labels: &[&str], edges: &[(&str, &str)]) -> GraphRef {
        Arc::new(SimplicialGraph::new(labels, edges).unwrap())
    }

    #[test]
    fn salvetti_single_vertex_is_circle() {
        let g = graph(&["a"], &[]);
        let s = salvetti(&g, 2).unwrap();
        assert_eq!(s.marked.complex().vertex_count(), 2);
        assert_eq!(s.marked.complex().edge_count(), 2);
        assert_eq!(s.marked.complex().dim(), 1);
        assert!(npc_check(s.marked.complex()).ok);
    }

    #[test]
    fn salvetti_edge_is_torus() {
        let g = graph(&["a", "b"], &[("a", "b")]);
        let s = salvetti(&g, 2).unwrap();
        let c = s.marked.complex();
        assert_eq!(c.vertex_count(), 4);
        assert_eq!(c.edge_count(), 8);
        assert_eq!(c.count(2), 4);
        assert_eq!(c.dim(), 2);
        assert!(npc_check(c).ok);
    }

    #[test]
    fn salvetti_triangle_is_three_torus() {
        let g = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]);
        let s = salvetti(&g, 2).unwrap();
        let c = s.marked.complex();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.count(3), 8);
        assert!(npc_check(c).ok);
    }

    #[test]
    fn salvetti_dimension_matches_clique_number() {
        for (labels, edges) in [
            (vec!["a", "b", "c"], vec![]),
            (vec!["a", "b", "c"], vec![("a", "b")]),
            (vec!["a", "b", "c", "d"], vec![("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]),
        ] {
            let g = graph(&labels, &edges);
            let s = salvetti(&g, 2).unwrap();
            assert_eq!(s.marked.complex().dim(), dimension(&g));
            assert!(npc_check(s.marked.complex()).ok);
        }
    }

    #[test]
    fn salvetti_free_group_marking() {
        let g = graph(&["a", "b"], &[]);
        let s = salvetti(&g, 2).unwrap();
        // wedge of two circles subdivided: 3 vertices, 4 edges, tree has 2
        let m = &s.marked;
        assert_eq!(m.complex().vertex_count(), 3);
        assert_eq!(m.complex().edge_count(), 4);
        assert_eq!(m.marking().len(), 2);
        // generator loops evaluate correctly by construction; spot-check a
        // composite loop a·b via concatenation
        let mut path = m.generator_loop(0).unwrap().to_vec();
        path.extend_from_slice(m.generator_loop(1).unwrap());
        let v = m.eval_path(&path).unwrap();
        assert_eq!(v.format(), "a b");
    }

    #[test]
    fn product_of_circles_is_torus() {
        let g = graph(&["a", "b"], &[("a", "b")]);
        let dom_a = VertexSet::from_labels(&g, &["a"]).unwrap();
        let dom_b = VertexSet::from_labels(&g, &["b"]).unwrap();
        let subdiv: BTreeMap<usize, usize> = [(0usize, 2usize), (1, 2)].into_iter().collect();
        let ca = salvetti_on(&g, &dom_a, &subdiv).unwrap();
        let cb = salvetti_on(&g, &dom_b, &subdiv).unwrap();
        let t = product(&ca.marked, &cb.marked).unwrap();
        let direct = salvetti(&g, 2).unwrap();
        assert_eq!(t.complex().vertex_count(), direct.marked.complex().vertex_count());
        assert_eq!(t.complex().edge_count(), direct.marked.complex().edge_count());
        assert_eq!(t.complex().count(2), direct.marked.complex().count(2));
        assert!(npc_check(t.complex()).ok);
        // product marking abelianisation splits over the factors
        let mut path = t.generator_loop(0).unwrap().to_vec();
        path.extend_from_slice(t.generator_loop(1).unwrap());
        assert_eq!(t.eval_path(&path).unwrap().abelianization(), vec![1, 1]);
    }

    #[test]
    fn product_requires_join() {
        let g = graph(&["a", "b"], &[]);
        let dom_a = VertexSet::from_labels(&g, &["a"]).unwrap();
        let dom_b = VertexSet::from_labels(&g, &["b"]).unwrap();
        let subdiv: BTreeMap<usize, usize> = BTreeMap::new();
        let ca = salvetti_on(&g, &dom_a, &subdiv).unwrap();
        let cb = salvetti_on(&g, &dom_b, &subdiv).unwrap();
        assert!(matches!(product(&ca.marked, &cb.marked), Err(MarkedError::NotAJoin)));
    }

    #[test]
    fn product_with_point_is_identity_shape() {
        let g = graph(&["a", "b"], &[("a", "b")]);
        let dom_a = VertexSet::from_labels(&g, &["a"]).unwrap();
        let dom_empty = VertexSet::empty(&g);
        let subdiv: BTreeMap<usize, usize> = BTreeMap::new();
        let ca = salvetti_on(&g, &dom_a, &subdiv).unwrap();
        let point = salvetti_on(&g, &dom_empty, &subdiv).unwrap();
        let p = product(&ca.marked, &point.marked).unwrap();
        assert_eq!(p.complex().vertex_count(), ca.marked.complex().vertex_count());
        assert_eq!(p.complex().edge_count(), ca.marked.complex().edge_count());
    }

    #[test]
    fn json_round_trip() {
        let g = graph(&["a", "b"], &[("a", "b")]);
        let s = salvetti(&g, 2).unwrap();
        let j = s.marked.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: MarkedComplexJson = serde_json::from_str(&text).unwrap();
        let m2 = MarkedComplex::from_json(&g, &back).unwrap();
        assert_eq!(serde_json::to_string(&m2.to_json()).unwrap(), text);
    }

    #[test]
    fn marking_kills_relators_on_4cycle() {
        let g = graph(
            &["v1", "v2", "v3", "v4"],
            &[("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")],
        );
        // construction validates relator-killing internally
        let s = salvetti(&g, 2).unwrap();
        assert!(npc_check(s.marked.complex()).ok);
    }
}
