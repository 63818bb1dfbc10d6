//! Combinatorial metric cube complexes and the non-positive-curvature check.
//!
//! Cells are graded: a k-cell stores, per axis, its two opposite facets and
//! an exact rational edge length. Vertex links are assembled from cell
//! corners (a loop edge would contribute two link vertices, but complexes
//! used with group actions keep loops subdivided); non-positive curvature
//! means every link is a simplicial flag complex.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Length = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("cell ({0},{1}) facet reference out of range")]
    FacetOutOfRange(usize, usize),
    #[error("cell ({0},{1}) has wrong arity")]
    WrongArity(usize, usize),
    #[error("cell ({0},{1}) has a non-positive axis length")]
    BadLength(usize, usize),
    #[error("cell ({0},{1}) axis {2}: facet lengths inconsistent")]
    LengthMismatch(usize, usize, usize),
    #[error("cell ({0},{1}) fails facet commutation at axes {2},{3}")]
    FacetCommutation(usize, usize, usize, usize),
    #[error("edge {0} is a loop; actions require subdivided loops")]
    LoopEdge(usize),
}

/// One cube: opposite facet pairs per axis, plus the axis lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    /// `facets[a] = [negative-side cell, positive-side cell]` in dimension
    /// one lower.
    pub facets: Vec<[usize; 2]>,
    pub lengths: Vec<Length>,
}

impl Cell {
    pub fn vertex() -> Self {
        Cell { facets: Vec::new(), lengths: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.facets.len()
    }
}

/// A graded list of cells; `cells[k]` holds the k-cells.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CubeComplex {
    pub cells: Vec<Vec<Cell>>,
}

/// JSON form of a cell: facet pairs and lengths as exact fractions.
#[derive(Debug, Serialize, Deserialize)]
pub struct CellJson {
    pub facets: Vec<[usize; 2]>,
    pub lengths: Vec<(i64, i64)>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CellComplexJson {
    pub cells: Vec<Vec<CellJson>>,
}

pub fn complex_to_json(c: &CubeComplex) -> CellComplexJson {
    CellComplexJson {
        cells: c
            .cells
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|cell| CellJson {
                        facets: cell.facets.clone(),
                        lengths: cell
                            .lengths
                            .iter()
                            .map(|l| (*l.numer(), *l.denom()))
                            .collect(),
                    })
                    .collect()
            })
            .collect(),
    }
}

pub fn complex_from_json(json: &CellComplexJson) -> CubeComplex {
    CubeComplex {
        cells: json
            .cells
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|cell| Cell {
                        facets: cell.facets.clone(),
                        lengths: cell
                            .lengths
                            .iter()
                            .map(|&(n, d)| Length::new(n, d))
                            .collect(),
                    })
                    .collect()
            })
            .collect(),
    }
}

impl CubeComplex {
    pub fn dim(&self) -> usize {
        self.cells.iter().rposition(|c| !c.is_empty()).unwrap_or(0)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, |c| c.len())
    }

    pub fn vertex_count(&self) -> usize {
        self.count(0)
    }

    pub fn edge_count(&self) -> usize {
        self.count(1)
    }

    pub fn edge_tail(&self, e: usize) -> usize {
        self.cells[1][e].facets[0][0]
    }

    pub fn edge_head(&self, e: usize) -> usize {
        self.cells[1][e].facets[0][1]
    }

    pub fn edge_endpoint(&self, e: usize, positive: bool) -> usize {
        self.cells[1][e].facets[0][if positive { 1 } else { 0 }]
    }

    pub fn edge_length(&self, e: usize) -> Length {
        self.cells[1][e].lengths[0]
    }

    /// Structural validation: arities, ranges, matching facet lengths and
    /// the facet commutation law.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for (k, layer) in self.cells.iter().enumerate() {
            for (i, cell) in layer.iter().enumerate() {
                if cell.facets.len() != k || cell.lengths.len() != k {
                    return Err(ComplexError::WrongArity(k, i));
                }
                for len in &cell.lengths {
                    if *len <= Length::new(0, 1) {
                        return Err(ComplexError::BadLength(k, i));
                    }
                }
                if k == 0 {
                    continue;
                }
                let below = self.count(k - 1);
                for pair in &cell.facets {
                    if pair[0] >= below || pair[1] >= below {
                        return Err(ComplexError::FacetOutOfRange(k, i));
                    }
                }
                // facet lengths: axis a removed
                for a in 0..k {
                    for side in 0..2 {
                        let f = &self.cells[k - 1][cell.facets[a][side]];
                        let mut expect = cell.lengths.clone();
                        expect.remove(a);
                        if f.lengths != expect {
                            return Err(ComplexError::LengthMismatch(k, i, a));
                        }
                    }
                }
                // opposite-face pairing well defined: facets commute
                if k >= 2 {
                    for a in 0..k {
                        for b in (a + 1)..k {
                            for sa in 0..2 {
                                for sb in 0..2 {
                                    let via_a = self.cells[k - 1][cell.facets[a][sa]].facets
                                        [b - 1][sb];
                                    let via_b =
                                        self.cells[k - 1][cell.facets[b][sb]].facets[a][sa];
                                    if via_a != via_b {
                                        return Err(ComplexError::FacetCommutation(k, i, a, b));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn has_loop_edges(&self) -> Option<usize> {
        (0..self.edge_count()).find(|&e| self.edge_tail(e) == self.edge_head(e))
    }

    /// Vertex at a corner of a cell, the corner given by a sign bit per axis.
    pub fn corner_vertex(&self, dim: usize, idx: usize, signs: u32) -> usize {
        let mut d = dim;
        let mut c = idx;
        while d > 0 {
            let side = if signs & (1 << (d - 1)) != 0 { 1 } else { 0 };
            c = self.cells[d][c].facets[d - 1][side];
            d -= 1;
        }
        c
    }

    /// The edge of a cell along `axis` at the given corner, with the sign of
    /// the end meeting the corner.
    pub fn edge_at_corner(&self, dim: usize, idx: usize, signs: u32, axis: usize) -> (usize, bool) {
        let mut cell = (dim, idx);
        let mut axes: Vec<usize> = (0..dim).collect();
        while axes.len() > 1 {
            let pos = (0..axes.len())
                .rev()
                .find(|&p| axes[p] != axis)
                .expect("more than one axis left");
            let original = axes[pos];
            let side = if signs & (1 << original) != 0 { 1 } else { 0 };
            cell = (cell.0 - 1, self.cells[cell.0][cell.1].facets[pos][side]);
            axes.remove(pos);
        }
        (cell.1, signs & (1 << axis) != 0)
    }

    /// Directed edges incident to each vertex: `(edge, end)` pairs, the end
    /// being positive at the head.
    pub fn edge_ends_at(&self) -> Vec<Vec<(usize, bool)>> {
        let mut out = vec![Vec::new(); self.vertex_count()];
        for e in 0..self.edge_count() {
            out[self.edge_tail(e)].push((e, false));
            out[self.edge_head(e)].push((e, true));
        }
        out
    }
}

/// Failure witness of the link condition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum NpcWitness {
    /// A corner whose incident edge-ends repeat, or a doubled simplex.
    NonSimplicial { vertex: usize, detail: String },
    /// A clique of link edges not filled by a simplex; the empty simplex is
    /// listed by its `(edge, end)` link vertices.
    MissingSimplex { vertex: usize, clique: Vec<(usize, bool)> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NpcReport {
    pub ok: bool,
    pub witness: Option<NpcWitness>,
}

/// Gromov's criterion: every vertex link is a simplicial flag complex.
pub fn npc_check(complex: &CubeComplex) -> NpcReport {
    for v in 0..complex.vertex_count() {
        if let Some(witness) = check_link(complex, v) {
            return NpcReport { ok: false, witness: Some(witness) };
        }
    }
    NpcReport { ok: true, witness: None }
}

fn check_link(complex: &CubeComplex, v: usize) -> Option<NpcWitness> {
    // link vertices: edge-end incidences at v
    let mut link_vertex_ids: HashMap<(usize, bool), usize> = HashMap::new();
    let mut link_vertices: Vec<(usize, bool)> = Vec::new();
    for e in 0..complex.edge_count() {
        for positive in [false, true] {
            if complex.edge_endpoint(e, positive) == v {
                link_vertex_ids.insert((e, positive), link_vertices.len());
                link_vertices.push((e, positive));
            }
        }
    }
    // simplices from corners of higher cells
    let mut simplices: HashSet<Vec<usize>> = HashSet::new();
    let mut by_dim: Vec<HashSet<Vec<usize>>> = Vec::new();
    for k in 2..=complex.dim() {
        for idx in 0..complex.count(k) {
            for signs in 0..(1u32 << k) {
                if complex.corner_vertex(k, idx, signs) != v {
                    continue;
                }
                let mut simplex: Vec<usize> = (0..k)
                    .map(|a| {
                        let (e, end) = complex.edge_at_corner(k, idx, signs, a);
                        link_vertex_ids[&(e, end)]
                    })
                    .collect();
                simplex.sort_unstable();
                if simplex.windows(2).any(|w| w[0] == w[1]) {
                    return Some(NpcWitness::NonSimplicial {
                        vertex: v,
                        detail: format!("corner of cell ({k},{idx}) repeats a link vertex"),
                    });
                }
                if !simplices.insert(simplex.clone()) && k >= 2 {
                    // the same simplex from two different corners is a
                    // doubled face unless it came from a facet-shared corner
                    // of the same cube; track multiplicity per dimension
                    return Some(NpcWitness::NonSimplicial {
                        vertex: v,
                        detail: format!(
                            "link simplex {simplex:?} occurs twice (cell ({k},{idx}))"
                        ),
                    });
                }
                while by_dim.len() < k - 1 {
                    by_dim.push(HashSet::new());
                }
                by_dim[k - 2].insert(simplex);
            }
        }
    }
    // flag condition: every clique of the link's edge graph spans a simplex
    let n = link_vertices.len();
    let mut adj = vec![vec![false; n]; n];
    if let Some(edges) = by_dim.first() {
        for s in edges {
            adj[s[0]][s[1]] = true;
            adj[s[1]][s[0]] = true;
        }
    }
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn extend(
        adj: &[Vec<bool>],
        n: usize,
        start: usize,
        stack: &mut Vec<usize>,
        cliques: &mut Vec<Vec<usize>>,
    ) {
        for u in start..n {
            if stack.iter().all(|&w| adj[w][u]) {
                stack.push(u);
                if stack.len() >= 3 {
                    cliques.push(stack.clone());
                }
                extend(adj, n, u + 1, stack, cliques);
                stack.pop();
            }
        }
    }
    extend(&adj, n, 0, &mut stack, &mut cliques);
    for clique in cliques {
        if !simplices.contains(&clique) {
            return Some(NpcWitness::MissingSimplex {
                vertex: v,
                clique: clique.iter().map(|&i| link_vertices[i]).collect(),
            });
        }
    }
    None
}

/// Incremental builder keyed by caller-chosen cell names, resolving facet
/// references by name once every cell is present.
pub struct ComplexBuilder<K> {
    layers: Vec<BTreeMap<K, (Vec<[K; 2]>, Vec<Length>)>>,
}

impl<K: Ord + Clone + std::fmt::Debug> ComplexBuilder<K> {
    pub fn new() -> Self {
        ComplexBuilder { layers: Vec::new() }
    }

    pub fn add_cell(&mut self, dim: usize, key: K, facets: Vec<[K; 2]>, lengths: Vec<Length>) {
        while self.layers.len() <= dim {
            self.layers.push(BTreeMap::new());
        }
        self.layers[dim].insert(key, (facets, lengths));
    }

    /// Index of a key after `build` (keys are ordered within each layer).
    pub fn index_of(&self, dim: usize, key: &K) -> Option<usize> {
        self.layers.get(dim)?.keys().position(|k| k == key)
    }

    pub fn build(self) -> (CubeComplex, Vec<Vec<K>>) {
        let mut cells: Vec<Vec<Cell>> = Vec::new();
        let mut names: Vec<Vec<K>> = Vec::new();
        let mut positions: Vec<BTreeMap<K, usize>> = Vec::new();
        for layer in &self.layers {
            let mut pos = BTreeMap::new();
            for (i, k) in layer.keys().enumerate() {
                pos.insert(k.clone(), i);
            }
            positions.push(pos);
        }
        for (dim, layer) in self.layers.iter().enumerate() {
            let mut cell_layer = Vec::with_capacity(layer.len());
            let mut name_layer = Vec::with_capacity(layer.len());
            for (key, (facets, lengths)) in layer {
                let resolved: Vec<[usize; 2]> = facets
                    .iter()
                    .map(|pair| {
                        [
                            *positions[dim - 1].get(&pair[0]).unwrap_or_else(|| {
                                panic!("unresolved facet {:?} of {:?}", pair[0], key)
                            }),
                            *positions[dim - 1].get(&pair[1]).unwrap_or_else(|| {
                                panic!("unresolved facet {:?} of {:?}", pair[1], key)
                            }),
                        ]
                    })
                    .collect();
                cell_layer.push(Cell { facets: resolved, lengths: lengths.clone() });
                name_layer.push(key.clone());
            }
            cells.push(cell_layer);
            names.push(name_layer);
        }
        (CubeComplex { cells }, names)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Length {
        Length::new(1, 1)
    }

    /// Subdivided circle with `m` edges.
    pub fn circle(m: usize) -> CubeComplex {
        let vertices = vec![Cell::vertex(); m];
        let edges = (0..m)
            .map(|i| Cell {
                facets: vec![[i, (i + 1) % m]],
                lengths: vec![Length::new(1, m as i64)],
            })
            .collect();
        CubeComplex { cells: vec![vertices, edges] }
    }

    #[test]
    fn circle_is_valid_and_npc() {
        let c = circle(4);
        c.validate().unwrap();
        assert!(npc_check(&c).ok);
        assert_eq!(c.dim(), 1);
    }

    #[test]
    fn single_square_is_npc() {
        // a filled square with distinct corners
        let vertices = vec![Cell::vertex(); 4];
        let e = |t: usize, h: usize| Cell { facets: vec![[t, h]], lengths: vec![unit()] };
        // edges: 0: 0->1 (bottom), 1: 2->3 (top), 2: 0->2 (left), 3: 1->3 (right)
        let edges = vec![e(0, 1), e(2, 3), e(0, 2), e(1, 3)];
        let square = Cell { facets: vec![[2, 3], [0, 1]], lengths: vec![unit(), unit()] };
        let cx = CubeComplex { cells: vec![vertices, edges, vec![square]] };
        cx.validate().unwrap();
        assert!(npc_check(&cx).ok);
    }

    #[test]
    fn cube_corner_fails_flag_condition() {
        // three squares sharing a corner vertex pairwise along three edges,
        // with no 3-cube filling: the link at the corner is an empty triangle
        let vertices: Vec<Cell> = vec![Cell::vertex(); 7];
        // vertex 0 centre; 1,2,3 along axes; 4 = 1+2, 5 = 1+3, 6 = 2+3
        let e = |t: usize, h: usize| Cell { facets: vec![[t, h]], lengths: vec![unit()] };
        let edges = vec![
            e(0, 1), // 0
            e(0, 2), // 1
            e(0, 3), // 2
            e(1, 4), // 3
            e(2, 4), // 4
            e(1, 5), // 5
            e(3, 5), // 6
            e(2, 6), // 7
            e(3, 6), // 8
        ];
        // facets[axis] = [neg face, pos face], each face spanning the other axis
        let squares = vec![
            // on 0,1,2,4: axis0 towards 1, axis1 towards 2
            Cell { facets: vec![[1, 3], [0, 4]], lengths: vec![unit(), unit()] },
            // on 0,1,3,5: axis0 towards 1, axis1 towards 3
            Cell { facets: vec![[2, 5], [0, 6]], lengths: vec![unit(), unit()] },
            // on 0,2,3,6: axis0 towards 2, axis1 towards 3
            Cell { facets: vec![[2, 7], [1, 8]], lengths: vec![unit(), unit()] },
        ];
        let cx = CubeComplex { cells: vec![vertices, edges, squares] };
        cx.validate().unwrap();
        let report = npc_check(&cx);
        assert!(!report.ok);
        match report.witness.unwrap() {
            NpcWitness::MissingSimplex { vertex, clique } => {
                assert_eq!(vertex, 0);
                assert_eq!(clique.len(), 3);
            }
            w => panic!("expected missing simplex, got {w:?}"),
        }
    }

    #[test]
    fn validation_catches_length_mismatch() {
        let vertices = vec![Cell::vertex(); 2];
        let edges = vec![
            Cell { facets: vec![[0, 1]], lengths: vec![Length::new(1, 2)] },
            Cell { facets: vec![[1, 0]], lengths: vec![Length::new(1, 3)] },
        ];
        let square = Cell {
            facets: vec![[0, 1], [0, 1]],
            lengths: vec![unit(), unit()],
        };
        let cx = CubeComplex { cells: vec![vertices, edges, vec![square]] };
        assert!(cx.validate().is_err());
    }
}
