//! Cellular group actions on cube complexes, the automorphisms they induce
//! on fundamental groups, and circle actions with their rotation invariant.
//!
//! An action stores one cell permutation per group element, per dimension,
//! plus the multiplication table of the abstract finite group. The
//! geometric representative of an element is read off by mapping generator
//! loops, dragging the basepoint back along a deterministic path and
//! translating through the marking.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut::{outer_equal, AutError, RaagMap};
use crate::complex::{CubeComplex, Length};
use crate::graph::GraphRef;
use crate::group::FiniteOuterGroup;
use crate::marked::{reverse_path, DirEdge, MarkedComplex, MarkedError};
use crate::words::{transport, WordError};

#[derive(Debug, Error)]
pub enum ActionError {
    #[error(transparent)]
    Marked(#[from] MarkedError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("element {0} does not act bijectively in dimension {1}")]
    NotBijective(usize, usize),
    #[error("element {0} breaks the cube structure at cell ({1},{2})")]
    NotCellular(usize, usize, usize),
    #[error("element 0 is not the identity")]
    IdentityMissing,
    #[error("composition of elements {0} and {1} does not match the table")]
    TableBroken(usize, usize),
    #[error("complex has a loop edge; subdivide before acting")]
    LoopEdge,
    #[error("group orders differ: action has {0}, outer group has {1}")]
    OrderMismatch(usize, usize),
    #[error("complex is not a subdivided circle")]
    NotACircle,
    #[error("circle action data is inconsistent: {0}")]
    InconsistentCircle(String),
    #[error("circle actions are incompatible: {0}")]
    IncompatibleActions(String),
}

/// A finite group acting cellularly: per element, a cell permutation per
/// dimension; plus the group's multiplication table (index 0 = identity).
#[derive(Debug, Clone)]
pub struct ComplexAction {
    maps: Vec<Vec<Vec<usize>>>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl ComplexAction {
    pub fn new(maps: Vec<Vec<Vec<usize>>>, table: Vec<Vec<usize>>) -> Result<Self, ActionError> {
        let n = maps.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(ActionError::TableBroken(0, 0));
        }
        let mut inverses = vec![0usize; n];
        for i in 0..n {
            inverses[i] = (0..n)
                .find(|&j| table[i][j] == 0)
                .ok_or(ActionError::TableBroken(i, i))?;
        }
        Ok(ComplexAction { maps, table, inverses })
    }

    pub fn trivial(complex: &CubeComplex) -> Self {
        let identity: Vec<Vec<usize>> = complex
            .cells
            .iter()
            .map(|layer| (0..layer.len()).collect())
            .collect();
        ComplexAction { maps: vec![identity], table: vec![vec![0]], inverses: vec![0] }
    }

    pub fn order(&self) -> usize {
        self.maps.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn multiply(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut cur = i;
        while cur != 0 {
            cur = self.table[cur][i];
            k += 1;
        }
        k
    }

    pub fn cell_map(&self, elem: usize, dim: usize) -> &[usize] {
        &self.maps[elem][dim]
    }

    pub fn act_vertex(&self, elem: usize, v: usize) -> usize {
        self.maps[elem][0][v]
    }

    pub fn act_cell(&self, elem: usize, dim: usize, idx: usize) -> usize {
        self.maps[elem][dim][idx]
    }

    /// Image of a directed edge; the orientation is recovered from the
    /// vertex images (complexes acted on have no loop edges).
    pub fn act_dir_edge(&self, complex: &CubeComplex, elem: usize, d: DirEdge) -> DirEdge {
        let e2 = self.maps[elem][1][d.edge];
        let (t, h) = (complex.edge_tail(d.edge), complex.edge_head(d.edge));
        let (t2, h2) = (complex.edge_tail(e2), complex.edge_head(e2));
        let (ft, fh) = (self.act_vertex(elem, t), self.act_vertex(elem, h));
        let preserved = if (ft, fh) == (t2, h2) {
            true
        } else if (ft, fh) == (h2, t2) {
            false
        } else {
            panic!("edge image inconsistent with vertex images");
        };
        DirEdge::new(e2, d.forward == preserved)
    }

    pub fn act_path(&self, complex: &CubeComplex, elem: usize, path: &[DirEdge]) -> Vec<DirEdge> {
        path.iter().map(|&d| self.act_dir_edge(complex, elem, d)).collect()
    }

    /// Full structural validation against a complex: bijectivity, the cube
    /// structure with lengths, identity, and the multiplication table.
    pub fn validate_on(&self, complex: &CubeComplex) -> Result<(), ActionError> {
        if complex.has_loop_edges().is_some() {
            return Err(ActionError::LoopEdge);
        }
        let dims = complex.cells.len();
        for (e, map) in self.maps.iter().enumerate() {
            if map.len() != dims {
                return Err(ActionError::NotBijective(e, map.len()));
            }
            for (k, layer) in map.iter().enumerate() {
                let n = complex.count(k);
                if layer.len() != n {
                    return Err(ActionError::NotBijective(e, k));
                }
                let mut seen = vec![false; n];
                for &img in layer {
                    if img >= n || seen[img] {
                        return Err(ActionError::NotBijective(e, k));
                    }
                    seen[img] = true;
                }
            }
            // identity at index 0
            if e == 0 {
                for layer in map.iter() {
                    if layer.iter().enumerate().any(|(i, &img)| i != img) {
                        return Err(ActionError::IdentityMissing);
                    }
                }
            }
            // cube structure: facets map to facets axis-by-axis with lengths
            for k in 1..dims {
                for i in 0..complex.count(k) {
                    let img = map[k][i];
                    let cell = &complex.cells[k][i];
                    let icell = &complex.cells[k][img];
                    let mut used = vec![false; k];
                    for a in 0..k {
                        let fa = [map[k - 1][cell.facets[a][0]], map[k - 1][cell.facets[a][1]]];
                        let matched = (0..k).find(|&b| {
                            !used[b]
                                && icell.lengths[b] == cell.lengths[a]
                                && (fa == icell.facets[b]
                                    || fa == [icell.facets[b][1], icell.facets[b][0]])
                        });
                        match matched {
                            Some(b) => used[b] = true,
                            None => return Err(ActionError::NotCellular(e, k, i)),
                        }
                    }
                }
            }
        }
        // composition matches the table
        let n = self.maps.len();
        for i in 0..n {
            for j in 0..n {
                let k = self.table[i][j];
                for dim in 0..dims {
                    for c in 0..complex.count(dim) {
                        if self.maps[i][dim][self.maps[j][dim][c]] != self.maps[k][dim][c] {
                            return Err(ActionError::TableBroken(i, j));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> ComplexActionJson {
        ComplexActionJson { maps: self.maps.clone(), table: self.table.clone() }
    }

    pub fn from_json(json: &ComplexActionJson) -> Result<Self, ActionError> {
        ComplexAction::new(json.maps.clone(), json.table.clone())
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ComplexActionJson {
    pub maps: Vec<Vec<Vec<usize>>>,
    pub table: Vec<Vec<usize>>,
}

/// The automorphism of the marked group induced by one element: apply the
/// isometry, push the basepoint back along a breadth-first path, translate
/// loops through the marking. Returned over the induced graph of the
/// marked domain.
pub fn geometric_representative(
    m: &MarkedComplex,
    a: &ComplexAction,
    elem: usize,
    base: usize,
) -> Result<RaagMap, ActionError> {
    let gamma = m.bfs_path(base, a.act_vertex(elem, base));
    geometric_representative_on_path(m, a, elem, base, &gamma)
}

/// Geometric representative with a caller-chosen path from the basepoint to
/// its image.
pub fn geometric_representative_on_path(
    m: &MarkedComplex,
    a: &ComplexAction,
    elem: usize,
    base: usize,
    gamma: &[DirEdge],
) -> Result<RaagMap, ActionError> {
    if m.path_target(base, gamma)? != a.act_vertex(elem, base) {
        return Err(MarkedError::BrokenPath.into());
    }
    let induced: GraphRef = std::sync::Arc::new(m.domain().induced_graph());
    let elem_inv = a.inverse(elem);
    let gamma_inv = reverse_path(&a.act_path(m.complex(), elem_inv, gamma));
    let mut images = Vec::new();
    let mut inverse_images = Vec::new();
    for v in m.domain().iter() {
        let loop_v = m
            .generator_loop_at(v, base)
            .expect("domain generators have loops");
        let mut path = gamma.to_vec();
        path.extend(a.act_path(m.complex(), elem, &loop_v));
        path.extend(reverse_path(gamma));
        images.push(transport(&m.eval_path(&path)?, &induced)?);

        let mut ipath = gamma_inv.clone();
        ipath.extend(a.act_path(m.complex(), elem_inv, &loop_v));
        ipath.extend(reverse_path(&gamma_inv));
        inverse_images.push(transport(&m.eval_path(&ipath)?, &induced)?);
    }
    Ok(RaagMap::new(&induced, images, inverse_images, None)?)
}

/// Does the action on the marked complex induce the given outer action?
/// The outer group must live over the induced graph of the marked domain
/// with elements indexed consistently with the action.
pub fn realises(
    m: &MarkedComplex,
    a: &ComplexAction,
    phi: &FiniteOuterGroup,
) -> Result<bool, ActionError> {
    if a.order() != phi.order() {
        return Err(ActionError::OrderMismatch(a.order(), phi.order()));
    }
    a.validate_on(m.complex())?;
    for elem in 1..a.order() {
        let rep = geometric_representative(m, a, elem, m.basepoint())?;
        if !outer_equal(&rep, phi.element(elem))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A subdivided circle in cyclic order: `edges[i]` runs from `vertices[i]`
/// to `vertices[i+1]`.
#[derive(Debug, Clone)]
pub struct CircleShape {
    pub vertices: Vec<usize>,
    pub edges: Vec<DirEdge>,
}

impl CircleShape {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn position_of(&self, vertex: usize) -> Option<usize> {
        self.vertices.iter().position(|&v| v == vertex)
    }
}

/// Recognize a subdivided circle and fix a deterministic orientation
/// starting from the least vertex.
pub fn circle_shape(complex: &CubeComplex) -> Result<CircleShape, ActionError> {
    if complex.dim() != 1
        || complex.vertex_count() == 0
        || complex.edge_count() != complex.vertex_count()
        || complex.has_loop_edges().is_some()
    {
        return Err(ActionError::NotACircle);
    }
    let nv = complex.vertex_count();
    let mut incident: Vec<Vec<DirEdge>> = vec![Vec::new(); nv];
    for e in 0..complex.edge_count() {
        incident[complex.edge_tail(e)].push(DirEdge::new(e, true));
        incident[complex.edge_head(e)].push(DirEdge::new(e, false));
    }
    if incident.iter().any(|l| l.len() != 2) {
        return Err(ActionError::NotACircle);
    }
    let mut vertices = vec![0usize];
    let mut edges = Vec::new();
    let mut cur = 0usize;
    let mut last_edge = usize::MAX;
    loop {
        let d = *incident[cur]
            .iter()
            .find(|d| d.edge != last_edge)
            .expect("degree two");
        let next = if d.forward {
            complex.edge_head(d.edge)
        } else {
            complex.edge_tail(d.edge)
        };
        edges.push(d);
        last_edge = d.edge;
        if next == 0 {
            break;
        }
        vertices.push(next);
        cur = next;
    }
    if vertices.len() != nv {
        return Err(ActionError::NotACircle);
    }
    Ok(CircleShape { vertices, edges })
}

/// One element of a circle action, on vertex positions mod m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleMove {
    /// x ↦ x + k
    Rotate(usize),
    /// x ↦ c − x
    Flip(usize),
}

impl CircleMove {
    fn compose(self, other: CircleMove, m: usize) -> CircleMove {
        // self ∘ other (other first)
        match (self, other) {
            (CircleMove::Rotate(a), CircleMove::Rotate(b)) => CircleMove::Rotate((a + b) % m),
            (CircleMove::Rotate(a), CircleMove::Flip(c)) => CircleMove::Flip((c + a) % m),
            (CircleMove::Flip(c), CircleMove::Rotate(b)) => CircleMove::Flip((c + m - b % m) % m),
            (CircleMove::Flip(c), CircleMove::Flip(d)) => CircleMove::Rotate((c + m - d) % m),
        }
    }

    fn apply(self, x: usize, m: usize) -> usize {
        match self {
            CircleMove::Rotate(k) => (x + k) % m,
            CircleMove::Flip(c) => (c + m - x % m) % m,
        }
    }

    fn scale(self, factor: usize, m_new: usize) -> CircleMove {
        match self {
            CircleMove::Rotate(k) => CircleMove::Rotate((k * factor) % m_new),
            CircleMove::Flip(c) => CircleMove::Flip((c * factor) % m_new),
        }
    }
}

/// Per-element circle moves of a group acting on a subdivided circle.
#[derive(Debug, Clone)]
pub struct CircleActionData {
    pub m: usize,
    pub moves: Vec<CircleMove>,
}

/// Extract the move of each element on a circle complex.
pub fn circle_action_data(
    complex: &CubeComplex,
    action: &ComplexAction,
) -> Result<CircleActionData, ActionError> {
    let shape = circle_shape(complex)?;
    let m = shape.len();
    let mut moves = Vec::with_capacity(action.order());
    for elem in 0..action.order() {
        let p = shape
            .position_of(action.act_vertex(elem, shape.vertices[0]))
            .ok_or(ActionError::NotACircle)?;
        let q = shape
            .position_of(action.act_vertex(elem, shape.vertices[1 % m]))
            .ok_or(ActionError::NotACircle)?;
        if q == (p + 1) % m {
            moves.push(CircleMove::Rotate(p));
        } else if (q + 1) % m == p {
            moves.push(CircleMove::Flip(p));
        } else {
            return Err(ActionError::NotACircle);
        }
    }
    Ok(CircleActionData { m, moves })
}

/// The rotation residue of an element on a circle, or the two fixed points
/// of a flip in half-edge (doubled) coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationClass {
    Rotation { residue: usize, order: usize },
    Flip { fixed_doubled: [usize; 2] },
}

/// `K(h) = ord(h)·μ/m mod ord(h)` for rotations; the two fixed points for
/// flips.
pub fn rotation_invariant(
    complex: &CubeComplex,
    action: &ComplexAction,
    elem: usize,
) -> Result<RotationClass, ActionError> {
    let data = circle_action_data(complex, action)?;
    let m = data.m;
    match data.moves[elem] {
        CircleMove::Rotate(mu) => {
            let order = action.element_order(elem);
            debug_assert_eq!(order * mu % m, 0, "rotation order divides");
            Ok(RotationClass::Rotation { residue: (order * mu / m) % order, order })
        }
        CircleMove::Flip(c) => {
            let d1 = c % (2 * m);
            let d2 = (c + m) % (2 * m);
            let mut fixed = [d1.min(d2), d1.max(d2)];
            fixed.sort_unstable();
            Ok(RotationClass::Flip { fixed_doubled: fixed })
        }
    }
}

/// Build the subdivided circle with `m` edges realizing the prescribed
/// moves. Move 0 must be the identity and the moves must close under
/// composition following their own group structure.
pub fn build_circle_action(
    m: usize,
    moves: &[CircleMove],
) -> Result<(CubeComplex, ComplexAction), ActionError> {
    if m < 2 {
        return Err(ActionError::InconsistentCircle("need at least two edges".into()));
    }
    if moves.is_empty() || moves[0] != CircleMove::Rotate(0) {
        return Err(ActionError::InconsistentCircle("element 0 must be the identity".into()));
    }
    let n = moves.len();
    let mut table = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            let prod = moves[i].compose(moves[j], m);
            table[i][j] = moves
                .iter()
                .position(|&mv| mv == prod)
                .ok_or_else(|| {
                    ActionError::InconsistentCircle(format!(
                        "product of elements {i} and {j} is missing"
                    ))
                })?;
        }
    }
    let vertices = vec![crate::complex::Cell::vertex(); m];
    let edges = (0..m)
        .map(|i| crate::complex::Cell {
            facets: vec![[i, (i + 1) % m]],
            lengths: vec![Length::new(1, m as i64)],
        })
        .collect();
    let complex = CubeComplex { cells: vec![vertices, edges] };
    let mut maps = Vec::with_capacity(n);
    for mv in moves {
        let vmap: Vec<usize> = (0..m).map(|x| mv.apply(x, m)).collect();
        let emap: Vec<usize> = (0..m)
            .map(|e| match mv {
                CircleMove::Rotate(k) => (e + k) % m,
                CircleMove::Flip(c) => (c + m - 1 - e % m + m) % m,
            })
            .collect();
        maps.push(vec![vmap, emap]);
    }
    let action = ComplexAction::new(maps, table)?;
    action.validate_on(&complex)?;
    Ok((complex, action))
}

/// A common-subdivision identification of two circles: y-position x maps to
/// z-position x + rotation (after both are subdivided to `common_m`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleAlignment {
    pub common_m: usize,
    pub rotation: usize,
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Find an equivariant rotation identifying two circle actions of the same
/// group. Rotation amounts must agree element-wise; flips constrain the
/// rotation parameter. The least valid rotation is returned.
pub fn align_circles(
    y: &CircleActionData,
    z: &CircleActionData,
) -> Result<CircleAlignment, ActionError> {
    if y.moves.len() != z.moves.len() {
        return Err(ActionError::IncompatibleActions("group orders differ".into()));
    }
    let m = lcm(y.m, z.m);
    let fy = m / y.m;
    let fz = m / z.m;
    let ymoves: Vec<CircleMove> = y.moves.iter().map(|mv| mv.scale(fy, m)).collect();
    let zmoves: Vec<CircleMove> = z.moves.iter().map(|mv| mv.scale(fz, m)).collect();
    for (i, (my, mz)) in ymoves.iter().zip(&zmoves).enumerate() {
        match (my, mz) {
            (CircleMove::Rotate(a), CircleMove::Rotate(b)) => {
                if a != b {
                    return Err(ActionError::IncompatibleActions(format!(
                        "element {i} rotates by {a} and {b} of {m}"
                    )));
                }
            }
            (CircleMove::Flip(_), CircleMove::Flip(_)) => {}
            _ => {
                return Err(ActionError::IncompatibleActions(format!(
                    "element {i} rotates one circle and flips the other"
                )))
            }
        }
    }
    let rotation = (0..m).find(|&r| {
        ymoves.iter().zip(&zmoves).all(|(my, mz)| match (my, mz) {
            (CircleMove::Flip(cy), CircleMove::Flip(cz)) => (2 * r + cy) % m == cz % m,
            _ => true,
        })
    });
    match rotation {
        Some(rotation) => Ok(CircleAlignment { common_m: m, rotation }),
        None => Err(ActionError::IncompatibleActions(
            "flip centres admit no equivariant rotation".into(),
        )),
    }
}

/// Per-element circle moves specified in JSON manifests.
#[derive(Debug, Serialize, Deserialize)]
pub struct CircleMoveJson {
    pub kind: String,
    pub amount: usize,
}

pub fn circle_moves_from_json(moves: &[CircleMoveJson]) -> Result<Vec<CircleMove>, ActionError> {
    moves
        .iter()
        .map(|m| match m.kind.as_str() {
            "rotate" => Ok(CircleMove::Rotate(m.amount)),
            "flip" => Ok(CircleMove::Flip(m.amount)),
            other => Err(ActionError::InconsistentCircle(format!("unknown move kind {other}"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphRef, SimplicialGraph};
    use crate::group::close_group;
    use crate::marked::salvetti;
    use crate::aut::make_inversion;
    use std::sync::Arc;

    fn circle_m(m: usize) -> CubeComplex {
        build_circle_action(m, &[CircleMove::Rotate(0)]).unwrap().0
    }

    #[test]
    fn circle_shape_walks_in_order() {
        let c = circle_m(4);
        let shape = circle_shape(&c).unwrap();
        assert_eq!(shape.vertices, vec![0, 1, 2, 3]);
        assert_eq!(shape.edges.len(), 4);
    }

    #[test]
    fn flip_action_on_marked_circle() {
        // salvetti circle for one generator with the flip a ↦ a^{-1}
        let g: GraphRef = Arc::new(SimplicialGraph::new(&["a"], &[]).unwrap());
        let s = salvetti(&g, 2).unwrap();
        let m = &s.marked;
        // flip: fixes both vertices, swaps the two edges
        let maps = vec![
            vec![vec![0, 1], vec![0, 1]],
            vec![vec![0, 1], vec![1, 0]],
        ];
        let table = vec![vec![0, 1], vec![1, 0]];
        let action = ComplexAction::new(maps, table).unwrap();
        action.validate_on(m.complex()).unwrap();
        let rep = geometric_representative(m, &action, 1, m.basepoint()).unwrap();
        assert_eq!(rep.image(0).format(), "a^-1");

        let phi = close_group(&g, &[make_inversion(&g, 0).unwrap()], 4).unwrap();
        assert!(realises(m, &action, &phi).unwrap());

        // against the trivial outer class of order two the flip fails
        let id = crate::aut::RaagMap::identity(&g);
        let phi2 = FiniteOuterGroup::from_json(
            &g,
            &crate::group::FiniteOuterGroupJson {
                elements: vec![id.to_json(), id.to_json()],
                table: vec![vec![0, 1], vec![1, 0]],
                inverses: vec![0, 1],
            },
        )
        .unwrap();
        assert!(!realises(m, &action, &phi2).unwrap());
    }

    #[test]
    fn identity_action_induces_identity() {
        let g: GraphRef = Arc::new(SimplicialGraph::new(&["a", "b"], &[("a", "b")]).unwrap());
        let s = salvetti(&g, 2).unwrap();
        let action = ComplexAction::trivial(s.marked.complex());
        let rep = geometric_representative(&s.marked, &action, 0, s.marked.basepoint()).unwrap();
        assert!(rep.is_identity_map());
    }

    #[test]
    fn rotation_invariant_formula() {
        let moves: Vec<CircleMove> =
            (0..4).map(CircleMove::Rotate).collect();
        let (c, a) = build_circle_action(4, &moves).unwrap();
        match rotation_invariant(&c, &a, 1).unwrap() {
            RotationClass::Rotation { residue, order } => {
                assert_eq!(order, 4);
                assert_eq!(residue, 1);
            }
            other => panic!("expected rotation, got {other:?}"),
        }
        match rotation_invariant(&c, &a, 0).unwrap() {
            RotationClass::Rotation { residue, .. } => assert_eq!(residue, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flip_fixed_points() {
        let moves = vec![CircleMove::Rotate(0), CircleMove::Flip(0)];
        let (c, a) = build_circle_action(4, &moves).unwrap();
        match rotation_invariant(&c, &a, 1).unwrap() {
            RotationClass::Flip { fixed_doubled } => assert_eq!(fixed_doubled, [0, 4]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn antipodal_rotation_on_two_edges() {
        let moves = vec![CircleMove::Rotate(0), CircleMove::Rotate(1)];
        let (c, a) = build_circle_action(2, &moves).unwrap();
        a.validate_on(&c).unwrap();
        assert_eq!(a.element_order(1), 2);
    }

    #[test]
    fn align_rotations_and_flips() {
        let y = CircleActionData {
            m: 4,
            moves: vec![CircleMove::Rotate(0), CircleMove::Rotate(2)],
        };
        let z = CircleActionData {
            m: 4,
            moves: vec![CircleMove::Rotate(0), CircleMove::Rotate(2)],
        };
        let al = align_circles(&y, &z).unwrap();
        assert_eq!(al.common_m, 4);
        assert_eq!(al.rotation, 0);

        let y = CircleActionData { m: 4, moves: vec![CircleMove::Rotate(0), CircleMove::Flip(0)] };
        let z = CircleActionData { m: 4, moves: vec![CircleMove::Rotate(0), CircleMove::Flip(2)] };
        let al = align_circles(&y, &z).unwrap();
        assert_eq!(al.rotation, 1);

        let z = CircleActionData { m: 4, moves: vec![CircleMove::Rotate(0), CircleMove::Rotate(2)] };
        assert!(align_circles(&y, &z).is_err());
    }

    #[test]
    fn identical_circles_align_identically() {
        let y = CircleActionData { m: 2, moves: vec![CircleMove::Rotate(0)] };
        let al = align_circles(&y, &y).unwrap();
        assert_eq!(al.rotation, 0);
    }

    #[test]
    fn torus_flip_both() {
        // torus for the edge a–b, flip both circles
        let g: GraphRef = Arc::new(SimplicialGraph::new(&["a", "b"], &[("a", "b")]).unwrap());
        let s = salvetti(&g, 2).unwrap();
        let m = &s.marked;
        // use the key tables to build the flip: negate every coordinate
        let flip_key = |key: &crate::marked::SalvettiKey| -> crate::marked::SalvettiKey {
            key.iter()
                .map(|&(v, c)| {
                    let mv = s.subdiv[&v];
                    let c2 = match c {
                        crate::marked::CircleCoord::V(i) => crate::marked::CircleCoord::V(mv - i),
                        crate::marked::CircleCoord::E(i) => {
                            crate::marked::CircleCoord::E((2 * mv - 1 - i) % mv)
                        }
                    };
                    (v, c2)
                })
                .collect()
        };
        let mut maps = vec![Vec::new(), Vec::new()];
        for (dim, layer) in s.keys.iter().enumerate() {
            maps[0].push((0..layer.len()).collect::<Vec<_>>());
            let img: Vec<usize> = layer
                .iter()
                .map(|key| {
                    let mut fk = flip_key(key);
                    fk.sort();
                    s.index[&fk].1
                })
                .collect();
            maps[1].push(img);
            let _ = dim;
        }
        let table = vec![vec![0, 1], vec![1, 0]];
        let action = ComplexAction::new(maps, table).unwrap();
        action.validate_on(m.complex()).unwrap();
        let rep = geometric_representative(m, &action, 1, m.basepoint()).unwrap();
        assert_eq!(rep.image(0).format(), "a^-1");
        assert_eq!(rep.image(1).format(), "b^-1");
    }
}
