//! Finite subgroups of the outer automorphism group, represented by one
//! automorphism per outer class plus a multiplication table.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut::{classify_untwisted, is_inner, outer_equal, AutError, RaagMap, RaagMapJson};
use crate::graph::GraphRef;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error("closure exceeded the cap of {0} outer classes")]
    CapExceeded(usize),
    #[error("generator belongs to a different ambient graph")]
    AmbientMismatch,
    #[error("multiplication tables of the two groups differ")]
    TableMismatch,
}

/// A finite group of outer automorphism classes: representatives, a closed
/// multiplication table over class indices, and inverses. Index 0 is the
/// identity class.
#[derive(Debug, Clone)]
pub struct FiniteOuterGroup {
    graph: GraphRef,
    elements: Vec<RaagMap>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl FiniteOuterGroup {
    pub fn trivial(graph: &GraphRef) -> Self {
        FiniteOuterGroup {
            graph: graph.clone(),
            elements: vec![RaagMap::identity(graph)],
            table: vec![vec![0]],
            inverses: vec![0],
        }
    }

    pub fn graph(&self) -> &GraphRef {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &RaagMap {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[RaagMap] {
        &self.elements
    }

    pub fn multiply(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    /// Representative of the inverse class, built from the stored inverse
    /// images rather than a fresh search.
    pub fn inverse_map(&self, i: usize) -> RaagMap {
        self.elements[i].inverse()
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

    /// All elements are tagged compositions avoiding twists and graph
    /// symmetries; `None` when some element is untagged.
    pub fn u0_safe(&self) -> Option<bool> {
        let mut all = true;
        for e in &self.elements {
            match classify_untwisted(e).in_uaut0 {
                Some(true) => {}
                Some(false) => all = false,
                None => return None,
            }
        }
        Some(all)
    }

    pub fn to_json(&self) -> FiniteOuterGroupJson {
        FiniteOuterGroupJson {
            elements: self.elements.iter().map(|e| e.to_json()).collect(),
            table: self.table.clone(),
            inverses: self.inverses.clone(),
        }
    }

    pub fn from_json(graph: &GraphRef, json: &FiniteOuterGroupJson) -> Result<Self, GroupError> {
        let elements: Result<Vec<RaagMap>, AutError> = json
            .elements
            .iter()
            .map(|e| RaagMap::from_json(graph, e))
            .collect();
        Ok(FiniteOuterGroup {
            graph: graph.clone(),
            elements: elements?,
            table: json.table.clone(),
            inverses: json.inverses.clone(),
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FiniteOuterGroupJson {
    pub elements: Vec<RaagMapJson>,
    pub table: Vec<Vec<usize>>,
    pub inverses: Vec<usize>,
}

/// Close a generating set under composition modulo inner automorphisms.
/// Classes are distinguished first by the abelianised matrix (an outer
/// invariant) and only then by the inner-ness search.
pub fn close_group(
    graph: &GraphRef,
    generators: &[RaagMap],
    cap: usize,
) -> Result<FiniteOuterGroup, GroupError> {
    for g in generators {
        if **g.graph() != **graph {
            return Err(GroupError::AmbientMismatch);
        }
    }
    let mut elements: Vec<RaagMap> = vec![RaagMap::identity(graph)];
    let mut matrices: Vec<Vec<Vec<i64>>> = vec![elements[0].abelianized()];

    let classify = |elements: &[RaagMap],
                    matrices: &[Vec<Vec<i64>>],
                    candidate: &RaagMap,
                    cand_mat: &Vec<Vec<i64>>|
     -> Result<Option<usize>, GroupError> {
        for (i, e) in elements.iter().enumerate() {
            if &matrices[i] == cand_mat && outer_equal(candidate, e)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    };

    let mut frontier: Vec<usize> = vec![0];
    while let Some(idx) = frontier.pop() {
        for g in generators {
            let product = RaagMap::compose(g, &elements[idx].clone())?;
            let mat = product.abelianized();
            if classify(&elements, &matrices, &product, &mat)?.is_none() {
                elements.push(product);
                matrices.push(mat);
                if elements.len() > cap {
                    return Err(GroupError::CapExceeded(cap));
                }
                frontier.push(elements.len() - 1);
            }
        }
    }

    // multiplication table over class indices
    let n = elements.len();
    let mut table = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            let product = RaagMap::compose(&elements[i], &elements[j])?;
            let mat = product.abelianized();
            table[i][j] = classify(&elements, &matrices, &product, &mat)?
                .expect("closure is closed under composition");
        }
    }
    let mut inverses = vec![0usize; n];
    for i in 0..n {
        inverses[i] = (0..n)
            .find(|&j| table[i][j] == 0)
            .expect("finite group has inverses");
        // the stored inverse map must land in the inverse class
        debug_assert!(outer_equal(&elements[i].inverse(), &elements[inverses[i]]).unwrap());
    }
    Ok(FiniteOuterGroup { graph: graph.clone(), elements, table, inverses })
}

/// Check that a map is outer-trivial, a convenience used when validating
/// realisations of the trivial class.
pub fn outer_trivial(f: &RaagMap) -> Result<bool, GroupError> {
    Ok(is_inner(f)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aut::{make_inversion, make_transvection};
    use crate::graph::SimplicialGraph;
    use std::sync::Arc;

    #[test]
    fn inversion_generates_order_two() {
        let g: GraphRef = Arc::new(SimplicialGraph::new(&["a", "b"], &[]).unwrap());
        let group = close_group(&g, &[make_inversion(&g, 0).unwrap()], 10).unwrap();
        assert_eq!(group.order(), 2);
        assert_eq!(group.multiply(1, 1), 0);
        assert_eq!(group.inverse(1), 1);
        assert_eq!(group.element_order(1), 2);
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g: GraphRef = Arc::new(SimplicialGraph::new(&["a"], &[]).unwrap());
        let group = close_group(&g, &[], 10).unwrap();
        assert_eq!(group.order(), 1);
    }

    #[test]
    fn fold_on_square_exceeds_cap() {
        let g: GraphRef = Arc::new(
            SimplicialGraph::new(
                &["v1", "v2", "v3", "v4"],
                &[("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")],
            )
            .unwrap(),
        );
        let fold = make_transvection(&g, 0, 2).unwrap();
        match close_group(&g, &[fold], 10) {
            Err(GroupError::CapExceeded(10)) => {}
            other => panic!("expected cap exceeded, got {other:?}"),
        }
    }

    #[test]
    fn table_is_associative() {
        let g: GraphRef = Arc::new(SimplicialGraph::new(&["a", "b", "c"], &[]).unwrap());
        let gens = vec![make_inversion(&g, 0).unwrap(), make_inversion(&g, 1).unwrap()];
        let group = close_group(&g, &gens, 16).unwrap();
        assert_eq!(group.order(), 4);
        let n = group.order();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    assert_eq!(
                        group.multiply(group.multiply(i, j), k),
                        group.multiply(i, group.multiply(j, k))
                    );
                }
            }
        }
    }

    #[test]
    fn u0_flags_from_tags() {
        let g: GraphRef = Arc::new(SimplicialGraph::new(&["a", "b"], &[("a", "b")]).unwrap());
        let inv = make_inversion(&g, 0).unwrap();
        let group = close_group(&g, &[inv], 10).unwrap();
        assert_eq!(group.u0_safe(), Some(true));

        let twist = make_transvection(&g, 0, 1).unwrap();
        // twist has infinite order; just check the flag logic on the generator
        assert_eq!(crate::aut::classify_untwisted(&twist).in_uaut0, Some(false));
        drop(twist);
    }
}
