//! Automorphisms of a RAAG as generator-image maps, with the
//! Laurence–Servatius generator taxonomy, inner-ness testing and outer
//! equality.
//!
//! Every map carries the images of the generators together with the images
//! under its inverse; construction verifies that the two compose to the
//! identity and that the defining relations are preserved. Maps built by
//! the named constructors are tagged with their generator kind, and the
//! tags survive composition, so membership in the subgroups generated
//! without twists or graph symmetries can be read off.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, GraphRef, Vertex, VertexSet};
use crate::words::{
    conjugate, is_conjugate, multiply_all, normal_forms_up_to, Letter, NormalForm, Word,
    WordError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("invalid generator: {0}")]
    Validity(String),
    #[error("map does not preserve the defining relations: {0}")]
    RelationBroken(String),
    #[error("images and inverse images do not compose to the identity at {0}")]
    NotInverse(String),
    #[error("maps belong to different ambient graphs")]
    AmbientMismatch,
    #[error("inner-ness search inconclusive at radius {0}")]
    Inconclusive(usize),
}

/// Taxonomy of the Laurence–Servatius generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Inversion,
    PartialConjugation,
    Fold,
    Twist,
    GraphSymmetry,
}

/// An automorphism given by generator images, with its inverse carried
/// alongside. `tags` lists the generator kinds of a known factorisation;
/// `None` means the factorisation is unknown.
#[derive(Debug, Clone)]
pub struct RaagMap {
    graph: GraphRef,
    images: Vec<NormalForm>,
    inverse_images: Vec<NormalForm>,
    tags: Option<Vec<GeneratorKind>>,
}

impl PartialEq for RaagMap {
    fn eq(&self, other: &Self) -> bool {
        *self.graph == *other.graph
            && self.images == other.images
            && self.inverse_images == other.inverse_images
    }
}
impl Eq for RaagMap {}

impl RaagMap {
    /// Build and validate a map from its images and inverse images.
    pub fn new(
        graph: &GraphRef,
        images: Vec<NormalForm>,
        inverse_images: Vec<NormalForm>,
        tags: Option<Vec<GeneratorKind>>,
    ) -> Result<Self, AutError> {
        let n = graph.vertex_count();
        if images.len() != n || inverse_images.len() != n {
            return Err(AutError::Validity(format!(
                "expected {n} images, got {} and {}",
                images.len(),
                inverse_images.len()
            )));
        }
        let map = RaagMap { graph: graph.clone(), images, inverse_images, tags };
        map.validate()?;
        Ok(map)
    }

    fn validate(&self) -> Result<(), AutError> {
        let graph = &self.graph;
        // images ∘ inverse_images and inverse_images ∘ images fix the generators
        for v in 0..graph.vertex_count() {
            let round = self.apply(&self.inverse_images[v].as_word())?;
            if round.letters() != [Letter::new(v, true)] {
                return Err(AutError::NotInverse(graph.label(v).to_owned()));
            }
            let round = self.apply_inverse(&self.images[v].as_word())?;
            if round.letters() != [Letter::new(v, true)] {
                return Err(AutError::NotInverse(graph.label(v).to_owned()));
            }
        }
        // defining relations are preserved
        for (u, v) in graph.edges() {
            let fu = &self.images[u];
            let fv = &self.images[v];
            let comm = multiply_all(
                graph,
                &[fu, fv, &fu.inverse(), &fv.inverse()],
            );
            if !comm.is_identity() {
                return Err(AutError::RelationBroken(format!(
                    "[{}, {}]",
                    graph.label(u),
                    graph.label(v)
                )));
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &GraphRef {
        &self.graph
    }

    pub fn image(&self, v: Vertex) -> &NormalForm {
        &self.images[v]
    }

    pub fn inverse_image(&self, v: Vertex) -> &NormalForm {
        &self.inverse_images[v]
    }

    pub fn tags(&self) -> Option<&[GeneratorKind]> {
        self.tags.as_deref()
    }

    pub fn identity(graph: &GraphRef) -> Self {
        let images: Vec<NormalForm> = (0..graph.vertex_count())
            .map(|v| NormalForm::generator(graph, v).expect("generator"))
            .collect();
        RaagMap {
            graph: graph.clone(),
            images: images.clone(),
            inverse_images: images,
            tags: Some(Vec::new()),
        }
    }

    pub fn is_identity_map(&self) -> bool {
        (0..self.graph.vertex_count())
            .all(|v| self.images[v].letters() == [Letter::new(v, true)])
    }

    /// Substitute images for letters and reduce.
    pub fn apply(&self, w: &Word) -> Result<NormalForm, AutError> {
        if **w.graph() != *self.graph {
            return Err(AutError::AmbientMismatch);
        }
        Ok(self.substitute(w.letters(), &self.images))
    }

    /// Apply the inverse automorphism.
    pub fn apply_inverse(&self, w: &Word) -> Result<NormalForm, AutError> {
        if **w.graph() != *self.graph {
            return Err(AutError::AmbientMismatch);
        }
        Ok(self.substitute(w.letters(), &self.inverse_images))
    }

    fn substitute(&self, letters: &[Letter], table: &[NormalForm]) -> NormalForm {
        let mut factors: Vec<NormalForm> = Vec::with_capacity(letters.len());
        for l in letters {
            let img = &table[l.vertex];
            factors.push(if l.positive { img.clone() } else { img.inverse() });
        }
        let refs: Vec<&NormalForm> = factors.iter().collect();
        multiply_all(&self.graph, &refs)
    }

    pub fn inverse(&self) -> RaagMap {
        RaagMap {
            graph: self.graph.clone(),
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
            tags: self.tags.clone(),
        }
    }

    /// `compose(f, g)` applies `g` first: the result maps `w` to `f(g(w))`.
    pub fn compose(f: &RaagMap, g: &RaagMap) -> Result<RaagMap, AutError> {
        if *f.graph != *g.graph {
            return Err(AutError::AmbientMismatch);
        }
        let graph = f.graph.clone();
        let images: Result<Vec<NormalForm>, AutError> = (0..graph.vertex_count())
            .map(|v| f.apply(&g.images[v].as_word()))
            .collect();
        let inverse_images: Result<Vec<NormalForm>, AutError> = (0..graph.vertex_count())
            .map(|v| g.apply_inverse(&f.inverse_images[v].as_word()))
            .collect();
        let tags = match (&f.tags, &g.tags) {
            (Some(a), Some(b)) => {
                let mut t = b.clone();
                t.extend_from_slice(a);
                Some(t)
            }
            _ => None,
        };
        Ok(RaagMap { graph, images: images?, inverse_images: inverse_images?, tags })
    }

    /// Conjugation by `x`: maps `w` to `x^{-1} w x`.
    pub fn conjugation(graph: &GraphRef, x: &NormalForm) -> RaagMap {
        let xi = x.inverse();
        let images: Vec<NormalForm> = (0..graph.vertex_count())
            .map(|v| {
                let g = NormalForm::generator(graph, v).expect("generator");
                multiply_all(graph, &[&xi, &g, x])
            })
            .collect();
        let inverse_images: Vec<NormalForm> = (0..graph.vertex_count())
            .map(|v| {
                let g = NormalForm::generator(graph, v).expect("generator");
                multiply_all(graph, &[x, &g, &xi])
            })
            .collect();
        RaagMap { graph: graph.clone(), images, inverse_images, tags: Some(Vec::new()) }
    }

    /// The matrix of the induced map on the abelianisation, columns indexed
    /// by generators.
    pub fn abelianized(&self) -> Vec<Vec<i64>> {
        self.images.iter().map(|w| w.abelianization()).collect()
    }
}

/// Inversion of a single generator.
pub fn make_inversion(graph: &GraphRef, v: Vertex) -> Result<RaagMap, AutError> {
    if v >= graph.vertex_count() {
        return Err(GraphError::VertexOutOfRange(v).into());
    }
    let mut images = Vec::new();
    for u in 0..graph.vertex_count() {
        let mut nf = NormalForm::generator(graph, u)?;
        if u == v {
            nf = nf.inverse();
        }
        images.push(nf);
    }
    RaagMap::new(graph, images.clone(), images, Some(vec![GeneratorKind::Inversion]))
}

/// Partial conjugation by `v` of the generators in `component`, which must
/// be a non-empty union of connected components of the graph minus the star
/// of `v`.
pub fn make_partial_conjugation(
    graph: &GraphRef,
    v: Vertex,
    component: &VertexSet,
) -> Result<RaagMap, AutError> {
    if v >= graph.vertex_count() {
        return Err(GraphError::VertexOutOfRange(v).into());
    }
    let star_v = VertexSet::new(graph, &[v])?.star();
    let outside = star_v.complement();
    if component.is_empty() {
        return Err(AutError::Validity("component set is empty".into()));
    }
    if !component.is_subset_of(&outside)? {
        return Err(AutError::Validity(format!(
            "component {:?} is not disjoint from the star of {}",
            component,
            graph.label(v)
        )));
    }
    let is_union = outside
        .components()
        .iter()
        .all(|c| c.intersection(component).unwrap().is_empty() || c.is_subset_of(component).unwrap());
    if !is_union {
        return Err(AutError::Validity(format!(
            "{:?} is not a union of components of the complement of st({})",
            component,
            graph.label(v)
        )));
    }
    let conj = NormalForm::generator(graph, v)?;
    let conj_inv = conj.inverse();
    let mut images = Vec::new();
    let mut inverse_images = Vec::new();
    for u in 0..graph.vertex_count() {
        let g = NormalForm::generator(graph, u)?;
        if component.contains(u) {
            images.push(multiply_all(graph, &[&conj_inv, &g, &conj]));
            inverse_images.push(multiply_all(graph, &[&conj, &g, &conj_inv]));
        } else {
            images.push(g.clone());
            inverse_images.push(g);
        }
    }
    RaagMap::new(
        graph,
        images,
        inverse_images,
        Some(vec![GeneratorKind::PartialConjugation]),
    )
}

/// Transvection `w ↦ w·v`, legal when `lk(w) ⊆ st(v)`. Folds have
/// `lk(w) ⊆ lk(v)`; twists have `v ∈ lk(w)`. The two cases are mutually
/// exclusive and exhaustive.
pub fn make_transvection(graph: &GraphRef, w: Vertex, v: Vertex) -> Result<RaagMap, AutError> {
    if w >= graph.vertex_count() || v >= graph.vertex_count() {
        return Err(GraphError::VertexOutOfRange(w.max(v)).into());
    }
    if w == v {
        return Err(AutError::Validity("transvection needs distinct vertices".into()));
    }
    let lk_w = VertexSet::new(graph, &[w])?.link();
    let st_v = VertexSet::new(graph, &[v])?.star();
    if !lk_w.is_subset_of(&st_v)? {
        return Err(AutError::Validity(format!(
            "lk({}) is not contained in st({})",
            graph.label(w),
            graph.label(v)
        )));
    }
    let kind = if graph.adjacent(v, w) {
        GeneratorKind::Twist
    } else {
        GeneratorKind::Fold
    };
    let gv = NormalForm::generator(graph, v)?;
    let mut images = Vec::new();
    let mut inverse_images = Vec::new();
    for u in 0..graph.vertex_count() {
        let g = NormalForm::generator(graph, u)?;
        if u == w {
            images.push(multiply_all(graph, &[&g, &gv]));
            inverse_images.push(multiply_all(graph, &[&g, &gv.inverse()]));
        } else {
            images.push(g.clone());
            inverse_images.push(g);
        }
    }
    RaagMap::new(graph, images, inverse_images, Some(vec![kind]))
}

/// Graph symmetry induced by a permutation of the vertices preserving
/// adjacency.
pub fn make_graph_symmetry(graph: &GraphRef, perm: &[Vertex]) -> Result<RaagMap, AutError> {
    let n = graph.vertex_count();
    if perm.len() != n {
        return Err(AutError::Validity("permutation has wrong length".into()));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(AutError::Validity("not a permutation".into()));
        }
        seen[p] = true;
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if graph.adjacent(u, v) != graph.adjacent(perm[u], perm[v]) {
                return Err(AutError::Validity(format!(
                    "permutation does not preserve the edge relation at ({}, {})",
                    graph.label(u),
                    graph.label(v)
                )));
            }
        }
    }
    let mut inv_perm = vec![0usize; n];
    for (u, &p) in perm.iter().enumerate() {
        inv_perm[p] = u;
    }
    let images: Result<Vec<NormalForm>, AutError> = (0..n)
        .map(|u| NormalForm::generator(graph, perm[u]).map_err(Into::into))
        .collect();
    let inverse_images: Result<Vec<NormalForm>, AutError> = (0..n)
        .map(|u| NormalForm::generator(graph, inv_perm[u]).map_err(Into::into))
        .collect();
    RaagMap::new(
        graph,
        images?,
        inverse_images?,
        Some(vec![GeneratorKind::GraphSymmetry]),
    )
}

/// Outcome of the inner-ness decision.
///
/// Bounded coset search: a witness `x` with `f = c(x)` satisfies, for every
/// generator `v`, `x ∈ C(v)·g_v` where `g_v` is any conjugator from `v` to
/// `f(v)` and `C(v)` is generated by the star of `v`. The search enumerates
/// candidates from the star coset of one generator and verifies against all
/// others. Definite "not inner" answers come from the abelianisation or a
/// failed conjugacy; an exhausted bound is reported as inconclusive.
pub fn is_inner(f: &RaagMap) -> Result<Option<NormalForm>, AutError> {
    is_inner_bounded(f, default_radius(f))
}

/// Total image length; the default inner-ness search radius.
pub fn default_radius(f: &RaagMap) -> usize {
    let total: usize = (0..f.graph().vertex_count())
        .map(|v| f.image(v).len())
        .sum();
    total.max(1)
}

pub fn is_inner_bounded(f: &RaagMap, radius: usize) -> Result<Option<NormalForm>, AutError> {
    let graph = f.graph().clone();
    let n = graph.vertex_count();
    if n == 0 || f.is_identity_map() {
        return Ok(Some(NormalForm::identity(&graph)));
    }
    // inner maps act trivially on the abelianisation
    let mat = f.abelianized();
    for (v, col) in mat.iter().enumerate() {
        for (u, &entry) in col.iter().enumerate() {
            let expect = if u == v { 1 } else { 0 };
            if entry != expect {
                return Ok(None);
            }
        }
    }
    // per-generator conjugacy witnesses
    let mut witnesses = Vec::with_capacity(n);
    for v in 0..n {
        let gen = Word::generator(&graph, v)?;
        match is_conjugate(&gen, &f.image(v).as_word())? {
            Some(g) => witnesses.push(g),
            None => return Ok(None),
        }
    }
    let check = |x: &NormalForm| -> bool {
        (0..n).all(|v| {
            let g = NormalForm::generator(&graph, v).expect("generator");
            conjugate(&g, x) == *f.image(v)
        })
    };
    // cheap candidates first
    for g in &witnesses {
        if check(g) {
            return Ok(Some(g.clone()));
        }
    }
    // enumerate the centraliser coset of the generator with the smallest star
    let base = (0..n)
        .min_by_key(|&v| {
            let star = VertexSet::new(&graph, &[v]).expect("vertex").star();
            (star.len(), v)
        })
        .expect("nonempty graph");
    let star = VertexSet::new(&graph, &[base])?.star();
    let g_base = &witnesses[base];
    for c in normal_forms_up_to(&graph, &star, radius) {
        let x = crate::words::multiply(&c, g_base);
        if check(&x) {
            return Ok(Some(x));
        }
    }
    Err(AutError::Inconclusive(radius))
}

/// Do two automorphisms agree in the outer group?
pub fn outer_equal(f: &RaagMap, g: &RaagMap) -> Result<bool, AutError> {
    if f == g {
        return Ok(true);
    }
    let diff = RaagMap::compose(f, &g.inverse())?;
    Ok(is_inner(&diff)?.is_some())
}

/// Membership flags readable from a map's factorisation tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UntwistedFlags {
    /// Generated without graph symmetries.
    pub in_aut0: Option<bool>,
    /// Generated without graph symmetries and without twists.
    pub in_uaut0: Option<bool>,
}

/// Classify a tagged map; untagged composites report unknown flags.
pub fn classify_untwisted(f: &RaagMap) -> UntwistedFlags {
    match f.tags() {
        None => UntwistedFlags { in_aut0: None, in_uaut0: None },
        Some(tags) => {
            let has_symmetry = tags.contains(&GeneratorKind::GraphSymmetry);
            let has_twist = tags.contains(&GeneratorKind::Twist);
            UntwistedFlags {
                in_aut0: Some(!has_symmetry),
                in_uaut0: Some(!has_symmetry && !has_twist),
            }
        }
    }
}

/// All valid single-generator automorphisms of a graph, in a deterministic
/// order. Useful for exhaustive taxonomy tests and for sampling groups.
pub fn enumerate_generators(graph: &GraphRef) -> Vec<RaagMap> {
    let n = graph.vertex_count();
    let mut out = Vec::new();
    for v in 0..n {
        out.push(make_inversion(graph, v).expect("inversion is always valid"));
    }
    for v in 0..n {
        let star = VertexSet::new(graph, &[v]).expect("vertex").star();
        let comps = star.complement().components();
        // all non-empty unions of components
        for mask in 1u32..(1 << comps.len()) {
            let mut c = VertexSet::empty(graph);
            for (i, comp) in comps.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    c = c.union(comp).expect("same graph");
                }
            }
            if let Ok(m) = make_partial_conjugation(graph, v, &c) {
                out.push(m);
            }
        }
    }
    for w in 0..n {
        for v in 0..n {
            if v != w {
                if let Ok(m) = make_transvection(graph, w, v) {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Serialisable form of an automorphism.
#[derive(Debug, Serialize, Deserialize)]
pub struct RaagMapJson {
    pub images: BTreeMap<String, String>,
    pub inverse_images: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tag: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tags: Option<Vec<GeneratorKind>>,
}

impl RaagMap {
    pub fn to_json(&self) -> RaagMapJson {
        let graph = &self.graph;
        let images = (0..graph.vertex_count())
            .map(|v| (graph.label(v).to_owned(), self.images[v].format()))
            .collect();
        let inverse_images = (0..graph.vertex_count())
            .map(|v| (graph.label(v).to_owned(), self.inverse_images[v].format()))
            .collect();
        let tag = self.tags.as_ref().map(|t| match t.as_slice() {
            [] => "identity".to_owned(),
            [k] => serde_json::to_value(k)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_else(|| "composite".to_owned()),
            _ => "composite".to_owned(),
        });
        RaagMapJson { images, inverse_images, tag, tags: self.tags.clone() }
    }

    pub fn from_json(graph: &GraphRef, json: &RaagMapJson) -> Result<Self, AutError> {
        let mut images = Vec::new();
        let mut inverse_images = Vec::new();
        for v in 0..graph.vertex_count() {
            let label = graph.label(v);
            let img = json
                .images
                .get(label)
                .ok_or_else(|| AutError::Validity(format!("missing image for {label}")))?;
            let inv = json
                .inverse_images
                .get(label)
                .ok_or_else(|| AutError::Validity(format!("missing inverse image for {label}")))?;
            images.push(NormalForm::parse(graph, img)?);
            inverse_images.push(NormalForm::parse(graph, inv)?);
        }
        let tags = json.tags.clone();
        RaagMap::new(graph, images, inverse_images, tags)
    }
}

/// Direct evaluation of the constructor preconditions, used by the
/// exhaustive rejection tests.
pub fn transvection_is_valid(graph: &GraphRef, w: Vertex, v: Vertex) -> bool {
    if w == v || w >= graph.vertex_count() || v >= graph.vertex_count() {
        return false;
    }
    let lk_w = VertexSet::new(graph, &[w]).expect("vertex").link();
    let st_v = VertexSet::new(graph, &[v]).expect("vertex").star();
    lk_w.is_subset_of(&st_v).expect("same graph")
}

pub fn partial_conjugation_is_valid(graph: &GraphRef, v: Vertex, c: &VertexSet) -> bool {
    if v >= graph.vertex_count() || c.is_empty() {
        return false;
    }
    let outside = VertexSet::new(graph, &[v]).expect("vertex").star().complement();
    if !c.is_subset_of(&outside).expect("same graph") {
        return false;
    }
    let mut covered = HashSet::new();
    for comp in outside.components() {
        let inter = comp.intersection(c).expect("same graph");
        if !inter.is_empty() {
            if !comp.is_subset_of(c).expect("same graph") {
                return false;
            }
            covered.insert(comp.bits());
        }
    }
    let union: u32 = covered.iter().fold(0, |a, b| a | b);
    union == c.bits()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimplicialGraph;
    use std::sync::Arc;

    fn graph(labels: &[&str], edges: &[(&str, &str)]) -> GraphRef {
        Arc::new(SimplicialGraph::new(labels, edges).unwrap())
    }

    #[test]
    fn transvection_on_edge_is_twist() {
        let g = graph(&["a", "b"], &[("a", "b")]);
        let t = make_transvection(&g, 0, 1).unwrap();
        assert_eq!(t.tags(), Some(&[GeneratorKind::Twist][..]));
        assert_eq!(t.image(0).format(), "a b");
    }

    #[test]
    fn transvection_on_square_is_fold() {
        let g = graph(
            &["v1", "v2", "v3", "v4"],
            &[("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")],
        );
        let t = make_transvection(&g, 0, 2).unwrap();
        assert_eq!(t.tags(), Some(&[GeneratorKind::Fold][..]));
    }

    #[test]
    fn partial_conjugation_needs_components() {
        let g = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let c = VertexSet::from_labels(&g, &["a"]).unwrap();
        // st(b) is the whole graph, so nothing lies outside it
        assert!(make_partial_conjugation(&g, 1, &c).is_err());
    }

    #[test]
    fn partial_conjugation_on_path4() {
        let g = graph(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")]);
        let c = VertexSet::from_labels(&g, &["a"]).unwrap();
        let m = make_partial_conjugation(&g, 2, &c).unwrap();
        assert_eq!(m.image(0).format(), "c^-1 a c");
        assert_eq!(m.image(3).format(), "d");
    }

    #[test]
    fn apply_and_compose() {
        let g = graph(&["a", "b"], &[]);
        let inv = make_inversion(&g, 0).unwrap();
        let w = Word::parse(&g, "a b").unwrap();
        assert_eq!(inv.apply(&w).unwrap().format(), "a^-1 b");

        let id = RaagMap::compose(&inv, &inv.inverse()).unwrap();
        assert!(id.is_identity_map());

        let fold = make_transvection(&g, 0, 1);
        // free group: lk(a) = ∅ ⊆ st(b), fold a ↦ ab
        let fold = fold.unwrap();
        assert_eq!(fold.tags(), Some(&[GeneratorKind::Fold][..]));
        let w = Word::parse(&g, "a^-1").unwrap();
        assert_eq!(fold.apply(&w).unwrap().format(), "b^-1 a^-1");
    }

    #[test]
    fn inner_detection() {
        let g = graph(&["a", "b"], &[]);
        let a = NormalForm::parse(&g, "a").unwrap();
        let c = RaagMap::conjugation(&g, &a);
        let witness = is_inner(&c).unwrap().expect("inner");
        assert_eq!(witness, a);

        let inv = make_inversion(&g, 0).unwrap();
        assert!(is_inner(&inv).unwrap().is_none());
    }

    #[test]
    fn inner_commuting_conjugation_is_identity() {
        let g = graph(&["a", "b"], &[("a", "b")]);
        let b = NormalForm::parse(&g, "b").unwrap();
        let c = RaagMap::conjugation(&g, &b);
        // conjugation by b fixes everything since the group is abelian
        assert!(c.is_identity_map());
        let witness = is_inner(&c).unwrap().expect("inner");
        assert!(witness.is_identity());
    }

    #[test]
    fn outer_equality_mod_inner() {
        let g = graph(&["a", "b"], &[]);
        let fold = make_transvection(&g, 0, 1).unwrap();
        let x = NormalForm::parse(&g, "b a").unwrap();
        let twisted = RaagMap::compose(&RaagMap::conjugation(&g, &x), &fold).unwrap();
        assert!(outer_equal(&fold, &twisted).unwrap());
        let inv = make_inversion(&g, 0).unwrap();
        assert!(!outer_equal(&fold, &inv).unwrap());
    }

    #[test]
    fn classification_flags() {
        let path = graph(&["a", "b"], &[("a", "b")]);
        let twist = make_transvection(&path, 0, 1).unwrap();
        let flags = classify_untwisted(&twist);
        assert_eq!(flags.in_uaut0, Some(false));
        assert_eq!(flags.in_aut0, Some(true));

        let square = graph(
            &["v1", "v2", "v3", "v4"],
            &[("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")],
        );
        let fold = make_transvection(&square, 0, 2).unwrap();
        assert_eq!(classify_untwisted(&fold).in_uaut0, Some(true));

        let sym = make_graph_symmetry(&path, &[1, 0]).unwrap();
        assert_eq!(classify_untwisted(&sym).in_aut0, Some(false));
    }

    #[test]
    fn constructors_reject_exactly_invalid_parameters() {
        // exhaustive over all graphs with ≤ 4 vertices
        for n in 1..=4usize {
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
                for w in 0..n {
                    for v in 0..n {
                        if v == w {
                            continue;
                        }
                        let expect = transvection_is_valid(&g, w, v);
                        assert_eq!(make_transvection(&g, w, v).is_ok(), expect);
                        if expect {
                            let t = make_transvection(&g, w, v).unwrap();
                            // fold/twist dichotomy
                            let lk_w = VertexSet::new(&g, &[w]).unwrap().link();
                            let lk_v = VertexSet::new(&g, &[v]).unwrap().link();
                            let fold = lk_w.is_subset_of(&lk_v).unwrap();
                            let twist = g.adjacent(v, w);
                            assert!(fold ^ twist, "dichotomy on {g:?} {w} {v}");
                            let expected_kind =
                                if twist { GeneratorKind::Twist } else { GeneratorKind::Fold };
                            assert_eq!(t.tags(), Some(&[expected_kind][..]));
                        }
                    }
                    let full = VertexSet::full(&g);
                    for c in full.subsets() {
                        let expect = partial_conjugation_is_valid(&g, w, &c);
                        assert_eq!(
                            make_partial_conjugation(&g, w, &c).is_ok(),
                            expect,
                            "pc {g:?} {w} {c:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn no_twists_when_links_are_not_cones() {
        // exhaustive over graphs with ≤ 4 vertices: if no vertex link is a
        // cone, no valid twist exists
        for n in 1..=4usize {
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
                let links_non_cone = (0..n).all(|v| {
                    let lk = VertexSet::new(&g, &[v]).unwrap().link();
                    !lk.is_cone()
                });
                if links_non_cone {
                    for w in 0..n {
                        for v in 0..n {
                            if v != w && transvection_is_valid(&g, w, v) {
                                assert!(!g.adjacent(v, w), "twist on {g:?}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn generators_kill_relators() {
        let g = graph(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
        );
        for m in enumerate_generators(&g) {
            for (u, v) in g.graph_edges_for_test() {
                let w = Word::parse(&g, &format!(
                    "{} {} {}^-1 {}^-1",
                    g.label(u),
                    g.label(v),
                    g.label(u),
                    g.label(v)
                ))
                .unwrap();
                assert!(m.apply(&w).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let g = graph(&["a", "b"], &[]);
        let fold = make_transvection(&g, 0, 1).unwrap();
        let j = fold.to_json();
        let back = RaagMap::from_json(&g, &j).unwrap();
        assert_eq!(fold, back);
        assert_eq!(back.tags(), Some(&[GeneratorKind::Fold][..]));
    }
}

#[cfg(test)]
impl crate::graph::SimplicialGraph {
    fn graph_edges_for_test(&self) -> Vec<(Vertex, Vertex)> {
        self.edges()
    }
}
