//! The system of invariant subgraphs of a finite outer action, its closure
//! laws, and the assembly subgraphs used by the realisation pipelines.
//!
//! A subgraph Δ belongs to the system when every element of the group sends
//! the special subgroup on Δ to a conjugate of itself. The per-element test
//! follows the conjugate-subgroups proposition: pick a word in the subgroup
//! whose image abelianises to the all-ones vector on Δ, cyclically reduce
//! its image to locate the conjugating element, and verify that the
//! adjusted automorphism maps the generators of Δ into the subgroup.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut::{AutError, RaagMap};
use crate::graph::{GraphError, GraphRef, VertexSet};
use crate::group::FiniteOuterGroup;
use crate::words::{
    cyclically_reduce_nf, in_special_subgroup, multiply_all, normal_forms_up_to,
    word_from_exponents, WordError,
};

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error("graph has {0} vertices, above the subset-enumeration bound {1}")]
    VertexBoundExceeded(usize, usize),
    #[error("no proper member of the system contains the seed subgraph")]
    NoProperSupergraph,
    #[error("maximal member is ambiguous; candidates: {0:?}")]
    AmbiguousMaximal(Vec<Vec<String>>),
    #[error("maximal member is neither a union of components nor properly contains all but one component")]
    InvalidMaximal,
    #[error("the seed subgraph is not a member of the system")]
    SeedNotMember,
}

#[derive(Debug, Clone, Copy)]
pub struct InvariantOptions {
    /// Reduced length bound for the brute-force conjugator fallback.
    pub conjugator_bound: usize,
    /// Largest vertex count for which full subset enumeration is attempted.
    pub vertex_bound: usize,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions { conjugator_bound: 6, vertex_bound: 12 }
    }
}

/// A set of induced subgraphs of a common ambient graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSystem {
    graph: GraphRef,
    members: BTreeSet<u32>,
}

impl InvariantSystem {
    pub fn new(graph: &GraphRef, members: impl IntoIterator<Item = VertexSet>) -> Self {
        let members = members.into_iter().map(|m| m.bits()).collect();
        InvariantSystem { graph: graph.clone(), members }
    }

    pub fn graph(&self) -> &GraphRef {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &VertexSet) -> bool {
        self.members.contains(&s.bits())
    }

    pub fn members(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.members.iter().map(|&b| VertexSet::from_bits(&self.graph, b))
    }

    pub fn member_bits(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }

    /// Members maximal with respect to inclusion among proper subgraphs.
    pub fn maximal_proper_members(&self) -> Vec<VertexSet> {
        let full = VertexSet::full(&self.graph).bits();
        let proper: Vec<u32> = self.members.iter().copied().filter(|&b| b != full).collect();
        proper
            .iter()
            .copied()
            .filter(|&b| !proper.iter().any(|&c| c != b && b & !c == 0))
            .map(|b| VertexSet::from_bits(&self.graph, b))
            .collect()
    }
}

/// Does `h` send the special subgroup on `delta` into a conjugate of it?
/// Sound and complete for automorphisms; the degenerate-support escape is
/// kept for safety and falls back to the bounded conjugator search.
fn maps_into_conjugate(
    h: &RaagMap,
    delta: &VertexSet,
    opts: &InvariantOptions,
) -> Result<bool, InvariantError> {
    let graph = h.graph().clone();
    if delta.is_empty() || delta.is_full() {
        return Ok(true);
    }
    // abelianised necessity: images of Δ-generators abelianise into Δ
    let mat = h.abelianized();
    for v in delta.iter() {
        for u in 0..graph.vertex_count() {
            if !delta.contains(u) && mat[v][u] != 0 {
                return Ok(false);
            }
        }
    }
    // solve the Δ-block for a word abelianising to all-ones
    let cols: Vec<usize> = delta.iter().collect();
    let k = cols.len();
    let mut block = vec![vec![0i128; k]; k];
    for (ci, &v) in cols.iter().enumerate() {
        for (ri, &u) in cols.iter().enumerate() {
            block[ri][ci] = mat[v][u] as i128;
        }
    }
    let ones = vec![1i128; k];
    let x = match solve_integer(&block, &ones) {
        Some(x) => x,
        None => return Ok(false),
    };
    let mut exponents = vec![0i64; graph.vertex_count()];
    for (ci, &v) in cols.iter().enumerate() {
        exponents[v] = x[ci] as i64;
    }
    let w = word_from_exponents(&graph, delta, &exponents)?;
    let hw = h.apply(&w)?;
    let (y, core) = cyclically_reduce_nf(&hw);
    let support = core.support();
    if support != *delta {
        if support.is_subset_of(delta)? {
            // degenerate support; decide by the bounded oracle instead
            return bounded_conjugate_containment(h, delta, opts.conjugator_bound);
        }
        return Ok(false);
    }
    // ψ = c(y^{-1}) ∘ h satisfies ψ(w) = core; it must keep Δ inside itself
    let y_inv = y.inverse();
    for v in delta.iter() {
        let img = multiply_all(&graph, &[&y, h.image(v), &y_inv]);
        if !in_special_subgroup(&img, delta)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Brute-force containment check: search all conjugators up to the given
/// reduced length.
pub fn bounded_conjugate_containment(
    h: &RaagMap,
    delta: &VertexSet,
    bound: usize,
) -> Result<bool, InvariantError> {
    let graph = h.graph().clone();
    let full = VertexSet::full(&graph);
    for g in normal_forms_up_to(&graph, &full, bound) {
        let g_inv = g.inverse();
        let ok = delta.iter().all(|v| {
            let img = multiply_all(&graph, &[&g, h.image(v), &g_inv]);
            in_special_subgroup(&img, delta).unwrap_or(false)
        });
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Is the subgraph invariant under the whole group, testing each stored
/// class representative and its stored inverse?
pub fn is_invariant(
    group: &FiniteOuterGroup,
    delta: &VertexSet,
    opts: &InvariantOptions,
) -> Result<bool, InvariantError> {
    for i in 0..group.order() {
        if !maps_into_conjugate(group.element(i), delta, opts)? {
            return Ok(false);
        }
        if !maps_into_conjugate(&group.inverse_map(i), delta, opts)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Compute the full invariant system by exhausting all induced subgraphs.
pub fn compute_invariant_system(
    group: &FiniteOuterGroup,
    opts: &InvariantOptions,
) -> Result<InvariantSystem, InvariantError> {
    let graph = group.graph().clone();
    let n = graph.vertex_count();
    if n > opts.vertex_bound {
        return Err(InvariantError::VertexBoundExceeded(n, opts.vertex_bound));
    }
    let subsets: Vec<u32> = VertexSet::full(&graph).subsets().map(|s| s.bits()).collect();
    let members: Result<Vec<Option<u32>>, InvariantError> = subsets
        .par_iter()
        .map(|&bits| {
            let s = VertexSet::from_bits(&graph, bits);
            Ok(is_invariant(group, &s, opts)?.then_some(bits))
        })
        .collect();
    let members: BTreeSet<u32> = members?.into_iter().flatten().collect();
    Ok(InvariantSystem { graph, members })
}

/// One closure-law check in a verification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub status: String,
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosureReport {
    pub checks: Vec<CheckResult>,
}

impl ClosureReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == "pass")
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| c.status != "pass").collect()
    }
}

fn set_name(s: &VertexSet) -> String {
    format!("{{{}}}", s.label_list().join(","))
}

/// Verify the closure laws of a computed system. `u0_safe` asserts that the
/// group avoided twists and graph symmetries, enabling the link-preserving
/// check.
pub fn verify_closure(system: &InvariantSystem, u0_safe: bool) -> ClosureReport {
    let graph = system.graph().clone();
    let full = VertexSet::full(&graph);
    let mut checks = Vec::new();
    let mut push = |name: &str, witnesses: Vec<String>| {
        checks.push(CheckResult {
            check: name.to_owned(),
            status: if witnesses.is_empty() { "pass" } else { "fail" }.to_owned(),
            witnesses,
        });
    };

    // the empty graph and the ambient graph are always invariant
    {
        let mut w = Vec::new();
        if !system.contains(&VertexSet::empty(&graph)) {
            w.push(set_name(&VertexSet::empty(&graph)));
        }
        if !system.contains(&full) {
            w.push(set_name(&full));
        }
        push("contains-empty-and-ambient", w);
    }

    // pairwise intersections stay in the system
    {
        let mut w = Vec::new();
        let members: Vec<VertexSet> = system.members().collect();
        for a in &members {
            for b in &members {
                let i = a.intersection(b).expect("same graph");
                if !system.contains(&i) {
                    w.push(format!("{} ∩ {} = {}", set_name(a), set_name(b), set_name(&i)));
                }
            }
        }
        push("intersection-closed", w);
    }

    // unions are in the system when lk(Δ∩Σ) ⊆ st(Δ)
    {
        let mut w = Vec::new();
        let members: Vec<VertexSet> = system.members().collect();
        for a in &members {
            for b in &members {
                let i = a.intersection(b).expect("same graph");
                if i.link().is_subset_of(&a.star()).expect("same graph") {
                    let u = a.union(b).expect("same graph");
                    if !system.contains(&u) {
                        w.push(format!(
                            "{} ∪ {} = {}",
                            set_name(a),
                            set_name(b),
                            set_name(&u)
                        ));
                    }
                }
            }
        }
        push("conditional-union-closed", w);
    }

    // connected components with at least one edge
    {
        let mut w = Vec::new();
        for comp in full.components() {
            let has_edge = comp
                .iter()
                .any(|u| comp.iter().any(|v| graph.adjacent(u, v)));
            if has_edge && !system.contains(&comp) {
                w.push(set_name(&comp));
            }
        }
        push("components-with-edge", w);
    }

    // extended stars of all induced subgraphs
    {
        let mut w = Vec::new();
        for s in full.subsets() {
            let es = s.extended_star();
            if !system.contains(&es) {
                w.push(format!("ŝt{} = {}", set_name(&s), set_name(&es)));
            }
        }
        push("extended-stars", w);
    }

    // links of non-cones
    {
        let mut w = Vec::new();
        for s in full.subsets() {
            if !s.is_empty() && !s.is_cone() {
                let lk = s.link();
                if !system.contains(&lk) {
                    w.push(format!("lk{} = {}", set_name(&s), set_name(&lk)));
                }
            }
        }
        push("links-of-non-cones", w);
    }

    // stars of members
    {
        let mut w = Vec::new();
        for m in system.members() {
            let st = m.star();
            if !system.contains(&st) {
                w.push(format!("st{} = {}", set_name(&m), set_name(&st)));
            }
        }
        push("stars-of-members", w);
    }

    // all links, when the group avoids twists and symmetries
    if u0_safe {
        let mut w = Vec::new();
        for s in full.subsets() {
            let lk = s.link();
            if !system.contains(&lk) {
                w.push(format!("lk{} = {}", set_name(&s), set_name(&lk)));
            }
        }
        push("link-preserving", w);
    }

    // boundary law on maximal proper members
    {
        let mut w = Vec::new();
        for sigma in system.maximal_proper_members() {
            let outside = sigma.complement();
            for v in sigma.boundary().iter() {
                let lk = VertexSet::new(&graph, &[v]).expect("vertex").link();
                if !outside.is_subset_of(&lk).expect("same graph") {
                    w.push(format!(
                        "maximal {} boundary vertex {}",
                        set_name(&sigma),
                        graph.label(v)
                    ));
                }
            }
        }
        push("boundary-lemma", w);
    }

    ClosureReport { checks }
}

/// Which of the two assembly cases the chosen maximal member falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssemblyCase {
    /// The maximal member is a union of connected components.
    UnionOfComponents,
    /// The maximal member properly contains all but one component.
    ProperlyContainsAllButOne,
}

/// The subgraphs driving an assembly step.
#[derive(Debug, Clone)]
pub struct AssemblyPlan {
    pub gamma_prime: VertexSet,
    pub theta: VertexSet,
    pub theta_bar: VertexSet,
    pub delta: VertexSet,
    pub delta_prime: VertexSet,
    pub s_system: InvariantSystem,
    pub s_gamma_prime: InvariantSystem,
    pub case: AssemblyCase,
}

/// Find the maximal proper member of the system containing `xi` and derive
/// the assembly subgraphs. Ties are reported, not resolved.
pub fn assembly_plan(
    system: &InvariantSystem,
    xi: &VertexSet,
) -> Result<AssemblyPlan, InvariantError> {
    if !system.contains(xi) {
        return Err(InvariantError::SeedNotMember);
    }
    let candidates: Vec<VertexSet> = system
        .maximal_proper_members()
        .into_iter()
        .filter(|m| xi.is_subset_of(m).unwrap_or(false))
        .collect();
    match candidates.len() {
        0 => Err(InvariantError::NoProperSupergraph),
        1 => assembly_plan_with(system, &candidates[0]),
        _ => Err(InvariantError::AmbiguousMaximal(
            candidates.iter().map(|c| c.label_list()).collect(),
        )),
    }
}

/// Deterministic variant: on ambiguity take the lexicographically least
/// candidate by membership bits.
pub fn assembly_plan_lex(
    system: &InvariantSystem,
    xi: &VertexSet,
) -> Result<AssemblyPlan, InvariantError> {
    match assembly_plan(system, xi) {
        Err(InvariantError::AmbiguousMaximal(_)) => {
            let mut candidates: Vec<VertexSet> = system
                .maximal_proper_members()
                .into_iter()
                .filter(|m| xi.is_subset_of(m).unwrap_or(false))
                .collect();
            candidates.sort();
            assembly_plan_with(system, &candidates[0])
        }
        other => other,
    }
}

/// Build the plan for an explicitly chosen maximal member.
pub fn assembly_plan_with(
    system: &InvariantSystem,
    gamma_prime: &VertexSet,
) -> Result<AssemblyPlan, InvariantError> {
    let graph = system.graph().clone();
    let theta = gamma_prime.complement();
    let theta_bar = theta.union(&gamma_prime.boundary())?;
    let case = if gamma_prime.is_union_of_components() {
        AssemblyCase::UnionOfComponents
    } else {
        let comps = VertexSet::full(&graph).components();
        let properly_contains_all_but_one = comps.iter().any(|c| {
            let others = VertexSet::full(&graph).difference(c).expect("same graph");
            others.is_subset_of(gamma_prime).unwrap_or(false) && others != *gamma_prime
        });
        if !properly_contains_all_but_one {
            return Err(InvariantError::InvalidMaximal);
        }
        AssemblyCase::ProperlyContainsAllButOne
    };
    let s_members: Vec<VertexSet> = system
        .members()
        .filter(|m| theta_bar.is_subset_of(m).unwrap_or(false))
        .collect();
    let s_system = InvariantSystem::new(&graph, s_members.clone());
    let s_gamma: Vec<VertexSet> = s_members
        .iter()
        .map(|m| m.intersection(gamma_prime).expect("same graph"))
        .collect();
    let s_gamma_prime = InvariantSystem::new(&graph, s_gamma.clone());
    let mut delta = gamma_prime.clone();
    for m in &s_gamma {
        delta = delta.intersection(m)?;
    }
    let mut delta_prime = gamma_prime.clone();
    for m in &s_gamma {
        let st1 = m.star().intersection(gamma_prime)?;
        delta_prime = delta_prime.intersection(&st1)?;
    }
    Ok(AssemblyPlan {
        gamma_prime: gamma_prime.clone(),
        theta,
        theta_bar,
        delta,
        delta_prime,
        s_system,
        s_gamma_prime,
        case,
    })
}

/// A conjugating word `y` such that `c(y^{-1}) ∘ h` maps the special
/// subgroup on `delta` into itself; `None` when the subgroup is not sent to
/// a conjugate of itself.
fn restriction_conjugator(
    h: &RaagMap,
    delta: &VertexSet,
) -> Result<Option<crate::words::NormalForm>, InvariantError> {
    let graph = h.graph().clone();
    if delta.is_empty() {
        return Ok(Some(crate::words::NormalForm::identity(&graph)));
    }
    let mat = h.abelianized();
    for v in delta.iter() {
        for u in 0..graph.vertex_count() {
            if !delta.contains(u) && mat[v][u] != 0 {
                return Ok(None);
            }
        }
    }
    let cols: Vec<usize> = delta.iter().collect();
    let k = cols.len();
    let mut block = vec![vec![0i128; k]; k];
    for (ci, &v) in cols.iter().enumerate() {
        for (ri, &u) in cols.iter().enumerate() {
            block[ri][ci] = mat[v][u] as i128;
        }
    }
    let x = match solve_integer(&block, &vec![1i128; k]) {
        Some(x) => x,
        None => return Ok(None),
    };
    let mut exponents = vec![0i64; graph.vertex_count()];
    for (ci, &v) in cols.iter().enumerate() {
        exponents[v] = x[ci] as i64;
    }
    let w = word_from_exponents(&graph, delta, &exponents)?;
    let (y, core) = cyclically_reduce_nf(&h.apply(&w)?);
    if core.support() != *delta {
        return Ok(None);
    }
    let y_inv = y.inverse();
    for v in delta.iter() {
        let img = multiply_all(&graph, &[&y, h.image(v), &y_inv]);
        if !in_special_subgroup(&img, delta)? {
            return Ok(None);
        }
    }
    Ok(Some(y))
}

/// The induced outer action on an invariant subgraph: for each class pick a
/// representative preserving the special subgroup and restrict it to the
/// induced graph. The multiplication table carries over unchanged.
pub fn restrict_outer_group(
    group: &FiniteOuterGroup,
    delta: &VertexSet,
) -> Result<FiniteOuterGroup, InvariantError> {
    use crate::words::{transport, NormalForm};
    let graph = group.graph().clone();
    let induced: GraphRef = std::sync::Arc::new(delta.induced_graph());
    let substitute = |images: &[NormalForm], w: &NormalForm| -> NormalForm {
        let factors: Vec<NormalForm> = w
            .letters()
            .iter()
            .map(|l| {
                if l.positive {
                    images[l.vertex].clone()
                } else {
                    images[l.vertex].inverse()
                }
            })
            .collect();
        let refs: Vec<&NormalForm> = factors.iter().collect();
        crate::words::multiply_all(&induced, &refs)
    };
    let restrict_one = |h: &RaagMap| -> Result<Vec<NormalForm>, InvariantError> {
        let y = restriction_conjugator(h, delta)?.ok_or(InvariantError::SeedNotMember)?;
        let y_inv = y.inverse();
        let mut images = Vec::new();
        for v in delta.iter() {
            let img = multiply_all(&graph, &[&y, h.image(v), &y_inv]);
            images.push(transport(&img, &induced)?);
        }
        Ok(images)
    };
    let mut elements = Vec::with_capacity(group.order());
    for i in 0..group.order() {
        let fwd = restrict_one(group.element(i))?;
        let bwd = restrict_one(&group.inverse_map(i))?;
        // fwd ∘ bwd represents the trivial outer class, so it is the
        // conjugation by some z; then fwd^{-1} = bwd ∘ c(z^{-1})
        let round: Vec<NormalForm> = (0..induced.vertex_count())
            .map(|v| substitute(&fwd, &bwd[v]))
            .collect();
        let z = find_inner_witness(&induced, &round)?;
        let z_inv = z.inverse();
        let inverse_images: Vec<NormalForm> = (0..induced.vertex_count())
            .map(|v| {
                let g = NormalForm::generator(&induced, v).expect("generator");
                // c(z^{-1}) sends v to z v z^{-1}
                let conj = crate::words::multiply_all(&induced, &[&z, &g, &z_inv]);
                substitute(&bwd, &conj)
            })
            .collect();
        let tags = group.element(i).tags().map(|t| t.to_vec());
        elements.push(RaagMap::new(&induced, fwd, inverse_images, tags)?);
    }
    let json = crate::group::FiniteOuterGroupJson {
        elements: elements.iter().map(|e| e.to_json()).collect(),
        table: group.table().to_vec(),
        inverses: (0..group.order()).map(|i| group.inverse(i)).collect(),
    };
    FiniteOuterGroup::from_json(&induced, &json).map_err(|_| InvariantError::SeedNotMember)
}

/// Witness for an inner map given only its images, via per-generator
/// conjugacy and the centraliser coset search.
fn find_inner_witness(
    graph: &GraphRef,
    images: &[crate::words::NormalForm],
) -> Result<crate::words::NormalForm, InvariantError> {
    use crate::words::{conjugate, is_conjugate, NormalForm, Word};
    let n = graph.vertex_count();
    let check = |x: &NormalForm| -> bool {
        (0..n).all(|v| {
            let g = NormalForm::generator(graph, v).expect("generator");
            conjugate(&g, x) == images[v]
        })
    };
    let mut radius = 1usize;
    for v in 0..n {
        radius += images[v].len();
        let gen = Word::generator(graph, v)?;
        if let Some(g) = is_conjugate(&gen, &images[v].as_word())? {
            if check(&g) {
                return Ok(g);
            }
        }
    }
    let base = 0usize;
    let star = VertexSet::new(graph, &[base])?.star();
    let gen = Word::generator(graph, base)?;
    let g_base = is_conjugate(&gen, &images[base].as_word())?
        .ok_or(InvariantError::SeedNotMember)?;
    for c in normal_forms_up_to(graph, &star, radius) {
        let x = crate::words::multiply(&c, &g_base);
        if check(&x) {
            return Ok(x);
        }
    }
    Err(InvariantError::SeedNotMember)
}

/// Exact solve of a square integer system by Cramer's rule with Bareiss
/// determinants; `None` when no integer solution exists.
fn solve_integer(matrix: &[Vec<i128>], target: &[i128]) -> Option<Vec<i128>> {
    let n = matrix.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let det = bareiss_determinant(matrix.to_vec());
    if det == 0 {
        return None;
    }
    let mut out = Vec::with_capacity(n);
    for col in 0..n {
        let mut m = matrix.to_vec();
        for (r, row) in m.iter_mut().enumerate() {
            row[col] = target[r];
        }
        let dc = bareiss_determinant(m);
        if dc % det != 0 {
            return None;
        }
        out.push(dc / det);
    }
    Some(out)
}

fn bareiss_determinant(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let swap = ((k + 1)..n).find(|&r| m[r][k] != 0);
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

#[derive(Debug, Serialize, Deserialize)]
pub struct InvariantSystemJson {
    pub members: Vec<Vec<String>>,
}

impl InvariantSystem {
    pub fn to_json(&self) -> InvariantSystemJson {
        InvariantSystemJson {
            members: self.members().map(|m| m.label_list()).collect(),
        }
    }

    pub fn from_json(graph: &GraphRef, json: &InvariantSystemJson) -> Result<Self, GraphError> {
        let mut members = Vec::new();
        for m in &json.members {
            members.push(VertexSet::from_labels(graph, m)?);
        }
        Ok(InvariantSystem::new(graph, members))
    }
}
