//! Words in a RAAG, canonical normal forms, cyclic reduction and conjugacy.
//!
//! Elements of the group defined by a [`SimplicialGraph`] are equivalence
//! classes of words in the vertices and their inverses. Two reduced words
//! represent the same element exactly when they differ by swaps of adjacent
//! commuting letters, so the lexicographically least word in the swap class
//! is a canonical form; [`reduce`] computes it. Conjugacy goes through
//! cyclic reduction and a breadth-first search over the swap-and-rotation
//! class of the cyclic core.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, GraphRef, SimplicialGraph, Vertex, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("malformed letter token {0:?}")]
    BadToken(String),
    #[error("words belong to different ambient graphs")]
    AmbientMismatch,
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub vertex: Vertex,
    pub positive: bool,
}

impl Letter {
    pub fn new(vertex: Vertex, positive: bool) -> Self {
        Letter { vertex, positive }
    }

    pub fn inverse(self) -> Self {
        Letter { vertex: self.vertex, positive: !self.positive }
    }
}

// positive before negative at the same vertex
impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.vertex, !self.positive).cmp(&(other.vertex, !other.positive))
    }
}

fn letters_commute(graph: &SimplicialGraph, a: Letter, b: Letter) -> bool {
    a.vertex == b.vertex || graph.adjacent(a.vertex, b.vertex)
}

/// An arbitrary, possibly unreduced word over an ambient graph.
#[derive(Debug, Clone)]
pub struct Word {
    graph: GraphRef,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(graph: &GraphRef, letters: Vec<Letter>) -> Result<Self, WordError> {
        for l in &letters {
            if l.vertex >= graph.vertex_count() {
                return Err(GraphError::VertexOutOfRange(l.vertex).into());
            }
        }
        Ok(Word { graph: graph.clone(), letters })
    }

    pub fn identity(graph: &GraphRef) -> Self {
        Word { graph: graph.clone(), letters: Vec::new() }
    }

    pub fn generator(graph: &GraphRef, v: Vertex) -> Result<Self, WordError> {
        Word::new(graph, vec![Letter::new(v, true)])
    }

    /// Parse whitespace-separated tokens `a` and `a^-1`; the empty string is
    /// the identity.
    pub fn parse(graph: &GraphRef, text: &str) -> Result<Self, WordError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let (label, positive) = match token.strip_suffix("^-1") {
                Some(base) => (base, false),
                None => {
                    if token.contains('^') {
                        return Err(WordError::BadToken(token.to_owned()));
                    }
                    (token, true)
                }
            };
            if label.is_empty() {
                return Err(WordError::BadToken(token.to_owned()));
            }
            let v = graph.vertex(label)?;
            letters.push(Letter::new(v, positive));
        }
        Ok(Word { graph: graph.clone(), letters })
    }

    pub fn graph(&self) -> &GraphRef {
        &self.graph
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        let letters = self.letters.iter().rev().map(|l| l.inverse()).collect();
        Word { graph: self.graph.clone(), letters }
    }

    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        if *self.graph != *other.graph {
            return Err(WordError::AmbientMismatch);
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { graph: self.graph.clone(), letters })
    }

    pub fn format(&self) -> String {
        format_letters(&self.graph, &self.letters)
    }
}

pub(crate) fn format_letters(graph: &SimplicialGraph, letters: &[Letter]) -> String {
    letters
        .iter()
        .map(|l| {
            if l.positive {
                graph.label(l.vertex).to_owned()
            } else {
                format!("{}^-1", graph.label(l.vertex))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Append one letter to a reduced buffer, performing the reduction move when
/// the new letter cancels against a reachable inverse.
fn push_reduced(graph: &SimplicialGraph, buf: &mut Vec<Letter>, l: Letter) {
    let mut j = buf.len();
    while j > 0 {
        j -= 1;
        let x = buf[j];
        if x.vertex == l.vertex && x.positive != l.positive {
            buf.remove(j);
            return;
        }
        if !letters_commute(graph, x, l) {
            break;
        }
    }
    buf.push(l);
}

/// Greedily emit, at each step, the least letter that swaps to the front.
/// On a reduced word this produces the lexicographically least member of
/// its swap class.
fn canonical_order(graph: &SimplicialGraph, letters: &[Letter]) -> Vec<Letter> {
    let mut rest: Vec<Letter> = letters.to_vec();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for i in 0..rest.len() {
            if rest[..i].iter().all(|&x| letters_commute(graph, x, rest[i])) {
                if best.map_or(true, |b| rest[i] < rest[b]) {
                    best = Some(i);
                }
            }
        }
        out.push(rest.remove(best.expect("front letter always movable")));
    }
    out
}

/// A fully reduced word in canonical (lexicographically least) order.
#[derive(Clone)]
pub struct NormalForm {
    graph: GraphRef,
    letters: Vec<Letter>,
}

impl fmt::Debug for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{}", self.format())
        }
    }
}

impl PartialEq for NormalForm {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && *self.graph == *other.graph
    }
}
impl Eq for NormalForm {}

impl std::hash::Hash for NormalForm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl NormalForm {
    pub fn identity(graph: &GraphRef) -> Self {
        NormalForm { graph: graph.clone(), letters: Vec::new() }
    }

    pub fn generator(graph: &GraphRef, v: Vertex) -> Result<Self, WordError> {
        Ok(reduce(&Word::generator(graph, v)?))
    }

    pub fn graph(&self) -> &GraphRef {
        &self.graph
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn as_word(&self) -> Word {
        Word { graph: self.graph.clone(), letters: self.letters.clone() }
    }

    pub fn inverse(&self) -> NormalForm {
        reduce(&self.as_word().inverse())
    }

    pub fn format(&self) -> String {
        format_letters(&self.graph, &self.letters)
    }

    pub fn parse(graph: &GraphRef, text: &str) -> Result<Self, WordError> {
        Ok(reduce(&Word::parse(graph, text)?))
    }

    /// Vertices whose letters appear; well defined because swaps preserve
    /// the letter multiset.
    pub fn support(&self) -> VertexSet {
        let mut bits = 0u32;
        for l in &self.letters {
            bits |= 1 << l.vertex;
        }
        VertexSet::from_bits(&self.graph, bits)
    }

    /// Exponent-sum vector over the generators.
    pub fn abelianization(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.graph.vertex_count()];
        for l in &self.letters {
            out[l.vertex] += if l.positive { 1 } else { -1 };
        }
        out
    }
}

/// Reduce a word to its canonical normal form.
pub fn reduce(w: &Word) -> NormalForm {
    let mut buf: Vec<Letter> = Vec::with_capacity(w.letters.len());
    for &l in &w.letters {
        push_reduced(&w.graph, &mut buf, l);
    }
    let letters = canonical_order(&w.graph, &buf);
    NormalForm { graph: w.graph.clone(), letters }
}

/// Product of two normal forms, reduced.
pub fn multiply(a: &NormalForm, b: &NormalForm) -> NormalForm {
    let mut buf = a.letters.clone();
    for &l in &b.letters {
        push_reduced(&a.graph, &mut buf, l);
    }
    let letters = canonical_order(&a.graph, &buf);
    NormalForm { graph: a.graph.clone(), letters }
}

/// Product of several normal forms.
pub fn multiply_all(graph: &GraphRef, factors: &[&NormalForm]) -> NormalForm {
    let mut buf: Vec<Letter> = Vec::new();
    for f in factors {
        for &l in &f.letters {
            push_reduced(graph, &mut buf, l);
        }
    }
    let letters = canonical_order(graph, &buf);
    NormalForm { graph: graph.clone(), letters }
}

/// `x^{-1} w x`, matching the convention that conjugation by `x` sends
/// `w` to `x^{-1} w x`.
pub fn conjugate(w: &NormalForm, x: &NormalForm) -> NormalForm {
    multiply_all(&w.graph, &[&x.inverse(), w, x])
}

/// Does the word lie in the special subgroup spanned by `domain`?
pub fn in_special_subgroup(w: &NormalForm, domain: &VertexSet) -> Result<bool, GraphError> {
    w.support().is_subset_of(domain)
}

/// Cyclic reduction: returns `(conjugator, core)` with
/// `w = conjugator^{-1} · core · conjugator` and the core admitting no
/// reduction or cyclic reduction.
pub fn cyclically_reduce(w: &Word) -> (NormalForm, NormalForm) {
    let nf = reduce(w);
    cyclically_reduce_nf(&nf)
}

pub fn cyclically_reduce_nf(nf: &NormalForm) -> (NormalForm, NormalForm) {
    let graph = nf.graph.clone();
    let mut core: Vec<Letter> = nf.letters.clone();
    let mut conj: Vec<Letter> = Vec::new();
    'outer: loop {
        for i in 0..core.len() {
            let li = core[i];
            if !core[..i].iter().all(|&x| letters_commute(&graph, x, li)) {
                continue;
            }
            for j in (i + 1)..core.len() {
                let lj = core[j];
                if lj.vertex == li.vertex
                    && lj.positive != li.positive
                    && core[j + 1..].iter().all(|&x| letters_commute(&graph, x, li))
                {
                    // core = li · u · li^{-1} up to swaps; conjugator gains li^{-1}
                    core.remove(j);
                    core.remove(i);
                    let mut new_conj = vec![li.inverse()];
                    new_conj.extend_from_slice(&conj);
                    let mut buf = Vec::with_capacity(new_conj.len());
                    for &l in &new_conj {
                        push_reduced(&graph, &mut buf, l);
                    }
                    conj = buf;
                    continue 'outer;
                }
            }
        }
        break;
    }
    let conj_nf = NormalForm { graph: graph.clone(), letters: canonical_order(&graph, &conj) };
    let core_nf = NormalForm { graph: graph.clone(), letters: canonical_order(&graph, &core) };
    (conj_nf, core_nf)
}

/// Decide conjugacy. On success returns `g` with `g^{-1} w1 g = w2`.
pub fn is_conjugate(w1: &Word, w2: &Word) -> Result<Option<NormalForm>, WordError> {
    if *w1.graph != *w2.graph {
        return Err(WordError::AmbientMismatch);
    }
    let graph = w1.graph.clone();
    let nf1 = reduce(w1);
    let nf2 = reduce(w2);
    if nf1 == nf2 {
        return Ok(Some(NormalForm::identity(&graph)));
    }
    let (y1, c1) = cyclically_reduce_nf(&nf1);
    let (y2, c2) = cyclically_reduce_nf(&nf2);
    if c1.len() != c2.len() || c1.abelianization() != c2.abelianization() {
        return Ok(None);
    }
    let mut m1 = c1.letters.clone();
    let mut m2 = c2.letters.clone();
    m1.sort();
    m2.sort();
    if m1 != m2 {
        return Ok(None);
    }

    // breadth-first search over the swap-and-rotation class of the core,
    // remembering the rotation letters to assemble a witness
    let target = c2.letters.clone();
    let start = c1.letters.clone();
    let mut parents: HashMap<Vec<Letter>, (Vec<Letter>, Letter)> = HashMap::new();
    let mut visited: HashSet<Vec<Letter>> = HashSet::new();
    visited.insert(start.clone());
    let mut queue = VecDeque::new();
    queue.push_back(start.clone());
    let mut found = start == target;
    while let Some(state) = queue.pop_front() {
        if found {
            break;
        }
        for i in 0..state.len() {
            let l = state[i];
            if !state[..i].iter().all(|&x| letters_commute(&graph, x, l)) {
                continue;
            }
            // rotate the front-movable letter to the back: l^{-1} · state · l
            let mut rotated: Vec<Letter> = Vec::with_capacity(state.len());
            rotated.extend_from_slice(&state[..i]);
            rotated.extend_from_slice(&state[i + 1..]);
            rotated.push(l);
            let rotated = canonical_order(&graph, &rotated);
            if visited.insert(rotated.clone()) {
                parents.insert(rotated.clone(), (state.clone(), l));
                if rotated == target {
                    found = true;
                    break;
                }
                queue.push_back(rotated);
            }
        }
    }
    if !found {
        return Ok(None);
    }
    // reconstruct h with h^{-1} c1 h = c2
    let mut letters_rev = Vec::new();
    let mut cur = target.clone();
    while cur != start {
        let (prev, l) = parents.get(&cur).expect("parent chain").clone();
        letters_rev.push(l);
        cur = prev;
    }
    letters_rev.reverse();
    let h = NormalForm {
        graph: graph.clone(),
        letters: canonical_order(&graph, &{
            let mut buf = Vec::new();
            for &l in &letters_rev {
                push_reduced(&graph, &mut buf, l);
            }
            buf
        }),
    };
    // w1 = y1^{-1} c1 y1, w2 = y2^{-1} c2 y2, c2 = h^{-1} c1 h
    // so g = y1^{-1} h y2 satisfies g^{-1} w1 g = w2
    let g = multiply_all(&graph, &[&y1.inverse(), &h, &y2]);
    debug_assert_eq!(conjugate(&nf1, &g), nf2);
    Ok(Some(g))
}

/// Re-express a word over another graph sharing the labels of its support.
pub fn transport(nf: &NormalForm, target: &GraphRef) -> Result<NormalForm, WordError> {
    let mut letters = Vec::with_capacity(nf.len());
    for l in nf.letters() {
        let label = nf.graph().label(l.vertex);
        let v = target.vertex(label)?;
        letters.push(Letter::new(v, l.positive));
    }
    Ok(reduce(&Word::new(target, letters)?))
}

/// Realize an exponent vector supported on `domain` as a word, generators in
/// ascending vertex order.
pub fn word_from_exponents(
    graph: &GraphRef,
    domain: &VertexSet,
    exponents: &[i64],
) -> Result<Word, WordError> {
    let mut letters = Vec::new();
    for v in domain.iter() {
        let e = exponents[v];
        let l = Letter::new(v, e > 0);
        for _ in 0..e.unsigned_abs() {
            letters.push(l);
        }
    }
    Word::new(graph, letters)
}

/// Enumerate the normal forms of all elements with support in `domain` and
/// reduced length at most `max_len`, in breadth-first order.
pub fn normal_forms_up_to(
    graph: &GraphRef,
    domain: &VertexSet,
    max_len: usize,
) -> Vec<NormalForm> {
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    let mut out = vec![NormalForm::identity(graph)];
    seen.insert(Vec::new());
    let alphabet: Vec<Letter> = domain
        .iter()
        .flat_map(|v| [Letter::new(v, true), Letter::new(v, false)])
        .collect();
    let mut frontier = vec![Vec::<Letter>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for state in &frontier {
            for &l in &alphabet {
                let mut buf = state.clone();
                push_reduced(graph, &mut buf, l);
                if buf.len() != state.len() + 1 {
                    continue;
                }
                let canon = canonical_order(graph, &buf);
                if seen.insert(canon.clone()) {
                    out.push(NormalForm { graph: graph.clone(), letters: canon.clone() });
                    next.push(canon);
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn edge_ab() -> GraphRef {
        Arc::new(SimplicialGraph::new(&["a", "b"], &[("a", "b")]).unwrap())
    }

    fn free2() -> GraphRef {
        Arc::new(SimplicialGraph::new(&["a", "b"], &[]).unwrap())
    }

    fn nf(g: &GraphRef, s: &str) -> NormalForm {
        NormalForm::parse(g, s).unwrap()
    }

    #[test]
    fn reduce_commuting_cancellation() {
        let g = edge_ab();
        assert_eq!(nf(&g, "a b a^-1"), nf(&g, "b"));
    }

    #[test]
    fn reduce_free_no_move() {
        let g = free2();
        let w = Word::parse(&g, "a b a^-1").unwrap();
        assert_eq!(reduce(&w).format(), "a b a^-1");
    }

    #[test]
    fn swap_canonicalization() {
        let g = edge_ab();
        let w = Word::parse(&g, "b a").unwrap();
        assert_eq!(reduce(&w).format(), "a b");
    }

    #[test]
    fn reduce_is_idempotent() {
        let g = edge_ab();
        let w = Word::parse(&g, "b a b^-1 a b").unwrap();
        let r = reduce(&w);
        assert_eq!(reduce(&r.as_word()), r);
    }

    #[test]
    fn cyclic_reduction_examples() {
        let g = free2();
        let (y, c) = cyclically_reduce(&Word::parse(&g, "a b a^-1").unwrap());
        assert_eq!(c, nf(&g, "b"));
        assert_eq!(y, nf(&g, "a^-1"));
        // w = y^{-1} c y
        let w = multiply_all(&g, &[&y.inverse(), &c, &y]);
        assert_eq!(w, nf(&g, "a b a^-1"));

        let (y, c) = cyclically_reduce(&Word::parse(&g, "a b").unwrap());
        assert!(y.is_identity());
        assert_eq!(c, nf(&g, "a b"));

        let (y, c) = cyclically_reduce(&Word::parse(&g, "a a^-1").unwrap());
        assert!(y.is_identity());
        assert!(c.is_identity());
    }

    #[test]
    fn conjugacy_basic() {
        let g = free2();
        let w1 = Word::parse(&g, "a b").unwrap();
        let w2 = Word::parse(&g, "b a").unwrap();
        let witness = is_conjugate(&w1, &w2).unwrap().expect("conjugate");
        assert_eq!(conjugate(&reduce(&w1), &witness), reduce(&w2));

        let w3 = Word::parse(&g, "a b^-1").unwrap();
        assert!(is_conjugate(&w1, &w3).unwrap().is_none());
    }

    #[test]
    fn conjugacy_equal_elements_identity_witness() {
        let g = edge_ab();
        let w1 = Word::parse(&g, "a b").unwrap();
        let w2 = Word::parse(&g, "b a").unwrap();
        let witness = is_conjugate(&w1, &w2).unwrap().expect("equal");
        assert!(witness.is_identity());
    }

    #[test]
    fn support_and_abelianization() {
        let g = edge_ab();
        let w = nf(&g, "a b a^-1");
        assert_eq!(w.support().label_list(), vec!["b"]);

        let f = free2();
        let w = nf(&f, "a b a b^-1");
        assert_eq!(w.abelianization(), vec![2, 0]);
        let dom = VertexSet::from_labels(&f, &["a"]).unwrap();
        assert!(!in_special_subgroup(&nf(&f, "a b"), &dom).unwrap());
    }

    #[test]
    fn homomorphism_compatibility() {
        let g = edge_ab();
        let u = Word::parse(&g, "b a b").unwrap();
        let v = Word::parse(&g, "b^-1 a").unwrap();
        let direct = reduce(&u.concat(&v).unwrap());
        let split = multiply(&reduce(&u), &reduce(&v));
        assert_eq!(direct, split);
    }

    #[test]
    fn normal_form_enumeration_counts() {
        // free group on two generators: 1 + 4 + 12 elements up to length 2
        let g = free2();
        let all = normal_forms_up_to(&g, &VertexSet::full(&g), 2);
        assert_eq!(all.len(), 17);
        // abelian: 1 + 4 + 8
        let e = edge_ab();
        let all = normal_forms_up_to(&e, &VertexSet::full(&e), 2);
        assert_eq!(all.len(), 13);
    }

    #[test]
    fn parse_rejects_garbage() {
        let g = free2();
        assert!(Word::parse(&g, "a^2").is_err());
        assert!(Word::parse(&g, "c").is_err());
        assert!(Word::parse(&g, "").unwrap().is_empty());
    }
}
