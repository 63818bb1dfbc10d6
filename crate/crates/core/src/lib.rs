//! Core algorithms for computing with right-angled Artin groups and the
//! non-positively curved cube complexes that realise their finite outer
//! actions.

pub mod graph;
pub mod group;
pub mod invariants;
pub mod action;
pub mod marked;
pub mod aut;
pub mod complex;
pub mod words;

pub use graph::{dimension, GraphRef, SimplicialGraph, Vertex, VertexSet};
pub use words::{
    cyclically_reduce, is_conjugate, multiply, reduce, Letter, NormalForm, Word,
};
