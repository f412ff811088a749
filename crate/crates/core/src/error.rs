use thiserror::Error;

use crate::set::ElementSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element} outside universe of size {universe}")]
    ElementOutOfRange { element: usize, universe: usize },

    #[error("sets live in different universes ({left} vs {right})")]
    UniverseMismatch { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid group: {axiom} violated ({detail})")]
    GroupAxiom { axiom: &'static str, detail: String },

    #[error("invalid group spec: {0}")]
    GroupSpec(String),

    #[error("{0} is not a subgroup")]
    NotSubgroup(ElementSet),

    #[error("subgroup is not normal: conjugating by {witness} moves it")]
    NotNormal { witness: usize },

    #[error("{0} requires a nonempty set")]
    EmptySet(&'static str),

    #[error("connection set must contain the identity")]
    MissingIdentity,

    #[error("operation requires a reflexive graph")]
    NotReflexive,

    #[error("vertex {vertex} outside graph on {vertices} vertices")]
    VertexOutOfRange { vertex: usize, vertices: usize },

    #[error("connectivity of order {k} needs at least {} vertices, graph has {vertices}", 2 * .k - 1)]
    TooFewVertices { vertices: usize, k: usize },

    #[error("exhaustive search is capped at {limit} vertices, graph has {vertices}")]
    ExhaustiveLimit { vertices: usize, limit: usize },

    #[error("k must be at least 1")]
    ZeroK,

    #[error("vertices {x} and {y} are adjacent; local connectivity is unbounded")]
    AdjacentPair { x: usize, y: usize },

    #[error("requested {requested} disjoint paths but only {available} exist; minimum cut {cut}")]
    InsufficientConnectivity {
        requested: usize,
        available: usize,
        cut: ElementSet,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn same_universe(a: &ElementSet, b: &ElementSet) -> Result<()> {
    if a.universe() != b.universe() {
        return Err(Error::UniverseMismatch {
            left: a.universe(),
            right: b.universe(),
        });
    }
    Ok(())
}
