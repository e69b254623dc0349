use std::fmt;

use serde::Serialize;

use crate::digraph::{ArcId, VertexId};

pub type Result<T> = std::result::Result<T, Error>;

/// A certificate of infeasibility: the vertex, vertex set or arc at which a
/// counting condition fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    #[serde(rename = "v")]
    Vertex(VertexId),
    #[serde(rename = "X")]
    Set(Vec<VertexId>),
    #[serde(rename = "arc")]
    Arc(ArcId),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Vertex(v) => write!(f, "vertex {v}"),
            Witness::Set(xs) => write!(f, "vertex set {xs:?}"),
            Witness::Arc(a) => write!(f, "arc {a}"),
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range (digraph has {n} vertices)")]
    UnknownVertex { vertex: VertexId, n: usize },

    #[error("arc {arc} out of range (digraph has {m} arcs)")]
    UnknownArc { arc: ArcId, m: usize },

    #[error("arc {0} listed more than once")]
    DuplicateArc(ArcId),

    #[error("vertex {0} listed more than once")]
    DuplicateVertex(VertexId),

    #[error("{what}: expected length {expected}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("capacity of vertex {0} must be positive")]
    NonPositiveCapacity(VertexId),

    #[error("invalid demand vector: {0}")]
    InvalidDemand(String),

    #[error("vertex set must be nonempty")]
    EmptyVertexSet,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("arc set is not a b-branching")]
    NotBBranching,

    #[error("instance too large: {what} = {actual} exceeds limit {limit}")]
    SizeGate {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("matroid oracle error: {0}")]
    Matroid(String),

    #[error("infeasible instance, violated at {0}")]
    Infeasible(Witness),

    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("arithmetic overflow")]
    Overflow,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
