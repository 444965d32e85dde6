use thiserror::Error;

use crate::families::Orientation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid rooted tree: {0}")]
    InvalidTree(String),

    #[error("invalid mapping: {0}")]
    InvalidMapping(String),

    #[error("digraph is not an inverse mapping digraph: {0}")]
    NotInverseMapping(String),

    #[error("digraph has a vertex with outdegree > 1; the parking process is not deterministic")]
    NotDeterministic,

    #[error("expected a {expected} tree")]
    OrientationMismatch { expected: Orientation },

    #[error("sequence has length {got}, expected {expected}")]
    SequenceLength { expected: usize, got: usize },

    #[error("sequence is not a parking function on the given digraph")]
    NotParkingFunction,

    #[error("input is not in the image of the map: {0}")]
    NotInImage(String),

    #[error("n = {n} exceeds the safety cap of {cap}; pass an override to run anyway")]
    CapExceeded { n: usize, cap: usize },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("n must be at least 1")]
    EmptyVertexSet,

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
