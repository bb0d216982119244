//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error enum. Variants are grouped by the layer that raises
/// them: graph construction and queries, chordal machinery, statistical
/// tests, simulation, and text-format parsing.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed construction input: bad vertex names, self loops,
    /// duplicate edges, dimension mismatches, invalid parameters.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Vertex sets that must be disjoint (or non-empty) are not.
    #[error("invalid vertex sets: {0}")]
    OverlappingSets(String),

    /// The graph is not an MVR chain graph (it has an undirected edge or
    /// a partially directed cycle).
    #[error("not an MVR chain graph: {0}")]
    NotChainGraph(String),

    /// The graph was expected to contain directed edges only, acyclically.
    #[error("not a DAG: {0}")]
    NotAcyclic(String),

    /// A directed cycle was found where a DAG is required.
    #[error("directed cycle involving {0}")]
    CycleInDag(String),

    /// The undirected graph is not chordal.
    #[error("graph is not chordal")]
    NotChordal,

    /// The undirected part of a learned pattern is not chordal, so the
    /// clique-ordering orientation step cannot run.
    #[error("undirected part of the pattern is not chordal")]
    NotChordalUndirectedPart,

    /// A covariance (sub)matrix is singular to working precision.
    #[error("degenerate covariance submatrix (reciprocal condition {rcond:.3e})")]
    DegenerateCovariance { rcond: f64 },

    /// Too few samples for the requested conditional test.
    #[error("insufficient samples: n = {n} with |S| = {s} leaves no degrees of freedom")]
    InsufficientSamples { n: usize, s: usize },

    /// A hypergraph with no hyperedges.
    #[error("hypergraph has no hyperedges")]
    EmptyHypergraph,

    /// Random-graph generation gave up after the retry budget.
    #[error("graph generation exhausted {0} retries without producing an MVR chain graph")]
    RetryExhausted(usize),

    /// A conditional probability table is malformed.
    #[error("invalid CPT for '{0}': {1}")]
    InvalidCpt(String, String),

    /// Two structures that must share a vertex universe do not.
    #[error("vertex mismatch: {0}")]
    VertexMismatch(String),

    /// Text-format parse failure, with a 1-based line number.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
