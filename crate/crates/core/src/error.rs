use thiserror::Error;

/// Everything that can go wrong while building or evaluating the objects in
/// this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown vertex \"{0}\"")]
    UnknownVertex(String),
    #[error("duplicate vertex \"{0}\"")]
    DuplicateVertex(String),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("self-loop at \"{0}\"")]
    SelfLoop(String),
    #[error("duplicate root statement")]
    DuplicateRoot,
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph contains a cycle")]
    Cyclic,
    #[error("cannot grow leaves on a single-vertex tree")]
    CannotGrow,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("linking matrix is not negative definite")]
    NotNegativeDefinite,
    #[error("no internal vertices (V>=2 is empty)")]
    NoInternalVertices,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("insufficient truncation: need order {needed}, have {available}")]
    InsufficientTruncation { needed: String, available: String },
    #[error("bit-length mismatch: {0} vs {1}")]
    BitLength(usize, usize),
    #[error("DAG is not slim: {0}")]
    NotSlim(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("asserted isomorphism fails: {0}")]
    Isomorphism(String),
    #[error("Cartan weight {h} has the wrong parity for base bit {base}")]
    Parity { h: i64, base: String },
    #[error("invalid parameter structure: {0}")]
    ParameterStructure(String),
    #[error("tree is not in node version: {0}")]
    NotNodeVersion(String),
    #[error("rooted tree is not centered; re-root at one of: {0}")]
    NotCentered(String),
    #[error("graph has degree-2 vertices ({0}); the nested path needs V2 = {{}}, use the direct evaluator")]
    HasDegreeTwo(String),
    #[error("sign identity violated at initial condition {0}")]
    SignMismatch(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid series data: {0}")]
    Series(String),
}

pub type Result<T> = std::result::Result<T, Error>;
