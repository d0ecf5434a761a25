use thiserror::Error;

/// Errors raised by library operations.
///
/// Verification outcomes that are expected to fail on some inputs (metric
/// axioms, fibration axioms, matchings) are returned as report values instead.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph with {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("graph is disconnected: no path from {from} to {to}")]
    Disconnected { from: String, to: String },

    #[error("distance table must be square with one row per label: {0}")]
    Shape(String),

    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),

    #[error("unknown point {0}")]
    UnknownPoint(String),

    #[error("invalid length {0:?}")]
    InvalidLength(String),

    #[error("metric axiom violated: {0}")]
    NotMetric(String),

    #[error("tuple repeats point {point} at consecutive positions {position} and {}", position + 1)]
    RepeatedPoint { point: usize, position: usize },

    #[error("tuple does not start with a tilted step after a v*h* prefix")]
    NotTiltedFirst,

    #[error("boundary of a degree-{degree} generator {cell} has a term {face} outside the target basis")]
    MissingFace {
        degree: usize,
        cell: String,
        face: String,
    },

    #[error("matrix dimensions do not match adjacent bases in degree {0}")]
    Dimension(usize),

    #[error("boundary composition is nonzero from degree {0}")]
    NonzeroSquare(usize),

    #[error("generator {cell} in degree {degree} has boundary outside the subcomplex")]
    NotSubcomplex { degree: usize, cell: String },

    #[error("duplicate basis element {0} in degree {1}")]
    DuplicateCell(String, usize),

    #[error("not a chain map in degree {degree} at generator {cell}")]
    NotChainMap { degree: usize, cell: String },

    #[error("complex is not a D-restricted complex: {0}")]
    NotDComplex(String),

    #[error("integer overflow during {0}")]
    Overflow(&'static str),

    #[error("distances must be integers: {0}")]
    NonInteger(String),

    #[error("Δ-set violation: {0}")]
    DeltaSet(String),

    #[error("φ/ψ check failed: {0}")]
    PhiPsi(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
