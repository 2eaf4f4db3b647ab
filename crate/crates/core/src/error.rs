use thiserror::Error;

/// Errors raised by the graph, intersection and Gromov-Witten layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),

    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("graph is unstable at vertices {0:?}")]
    Unstable(Vec<String>),

    #[error("not an edge: {0}")]
    NotAnEdge(String),

    #[error("tail label already present: {0}")]
    LabelCollision(String),

    #[error("no stable model: {0}")]
    NoStableModel(String),

    #[error("morphism mismatch: {0}")]
    MorphismMismatch(String),

    #[error("orbit map composition undefined for {0}")]
    OrbitComposition(String),

    #[error("dimension out of range: {0}")]
    DimensionOutOfRange(String),

    #[error("n = {n} exceeds the strata cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("malformed subset: {0}")]
    MalformedSubset(String),

    #[error("too large: {0}")]
    TooLarge(String),

    #[error("inconsistent linear system: {0}")]
    InconsistentSystem(String),

    #[error("unsupported target: {0}")]
    UnsupportedTarget(String),

    #[error("degenerate bidegree ({0}, {1})")]
    DegenerateBidegree(u32, u32),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
