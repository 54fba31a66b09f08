use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported root system {label}{rank}: supported are A1-A4, B2-B4, C2-C4, D4, G2")]
    UnsupportedType { label: String, rank: usize },

    #[error("operands belong to different root systems")]
    MixedRootSystem,

    #[error("{0:?} is not a root")]
    NotARoot(Vec<i32>),

    #[error("{0:?} is not a simple root")]
    NotSimpleRoot(Vec<i32>),

    #[error("root string requested for proportional roots {0:?} and {1:?}")]
    ProportionalRoots(Vec<i32>, Vec<i32>),

    #[error("Whittaker support contains adjacent simple roots {0} and {1}; only orthogonal supports are supported")]
    NonOrthogonalSupport(usize, usize),

    #[error("invalid module parameters: {0}")]
    InvalidParams(String),

    #[error("reduction exceeded its step budget of {0} (confluence bug)")]
    ReductionDivergence(usize),

    #[error("presentation has no centre grading (the centre of the Levi factor is zero)")]
    NotGraded,

    #[error("element is not in the nilradical: it has a component along {0}")]
    NotInNilradical(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("truncation (depth {depth}, factor degree {factor}) is not closed under the action: {detail}; enlarge {advice}")]
    TruncationNotClosed {
        depth: usize,
        factor: usize,
        detail: String,
        advice: String,
    },

    #[error("no certified composition length for {0}")]
    UnknownLength(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
