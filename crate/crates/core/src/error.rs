use thiserror::Error;

/// Errors produced by the finite models, the searches and the diagram engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point {point} is outside the ground set of size {ground}")]
    PointOutOfRange { point: usize, ground: usize },

    #[error("ground set of size {0} exceeds the supported maximum of 64 points")]
    GroundTooLarge(usize),

    #[error("cover systems disagree on the ground set ({expected} vs {found})")]
    MismatchedGround { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("search space exceeded the cap of {cap} candidate evaluations")]
    CapExceeded { cap: u64 },

    #[error("window at row {row} has size {size}; f-sequence alphabets need at least 2 symbols")]
    WindowTooSmall { row: usize, size: usize },

    #[error("coordinate {coordinate}: alphabet of size {alphabet} cannot avoid {used} slalom entries")]
    SlalomOverflow {
        coordinate: usize,
        alphabet: usize,
        used: usize,
    },

    #[error("no finite family avoids every function (coordinate {0} has a single symbol)")]
    NoAvoidingFamily(usize),

    #[error("engine contradiction at cell ({row},{col}):\n  implies: {implies}\n  refutes: {refutes}")]
    Contradiction {
        row: usize,
        col: usize,
        implies: String,
        refutes: String,
    },

    #[error("knowledge base is inconsistent: {0}")]
    InconsistentKb(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
