use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precision must be at least {min} bits, got {bits}")]
    InvalidPrecision { bits: u32, min: u32 },

    #[error("function has no finite degree and no truncation degree was supplied")]
    TruncationUnavailable,

    #[error("nodes {first} and {second} are too close (gap {gap:e} below threshold {threshold:e})")]
    DuplicateNode {
        first: usize,
        second: usize,
        gap: f64,
        threshold: f64,
    },

    #[error("need at least {needed} nodes, only {available} available")]
    InsufficientNodes { needed: usize, available: usize },

    #[error("sequences overlap: point {first} of the first equals point {second} of the second")]
    OverlapError { first: usize, second: usize },

    #[error("pole too close: point {index} is at distance {distance:e} from u (minimum {delta:e})")]
    PoleTooClose {
        index: usize,
        distance: f64,
        delta: f64,
    },

    #[error("the two point sets are not separated (distance {distance:e})")]
    GapError { distance: f64 },

    #[error("witness {position} breaks the ordering requirements: {reason}")]
    WitnessOrderError { position: usize, reason: String },

    #[error("sequence prefix fails the density check: {empty_cells} empty cells in the coarse grid")]
    DensityError { empty_cells: usize },

    #[error("index {requested} exceeds the {available} materialized points")]
    IndexOverflow { requested: usize, available: usize },

    #[error("dual-precision results disagree by {discrepancy:e} even at {bits} bits")]
    PrecisionFailure { discrepancy: f64, bits: u32 },

    #[error("decomposition identity violated: residual {residual:e} exceeds budget {budget:e}")]
    IdentityViolation { residual: f64, budget: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
