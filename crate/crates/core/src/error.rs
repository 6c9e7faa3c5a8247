use thiserror::Error;

/// Errors surfaced by geometry construction, degree estimation, flows,
/// networks, and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("degenerate map: {0}")]
    DegenerateMap(String),

    #[error("inter-side gap {gap:e} collapsed below {limit:e}")]
    GapCollapse { gap: f64, limit: f64 },

    #[error("degree estimate {estimate} has residual {residual} >= 0.5; refine the sampling")]
    ResidualTooLarge { estimate: f64, residual: f64 },

    #[error("non-finite value encountered in {0}")]
    NonFinite(String),

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("unsupported ambient dimension {0}")]
    UnsupportedDimension(usize),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numeric machinery itself (as opposed to
    /// bad inputs); the CLI maps these to its numeric-failure exit code.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::ResidualTooLarge { .. } | Error::NonFinite(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
