use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = PcdError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum PcdError {
    #[error("non-finite coordinate ({0}, {1})")]
    NonFinite(f64, f64),

    #[error("degenerate triangle: |signed area| = {area:e} is below tolerance {tol:e}")]
    DegenerateTriangle { area: f64, tol: f64 },

    #[error("degenerate simplex: volume {0:e} is below tolerance")]
    DegenerateSimplex(f64),

    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },

    #[error("all points are collinear")]
    Collinear,

    #[error("empty point set")]
    EmptyInput,

    #[error("instance too large for exhaustive search: n = {n} exceeds {max}")]
    TooLarge { n: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {index} lies outside the triangle (barycentric {bary:?})")]
    PointOutside { index: usize, bary: [f64; 3] },

    #[error("quadrature did not reach tolerance {tol:e} (estimated error {err:e})")]
    Quadrature { tol: f64, err: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl PcdError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        PcdError::InvalidParameter(msg.into())
    }
}
