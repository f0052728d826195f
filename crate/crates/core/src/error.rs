use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate ellipse: semiaxes a={a}, b={b} (need a > b > 0)")]
    DegenerateEllipse { a: f64, b: f64 },

    #[error("invalid focal parameters: c={c}, psi={psi} (need c > 0, psi > 0)")]
    InvalidFocal { c: f64, psi: f64 },

    #[error("point ({x}, {y}) lies strictly inside the ellipse")]
    InsideEllipse { x: f64, y: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("root solve for target {target} did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence {
        target: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("mode k = 0 has Neumann closure; use the zero-mode solver")]
    ZeroModeRejected,

    #[error("input is not mean-free along flow lines: max |<f>| = {max_mean:e} exceeds {limit:e}")]
    NotMeanFree { max_mean: f64, limit: f64 },

    #[error("non-finite value at node ({i}, {j})")]
    NonFinite { i: usize, j: usize },

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("profile has {got} samples, grid has ny = {expected}")]
    ProfileLength { got: usize, expected: usize },

    #[error("invalid time series: {0}")]
    InvalidSeries(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
