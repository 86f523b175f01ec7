use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("emitters {i} and {j} sit at the same position")]
    CoincidentPositions { i: usize, j: usize },

    #[error("spacing {spacing} has no two-site Bloch form (expected 1/4 or 3/4 of a wavelength, zero offsets)")]
    UnsupportedSpacing { spacing: f64 },

    #[error("Bloch analysis needs an even number of emitters, got {n}")]
    OddCellCount { n: usize },

    #[error("gap closed: min |h(k)| = {min_gap:e} at k = {k}")]
    GapClosed { min_gap: f64, k: f64 },

    #[error("winding residue {residue:e} exceeds tolerance; increase the sample count")]
    NonIntegerWinding { residue: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("eigensolver did not converge after {iterations} iterations")]
    ConvergenceFailure { iterations: usize },

    #[error("edge state undefined: {0}")]
    EdgeUndefined(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("|Gamma_m0| = {value:e} below the numerical floor at N = {n}")]
    SignalBelowFloor { n: usize, value: f64 },

    #[error("eigenvector matrix is singular or ill-conditioned (condition {condition:e}); likely an exceptional point")]
    DefectiveMatrix { condition: f64 },

    #[error("trace drift {drift:e} after {halvings} step halvings")]
    StepTooLarge { drift: f64, halvings: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by user input rather than the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_)
                | Error::CoincidentPositions { .. }
                | Error::UnsupportedSpacing { .. }
                | Error::OddCellCount { .. }
                | Error::ShapeMismatch(_)
                | Error::Json(_)
                | Error::Io { .. }
        )
    }
}
