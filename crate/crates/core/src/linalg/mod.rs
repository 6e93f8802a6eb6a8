//! Complex matrices, density matrices and Kraus-form channels.

mod channel;
mod matrix;
pub mod random;
mod state;

use thiserror::Error;

pub use channel::{apply, compose, is_cptp, CptpViolation, KrausChannel};
pub use matrix::ComplexMatrix;
pub use state::{is_density_matrix, trace_distance, DensityMatrix, DensityViolation};

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("not a density matrix: {0}")]
    NotDensity(DensityViolation),
    #[error("channel output is not a state: {0}")]
    NumericalBreakdown(DensityViolation),
}

/// Outcome of an invariant check with the first violation found.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<V> {
    Pass,
    Fail(V),
}

impl<V> Verdict<V> {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn violation(&self) -> Option<&V> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(v) => Some(v),
        }
    }
}
