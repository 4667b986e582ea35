use thiserror::Error;

use crate::state::Basis;

/// Errors raised by the phase and geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhaseError {
    #[error("expected a state in the {expected} basis, got {found}")]
    WrongBasis { expected: Basis, found: Basis },

    #[error("basis mismatch: {left} vs {right}")]
    BasisMismatch { left: Basis, right: Basis },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    /// The overlap between two states is too small for its argument to carry
    /// any information.
    #[error("indeterminate phase: overlap magnitude {magnitude:e} is below {threshold:e}")]
    IndeterminatePhase { magnitude: f64, threshold: f64 },

    #[error("degenerate geodesic: endpoints lie on the same ray (distance {distance:e})")]
    DegenerateGeodesic { distance: f64 },

    #[error("eigen-solver did not converge: residual {residual:e}")]
    Convergence { residual: f64 },
}

impl PhaseError {
    /// True for errors that stem from the numbers themselves rather than from
    /// how the API was called.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            PhaseError::Numeric(_)
                | PhaseError::IndeterminatePhase { .. }
                | PhaseError::DegenerateGeodesic { .. }
                | PhaseError::Convergence { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, PhaseError>;
