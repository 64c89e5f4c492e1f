use thiserror::Error;

/// Crate-wide error type. The CLI maps variants onto its exit-code contract.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A pivot fell below the relative threshold during LU elimination.
    #[error("numerically singular matrix in {context}: pivot {pivot:.3e} below threshold {threshold:.3e}")]
    Singular {
        pivot: f64,
        threshold: f64,
        context: String,
    },

    /// The solution has a pole (singular Gram body) at this point.
    #[error("pole at (x, t) = ({x}, {t}): {detail}")]
    Pole { x: f64, t: f64, detail: String },

    #[error("grid too small for the finite-difference stencil: need ≥ {need} points per axis, got {got}")]
    Stencil { need: usize, got: usize },

    #[error("scenario error: {0}")]
    Scenario(String),

    /// More than half of the requested grid points sit on poles.
    #[error("degenerate output: {flagged} of {total} grid points flagged as poles")]
    PoleDominated { flagged: usize, total: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
