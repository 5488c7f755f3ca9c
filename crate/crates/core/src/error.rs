use thiserror::Error;

use crate::ambient::AmbientId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("classes live on different ambients: {left} vs {right}")]
    MismatchedAmbient { left: AmbientId, right: AmbientId },

    #[error("expected {expected} coefficients for {ambient}, got {found}")]
    ArityMismatch {
        ambient: AmbientId,
        expected: usize,
        found: usize,
    },

    #[error("2g-2 = {0} is odd; input is not a curve")]
    NonIntegralGenus(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("line bundle collection is empty")]
    EmptyCollection,

    #[error("special curve family not applicable: {0}")]
    FamilyNotApplicable(String),

    #[error("class is not certified hyperbolic: {0}")]
    NotHyperbolicInput(String),

    #[error("identity system leaves {free} tensor entries undetermined")]
    UnderdeterminedSystem { free: usize },

    #[error("identity system is inconsistent: {0}")]
    InconsistentSystem(String),

    #[error("invalid ambient document: {0}")]
    InvalidDocument(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
