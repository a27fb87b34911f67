use thiserror::Error;

use crate::field::Repr;

/// Errors surfaced by grid construction, field operations and time steppers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {n} along {axis} is invalid: point counts must be even and >= 8")]
    BadGridSize { axis: char, n: usize },

    #[error("expected a field in {expected:?} representation, found {found:?}")]
    ReprMismatch { expected: Repr, found: Repr },

    #[error("fields live on different grids ({a}x{b} vs {c}x{d})")]
    GridMismatch { a: usize, b: usize, c: usize, d: usize },

    #[error("non-finite value in {context} at t = {t}")]
    NonFinite { context: String, t: f64 },

    #[error("instability detected at t = {t}: {context} norm grew {factor:.2}x in one step")]
    Unstable { context: String, t: f64, factor: f64 },

    #[error("the n± split integrator is only defined for lambda = 1 (got {lambda}); rescale omega -> lambda*omega is not covered here")]
    SplitRequiresUnitLambda { lambda: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
