//! Equations of motion `ẍⁱ + Γⁱ_jk ẋʲẋᵏ = Fⁱ`, their numerical integration,
//! and conservation checks of Noether integrals along trajectories.

mod drift;
mod eom;
mod integrate;

use thiserror::Error;

pub use drift::{conservation_drift, write_csv, DriftReport, IntegralSeries};
pub use eom::{eom_rhs, EquationsOfMotion};
pub use integrate::{
    integrate, integrate_with_margin, Halt, HaltReason, Method, Trajectory, DEFAULT_RK45_TOLERANCE, DEFAULT_RK4_STEP,
};

use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("expected {expected} {what}, found {found}")]
    DimensionMismatch { expected: usize, found: usize, what: &'static str },
    #[error("time span must be finite and increasing, got [{0}, {1}]")]
    InvalidSpan(f64, f64),
    #[error("step settings must be positive and finite")]
    InvalidStep,
    #[error("initial state lies within the margin of the excluded locus `{0}`")]
    InitialStateExcluded(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl From<crate::expr::EvalError> for DynamicsError {
    fn from(e: crate::expr::EvalError) -> Self {
        DynamicsError::Geometry(e.into())
    }
}
