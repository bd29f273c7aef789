//! Lie and Noether point-symmetry conditions, Noether integrals and the
//! searches that assemble Noether symmetries from a homothetic algebra.

mod finder;
mod integral;
mod lie;
mod noether;
mod profile;

use thiserror::Error;

pub use finder::{find_noether_case1, find_noether_case2, FinderConfig, NoetherSearch, VERIFY_TOLERANCE};
pub use integral::{build_noether_integral, Hamiltonian, NoetherIntegral};
pub use lie::{lie_conditions, lie_conditions_solved, LieConditionReport};
pub use noether::{noether_conditions, NoetherCase, NoetherConditionReport, NoetherSymmetry};
pub use profile::{ProfileBranch, TimeProfile};

use crate::collineation::CollineationError;
use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymmetryError {
    #[error("expected {expected} {what}, found {found}")]
    DimensionMismatch { expected: usize, found: usize, what: &'static str },
    #[error("{what} must not depend on time")]
    TimeDependent { what: &'static str },
    #[error("claim `{0}` has no gradient function")]
    NotGradient(String),
    #[error("claim `{0}` is not a Killing or homothetic vector")]
    NotHomothetic(String),
    #[error("no samples available")]
    NoSamples,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Collineation(#[from] CollineationError),
}

impl From<crate::expr::EvalError> for SymmetryError {
    fn from(e: crate::expr::EvalError) -> Self {
        SymmetryError::Geometry(e.into())
    }
}

/// Max-abs residual of one condition block, with the value at every used sample.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualBlock {
    pub name: &'static str,
    pub max: f64,
    pub per_sample: Vec<f64>,
}

impl ResidualBlock {
    pub(crate) fn new(name: &'static str) -> Self {
        ResidualBlock { name, max: 0.0, per_sample: Vec::new() }
    }

    pub(crate) fn record(&mut self, value: f64) {
        self.max = if value.is_nan() { f64::INFINITY } else { self.max.max(value) };
        self.per_sample.push(value);
    }
}
