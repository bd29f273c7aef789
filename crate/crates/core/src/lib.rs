//! Geometric Lie and Noether point symmetries of second-order systems
//! `ẍⁱ + Γⁱ_jk ẋʲẋᵏ = Fⁱ`.
//!
//! The symmetry conditions are expressed through the collineations of the
//! kinetic metric: Killing and homothetic vectors generate the Noether
//! point symmetries of conservative systems, and special projective
//! collineations enter the Lie conditions. The crate provides an exact
//! expression engine, metric geometry, collineation catalogs with an exact
//! solver for constant metrics, numeric checkers for the Lie and Noether
//! conditions, a Noether symmetry finder, first integrals, trajectory
//! integration, and the worked systems as named scenarios.

pub mod collineation;
pub mod dynamics;
pub mod expr;
pub mod geometry;
pub mod linalg;
pub mod scenarios;
pub mod symmetry;

use thiserror::Error;

pub use collineation::{
    solve_determining_equations, verify_collineation, CollineationBasis, CollineationClaim, CollineationError,
    CollineationKind, CollineationReport, SolverKind,
};
pub use dynamics::{
    conservation_drift, eom_rhs, integrate, DriftReport, DynamicsError, EquationsOfMotion, Method, Trajectory,
};
pub use expr::{parse, CoordinateChart, EvalError, Expression, ParseError, Variable};
pub use geometry::{ForceField, GeometryError, HaltonSampler, Metric, Sample, SampleBox, SymmetryVector};
pub use scenarios::{scenario_by_name, Scenario, ScenarioError};
pub use symmetry::{
    find_noether_case1, find_noether_case2, lie_conditions, noether_conditions, FinderConfig, Hamiltonian, NoetherCase,
    NoetherIntegral, NoetherSymmetry, SymmetryError, TimeProfile,
};

/// Any error raised by the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Collineation(#[from] CollineationError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
