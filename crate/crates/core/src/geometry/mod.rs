//! Metrics, Levi-Civita connections, symmetry vectors and their Lie derivatives.

mod christoffel;
mod lie;
mod metric;
mod sampling;
mod tensor;
mod vector;

use thiserror::Error;

pub use christoffel::{christoffel, metric_compatibility_residual, ChristoffelField};
pub use lie::{connection_lie_values, lie_derivative_connection, lie_derivative_metric, metric_lie_values};
pub use metric::{Metric, PointMetric, SYMBOLIC_INVERSE_MAX_DIM};
pub use sampling::{HaltonSampler, Sample, SampleBox, DEFAULT_MARGIN};
pub use tensor::{Array, Rank3, Rank4};
pub use vector::{ForceField, JetValues, SymmetryVector, VectorDisplay, VectorJet, VectorParseError};

use crate::expr::EvalError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("expected {expected} {what}, found {found}")]
    DimensionMismatch { expected: usize, found: usize, what: &'static str },
    #[error("metric is not symmetric in ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("{what} must not depend on time")]
    TimeDependent { what: &'static str },
    #[error("{what} references a coordinate outside the chart")]
    CoordinateOutOfChart { what: &'static str },
    #[error("metric determinant vanishes identically")]
    SingularMetric,
    #[error("metric is singular at {point:?}")]
    SingularAt { point: Vec<f64> },
    #[error("no symbolic inverse for this metric")]
    SymbolicInverseUnavailable,
    #[error(transparent)]
    Eval(#[from] EvalError),
}
