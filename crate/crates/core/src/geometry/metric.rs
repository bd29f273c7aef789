use std::sync::OnceLock;

use nalgebra::DMatrix;

use super::christoffel::ChristoffelField;
use super::GeometryError;
use crate::expr::{CoordinateChart, Expression, Node};

/// Largest dimension for which the inverse is formed symbolically by cofactors.
pub const SYMBOLIC_INVERSE_MAX_DIM: usize = 4;

/// A time-independent metric `g_ij(x)` on a coordinate chart.
#[derive(Clone, Debug)]
pub struct Metric {
    chart: CoordinateChart,
    components: Vec<Expression>,
    signature: Option<Vec<i8>>,
    derivatives: OnceLock<Vec<Expression>>,
    second_derivatives: OnceLock<Vec<Expression>>,
    inverse: OnceLock<Option<Vec<Expression>>>,
    christoffel: OnceLock<Result<ChristoffelField, GeometryError>>,
}

/// Metric data evaluated at one point.
#[derive(Clone, Debug)]
pub struct PointMetric {
    pub g: DMatrix<f64>,
    pub inverse: DMatrix<f64>,
    /// `dg[k][(i, j)] = g_ij,k`.
    pub dg: Vec<DMatrix<f64>>,
}

impl Metric {
    /// Builds a metric from an `n × n` component matrix.
    ///
    /// Components must be symmetric as stored objects and independent of time.
    pub fn new(chart: CoordinateChart, components: Vec<Vec<Expression>>) -> Result<Self, GeometryError> {
        let n = chart.dim();
        if components.len() != n || components.iter().any(|row| row.len() != n) {
            return Err(GeometryError::DimensionMismatch { expected: n, found: components.len(), what: "metric rows" });
        }
        for i in 0..n {
            for j in 0..n {
                let c = &components[i][j];
                if c.references_time() {
                    return Err(GeometryError::TimeDependent { what: "metric component" });
                }
                if c.max_coord().is_some_and(|m| m >= n) {
                    return Err(GeometryError::CoordinateOutOfChart { what: "metric component" });
                }
                if j > i && *c != components[j][i] {
                    return Err(GeometryError::NotSymmetric { i, j });
                }
            }
        }
        Ok(Metric {
            chart,
            components: components.into_iter().flatten().collect(),
            signature: None,
            derivatives: OnceLock::new(),
            second_derivatives: OnceLock::new(),
            inverse: OnceLock::new(),
            christoffel: OnceLock::new(),
        })
    }

    pub fn diagonal(chart: CoordinateChart, diag: Vec<Expression>) -> Result<Self, GeometryError> {
        let n = diag.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { diag[i].clone() } else { Expression::zero() }).collect())
            .collect();
        Self::new(chart, rows)
    }

    /// Constant diagonal metric `diag(s_1, …, s_n)` on the chart `x1..xn`.
    pub fn flat(signature: &[i8]) -> Self {
        let chart = CoordinateChart::numbered(signature.len());
        let diag = signature.iter().map(|&s| Expression::int(s.signum() as i64)).collect();
        Self::diagonal(chart, diag).expect("flat metric is well formed").with_signature(signature.to_vec())
    }

    pub fn euclidean(n: usize) -> Self {
        Self::flat(&vec![1; n])
    }

    pub fn with_signature(mut self, signature: Vec<i8>) -> Self {
        self.signature = Some(signature);
        self
    }

    /// Adds a singular locus of the dynamics on this metric to its chart.
    pub fn with_excluded(mut self, label: impl Into<String>, expr: Expression) -> Self {
        self.chart = self.chart.clone().with_excluded(label, expr);
        self.christoffel = OnceLock::new();
        self
    }

    pub fn chart(&self) -> &CoordinateChart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn signature(&self) -> Option<&[i8]> {
        self.signature.as_deref()
    }

    pub fn component(&self, i: usize, j: usize) -> &Expression {
        &self.components[i * self.dim() + j]
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.component(i, j).is_zero()))
    }

    /// True when every component is a numeric literal.
    pub fn is_constant(&self) -> bool {
        self.components.iter().all(|c| matches!(c.node(), Node::Const(_)))
    }

    /// `g_ij,k` stored at `(k * n + i) * n + j`.
    pub(crate) fn derivative_exprs(&self) -> &[Expression] {
        self.derivatives.get_or_init(|| {
            let n = self.dim();
            let mut out = Vec::with_capacity(n * n * n);
            for k in 0..n {
                for c in &self.components {
                    out.push(c.diff_coord(k));
                }
            }
            out
        })
    }

    /// `g_ij,kl` stored at `((k * n + l) * n + i) * n + j`.
    pub(crate) fn second_derivative_exprs(&self) -> &[Expression] {
        self.second_derivatives.get_or_init(|| {
            let n = self.dim();
            let first = self.derivative_exprs();
            let mut out = Vec::with_capacity(n.pow(4));
            for k in 0..n {
                for l in 0..n {
                    for ij in 0..n * n {
                        out.push(first[k * n * n + ij].diff_coord(l));
                    }
                }
            }
            out
        })
    }

    pub fn derivative(&self, i: usize, j: usize, k: usize) -> &Expression {
        let n = self.dim();
        &self.derivative_exprs()[(k * n + i) * n + j]
    }

    /// Symbolic inverse `g^ij`, formed for diagonal metrics of any size and by
    /// cofactors up to [`SYMBOLIC_INVERSE_MAX_DIM`].
    pub fn inverse_symbolic(&self) -> Option<&[Expression]> {
        self.inverse
            .get_or_init(|| {
                let n = self.dim();
                if self.is_diagonal() {
                    let mut out = vec![Expression::zero(); n * n];
                    for i in 0..n {
                        out[i * n + i] = Expression::one().div(self.component(i, i));
                    }
                    return Some(out);
                }
                if n > SYMBOLIC_INVERSE_MAX_DIM {
                    return None;
                }
                let rows: Vec<Vec<Expression>> =
                    (0..n).map(|i| (0..n).map(|j| self.component(i, j).clone()).collect()).collect();
                let det = determinant(&rows);
                if det.is_zero() {
                    return None;
                }
                let mut out = vec![Expression::zero(); n * n];
                for i in 0..n {
                    for j in 0..n {
                        // (g^-1)_ij = C_ji / det
                        let minor = minor_matrix(&rows, j, i);
                        let cof = determinant(&minor);
                        let cof = if (i + j) % 2 == 0 { cof } else { cof.neg() };
                        out[i * n + j] = cof.div(&det);
                    }
                }
                Some(out)
            })
            .as_deref()
    }

    pub fn inverse_component(&self, i: usize, j: usize) -> Option<&Expression> {
        self.inverse_symbolic().map(|inv| &inv[i * self.dim() + j])
    }

    pub fn eval_components(&self, point: &[f64]) -> Result<DMatrix<f64>, GeometryError> {
        let n = self.dim();
        check_point(n, point)?;
        let mut g = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.component(i, j).eval(point, None)?;
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        Ok(g)
    }

    pub fn eval_inverse(&self, point: &[f64]) -> Result<DMatrix<f64>, GeometryError> {
        let g = self.eval_components(point)?;
        invert(g, point)
    }

    pub fn eval_point(&self, point: &[f64]) -> Result<PointMetric, GeometryError> {
        let n = self.dim();
        let g = self.eval_components(point)?;
        let inverse = invert(g.clone(), point)?;
        let d = self.derivative_exprs();
        let mut dg = Vec::with_capacity(n);
        for k in 0..n {
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let v = d[(k * n + i) * n + j].eval(point, None)?;
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
            dg.push(m);
        }
        Ok(PointMetric { g, inverse, dg })
    }

    /// Levi-Civita connection, computed once and cached.
    pub fn christoffel(&self) -> Result<&ChristoffelField, GeometryError> {
        self.christoffel.get_or_init(|| ChristoffelField::from_metric(self)).as_ref().map_err(Clone::clone)
    }
}

pub(crate) fn check_point(n: usize, point: &[f64]) -> Result<(), GeometryError> {
    if point.len() != n {
        return Err(GeometryError::DimensionMismatch { expected: n, found: point.len(), what: "point" });
    }
    Ok(())
}

fn invert(g: DMatrix<f64>, point: &[f64]) -> Result<DMatrix<f64>, GeometryError> {
    let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let det = g.determinant();
    if scale == 0.0 || !det.is_finite() || det.abs() <= 1e-14 * scale.powi(g.nrows() as i32) {
        return Err(GeometryError::SingularAt { point: point.to_vec() });
    }
    g.try_inverse().ok_or_else(|| GeometryError::SingularAt { point: point.to_vec() })
}

fn minor_matrix(rows: &[Vec<Expression>], skip_row: usize, skip_col: usize) -> Vec<Vec<Expression>> {
    rows.iter()
        .enumerate()
        .filter(|(r, _)| *r != skip_row)
        .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != skip_col).map(|(_, e)| e.clone()).collect())
        .collect()
}

/// Cofactor expansion along the first row, skipping zero entries.
pub(crate) fn determinant(rows: &[Vec<Expression>]) -> Expression {
    match rows.len() {
        0 => Expression::one(),
        1 => rows[0][0].clone(),
        2 => rows[0][0].mul(&rows[1][1]).sub(&rows[0][1].mul(&rows[1][0])),
        n => {
            let mut acc = Expression::zero();
            for c in 0..n {
                if rows[0][c].is_zero() {
                    continue;
                }
                let term = rows[0][c].mul(&determinant(&minor_matrix(rows, 0, c)));
                acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}
