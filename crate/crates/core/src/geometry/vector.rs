use std::fmt;
use std::sync::OnceLock;

use super::metric::Metric;
use super::GeometryError;
use crate::expr::{parse, CoordinateChart, Expression, ParseError};

/// A point-symmetry generator `ξ(t,x)∂t + ηⁱ(t,x)∂ᵢ`.
#[derive(Clone, Debug)]
pub struct SymmetryVector {
    chart: CoordinateChart,
    xi: Expression,
    eta: Vec<Expression>,
}

impl SymmetryVector {
    pub fn new(chart: CoordinateChart, xi: Expression, eta: Vec<Expression>) -> Result<Self, GeometryError> {
        let n = chart.dim();
        if eta.len() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, found: eta.len(), what: "vector components" });
        }
        if std::iter::once(&xi).chain(&eta).any(|e| e.max_coord().is_some_and(|m| m >= n)) {
            return Err(GeometryError::CoordinateOutOfChart { what: "vector component" });
        }
        Ok(SymmetryVector { chart, xi, eta })
    }

    /// A purely spatial field `ηⁱ∂ᵢ`.
    pub fn spatial(chart: CoordinateChart, eta: Vec<Expression>) -> Result<Self, GeometryError> {
        Self::new(chart, Expression::zero(), eta)
    }

    /// `∂t`.
    pub fn time_translation(chart: CoordinateChart) -> Self {
        let n = chart.dim();
        SymmetryVector { chart, xi: Expression::one(), eta: vec![Expression::zero(); n] }
    }

    /// The zero field on a chart.
    pub fn zero(chart: CoordinateChart) -> Self {
        let n = chart.dim();
        SymmetryVector { chart, xi: Expression::zero(), eta: vec![Expression::zero(); n] }
    }

    /// `∂_i`.
    pub fn coordinate(chart: CoordinateChart, i: usize) -> Self {
        let n = chart.dim();
        let eta = (0..n).map(|j| if i == j { Expression::one() } else { Expression::zero() }).collect();
        SymmetryVector { chart, xi: Expression::zero(), eta }
    }

    pub fn parse(chart: &CoordinateChart, xi: &str, eta: &[&str]) -> Result<Self, VectorParseError> {
        let xi = parse(xi, chart)?;
        let eta = eta.iter().map(|s| parse(s, chart)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(chart.clone(), xi, eta)?)
    }

    pub fn chart(&self) -> &CoordinateChart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.eta.len()
    }

    pub fn xi(&self) -> &Expression {
        &self.xi
    }

    pub fn eta(&self) -> &[Expression] {
        &self.eta
    }

    pub fn is_time_independent(&self) -> bool {
        !self.xi.references_time() && self.eta.iter().all(|e| !e.references_time())
    }

    pub fn is_zero(&self) -> bool {
        self.xi.is_zero() && self.eta.iter().all(Expression::is_zero)
    }

    /// Multiplies both components by a scalar expression.
    pub fn scaled(&self, factor: &Expression) -> Self {
        SymmetryVector {
            chart: self.chart.clone(),
            xi: factor.mul(&self.xi),
            eta: self.eta.iter().map(|e| factor.mul(e)).collect(),
        }
    }

    pub fn plus(&self, other: &SymmetryVector) -> Self {
        assert_eq!(self.dim(), other.dim(), "vectors on different charts");
        SymmetryVector {
            chart: self.chart.clone(),
            xi: self.xi.add(&other.xi),
            eta: self.eta.iter().zip(&other.eta).map(|(a, b)| a.add(b)).collect(),
        }
    }

    /// Adds `xi` to the time component.
    pub fn with_time_component(&self, xi: Expression) -> Self {
        SymmetryVector { chart: self.chart.clone(), xi: self.xi.add(&xi), eta: self.eta.clone() }
    }

    /// `Σ c_a X_a` with real coefficients; zero coefficients are skipped.
    pub fn linear_combination<'a>(
        chart: &CoordinateChart,
        terms: impl IntoIterator<Item = (f64, &'a SymmetryVector)>,
    ) -> Self {
        terms
            .into_iter()
            .filter(|(c, _)| *c != 0.0)
            .fold(Self::zero(chart.clone()), |acc, (c, v)| acc.plus(&v.scaled(&Expression::real(c))))
    }

    pub fn jet(&self) -> VectorJet {
        VectorJet::new(self)
    }

    pub fn display(&self) -> VectorDisplay<'_> {
        VectorDisplay(self)
    }
}

pub struct VectorDisplay<'a>(&'a SymmetryVector);

impl fmt::Display for VectorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.0;
        let mut first = true;
        let mut term = |f: &mut fmt::Formatter<'_>, coeff: &Expression, name: &str| -> fmt::Result {
            if coeff.is_zero() {
                return Ok(());
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if coeff.is_one() {
                write!(f, "d_{name}")
            } else {
                write!(f, "({})*d_{name}", coeff.display(&v.chart))
            }
        };
        term(f, &v.xi, "t")?;
        for (e, name) in v.eta.iter().zip(v.chart.names()) {
            term(f, e, name)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VectorParseError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// All derivatives of `ξ` and `η` entering the symmetry conditions, formed once.
#[derive(Clone, Debug)]
pub struct VectorJet {
    n: usize,
    xi: Expression,
    xi_t: Expression,
    xi_tt: Expression,
    xi_x: Vec<Expression>,
    xi_tx: Vec<Expression>,
    xi_xx: Vec<Expression>,
    eta: Vec<Expression>,
    eta_t: Vec<Expression>,
    eta_tt: Vec<Expression>,
    eta_x: Vec<Expression>,
    eta_tx: Vec<Expression>,
    eta_xx: Vec<Expression>,
}

/// A [`VectorJet`] evaluated at `(t, x)`. Index layout: `xi_x[j]`,
/// `xi_xx[j * n + k]`, `eta_x[i * n + j] = ηⁱ,_j`, `eta_xx[(i * n + j) * n + k]`.
#[derive(Clone, Debug)]
pub struct JetValues {
    pub n: usize,
    pub xi: f64,
    pub xi_t: f64,
    pub xi_tt: f64,
    pub xi_x: Vec<f64>,
    pub xi_tx: Vec<f64>,
    pub xi_xx: Vec<f64>,
    pub eta: Vec<f64>,
    pub eta_t: Vec<f64>,
    pub eta_tt: Vec<f64>,
    pub eta_x: Vec<f64>,
    pub eta_tx: Vec<f64>,
    pub eta_xx: Vec<f64>,
}

impl VectorJet {
    pub fn new(v: &SymmetryVector) -> Self {
        let n = v.dim();
        let grad = |e: &Expression| e.gradient(n);
        let xi_t = v.xi.diff_time();
        let xi_x = grad(&v.xi);
        let eta_t: Vec<_> = v.eta.iter().map(Expression::diff_time).collect();
        let eta_x: Vec<_> = v.eta.iter().flat_map(grad).collect();
        VectorJet {
            n,
            xi: v.xi.clone(),
            xi_tt: xi_t.diff_time(),
            xi_tx: xi_t.gradient(n),
            xi_xx: xi_x.iter().flat_map(grad).collect(),
            xi_t,
            xi_x,
            eta: v.eta.clone(),
            eta_tt: eta_t.iter().map(Expression::diff_time).collect(),
            eta_tx: eta_t.iter().flat_map(grad).collect(),
            eta_xx: eta_x.iter().flat_map(grad).collect(),
            eta_t,
            eta_x,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eval(&self, x: &[f64], t: f64) -> Result<JetValues, crate::expr::EvalError> {
        let ev = |e: &Expression| e.eval(x, Some(t));
        let all = |es: &[Expression]| es.iter().map(ev).collect::<Result<Vec<_>, _>>();
        Ok(JetValues {
            n: self.n,
            xi: ev(&self.xi)?,
            xi_t: ev(&self.xi_t)?,
            xi_tt: ev(&self.xi_tt)?,
            xi_x: all(&self.xi_x)?,
            xi_tx: all(&self.xi_tx)?,
            xi_xx: all(&self.xi_xx)?,
            eta: all(&self.eta)?,
            eta_t: all(&self.eta_t)?,
            eta_tt: all(&self.eta_tt)?,
            eta_x: all(&self.eta_x)?,
            eta_tx: all(&self.eta_tx)?,
            eta_xx: all(&self.eta_xx)?,
        })
    }
}

/// A time-independent force `Fⁱ(x)` in `ẍⁱ + Γⁱ_jk ẋʲẋᵏ = Fⁱ`.
#[derive(Clone, Debug)]
pub struct ForceField {
    components: Vec<Expression>,
    jacobian: OnceLock<Vec<Expression>>,
}

impl ForceField {
    pub fn new(components: Vec<Expression>) -> Result<Self, GeometryError> {
        if components.iter().any(Expression::references_time) {
            return Err(GeometryError::TimeDependent { what: "force" });
        }
        Ok(ForceField { components, jacobian: OnceLock::new() })
    }

    pub fn zero(n: usize) -> Self {
        ForceField { components: vec![Expression::zero(); n], jacobian: OnceLock::new() }
    }

    /// `Fⁱ = −gⁱʲ V,_j`.
    pub fn from_potential(metric: &Metric, potential: &Expression) -> Result<Self, GeometryError> {
        let n = metric.dim();
        if potential.references_time() {
            return Err(GeometryError::TimeDependent { what: "potential" });
        }
        let inv = metric.inverse_symbolic().ok_or(GeometryError::SymbolicInverseUnavailable)?;
        let grad = potential.gradient(n);
        let components = (0..n)
            .map(|i| {
                let mut acc = Expression::zero();
                for (j, dv) in grad.iter().enumerate() {
                    if !inv[i * n + j].is_zero() {
                        acc = acc.add(&inv[i * n + j].mul(dv));
                    }
                }
                acc.neg()
            })
            .collect();
        Self::new(components)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Expression] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expression::is_zero)
    }

    /// The same field with reversed sign.
    pub fn negated(&self) -> Self {
        ForceField { components: self.components.iter().map(Expression::neg).collect(), jacobian: OnceLock::new() }
    }

    /// `Fⁱ,_j` at `i * n + j`.
    pub fn jacobian_exprs(&self) -> &[Expression] {
        self.jacobian.get_or_init(|| {
            let n = self.dim();
            self.components.iter().flat_map(|c| c.gradient(n)).collect()
        })
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>, crate::expr::EvalError> {
        self.components.iter().map(|c| c.eval(x, None)).collect()
    }

    pub fn eval_jacobian(&self, x: &[f64]) -> Result<Vec<f64>, crate::expr::EvalError> {
        self.jacobian_exprs().iter().map(|c| c.eval(x, None)).collect()
    }
}
