use thiserror::Error;

use super::node::Expression;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("a chart needs at least one coordinate")]
    Empty,
    #[error("duplicate coordinate name `{0}`")]
    Duplicate(String),
    #[error("`{0}` is reserved")]
    Reserved(String),
    #[error("invalid coordinate name `{0}`")]
    InvalidName(String),
}

/// A singular set `{ expr = 0 }` of the chart.
#[derive(Clone, Debug)]
pub struct ExcludedLocus {
    pub label: String,
    pub expr: Expression,
}

/// Ordered coordinate names plus the loci where the chart degenerates.
#[derive(Clone, Debug)]
pub struct CoordinateChart {
    names: Vec<String>,
    excluded: Vec<ExcludedLocus>,
    curvature: Option<i8>,
}

const RESERVED: &[&str] = &["t", "pi", "Sinn", "Cosn"];

impl CoordinateChart {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, ChartError> {
        if names.is_empty() {
            return Err(ChartError::Empty);
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(ChartError::InvalidName(name.to_string()));
            }
            if RESERVED.contains(&name) || super::Function::from_name(name).is_some() {
                return Err(ChartError::Reserved(name.to_string()));
            }
            if out.iter().any(|n| n == name) {
                return Err(ChartError::Duplicate(name.to_string()));
            }
            out.push(name.to_string());
        }
        Ok(CoordinateChart { names: out, excluded: Vec::new(), curvature: None })
    }

    /// Chart `x1..xn`.
    pub fn numbered(dim: usize) -> Self {
        let names: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
        Self::new(&names).expect("numbered names are valid")
    }

    pub fn with_excluded(mut self, label: impl Into<String>, expr: Expression) -> Self {
        self.excluded.push(ExcludedLocus { label: label.into(), expr });
        self
    }

    /// Sets the sign used to expand `Sinn`/`Cosn` when parsing over this chart.
    pub fn with_curvature(mut self, k: i8) -> Self {
        self.curvature = Some(k.signum());
        self
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn excluded(&self) -> &[ExcludedLocus] {
        &self.excluded
    }

    pub fn curvature(&self) -> Option<i8> {
        self.curvature
    }

    /// The first excluded locus closer than `margin` (in the value of its
    /// defining function), or that cannot be evaluated at `point`.
    pub fn violated_locus(&self, point: &[f64], margin: f64) -> Option<&ExcludedLocus> {
        self.excluded.iter().find(|locus| match locus.expr.eval(point, None) {
            Ok(v) => v.abs() < margin,
            Err(_) => true,
        })
    }
}

/// `Sinn` for curvature sign `k`: `sin` for `k > 0`, `sinh` for `k < 0`,
/// the identity for flat space.
pub fn sinn(k: i8, arg: &Expression) -> Expression {
    match k.signum() {
        1 => arg.sin(),
        -1 => arg.sinh(),
        _ => arg.clone(),
    }
}

/// `Cosn` for curvature sign `k`.
pub fn cosn(k: i8, arg: &Expression) -> Expression {
    match k.signum() {
        1 => arg.cos(),
        -1 => arg.cosh(),
        _ => Expression::one(),
    }
}
