//! Collineations of a metric: catalogued algebras, numeric verification of
//! their defining equations, and an exact solver for constant metrics.

mod catalog;
mod polynomial;
mod solver;

use std::fmt;

use thiserror::Error;

pub use catalog::{
    bianchi_metric, bianchi_symmetry_catalog, bianchi_vacuum_metric, bianchi_vacuum_symmetry_catalog,
    flat_projective_catalog, sphere_chart, sphere_killing_catalog, sphere_metric,
};
pub use polynomial::{exact_span_contains, exact_span_equal, field_coefficients, monomials};
pub use solver::{solve_determining_equations, DEFAULT_MAX_DEGREE};

use crate::expr::Expression;
use crate::geometry::{connection_lie_values, metric_lie_values, GeometryError, Metric, Sample, SymmetryVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CollineationError {
    #[error("metric component g_{i}{j} is not a numeric constant")]
    NonConstantMetric { i: usize, j: usize },
    #[error("metric component g_{i}{j} is not an exact rational")]
    NonRationalMetric { i: usize, j: usize },
    #[error("unknown collineation kind `{0}` (expected KV, HV, AC or SPC)")]
    UnknownKind(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// The defining equation a claimed collineation is checked against.
#[derive(Clone, Debug, PartialEq)]
pub enum CollineationKind {
    /// `ℒ_X g = 0`.
    Killing,
    /// `ℒ_X g = 2ψ g` with constant `ψ`.
    Homothetic { psi: f64 },
    /// `ℒ_X g = 2ψ(x) g`.
    ConformalKilling { psi: Expression },
    /// `ℒ_X Γ = 0`.
    Affine,
    /// `ℒ_X Γⁱ_jk = δⁱ_j φ,_k + δⁱ_k φ,_j`.
    Projective { phi: Expression },
    /// Projective with `φ;_jk = 0`.
    SpecialProjective { phi: Expression },
}

impl CollineationKind {
    pub fn label(&self) -> &'static str {
        match self {
            CollineationKind::Killing => "KV",
            CollineationKind::Homothetic { .. } => "HV",
            CollineationKind::ConformalKilling { .. } => "CKV",
            CollineationKind::Affine => "AC",
            CollineationKind::Projective { .. } => "PC",
            CollineationKind::SpecialProjective { .. } => "SPC",
        }
    }

    /// `ψ` for Killing (0) and homothetic vectors.
    pub fn homothetic_factor(&self) -> Option<f64> {
        match self {
            CollineationKind::Killing => Some(0.0),
            CollineationKind::Homothetic { psi } => Some(*psi),
            _ => None,
        }
    }
}

/// Solver targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Killing,
    Homothetic,
    Affine,
    SpecialProjective,
}

impl SolverKind {
    pub const ALL: [SolverKind; 4] =
        [SolverKind::Killing, SolverKind::Homothetic, SolverKind::Affine, SolverKind::SpecialProjective];

    pub fn label(self) -> &'static str {
        match self {
            SolverKind::Killing => "KV",
            SolverKind::Homothetic => "HV",
            SolverKind::Affine => "AC",
            SolverKind::SpecialProjective => "SPC",
        }
    }
}

impl std::str::FromStr for SolverKind {
    type Err = CollineationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "KV" => Ok(SolverKind::Killing),
            "HV" => Ok(SolverKind::Homothetic),
            "AC" => Ok(SolverKind::Affine),
            "SPC" => Ok(SolverKind::SpecialProjective),
            _ => Err(CollineationError::UnknownKind(s.to_string())),
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A vector field together with the collineation type it is claimed to be.
#[derive(Clone, Debug)]
pub struct CollineationClaim {
    pub name: String,
    pub vector: SymmetryVector,
    pub kind: CollineationKind,
    /// `Φ` with `g_ij Xʲ = Φ,_i`, when the field is claimed gradient.
    pub gradient: Option<Expression>,
}

impl CollineationClaim {
    pub fn new(name: impl Into<String>, vector: SymmetryVector, kind: CollineationKind) -> Self {
        CollineationClaim { name: name.into(), vector, kind, gradient: None }
    }

    pub fn with_gradient(mut self, function: Expression) -> Self {
        self.gradient = Some(function);
        self
    }

    pub fn is_gradient(&self) -> bool {
        self.gradient.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Catalog,
    Solver,
}

/// An ordered list of claims on one space.
#[derive(Clone, Debug)]
pub struct CollineationBasis {
    pub space: String,
    pub claims: Vec<CollineationClaim>,
    /// Set for solver output.
    pub kind: Option<SolverKind>,
    pub provenance: Provenance,
    pub warnings: Vec<String>,
}

impl CollineationBasis {
    pub fn catalog(space: impl Into<String>, claims: Vec<CollineationClaim>) -> Self {
        CollineationBasis { space: space.into(), claims, kind: None, provenance: Provenance::Catalog, warnings: vec![] }
    }

    pub fn len(&self) -> usize {
        self.claims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.claims.is_empty()
    }

    pub fn count(&self, label: &str) -> usize {
        self.claims.iter().filter(|c| c.kind.label() == label).count()
    }

    pub fn of_kind<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a CollineationClaim> + 'a {
        self.claims.iter().filter(move |c| c.kind.label() == label)
    }

    pub fn get(&self, name: &str) -> Option<&CollineationClaim> {
        self.claims.iter().find(|c| c.name == name)
    }

    /// The Killing and homothetic claims.
    pub fn homothetic_algebra(&self) -> Vec<CollineationClaim> {
        self.claims.iter().filter(|c| c.kind.homothetic_factor().is_some()).cloned().collect()
    }

    /// Rank of the component matrix sampled at `samples`.
    pub fn sampled_rank(&self, samples: &[Sample]) -> usize {
        let rows: Vec<Vec<f64>> = self
            .claims
            .iter()
            .map(|c| {
                samples
                    .iter()
                    .flat_map(|s| c.vector.eta().iter().map(move |e| e.eval(&s.x, Some(s.t)).unwrap_or(0.0)))
                    .collect()
            })
            .collect();
        crate::linalg::numeric_rank(&rows, 1e-9)
    }
}

/// Residuals of a claim's defining equations over a sample set.
#[derive(Clone, Debug)]
pub struct CollineationReport {
    pub name: String,
    pub kind: &'static str,
    /// `max |ℒ_X g − 2ψ g|` for KV, HV and CKV claims.
    pub metric_residual: Option<f64>,
    /// `max |ℒ_X Γ − (δ φ,_k + δ φ,_j)|` for AC, PC and SPC claims.
    pub connection_residual: Option<f64>,
    /// `max |φ;_jk|` for SPC claims.
    pub hessian_residual: Option<f64>,
    /// `max |g_ij Xʲ − Φ,_i|` for gradient claims.
    pub gradient_residual: Option<f64>,
    pub points_used: usize,
    pub points_skipped: usize,
    pub tolerance: f64,
    pub passed: bool,
}

impl CollineationReport {
    pub fn max_residual(&self) -> f64 {
        [self.metric_residual, self.connection_residual, self.hessian_residual, self.gradient_residual]
            .into_iter()
            .flatten()
            .fold(0.0, f64::max)
    }
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Checks the claim's defining equation at every sample; points where
/// evaluation fails are skipped and logged.
pub fn verify_collineation(
    claim: &CollineationClaim,
    metric: &Metric,
    samples: &[Sample],
    tol: f64,
) -> Result<CollineationReport, CollineationError> {
    let n = metric.dim();
    if claim.vector.dim() != n {
        return Err(GeometryError::DimensionMismatch {
            expected: n,
            found: claim.vector.dim(),
            what: "vector components",
        }
        .into());
    }
    let jet = claim.vector.jet();
    let connection = metric.christoffel()?;
    let uses_metric = matches!(
        claim.kind,
        CollineationKind::Killing | CollineationKind::Homothetic { .. } | CollineationKind::ConformalKilling { .. }
    );
    let phi = match &claim.kind {
        CollineationKind::Projective { phi } | CollineationKind::SpecialProjective { phi } => Some(phi.clone()),
        CollineationKind::Affine => Some(Expression::zero()),
        _ => None,
    };
    let phi_grad = phi.as_ref().map(|p| p.gradient(n));
    let phi_hess: Option<Vec<Expression>> = match &claim.kind {
        CollineationKind::SpecialProjective { .. } => {
            phi_grad.as_ref().map(|g| g.iter().flat_map(|d| d.gradient(n)).collect())
        }
        _ => None,
    };
    let grad_fn = claim.gradient.as_ref().map(|f| f.gradient(n));

    let mut report = CollineationReport {
        name: claim.name.clone(),
        kind: claim.kind.label(),
        metric_residual: uses_metric.then_some(0.0),
        connection_residual: phi.is_some().then_some(0.0),
        hessian_residual: phi_hess.is_some().then_some(0.0),
        gradient_residual: grad_fn.is_some().then_some(0.0),
        points_used: 0,
        points_skipped: 0,
        tolerance: tol,
        passed: false,
    };

    for s in samples {
        let outcome = (|| -> Result<[f64; 4], GeometryError> {
            let jv = jet.eval(&s.x, s.t)?;
            let pm = metric.eval_point(&s.x)?;
            let mut r = [0.0f64; 4];
            if uses_metric {
                let lie = metric_lie_values(&jv, &pm);
                let psi = match &claim.kind {
                    CollineationKind::Killing => 0.0,
                    CollineationKind::Homothetic { psi } => *psi,
                    CollineationKind::ConformalKilling { psi } => psi.eval(&s.x, Some(s.t))?,
                    _ => unreachable!(),
                };
                r[0] = (lie - &pm.g * (2.0 * psi)).amax();
            }
            if let Some(dphi) = &phi_grad {
                let gamma = connection.eval(&s.x)?;
                let dgamma = connection.eval_derivative(&s.x)?;
                let lie = connection_lie_values(&jv, &gamma, &dgamma);
                let dphi: Vec<f64> = dphi.iter().map(|e| e.eval(&s.x, None)).collect::<Result<_, _>>()?;
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let target = delta(i, j) * dphi[k] + delta(i, k) * dphi[j];
                            r[1] = r[1].max((lie.at(i, j, k) - target).abs());
                        }
                    }
                }
                if let Some(hess) = &phi_hess {
                    for j in 0..n {
                        for k in 0..n {
                            let mut h = hess[j * n + k].eval(&s.x, None)?;
                            for (m, d) in dphi.iter().enumerate() {
                                h -= gamma.at(m, j, k) * d;
                            }
                            r[2] = r[2].max(h.abs());
                        }
                    }
                }
            }
            if let Some(df) = &grad_fn {
                for i in 0..n {
                    let mut lowered = 0.0;
                    for j in 0..n {
                        lowered += pm.g[(i, j)] * jv.eta[j];
                    }
                    r[3] = r[3].max((lowered - df[i].eval(&s.x, None)?).abs());
                }
            }
            Ok(r)
        })();
        match outcome {
            Ok(r) => {
                report.points_used += 1;
                for (slot, v) in [
                    &mut report.metric_residual,
                    &mut report.connection_residual,
                    &mut report.hessian_residual,
                    &mut report.gradient_residual,
                ]
                .into_iter()
                .zip(r)
                {
                    if let Some(current) = slot {
                        *current = current.max(v);
                    }
                }
            }
            Err(e) => {
                log::debug!("skipping sample {:?} for {}: {e}", s.x, claim.name);
                report.points_skipped += 1;
            }
        }
    }
    report.passed = report.points_used > 0 && report.max_residual() <= tol;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{HaltonSampler, SampleBox};

    #[test]
    fn dilation_is_not_killing() {
        let m = Metric::euclidean(2);
        let h = SymmetryVector::parse(m.chart(), "0", &["x1", "x2"]).unwrap();
        let pts = HaltonSampler::new(SampleBox::cube(2, -1.0, 1.0), 0).points(m.chart(), 20);
        let claim = CollineationClaim::new("H", h.clone(), CollineationKind::Killing);
        let r = verify_collineation(&claim, &m, &pts, 1e-12).unwrap();
        assert!(!r.passed);
        assert!((r.metric_residual.unwrap() - 2.0).abs() < 1e-15);
        let claim = CollineationClaim::new("H", h, CollineationKind::Homothetic { psi: 1.0 })
            .with_gradient(crate::expr::parse("(x1^2 + x2^2)/2", m.chart()).unwrap());
        assert!(verify_collineation(&claim, &m, &pts, 1e-12).unwrap().passed);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("spc".parse::<SolverKind>().unwrap(), SolverKind::SpecialProjective);
        assert!("ckv".parse::<SolverKind>().is_err());
    }
}
