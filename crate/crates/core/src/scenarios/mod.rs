//! Named constructions of the worked systems: metrics, potentials or
//! forces, symmetry catalogs and the symmetry lists quoted for them.

mod bianchi;
mod newtonian;
mod registry;
mod sphere;

use std::fmt;

use thiserror::Error;

pub use bianchi::{bianchi_scenario, exponential_potential, BianchiModel, BianchiType, PotentialFamily};
pub use newtonian::{ermakov_scenario, newtonian_scenario, NewtonianParams, NewtonianRow};
pub use registry::{scenario_by_name, scenario_with_potential, SCENARIO_SYNTAX};
pub use sphere::{sphere_scenario, table7_potential, table7_scenario, TABLE7_ROWS};

use crate::collineation::CollineationBasis;
use crate::dynamics::{DynamicsError, EquationsOfMotion};
use crate::expr::{Expression, ParseError};
use crate::geometry::{ForceField, GeometryError, HaltonSampler, Metric, Sample, SampleBox, SymmetryVector};
use crate::linalg::simple_rational;
use crate::symmetry::{lie_conditions, noether_conditions, NoetherCase, NoetherIntegral, SymmetryError};

/// Tolerance for expected-symmetry checks.
pub const CHECK_TOLERANCE: f64 = 1e-8;
/// Sample count for expected-symmetry checks.
pub const CHECK_SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}`; expected {syntax}", syntax = SCENARIO_SYNTAX)]
    Unknown(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not representable: {0}")]
    NotRepresentable(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Which checker an expected symmetry is run through.
#[derive(Clone, Debug)]
pub enum ExpectedKind {
    Lie,
    Noether { case: NoetherCase, gauge: Expression },
}

impl ExpectedKind {
    pub fn label(&self) -> &'static str {
        match self {
            ExpectedKind::Lie => "Lie",
            ExpectedKind::Noether { .. } => "Noether",
        }
    }
}

/// Whether an entry is transcribed as printed or replaces a printed entry.
#[derive(Clone, Debug, PartialEq)]
pub enum EntryStatus {
    /// As printed in the source table.
    Quoted,
    /// Replaces the printed entry, which fails its checker.
    Corrected(String),
    /// Not printed; follows from the scenario data.
    Derived(String),
}

impl EntryStatus {
    pub fn label(&self) -> &'static str {
        match self {
            EntryStatus::Quoted => "quoted",
            EntryStatus::Corrected(_) => "corrected",
            EntryStatus::Derived(_) => "derived",
        }
    }

    pub fn note(&self) -> Option<&str> {
        match self {
            EntryStatus::Quoted => None,
            EntryStatus::Corrected(n) | EntryStatus::Derived(n) => Some(n),
        }
    }
}

/// A symmetry a scenario is expected to admit, with its table provenance.
#[derive(Clone, Debug)]
pub struct ExpectedSymmetry {
    pub label: String,
    pub vector: SymmetryVector,
    pub kind: ExpectedKind,
    /// Table, row and column the entry comes from.
    pub provenance: String,
    pub status: EntryStatus,
}

impl ExpectedSymmetry {
    pub fn lie(label: impl Into<String>, vector: SymmetryVector, provenance: impl Into<String>) -> Self {
        ExpectedSymmetry {
            label: label.into(),
            vector,
            kind: ExpectedKind::Lie,
            provenance: provenance.into(),
            status: EntryStatus::Quoted,
        }
    }

    pub fn with_status(mut self, status: EntryStatus) -> Self {
        self.status = status;
        self
    }

    pub fn is_noether(&self) -> bool {
        matches!(self.kind, ExpectedKind::Noether { .. })
    }

    pub fn gauge(&self) -> Option<&Expression> {
        match &self.kind {
            ExpectedKind::Noether { gauge, .. } => Some(gauge),
            ExpectedKind::Lie => None,
        }
    }
}

/// Outcome of running one expected symmetry through its checker.
#[derive(Clone, Debug)]
pub struct EntryCheck {
    pub label: String,
    pub kind: &'static str,
    pub provenance: String,
    pub status: &'static str,
    pub residual: f64,
    pub passed: bool,
}

impl fmt::Display for EntryCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} [{}] {} ({}) residual {:.3e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.kind,
            self.status,
            self.label,
            self.provenance,
            self.residual
        )
    }
}

/// A worked system ready for checking, finding and simulation.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub metric: Metric,
    /// `V` of `L = ½g ẋẋ − V`, for conservative systems.
    pub potential: Option<Expression>,
    /// `Fⁱ` of `ẍⁱ + Γⁱ_jk ẋʲẋᵏ = Fⁱ`.
    pub force: ForceField,
    pub catalog: CollineationBasis,
    pub expected: Vec<ExpectedSymmetry>,
    /// Entries that must fail their checkers.
    pub negative_controls: Vec<ExpectedSymmetry>,
    /// Integral labels by generator name, e.g. `Y1 -> I_CK1`.
    pub integral_names: Vec<(String, String)>,
    pub sample_box: SampleBox,
    pub margin: f64,
    pub notes: Vec<String>,
}

impl Scenario {
    pub fn conservative(
        name: impl Into<String>,
        metric: Metric,
        potential: Expression,
        catalog: CollineationBasis,
        sample_box: SampleBox,
    ) -> Result<Self, ScenarioError> {
        let force = ForceField::from_potential(&metric, &potential)?;
        Ok(Scenario {
            name: name.into(),
            metric,
            potential: Some(potential),
            force,
            catalog,
            expected: Vec::new(),
            negative_controls: Vec::new(),
            integral_names: Vec::new(),
            sample_box,
            margin: crate::geometry::DEFAULT_MARGIN,
            notes: Vec::new(),
        })
    }

    pub fn forced(
        name: impl Into<String>,
        metric: Metric,
        force: ForceField,
        catalog: CollineationBasis,
        sample_box: SampleBox,
    ) -> Self {
        Scenario {
            name: name.into(),
            metric,
            potential: None,
            force,
            catalog,
            expected: Vec::new(),
            negative_controls: Vec::new(),
            integral_names: Vec::new(),
            sample_box,
            margin: crate::geometry::DEFAULT_MARGIN,
            notes: Vec::new(),
        }
    }

    /// The same metric and catalog with potential `V`; expected lists are cleared.
    pub fn with_potential(&self, potential: Expression) -> Result<Self, ScenarioError> {
        let mut sc = Scenario::conservative(
            format!("{}:V={}", self.name, potential.to_text(self.metric.chart())),
            self.metric.clone(),
            potential,
            self.catalog.clone(),
            self.sample_box.clone(),
        )?;
        sc.margin = self.margin;
        sc.integral_names = self.integral_names.clone();
        Ok(sc)
    }

    pub fn sampler(&self, seed: u64) -> HaltonSampler {
        HaltonSampler::new(self.sample_box.clone(), seed).with_margin(self.margin)
    }

    pub fn samples(&self, count: usize, seed: u64) -> Vec<Sample> {
        self.sampler(seed).points(self.metric.chart(), count)
    }

    pub fn equations(&self) -> Result<EquationsOfMotion, DynamicsError> {
        match &self.potential {
            Some(v) => EquationsOfMotion::from_potential(self.metric.clone(), v.clone()),
            None => EquationsOfMotion::new(self.metric.clone(), self.force.clone()),
        }
    }

    pub fn expected_named(&self, label: &str) -> Option<&ExpectedSymmetry> {
        self.expected.iter().find(|e| e.label == label)
    }

    /// Runs one entry through `lie_conditions` or `noether_conditions`.
    pub fn check(&self, entry: &ExpectedSymmetry, samples: &[Sample], tol: f64) -> Result<EntryCheck, SymmetryError> {
        let (residual, passed) = match &entry.kind {
            ExpectedKind::Lie => {
                let r = lie_conditions(&entry.vector, &self.metric, &self.force, samples, tol)?;
                (r.max_residual(), r.passed)
            }
            ExpectedKind::Noether { gauge, .. } => {
                let v = self.potential.as_ref().ok_or(SymmetryError::NotGradient(self.name.clone()))?;
                let r = noether_conditions(&entry.vector, &self.metric, v, gauge, samples, tol)?;
                (r.max_residual(), r.passed)
            }
        };
        Ok(EntryCheck {
            label: entry.label.clone(),
            kind: entry.kind.label(),
            provenance: entry.provenance.clone(),
            status: entry.status.label(),
            residual,
            passed,
        })
    }

    /// Checks every expected entry on `count` samples from `seed`.
    pub fn check_expected(&self, count: usize, seed: u64, tol: f64) -> Result<Vec<EntryCheck>, SymmetryError> {
        let samples = self.samples(count, seed);
        self.expected.iter().map(|e| self.check(e, &samples, tol)).collect()
    }

    /// The Noether integral of an expected Noether entry.
    pub fn integral(&self, entry: &ExpectedSymmetry) -> Option<NoetherIntegral> {
        let (ExpectedKind::Noether { case, gauge }, Some(v)) = (&entry.kind, &self.potential) else {
            return None;
        };
        let name = self.integral_names.iter().find(|(g, _)| *g == entry.label).map(|(_, i)| i.clone());
        Some(NoetherIntegral::new(
            name.unwrap_or_else(|| format!("I[{}]", entry.label)),
            *case,
            &entry.vector,
            gauge.clone(),
            &self.metric,
            v,
        ))
    }

    pub(crate) fn noether_entry(&self, spec: NoetherSpec) -> ExpectedSymmetry {
        let v = self.potential.as_ref().expect("Noether entries need a potential");
        let samples = self.samples(24, 7);
        let p = fit_gauge_constant(&spec.vector, v, &spec.base_gauge, &spec.kernel, &samples);
        let gauge = spec.base_gauge.add(&number(p).mul(&spec.kernel));
        ExpectedSymmetry {
            label: spec.label,
            vector: spec.vector,
            kind: ExpectedKind::Noether { case: spec.case, gauge },
            provenance: spec.provenance,
            status: spec.status,
        }
    }
}

/// A Noether entry whose gauge is `base + p·kernel` with `p` fitted.
pub(crate) struct NoetherSpec {
    pub label: String,
    pub vector: SymmetryVector,
    pub case: NoetherCase,
    pub base_gauge: Expression,
    pub kernel: Expression,
    pub provenance: String,
    pub status: EntryStatus,
}

impl NoetherSpec {
    /// `X` with gauge `p t`.
    pub fn case1(label: impl Into<String>, vector: SymmetryVector, provenance: impl Into<String>) -> Self {
        let case = if vector.is_zero() || vector.eta().iter().all(Expression::is_zero) {
            NoetherCase::TimeTranslation
        } else {
            NoetherCase::I
        };
        NoetherSpec {
            label: label.into(),
            vector,
            case,
            base_gauge: Expression::zero(),
            kernel: Expression::time(),
            provenance: provenance.into(),
            status: EntryStatus::Quoted,
        }
    }

    /// `ξ∂_t + T Hⁱ∂_i` with gauge `T'Φ + p∫T`, where `Φ` generates `H`.
    pub fn case2(
        label: impl Into<String>,
        xi: Expression,
        t_factor: &Expression,
        t_integral: &Expression,
        h: &crate::collineation::CollineationClaim,
        provenance: impl Into<String>,
    ) -> Self {
        let phi = h.gradient.clone().expect("Case II generators are gradient");
        NoetherSpec {
            label: label.into(),
            vector: h.vector.scaled(t_factor).with_time_component(xi),
            case: NoetherCase::II,
            base_gauge: t_factor.diff_time().mul(&phi),
            kernel: t_integral.clone(),
            provenance: provenance.into(),
            status: EntryStatus::Quoted,
        }
    }

    pub fn status(mut self, status: EntryStatus) -> Self {
        self.status = status;
        self
    }
}

/// A constant that stays exact when it is a small rational.
pub(crate) fn number(x: f64) -> Expression {
    match simple_rational(x, 64, 1e-12) {
        Some((p, q)) => Expression::ratio(p, q),
        None => Expression::real(x),
    }
}

/// Least-squares `p` in `V,_k ηᵏ + V ξ,_t + (f₀ + p q),_t = 0`.
fn fit_gauge_constant(
    x: &SymmetryVector,
    potential: &Expression,
    base: &Expression,
    kernel: &Expression,
    samples: &[Sample],
) -> f64 {
    let n = x.dim();
    let dv = potential.gradient(n);
    let base_t = base.diff_time();
    let q_t = kernel.diff_time();
    let xi_t = x.xi().diff_time();
    let (mut num, mut den) = (0.0, 0.0);
    for s in samples {
        let ev = |e: &Expression| e.eval(&s.x, Some(s.t));
        let residual = (|| -> Result<(f64, f64), crate::expr::EvalError> {
            let mut r = ev(potential)? * ev(&xi_t)? + ev(&base_t)?;
            for (k, d) in dv.iter().enumerate() {
                r += ev(d)? * ev(&x.eta()[k])?;
            }
            Ok((r, ev(&q_t)?))
        })();
        if let Ok((r, q)) = residual {
            if r.is_finite() && q.is_finite() {
                num += r * q;
                den += q * q;
            }
        }
    }
    if den == 0.0 {
        return 0.0;
    }
    let p = -num / den;
    match simple_rational(p, 64, 1e-9) {
        Some((a, b)) => a as f64 / b as f64,
        None => p,
    }
}

/// `Σ cₐ Xₐ` over named catalog vectors.
pub(crate) fn combination(catalog: &CollineationBasis, terms: &[(f64, &str)]) -> SymmetryVector {
    let chart = catalog.claims[0].vector.chart().clone();
    let vectors: Vec<(f64, &SymmetryVector)> = terms
        .iter()
        .map(|(c, name)| (*c, &catalog.get(name).unwrap_or_else(|| panic!("catalog has no `{name}`")).vector))
        .collect();
    let mut out = SymmetryVector::zero(chart.clone());
    for (c, v) in vectors {
        out = out.plus(&v.scaled(&number(c)));
    }
    out
}
