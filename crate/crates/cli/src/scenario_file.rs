//! Declarative scenario files.
//!
//! ```toml
//! schema_version = 1
//! name = "plane oscillator"
//!
//! [metric]
//! coordinates = ["x", "y"]
//! diagonal = ["1", "1"]
//!
//! [potential]
//! V = "(x^2 + y^2)/2"
//!
//! [[vectors]]
//! name = "rotation"
//! eta = ["y", "-x"]
//! check = "noether"
//!
//! [simulate]
//! x0 = [1.0, 0.0]
//! v0 = [0.0, 0.5]
//! t_span = [0.0, 10.0]
//!
//! [check]
//! lower = [-2.0, -2.0]
//! upper = [2.0, 2.0]
//! ```

use std::path::Path;

use geonoether::collineation::{
    solve_determining_equations, CollineationBasis, CollineationClaim, CollineationKind, SolverKind,
};
use geonoether::expr::{parse, CoordinateChart, Expression};
use geonoether::scenarios::{EntryStatus, ExpectedKind, ExpectedSymmetry, Scenario};
use geonoether::symmetry::NoetherCase;
use geonoether::{ForceField, Metric, SampleBox, SymmetryVector};
use serde::Deserialize;

use crate::InputError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct Document {
    schema_version: u32,
    name: Option<String>,
    metric: MetricSection,
    potential: Option<PotentialSection>,
    force: Option<ForceSection>,
    #[serde(default)]
    vectors: Vec<VectorSection>,
    simulate: Option<SimulateSection>,
    check: Option<CheckSection>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct MetricSection {
    coordinates: Vec<String>,
    diagonal: Option<Vec<String>>,
    components: Option<Vec<Vec<String>>>,
    /// Singular loci `expr = 0` that sampling and integration keep away from.
    #[serde(default)]
    excluded: Vec<String>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct PotentialSection {
    #[serde(rename = "V")]
    v: String,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct ForceSection {
    components: Vec<String>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct VectorSection {
    name: String,
    #[serde(default = "zero_text")]
    xi: String,
    eta: Vec<String>,
    /// `lie`, `noether`, `KV`, `HV`, `AC` or `SPC`.
    check: String,
    gauge: Option<String>,
    /// Noether case `I` (default) or `II`.
    case: Option<String>,
    psi: Option<f64>,
    phi: Option<String>,
    /// Function whose gradient the vector is, for Case II searches.
    gradient: Option<String>,
}

fn zero_text() -> String {
    "0".into()
}

/// Initial data and integrator settings of a file.
#[derive(Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub x0: Option<Vec<f64>>,
    pub v0: Option<Vec<f64>>,
    pub t_span: Option<[f64; 2]>,
    pub method: Option<String>,
    pub step: Option<f64>,
    pub tolerance: Option<f64>,
}

/// Sampling settings of a file.
#[derive(Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct CheckSection {
    pub tolerance: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub lower: Option<Vec<f64>>,
    pub upper: Option<Vec<f64>>,
    pub time: Option<[f64; 2]>,
    pub margin: Option<f64>,
}

/// A scenario read from a file with its optional sections.
#[derive(Debug)]
pub struct LoadedFile {
    pub scenario: Scenario,
    pub simulate: SimulateSection,
    pub check: CheckSection,
}

fn bad(location: impl Into<String>, message: impl std::fmt::Display) -> InputError {
    InputError(format!("{}: {message}", location.into()))
}

fn expr(chart: &CoordinateChart, text: &str, location: String) -> Result<Expression, InputError> {
    parse(text, chart).map_err(|e| bad(location, format!("`{text}`: {e}")))
}

fn expr_list(chart: &CoordinateChart, texts: &[String], location: &str) -> Result<Vec<Expression>, InputError> {
    texts.iter().enumerate().map(|(i, t)| expr(chart, t, format!("{location}[{i}]"))).collect()
}

fn expect_len(found: usize, n: usize, location: &str) -> Result<(), InputError> {
    if found == n {
        Ok(())
    } else {
        Err(bad(location, format!("expected {n} entries, found {found}")))
    }
}

pub fn load(path: &Path) -> Result<LoadedFile, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(path.display().to_string(), e))?;
    parse_document(&text, &path.display().to_string())
}

/// Parses file contents; `origin` prefixes every error location.
pub fn parse_document(text: &str, origin: &str) -> Result<LoadedFile, InputError> {
    let doc: Document = toml::from_str(text).map_err(|e| bad(origin, e.to_string().trim_end()))?;
    let at = |loc: &str| format!("{origin}: {loc}");
    if doc.schema_version != SCHEMA_VERSION {
        return Err(bad(
            at("schema_version"),
            format!("unsupported version {}; expected {SCHEMA_VERSION}", doc.schema_version),
        ));
    }
    let chart = CoordinateChart::new(&doc.metric.coordinates).map_err(|e| bad(at("metric.coordinates"), e))?;
    let n = chart.dim();
    let components = match (&doc.metric.diagonal, &doc.metric.components) {
        (Some(d), None) => {
            expect_len(d.len(), n, &at("metric.diagonal"))?;
            let diag = expr_list(&chart, d, &at("metric.diagonal"))?;
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { diag[i].clone() } else { Expression::zero() }).collect())
                .collect()
        }
        (None, Some(rows)) => {
            expect_len(rows.len(), n, &at("metric.components"))?;
            let mut out = Vec::with_capacity(n);
            for (i, row) in rows.iter().enumerate() {
                let loc = at(&format!("metric.components[{i}]"));
                expect_len(row.len(), n, &loc)?;
                out.push(expr_list(&chart, row, &loc)?);
            }
            out
        }
        _ => return Err(bad(at("metric"), "give exactly one of `diagonal` and `components`")),
    };
    let mut chart = chart;
    for (i, text) in doc.metric.excluded.iter().enumerate() {
        let e = expr(&chart, text, at(&format!("metric.excluded[{i}]")))?;
        chart = chart.with_excluded(format!("{text} = 0"), e);
    }
    let metric = Metric::new(chart.clone(), components).map_err(|e| bad(at("metric"), e))?;

    let check = doc.check.unwrap_or_default();
    let lower = check.lower.clone().unwrap_or_else(|| vec![-1.0; n]);
    let upper = check.upper.clone().unwrap_or_else(|| vec![1.0; n]);
    expect_len(lower.len(), n, &at("check.lower"))?;
    expect_len(upper.len(), n, &at("check.upper"))?;
    if lower.iter().zip(&upper).any(|(l, u)| !(l < u)) {
        return Err(bad(at("check"), "every lower bound must lie below its upper bound"));
    }
    let time = check.time.unwrap_or([0.0, 1.0]);
    let sample_box = SampleBox::new(lower, upper, (time[0], time[1]));

    let mut claims = Vec::new();
    let mut expected = Vec::new();
    for (k, v) in doc.vectors.iter().enumerate() {
        let loc = at(&format!("vectors[{k}] ({})", v.name));
        expect_len(v.eta.len(), n, &format!("{loc}.eta"))?;
        let xi = expr(&chart, &v.xi, format!("{loc}.xi"))?;
        let eta = expr_list(&chart, &v.eta, &format!("{loc}.eta"))?;
        let vector = SymmetryVector::new(chart.clone(), xi, eta).map_err(|e| bad(&loc, e))?;
        let provenance = format!("{origin}, vectors[{k}]");
        match v.check.as_str() {
            "lie" => expected.push(ExpectedSymmetry::lie(&v.name, vector, provenance)),
            "noether" => {
                let gauge = match &v.gauge {
                    Some(g) => expr(&chart, g, format!("{loc}.gauge"))?,
                    None => Expression::zero(),
                };
                let case = match v.case.as_deref() {
                    None | Some("I") => NoetherCase::I,
                    Some("II") => NoetherCase::II,
                    Some(other) => return Err(bad(format!("{loc}.case"), format!("`{other}` is not I or II"))),
                };
                expected.push(ExpectedSymmetry {
                    label: v.name.clone(),
                    vector,
                    kind: ExpectedKind::Noether { case, gauge },
                    provenance,
                    status: EntryStatus::Quoted,
                });
            }
            kind => {
                let kind = match kind {
                    "KV" => CollineationKind::Killing,
                    "HV" => CollineationKind::Homothetic {
                        psi: v.psi.ok_or_else(|| bad(format!("{loc}.psi"), "an HV needs its factor psi"))?,
                    },
                    "AC" => CollineationKind::Affine,
                    "SPC" => {
                        let text = v.phi.as_ref().ok_or_else(|| bad(format!("{loc}.phi"), "an SPC needs phi"))?;
                        CollineationKind::SpecialProjective { phi: expr(&chart, text, format!("{loc}.phi"))? }
                    }
                    other => {
                        return Err(bad(
                            format!("{loc}.check"),
                            format!("`{other}` is not one of lie, noether, KV, HV, AC, SPC"),
                        ))
                    }
                };
                if !vector.is_time_independent() || !vector.xi().is_zero() {
                    return Err(bad(&loc, "a collineation is a spatial, time-independent field"));
                }
                let mut claim = CollineationClaim::new(&v.name, vector, kind);
                if let Some(g) = &v.gradient {
                    claim = claim.with_gradient(expr(&chart, g, format!("{loc}.gradient"))?);
                }
                claims.push(claim);
            }
        }
    }
    let mut notes = Vec::new();
    if claims.iter().all(|c| c.kind.homothetic_factor().is_none()) && metric.is_constant() {
        for kind in [SolverKind::Killing, SolverKind::Homothetic] {
            if let Ok(basis) = solve_determining_equations(&metric, kind, 1) {
                claims.extend(basis.claims);
            }
        }
        notes.push("catalog solved from the constant metric".to_string());
    }
    let name = doc.name.clone().unwrap_or_else(|| origin.to_string());
    let catalog = CollineationBasis::catalog(name.clone(), claims);
    let mut scenario = match (doc.potential, doc.force) {
        (Some(p), None) => {
            let v = expr(&chart, &p.v, at("potential.V"))?;
            Scenario::conservative(name, metric, v, catalog, sample_box).map_err(|e| bad(at("potential"), e))?
        }
        (None, Some(f)) => {
            expect_len(f.components.len(), n, &at("force.components"))?;
            let comps = expr_list(&chart, &f.components, &at("force.components"))?;
            let force = ForceField::new(comps).map_err(|e| bad(at("force"), e))?;
            Scenario::forced(name, metric, force, catalog, sample_box)
        }
        (None, None) => Scenario::conservative(name, metric, Expression::zero(), catalog, sample_box)
            .map_err(|e| bad(at("potential"), e))?,
        (Some(_), Some(_)) => return Err(bad(at("force"), "give a potential or a force, not both")),
    };
    if expected.iter().any(|e| e.is_noether()) && scenario.potential.is_none() {
        return Err(bad(at("vectors"), "Noether checks need a potential"));
    }
    scenario.expected = expected;
    scenario.notes = notes;
    if let Some(m) = check.margin {
        scenario.margin = m;
    }
    let simulate = doc.simulate.unwrap_or_default();
    for (field, value) in [("x0", &simulate.x0), ("v0", &simulate.v0)] {
        if let Some(v) = value {
            expect_len(v.len(), n, &at(&format!("simulate.{field}")))?;
        }
    }
    Ok(LoadedFile { scenario, simulate, check })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PLANE: &str = r#"
schema_version = 1
name = "plane"

[metric]
coordinates = ["x", "y"]
diagonal = ["1", "1"]

[potential]
V = "(x^2 + y^2)/2"

[[vectors]]
name = "rotation"
eta = ["y", "-x"]
check = "noether"
"#;

    #[test]
    fn loads_and_solves_a_flat_catalog() {
        let f = parse_document(PLANE, "plane.toml").unwrap();
        assert_eq!(f.scenario.expected.len(), 1);
        assert_eq!(f.scenario.catalog.count("KV"), 3);
        assert_eq!(f.scenario.catalog.count("HV"), 1);
        let checks = f.scenario.check_expected(50, 0, 1e-10).unwrap();
        assert!(checks[0].passed);
    }

    #[test]
    fn errors_name_their_location() {
        let e = parse_document(&PLANE.replace("\"-x\"", "\"-z\""), "p.toml").unwrap_err();
        assert!(e.0.contains("vectors[0] (rotation).eta[1]") && e.0.contains("`z`"), "{}", e.0);
        let e = parse_document(&PLANE.replace("schema_version = 1", "schema_version = 7"), "p.toml").unwrap_err();
        assert!(e.0.contains("schema_version"), "{}", e.0);
        let e = parse_document(&PLANE.replace("diagonal", "diagonl"), "p.toml").unwrap_err();
        assert!(e.0.contains("line"), "{}", e.0);
        let e = parse_document(&PLANE.replace("[\"1\", \"1\"]", "[\"1\"]"), "p.toml").unwrap_err();
        assert!(e.0.contains("metric.diagonal: expected 2 entries, found 1"), "{}", e.0);
    }
}
