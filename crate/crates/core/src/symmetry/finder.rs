use nalgebra::DMatrix;

use super::noether::NoetherSymmetry;
use super::profile::{constant, TimeProfile};
use super::SymmetryError;
use crate::collineation::{CollineationBasis, CollineationClaim};
use crate::expr::Expression;
use crate::geometry::{HaltonSampler, Metric, Sample, SymmetryVector};
use crate::linalg::{numeric_nullspace, simple_rational, NumericNullspace};

/// Residual bound for re-verifying found symmetries.
pub const VERIFY_TOLERANCE: f64 = 1e-8;

/// Sampling and threshold settings shared by both searches.
#[derive(Clone, Debug)]
pub struct FinderConfig {
    pub sampler: HaltonSampler,
    /// Minimum number of fitting samples; raised to `3 × (unknowns + 1)` when smaller.
    pub samples: usize,
    /// Relative singular-value threshold of the nullspace.
    pub rank_threshold: f64,
    pub verify_tolerance: f64,
}

impl FinderConfig {
    pub fn new(sampler: HaltonSampler) -> Self {
        FinderConfig { sampler, samples: 60, rank_threshold: 1e-9, verify_tolerance: VERIFY_TOLERANCE }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    fn fit_points(&self, metric: &Metric, unknowns: usize) -> Vec<Sample> {
        self.sampler.points(metric.chart(), self.samples.max(3 * (unknowns + 1)))
    }

    fn fresh_points(&self, metric: &Metric, unknowns: usize) -> Vec<Sample> {
        let fresh = self.sampler.reseeded(self.sampler.seed().wrapping_add(1));
        fresh.points(metric.chart(), self.samples.max(3 * (unknowns + 1)))
    }
}

/// Outcome of a Noether symmetry search.
#[derive(Clone, Debug, Default)]
pub struct NoetherSearch {
    pub symmetries: Vec<NoetherSymmetry>,
    pub warnings: Vec<String>,
    /// Singular values of the (column-equilibrated) sample matrix.
    pub singular_values: Vec<f64>,
    /// Candidates that failed re-verification, with their residual.
    pub rejected: Vec<(String, f64)>,
}

impl NoetherSearch {
    pub fn len(&self) -> usize {
        self.symmetries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symmetries.is_empty()
    }
}

fn snap(x: f64) -> f64 {
    match simple_rational(x, 64, 1e-9) {
        Some((p, q)) => p as f64 / q as f64,
        None => x,
    }
}

fn ambiguity_warning(ns: &NumericNullspace) -> Option<String> {
    if !ns.is_ambiguous() {
        return None;
    }
    let above = ns.ambiguous.iter().filter(|&&s| s > ns.threshold).count();
    let below = ns.ambiguous.len() - above;
    let msg = format!(
        "rank decision ambiguous: singular values {:?} lie within 10x of threshold {:.3e}; \
         nullspace dimension is {} as decided, {} if they all count as zero, {} if none do",
        ns.ambiguous,
        ns.threshold,
        ns.dim(),
        ns.dim() + above,
        ns.dim() - below
    );
    log::warn!("{msg}");
    Some(msg)
}

fn lie_derivative_of(v: &SymmetryVector, grad: &[Expression], s: &Sample) -> Result<f64, SymmetryError> {
    let mut acc = 0.0;
    for (eta, d) in v.eta().iter().zip(grad) {
        if !eta.is_zero() {
            acc += eta.eval(&s.x, None)? * d.eval(&s.x, None)?;
        }
    }
    Ok(acc)
}

fn sample_matrix(
    samples: &[Sample],
    columns: usize,
    row: impl Fn(&Sample) -> Result<Vec<f64>, SymmetryError>,
) -> Result<DMatrix<f64>, SymmetryError> {
    let rows: Vec<Vec<f64>> = samples
        .iter()
        .filter_map(|s| match row(s) {
            Ok(r) if r.iter().all(|v| v.is_finite()) => Some(r),
            Ok(_) => None,
            Err(e) => {
                log::debug!("skipping sample {:?}: {e}", s.x);
                None
            }
        })
        .collect();
    if rows.is_empty() {
        return Err(SymmetryError::NoSamples);
    }
    Ok(DMatrix::from_fn(rows.len(), columns, |r, c| rows[r][c]))
}

fn combination_name(terms: &[(String, f64)]) -> String {
    let mut out = String::new();
    for (name, c) in terms {
        let mag = c.abs();
        let sign = if *c < 0.0 { "-" } else { "+" };
        if out.is_empty() {
            if *c < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if (mag - 1.0).abs() > 1e-12 {
            match simple_rational(mag, 64, 1e-9) {
                Some((p, 1)) => out.push_str(&format!("{p}*")),
                Some((p, q)) => out.push_str(&format!("({p}/{q})*")),
                None => out.push_str(&format!("{mag:.6}*")),
            }
        }
        out.push_str(name);
    }
    out
}

fn verify(
    candidate: NoetherSymmetry,
    metric: &Metric,
    potential: &Expression,
    fresh: &[Sample],
    tol: f64,
    search: &mut NoetherSearch,
) -> Result<(), SymmetryError> {
    let report = candidate.check(metric, potential, fresh, tol)?;
    if report.passed {
        search.symmetries.push(candidate);
    } else {
        let msg =
            format!("candidate {} failed re-verification (residual {:.3e})", candidate.name, report.max_residual());
        log::warn!("{msg}");
        search.warnings.push(msg);
        search.rejected.push((candidate.name, report.max_residual()));
    }
    Ok(())
}

/// Case I: combinations `Y = Σ c_a Y_a` of the basis' Killing and homothetic
/// claims with `ℒ_Y V + 2ψ_Y V + p = 0`, where `ψ_Y = Σ c_a ψ_a`.
///
/// Solutions come from the sample nullspace, put in reduced row-echelon form
/// over the columns `(c_1, …, c_k, p)`, and are re-verified on a fresh sample set.
pub fn find_noether_case1(
    basis: &CollineationBasis,
    metric: &Metric,
    potential: &Expression,
    config: &FinderConfig,
) -> Result<NoetherSearch, SymmetryError> {
    let claims = basis.homothetic_algebra();
    let mut search = NoetherSearch::default();
    if claims.is_empty() {
        return Ok(search);
    }
    let n = metric.dim();
    let k = claims.len();
    let psis: Vec<f64> = claims.iter().map(|c| c.kind.homothetic_factor().unwrap_or(0.0)).collect();
    let grad = potential.gradient(n);
    let samples = config.fit_points(metric, k + 1);
    let matrix = sample_matrix(&samples, k + 1, |s| {
        let v = potential.eval(&s.x, None)?;
        let mut row = Vec::with_capacity(k + 1);
        for (claim, psi) in claims.iter().zip(&psis) {
            row.push(lie_derivative_of(&claim.vector, &grad, s)? + 2.0 * psi * v);
        }
        row.push(1.0);
        Ok(row)
    })?;
    let ns = numeric_nullspace(&matrix, config.rank_threshold);
    search.singular_values = ns.singular_values.clone();
    search.warnings.extend(ambiguity_warning(&ns));
    let fresh = config.fresh_points(metric, k + 1);
    for vector in &ns.basis {
        let coeffs: Vec<f64> = vector.iter().map(|&c| snap(c)).collect();
        let p = coeffs[k];
        let terms: Vec<(String, f64)> =
            claims.iter().zip(&coeffs).filter(|(_, c)| **c != 0.0).map(|(cl, c)| (cl.name.clone(), *c)).collect();
        if terms.is_empty() {
            continue;
        }
        let y = claims
            .iter()
            .zip(&coeffs)
            .filter(|(_, c)| **c != 0.0)
            .fold(SymmetryVector::zero(metric.chart().clone()), |acc, (cl, c)| {
                acc.plus(&cl.vector.scaled(&constant(*c)))
            });
        let psi = snap(psis.iter().zip(&coeffs).map(|(a, b)| a * b).sum());
        let candidate = NoetherSymmetry::case1(combination_name(&terms), y, psi, p)?.with_coefficients(terms);
        verify(candidate, metric, potential, &fresh, config.verify_tolerance, &mut search)?;
    }
    Ok(search)
}

/// Case II: for a gradient Killing or homothetic claim `H` with function
/// `H(x)`, the constants `(m, p)` with `ℒ_H V + 2ψV + mH + p = 0`, and the
/// two symmetries built from the basis profiles of `T'' = mT`.
pub fn find_noether_case2(
    claim: &CollineationClaim,
    metric: &Metric,
    potential: &Expression,
    config: &FinderConfig,
) -> Result<NoetherSearch, SymmetryError> {
    let h_function = claim.gradient.clone().ok_or_else(|| SymmetryError::NotGradient(claim.name.clone()))?;
    let psi = claim.kind.homothetic_factor().ok_or_else(|| SymmetryError::NotHomothetic(claim.name.clone()))?;
    let n = metric.dim();
    let grad = potential.gradient(n);
    let samples = config.fit_points(metric, 3);
    let matrix = sample_matrix(&samples, 3, |s| {
        let v = potential.eval(&s.x, None)?;
        Ok(vec![lie_derivative_of(&claim.vector, &grad, s)? + 2.0 * psi * v, h_function.eval(&s.x, None)?, 1.0])
    })?;
    let ns = numeric_nullspace(&matrix, config.rank_threshold);
    let mut search = NoetherSearch { singular_values: ns.singular_values.clone(), ..Default::default() };
    search.warnings.extend(ambiguity_warning(&ns));
    if ns.dim() > 1 {
        let msg = format!("{}: H and the constant are dependent on the samples; m and p are not unique", claim.name);
        log::warn!("{msg}");
        search.warnings.push(msg);
    }
    let Some(row) = ns.basis.iter().find(|r| r[0] != 0.0) else {
        return Ok(search);
    };
    let (m, p) = (snap(row[1] / row[0]), snap(row[2] / row[0]));
    let fresh = config.fresh_points(metric, 3);
    for profile in TimeProfile::basis(m) {
        let t_text = profile.expr().to_text(metric.chart());
        let name = format!("T={t_text} on {}", claim.name);
        let candidate = NoetherSymmetry::case2(name, claim.vector.clone(), h_function.clone(), psi, p, profile)?
            .with_coefficients(vec![(claim.name.clone(), 1.0)]);
        verify(candidate, metric, potential, &fresh, config.verify_tolerance, &mut search)?;
    }
    Ok(search)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collineation::flat_projective_catalog;
    use crate::expr::parse;
    use crate::geometry::SampleBox;

    fn config(n: usize) -> FinderConfig {
        FinderConfig::new(HaltonSampler::new(SampleBox::cube(n, -1.5, 1.5), 0))
    }

    #[test]
    fn generic_potential_has_no_case1_symmetry() {
        let basis = flat_projective_catalog(&[1, 1, 1]);
        let m = Metric::euclidean(3);
        let v = parse("x1 + x2^2 + x3^3 + x1*x2*x3", m.chart()).unwrap();
        let found = find_noether_case1(&basis, &m, &v, &config(3)).unwrap();
        assert!(found.is_empty(), "{:?}", found.symmetries.iter().map(|s| &s.name).collect::<Vec<_>>());
    }

    #[test]
    fn central_potential_gives_rotations() {
        let basis = flat_projective_catalog(&[1, 1]);
        let m = Metric::euclidean(2);
        let v = parse("1/(x1^2 + x2^2 + 1)", m.chart()).unwrap();
        let found = find_noether_case1(&basis, &m, &v, &config(2)).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found.symmetries[0].name, "X12");
        assert_eq!(found.symmetries[0].p, 0.0);
    }

    #[test]
    fn free_particle_case2() {
        let basis = flat_projective_catalog(&[1]);
        let m = Metric::euclidean(1);
        let h = basis.get("H").unwrap();
        let found = find_noether_case2(h, &m, &Expression::zero(), &config(1)).unwrap();
        let texts: Vec<String> = found.symmetries.iter().map(|s| s.vector.display().to_string()).collect();
        assert_eq!(texts, ["(2*t)*d_t + (x1)*d_x1", "(t^2)*d_t + (t*x1)*d_x1"]);
        assert_eq!(found.symmetries[0].m, Some(0.0));
    }

    #[test]
    fn oscillator_case2_is_trigonometric() {
        let basis = flat_projective_catalog(&[1]);
        let m = Metric::euclidean(1);
        let v = parse("x1^2/2", m.chart()).unwrap();
        let found = find_noether_case2(basis.get("H").unwrap(), &m, &v, &config(1)).unwrap();
        assert_eq!(found.len(), 2);
        assert_eq!(found.symmetries[0].m, Some(-4.0));
        let s = basis.get("S1").unwrap();
        let found = find_noether_case2(s, &m, &v, &config(1)).unwrap();
        assert_eq!(found.symmetries[0].m, Some(-1.0));
    }

    #[test]
    fn non_gradient_claim_is_rejected() {
        let basis = flat_projective_catalog(&[1, 1]);
        let m = Metric::euclidean(2);
        let err = find_noether_case2(basis.get("X12").unwrap(), &m, &Expression::zero(), &config(2)).unwrap_err();
        assert_eq!(err, SymmetryError::NotGradient("X12".into()));
    }
}
