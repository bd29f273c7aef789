use std::fmt;

use super::profile::{constant, TimeProfile};
use super::{ResidualBlock, SymmetryError};
use crate::expr::{CoordinateChart, Expression};
use crate::geometry::{metric_lie_values, GeometryError, Metric, Sample, SymmetryVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NoetherCase {
    /// `∂_t`, whose integral is the Hamiltonian.
    TimeTranslation,
    /// `2ψ t∂_t + Yⁱ∂_i` with gauge `pt`.
    I,
    /// `2ψ (∫T)∂_t + T Hⁱ∂_i` with gauge `T'H + p∫T`.
    II,
}

impl fmt::Display for NoetherCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoetherCase::TimeTranslation => "autonomous",
            NoetherCase::I => "Case I",
            NoetherCase::II => "Case II",
        })
    }
}

/// A Noether point symmetry with its gauge function and generating data.
#[derive(Clone, Debug)]
pub struct NoetherSymmetry {
    pub name: String,
    pub vector: SymmetryVector,
    pub case: NoetherCase,
    /// Homothetic factor of the generator.
    pub psi: f64,
    pub p: f64,
    /// `m` of `T'' = mT` (Case II).
    pub m: Option<f64>,
    pub profile: Option<TimeProfile>,
    /// Gauge function `f(t, x)`.
    pub gauge: Expression,
    /// `Y` (Case I) or the gradient field `Hⁱ` (Case II).
    pub generator: SymmetryVector,
    /// `H` with `H_,i = g_ij Hʲ` (Case II).
    pub generator_function: Option<Expression>,
    /// Coefficients of `Y` over the searched basis, by claim name.
    pub coefficients: Vec<(String, f64)>,
}

impl NoetherSymmetry {
    pub fn time_translation(chart: CoordinateChart) -> Self {
        NoetherSymmetry {
            name: "d_t".into(),
            vector: SymmetryVector::time_translation(chart.clone()),
            case: NoetherCase::TimeTranslation,
            psi: 0.0,
            p: 0.0,
            m: None,
            profile: None,
            gauge: Expression::zero(),
            generator: SymmetryVector::zero(chart),
            generator_function: None,
            coefficients: Vec::new(),
        }
    }

    /// `X = 2ψ t∂_t + Yⁱ∂_i`, `f = pt`.
    pub fn case1(name: impl Into<String>, y: SymmetryVector, psi: f64, p: f64) -> Result<Self, SymmetryError> {
        if !y.is_time_independent() {
            return Err(SymmetryError::TimeDependent { what: "Case I generator" });
        }
        let t = Expression::time();
        let vector = y.with_time_component(constant(2.0 * psi).mul(&t));
        Ok(NoetherSymmetry {
            name: name.into(),
            vector,
            case: NoetherCase::I,
            psi,
            p,
            m: None,
            profile: None,
            gauge: constant(p).mul(&t),
            generator: y,
            generator_function: None,
            coefficients: Vec::new(),
        })
    }

    /// `X = 2ψ (∫T)∂_t + T Hⁱ∂_i`, `f = T'H + p∫T`.
    pub fn case2(
        name: impl Into<String>,
        h: SymmetryVector,
        h_function: Expression,
        psi: f64,
        p: f64,
        profile: TimeProfile,
    ) -> Result<Self, SymmetryError> {
        if !h.is_time_independent() || h_function.references_time() {
            return Err(SymmetryError::TimeDependent { what: "Case II generator" });
        }
        let t_expr = profile.expr();
        let integral = profile.integral_expr();
        let vector = h.scaled(&t_expr).with_time_component(constant(2.0 * psi).mul(&integral));
        let gauge = profile.derivative_expr().mul(&h_function).add(&constant(p).mul(&integral));
        Ok(NoetherSymmetry {
            name: name.into(),
            vector,
            case: NoetherCase::II,
            psi,
            p,
            m: Some(profile.m),
            profile: Some(profile),
            gauge,
            generator: h,
            generator_function: Some(h_function),
            coefficients: Vec::new(),
        })
    }

    pub fn with_coefficients(mut self, coefficients: Vec<(String, f64)>) -> Self {
        self.coefficients = coefficients;
        self
    }

    /// [`noether_conditions`] for this symmetry and its gauge.
    pub fn check(
        &self,
        metric: &Metric,
        potential: &Expression,
        samples: &[Sample],
        tol: f64,
    ) -> Result<NoetherConditionReport, SymmetryError> {
        noether_conditions(&self.vector, metric, potential, &self.gauge, samples, tol)
    }
}

/// Residuals of the Noether conditions over a sample set.
#[derive(Clone, Debug)]
pub struct NoetherConditionReport {
    /// `ℒ_η g_ij − ξ,_t g_ij`.
    pub metric: ResidualBlock,
    /// `V,_k ηᵏ + V ξ,_t + f,_t`.
    pub potential: ResidualBlock,
    /// `g_ij ηʲ,_t − f,_i`.
    pub gauge: ResidualBlock,
    /// `ξ,_k`.
    pub xi_gradient: ResidualBlock,
    pub points_skipped: usize,
    pub tolerance: f64,
    pub passed: bool,
}

impl NoetherConditionReport {
    pub fn blocks(&self) -> [&ResidualBlock; 4] {
        [&self.metric, &self.potential, &self.gauge, &self.xi_gradient]
    }

    pub fn max_residual(&self) -> f64 {
        self.blocks().iter().map(|b| b.max).fold(0.0, f64::max)
    }

    pub fn points_used(&self) -> usize {
        self.metric.per_sample.len()
    }
}

/// Evaluates the Noether conditions for `x` with potential `V` and gauge `f`.
pub fn noether_conditions(
    x: &SymmetryVector,
    metric: &Metric,
    potential: &Expression,
    gauge: &Expression,
    samples: &[Sample],
    tol: f64,
) -> Result<NoetherConditionReport, SymmetryError> {
    let n = metric.dim();
    if x.dim() != n {
        return Err(SymmetryError::DimensionMismatch { expected: n, found: x.dim(), what: "vector components" });
    }
    if potential.references_time() {
        return Err(SymmetryError::TimeDependent { what: "potential" });
    }
    let jet = x.jet();
    let dv = potential.gradient(n);
    let df = gauge.gradient(n);
    let df_t = gauge.diff_time();
    let mut report = NoetherConditionReport {
        metric: ResidualBlock::new("metric"),
        potential: ResidualBlock::new("potential"),
        gauge: ResidualBlock::new("gauge"),
        xi_gradient: ResidualBlock::new("xi-gradient"),
        points_skipped: 0,
        tolerance: tol,
        passed: false,
    };
    for s in samples {
        let outcome = (|| -> Result<[f64; 4], GeometryError> {
            let jv = jet.eval(&s.x, s.t)?;
            let pm = metric.eval_point(&s.x)?;
            let ev = |e: &Expression| e.eval(&s.x, Some(s.t));
            let r_metric = (metric_lie_values(&jv, &pm) - &pm.g * jv.xi_t).amax();
            let mut r_potential = ev(potential)? * jv.xi_t + ev(&df_t)?;
            for (k, d) in dv.iter().enumerate() {
                r_potential += ev(d)? * jv.eta[k];
            }
            let mut r_gauge = 0.0f64;
            for i in 0..n {
                let mut v = -ev(&df[i])?;
                for j in 0..n {
                    v += pm.g[(i, j)] * jv.eta_t[j];
                }
                r_gauge = r_gauge.max(v.abs());
            }
            let r_xi = jv.xi_x.iter().map(|v| v.abs()).fold(0.0, f64::max);
            Ok([r_metric, r_potential.abs(), r_gauge, r_xi])
        })();
        match outcome {
            Ok([a, b, c, d]) => {
                report.metric.record(a);
                report.potential.record(b);
                report.gauge.record(c);
                report.xi_gradient.record(d);
            }
            Err(e) => {
                log::debug!("skipping sample {:?}: {e}", s.x);
                report.points_skipped += 1;
            }
        }
    }
    report.passed = report.points_used() > 0 && report.max_residual() <= tol;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::geometry::{HaltonSampler, SampleBox};

    #[test]
    fn free_particle_projective_noether_symmetry() {
        let m = Metric::euclidean(1);
        let pts = HaltonSampler::new(SampleBox::cube(1, -2.0, 2.0), 0).points(m.chart(), 20);
        let v = SymmetryVector::parse(m.chart(), "t^2", &["t*x1"]).unwrap();
        let f = parse("x1^2/2", m.chart()).unwrap();
        let r = noether_conditions(&v, &m, &Expression::zero(), &f, &pts, 1e-12).unwrap();
        assert!(r.passed, "{:?}", r.blocks().map(|b| b.max));
        let r = noether_conditions(&v, &m, &Expression::zero(), &Expression::zero(), &pts, 1e-12).unwrap();
        assert!(!r.passed);
        assert!(r.gauge.max > 0.1);
    }

    #[test]
    fn time_translation_always_passes() {
        let m = Metric::euclidean(2);
        let pts = HaltonSampler::new(SampleBox::cube(2, -2.0, 2.0), 0).points(m.chart(), 20);
        let s = NoetherSymmetry::time_translation(m.chart().clone());
        let v = parse("x1^3*sin(x2) + exp(x1)", m.chart()).unwrap();
        assert!(s.check(&m, &v, &pts, 0.0).unwrap().passed);
    }

    #[test]
    fn case2_shape() {
        let m = Metric::euclidean(1);
        let h = SymmetryVector::parse(m.chart(), "0", &["x1"]).unwrap();
        let hf = parse("x1^2/2", m.chart()).unwrap();
        let s = NoetherSymmetry::case2("H", h, hf, 1.0, 0.0, TimeProfile::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(s.vector.display().to_string(), "(t^2)*d_t + (t*x1)*d_x1");
        let pts = HaltonSampler::new(SampleBox::cube(1, -2.0, 2.0), 0).points(m.chart(), 20);
        assert!(s.check(&m, &Expression::zero(), &pts, 1e-12).unwrap().passed);
    }
}
