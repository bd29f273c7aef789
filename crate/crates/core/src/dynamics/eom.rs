use super::DynamicsError;
use crate::expr::Expression;
use crate::geometry::{ForceField, Metric};

/// `ẍⁱ + Γⁱ_jk ẋʲẋᵏ = Fⁱ` on a metric with a time-independent force.
#[derive(Clone, Debug)]
pub struct EquationsOfMotion {
    metric: Metric,
    force: ForceField,
    potential: Option<Expression>,
}

impl EquationsOfMotion {
    pub fn new(metric: Metric, force: ForceField) -> Result<Self, DynamicsError> {
        if force.dim() != metric.dim() {
            return Err(DynamicsError::DimensionMismatch {
                expected: metric.dim(),
                found: force.dim(),
                what: "force components",
            });
        }
        metric.christoffel()?;
        Ok(EquationsOfMotion { metric, force, potential: None })
    }

    /// `Fⁱ = −gⁱʲ V,_j`.
    pub fn from_potential(metric: Metric, potential: Expression) -> Result<Self, DynamicsError> {
        let force = ForceField::from_potential(&metric, &potential)?;
        let mut e = Self::new(metric, force)?;
        e.potential = Some(potential);
        Ok(e)
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn force(&self) -> &ForceField {
        &self.force
    }

    pub fn potential(&self) -> Option<&Expression> {
        self.potential.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// `ẍⁱ = −Γⁱ_jk ẋʲẋᵏ + Fⁱ`.
    pub fn acceleration(&self, x: &[f64], v: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        let n = self.dim();
        if x.len() != n || v.len() != n {
            return Err(DynamicsError::DimensionMismatch { expected: n, found: x.len().max(v.len()), what: "state" });
        }
        let gamma = self.metric.christoffel()?.eval(x)?;
        let mut acc = self.force.eval(x)?;
        for (i, a) in acc.iter_mut().enumerate() {
            for j in 0..n {
                for k in 0..n {
                    *a -= gamma.at(i, j, k) * v[j] * v[k];
                }
            }
        }
        if acc.iter().any(|a| !a.is_finite()) {
            return Err(DynamicsError::Geometry(crate::geometry::GeometryError::SingularAt { point: x.to_vec() }));
        }
        Ok(acc)
    }
}

/// First-order form: `state = (x, ẋ)` maps to `(ẋ, ẍ)`.
pub fn eom_rhs(e: &EquationsOfMotion, state: &[f64]) -> Result<Vec<f64>, DynamicsError> {
    let n = e.dim();
    if state.len() != 2 * n {
        return Err(DynamicsError::DimensionMismatch { expected: 2 * n, found: state.len(), what: "state entries" });
    }
    let (x, v) = state.split_at(n);
    let mut out = v.to_vec();
    out.extend(e.acceleration(x, v)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collineation::sphere_metric;
    use crate::expr::parse;

    #[test]
    fn free_euclidean() {
        let e = EquationsOfMotion::new(Metric::euclidean(3), ForceField::zero(3)).unwrap();
        assert_eq!(eom_rhs(&e, &[1.0, 2.0, 3.0, 0.1, 0.2, 0.3]).unwrap(), vec![0.1, 0.2, 0.3, 0.0, 0.0, 0.0]);
        assert!(eom_rhs(&e, &[1.0]).is_err());
    }

    #[test]
    fn sphere_equations() {
        let m = sphere_metric(1);
        let v = parse("cos(theta)*sin(phi)", m.chart()).unwrap();
        let e = EquationsOfMotion::from_potential(m, v).unwrap();
        let (ph, th, dph, dth) = (0.9f64, 0.4f64, 0.3, -0.7);
        let r = eom_rhs(&e, &[ph, th, dph, dth]).unwrap();
        let vph = th.cos() * ph.cos();
        let vth = -th.sin() * ph.sin();
        let want_ph = ph.sin() * ph.cos() * dth * dth - vph;
        let want_th = -2.0 * ph.cos() / ph.sin() * dth * dph - vth / ph.sin().powi(2);
        assert!((r[2] - want_ph).abs() < 1e-13 && (r[3] - want_th).abs() < 1e-13);
    }
}
