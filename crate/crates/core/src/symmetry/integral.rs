use super::noether::{NoetherCase, NoetherSymmetry};
use crate::expr::Expression;
use crate::geometry::{GeometryError, Metric, SymmetryVector};

/// `E = ½ g_ij ẋⁱẋʲ + V`.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    metric: Metric,
    potential: Expression,
}

impl Hamiltonian {
    pub fn new(metric: Metric, potential: Expression) -> Self {
        Hamiltonian { metric, potential }
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn potential(&self) -> &Expression {
        &self.potential
    }

    pub fn eval(&self, x: &[f64], v: &[f64]) -> Result<f64, GeometryError> {
        let g = self.metric.eval_components(x)?;
        let n = self.metric.dim();
        let mut kinetic = 0.0;
        for i in 0..n {
            for j in 0..n {
                kinetic += g[(i, j)] * v[i] * v[j];
            }
        }
        Ok(0.5 * kinetic + self.potential.eval(x, None)?)
    }
}

/// `I = ξE − g_ij ηⁱẋʲ + f` for a Noether symmetry `ξ∂_t + ηⁱ∂_i` with gauge `f`.
///
/// For Case I this is `2ψtE − g_ij Yⁱẋʲ + pt`; for Case II
/// `2ψ(∫T)E − T g_ij Hⁱẋʲ + T'H + p∫T`. The time translation gives `E`.
#[derive(Clone, Debug)]
pub struct NoetherIntegral {
    pub name: String,
    pub case: NoetherCase,
    xi: Expression,
    eta: Vec<Expression>,
    gauge: Expression,
    hamiltonian: Hamiltonian,
}

impl NoetherIntegral {
    /// The integral of `vector` with gauge `gauge` for `L = ½g ẋẋ − V`.
    pub fn new(
        name: impl Into<String>,
        case: NoetherCase,
        vector: &SymmetryVector,
        gauge: Expression,
        metric: &Metric,
        potential: &Expression,
    ) -> Self {
        NoetherIntegral {
            name: name.into(),
            case,
            xi: vector.xi().clone(),
            eta: vector.eta().to_vec(),
            gauge,
            hamiltonian: Hamiltonian::new(metric.clone(), potential.clone()),
        }
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.hamiltonian
    }

    /// The energy integral of `∂_t`.
    pub fn energy(metric: &Metric, potential: &Expression) -> Self {
        NoetherIntegral {
            name: "E".into(),
            case: NoetherCase::TimeTranslation,
            xi: Expression::one(),
            eta: vec![Expression::zero(); metric.dim()],
            gauge: Expression::zero(),
            hamiltonian: Hamiltonian::new(metric.clone(), potential.clone()),
        }
    }

    pub fn eval(&self, t: f64, x: &[f64], v: &[f64]) -> Result<f64, GeometryError> {
        let n = self.eta.len();
        let mut out = self.gauge.eval(x, Some(t))?;
        let xi = self.xi.eval(x, Some(t))?;
        if xi != 0.0 {
            out += xi * self.hamiltonian.eval(x, v)?;
        }
        let g = self.hamiltonian.metric.eval_components(x)?;
        for i in 0..n {
            if self.eta[i].is_zero() {
                continue;
            }
            let eta = self.eta[i].eval(x, Some(t))?;
            for j in 0..n {
                out -= g[(i, j)] * eta * v[j];
            }
        }
        Ok(out)
    }
}

impl NoetherIntegral {
    /// `ξE − p_j ẋʲ + f` as text, with `p_j = g_ij ηⁱ` and velocities written `x'`.
    pub fn to_text(&self) -> String {
        let metric = self.hamiltonian.metric();
        let chart = metric.chart();
        let n = self.eta.len();
        let mut terms = Vec::new();
        if !self.xi.is_zero() {
            terms.push(if self.xi.is_one() { "E".to_string() } else { format!("({})*E", self.xi.to_text(chart)) });
        }
        for j in 0..n {
            let p =
                Expression::sum((0..n).map(|i| metric.component(i, j).mul(&self.eta[i])).collect::<Vec<_>>().iter());
            if !p.is_zero() {
                terms.push(format!("-({})*{}'", p.to_text(chart), chart.names()[j]));
            }
        }
        if !self.gauge.is_zero() {
            terms.push(format!("({})", self.gauge.to_text(chart)));
        }
        if terms.is_empty() {
            return "0".into();
        }
        terms.join(" + ").replace("+ -", "- ")
    }
}

pub fn build_noether_integral(s: &NoetherSymmetry, metric: &Metric, potential: &Expression) -> NoetherIntegral {
    NoetherIntegral::new(format!("I[{}]", s.name), s.case, &s.vector, s.gauge.clone(), metric, potential)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::symmetry::TimeProfile;

    #[test]
    fn momentum_sign() {
        let m = Metric::euclidean(1);
        let s = NoetherSymmetry::case1("S1", SymmetryVector::coordinate(m.chart().clone(), 0), 0.0, 0.0).unwrap();
        let i = build_noether_integral(&s, &m, &Expression::zero());
        assert_eq!(i.eval(0.3, &[1.0], &[2.5]).unwrap(), -2.5);
    }

    #[test]
    fn free_particle_case2_integral_is_constant() {
        let m = Metric::euclidean(1);
        let h = SymmetryVector::parse(m.chart(), "0", &["x1"]).unwrap();
        let hf = parse("x1^2/2", m.chart()).unwrap();
        let s = NoetherSymmetry::case2("H", h, hf, 1.0, 0.0, TimeProfile::new(0.0, 0.0, 1.0)).unwrap();
        let i = build_noether_integral(&s, &m, &Expression::zero());
        let (a, b) = (0.7, -1.1);
        for t in [0.0, 0.5, 2.0, 7.0] {
            let x = a + b * t;
            assert!((i.eval(t, &[x], &[b]).unwrap() - a * a / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn text_form_names_velocities() {
        let m = Metric::euclidean(2);
        let rot = SymmetryVector::parse(m.chart(), "0", &["x2", "-x1"]).unwrap();
        let i = NoetherIntegral::new("L", NoetherCase::I, &rot, Expression::zero(), &m, &Expression::zero());
        assert_eq!(i.to_text(), "-(x2)*x1' - (-x1)*x2'");
        assert_eq!(NoetherIntegral::energy(&m, &Expression::zero()).to_text(), "E");
    }
}
