use std::io::Write;

use super::integrate::Trajectory;
use super::DynamicsError;
use crate::symmetry::{Hamiltonian, NoetherIntegral};

/// Values of one integral along a trajectory.
#[derive(Clone, Debug)]
pub struct IntegralSeries {
    pub name: String,
    pub values: Vec<f64>,
    /// `max_k |I(t_k) − I(t₀)|`.
    pub absolute_drift: f64,
    /// The absolute drift over `max(1, |I(t₀)|)`.
    pub relative_drift: f64,
}

impl IntegralSeries {
    fn new(name: String, values: Vec<f64>) -> Self {
        let i0 = values.first().copied().unwrap_or(0.0);
        let absolute_drift =
            values
                .iter()
                .map(|v| (v - i0).abs())
                .fold(0.0, |a: f64, d| if d.is_nan() { f64::INFINITY } else { a.max(d) });
        IntegralSeries { name, values, absolute_drift, relative_drift: absolute_drift / i0.abs().max(1.0) }
    }
}

#[derive(Clone, Debug)]
pub struct DriftReport {
    pub series: Vec<IntegralSeries>,
}

impl DriftReport {
    pub fn get(&self, name: &str) -> Option<&IntegralSeries> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn max_relative_drift(&self) -> f64 {
        self.series.iter().map(|s| s.relative_drift).fold(0.0, f64::max)
    }
}

fn evaluate(tr: &Trajectory, integral: &NoetherIntegral) -> Vec<f64> {
    (0..tr.len()).map(|k| integral.eval(tr.times[k], tr.x(k), tr.v(k)).unwrap_or(f64::NAN)).collect()
}

fn check_dim(tr: &Trajectory, h: &Hamiltonian) -> Result<(), DynamicsError> {
    if h.metric().dim() != tr.dim {
        return Err(DynamicsError::DimensionMismatch {
            expected: tr.dim,
            found: h.metric().dim(),
            what: "integral dimension",
        });
    }
    Ok(())
}

/// Evaluates each integral on the trajectory's own time grid.
///
/// Points where an integral cannot be evaluated count as infinite drift.
pub fn conservation_drift(tr: &Trajectory, integrals: &[NoetherIntegral]) -> Result<DriftReport, DynamicsError> {
    let mut series = Vec::with_capacity(integrals.len());
    for integral in integrals {
        check_dim(tr, integral.hamiltonian())?;
        series.push(IntegralSeries::new(integral.name.clone(), evaluate(tr, integral)));
    }
    Ok(DriftReport { series })
}

/// CSV with columns `t,x1..xn,v1..vn,E,I_1..I_k`, numbers in `{:.16e}`.
///
/// `E` is empty when no Hamiltonian is given.
pub fn write_csv<W: Write + ?Sized>(
    tr: &Trajectory,
    hamiltonian: Option<&Hamiltonian>,
    integrals: &[NoetherIntegral],
    out: &mut W,
) -> std::io::Result<()> {
    let n = tr.dim;
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x{i}")));
    header.extend((1..=n).map(|i| format!("v{i}")));
    header.push("E".into());
    header.extend((1..=integrals.len()).map(|k| format!("I_{k}")));
    writeln!(out, "{}", header.join(","))?;
    let columns: Vec<Vec<f64>> = integrals.iter().map(|i| evaluate(tr, i)).collect();
    for k in 0..tr.len() {
        let mut row = vec![format!("{:.16e}", tr.times[k])];
        row.extend(tr.states[k].iter().map(|v| format!("{v:.16e}")));
        row.push(match hamiltonian {
            Some(h) => format!("{:.16e}", h.eval(tr.x(k), tr.v(k)).unwrap_or(f64::NAN)),
            None => String::new(),
        });
        row.extend(columns.iter().map(|c| format!("{:.16e}", c[k])));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{integrate, EquationsOfMotion, Method};
    use crate::expr::Expression;
    use crate::geometry::{ForceField, Metric, SymmetryVector};
    use crate::symmetry::{build_noether_integral, NoetherSymmetry};

    #[test]
    fn free_particle_momentum_and_csv() {
        let m = Metric::euclidean(1);
        let e = EquationsOfMotion::new(m.clone(), ForceField::zero(1)).unwrap();
        let tr = integrate(&e, &[0.0], &[1.0], (0.0, 0.01), Method::rk4()).unwrap();
        let s = NoetherSymmetry::case1("S1", SymmetryVector::coordinate(m.chart().clone(), 0), 0.0, 0.0).unwrap();
        let i = build_noether_integral(&s, &m, &Expression::zero());
        let r = conservation_drift(&tr, std::slice::from_ref(&i)).unwrap();
        assert_eq!(r.series[0].absolute_drift, 0.0);
        assert_eq!(r.series[0].values[0], -1.0);
        let mut buf = Vec::new();
        let h = Hamiltonian::new(m, Expression::zero());
        write_csv(&tr, Some(&h), &[i], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,x1,v1,E,I_1");
        assert_eq!(lines.next().unwrap(), "0.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0,5.0000000000000000e-1,-1.0000000000000000e0");
        assert_eq!(text.lines().count(), tr.len() + 1);
    }
}
