use nalgebra::DMatrix;

use super::christoffel::ChristoffelField;
use super::metric::{Metric, PointMetric};
use super::tensor::{Rank3, Rank4};
use super::vector::{JetValues, SymmetryVector};
use super::GeometryError;

/// `(ℒ_η g)_ij = ηᵏ g_ij,k + g_kj ηᵏ,_i + g_ik ηᵏ,_j` at `(t, p)`, with `t` a parameter.
pub fn lie_derivative_metric(
    x: &SymmetryVector,
    metric: &Metric,
    point: &[f64],
    t: f64,
) -> Result<DMatrix<f64>, GeometryError> {
    let pm = metric.eval_point(point)?;
    let jet = x.jet().eval(point, t)?;
    Ok(metric_lie_values(&jet, &pm))
}

/// `(ℒ_η Γ)ⁱ_jk = ηⁱ,_jk + ηᵐ Γⁱ_jk,m − ηⁱ,_m Γᵐ_jk + ηᵐ,_j Γⁱ_mk + ηᵐ,_k Γⁱ_jm` at `(t, p)`.
pub fn lie_derivative_connection(
    x: &SymmetryVector,
    connection: &ChristoffelField,
    point: &[f64],
    t: f64,
) -> Result<Rank3, GeometryError> {
    let gamma = connection.eval(point)?;
    let dgamma = connection.eval_derivative(point)?;
    let jet = x.jet().eval(point, t)?;
    Ok(connection_lie_values(&jet, &gamma, &dgamma))
}

pub fn metric_lie_values(jet: &JetValues, pm: &PointMetric) -> DMatrix<f64> {
    let n = jet.n;
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut v = 0.0;
            for k in 0..n {
                v += jet.eta[k] * pm.dg[k][(i, j)]
                    + pm.g[(k, j)] * jet.eta_x[k * n + i]
                    + pm.g[(i, k)] * jet.eta_x[k * n + j];
            }
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

pub fn connection_lie_values(jet: &JetValues, gamma: &Rank3, dgamma: &Rank4) -> Rank3 {
    let n = jet.n;
    let mut out = Rank3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in j..n {
                let mut v = jet.eta_xx[(i * n + j) * n + k];
                for m in 0..n {
                    v += jet.eta[m] * dgamma.at(i, j, k, m) - jet.eta_x[i * n + m] * gamma.at(m, j, k)
                        + jet.eta_x[m * n + j] * gamma.at(i, m, k)
                        + jet.eta_x[m * n + k] * gamma.at(i, j, m);
                }
                out.set([i, j, k], v);
                out.set([i, k, j], v);
            }
        }
    }
    out
}
