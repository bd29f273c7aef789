use super::{ResidualBlock, SymmetryError};
use crate::geometry::{
    connection_lie_values, metric_lie_values, ForceField, GeometryError, JetValues, Metric, PointMetric, Rank3, Sample,
    SymmetryVector,
};

/// Residuals of the four Lie symmetry condition blocks over a sample set.
///
/// The equations are written for `ẍⁱ + Γⁱ_jk ẋʲẋᵏ + Pⁱ = 0` with `P = −F`.
#[derive(Clone, Debug)]
pub struct LieConditionReport {
    /// `ℒ_η Pⁱ + 2ξ,_t Pⁱ + ηⁱ,_tt`.
    pub force: ResidualBlock,
    /// `(ξ,_k δⁱ_j + 2ξ,_j δⁱ_k) Pᵏ + 2ηⁱ,_t|j − ξ,_tt δⁱ_j`.
    pub velocity: ResidualBlock,
    /// `ℒ_η Γⁱ_jk − ξ,_tj δⁱ_k − ξ,_tk δⁱ_j`.
    pub connection: ResidualBlock,
    /// `ξ;_(jk δⁱ_d)`.
    pub xi_hessian: ResidualBlock,
    pub points_skipped: usize,
    pub tolerance: f64,
    pub passed: bool,
}

impl LieConditionReport {
    pub fn blocks(&self) -> [&ResidualBlock; 4] {
        [&self.force, &self.velocity, &self.connection, &self.xi_hessian]
    }

    pub fn max_residual(&self) -> f64 {
        self.blocks().iter().map(|b| b.max).fold(0.0, f64::max)
    }

    pub fn points_used(&self) -> usize {
        self.force.per_sample.len()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Path {
    Direct,
    Solved,
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Evaluates the Lie symmetry conditions of `ẍ + Γẋẋ = F` for `x` at every sample.
pub fn lie_conditions(
    x: &SymmetryVector,
    metric: &Metric,
    force: &ForceField,
    samples: &[Sample],
    tol: f64,
) -> Result<LieConditionReport, SymmetryError> {
    run(x, metric, force, samples, tol, Path::Direct)
}

/// The same conditions with the force and velocity blocks in their
/// metric-resolved form: the force block through the lowered `P_j` and
/// `ℒ_η gⁱʲ`, the velocity block as
/// `−δⁱ_j ξ,_tt + (ξ,_j δⁱ_k + 2δⁱ_j ξ,_k) Pᵏ + 2ηⁱ,_tj + 2Γⁱ_jk ηᵏ,_t`.
///
/// For `ξ = ξ(t)` both paths agree identically.
pub fn lie_conditions_solved(
    x: &SymmetryVector,
    metric: &Metric,
    force: &ForceField,
    samples: &[Sample],
    tol: f64,
) -> Result<LieConditionReport, SymmetryError> {
    run(x, metric, force, samples, tol, Path::Solved)
}

fn run(
    x: &SymmetryVector,
    metric: &Metric,
    force: &ForceField,
    samples: &[Sample],
    tol: f64,
    path: Path,
) -> Result<LieConditionReport, SymmetryError> {
    let n = metric.dim();
    for (found, what) in [(x.dim(), "vector components"), (force.dim(), "force components")] {
        if found != n {
            return Err(SymmetryError::DimensionMismatch { expected: n, found, what });
        }
    }
    let connection = metric.christoffel()?;
    let jet = x.jet();
    let mut report = LieConditionReport {
        force: ResidualBlock::new("force"),
        velocity: ResidualBlock::new("velocity"),
        connection: ResidualBlock::new("connection"),
        xi_hessian: ResidualBlock::new("xi-hessian"),
        points_skipped: 0,
        tolerance: tol,
        passed: false,
    };
    for s in samples {
        let outcome = (|| -> Result<[f64; 4], GeometryError> {
            let jv = jet.eval(&s.x, s.t)?;
            let gamma = connection.eval(&s.x)?;
            let dgamma = connection.eval_derivative(&s.x)?;
            // P = −F and its Jacobian.
            let p: Vec<f64> = force.eval(&s.x)?.into_iter().map(|v| -v).collect();
            let dp: Vec<f64> = force.eval_jacobian(&s.x)?.into_iter().map(|v| -v).collect();
            let r_force = match path {
                Path::Direct => force_block(&jv, &p, &dp),
                Path::Solved => force_block_lowered(&jv, &metric.eval_point(&s.x)?, &p, &dp),
            };
            let r_velocity = velocity_block(&jv, &gamma, &p, path);
            let r_connection = connection_block(&jv, &gamma, &dgamma);
            let r_hessian = hessian_block(&jv, &gamma);
            Ok([r_force, r_velocity, r_connection, r_hessian])
        })();
        match outcome {
            Ok([a, b, c, d]) => {
                report.force.record(a);
                report.velocity.record(b);
                report.connection.record(c);
                report.xi_hessian.record(d);
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

fn force_block(jv: &JetValues, p: &[f64], dp: &[f64]) -> f64 {
    let n = jv.n;
    (0..n)
        .map(|i| {
            let mut lie = 0.0;
            for j in 0..n {
                lie += jv.eta[j] * dp[i * n + j] - p[j] * jv.eta_x[i * n + j];
            }
            (lie + 2.0 * jv.xi_t * p[i] + jv.eta_tt[i]).abs()
        })
        .fold(0.0, f64::max)
}

/// `(ℒ_η gⁱʲ) P_j + gⁱʲ ℒ_η P_j + 2ξ,_t Pⁱ + ηⁱ,_tt` with `P_j = g_jk Pᵏ`.
fn force_block_lowered(jv: &JetValues, pm: &PointMetric, p: &[f64], dp: &[f64]) -> f64 {
    let n = jv.n;
    let lower: Vec<f64> = (0..n).map(|j| (0..n).map(|k| pm.g[(j, k)] * p[k]).sum()).collect();
    // ∂_k P_j = g_jl,k Pˡ + g_jl Pˡ,_k
    let dlower =
        |j: usize, k: usize| -> f64 { (0..n).map(|l| pm.dg[k][(j, l)] * p[l] + pm.g[(j, l)] * dp[l * n + k]).sum() };
    let lie_lower: Vec<f64> =
        (0..n).map(|j| (0..n).map(|k| jv.eta[k] * dlower(j, k) + lower[k] * jv.eta_x[k * n + j]).sum()).collect();
    let lie_g = metric_lie_values(jv, pm);
    let lie_inverse = -(&pm.inverse * lie_g * &pm.inverse);
    (0..n)
        .map(|i| {
            let mut v = 2.0 * jv.xi_t * p[i] + jv.eta_tt[i];
            for j in 0..n {
                v += lie_inverse[(i, j)] * lower[j] + pm.inverse[(i, j)] * lie_lower[j];
            }
            v.abs()
        })
        .fold(0.0, f64::max)
}

fn velocity_block(jv: &JetValues, gamma: &Rank3, p: &[f64], path: Path) -> f64 {
    let n = jv.n;
    let xi_dot_p: f64 = (0..n).map(|k| jv.xi_x[k] * p[k]).sum();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut cov = jv.eta_tx[i * n + j];
            for k in 0..n {
                cov += gamma.at(i, j, k) * jv.eta_t[k];
            }
            let force_terms = match path {
                Path::Direct => delta(i, j) * xi_dot_p + 2.0 * jv.xi_x[j] * p[i],
                Path::Solved => jv.xi_x[j] * p[i] + 2.0 * delta(i, j) * xi_dot_p,
            };
            let v = force_terms + 2.0 * cov - jv.xi_tt * delta(i, j);
            worst = worst.max(v.abs());
        }
    }
    worst
}

fn connection_block(jv: &JetValues, gamma: &Rank3, dgamma: &crate::geometry::Rank4) -> f64 {
    let n = jv.n;
    let lie = connection_lie_values(jv, gamma, dgamma);
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let target = jv.xi_tx[j] * delta(i, k) + jv.xi_tx[k] * delta(i, j);
                worst = worst.max((lie.at(i, j, k) - target).abs());
            }
        }
    }
    worst
}

fn hessian_block(jv: &JetValues, gamma: &Rank3) -> f64 {
    let n = jv.n;
    let hess = |j: usize, k: usize| -> f64 {
        let mut h = jv.xi_xx[j * n + k];
        for m in 0..n {
            h -= gamma.at(m, j, k) * jv.xi_x[m];
        }
        h
    };
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for d in 0..n {
                    let v = (hess(j, k) * delta(i, d) + hess(k, d) * delta(i, j) + hess(d, j) * delta(i, k)) / 3.0;
                    worst = worst.max(v.abs());
                }
            }
        }
    }
    worst
}
