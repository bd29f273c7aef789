use super::metric::{check_point, Metric, PointMetric};
use super::tensor::{Rank3, Rank4};
use super::GeometryError;
use crate::expr::{CoordinateChart, Expression};

/// Levi-Civita connection `Γⁱ_jk = ½ gⁱˡ (g_lj,k + g_lk,j − g_jk,l)`.
///
/// For metrics with a symbolic inverse the symbols and their first
/// derivatives are held as expressions. Otherwise the symbols are assembled
/// per point from the exact derivatives of `g_ij` and a numeric inverse.
#[derive(Clone, Debug)]
pub struct ChristoffelField {
    n: usize,
    chart: CoordinateChart,
    repr: Repr,
}

#[derive(Clone, Debug)]
enum Repr {
    Symbolic {
        /// `Γⁱ_jk` at `(i * n + j) * n + k`.
        symbols: Vec<Expression>,
        /// `Γⁱ_jk,m` at `((i * n + j) * n + k) * n + m`.
        derivatives: Vec<Expression>,
    },
    Numeric {
        metric: Box<Metric>,
    },
}

impl ChristoffelField {
    pub(crate) fn from_metric(metric: &Metric) -> Result<Self, GeometryError> {
        let n = metric.dim();
        let chart = metric.chart().clone();
        let Some(inv) = metric.inverse_symbolic() else {
            if n <= super::metric::SYMBOLIC_INVERSE_MAX_DIM {
                return Err(GeometryError::SingularMetric);
            }
            return Ok(ChristoffelField { n, chart, repr: Repr::Numeric { metric: Box::new(metric.clone()) } });
        };
        let d = |i: usize, j: usize, k: usize| metric.derivative(i, j, k);
        let mut symbols: Vec<Expression> = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if k < j {
                        let mirrored = symbols[(i * n + k) * n + j].clone();
                        symbols.push(mirrored);
                        continue;
                    }
                    let mut acc = Expression::zero();
                    for l in 0..n {
                        let gil = &inv[i * n + l];
                        if gil.is_zero() {
                            continue;
                        }
                        let lowered = d(l, j, k).add(d(l, k, j)).sub(d(j, k, l));
                        acc = acc.add(&gil.mul(&lowered));
                    }
                    symbols.push(Expression::ratio(1, 2).mul(&acc));
                }
            }
        }
        let derivatives = symbols.iter().flat_map(|s| (0..n).map(move |m| s.diff_coord(m))).collect();
        Ok(ChristoffelField { n, chart, repr: Repr::Symbolic { symbols, derivatives } })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn chart(&self) -> &CoordinateChart {
        &self.chart
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.repr, Repr::Symbolic { .. })
    }

    /// The expression for `Γⁱ_jk`, when held symbolically.
    pub fn symbol(&self, i: usize, j: usize, k: usize) -> Option<&Expression> {
        match &self.repr {
            Repr::Symbolic { symbols, .. } => Some(&symbols[(i * self.n + j) * self.n + k]),
            Repr::Numeric { .. } => None,
        }
    }

    pub fn eval(&self, point: &[f64]) -> Result<Rank3, GeometryError> {
        let n = self.n;
        check_point(n, point)?;
        match &self.repr {
            Repr::Symbolic { symbols, .. } => {
                let mut out = Rank3::zeros(n);
                for i in 0..n {
                    for j in 0..n {
                        for k in j..n {
                            let v = symbols[(i * n + j) * n + k].eval(point, None)?;
                            out.set([i, j, k], v);
                            out.set([i, k, j], v);
                        }
                    }
                }
                Ok(out)
            }
            Repr::Numeric { metric } => Ok(numeric_symbols(n, &metric.eval_point(point)?)),
        }
    }

    /// `Γⁱ_jk,m` at a point.
    pub fn eval_derivative(&self, point: &[f64]) -> Result<Rank4, GeometryError> {
        let n = self.n;
        check_point(n, point)?;
        let mut out = Rank4::zeros(n);
        match &self.repr {
            Repr::Symbolic { derivatives, .. } => {
                for i in 0..n {
                    for j in 0..n {
                        for k in j..n {
                            for m in 0..n {
                                let v = derivatives[((i * n + j) * n + k) * n + m].eval(point, None)?;
                                out.set([i, j, k, m], v);
                                out.set([i, k, j, m], v);
                            }
                        }
                    }
                }
            }
            Repr::Numeric { metric } => {
                let pm = metric.eval_point(point)?;
                let dd = metric.second_derivative_exprs();
                let ddg = |i: usize, j: usize, k: usize, l: usize| dd[((k * n + l) * n + i) * n + j].eval(point, None);
                // Γ_ljk and its derivative, then ∂_m gⁱˡ = −gⁱᵃ g_ab,m gᵇˡ.
                for m in 0..n {
                    let dinv = -(&pm.inverse * &pm.dg[m] * &pm.inverse);
                    for i in 0..n {
                        for j in 0..n {
                            for k in j..n {
                                let mut v = 0.0;
                                for l in 0..n {
                                    let lowered = pm.dg[k][(l, j)] + pm.dg[j][(l, k)] - pm.dg[l][(j, k)];
                                    let dlowered = ddg(l, j, k, m)? + ddg(l, k, j, m)? - ddg(j, k, l, m)?;
                                    v += 0.5 * (dinv[(i, l)] * lowered + pm.inverse[(i, l)] * dlowered);
                                }
                                out.set([i, j, k, m], v);
                                out.set([i, k, j, m], v);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn numeric_symbols(n: usize, pm: &PointMetric) -> Rank3 {
    let mut out = Rank3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in j..n {
                let mut v = 0.0;
                for l in 0..n {
                    v += pm.inverse[(i, l)] * (pm.dg[k][(l, j)] + pm.dg[j][(l, k)] - pm.dg[l][(j, k)]);
                }
                out.set([i, j, k], 0.5 * v);
                out.set([i, k, j], 0.5 * v);
            }
        }
    }
    out
}

/// Convenience wrapper around [`Metric::christoffel`].
pub fn christoffel(metric: &Metric) -> Result<ChristoffelField, GeometryError> {
    metric.christoffel().cloned()
}

/// Largest `|∇_k g_ij|` at a point, with `∇_k g_ij = g_ij,k − Γˡ_ki g_lj − Γˡ_kj g_il`.
pub fn metric_compatibility_residual(metric: &Metric, point: &[f64]) -> Result<f64, GeometryError> {
    let n = metric.dim();
    let pm = metric.eval_point(point)?;
    let gamma = metric.christoffel()?.eval(point)?;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut r = pm.dg[k][(i, j)];
                for l in 0..n {
                    r -= gamma.at(l, k, i) * pm.g[(l, j)] + gamma.at(l, k, j) * pm.g[(i, l)];
                }
                worst = worst.max(r.abs());
            }
        }
    }
    Ok(worst)
}
