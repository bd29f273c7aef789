use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::polynomial::{monomials, number_to_rational};
use super::{CollineationBasis, CollineationClaim, CollineationError, CollineationKind, Provenance, SolverKind};
use crate::expr::{Expression, Number};
use crate::geometry::{Metric, SymmetryVector};
use crate::linalg::{rational_nullspace, rational_rref, reduce_against};

pub const DEFAULT_MAX_DEGREE: u32 = 2;

/// Unknown layout: `extras` leading scalars (ψ for HV, the gradient of the
/// linear projective function for SPC), then the field coefficients
/// monomial-major, component-minor.
struct Layout {
    n: usize,
    extras: usize,
    monos: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
}

impl Layout {
    fn new(n: usize, degree: u32, extras: usize) -> Self {
        let monos = monomials(n, degree);
        let index = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Layout { n, extras, monos, index }
    }

    fn columns(&self) -> usize {
        self.extras + self.monos.len() * self.n
    }

    fn field_col(&self, mono: usize, component: usize) -> usize {
        self.extras + mono * self.n + component
    }

    /// Linear forms of `∂_var Xⁱ`, keyed by result monomial.
    fn derivative(&self, component: usize, var: usize) -> BTreeMap<Vec<u32>, Vec<(usize, BigRational)>> {
        let mut out: BTreeMap<Vec<u32>, Vec<(usize, BigRational)>> = BTreeMap::new();
        for (mi, m) in self.monos.iter().enumerate() {
            if m[var] == 0 {
                continue;
            }
            let mut r = m.clone();
            r[var] -= 1;
            out.entry(r).or_default().push((self.field_col(mi, component), BigRational::from(BigInt::from(m[var]))));
        }
        out
    }

    fn second_derivative(&self, component: usize, a: usize, b: usize) -> BTreeMap<Vec<u32>, Vec<(usize, BigRational)>> {
        let mut out: BTreeMap<Vec<u32>, Vec<(usize, BigRational)>> = BTreeMap::new();
        for (mi, m) in self.monos.iter().enumerate() {
            let mut r = m.clone();
            if r[a] == 0 {
                continue;
            }
            let mut c = r[a];
            r[a] -= 1;
            if r[b] == 0 {
                continue;
            }
            c *= r[b];
            r[b] -= 1;
            out.entry(r).or_default().push((self.field_col(mi, component), BigRational::from(BigInt::from(c))));
        }
        out
    }
}

/// Accumulates equations keyed by (equation id, monomial).
#[derive(Default)]
struct System {
    rows: BTreeMap<(usize, Vec<u32>), BTreeMap<usize, BigRational>>,
}

impl System {
    fn add(&mut self, eq: usize, mono: &[u32], col: usize, coeff: BigRational) {
        let row = self.rows.entry((eq, mono.to_vec())).or_default();
        *row.entry(col).or_insert_with(BigRational::zero) += coeff;
    }

    fn add_forms(&mut self, eq: usize, forms: &BTreeMap<Vec<u32>, Vec<(usize, BigRational)>>, scale: &BigRational) {
        for (mono, terms) in forms {
            for (col, c) in terms {
                self.add(eq, mono, *col, c * scale);
            }
        }
    }

    fn dense(self, ncols: usize) -> Vec<Vec<BigRational>> {
        self.rows
            .into_values()
            .filter(|r| r.values().any(|v| !v.is_zero()))
            .map(|r| {
                let mut row = vec![BigRational::zero(); ncols];
                for (c, v) in r {
                    row[c] = v;
                }
                row
            })
            .collect()
    }
}

fn constant_metric(metric: &Metric) -> Result<Vec<BigRational>, CollineationError> {
    let n = metric.dim();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let c = metric.component(i, j);
            let num = c.as_number().ok_or(CollineationError::NonConstantMetric { i, j })?;
            out.push(number_to_rational(num).ok_or(CollineationError::NonRationalMetric { i, j })?);
        }
    }
    Ok(out)
}

fn killing_system(layout: &Layout, g: &[BigRational], homothetic: bool) -> System {
    let n = layout.n;
    let mut sys = System::default();
    let zero_mono = vec![0u32; n];
    let mut eq = 0;
    for i in 0..n {
        for j in i..n {
            // g_kj ∂_i Xᵏ + g_ik ∂_j Xᵏ − 2ψ g_ij
            for k in 0..n {
                if !g[k * n + j].is_zero() {
                    sys.add_forms(eq, &layout.derivative(k, i), &g[k * n + j]);
                }
                if !g[i * n + k].is_zero() {
                    sys.add_forms(eq, &layout.derivative(k, j), &g[i * n + k]);
                }
            }
            if homothetic && !g[i * n + j].is_zero() {
                sys.add(eq, &zero_mono, 0, -BigRational::from(BigInt::from(2)) * &g[i * n + j]);
            }
            eq += 1;
        }
    }
    sys
}

fn affine_system(layout: &Layout, projective: bool) -> System {
    let n = layout.n;
    let one = BigRational::from(BigInt::from(1));
    let zero_mono = vec![0u32; n];
    let mut sys = System::default();
    let mut eq = 0;
    for i in 0..n {
        for j in 0..n {
            for k in j..n {
                // ∂_j ∂_k Xⁱ − δⁱ_j a_k − δⁱ_k a_j
                sys.add_forms(eq, &layout.second_derivative(i, j, k), &one);
                if projective {
                    if i == j {
                        sys.add(eq, &zero_mono, k, -one.clone());
                    }
                    if i == k {
                        sys.add(eq, &zero_mono, j, -one.clone());
                    }
                }
                eq += 1;
            }
        }
    }
    sys
}

fn solve(layout: &Layout, sys: System) -> Vec<Vec<BigRational>> {
    let ncols = layout.columns();
    rational_nullspace(sys.dense(ncols), ncols)
}

/// Moves field coefficients from a layout with `from_extras` leading scalars to `to`.
fn relayout(v: &[BigRational], from_extras: usize, to: &Layout) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); to.columns()];
    for (i, c) in v[from_extras..].iter().enumerate() {
        out[to.extras + i] = c.clone();
    }
    out
}

fn rational_number(r: &BigRational) -> Number {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(p), Some(q)) => Number::ratio(p, q),
        _ => Number::Real(crate::linalg::rational_to_f64(r)),
    }
}

fn monomial_expr(m: &[u32]) -> Expression {
    m.iter().enumerate().fold(Expression::one(), |acc, (i, &e)| {
        if e == 0 {
            acc
        } else {
            acc.mul(&Expression::coord(i).powi(e as i32))
        }
    })
}

fn to_claim(
    metric: &Metric,
    layout: &Layout,
    kind: SolverKind,
    v: &[BigRational],
    index: usize,
) -> Result<CollineationClaim, CollineationError> {
    let n = layout.n;
    let mut eta = vec![Expression::zero(); n];
    for (mi, m) in layout.monos.iter().enumerate() {
        for (i, comp) in eta.iter_mut().enumerate() {
            let c = &v[layout.field_col(mi, i)];
            if !c.is_zero() {
                *comp = comp.add(&Expression::constant(rational_number(c)).mul(&monomial_expr(m)));
            }
        }
    }
    let vector = SymmetryVector::spatial(metric.chart().clone(), eta)?;
    let ckind = match kind {
        SolverKind::Killing => CollineationKind::Killing,
        SolverKind::Homothetic => CollineationKind::Homothetic { psi: crate::linalg::rational_to_f64(&v[0]) },
        SolverKind::Affine => CollineationKind::Affine,
        SolverKind::SpecialProjective => {
            let phi = (0..n).fold(Expression::zero(), |acc, k| {
                if v[k].is_zero() {
                    acc
                } else {
                    acc.add(&Expression::constant(rational_number(&v[k])).mul(&Expression::coord(k)))
                }
            });
            CollineationKind::SpecialProjective { phi }
        }
    };
    Ok(CollineationClaim::new(format!("{}{}", kind.label(), index + 1), vector, ckind))
}

/// Exact polynomial solutions of a collineation's determining equations on a
/// constant metric.
///
/// The returned basis is taken modulo the next smaller algebra so that counts
/// match the usual presentation: all KVs; HVs modulo KVs; ACs modulo parallel
/// (constant) fields; SPCs modulo ACs. Vectors are in reduced row-echelon form
/// over the coefficient layout `[extras | monomial-major field coefficients]`.
pub fn solve_determining_equations(
    metric: &Metric,
    kind: SolverKind,
    max_degree: u32,
) -> Result<CollineationBasis, CollineationError> {
    let n = metric.dim();
    let g = constant_metric(metric)?;
    let mut warnings = Vec::new();
    let needed = if kind == SolverKind::SpecialProjective { 2 } else { 1 };
    if max_degree < needed.max(DEFAULT_MAX_DEGREE) {
        let msg = format!("degree {max_degree} may be too small to express every {} (need {needed})", kind.label());
        log::warn!("{msg}");
        warnings.push(msg);
    }

    let (layout, space, lower): (Layout, Vec<Vec<BigRational>>, Vec<Vec<BigRational>>) = match kind {
        SolverKind::Killing => {
            let layout = Layout::new(n, max_degree, 0);
            let s = solve(&layout, killing_system(&layout, &g, false));
            (layout, s, Vec::new())
        }
        SolverKind::Homothetic => {
            let layout = Layout::new(n, max_degree, 1);
            let s = solve(&layout, killing_system(&layout, &g, true));
            let kv_layout = Layout::new(n, max_degree, 0);
            let kvs = solve(&kv_layout, killing_system(&kv_layout, &g, false));
            let lower = kvs.iter().map(|v| relayout(v, 0, &layout)).collect();
            (layout, s, lower)
        }
        SolverKind::Affine => {
            let layout = Layout::new(n, max_degree, 0);
            let s = solve(&layout, affine_system(&layout, false));
            let constant = layout.index[&vec![0u32; n]];
            let lower = (0..n)
                .map(|i| {
                    let mut v = vec![BigRational::zero(); layout.columns()];
                    v[layout.field_col(constant, i)] = BigRational::from(BigInt::from(1));
                    v
                })
                .collect();
            (layout, s, lower)
        }
        SolverKind::SpecialProjective => {
            let layout = Layout::new(n, max_degree, n);
            let s = solve(&layout, affine_system(&layout, true));
            let ac_layout = Layout::new(n, max_degree, 0);
            let acs = solve(&ac_layout, affine_system(&ac_layout, false));
            let lower = acs.iter().map(|v| relayout(v, 0, &layout)).collect();
            (layout, s, lower)
        }
    };

    let (lower, pivots) = rational_rref(lower);
    let reduced: Vec<Vec<BigRational>> = space
        .into_iter()
        .map(|mut v| {
            reduce_against(&mut v, &lower, &pivots);
            v
        })
        .collect();
    let (basis, _) = rational_rref(reduced);

    let claims =
        basis.iter().enumerate().map(|(i, v)| to_claim(metric, &layout, kind, v, i)).collect::<Result<Vec<_>, _>>()?;
    let space = match metric.signature() {
        Some(sig) => format!("flat {n}d, signature {}", signature_text(sig)),
        None => format!("constant metric, {n}d"),
    };
    Ok(CollineationBasis { space, claims, kind: Some(kind), provenance: Provenance::Solver, warnings })
}

pub(crate) fn signature_text(sig: &[i8]) -> String {
    sig.iter().map(|&s| if s < 0 { '-' } else { '+' }).collect()
}
