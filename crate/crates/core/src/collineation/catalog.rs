use super::solver::signature_text;
use super::{CollineationBasis, CollineationClaim, CollineationKind};
use crate::expr::{cosn, sinn, CoordinateChart, Expression};
use crate::geometry::{Metric, SymmetryVector};

fn x(i: usize) -> Expression {
    Expression::coord(i)
}

fn spatial(chart: &CoordinateChart, eta: Vec<Expression>) -> SymmetryVector {
    SymmetryVector::spatial(chart.clone(), eta).expect("catalog vectors match their chart")
}

fn basis_field(chart: &CoordinateChart, i: usize, coeff: Expression) -> Vec<Expression> {
    let mut eta = vec![Expression::zero(); chart.dim()];
    eta[i] = coeff;
    eta
}

/// Table 2: translations `S_I`, rotations/boosts `X_IJ`, the dilation `H`,
/// affine `A_IJ = x^J ∂_I` and special projective `P_I = x^I H` on
/// `diag(s_1, …, s_n)` in the chart `x1..xn`.
pub fn flat_projective_catalog(signature: &[i8]) -> CollineationBasis {
    let n = signature.len();
    let chart = CoordinateChart::numbered(n);
    let s: Vec<Expression> = signature.iter().map(|&v| Expression::int(v.signum() as i64)).collect();
    let half = Expression::ratio(1, 2);
    let mut claims = Vec::new();

    for i in 0..n {
        claims.push(
            CollineationClaim::new(
                format!("S{}", i + 1),
                spatial(&chart, basis_field(&chart, i, Expression::one())),
                CollineationKind::Killing,
            )
            .with_gradient(s[i].mul(&x(i))),
        );
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut eta = vec![Expression::zero(); n];
            eta[i] = s[j].mul(&x(j));
            eta[j] = s[i].mul(&x(i)).neg();
            claims.push(CollineationClaim::new(
                format!("X{}{}", i + 1, j + 1),
                spatial(&chart, eta),
                CollineationKind::Killing,
            ));
        }
    }
    let radial: Vec<Expression> = (0..n).map(x).collect();
    let h_function = half.mul(&Expression::sum(&(0..n).map(|i| s[i].mul(&x(i).powi(2))).collect::<Vec<_>>()));
    claims.push(
        CollineationClaim::new("H", spatial(&chart, radial.clone()), CollineationKind::Homothetic { psi: 1.0 })
            .with_gradient(h_function),
    );
    for i in 0..n {
        for j in 0..n {
            let claim = CollineationClaim::new(
                format!("A{}{}", i + 1, j + 1),
                spatial(&chart, basis_field(&chart, i, x(j))),
                CollineationKind::Affine,
            );
            claims.push(if i == j { claim.with_gradient(half.mul(&s[i]).mul(&x(i).powi(2))) } else { claim });
        }
    }
    for i in 0..n {
        let eta = radial.iter().map(|r| x(i).mul(r)).collect();
        claims.push(CollineationClaim::new(
            format!("P{}", i + 1),
            spatial(&chart, eta),
            CollineationKind::SpecialProjective { phi: x(i) },
        ));
    }
    CollineationBasis::catalog(format!("flat {n}d, signature {}", signature_text(signature)), claims)
}

/// Chart `(phi, theta)` of the unit 2-space of curvature sign `k`, excluding `Sinn φ = 0`.
pub fn sphere_chart(k: i8) -> CoordinateChart {
    let chart = CoordinateChart::new(&["phi", "theta"]).expect("valid names").with_curvature(k);
    let locus = sinn(k, &x(0));
    chart.with_excluded("Sinn(phi) = 0", locus)
}

/// `ds² = dφ² + Sinn²φ dθ²`.
pub fn sphere_metric(k: i8) -> Metric {
    let chart = sphere_chart(k);
    let s2 = sinn(k, &x(0)).powi(2);
    Metric::diagonal(chart, vec![Expression::one(), s2])
        .expect("sphere metric is well formed")
        .with_signature(vec![1, 1])
}

/// The rotations `Y₁, Y₂, Y₃` of the 2-space of curvature sign `k`.
pub fn sphere_killing_catalog(k: i8) -> CollineationBasis {
    let chart = sphere_chart(k);
    let (th, ph) = (x(1), x(0));
    let cot = cosn(k, &ph).div(&sinn(k, &ph));
    let y1 = vec![th.sin(), th.cos().mul(&cot)];
    let y2 = vec![th.cos(), th.sin().mul(&cot).neg()];
    let y3 = vec![Expression::zero(), Expression::one()];
    let claims = [("Y1", y1), ("Y2", y2), ("Y3", y3)]
        .into_iter()
        .map(|(name, eta)| CollineationClaim::new(name, spatial(&chart, eta), CollineationKind::Killing))
        .collect();
    let label = if k >= 0 { "sphere K=1" } else { "hyperbolic plane K=-1" };
    CollineationBasis::catalog(label, claims)
}

fn bianchi_chart(with_field: bool) -> CoordinateChart {
    let names: &[&str] = if with_field { &["lambda", "beta1", "beta2", "phi"] } else { &["lambda", "beta1", "beta2"] };
    CoordinateChart::new(names).expect("valid names")
}

fn bianchi_diag(n: usize) -> Metric {
    let chart = bianchi_chart(n == 4);
    let a = x(0).scale(3.0).exp();
    let weights = [12, -3, -3, -2];
    let diag = weights[..n].iter().map(|&w| Expression::int(w).mul(&a)).collect();
    let sig = weights[..n].iter().map(|&w| if w > 0 { 1 } else { -1 }).collect();
    Metric::diagonal(chart, diag).expect("mini-superspace metric is well formed").with_signature(sig)
}

/// `ds² = e^{3λ}(12dλ² − 3dβ₁² − 3dβ₂² − 2dφ²)` in the chart `(lambda, beta1, beta2, phi)`.
pub fn bianchi_metric() -> Metric {
    bianchi_diag(4)
}

/// The scalar-free reduction `e^{3λ}(12dλ² − 3dβ₁² − 3dβ₂²)` on `(lambda, beta1, beta2)`.
pub fn bianchi_vacuum_metric() -> Metric {
    bianchi_diag(3)
}

fn homothetic_h(chart: &CoordinateChart) -> CollineationClaim {
    let eta = basis_field(chart, 0, Expression::ratio(2, 3));
    CollineationClaim::new("H", spatial(chart, eta), CollineationKind::Homothetic { psi: 1.0 })
        .with_gradient(Expression::ratio(8, 3).mul(&x(0).scale(3.0).exp()))
}

/// `Y¹ … Y⁶` and the gradient HV `H = (2/3)∂_λ` of the mini-superspace metric.
pub fn bianchi_symmetry_catalog() -> CollineationBasis {
    let chart = bianchi_chart(true);
    let z = Expression::zero;
    let three_halves = Expression::ratio(3, 2);
    let (b1, b2, ph) = (x(1), x(2), x(3));
    let fields = vec![
        ("Y1", vec![z(), Expression::one(), z(), z()]),
        ("Y2", vec![z(), z(), Expression::one(), z()]),
        ("Y3", vec![z(), z(), z(), Expression::one()]),
        ("Y4", vec![z(), b2.clone(), b1.neg(), z()]),
        ("Y5", vec![z(), ph.clone(), z(), three_halves.mul(&b1).neg()]),
        ("Y6", vec![z(), z(), ph, three_halves.mul(&b2).neg()]),
    ];
    let mut claims: Vec<CollineationClaim> = fields
        .into_iter()
        .map(|(name, eta)| CollineationClaim::new(name, spatial(&chart, eta), CollineationKind::Killing))
        .collect();
    claims.push(homothetic_h(&chart));
    CollineationBasis::catalog("Bianchi mini-superspace", claims)
}

/// `Y¹, Y², Y⁴` and `H` on the scalar-free mini-superspace.
pub fn bianchi_vacuum_symmetry_catalog() -> CollineationBasis {
    let chart = bianchi_chart(false);
    let z = Expression::zero;
    let fields = vec![
        ("Y1", vec![z(), Expression::one(), z()]),
        ("Y2", vec![z(), z(), Expression::one()]),
        ("Y4", vec![z(), x(2), x(1).neg()]),
    ];
    let mut claims: Vec<CollineationClaim> = fields
        .into_iter()
        .map(|(name, eta)| CollineationClaim::new(name, spatial(&chart, eta), CollineationKind::Killing))
        .collect();
    claims.push(homothetic_h(&chart));
    CollineationBasis::catalog("Bianchi mini-superspace (vacuum)", claims)
}
