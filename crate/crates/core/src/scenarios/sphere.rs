use super::{combination, EntryStatus, NoetherSpec, Scenario, ScenarioError};
use crate::collineation::{sphere_killing_catalog, sphere_metric};
use crate::expr::{cosn, sinn, Expression};
use crate::geometry::{SampleBox, SymmetryVector};

/// The seven potential families of Table 7, with `F` the identity.
pub const TABLE7_ROWS: usize = 7;

const LABELS: [&str; TABLE7_ROWS] = [
    "F(cos(theta) Sinn(phi))",
    "F(sin(theta) Sinn(phi))",
    "F(phi)",
    "F((1 + tan^2 theta) / (Sinn^2 phi (a - b tan theta)^2))",
    "F(a cos(theta) Sinn(phi) - K b Cosn(phi))",
    "F(a sin(theta) Sinn(phi) - K b Cosn(phi))",
    "F((a cos(theta) - b sin(theta)) Sinn(phi) - K c Cosn(phi))",
];

fn phi() -> Expression {
    Expression::coord(0)
}

fn theta() -> Expression {
    Expression::coord(1)
}

fn int(v: i64) -> Expression {
    Expression::int(v)
}

/// The representative potential of Table 7 row `row` (1-based).
pub fn table7_potential(row: usize, k: i8, a: i64, b: i64, c: i64) -> Result<Expression, ScenarioError> {
    let (s, co) = (sinn(k, &phi()), cosn(k, &phi()));
    let kk = int(k.signum() as i64);
    let v = match row {
        1 => theta().cos().mul(&s),
        2 => theta().sin().mul(&s),
        3 => phi(),
        4 => {
            let tan = theta().tan();
            let den = s.powi(2).mul(&int(a).sub(&int(b).mul(&tan)).powi(2));
            Expression::one().add(&tan.powi(2)).div(&den)
        }
        5 => int(a).mul(&theta().cos()).mul(&s).sub(&kk.mul(&int(b)).mul(&co)),
        6 => int(a).mul(&theta().sin()).mul(&s).sub(&kk.mul(&int(b)).mul(&co)),
        7 => int(a).mul(&theta().cos()).sub(&int(b).mul(&theta().sin())).mul(&s).sub(&kk.mul(&int(c)).mul(&co)),
        _ => return Err(ScenarioError::InvalidParameter(format!("Table 7 has rows 1..=7, got {row}"))),
    };
    Ok(v)
}

fn sample_box(k: i8) -> SampleBox {
    let hi = if k > 0 { std::f64::consts::PI - 0.15 } else { 2.5 };
    SampleBox::new(vec![0.15, -std::f64::consts::PI], vec![hi, std::f64::consts::PI], (0.0, 1.0))
}

/// `(a, b, c)` coefficients of `Y₁, Y₂, Y₃` in the printed generator, and
/// the combination that does annihilate the row's argument when it differs.
fn row_generators(row: usize, a: i64, b: i64, c: i64) -> (Vec<(f64, &'static str)>, Option<Vec<(f64, &'static str)>>) {
    let (a, b, c) = (a as f64, b as f64, c as f64);
    match row {
        1 => (vec![(1.0, "Y1")], None),
        2 => (vec![(1.0, "Y2")], None),
        3 => (vec![(1.0, "Y3")], None),
        4 => (vec![(a, "Y1"), (b, "Y2")], None),
        5 => (vec![(a, "Y1"), (b, "Y3")], None),
        6 => (vec![(a, "Y2"), (b, "Y3")], Some(vec![(a, "Y2"), (-b, "Y3")])),
        _ => (vec![(a, "Y1"), (b, "Y2"), (c, "Y3")], None),
    }
}

fn generator_label(terms: &[(f64, &str)]) -> String {
    let mut out = String::new();
    for (i, (c, name)) in terms.iter().enumerate() {
        let sign = if *c < 0.0 { "-" } else { "+" };
        if i > 0 {
            out.push_str(&format!(" {sign} "));
        } else if *c < 0.0 {
            out.push('-');
        }
        let m = c.abs();
        if m == 1.0 {
            out.push_str(name);
        } else {
            out.push_str(&format!("{m}*{name}"));
        }
    }
    out
}

fn equal_on_box(a: &Expression, b: &Expression, k: i8) -> bool {
    let pts =
        crate::geometry::HaltonSampler::new(sample_box(k), 11).points(&crate::expr::CoordinateChart::numbered(2), 12);
    pts.iter().all(|s| match (a.eval(&s.x, None), b.eval(&s.x, None)) {
        (Ok(x), Ok(y)) => (x - y).abs() <= 1e-12 * (1.0 + x.abs()),
        (Err(_), Err(_)) => true,
        _ => false,
    })
}

/// `L = ½(φ̇² + Sinn²φ θ̇²) − V` on the chart `(phi, theta)`.
///
/// Expected rows are attached when `V` equals a Table 7 instance with
/// `a, b, c ∈ {1, 2}`, a constant, or the zero potential.
pub fn sphere_scenario(k: i8, potential: Expression) -> Result<Scenario, ScenarioError> {
    let k = if k >= 0 { 1 } else { -1 };
    if potential.references_time() || potential.max_coord().is_some_and(|m| m >= 2) {
        return Err(ScenarioError::InvalidParameter("the potential must be a function of (phi, theta)".into()));
    }
    let metric = sphere_metric(k);
    let name = format!("sphere:K={k}");
    let mut sc = Scenario::conservative(name, metric, potential.clone(), sphere_killing_catalog(k), sample_box(k))?;
    sc.integral_names = (1..=3).map(|i| (format!("Y{i}"), format!("I_CK{i}"))).collect();
    let chart = sc.metric.chart().clone();
    let energy = NoetherSpec::case1("d_t", SymmetryVector::time_translation(chart), "Table 7, all rows (energy)");
    sc.expected.push(sc.noether_entry(energy));
    if potential.as_number().is_some() {
        for y in ["Y1", "Y2", "Y3"] {
            let spec =
                NoetherSpec::case1(y, sc.catalog.get(y).expect("sphere KV").vector.clone(), "Corollary, V = const");
            sc.expected.push(sc.noether_entry(spec));
        }
        return Ok(sc);
    }
    for row in 1..=TABLE7_ROWS {
        for (a, b, c) in (1..=2).flat_map(|a| (1..=2).flat_map(move |b| (1..=2).map(move |c| (a, b, c)))) {
            let instance = table7_potential(row, k, a, b, c)?;
            if !equal_on_box(&instance, &potential, k) {
                continue;
            }
            if row == 4 {
                let locus = Expression::int(a).mul(&theta().cos()).sub(&Expression::int(b).mul(&theta().sin()));
                sc.metric = sc.metric.clone().with_excluded("a cos(theta) - b sin(theta) = 0", locus);
            }
            attach_row(&mut sc, row, a, b, c);
            sc.notes.push(format!("V matches Table 7 row {row}: {} with a={a}, b={b}, c={c}", LABELS[row - 1]));
            return Ok(sc);
        }
    }
    Ok(sc)
}

fn attach_row(sc: &mut Scenario, row: usize, a: i64, b: i64, c: i64) {
    let (printed, corrected) = row_generators(row, a, b, c);
    let provenance = format!("Table 7 row {row}");
    let vector = combination(&sc.catalog, &printed);
    let spec = NoetherSpec::case1(generator_label(&printed), vector, &provenance);
    let entry = sc.noether_entry(spec);
    sc.expected.push(entry);
    if let Some(fixed) = corrected {
        let vector = combination(&sc.catalog, &fixed);
        let note = format!("the printed {} does not annihilate the row's argument", generator_label(&printed));
        let spec =
            NoetherSpec::case1(generator_label(&fixed), vector, &provenance).status(EntryStatus::Corrected(note));
        let entry = sc.noether_entry(spec);
        sc.expected.push(entry);
    }
}

/// [`sphere_scenario`] on the row's representative instance.
pub fn table7_scenario(row: usize, k: i8, a: i64, b: i64, c: i64) -> Result<Scenario, ScenarioError> {
    sphere_scenario(k, table7_potential(row, k, a, b, c)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn row_one_expects_y1() {
        let m = sphere_metric(1);
        let v = parse("sin(phi)*cos(theta)", m.chart()).unwrap();
        let sc = sphere_scenario(1, v).unwrap();
        let labels: Vec<_> = sc.expected.iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, ["d_t", "Y1"]);
        for c in sc.check_expected(100, 0, 1e-8).unwrap() {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn free_motion_has_four() {
        let sc = sphere_scenario(1, Expression::zero()).unwrap();
        assert_eq!(sc.expected.len(), 4);
    }

    #[test]
    fn row_six_printed_sign_fails() {
        for k in [1, -1] {
            let sc = table7_scenario(6, k, 1, 2, 1).unwrap();
            let checks = sc.check_expected(100, 0, 1e-8).unwrap();
            let by = |s: &str| checks.iter().find(|c| c.label == s).unwrap().passed;
            assert!(!by("Y2 + 2*Y3") && by("Y2 - 2*Y3"), "K={k}");
        }
    }
}
