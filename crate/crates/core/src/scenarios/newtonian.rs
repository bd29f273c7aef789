use super::{EntryStatus, ExpectedSymmetry, NoetherSpec, Scenario, ScenarioError};
use crate::collineation::flat_projective_catalog;
use crate::expr::{parse, CoordinateChart, Expression};
use crate::geometry::{ForceField, Metric, SampleBox, SymmetryVector};

/// A row of Tables 3–6.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NewtonianRow {
    /// Lie symmetries, first family.
    Table3(usize),
    /// Lie symmetries, second family.
    Table4(usize),
    /// Noether symmetries, first family.
    Table5(usize),
    /// Noether symmetries, second family.
    Table6(usize),
}

impl NewtonianRow {
    fn parts(self) -> (usize, usize) {
        match self {
            NewtonianRow::Table3(r) => (3, r),
            NewtonianRow::Table4(r) => (4, r),
            NewtonianRow::Table5(r) => (5, r),
            NewtonianRow::Table6(r) => (6, r),
        }
    }
}

/// Row parameters; unset values take the row's representative default.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NewtonianParams {
    pub d: Option<f64>,
    pub m: Option<f64>,
    pub c1: Option<f64>,
}

fn num(x: f64) -> String {
    format!("({x})")
}

struct Builder {
    n: usize,
    chart: CoordinateChart,
    provenance: String,
}

impl Builder {
    fn expr(&self, s: &str) -> Result<Expression, ScenarioError> {
        Ok(parse(s, &self.chart)?)
    }

    fn pick<'a>(&self, three: &[&'a str], two: &[&'a str]) -> Vec<&'a str> {
        if self.n == 3 {
            three.to_vec()
        } else {
            two.to_vec()
        }
    }

    fn vector(&self, xi: &str, eta: &[&str]) -> Result<SymmetryVector, ScenarioError> {
        let eta: Vec<&str> = eta.iter().take(self.n).copied().collect();
        SymmetryVector::parse(&self.chart, xi, &eta).map_err(|e| ScenarioError::InvalidParameter(e.to_string()))
    }

    fn radial(&self) -> Vec<String> {
        (1..=self.n).map(|i| format!("x{i}")).collect()
    }

    /// A Lie scenario for `ẍ = −P` with the table's `P`.
    fn lie(&self, p: &[String]) -> Result<Scenario, ScenarioError> {
        let comps = p.iter().map(|c| self.expr(c).map(|e| e.neg())).collect::<Result<Vec<_>, _>>()?;
        let force = ForceField::new(comps)?;
        Ok(Scenario::forced(self.name(), Metric::euclidean(self.n), force, self.catalog(), self.sample_box()))
    }

    fn noether(&self, v: &str) -> Result<Scenario, ScenarioError> {
        let v = self.expr(v)?;
        Scenario::conservative(self.name(), Metric::euclidean(self.n), v, self.catalog(), self.sample_box())
    }

    fn name(&self) -> String {
        format!("newtonian:{}d:{}", self.n, self.provenance.to_lowercase().replace(' ', ""))
    }

    fn catalog(&self) -> crate::collineation::CollineationBasis {
        flat_projective_catalog(&vec![1; self.n])
    }

    fn sample_box(&self) -> SampleBox {
        SampleBox::cube(self.n, 0.5, 2.0)
    }
}

fn positive_m(m: f64) -> Result<f64, ScenarioError> {
    if m > 0.0 && m.is_finite() {
        Ok(m)
    } else {
        Err(ScenarioError::InvalidParameter(format!("m must be positive, got {m}")))
    }
}

/// A representative instance of a Table 3–6 row in `n = 2` or `3` flat
/// dimensions, with `μ, ν, σ = x1, x2, x3`.
///
/// Table 3 and 4 forces are the `P` of `ẍ + P = 0`, so the scenario force
/// is `F = −P`.
pub fn newtonian_scenario(n: usize, row: NewtonianRow, params: &NewtonianParams) -> Result<Scenario, ScenarioError> {
    if !(2..=3).contains(&n) {
        return Err(ScenarioError::InvalidParameter(format!("Newtonian families are 2d or 3d, got {n}")));
    }
    let (table, r) = row.parts();
    let b = Builder { n, chart: CoordinateChart::numbered(n), provenance: format!("Table {table} row {r}") };
    let prov = b.provenance.clone();
    let mut sc = match (table, r) {
        (3, 1..=5) => table3(&b, r, params)?,
        (4, 1..=4) => table4(&b, r, params)?,
        (5, 1..=5) => table5(&b, r, params)?,
        (6, 1..=4) => table6(&b, r, params)?,
        _ => return Err(ScenarioError::InvalidParameter(format!("no row {r} in Table {table}"))),
    };
    if sc.potential.is_some() {
        let energy = NoetherSpec::case1("d_t", SymmetryVector::time_translation(b.chart.clone()), &prov);
        let e = sc.noether_entry(energy);
        sc.expected.insert(0, e);
    }
    Ok(sc)
}

fn table3(b: &Builder, r: usize, params: &NewtonianParams) -> Result<Scenario, ScenarioError> {
    let default_d = [1.0, 0.0, 2.0, 2.0, 1.0][r - 1];
    let d = params.d.unwrap_or(default_d);
    let half = num(d / 2.0);
    let xi = format!("{half}*t");
    let (p, label, vector): (Vec<String>, String, SymmetryVector) = match r {
        1 => {
            let e = format!("exp(-{}*x1)", num(d));
            let p = b.pick(&["1", "x2", "x3^2"], &["1", "x2"]).iter().map(|c| format!("{e}*{c}")).collect();
            (p, format!("{half} t d_t + d_x1"), b.vector(&xi, &["1", "0", "0"])?)
        }
        2 => {
            if d != 0.0 {
                return Err(ScenarioError::NotRepresentable(
                    "Table 3 row 2 with d != 0 needs the polar angle, which has no closed form here".into(),
                ));
            }
            let p = b.pick(&["x1", "x2", "x3^2"], &["x1", "x2"]).iter().map(|c| c.to_string()).collect();
            (p, "x2 d_x1 - x1 d_x2".into(), b.vector("0", &["x2", "-x1", "0"])?)
        }
        3 => {
            let e = format!("x1^{}", num(1.0 - d));
            let p = b.pick(&["1", "x2/x1", "x3/x1"], &["1", "x2/x1"]).iter().map(|c| format!("{e}*({c})")).collect();
            let radial = b.radial();
            let eta: Vec<&str> = radial.iter().map(String::as_str).collect();
            (p, format!("{half} t d_t + R d_R"), b.vector(&xi, &eta)?)
        }
        4 => {
            let mut p = vec![format!("x1^{}*(1 + x2^2)", num(1.0 - d))];
            p.resize(b.n, "0".into());
            (p, format!("{half} t d_t + x1 d_x1"), b.vector(&xi, &["x1", "0", "0"])?)
        }
        _ => {
            let e = format!("exp(-{}*x1/x2)", num(d));
            let p =
                b.pick(&["x1/x2 + x2", "1", "x3"], &["x1/x2 + x2", "1"]).iter().map(|c| format!("{e}*({c})")).collect();
            (p, format!("{half} t d_t + x2 d_x1"), b.vector(&xi, &["x2", "0", "0"])?)
        }
    };
    let mut sc = b.lie(&p)?;
    sc.expected.push(ExpectedSymmetry::lie(label, vector, &b.provenance));
    sc.notes.push(format!("d = {d}"));
    Ok(sc)
}

fn ermakov_vectors(b: &Builder, m: f64, sc: &mut Scenario) -> Result<(), ScenarioError> {
    let k = m.sqrt();
    let radial = b.radial();
    for sign in [1.0, -1.0] {
        let e = format!("exp({}*t)", num(sign * k));
        let eta: Vec<String> = radial.iter().map(|x| format!("{e}*{x}")).collect();
        let eta: Vec<&str> = eta.iter().map(String::as_str).collect();
        let pm = if sign > 0.0 { "+" } else { "-" };
        let printed = b.vector(&format!("{}*{e}", num(1.0 / k)), &eta)?;
        let fixed = b.vector(&format!("{}*{e}", num(sign * 2.0 / k)), &eta)?;
        let lead = if sign > 0.0 { "" } else { "-" };
        sc.expected.push(ExpectedSymmetry::lie(
            format!("(1/sqrt(m)) e^({pm}t sqrt(m)) d_t + e^({pm}t sqrt(m)) R d_R"),
            printed,
            &b.provenance,
        ));
        sc.expected.push(
            ExpectedSymmetry::lie(
                format!("{lead}(2/sqrt(m)) e^({pm}t sqrt(m)) d_t + e^({pm}t sqrt(m)) R d_R"),
                fixed,
                &b.provenance,
            )
            .with_status(EntryStatus::Corrected(
                "the x^-3 term forces the time coefficient +-2/sqrt(m); 1/sqrt(m) fails".into(),
            )),
        );
    }
    Ok(())
}

fn table4(b: &Builder, r: usize, params: &NewtonianParams) -> Result<Scenario, ScenarioError> {
    let radial = b.radial();
    let eta_r: Vec<&str> = radial.iter().map(String::as_str).collect();
    match r {
        1 => {
            let p: Vec<String> =
                b.pick(&["x2*x3", "x2", "x3"], &["x2", "x2^2"]).iter().map(|c| c.to_string()).collect();
            let mut sc = b.lie(&p)?;
            sc.expected.push(ExpectedSymmetry::lie("t d_x1", b.vector("0", &["t", "0", "0"])?, &b.provenance));
            Ok(sc)
        }
        2 => {
            let p: Vec<String> =
                b.pick(&["1", "x2/x1", "x3/x1"], &["1", "x2/x1"]).iter().map(|c| format!("x1^(-3)*({c})")).collect();
            let mut sc = b.lie(&p)?;
            let eta: Vec<String> = eta_r.iter().map(|x| format!("t*{x}")).collect();
            let eta: Vec<&str> = eta.iter().map(String::as_str).collect();
            sc.expected.push(ExpectedSymmetry::lie("t^2 d_t + t R d_R", b.vector("t^2", &eta)?, &b.provenance));
            Ok(sc)
        }
        3 => {
            let m = positive_m(params.m.unwrap_or(1.0))?;
            let mut p = vec![format!("-{}*x1 + 1", num(m))];
            p.resize(b.n, "0".into());
            let mut sc = b.lie(&p)?;
            for (sign, pm) in [(1.0, "+"), (-1.0, "-")] {
                let e = format!("exp({}*t)", num(sign * m.sqrt()));
                let v = b.vector("0", &[&e, "0", "0"])?;
                sc.expected.push(ExpectedSymmetry::lie(format!("e^({pm}t sqrt(m)) d_x1"), v, &b.provenance));
            }
            sc.notes.push(format!("m = {m}, f = 1"));
            Ok(sc)
        }
        _ => {
            let m = positive_m(params.m.unwrap_or(4.0))?;
            let p: Vec<String> = eta_r.iter().map(|x| format!("-{}*{x} + {x}^(-3)", num(m / 4.0))).collect();
            let mut sc = b.lie(&p)?;
            ermakov_vectors(b, m, &mut sc)?;
            sc.notes.push(format!("m = {m}, f = 1"));
            Ok(sc)
        }
    }
}

fn table5(b: &Builder, r: usize, params: &NewtonianParams) -> Result<Scenario, ScenarioError> {
    let default_d = [0.0, 0.0, 4.0, 0.0, 0.0][r - 1];
    let d = params.d.unwrap_or(default_d);
    if d == 2.0 {
        return Err(ScenarioError::InvalidParameter("Table 5 excludes d = 2".into()));
    }
    let half = num(d / 2.0);
    let xi = format!("{half}*t");
    let (v, label, eta): (String, String, Vec<&str>) = match r {
        1 => {
            let f = if b.n == 3 { "x2^2 + x3^3" } else { "x2^2" };
            let v = if d == 0.0 {
                format!("{}*x1 + {f}", num(params.c1.unwrap_or(1.0)))
            } else {
                format!("exp(-{}*x1)*({f})", num(d))
            };
            (v, format!("{half} t d_t + d_x1"), vec!["1", "0", "0"])
        }
        2 => {
            if d != 0.0 || params.c1.unwrap_or(0.0) != 0.0 {
                return Err(ScenarioError::NotRepresentable(
                    "Table 5 row 2 beyond d = 0, c1 = 0 needs the polar angle".into(),
                ));
            }
            let v = if b.n == 3 { "x1^2 + x2^2 + x3" } else { "x1^2 + x2^2" };
            (v.into(), "x2 d_x1 - x1 d_x2".into(), vec!["x2", "-x1", "0"])
        }
        3 => {
            let f = if b.n == 3 { "1 + (x2/x1)^2 + x3/x1" } else { "1 + (x2/x1)^2" };
            (format!("x1^{}*({f})", num(2.0 - d)), format!("{half} t d_t + R d_R"), vec!["x1", "x2", "x3"])
        }
        _ => {
            return Err(ScenarioError::NotRepresentable(format!(
                "Table 5 row {r}: the listed generator is not in the homothetic algebra of flat space"
            )))
        }
    };
    let mut sc = b.noether(&v)?;
    let vector = b.vector(if d == 0.0 && r != 3 { "0" } else { &xi }, &eta)?;
    let spec = NoetherSpec::case1(label, vector, &b.provenance);
    let entry = sc.noether_entry(spec);
    sc.expected.push(entry);
    sc.notes.push(format!("d = {d}"));
    Ok(sc)
}

fn table6(b: &Builder, r: usize, params: &NewtonianParams) -> Result<Scenario, ScenarioError> {
    let t = Expression::time();
    let half_t2 = Expression::ratio(1, 2).mul(&t.powi(2));
    match r {
        1 => {
            let c1 = params.c1.unwrap_or(1.0);
            let mut sc = b.noether(&format!("{}*x1 + x2^2", num(c1)))?;
            let s1 = sc.catalog.get("S1").expect("flat catalog").clone();
            let spec = NoetherSpec::case2("t d_x1", Expression::zero(), &t, &half_t2, &s1, &b.provenance);
            let e = sc.noether_entry(spec);
            sc.expected.push(e);
            Ok(sc)
        }
        2 => {
            let mut sc = b.noether("x1^(-2)*(1 + x2/x1)")?;
            let h = sc.catalog.get("H").expect("flat catalog").clone();
            let spec = NoetherSpec::case2("t^2 d_t + t R d_R", t.powi(2), &t, &half_t2, &h, &b.provenance);
            let e = sc.noether_entry(spec);
            sc.expected.push(e);
            Ok(sc)
        }
        3 => {
            let m = positive_m(params.m.unwrap_or(1.0))?;
            let c1 = params.c1.unwrap_or(1.0);
            let mut sc = b.noether(&format!("-{}*x1^2 + {}*x1 + x2^2", num(m / 2.0), num(c1)))?;
            let s1 = sc.catalog.get("S1").expect("flat catalog").clone();
            let k = m.sqrt();
            for (sign, pm) in [(1.0, "+"), (-1.0, "-")] {
                let tf = t.scale(sign * k).exp();
                let ti = tf.scale(1.0 / (sign * k));
                let label = format!("e^({pm}t sqrt(m)) d_x1");
                let spec = NoetherSpec::case2(label, Expression::zero(), &tf, &ti, &s1, &b.provenance);
                let e = sc.noether_entry(spec);
                sc.expected.push(e);
            }
            Ok(sc)
        }
        _ => {
            let m = positive_m(params.m.unwrap_or(4.0))?;
            let r2 = if b.n == 3 { "x1^2 + x2^2 + x3^2" } else { "x1^2 + x2^2" };
            let mut sc = b.noether(&format!("-{}*({r2}) + x1^(-2)", num(m / 8.0)))?;
            let h = sc.catalog.get("H").expect("flat catalog").clone();
            let k = m.sqrt();
            for (sign, pm) in [(1.0, "+"), (-1.0, "-")] {
                let tf = t.scale(sign * k).exp();
                let ti = tf.scale(1.0 / (sign * k));
                for (coeff, status) in [
                    (1.0, EntryStatus::Quoted),
                    (
                        2.0,
                        EntryStatus::Corrected(
                            "Case II gives the time coefficient +-2/sqrt(m); 1/sqrt(m) fails".into(),
                        ),
                    ),
                ] {
                    let (coeff, lead): (f64, &str) =
                        if coeff > 1.0 && sign < 0.0 { (-coeff, "-") } else { (coeff, "") };
                    let label =
                        format!("{lead}({}/sqrt(m)) e^({pm}t sqrt(m)) d_t + e^({pm}t sqrt(m)) R d_R", coeff.abs());
                    let xi = tf.scale(coeff / k);
                    let spec = NoetherSpec::case2(label, xi, &tf, &ti, &h, &b.provenance).status(status);
                    let e = sc.noether_entry(spec);
                    sc.expected.push(e);
                }
            }
            Ok(sc)
        }
    }
}

/// `ẍ^μ = (m/4)x^μ − (x^μ)⁻³` in 3d: Table 4 row 4 with `f ≡ 1`.
pub fn ermakov_scenario(m: f64) -> Result<Scenario, ScenarioError> {
    let mut sc = newtonian_scenario(3, NewtonianRow::Table4(4), &NewtonianParams { m: Some(m), ..Default::default() })?;
    sc.name = format!("ermakov:m={m}");
    Ok(sc)
}
