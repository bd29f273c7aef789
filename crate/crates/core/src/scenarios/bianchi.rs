use std::fmt;
use std::str::FromStr;

use super::{combination, EntryStatus, ExpectedSymmetry, NoetherSpec, Scenario, ScenarioError};
use crate::collineation::{
    bianchi_metric, bianchi_symmetry_catalog, bianchi_vacuum_metric, bianchi_vacuum_symmetry_catalog,
};
use crate::expr::Expression;
use crate::geometry::{SampleBox, SymmetryVector};

/// Class A Bianchi types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BianchiType {
    I,
    II,
    VI0,
    VII0,
    VIII,
    IX,
}

impl BianchiType {
    pub const ALL: [BianchiType; 6] =
        [BianchiType::I, BianchiType::II, BianchiType::VI0, BianchiType::VII0, BianchiType::VIII, BianchiType::IX];

    /// `(N₁, N₂, N₃)`.
    pub fn structure(self) -> [i64; 3] {
        match self {
            BianchiType::I => [0, 0, 0],
            BianchiType::II => [1, 0, 0],
            BianchiType::VI0 => [0, 1, -1],
            BianchiType::VII0 => [0, 1, 1],
            BianchiType::VIII => [1, 1, -1],
            BianchiType::IX => [1, 1, 1],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BianchiType::I => "I",
            BianchiType::II => "II",
            BianchiType::VI0 => "VI0",
            BianchiType::VII0 => "VII0",
            BianchiType::VIII => "VIII",
            BianchiType::IX => "IX",
        }
    }

    /// The table listing this type's symmetries.
    pub fn table(self) -> usize {
        match self {
            BianchiType::I => 8,
            BianchiType::II => 9,
            BianchiType::VI0 | BianchiType::VII0 => 10,
            BianchiType::VIII | BianchiType::IX => 11,
        }
    }
}

impl fmt::Display for BianchiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BianchiType {
    type Err = ScenarioError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = match s.to_ascii_uppercase().as_str() {
            "I" => BianchiType::I,
            "II" => BianchiType::II,
            "VI0" | "VI" => BianchiType::VI0,
            "VII0" | "VII" => BianchiType::VII0,
            "VIII" => BianchiType::VIII,
            "IX" => BianchiType::IX,
            _ => return Err(ScenarioError::InvalidParameter(format!("unknown Bianchi type `{s}`"))),
        };
        Ok(t)
    }
}

/// Scalar-field potential families of Tables 8–11.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PotentialFamily {
    /// No scalar field; the chart is `(lambda, beta1, beta2)`.
    Vacuum,
    Zero,
    Constant,
    /// Represented by `V = φ⁴ + φ`.
    Arbitrary,
    /// `V₀e^{−dφ}`.
    Exponential,
}

impl PotentialFamily {
    pub const ALL: [PotentialFamily; 5] = [
        PotentialFamily::Vacuum,
        PotentialFamily::Zero,
        PotentialFamily::Constant,
        PotentialFamily::Arbitrary,
        PotentialFamily::Exponential,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PotentialFamily::Vacuum => "vacuum",
            PotentialFamily::Zero => "zero",
            PotentialFamily::Constant => "constant",
            PotentialFamily::Arbitrary => "arbitrary",
            PotentialFamily::Exponential => "exponential",
        }
    }

    fn row(self) -> &'static str {
        match self {
            PotentialFamily::Vacuum => "Vacuum",
            PotentialFamily::Zero => "Zero Pot.",
            PotentialFamily::Constant => "Constant Pot.",
            PotentialFamily::Arbitrary => "Arbitrary Pot.",
            PotentialFamily::Exponential => "Exponential Pot.",
        }
    }
}

impl fmt::Display for PotentialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PotentialFamily {
    type Err = ScenarioError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PotentialFamily::ALL
            .into_iter()
            .find(|f| f.label() == s.to_ascii_lowercase())
            .ok_or_else(|| ScenarioError::InvalidParameter(format!("unknown potential family `{s}`")))
    }
}

/// A class A Bianchi model with a scalar field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BianchiModel {
    pub kind: BianchiType,
    pub family: PotentialFamily,
    /// `V₀` of the constant and exponential families.
    pub v0: f64,
    /// `d` of the exponential family.
    pub d: f64,
}

fn lambda() -> Expression {
    Expression::coord(0)
}

impl BianchiModel {
    /// Defaults: `V₀ = 2/3` for the constant family (so `C = 1`), and
    /// `V₀ = 1`, `d = 2` for the exponential family.
    pub fn new(kind: BianchiType, family: PotentialFamily) -> Self {
        let v0 = if family == PotentialFamily::Constant { 2.0 / 3.0 } else { 1.0 };
        BianchiModel { kind, family, v0, d: 2.0 }
    }

    pub fn with_v0(mut self, v0: f64) -> Self {
        self.v0 = v0;
        self
    }

    pub fn with_d(mut self, d: f64) -> Self {
        self.d = d;
        self
    }

    pub fn dim(&self) -> usize {
        if self.family == PotentialFamily::Vacuum {
            3
        } else {
            4
        }
    }

    /// `R* = −½e^{−2λ}[N₁²e^{4β₁} + e^{−2β₁}S² − 2N₁e^{β₁}S] + ½N₁N₂N₃(1 + N₁N₂N₃)`
    /// with `S = N₂e^{√3β₂} − N₃e^{−√3β₂}`.
    pub fn ricci_scalar(&self) -> Expression {
        let [n1, n2, n3] = self.kind.structure();
        let int = Expression::int;
        let (b1, b2) = (Expression::coord(1), Expression::coord(2));
        let r3 = int(3).sqrt();
        let s = int(n2).mul(&r3.mul(&b2).exp()).sub(&int(n3).mul(&r3.mul(&b2).neg().exp()));
        let bracket = int(n1 * n1)
            .mul(&b1.scale(4.0).exp())
            .add(&b1.scale(-2.0).exp().mul(&s.powi(2)))
            .sub(&int(2 * n1).mul(&b1.exp()).mul(&s));
        let prod = n1 * n2 * n3;
        Expression::ratio(-1, 2)
            .mul(&lambda().scale(-2.0).exp())
            .mul(&bracket)
            .add(&Expression::ratio(prod * (1 + prod), 2))
    }

    /// `V(φ)` of the family.
    pub fn scalar_potential(&self) -> Result<Expression, ScenarioError> {
        let phi = Expression::coord(3);
        Ok(match self.family {
            PotentialFamily::Vacuum | PotentialFamily::Zero => Expression::zero(),
            PotentialFamily::Constant => super::number(self.v0),
            PotentialFamily::Arbitrary => phi.powi(4).add(&phi),
            PotentialFamily::Exponential => super::number(self.v0).mul(&exponential_potential(self.d)?),
        })
    }

    /// `U = −e^{3λ}(V + R*)`.
    pub fn potential(&self) -> Result<Expression, ScenarioError> {
        let sum = self.scalar_potential()?.add(&self.ricci_scalar());
        Ok(lambda().scale(3.0).exp().mul(&sum).neg())
    }

    /// `C` of the constant-potential Case II vectors, from `C² = (3/2)V₀`.
    pub fn case2_constant(&self) -> f64 {
        (1.5 * self.v0).sqrt()
    }

    pub fn name(&self) -> String {
        format!("bianchi:{}:{}", self.kind, self.family)
    }
}

/// `e^{−dφ}`; the family `V₀e^{−dφ}` is fixed by requiring
/// `2t∂_t + Hⁱ + (4/d)Y³` to satisfy the Noether conditions for `U = −e^{3λ}V`.
pub fn exponential_potential(d: f64) -> Result<Expression, ScenarioError> {
    if d == 0.0 || !d.is_finite() {
        return Err(ScenarioError::InvalidParameter(format!("exponential potential needs d != 0, got {d}")));
    }
    Ok(Expression::coord(3).mul(&super::number(-d)).exp())
}

/// Generator shapes used in Tables 8–11.
#[derive(Clone, Debug)]
enum Shape {
    /// `∂_t`.
    Dt,
    /// `a t∂_t + Σ cₐYₐ`.
    Comb(f64, Vec<(f64, &'static str)>),
    /// `t²∂_t + tHⁱ`.
    Quad,
    /// `(c/C)e^{sCt}∂_t + s e^{sCt}Hⁱ`.
    Exp { sign: f64, c: f64 },
}

#[derive(Clone)]
struct Entry {
    label: String,
    shape: Shape,
    status: EntryStatus,
}

fn q(label: impl Into<String>, shape: Shape) -> Entry {
    Entry { label: label.into(), shape, status: EntryStatus::Quoted }
}

fn fix(label: impl Into<String>, shape: Shape, note: &str) -> Entry {
    Entry { label: label.into(), shape, status: EntryStatus::Corrected(note.into()) }
}

fn y(name: &'static str) -> Entry {
    q(name, Shape::Comb(0.0, vec![(1.0, name)]))
}

fn dt() -> Entry {
    q("d_t", Shape::Dt)
}

fn comb(label: &str, a: f64, terms: &[(f64, &'static str)]) -> Entry {
    q(label, Shape::Comb(a, terms.to_vec()))
}

fn all_y() -> Vec<Entry> {
    ["Y1", "Y2", "Y3", "Y4", "Y5", "Y6"].into_iter().map(y).collect()
}

fn y124() -> Vec<Entry> {
    ["Y1", "Y2", "Y4"].into_iter().map(y).collect()
}

fn case2_exponential() -> Vec<Entry> {
    let note = "the T'' = C^2 T profile gives the time coefficient 2/C; 1/C fails";
    let mut out = Vec::new();
    for (sign, pm) in [(1.0, "+"), (-1.0, "-")] {
        out.push(q(format!("(1/C) e^({pm}Ct) d_t {pm} e^({pm}Ct) H"), Shape::Exp { sign, c: 1.0 }));
        out.push(fix(format!("(2/C) e^({pm}Ct) d_t {pm} e^({pm}Ct) H"), Shape::Exp { sign, c: 2.0 }, note));
    }
    out
}

/// `(noether, lie)` entries of the table cell.
fn table_cell(kind: BianchiType, family: PotentialFamily, d: f64) -> Option<(Vec<Entry>, Vec<Entry>)> {
    use BianchiType as B;
    use PotentialFamily as P;
    const R3: f64 = 1.732_050_807_568_877_2;
    let c6 = "the printed coefficients do not cancel the R* terms";
    let cell = match (kind, family) {
        (B::I, P::Vacuum) => (
            [vec![dt()], y124(), vec![comb("2t d_t + H", 2.0, &[(1.0, "H")]), q("t^2 d_t + t H", Shape::Quad)]]
                .concat(),
            [vec![dt(), comb("t d_t", 1.0, &[])], y124(), vec![y("H"), q("t^2 d_t + t H", Shape::Quad)]].concat(),
        ),
        (B::I, P::Zero) => (
            [vec![dt()], all_y(), vec![comb("2t d_t + H", 2.0, &[(1.0, "H")]), q("t^2 d_t + t H", Shape::Quad)]]
                .concat(),
            [vec![dt(), comb("t d_t", 1.0, &[])], all_y(), vec![y("H"), q("t^2 d_t + t H", Shape::Quad)]].concat(),
        ),
        (B::I, P::Constant) => (
            [vec![dt()], all_y(), case2_exponential()].concat(),
            [vec![dt()], all_y(), vec![y("H")], case2_exponential()].concat(),
        ),
        (B::I, P::Arbitrary) => ([vec![dt()], y124()].concat(), [vec![dt()], y124(), vec![y("H")]].concat()),
        (B::I, P::Exponential) => (
            [vec![dt()], y124(), vec![comb("2t d_t + H + (4/d) Y3", 2.0, &[(1.0, "H"), (4.0 / d, "Y3")])]].concat(),
            [vec![dt()], y124(), vec![y("H"), comb("t d_t + (2/d) Y3", 1.0, &[(2.0 / d, "Y3")])]].concat(),
        ),
        (B::II, P::Vacuum | P::Zero) => {
            let extra: Vec<Entry> = if family == P::Zero { vec![y("Y2"), y("Y3"), y("Y6")] } else { vec![y("Y2")] };
            let mut noether = vec![dt()];
            noether.extend(extra);
            noether.push(comb("6t d_t + 3H - 5Y1", 6.0, &[(3.0, "H"), (-5.0, "Y1")]));
            noether.push(fix("6t d_t + 3H - 2Y1", Shape::Comb(6.0, vec![(3.0, "H"), (-2.0, "Y1")]), c6));
            let mut lie = vec![dt()];
            lie.extend(if family == P::Zero { vec![y("Y2"), y("Y3"), y("Y6")] } else { vec![y("Y2")] });
            lie.push(comb("(1/3)t d_t + H", 1.0 / 3.0, &[(1.0, "H")]));
            lie.push(fix("(2/3)t d_t + H", Shape::Comb(2.0 / 3.0, vec![(1.0, "H")]), c6));
            lie.push(comb("t d_t - Y1", 1.0, &[(-1.0, "Y1")]));
            lie.push(fix("2t d_t - Y1", Shape::Comb(2.0, vec![(-1.0, "Y1")]), c6));
            (noether, lie)
        }
        (B::II, P::Constant) => (
            vec![dt(), y("Y2"), y("Y3"), y("Y6")],
            vec![dt(), y("Y2"), y("Y3"), y("Y6"), comb("3H + Y1", 0.0, &[(3.0, "H"), (1.0, "Y1")])],
        ),
        (B::II, P::Arbitrary) => {
            (vec![dt(), y("Y2")], vec![dt(), y("Y2"), comb("3H + Y1", 0.0, &[(3.0, "H"), (1.0, "Y1")])])
        }
        (B::II, P::Exponential) => (
            vec![
                dt(),
                y("Y2"),
                comb("2t d_t + H - (5/3)Y1 + (4/d) Y3", 2.0, &[(1.0, "H"), (-5.0 / 3.0, "Y1"), (4.0 / d, "Y3")]),
                fix(
                    "2t d_t + H - (2/3)Y1 + (4/d) Y3",
                    Shape::Comb(2.0, vec![(1.0, "H"), (-2.0 / 3.0, "Y1"), (4.0 / d, "Y3")]),
                    c6,
                ),
            ],
            vec![
                dt(),
                y("Y2"),
                comb("3H + Y1", 0.0, &[(3.0, "H"), (1.0, "Y1")]),
                comb("t d_t + (2/d) Y3", 1.0, &[(2.0 / d, "Y3")]),
                fix(
                    "t d_t + (1/2)H - (1/3)Y1 + (2/d) Y3",
                    Shape::Comb(1.0, vec![(0.5, "H"), (-1.0 / 3.0, "Y1"), (2.0 / d, "Y3")]),
                    c6,
                ),
            ],
        ),
        (B::VI0 | B::VII0, _) => {
            let hv = || comb("H + (1/3)Y1 + (sqrt(3)/3)Y2", 0.0, &[(1.0, "H"), (1.0 / 3.0, "Y1"), (R3 / 3.0, "Y2")]);
            let hv_fix = || fix("H - (2/3)Y1", Shape::Comb(0.0, vec![(1.0, "H"), (-2.0 / 3.0, "Y1")]), c6);
            let ncase = || comb("6t d_t + 3H - 2Y1 - 2sqrt(3)Y2", 6.0, &[(3.0, "H"), (-2.0, "Y1"), (-2.0 * R3, "Y2")]);
            let ncase_fix = || fix("6t d_t + 3H + 4Y1", Shape::Comb(6.0, vec![(3.0, "H"), (4.0, "Y1")]), c6);
            let lcase = || comb("2t d_t - Y1 - sqrt(3)Y2", 2.0, &[(-1.0, "Y1"), (-R3, "Y2")]);
            let lcase_fix = || fix("2t d_t + 2Y1", Shape::Comb(2.0, vec![(2.0, "Y1")]), c6);
            match family {
                P::Vacuum => (vec![dt(), ncase(), ncase_fix()], vec![dt(), hv(), hv_fix(), lcase(), lcase_fix()]),
                P::Zero => (
                    vec![dt(), y("Y3"), ncase(), ncase_fix()],
                    vec![dt(), hv(), hv_fix(), y("Y3"), lcase(), lcase_fix()],
                ),
                P::Constant => (vec![dt(), y("Y3")], vec![dt(), y("Y3"), hv(), hv_fix()]),
                P::Arbitrary => (vec![dt()], vec![dt(), hv(), hv_fix()]),
                P::Exponential => (
                    vec![
                        dt(),
                        comb(
                            "6t d_t + 3H - 2Y1 - 2sqrt(3)Y2 + (6/d) Y3",
                            6.0,
                            &[(3.0, "H"), (-2.0, "Y1"), (-2.0 * R3, "Y2"), (6.0 / d, "Y3")],
                        ),
                        fix(
                            "6t d_t + 3H + 4Y1 + (12/d) Y3",
                            Shape::Comb(6.0, vec![(3.0, "H"), (4.0, "Y1"), (12.0 / d, "Y3")]),
                            c6,
                        ),
                    ],
                    vec![
                        dt(),
                        hv(),
                        hv_fix(),
                        comb("t d_t + (1/d) Y3", 1.0, &[(1.0 / d, "Y3")]),
                        fix(
                            "t d_t + (1/2)H + (2/3)Y1 + (2/d) Y3",
                            Shape::Comb(1.0, vec![(0.5, "H"), (2.0 / 3.0, "Y1"), (2.0 / d, "Y3")]),
                            c6,
                        ),
                    ],
                ),
            }
        }
        (B::VIII, P::Vacuum) => (vec![dt()], vec![dt(), comb("(2/3)t d_t + H", 2.0 / 3.0, &[(1.0, "H")])]),
        (B::VIII, P::Zero) => {
            (vec![dt(), y("Y3")], vec![dt(), y("Y3"), comb("(2/3)t d_t + H", 2.0 / 3.0, &[(1.0, "H")])])
        }
        (B::VIII | B::IX, P::Constant) | (B::IX, P::Zero) => (vec![dt(), y("Y3")], vec![dt(), y("Y3")]),
        (B::VIII | B::IX, P::Arbitrary) | (B::IX, P::Vacuum) => (vec![dt()], vec![dt()]),
        (B::VIII | B::IX, P::Exponential) => return None,
    };
    Some(cell)
}

fn sample_box(n: usize) -> SampleBox {
    SampleBox::cube(n, -1.0, 1.0)
}

/// The mini-superspace system of `model`: metric
/// `e^{3λ}(12dλ² − 3dβ₁² − 3dβ₂² − 2dφ²)`, potential `U = −e^{3λ}(V + R*)`,
/// catalog `Y¹…Y⁶, H`, and the matching Table 8–11 cell.
pub fn bianchi_scenario(model: BianchiModel) -> Result<Scenario, ScenarioError> {
    if model.family == PotentialFamily::Constant && !(model.v0 > 0.0) {
        return Err(ScenarioError::InvalidParameter(format!("constant potential needs V0 > 0, got {}", model.v0)));
    }
    let n = model.dim();
    let (metric, catalog) = if n == 3 {
        (bianchi_vacuum_metric(), bianchi_vacuum_symmetry_catalog())
    } else {
        (bianchi_metric(), bianchi_symmetry_catalog())
    };
    let mut sc = Scenario::conservative(model.name(), metric, model.potential()?, catalog, sample_box(n))?;
    match model.family {
        PotentialFamily::Constant => sc.notes.push(format!(
            "V0 = {}, C = sqrt(3 V0 / 2) = {} (derived, not printed)",
            model.v0,
            model.case2_constant()
        )),
        PotentialFamily::Exponential => sc.notes.push(format!("V = {} exp(-{} phi)", model.v0, model.d)),
        PotentialFamily::Arbitrary => sc.notes.push("V = phi^4 + phi represents an arbitrary potential".into()),
        _ => {}
    }
    let provenance =
        |col: &str| format!("Table {}, Bianchi {}, {}, {col}", model.kind.table(), model.kind, model.family.row());
    let Some((noether, lie)) = table_cell(model.kind, model.family, model.d) else {
        sc.notes.push(format!("Table {} has no {} row", model.kind.table(), model.family.row()));
        return Ok(sc);
    };
    let c = model.case2_constant();
    for e in noether {
        let spec = noether_spec(&sc, &e, c, provenance("Noether Sym."));
        let entry = sc.noether_entry(spec);
        sc.expected.push(entry);
    }
    for e in lie {
        let vector = shape_vector(&sc, &e.shape, c);
        sc.expected.push(ExpectedSymmetry::lie(e.label, vector, provenance("Lie Sym.")).with_status(e.status));
    }
    let control = match (model.kind, model.family) {
        (BianchiType::I, PotentialFamily::Arbitrary | PotentialFamily::Exponential) => y("Y3"),
        (BianchiType::I, _) => comb("t d_t", 1.0, &[]),
        _ => y("Y1"),
    };
    let spec = noether_spec(&sc, &control, c, "negative control".into());
    let entry = sc.noether_entry(spec);
    sc.negative_controls.push(entry);
    Ok(sc)
}

fn time_exp(sign: f64, c: f64) -> Expression {
    Expression::time().scale(sign * c).exp()
}

fn shape_vector(sc: &Scenario, shape: &Shape, c: f64) -> SymmetryVector {
    let chart = sc.metric.chart().clone();
    let t = Expression::time();
    let h = &sc.catalog.get("H").expect("Bianchi catalog has H").vector;
    match shape {
        Shape::Dt => SymmetryVector::time_translation(chart),
        Shape::Comb(a, terms) => {
            let base = if terms.is_empty() { SymmetryVector::zero(chart) } else { combination(&sc.catalog, terms) };
            base.with_time_component(super::number(*a).mul(&t))
        }
        Shape::Quad => h.scaled(&t).with_time_component(t.powi(2)),
        Shape::Exp { sign, c: k } => {
            let e = time_exp(*sign, c);
            h.scaled(&e.scale(*sign)).with_time_component(e.scale(k / c))
        }
    }
}

fn noether_spec(sc: &Scenario, e: &Entry, c: f64, provenance: String) -> NoetherSpec {
    let t = Expression::time();
    let h = sc.catalog.get("H").expect("Bianchi catalog has H");
    let spec = match &e.shape {
        Shape::Quad => {
            NoetherSpec::case2(&e.label, t.powi(2), &t, &Expression::ratio(1, 2).mul(&t.powi(2)), h, provenance)
        }
        Shape::Exp { sign, c: k } => {
            let tf = time_exp(*sign, c).scale(*sign);
            let ti = time_exp(*sign, c).scale(1.0 / c);
            NoetherSpec::case2(&e.label, time_exp(*sign, c).scale(k / c), &tf, &ti, h, provenance)
        }
        shape => NoetherSpec::case1(&e.label, shape_vector(sc, shape, c), provenance),
    };
    spec.status(e.status.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bianchi_one_has_flat_ricci() {
        let m = BianchiModel::new(BianchiType::I, PotentialFamily::Zero);
        assert!(m.ricci_scalar().is_zero());
        let ix = BianchiModel::new(BianchiType::IX, PotentialFamily::Zero).ricci_scalar();
        let v = ix.eval(&[0.0, 0.0, 0.0, 0.0], None).unwrap();
        assert!((v - 0.5).abs() < 1e-15, "{v}");
    }

    #[test]
    fn parse_names() {
        assert_eq!("vii0".parse::<BianchiType>().unwrap(), BianchiType::VII0);
        assert_eq!("Constant".parse::<PotentialFamily>().unwrap(), PotentialFamily::Constant);
        assert!("X".parse::<BianchiType>().is_err());
        assert!(exponential_potential(0.0).is_err());
    }

    #[test]
    fn vacuum_bianchi_one_entries_pass() {
        let sc = bianchi_scenario(BianchiModel::new(BianchiType::I, PotentialFamily::Vacuum)).unwrap();
        assert_eq!(sc.metric.dim(), 3);
        for c in sc.check_expected(60, 0, 1e-8).unwrap() {
            assert!(c.passed, "{c}");
        }
        let neg = &sc.negative_controls[0];
        assert!(!sc.check(neg, &sc.samples(60, 0), 1e-8).unwrap().passed);
    }
}
