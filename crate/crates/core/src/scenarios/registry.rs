use super::{
    bianchi_scenario, ermakov_scenario, newtonian_scenario, sphere_scenario, table7_scenario, BianchiModel,
    NewtonianParams, NewtonianRow, Scenario, ScenarioError,
};
use crate::collineation::sphere_chart;
use crate::expr::parse;

/// Accepted scenario names.
pub const SCENARIO_SYNTAX: &str = "sphere:K=<1|-1>[:V=<expr>] | sphere:K=<1|-1>:row=<1..7>[:a=..][:b=..][:c=..] \
| bianchi:<I|II|VI0|VII0|VIII|IX>:<vacuum|zero|constant|arbitrary|exponential>[:V0=..][:d=..] \
| newtonian:table<3..6>:row<r>[:n=<2|3>][:d=..][:m=..][:c1=..] | ermakov[:m=..]";

fn unknown(name: &str) -> ScenarioError {
    ScenarioError::Unknown(name.to_string())
}

/// Splits `key=value` options after the positional parts.
fn options<'a>(name: &str, parts: &[&'a str]) -> Result<Vec<(&'a str, &'a str)>, ScenarioError> {
    parts.iter().map(|p| p.split_once('=').ok_or_else(|| unknown(name))).collect()
}

fn float(key: &str, value: &str) -> Result<f64, ScenarioError> {
    value.trim().parse().map_err(|_| ScenarioError::InvalidParameter(format!("{key}={value} is not a number")))
}

fn integer(key: &str, value: &str) -> Result<i64, ScenarioError> {
    value.trim().parse().map_err(|_| ScenarioError::InvalidParameter(format!("{key}={value} is not an integer")))
}

fn leftover(key: &str) -> ScenarioError {
    ScenarioError::InvalidParameter(format!("unexpected option `{key}`"))
}

/// Builds a scenario from its name, e.g. `sphere:K=1:row=3`,
/// `bianchi:IX:constant` or `newtonian:table4:row3:m=2`.
pub fn scenario_by_name(name: &str) -> Result<Scenario, ScenarioError> {
    let parts: Vec<&str> = name.trim().split(':').collect();
    match parts[0].to_ascii_lowercase().as_str() {
        "sphere" => sphere(name, &parts[1..]),
        "bianchi" => bianchi(name, &parts[1..]),
        "newtonian" => newtonian(name, &parts[1..]),
        "ermakov" => {
            let mut m = 4.0;
            for (k, v) in options(name, &parts[1..])? {
                match k {
                    "m" => m = float(k, v)?,
                    _ => return Err(leftover(k)),
                }
            }
            ermakov_scenario(m)
        }
        _ => Err(unknown(name)),
    }
}

/// [`scenario_by_name`] with the potential replaced by `potential`, parsed on
/// the scenario's chart. Sphere scenarios are rebuilt so that the matching
/// Table 7 entries are attached.
pub fn scenario_with_potential(name: &str, potential: &str) -> Result<Scenario, ScenarioError> {
    let base = scenario_by_name(name)?;
    let v = parse(potential, base.metric.chart())?;
    if name.trim().to_ascii_lowercase().starts_with("sphere") {
        let k = base.metric.chart().curvature().unwrap_or(1);
        return sphere_scenario(k, v);
    }
    base.with_potential(v)
}

fn sphere(name: &str, parts: &[&str]) -> Result<Scenario, ScenarioError> {
    let (mut k, mut v, mut row) = (None, None, None);
    let (mut a, mut b, mut c) = (1, 1, 1);
    for (key, value) in options(name, parts)? {
        match key {
            "K" | "k" => {
                k = Some(match integer(key, value)? {
                    1 => 1i8,
                    -1 => -1,
                    other => return Err(ScenarioError::InvalidParameter(format!("K must be 1 or -1, got {other}"))),
                })
            }
            "V" => v = Some(value),
            "row" => row = Some(integer(key, value)? as usize),
            "a" => a = integer(key, value)?,
            "b" => b = integer(key, value)?,
            "c" => c = integer(key, value)?,
            _ => return Err(leftover(key)),
        }
    }
    let k = k.ok_or_else(|| unknown(name))?;
    match (row, v) {
        (Some(_), Some(_)) => Err(ScenarioError::InvalidParameter("give either row= or V=, not both".into())),
        (Some(r), None) => table7_scenario(r, k, a, b, c),
        (None, v) => {
            let potential = parse(v.unwrap_or("0"), &sphere_chart(k))?;
            sphere_scenario(k, potential)
        }
    }
}

fn bianchi(name: &str, parts: &[&str]) -> Result<Scenario, ScenarioError> {
    let [kind, family, rest @ ..] = parts else {
        return Err(unknown(name));
    };
    let mut model = BianchiModel::new(kind.parse()?, family.parse()?);
    for (key, value) in options(name, rest)? {
        match key {
            "V0" | "v0" => model = model.with_v0(float(key, value)?),
            "d" => model = model.with_d(float(key, value)?),
            _ => return Err(leftover(key)),
        }
    }
    bianchi_scenario(model)
}

fn newtonian(name: &str, parts: &[&str]) -> Result<Scenario, ScenarioError> {
    let [table, row, rest @ ..] = parts else {
        return Err(unknown(name));
    };
    let table = table.to_ascii_lowercase();
    let table: usize = table.strip_prefix("table").and_then(|t| t.parse().ok()).ok_or_else(|| unknown(name))?;
    let row: usize = row.strip_prefix("row").and_then(|r| r.parse().ok()).ok_or_else(|| unknown(name))?;
    let row = match table {
        3 => NewtonianRow::Table3(row),
        4 => NewtonianRow::Table4(row),
        5 => NewtonianRow::Table5(row),
        6 => NewtonianRow::Table6(row),
        _ => return Err(unknown(name)),
    };
    let mut n = 3;
    let mut params = NewtonianParams::default();
    for (key, value) in options(name, rest)? {
        match key {
            "n" => n = integer(key, value)? as usize,
            "d" => params.d = Some(float(key, value)?),
            "m" => params.m = Some(float(key, value)?),
            "c1" => params.c1 = Some(float(key, value)?),
            _ => return Err(leftover(key)),
        }
    }
    newtonian_scenario(n, row, &params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        for name in [
            "sphere:K=1",
            "sphere:K=-1:V=cos(phi)",
            "sphere:K=1:row=6:a=1:b=2",
            "bianchi:IX:constant",
            "bianchi:I:exponential:d=3",
            "newtonian:table4:row3:m=2",
            "newtonian:table5:row1:n=2",
            "ermakov:m=4",
        ] {
            assert!(scenario_by_name(name).is_ok(), "{name}");
        }
    }

    #[test]
    fn bad_names_are_reported() {
        assert!(matches!(scenario_by_name("torus"), Err(ScenarioError::Unknown(_))));
        assert!(matches!(scenario_by_name("sphere:K=2"), Err(ScenarioError::InvalidParameter(_))));
        assert!(matches!(scenario_by_name("bianchi:IX:constant:q=1"), Err(ScenarioError::InvalidParameter(_))));
        assert!(matches!(scenario_by_name("newtonian:table9:row1"), Err(ScenarioError::Unknown(_))));
        assert!(matches!(scenario_by_name("newtonian:table5:row4"), Err(ScenarioError::NotRepresentable(_))));
    }
}
