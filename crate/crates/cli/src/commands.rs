use std::io::Write;
use std::path::Path;

use geonoether::collineation::{
    bianchi_metric, bianchi_symmetry_catalog, bianchi_vacuum_metric, bianchi_vacuum_symmetry_catalog,
    flat_projective_catalog, solve_determining_equations, sphere_killing_catalog, sphere_metric, verify_collineation,
    CollineationBasis, CollineationClaim, CollineationKind, SolverKind,
};
use geonoether::dynamics::{conservation_drift, integrate_with_margin, write_csv, Method, Trajectory};
use geonoether::expr::{parse, Expression};
use geonoether::scenarios::{
    scenario_by_name, scenario_with_potential, ExpectedSymmetry, Scenario, CHECK_SAMPLES, CHECK_TOLERANCE,
};
use geonoether::symmetry::{
    build_noether_integral, find_noether_case1, find_noether_case2, lie_conditions, noether_conditions, FinderConfig,
    Hamiltonian, NoetherCase, NoetherIntegral, NoetherSymmetry,
};
use geonoether::{Metric, SampleBox, SymmetryVector};

use crate::args::{
    CatalogArgs, CheckArgs, Cli, Command, ConserveArgs, FindArgs, Format, RunArgs, Sampling, SimulateArgs, SolveArgs,
    Source, VectorArgs, VerifyArgs,
};
use crate::output::{number, residual, verdict, Document, Table};
use crate::scenario_file::{self, CheckSection, SimulateSection};
use crate::{report, InputError, SEED_VARIABLE};

const COLLINEATION_TOLERANCE: f64 = 1e-10;
const DRIFT_TOLERANCE_DEFAULT_T_END: f64 = 10.0;
const DEFAULT_STEP: f64 = 1e-3;
const DEFAULT_RK45_TOLERANCE: f64 = 1e-10;

/// Runs the parsed command; `Ok(false)` means a check failed.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool, InputError> {
    let seed = Seed::resolve(cli.seed)?;
    match &cli.command {
        Command::Catalog(a) => catalog(a, out),
        Command::SolveKilling(a) => solve(a, out),
        Command::VerifyCollineation(a) => verify(a, seed, out),
        Command::LieCheck(a) => check(a, Checker::Lie, seed, out),
        Command::NoetherCheck(a) => check(a, Checker::Noether, seed, out),
        Command::NoetherFind(a) => find(a, seed, out),
        Command::Simulate(a) => simulate(a, seed, out, err),
        Command::ConserveCheck(a) => conserve(a, seed, out),
        Command::Report(a) => report::report(a, seed.value(None), out),
    }
}

/// `--seed`, then the environment, then a scenario file, then 0.
#[derive(Clone, Copy, Debug)]
pub struct Seed {
    explicit: Option<u64>,
}

impl Seed {
    fn resolve(flag: Option<u64>) -> Result<Self, InputError> {
        if flag.is_some() {
            return Ok(Seed { explicit: flag });
        }
        match std::env::var(SEED_VARIABLE) {
            Ok(text) => text
                .trim()
                .parse()
                .map(|s| Seed { explicit: Some(s) })
                .map_err(|_| InputError(format!("{SEED_VARIABLE}={text} is not an unsigned integer"))),
            Err(_) => Ok(Seed { explicit: None }),
        }
    }

    pub fn value(self, file: Option<u64>) -> u64 {
        self.explicit.or(file).unwrap_or(0)
    }
}

/// A scenario with the settings its source supplies.
struct Loaded {
    scenario: Scenario,
    simulate: SimulateSection,
    check: CheckSection,
}

fn input<E: std::fmt::Display>(context: &str) -> impl Fn(E) -> InputError + '_ {
    move |e| InputError(format!("{context}: {e}"))
}

fn load(source: &Source) -> Result<Loaded, InputError> {
    let mut loaded = match (&source.scenario, &source.file) {
        (Some(name), None) => {
            let scenario = match &source.potential {
                Some(v) => scenario_with_potential(name, v),
                None => scenario_by_name(name),
            }
            .map_err(input("--scenario"))?;
            return Ok(Loaded { scenario, simulate: SimulateSection::default(), check: CheckSection::default() });
        }
        (None, Some(path)) => {
            let f = scenario_file::load(path)?;
            Loaded { scenario: f.scenario, simulate: f.simulate, check: f.check }
        }
        _ => return Err(InputError("give --scenario NAME or --file PATH".into())),
    };
    if let Some(text) = &source.potential {
        let v = parse(text, loaded.scenario.metric.chart()).map_err(input("--potential"))?;
        loaded.scenario = loaded.scenario.with_potential(v).map_err(input("--potential"))?;
    }
    Ok(loaded)
}

fn settings(sampling: &Sampling, check: &CheckSection, default_tolerance: f64) -> (usize, f64) {
    let samples = sampling.samples.or(check.samples).unwrap_or(CHECK_SAMPLES);
    let tolerance = sampling.tolerance.or(check.tolerance).unwrap_or(default_tolerance);
    (samples, tolerance)
}

fn emit(doc: &Document, format: Format, out: &mut dyn Write) -> Result<bool, InputError> {
    doc.write(format, out)?;
    Ok(doc.passed)
}

fn parse_signature(text: &str) -> Result<Vec<i8>, InputError> {
    let bad = || InputError(format!("--signature `{text}`: use signs like `+++` or `+,-`"));
    let t = text.trim();
    if t.contains(',') {
        return t
            .split(',')
            .map(|s| match s.trim() {
                "+" | "1" | "+1" => Ok(1),
                "-" | "-1" => Ok(-1),
                _ => Err(bad()),
            })
            .collect();
    }
    let signs: Result<Vec<i8>, _> = t
        .chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            _ => Err(bad()),
        })
        .collect();
    match signs {
        Ok(s) if !s.is_empty() => Ok(s),
        _ => Err(bad()),
    }
}

fn signature_text(sig: &[i8]) -> String {
    sig.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

/// A metric, its catalog and where to sample it.
struct Space {
    label: String,
    metric: Metric,
    catalog: CollineationBasis,
    sample_box: SampleBox,
    margin: f64,
}

fn space(name: &str) -> Result<Space, InputError> {
    let simple = |label: String, metric: Metric, catalog: CollineationBasis, sample_box: SampleBox| Space {
        label,
        metric,
        catalog,
        sample_box,
        margin: geonoether::geometry::DEFAULT_MARGIN,
    };
    if let Some(sig) = name.strip_prefix("flat:") {
        let sig = parse_signature(sig)?;
        let n = sig.len();
        return Ok(simple(
            format!("flat {}", signature_text(&sig)),
            Metric::flat(&sig),
            flat_projective_catalog(&sig),
            SampleBox::cube(n, -2.0, 2.0),
        ));
    }
    if let Some(n) = name.strip_prefix("euclidean:") {
        let n: usize =
            n.parse().ok().filter(|&n| n > 0).ok_or_else(|| InputError(format!("--space {name}: bad dimension")))?;
        let sig = vec![1; n];
        return Ok(simple(
            format!("Euclidean {n}"),
            Metric::flat(&sig),
            flat_projective_catalog(&sig),
            SampleBox::cube(n, -2.0, 2.0),
        ));
    }
    match name {
        "bianchi" => Ok(simple(
            "Bianchi mini-superspace".into(),
            bianchi_metric(),
            bianchi_symmetry_catalog(),
            SampleBox::cube(4, -1.0, 1.0),
        )),
        "bianchi-vacuum" => Ok(simple(
            "Bianchi mini-superspace without scalar".into(),
            bianchi_vacuum_metric(),
            bianchi_vacuum_symmetry_catalog(),
            SampleBox::cube(3, -1.0, 1.0),
        )),
        "sphere:K=1" | "sphere:K=-1" => {
            let k: i8 = if name.ends_with("-1") { -1 } else { 1 };
            let sc = scenario_by_name(name).map_err(input("--space"))?;
            Ok(Space {
                label: format!("K={k} space of constant curvature"),
                metric: sphere_metric(k),
                catalog: sphere_killing_catalog(k),
                sample_box: sc.sample_box,
                margin: sc.margin,
            })
        }
        _ => {
            let sc = scenario_by_name(name).map_err(input("--space"))?;
            Ok(Space {
                label: sc.name,
                metric: sc.metric,
                catalog: sc.catalog,
                sample_box: sc.sample_box,
                margin: sc.margin,
            })
        }
    }
}

fn space_of_scenario(sc: Scenario) -> Space {
    Space { label: sc.name, metric: sc.metric, catalog: sc.catalog, sample_box: sc.sample_box, margin: sc.margin }
}

fn gradient_text(claim: &CollineationClaim, metric: &Metric) -> String {
    claim.gradient.as_ref().map(|g| g.to_text(metric.chart())).unwrap_or_else(|| "-".into())
}

fn catalog(a: &CatalogArgs, out: &mut dyn Write) -> Result<bool, InputError> {
    let sp = match (&a.space, &a.file) {
        (Some(name), _) => space(name)?,
        (None, Some(path)) => space_of_scenario(scenario_file::load(path)?.scenario),
        (None, None) => return Err(InputError("give --space or --file".into())),
    };
    let mut doc = Document::new(format!("Collineations of {}", sp.label));
    doc.meta("coordinates", sp.metric.chart().names().join(", "));
    doc.meta("vectors", sp.catalog.len());
    let mut t = Table::new("Catalog", &["name", "kind", "vector", "gradient of"]);
    for c in &sp.catalog.claims {
        t.row(vec![c.name.clone(), kind_text(&c.kind), c.vector.display().to_string(), gradient_text(c, &sp.metric)]);
    }
    doc.push(t);
    emit(&doc, a.format, out)
}

fn kind_text(kind: &CollineationKind) -> String {
    match kind {
        CollineationKind::Homothetic { psi } => format!("HV (psi = {})", number(*psi)),
        k => k.label().to_string(),
    }
}

fn solve(a: &SolveArgs, out: &mut dyn Write) -> Result<bool, InputError> {
    let kind: SolverKind = a.kind.parse().map_err(input("--kind"))?;
    let (label, metric) = match (&a.metric, a.dim, &a.signature) {
        (Some(path), _, _) => {
            let f = scenario_file::load(path)?;
            (f.scenario.name.clone(), f.scenario.metric)
        }
        (None, dim, sig) => {
            let sig = match (dim, sig) {
                (Some(n), Some(s)) => {
                    let s = parse_signature(s)?;
                    if s.len() != n {
                        return Err(InputError(format!("--signature has {} signs but --dim is {n}", s.len())));
                    }
                    s
                }
                (Some(0), None) => return Err(InputError("--dim must be positive".into())),
                (Some(n), None) => vec![1; n],
                (None, Some(s)) => parse_signature(s)?,
                (None, None) => return Err(InputError("give --dim and/or --signature, or --metric FILE".into())),
            };
            (format!("flat {}", signature_text(&sig)), Metric::flat(&sig))
        }
    };
    let basis = solve_determining_equations(&metric, kind, a.degree).map_err(input("metric"))?;
    let mut doc = Document::new(format!("{kind} basis of {label}"));
    doc.meta("coordinates", metric.chart().names().join(", "));
    doc.meta("degree", a.degree);
    doc.meta("dimension", basis.len());
    let mut t = Table::new("Basis", &["name", "kind", "vector"]);
    for c in &basis.claims {
        t.row(vec![c.name.clone(), kind_text(&c.kind), c.vector.display().to_string()]);
    }
    doc.push(t);
    emit(&doc, a.format, out)
}

fn custom_vector(v: &VectorArgs, metric: &Metric) -> Result<Option<SymmetryVector>, InputError> {
    if v.eta.is_empty() && v.xi.is_none() {
        return Ok(None);
    }
    let n = metric.dim();
    if v.eta.len() != n {
        return Err(InputError(format!(
            "--eta: expected {n} components ({}), found {}",
            metric.chart().names().join(", "),
            v.eta.len()
        )));
    }
    let chart = metric.chart();
    let xi = parse(v.xi.as_deref().unwrap_or("0"), chart).map_err(input("--xi"))?;
    let eta = v
        .eta
        .iter()
        .enumerate()
        .map(|(i, e)| parse(e, chart).map_err(|err| InputError(format!("--eta #{}: {err}", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    SymmetryVector::new(chart.clone(), xi, eta).map(Some).map_err(input("vector"))
}

fn verify(a: &VerifyArgs, seed: Seed, out: &mut dyn Write) -> Result<bool, InputError> {
    let (sp, check) = match &a.space {
        Some(name) => (space(name)?, CheckSection::default()),
        None => {
            let l = load(&a.source)?;
            (space_of_scenario(l.scenario), l.check)
        }
    };
    let (samples, tol) = settings(&a.sampling, &check, COLLINEATION_TOLERANCE);
    let seed = seed.value(check.seed);
    let claims: Vec<CollineationClaim> = match (custom_vector(&a.vector, &sp.metric)?, &a.vector.vector) {
        (Some(v), _) => {
            let kind = match a.kind.to_ascii_uppercase().as_str() {
                "KV" => CollineationKind::Killing,
                "HV" => CollineationKind::Homothetic {
                    psi: a.psi.ok_or_else(|| InputError("--kind HV needs --psi".into()))?,
                },
                "AC" => CollineationKind::Affine,
                "SPC" => {
                    let text = a.phi.as_deref().ok_or_else(|| InputError("--kind SPC needs --phi".into()))?;
                    CollineationKind::SpecialProjective { phi: parse(text, sp.metric.chart()).map_err(input("--phi"))? }
                }
                other => return Err(InputError(format!("--kind `{other}`: expected KV, HV, AC or SPC"))),
            };
            vec![CollineationClaim::new("custom", v, kind)]
        }
        (None, Some(name)) => {
            vec![sp
                .catalog
                .get(name)
                .cloned()
                .ok_or_else(|| InputError(format!("--vector `{name}` is not in the catalog of {}", sp.label)))?]
        }
        (None, None) => sp.catalog.claims.clone(),
    };
    if claims.is_empty() {
        return Err(InputError(format!("{} has no cataloged collineations", sp.label)));
    }
    let points = geonoether::HaltonSampler::new(sp.sample_box.clone(), seed)
        .with_margin(sp.margin)
        .points(sp.metric.chart(), samples);
    let mut doc = Document::new(format!("Collineation check on {}", sp.label));
    doc.meta("seed", seed);
    doc.meta("samples", samples);
    doc.meta("tolerance", format!("{tol:e}"));
    let mut t = Table::new("Residuals", &["name", "kind", "vector", "residual", "points", "result"]);
    for c in &claims {
        let r = verify_collineation(c, &sp.metric, &points, tol).map_err(input(&c.name))?;
        doc.passed &= r.passed;
        t.row(vec![
            c.name.clone(),
            kind_text(&c.kind),
            c.vector.display().to_string(),
            residual(r.max_residual()),
            r.points_used.to_string(),
            verdict(r.passed),
        ]);
    }
    doc.push(t);
    emit(&doc, a.format, out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Checker {
    Lie,
    Noether,
}

/// One vector to check, with whether it is meant to fail.
struct Target {
    label: String,
    vector: SymmetryVector,
    gauge: Expression,
    status: String,
    provenance: String,
    control: bool,
}

fn target(e: &ExpectedSymmetry, control: bool) -> Target {
    Target {
        label: e.label.clone(),
        vector: e.vector.clone(),
        gauge: e.gauge().cloned().unwrap_or_else(Expression::zero),
        status: if control { "control".into() } else { e.status.label().into() },
        provenance: e.provenance.clone(),
        control,
    }
}

fn targets(a: &CheckArgs, which: Checker, sc: &Scenario) -> Result<Vec<Target>, InputError> {
    let chart = sc.metric.chart();
    if let Some(v) = custom_vector(&a.vector, &sc.metric)? {
        let gauge = match &a.gauge {
            Some(g) => parse(g, chart).map_err(input("--gauge"))?,
            None => Expression::zero(),
        };
        let label = v.display().to_string();
        return Ok(vec![Target {
            label,
            vector: v,
            gauge,
            status: "custom".into(),
            provenance: "command line".into(),
            control: false,
        }]);
    }
    if let Some(name) = &a.vector.vector {
        if let Some(e) = sc.expected.iter().find(|e| &e.label == name) {
            return Ok(vec![target(e, false)]);
        }
        if let Some(e) = sc.negative_controls.iter().find(|e| &e.label == name) {
            return Ok(vec![target(e, true)]);
        }
        if let Some(c) = sc.catalog.get(name) {
            let gauge = match &a.gauge {
                Some(g) => parse(g, chart).map_err(input("--gauge"))?,
                None => Expression::zero(),
            };
            return Ok(vec![Target {
                label: c.name.clone(),
                vector: c.vector.clone(),
                gauge,
                status: "catalog".into(),
                provenance: format!("{} catalog", sc.name),
                control: false,
            }]);
        }
        return Err(InputError(format!(
            "--vector `{name}` is neither an expected entry nor a cataloged vector of {}",
            sc.name
        )));
    }
    let keep = |e: &&ExpectedSymmetry| which == Checker::Lie || e.is_noether();
    let mut out: Vec<Target> = sc.expected.iter().filter(keep).map(|e| target(e, false)).collect();
    if a.controls {
        out.extend(sc.negative_controls.iter().filter(keep).map(|e| target(e, true)));
    }
    if out.is_empty() {
        return Err(InputError(format!("{} lists no vectors to check; pass --vector or --eta", sc.name)));
    }
    Ok(out)
}

fn check(a: &CheckArgs, which: Checker, seed: Seed, out: &mut dyn Write) -> Result<bool, InputError> {
    let l = load(&a.source)?;
    let sc = &l.scenario;
    let (samples, tol) = settings(&a.sampling, &l.check, CHECK_TOLERANCE);
    let seed = seed.value(l.check.seed);
    let potential = match which {
        Checker::Noether => Some(
            sc.potential
                .clone()
                .ok_or_else(|| InputError(format!("{} has no potential; Noether checks need one", sc.name)))?,
        ),
        Checker::Lie => None,
    };
    let points = sc.samples(samples, seed);
    let title = match which {
        Checker::Lie => "Lie symmetry conditions",
        Checker::Noether => "Noether symmetry conditions",
    };
    let mut doc = Document::new(format!("{title} for {}", sc.name));
    doc.meta("seed", seed);
    doc.meta("samples", samples);
    doc.meta("tolerance", format!("{tol:e}"));
    let blocks: &[&str] = match which {
        Checker::Lie => &["force", "velocity", "connection", "xi-hessian"],
        Checker::Noether => &["metric", "potential", "gauge", "xi-gradient"],
    };
    let mut columns = vec!["vector", "status"];
    columns.extend_from_slice(blocks);
    columns.extend_from_slice(&["max", "result", "source"]);
    let mut t = Table::new("Residuals", &columns);
    for tg in targets(a, which, sc)? {
        let (maxes, worst, skipped, passed) = match &potential {
            None => {
                let r = lie_conditions(&tg.vector, &sc.metric, &sc.force, &points, tol).map_err(input(&tg.label))?;
                (r.blocks().map(|b| b.max).to_vec(), r.max_residual(), r.points_skipped, r.passed)
            }
            Some(v) => {
                let r =
                    noether_conditions(&tg.vector, &sc.metric, v, &tg.gauge, &points, tol).map_err(input(&tg.label))?;
                (r.blocks().map(|b| b.max).to_vec(), r.max_residual(), r.points_skipped, r.passed)
            }
        };
        let ok = if tg.control { !passed } else { passed };
        doc.passed &= ok;
        let mut row = vec![tg.label.clone(), tg.status.clone()];
        row.extend(maxes.iter().map(|m| residual(*m)));
        row.push(residual(worst));
        row.push(if tg.control {
            if ok {
                "fails as expected".into()
            } else {
                "FAIL (control passed)".into()
            }
        } else {
            verdict(ok)
        });
        row.push(tg.provenance.clone());
        t.row(row);
        if skipped > 0 {
            t.note(format!("{}: {skipped} sample points skipped at singular loci", tg.label));
        }
    }
    t.notes.extend(sc.notes.iter().cloned());
    doc.push(t);
    emit(&doc, a.format, out)
}

/// Integral label for a symmetry: the scenario's name for a single catalog
/// element, otherwise `I[<name>]`.
fn integral_label(s: &NoetherSymmetry, sc: &Scenario) -> String {
    if let [(name, c)] = s.coefficients.as_slice() {
        if *c == 1.0 && s.case == NoetherCase::I {
            if let Some((_, i)) = sc.integral_names.iter().find(|(g, _)| g == name) {
                return i.clone();
            }
        }
    }
    format!("I[{}]", s.name)
}

fn found_symmetries(
    sc: &Scenario,
    potential: &Expression,
    seed: u64,
    samples: Option<usize>,
) -> Result<(Vec<NoetherSymmetry>, Vec<String>), InputError> {
    let mut cfg = FinderConfig::new(sc.sampler(seed));
    if let Some(n) = samples {
        cfg = cfg.with_samples(n);
    }
    let first = find_noether_case1(&sc.catalog, &sc.metric, potential, &cfg).map_err(input("noether-find"))?;
    let mut all = first.symmetries;
    let mut warnings = first.warnings;
    for claim in sc.catalog.homothetic_algebra().iter().filter(|c| c.is_gradient()) {
        let second = find_noether_case2(claim, &sc.metric, potential, &cfg).map_err(input("noether-find"))?;
        all.extend(second.symmetries);
        warnings.extend(second.warnings);
    }
    Ok((all, warnings))
}

fn find(a: &FindArgs, seed: Seed, out: &mut dyn Write) -> Result<bool, InputError> {
    let l = load(&a.source)?;
    let sc = &l.scenario;
    let seed = seed.value(l.check.seed);
    let v = sc
        .potential
        .clone()
        .ok_or_else(|| InputError(format!("{} has no potential; Noether symmetries need one", sc.name)))?;
    let (found, warnings) = found_symmetries(sc, &v, seed, a.sampling.samples)?;
    let chart = sc.metric.chart();
    let mut doc = Document::new(format!("Noether symmetries of {}", sc.name));
    doc.meta("potential", v.to_text(chart));
    doc.meta("seed", seed);
    doc.meta(
        "searched",
        sc.catalog.homothetic_algebra().iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", "),
    );
    let mut t = Table::new("Symmetries", &["generator", "case", "psi", "p", "m", "vector", "gauge", "integral", "I"]);
    let energy = NoetherIntegral::energy(&sc.metric, &v);
    t.row(vec![
        "d_t".into(),
        "-".into(),
        "0".into(),
        "0".into(),
        "-".into(),
        "d_t".into(),
        "0".into(),
        "E".into(),
        energy.to_text(),
    ]);
    for s in &found {
        let integral = build_noether_integral(s, &sc.metric, &v);
        t.row(vec![
            s.name.clone(),
            format!("{:?}", s.case),
            number(s.psi),
            number(s.p),
            s.m.map(number).unwrap_or_else(|| "-".into()),
            s.vector.display().to_string(),
            s.gauge.to_text(chart),
            integral_label(s, sc),
            integral.to_text(),
        ]);
    }
    t.notes.extend(warnings);
    doc.summary.push(format!("{} Noether symmetries including d_t", found.len() + 1));
    doc.push(t);
    emit(&doc, a.format, out)
}

/// Integration settings merged from flags and the file's `[simulate]` section.
struct RunPlan {
    x0: Vec<f64>,
    v0: Vec<f64>,
    span: (f64, f64),
    method: Method,
}

fn plan(a: &RunArgs, sim: &SimulateSection, n: usize) -> Result<RunPlan, InputError> {
    let x0 =
        a.x0.clone()
            .or_else(|| sim.x0.clone())
            .ok_or_else(|| InputError("give --x0 (or simulate.x0 in the file)".into()))?;
    let v0 =
        a.v0.clone()
            .or_else(|| sim.v0.clone())
            .ok_or_else(|| InputError("give --v0 (or simulate.v0 in the file)".into()))?;
    for (name, v) in [("--x0", &x0), ("--v0", &v0)] {
        if v.len() != n {
            return Err(InputError(format!("{name}: expected {n} values, found {}", v.len())));
        }
    }
    let span = (
        a.t_start.or(sim.t_span.map(|s| s[0])).unwrap_or(0.0),
        a.t_end.or(sim.t_span.map(|s| s[1])).unwrap_or(DRIFT_TOLERANCE_DEFAULT_T_END),
    );
    let method = match a.method.as_deref().or(sim.method.as_deref()).unwrap_or("rk4") {
        "rk4" | "RK4" => Method::Rk4 { step: a.step.or(sim.step).unwrap_or(DEFAULT_STEP) },
        "rk45" | "RK45" => {
            let tol = a.rk_tolerance.or(sim.tolerance).unwrap_or(DEFAULT_RK45_TOLERANCE);
            Method::Rk45 { atol: tol, rtol: tol }
        }
        other => return Err(InputError(format!("--method `{other}`: expected rk4 or rk45"))),
    };
    Ok(RunPlan { x0, v0, span, method })
}

/// Integrals tracked along a run: `E`, the scenario's Noether entries and,
/// with `--find`, the finder's symmetries.
fn tracked(sc: &Scenario, find_more: bool, seed: u64) -> Result<Vec<(NoetherIntegral, String, String)>, InputError> {
    let Some(v) = &sc.potential else {
        return Ok(Vec::new());
    };
    let mut out = vec![(NoetherIntegral::energy(&sc.metric, v), "d_t".to_string(), "energy".to_string())];
    for e in sc.expected.iter().filter(|e| e.is_noether() && e.label != "d_t") {
        if let Some(i) = sc.integral(e) {
            out.push((i, e.label.clone(), e.status.label().to_string()));
        }
    }
    if find_more {
        for s in found_symmetries(sc, v, seed, None)?.0 {
            let mut i = build_noether_integral(&s, &sc.metric, v);
            i.name = integral_label(&s, sc);
            out.push((i, s.name.clone(), "found".into()));
        }
    }
    Ok(out)
}

fn trajectory(sc: &Scenario, p: &RunPlan) -> Result<Trajectory, InputError> {
    let e = sc.equations().map_err(input("equations of motion"))?;
    integrate_with_margin(&e, &p.x0, &p.v0, p.span, p.method, sc.margin).map_err(input("integration"))
}

fn simulate(a: &SimulateArgs, seed: Seed, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool, InputError> {
    let l = load(&a.run.source)?;
    let sc = &l.scenario;
    let p = plan(&a.run, &l.simulate, sc.metric.dim())?;
    let tr = trajectory(sc, &p)?;
    if let Some(h) = &tr.halt {
        writeln!(err, "warning: integration stopped at t = {}: {}", h.time, h.reason)?;
    }
    let integrals = tracked(sc, a.run.find, seed.value(l.check.seed))?;
    let (first, rest) = match integrals.split_first() {
        Some((e, rest)) => (Some(Hamiltonian::new(sc.metric.clone(), e.0.hamiltonian().potential().clone())), rest),
        None => (None, &[][..]),
    };
    let list: Vec<NoetherIntegral> = rest.iter().map(|(i, _, _)| i.clone()).collect();
    for (k, (i, generator, _)) in rest.iter().enumerate() {
        writeln!(err, "I_{} = {} ({generator})", k + 1, i.name)?;
    }
    match &a.output {
        Some(path) => write_file(path, |w| write_csv(&tr, first.as_ref(), &list, w))?,
        None => write_csv(&tr, first.as_ref(), &list, out)?,
    }
    Ok(true)
}

pub fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<(), InputError> {
    let file = std::fs::File::create(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(file);
    body(&mut w).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    w.flush().map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn conserve(a: &ConserveArgs, seed: Seed, out: &mut dyn Write) -> Result<bool, InputError> {
    let l = load(&a.run.source)?;
    let sc = &l.scenario;
    if sc.potential.is_none() {
        return Err(InputError(format!("{} has no potential and hence no Noether integrals", sc.name)));
    }
    let p = plan(&a.run, &l.simulate, sc.metric.dim())?;
    let tr = trajectory(sc, &p)?;
    let integrals = tracked(sc, a.run.find, seed.value(l.check.seed))?;
    let list: Vec<NoetherIntegral> = integrals.iter().map(|(i, _, _)| i.clone()).collect();
    let drift = conservation_drift(&tr, &list).map_err(input("drift"))?;
    let mut doc = Document::new(format!("Conservation along a trajectory of {}", sc.name));
    doc.meta("x0", fmt_list(&p.x0));
    doc.meta("v0", fmt_list(&p.v0));
    doc.meta("span", format!("[{}, {}]", number(p.span.0), number(tr.last().0)));
    doc.meta("method", p.method);
    doc.meta("steps", tr.len() - 1);
    doc.meta("tolerance", format!("{:e}", a.tolerance));
    if let Some(h) = &tr.halt {
        doc.passed = false;
        doc.summary.push(format!("integration stopped at t = {}: {}", h.time, h.reason));
    }
    let mut t = Table::new("Relative drift", &["integral", "generator", "status", "I(t0)", "relative drift", "result"]);
    for ((_, generator, status), series) in integrals.iter().zip(&drift.series) {
        let ok = series.relative_drift <= a.tolerance;
        doc.passed &= ok;
        t.row(vec![
            series.name.clone(),
            generator.clone(),
            status.clone(),
            format!("{:.10e}", series.values.first().copied().unwrap_or(f64::NAN)),
            residual(series.relative_drift),
            verdict(ok),
        ]);
    }
    doc.push(t);
    emit(&doc, a.format, out)
}

fn fmt_list(v: &[f64]) -> String {
    format!("[{}]", v.iter().map(|x| number(*x)).collect::<Vec<_>>().join(", "))
}
