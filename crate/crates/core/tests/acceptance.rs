//! One pass/fail line per acceptance criterion. Runs as a plain binary so the
//! lines are always printed. With `GEONOETHER_ACCEPTANCE_STRICT` set, the
//! process exits nonzero when any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use geonoether::collineation::{
    solve_determining_equations, verify_collineation, CollineationBasis, CollineationClaim, CollineationKind,
    SolverKind, DEFAULT_MAX_DEGREE,
};
use geonoether::dynamics::{conservation_drift, eom_rhs, integrate, DynamicsError, Method};
use geonoether::expr::{cosn, parse, sinn, Expression};
use geonoether::geometry::{HaltonSampler, Metric, SampleBox};
use geonoether::scenarios::{
    bianchi_scenario, ermakov_scenario, newtonian_scenario, sphere_scenario, table7_potential, table7_scenario,
    BianchiModel, BianchiType, EntryStatus, NewtonianParams, NewtonianRow, PotentialFamily, Scenario, CHECK_SAMPLES,
    TABLE7_ROWS,
};
use geonoether::symmetry::{find_noether_case1, lie_conditions, lie_conditions_solved, FinderConfig};
use geonoether::ForceField;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const SEED: u64 = 0;

const C1_TOLERANCE: f64 = 1e-12;
const C1_POINTS: usize = 100;
const C1_BUDGET_S: f64 = 5.0;

const C2_TOLERANCE: f64 = 1e-8;
const C2_BUDGET_S: f64 = 10.0;

const C3_STEP: f64 = 1e-3;
const C3_SPAN: (f64, f64) = (0.0, 20.0);
const C3_X0: [f64; 2] = [1.2, 0.5];
const C3_V0: [f64; 2] = [0.2, 1.8];
const C3_DRIFT: f64 = 1e-7;
const C3_RATIO: (f64, f64) = (8.0, 32.0);
const C3_CONTROL_DRIFT: f64 = 1e-3;
const C3_BUDGET_S: f64 = 10.0;

const C4_M: f64 = 4.0;
const C4_PERTURBED_M: f64 = 4.1;
const C4_PASS: f64 = 1e-9;
const C4_FAIL: f64 = 1e-2;

const C5_TOLERANCE: f64 = 1e-8;
const C5_CONTROL: f64 = 1e-2;
const C5_SPAN: (f64, f64) = (0.0, 5.0);
const C5_RK45_TOLERANCE: f64 = 1e-10;
const C5_DRIFT: f64 = 1e-7;
const C5_X0: [f64; 4] = [0.0, 0.1, -0.1, 0.2];
const C5_V0: [f64; 4] = [0.3, 0.2, -0.1, 0.1];
const C5_BUDGET_S: f64 = 60.0;

const C6_TOLERANCE: f64 = 1e-10;
const C6_STATES: usize = 100;

const C7_CASES: u32 = 1000;
const C7_FD_STEP: f64 = 1e-5;
const C7_FD_TOLERANCE: f64 = 1e-6;
const C7_ROUND_TRIP_POINTS: usize = 100;
const C7_ROUND_TRIP_TOLERANCE: f64 = 1e-12;

const C8_TRIPLES: usize = 50;
const C8_TOLERANCE: f64 = 1e-10;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn timed(budget: f64, start: Instant, mut o: Outcome) -> Outcome {
    let secs = start.elapsed().as_secs_f64();
    if secs > budget {
        o.passed = false;
    }
    o.detail = format!("{}; {secs:.2}s of {budget}s", o.detail);
    o
}

fn flat_algebra() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut problems = Vec::new();
    let mut dims = Vec::new();
    for sig in [vec![1i8, 1], vec![1, 1, 1], vec![1, -1]] {
        let n = sig.len();
        let m = Metric::flat(&sig);
        let pts = HaltonSampler::new(SampleBox::cube(n, -2.0, 2.0), SEED).points(m.chart(), C1_POINTS);
        let want = [n * (n + 1) / 2, 1, n * n, n];
        let mut got = Vec::new();
        for (kind, want) in SolverKind::ALL.into_iter().zip(want) {
            let basis = solve_determining_equations(&m, kind, DEFAULT_MAX_DEGREE).expect("constant metric");
            got.push(basis.len());
            if basis.len() != want {
                problems.push(format!("{sig:?} {kind}: {} != {want}", basis.len()));
            }
            for c in &basis.claims {
                let r = verify_collineation(c, &m, &pts, C1_TOLERANCE).expect("verifiable");
                worst = worst.max(r.max_residual());
                if !r.passed {
                    problems.push(format!("{sig:?} {}: residual {:.2e}", c.name, r.max_residual()));
                }
            }
        }
        dims.push(format!("{sig:?} KV/HV/AC/SPC = {got:?}"));
    }
    let detail =
        format!("{}; max residual {worst:.1e} (tol {C1_TOLERANCE:e}) {}", dims.join(", "), problems.join("; "));
    timed(C1_BUDGET_S, start, outcome(problems.is_empty(), detail))
}

fn proportional(found: &[CollineationClaim], listed: &CollineationClaim, sc: &Scenario) -> bool {
    let pts = sc.samples(30, SEED + 3);
    let base = CollineationBasis::catalog("found", found.to_vec());
    let mut with = found.to_vec();
    with.push(listed.clone());
    let extended = CollineationBasis::catalog("found+listed", with);
    base.sampled_rank(&pts) == extended.sampled_rank(&pts)
}

fn sphere_catalog() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut checked = 0;
    let mut worst = 0.0f64;
    for k in [1i8, -1] {
        for row in 1..=TABLE7_ROWS {
            for (a, b, c) in [(1, 2, 1), (2, 1, 2)] {
                let sc = table7_scenario(row, k, a, b, c).expect("Table 7 row");
                let v = sc.potential.clone().expect("conservative");
                let cfg = FinderConfig::new(sc.sampler(SEED));
                let found = find_noether_case1(&sc.catalog, &sc.metric, &v, &cfg).expect("finder runs");
                let claims: Vec<CollineationClaim> = found
                    .symmetries
                    .iter()
                    .map(|s| CollineationClaim::new(s.name.clone(), s.generator.clone(), CollineationKind::Killing))
                    .collect();
                let samples = sc.samples(CHECK_SAMPLES, SEED);
                for e in sc.expected.iter().filter(|e| e.label != "d_t" && e.status == EntryStatus::Quoted) {
                    checked += 1;
                    let r = sc.check(e, &samples, C2_TOLERANCE).expect("checkable");
                    worst = worst.max(r.residual);
                    let listed = CollineationClaim::new(e.label.clone(), e.vector.clone(), CollineationKind::Killing);
                    let recovered = proportional(&claims, &listed, &sc);
                    if !r.passed || !recovered {
                        problems.push(format!(
                            "K={k} row {row} (a,b,c)=({a},{b},{c}) {}: residual {:.1e}, recovered {recovered}, found [{}]",
                            e.label,
                            r.residual,
                            claims.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", ")
                        ));
                    }
                }
            }
        }
    }
    let mut counts = Vec::new();
    for k in [1i8, -1] {
        let chart = geonoether::collineation::sphere_chart(k);
        let (ph, th) = (Expression::coord(0), Expression::coord(1));
        let generic = th.cos().mul(&sinn(k, &ph)).add(&th.sin().mul(&th.cos()).mul(&cosn(k, &ph)).scale(0.5));
        for (what, v, want) in [
            ("generic", generic, 1),
            ("F(phi)", parse("cos(phi)^2 + phi", &chart).expect("parses"), 2),
            ("const", Expression::int(3), 4),
        ] {
            let sc = sphere_scenario(k, v.clone()).expect("sphere");
            let cfg = FinderConfig::new(sc.sampler(SEED));
            let total = 1 + find_noether_case1(&sc.catalog, &sc.metric, &v, &cfg).expect("finder runs").len();
            counts.push(format!("K={k} {what}: {total}"));
            if total != want {
                problems.push(format!("K={k} {what}: {total} Noether symmetries, expected {want}"));
            }
        }
    }
    let detail = format!(
        "{checked} listed generators, max residual {worst:.1e}; counts {}{}{}",
        counts.join(", "),
        if problems.is_empty() { "" } else { "; " },
        problems.join("; ")
    );
    timed(C2_BUDGET_S, start, outcome(problems.is_empty(), detail))
}

fn drift_run(sc: &Scenario, step: f64) -> Result<(f64, f64, f64), DynamicsError> {
    let e = sc.equations()?;
    let tr = integrate(&e, &C3_X0, &C3_V0, C3_SPAN, Method::Rk4 { step })?;
    assert!(tr.is_complete(), "trajectory halted: {:?}", tr.halt);
    let v = sc.potential.as_ref().expect("conservative");
    let energy = geonoether::symmetry::NoetherIntegral::energy(&sc.metric, v);
    let y1 = sc.integral(sc.expected_named("Y1").expect("row 1 lists Y1")).expect("Noether entry");
    let y3 = sc.with_potential(v.clone()).ok().and_then(|_| {
        let spec = sc.catalog.get("Y3")?;
        Some(geonoether::symmetry::NoetherIntegral::new(
            "I_CK3",
            geonoether::symmetry::NoetherCase::I,
            &spec.vector,
            Expression::zero(),
            &sc.metric,
            v,
        ))
    });
    let integrals = vec![energy, y1, y3.expect("Y3 in catalog")];
    let r = conservation_drift(&tr, &integrals)?;
    Ok((r.series[0].relative_drift, r.series[1].relative_drift, r.series[2].relative_drift))
}

fn conservation() -> Outcome {
    let start = Instant::now();
    let sc = table7_scenario(1, 1, 1, 1, 1).expect("row 1");
    let (e1, i1, control) = drift_run(&sc, C3_STEP).expect("integrates");
    let (e2, i2, _) = drift_run(&sc, C3_STEP / 2.0).expect("integrates");
    let (re, ri) = (e1 / e2, i1 / i2);
    let in_ratio = |r: f64| (C3_RATIO.0..=C3_RATIO.1).contains(&r);
    let passed = e1 <= C3_DRIFT && i1 <= C3_DRIFT && in_ratio(re) && in_ratio(ri) && control >= C3_CONTROL_DRIFT;
    let detail = format!(
        "drift E {e1:.2e}, I_CK1 {i1:.2e} (tol {C3_DRIFT:e}); halving h: E x{re:.1}, I_CK1 x{ri:.1}; I_CK3 control {control:.2e}"
    );
    timed(C3_BUDGET_S, start, outcome(passed, detail))
}

fn ermakov() -> Outcome {
    let sc = ermakov_scenario(C4_M).expect("Ermakov");
    let samples = sc.samples(CHECK_SAMPLES, SEED);
    let printed = sc
        .expected
        .iter()
        .find(|e| e.status == EntryStatus::Quoted && e.label.starts_with("(1/sqrt(m)) e^(+"))
        .expect("printed generator");
    let corrected = sc
        .expected
        .iter()
        .find(|e| matches!(e.status, EntryStatus::Corrected(_)) && e.label.starts_with("(2/sqrt(m)) e^(+"))
        .expect("corrected generator");
    let perturbed = ermakov_scenario(C4_PERTURBED_M).expect("Ermakov");
    let lie = |sc: &Scenario, v| lie_conditions(v, &sc.metric, &sc.force, &samples, C4_PASS).expect("checkable");
    let p = lie(&sc, &printed.vector).max_residual();
    let pp = lie(&perturbed, &printed.vector).max_residual();
    let c = lie(&sc, &corrected.vector).max_residual();
    let cp = lie(&perturbed, &corrected.vector).max_residual();
    let passed = p <= C4_PASS && pp >= C4_FAIL;
    outcome(
        passed,
        format!(
            "printed {}: residual {p:.2e} at m={C4_M}, {pp:.2e} at m={C4_PERTURBED_M}; corrected {}: {c:.2e} at m={C4_M}, {cp:.2e} at m={C4_PERTURBED_M}",
            printed.label, corrected.label
        ),
    )
}

fn bianchi_tables() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut corrected_failures = Vec::new();
    let (mut listed, mut corrected) = (0, 0);
    let mut weak_controls = Vec::new();
    for kind in BianchiType::ALL {
        let mut strongest = 0.0f64;
        for family in PotentialFamily::ALL {
            let sc = bianchi_scenario(BianchiModel::new(kind, family)).expect("Bianchi cell");
            let samples = sc.samples(CHECK_SAMPLES, SEED);
            for e in &sc.expected {
                let r = sc.check(e, &samples, C5_TOLERANCE).expect("checkable");
                match e.status {
                    EntryStatus::Quoted => {
                        listed += 1;
                        if !r.passed {
                            failures.push(format!("{} {} {}", sc.name, e.kind.label(), e.label));
                        }
                    }
                    _ => {
                        corrected += 1;
                        if !r.passed {
                            corrected_failures.push(format!("{} {}", sc.name, e.label));
                        }
                    }
                }
            }
            for e in &sc.negative_controls {
                strongest = strongest.max(sc.check(e, &samples, C5_TOLERANCE).expect("checkable").residual);
            }
        }
        if strongest < C5_CONTROL {
            weak_controls.push(kind.label());
        }
    }
    let drift = case2_drift();
    let drift_ok = drift.as_ref().is_ok_and(|d| *d <= C5_DRIFT);
    let passed = failures.is_empty() && corrected_failures.is_empty() && weak_controls.is_empty() && drift_ok;
    let detail = format!(
        "{}/{listed} printed entries pass; {corrected} replacement entries, {} fail; controls fail for every type: {}; \
         Case II C^2 = (3/2)V0 integral drift {} (tol {C5_DRIFT:e}); printed failures: [{}]",
        listed - failures.len(),
        corrected_failures.len(),
        weak_controls.is_empty(),
        match &drift {
            Ok(d) => format!("{d:.2e}"),
            Err(e) => e.clone(),
        },
        failures.join("; ")
    );
    timed(C5_BUDGET_S, start, outcome(passed, detail))
}

/// Largest relative drift of the Case II integrals of Bianchi I with constant potential.
fn case2_drift() -> Result<f64, String> {
    let model = BianchiModel::new(BianchiType::I, PotentialFamily::Constant);
    let c = model.case2_constant();
    if (c * c - 1.5 * model.v0).abs() > 1e-15 {
        return Err(format!("C^2 = {} but (3/2)V0 = {}", c * c, 1.5 * model.v0));
    }
    let sc = bianchi_scenario(model).map_err(|e| e.to_string())?;
    let e = sc.equations().map_err(|e| e.to_string())?;
    let method = Method::Rk45 { atol: C5_RK45_TOLERANCE, rtol: C5_RK45_TOLERANCE };
    let tr = integrate(&e, &C5_X0, &C5_V0, C5_SPAN, method).map_err(|e| e.to_string())?;
    if !tr.is_complete() {
        return Err(format!("trajectory halted: {:?}", tr.halt));
    }
    let integrals: Vec<_> = sc
        .expected
        .iter()
        .filter(|e| e.is_noether() && matches!(e.status, EntryStatus::Corrected(_)))
        .filter_map(|e| sc.integral(e))
        .collect();
    if integrals.len() != 2 {
        return Err(format!("expected two Case II integrals, found {}", integrals.len()));
    }
    let r = conservation_drift(&tr, &integrals).map_err(|e| e.to_string())?;
    Ok(r.max_relative_drift())
}

/// `ẍ` of the sphere equations as printed.
fn sphere_oracle(k: i8, v: &Expression, x: &[f64], dx: &[f64]) -> Vec<f64> {
    let ph = x[0];
    let (s, c) = if k > 0 { (ph.sin(), ph.cos()) } else { (ph.sinh(), ph.cosh()) };
    let vp = v.diff_coord(0).eval(x, None).unwrap();
    let vt = v.diff_coord(1).eval(x, None).unwrap();
    vec![s * c * dx[1] * dx[1] - vp, -2.0 * c / s * dx[1] * dx[0] - vt / (s * s)]
}

/// `ẍ` of the mini-superspace Euler–Lagrange equations as printed.
fn bianchi_oracle(model: &BianchiModel, x: &[f64], dx: &[f64]) -> Vec<f64> {
    let r = model.ricci_scalar();
    let e3r = Expression::coord(0).scale(3.0).exp().mul(&r);
    let d_lambda = e3r.diff_coord(0).eval(x, None).unwrap() * (-3.0 * x[0]).exp();
    let d_b1 = r.diff_coord(1).eval(x, None).unwrap();
    let d_b2 = r.diff_coord(2).eval(x, None).unwrap();
    let (v, dv) = if x.len() == 4 {
        let v = model.scalar_potential().unwrap();
        (v.eval(x, None).unwrap(), v.diff_coord(3).eval(x, None).unwrap())
    } else {
        (0.0, 0.0)
    };
    let phidot = dx.get(3).copied().unwrap_or(0.0);
    let mut out = vec![
        -1.5 * dx[0] * dx[0] - 0.375 * (dx[1] * dx[1] + dx[2] * dx[2]) - 0.25 * phidot * phidot
            + d_lambda / 12.0
            + 0.5 * v,
        -3.0 * dx[0] * dx[1] - d_b1 / 3.0,
        -3.0 * dx[0] * dx[2] - d_b2 / 3.0,
    ];
    if x.len() == 4 {
        out.push(-3.0 * phidot * dx[0] - dv);
    }
    out
}

fn random_states(n: usize, lo: &[f64], hi: &[f64], speed: f64, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut bounds_lo = lo.to_vec();
    let mut bounds_hi = hi.to_vec();
    bounds_lo.extend(std::iter::repeat_n(-speed, n));
    bounds_hi.extend(std::iter::repeat_n(speed, n));
    let chart = geonoether::CoordinateChart::numbered(2 * n);
    HaltonSampler::new(SampleBox::new(bounds_lo, bounds_hi, (0.0, 1.0)), seed)
        .points(&chart, C6_STATES)
        .into_iter()
        .map(|s| (s.x[..n].to_vec(), s.x[n..].to_vec()))
        .collect()
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs() / (1.0 + q.abs())).fold(0.0, f64::max)
}

fn el_oracle() -> Outcome {
    let mut sphere_worst = 0.0f64;
    for k in [1i8, -1] {
        for row in [1, 5, 7] {
            let v = table7_potential(row, k, 1, 2, 1).expect("row");
            let sc = sphere_scenario(k, v.clone()).expect("sphere");
            let e = sc.equations().expect("eom");
            let hi = if k > 0 { 2.9 } else { 2.0 };
            for (x, dx) in random_states(2, &[0.2, -3.0], &[hi, 3.0], 2.0, SEED) {
                let state: Vec<f64> = x.iter().chain(&dx).copied().collect();
                let rhs = eom_rhs(&e, &state).expect("regular state");
                sphere_worst = sphere_worst.max(max_gap(&rhs[2..], &sphere_oracle(k, &v, &x, &dx)));
            }
        }
    }
    let mut cells = Vec::new();
    let mut bianchi_worst = 0.0f64;
    for kind in BianchiType::ALL {
        for family in PotentialFamily::ALL {
            let model = BianchiModel::new(kind, family);
            let sc = bianchi_scenario(model).expect("Bianchi");
            let e = sc.equations().expect("eom");
            let n = model.dim();
            let mut worst = 0.0f64;
            for (x, dx) in random_states(n, &vec![-1.0; n], &vec![1.0; n], 1.0, SEED) {
                let state: Vec<f64> = x.iter().chain(&dx).copied().collect();
                let rhs = eom_rhs(&e, &state).expect("regular state");
                worst = worst.max(max_gap(&rhs[n..], &bianchi_oracle(&model, &x, &dx)));
            }
            bianchi_worst = bianchi_worst.max(worst);
            if worst > C6_TOLERANCE {
                cells.push(format!("{}:{} {worst:.1e}", kind, family));
            }
        }
    }
    let passed = sphere_worst <= C6_TOLERANCE && cells.is_empty();
    outcome(
        passed,
        format!(
            "sphere max deviation {sphere_worst:.1e}; Bianchi max deviation {bianchi_worst:.1e} (tol {C6_TOLERANCE:e}); \
             cells off the printed display: [{}]",
            cells.join(", ")
        ),
    )
}

fn expression_engine() -> Outcome {
    let config = Config { cases: C7_CASES, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strategy = (common::arb_expression(), common::arb_point(), 0..=common::DIM);
    let chart = common::chart();
    let points = HaltonSampler::new(SampleBox::cube(common::DIM, -1.0, 1.0), SEED).points(&chart, C7_ROUND_TRIP_POINTS);
    let (mut fd_fail, mut rt_fail, mut skipped) = (0, 0, 0);
    let mut worst = 0.0f64;
    for _ in 0..C7_CASES {
        let (e, (x, t), var) = strategy.new_tree(&mut runner).expect("strategy").current();
        let d = if var == common::DIM { e.diff_time() } else { e.diff_coord(var) };
        let at = |delta: f64| {
            let mut p = x.clone();
            let mut tt = t;
            if var == common::DIM {
                tt += delta;
            } else {
                p[var] += delta;
            }
            e.eval(&p, Some(tt))
        };
        match (d.eval(&x, Some(t)), at(C7_FD_STEP), at(-C7_FD_STEP)) {
            (Ok(exact), Ok(up), Ok(down)) => {
                let fd = (up - down) / (2.0 * C7_FD_STEP);
                let gap = (exact - fd).abs() / (1.0 + exact.abs());
                worst = worst.max(gap);
                if gap > C7_FD_TOLERANCE {
                    fd_fail += 1;
                }
            }
            _ => skipped += 1,
        }
        let text = e.to_text(&chart);
        match parse(&text, &chart) {
            Ok(back) => {
                let differs = points.iter().any(|s| match (e.eval(&s.x, Some(s.t)), back.eval(&s.x, Some(s.t))) {
                    (Ok(a), Ok(b)) => (a - b).abs() > C7_ROUND_TRIP_TOLERANCE * (1.0 + a.abs()),
                    (Err(_), Err(_)) => false,
                    _ => true,
                });
                if differs {
                    rt_fail += 1;
                }
            }
            Err(_) => rt_fail += 1,
        }
    }
    outcome(
        fd_fail == 0 && rt_fail == 0 && skipped == 0,
        format!(
            "{C7_CASES} cases: derivative mismatches {fd_fail} (worst {worst:.1e}, tol {C7_FD_TOLERANCE:e}), \
             round-trip mismatches {rt_fail}, non-finite {skipped}"
        ),
    )
}

fn consistency_pool() -> Vec<Scenario> {
    let mut pool: Vec<Scenario> = Vec::new();
    for k in [1i8, -1] {
        for row in [1, 4, 6, 7] {
            pool.push(table7_scenario(row, k, 1, 2, 1).expect("sphere"));
        }
    }
    let params = NewtonianParams::default();
    for row in [NewtonianRow::Table3(1), NewtonianRow::Table3(3), NewtonianRow::Table4(2), NewtonianRow::Table4(4)] {
        pool.push(newtonian_scenario(3, row, &params).expect("Newtonian"));
    }
    for kind in [BianchiType::I, BianchiType::II, BianchiType::VII0, BianchiType::IX] {
        pool.push(bianchi_scenario(BianchiModel::new(kind, PotentialFamily::Exponential)).expect("Bianchi"));
    }
    pool
}

/// `1 + max |F| + max |∂F|` at `x`, the size of the terms each residual sums.
fn force_scale(f: &ForceField, x: &[f64]) -> f64 {
    let values = f.eval(x).unwrap_or_default().into_iter().chain(f.eval_jacobian(x).unwrap_or_default());
    1.0 + values.map(f64::abs).fold(0.0, f64::max)
}

fn internal_consistency() -> Outcome {
    let pool = consistency_pool();
    let mut triples = Vec::new();
    'fill: for round in 0.. {
        for sc in &pool {
            let entries: Vec<_> = sc.expected.iter().chain(&sc.negative_controls).collect();
            if let Some(e) = entries.get(round) {
                triples.push((sc, e.vector.clone(), ForceField::clone(&sc.force)));
                if triples.len() == C8_TRIPLES {
                    break 'fill;
                }
            }
        }
        if round > 64 {
            break;
        }
    }
    let mut worst = 0.0f64;
    for (sc, x, f) in &triples {
        let samples = sc.samples(20, SEED);
        let a = lie_conditions(x, &sc.metric, f, &samples, 1.0).expect("direct path");
        let b = lie_conditions_solved(x, &sc.metric, f, &samples, 1.0).expect("solved path");
        let scale: Vec<f64> = samples.iter().map(|s| force_scale(f, &s.x)).collect();
        for (ba, bb) in a.blocks().iter().zip(b.blocks()) {
            for ((p, q), m) in ba.per_sample.iter().zip(&bb.per_sample).zip(&scale) {
                worst = worst.max((p - q).abs() / m);
            }
        }
    }
    let kinds: usize = triples.iter().filter(|(sc, ..)| sc.potential.is_none()).count();
    outcome(
        triples.len() == C8_TRIPLES && worst <= C8_TOLERANCE,
        format!(
            "{} triples ({kinds} non-conservative), max gap relative to the force scale {worst:.1e} (tol {C8_TOLERANCE:e})",
            triples.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("flat-space collineation algebra", flat_algebra),
        ("sphere Noether catalog", sphere_catalog),
        ("conservation drift on the sphere", conservation),
        ("Ermakov Lie symmetry", ermakov),
        ("Bianchi symmetry tables", bianchi_tables),
        ("Euler-Lagrange oracles", el_oracle),
        ("expression engine properties", expression_engine),
        ("direct vs solved Lie residuals", internal_consistency),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!("criterion {} {}: {} ({})", i + 1, if o.passed { "PASS" } else { "FAIL" }, title, o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 || std::env::var_os("GEONOETHER_ACCEPTANCE_STRICT").is_none() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
