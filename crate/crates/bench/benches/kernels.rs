use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use geonoether::collineation::{flat_projective_catalog, DEFAULT_MAX_DEGREE};
use geonoether::dynamics::{integrate, Method};
use geonoether::scenarios::{scenario_by_name, CHECK_TOLERANCE};
use geonoether::{lie_conditions, parse, solve_determining_equations, Metric, SolverKind};

fn expressions(c: &mut Criterion) {
    let sc = scenario_by_name("sphere:K=1:row=4").unwrap();
    let chart = sc.metric.chart().clone();
    let v = sc.potential.clone().unwrap();
    let x = [0.9, 0.4];
    c.bench_function("eval table7 row4 potential", |b| b.iter(|| v.eval(black_box(&x), None).unwrap()));
    c.bench_function("diff table7 row4 potential", |b| b.iter(|| black_box(&v).diff_coord(1)));
    let text = "(1 + tan(theta)^2)/(sin(phi)^2*(1 - 2*tan(theta))^2)";
    c.bench_function("parse", |b| b.iter(|| parse(black_box(text), &chart).unwrap()));
}

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_determining_equations");
    group.sample_size(20);
    for sig in [vec![1i8, 1, 1], vec![1, 1, 1, -1]] {
        let metric = Metric::flat(&sig);
        for kind in [SolverKind::Killing, SolverKind::SpecialProjective] {
            group.bench_function(format!("{}d {}", sig.len(), kind.label()), |b| {
                b.iter(|| solve_determining_equations(black_box(&metric), kind, DEFAULT_MAX_DEGREE).unwrap())
            });
        }
    }
    group.finish();
}

fn checkers(c: &mut Criterion) {
    let sc = scenario_by_name("bianchi:IX:arbitrary").unwrap();
    let points = sc.samples(200, 0);
    let entry = sc.expected.iter().find(|e| e.label != "d_t").unwrap_or(&sc.expected[0]).clone();
    c.bench_function("lie_conditions bianchi IX, 200 points", |b| {
        b.iter(|| lie_conditions(&entry.vector, &sc.metric, &sc.force, black_box(&points), CHECK_TOLERANCE).unwrap())
    });
    let flat = flat_projective_catalog(&[1, 1, 1]);
    let flat_points = geonoether::HaltonSampler::new(geonoether::SampleBox::cube(3, -2.0, 2.0), 0)
        .points(&geonoether::CoordinateChart::numbered(3), 30);
    c.bench_function("flat catalog sampled rank, 30 points", |b| b.iter(|| flat.sampled_rank(black_box(&flat_points))));
}

fn dynamics(c: &mut Criterion) {
    let sc = scenario_by_name("sphere:K=1:row=1").unwrap();
    let e = sc.equations().unwrap();
    let mut group = c.benchmark_group("integrate");
    group.sample_size(10);
    group.bench_function("rk4 h=1e-3 to t=1", |b| {
        b.iter_batched(
            || ([1.2, 0.5], [0.2, 1.8]),
            |(x0, v0)| integrate(&e, &x0, &v0, (0.0, 1.0), Method::Rk4 { step: 1e-3 }).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("rk45 1e-10 to t=1", |b| {
        b.iter(|| integrate(&e, &[1.2, 0.5], &[0.2, 1.8], (0.0, 1.0), Method::rk45()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, expressions, solver, checkers, dynamics);
criterion_main!(benches);
