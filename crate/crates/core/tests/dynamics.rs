use geonoether::dynamics::{
    conservation_drift, eom_rhs, integrate, integrate_with_margin, write_csv, DynamicsError, EquationsOfMotion, Method,
};
use geonoether::expr::parse;
use geonoether::scenarios::{sphere_scenario, table7_scenario};
use geonoether::symmetry::{build_noether_integral, find_noether_case1, FinderConfig, Hamiltonian, NoetherIntegral};
use geonoether::{Expression, Metric, SymmetryVector};

fn oscillator() -> EquationsOfMotion {
    let m = Metric::euclidean(1);
    let v = parse("x1^2/2", m.chart()).unwrap();
    EquationsOfMotion::from_potential(m, v).unwrap()
}

#[test]
fn free_particle_moves_uniformly() {
    let e = EquationsOfMotion::from_potential(Metric::euclidean(1), Expression::zero()).unwrap();
    let tr = integrate(&e, &[0.0], &[1.0], (0.0, 1.0), Method::rk4()).unwrap();
    let (t, y) = tr.last();
    assert_eq!(t, 1.0);
    assert!((y[0] - 1.0).abs() <= 1e-12);
    let m = Metric::euclidean(1);
    let momentum = SymmetryVector::parse(m.chart(), "0", &["1"]).unwrap();
    let i =
        NoetherIntegral::new("p", geonoether::NoetherCase::I, &momentum, Expression::zero(), &m, &Expression::zero());
    assert_eq!(conservation_drift(&tr, &[i]).unwrap().series[0].absolute_drift, 0.0);
}

#[test]
fn oscillator_returns_after_one_period() {
    let tau = std::f64::consts::TAU;
    let tr = integrate(&oscillator(), &[1.0], &[0.0], (0.0, tau), Method::rk4()).unwrap();
    let (t, y) = tr.last();
    assert_eq!(t, tau);
    assert!((y[0] - 1.0).abs() <= 1e-9, "{}", y[0]);
}

#[test]
fn adaptive_integration_meets_its_tolerance() {
    let tr = integrate(&oscillator(), &[1.0], &[0.0], (0.0, 10.0), Method::rk45()).unwrap();
    let (_, y) = tr.last();
    assert!((y[0] - 10f64.cos()).abs() < 1e-8 && (y[1] + 10f64.sin()).abs() < 1e-8, "{y:?}");
    assert!(tr.len() < 10_000);
}

#[test]
fn sphere_energy_and_rk4_order() {
    let sc = table7_scenario(1, 1, 1, 1, 1).unwrap();
    let e = sc.equations().unwrap();
    let energy = NoetherIntegral::energy(&sc.metric, sc.potential.as_ref().unwrap());
    let drift = |h: f64| {
        let tr = integrate(&e, &[1.2, 0.5], &[0.2, 1.8], (0.0, 20.0), Method::Rk4 { step: h }).unwrap();
        assert!(tr.is_complete());
        conservation_drift(&tr, std::slice::from_ref(&energy)).unwrap().series[0].relative_drift
    };
    let (coarse, fine) = (drift(2e-3), drift(1e-3));
    assert!(fine <= 1e-8, "{fine:e}");
    let ratio = coarse / fine;
    assert!((8.0..=32.0).contains(&ratio), "{ratio}");
}

#[test]
fn radial_integral_is_conserved_and_a_wrong_one_is_not() {
    let chart = geonoether::collineation::sphere_chart(1);
    let sc = sphere_scenario(1, parse("phi^2", &chart).unwrap()).unwrap();
    let e = sc.equations().unwrap();
    let tr = integrate(&e, &[1.2, 0.5], &[0.2, 0.6], (0.0, 20.0), Method::rk4()).unwrap();
    assert!(tr.is_complete(), "{:?}", tr.halt);
    let v = sc.potential.as_ref().unwrap();
    let y3 = &sc.catalog.get("Y3").unwrap().vector;
    let i3 = NoetherIntegral::new("I_CK3", geonoether::NoetherCase::I, y3, Expression::zero(), &sc.metric, v);
    assert!(conservation_drift(&tr, &[i3]).unwrap().series[0].relative_drift <= 1e-8);

    let wrong = table7_scenario(1, 1, 1, 1, 1).unwrap();
    let tr = integrate(&wrong.equations().unwrap(), &[1.2, 0.5], &[0.2, 1.8], (0.0, 20.0), Method::rk4()).unwrap();
    let v = wrong.potential.as_ref().unwrap();
    let i3 = NoetherIntegral::new("I_CK3", geonoether::NoetherCase::I, y3, Expression::zero(), &wrong.metric, v);
    assert!(conservation_drift(&tr, &[i3]).unwrap().series[0].relative_drift >= 1e-3);
}

#[test]
fn found_integrals_drift_with_the_energy() {
    for row in [1, 3, 5] {
        let sc = table7_scenario(row, 1, 1, 2, 1).unwrap();
        let v = sc.potential.as_ref().unwrap();
        let cfg = FinderConfig::new(sc.sampler(0));
        let found = find_noether_case1(&sc.catalog, &sc.metric, v, &cfg).unwrap();
        let tr = integrate(&sc.equations().unwrap(), &[1.0, 0.3], &[0.3, 0.9], (0.0, 10.0), Method::rk4()).unwrap();
        assert!(tr.len() > 1000, "row {row}: {:?}", tr.halt);
        let energy = NoetherIntegral::energy(&sc.metric, v);
        let e_drift = conservation_drift(&tr, &[energy]).unwrap().series[0].absolute_drift.max(1e-15);
        for s in &found.symmetries {
            let i = build_noether_integral(s, &sc.metric, v);
            let d = conservation_drift(&tr, &[i]).unwrap().series[0].relative_drift;
            assert!(d <= 100.0 * e_drift, "row {row} {}: {d:e} vs energy {e_drift:e}", s.name);
        }
    }
}

#[test]
fn autonomous_runs_are_time_shift_invariant() {
    let sc = table7_scenario(1, 1, 1, 1, 1).unwrap();
    let e = sc.equations().unwrap();
    let a = integrate(&e, &[1.2, 0.5], &[0.2, 1.8], (0.0, 5.0), Method::rk4()).unwrap();
    let b = integrate(&e, &[1.2, 0.5], &[0.2, 1.8], (3.0, 8.0), Method::rk4()).unwrap();
    assert_eq!(a.len(), b.len());
    for k in 0..a.len() {
        for (p, q) in a.states[k].iter().zip(&b.states[k]) {
            assert!((p - q).abs() <= 1e-12, "step {k}");
        }
    }
}

#[test]
fn integration_stops_at_the_pole() {
    let e = sphere_scenario(1, Expression::zero()).unwrap().equations().unwrap();
    let tr = integrate_with_margin(&e, &[0.5], &[-1.0], (0.0, 2.0), Method::rk4(), 0.1);
    assert!(matches!(tr, Err(DynamicsError::DimensionMismatch { .. })));
    let tr = integrate_with_margin(&e, &[0.5, 0.0], &[-1.0, 0.0], (0.0, 2.0), Method::rk4(), 0.1).unwrap();
    assert!(!tr.is_complete());
    let (t, y) = tr.last();
    assert!(t < 0.5 && y[0].sin() > 0.09, "t = {t}, phi = {}", y[0]);
}

#[test]
fn rhs_is_position_then_acceleration() {
    let state = [0.3, -0.2];
    let rhs = eom_rhs(&oscillator(), &state).unwrap();
    assert_eq!(rhs, vec![-0.2, -0.3]);
}

#[test]
fn csv_is_full_precision_and_reproducible() {
    let e = oscillator();
    let m = Metric::euclidean(1);
    let v = parse("x1^2/2", m.chart()).unwrap();
    let h = Hamiltonian::new(m.clone(), v.clone());
    let energy = NoetherIntegral::energy(&m, &v);
    let render = || {
        let tr = integrate(&e, &[1.0], &[0.0], (0.0, 0.01), Method::rk4()).unwrap();
        let mut out = Vec::new();
        write_csv(&tr, Some(&h), std::slice::from_ref(&energy), &mut out).unwrap();
        String::from_utf8(out).unwrap()
    };
    let text = render();
    assert_eq!(text, render());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x1,v1,E,I_1"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "0.0000000000000000e0");
    assert_eq!(first[3], "5.0000000000000000e-1");
}
