mod common;

use geonoether::scenarios::{
    bianchi_scenario, ermakov_scenario, scenario_by_name, scenario_with_potential, table7_scenario, BianchiModel,
    BianchiType, EntryStatus, PotentialFamily, ScenarioError, CHECK_SAMPLES,
};
use geonoether::HaltonSampler;

const TOLERANCE: f64 = 1e-8;
const CONTROL: f64 = 1e-2;

#[test]
fn replacement_and_derived_entries_pass() {
    for sc in common::builtin_scenarios() {
        for c in sc.check_expected(CHECK_SAMPLES, 0, TOLERANCE).unwrap() {
            if c.status != "quoted" {
                assert!(c.passed, "{}: {} ({}) residual {:e}", sc.name, c.label, c.provenance, c.residual);
            }
        }
    }
}

#[test]
fn every_failing_printed_entry_has_a_replacement() {
    for sc in common::builtin_scenarios() {
        let checks = sc.check_expected(CHECK_SAMPLES, 0, TOLERANCE).unwrap();
        let failing = checks.iter().filter(|c| c.status == "quoted" && !c.passed).count();
        let replacements = sc.expected.iter().filter(|e| matches!(e.status, EntryStatus::Corrected(_))).count();
        assert!(failing <= replacements, "{}: {failing} failing printed entries, {replacements} corrections", sc.name);
    }
}

#[test]
fn negative_controls_fail_for_each_bianchi_type() {
    for kind in BianchiType::ALL {
        let mut strongest = 0.0f64;
        for family in PotentialFamily::ALL {
            let sc = bianchi_scenario(BianchiModel::new(kind, family)).unwrap();
            let samples = sc.samples(CHECK_SAMPLES, 0);
            for e in &sc.negative_controls {
                strongest = strongest.max(sc.check(e, &samples, TOLERANCE).unwrap().residual);
            }
        }
        assert!(strongest >= CONTROL, "{kind}: strongest control residual {strongest:e}");
    }
}

#[test]
fn bianchi_one_is_flat() {
    let model = BianchiModel::new(BianchiType::I, PotentialFamily::Zero);
    let r = model.ricci_scalar();
    let chart = geonoether::CoordinateChart::numbered(4);
    for s in HaltonSampler::new(geonoether::SampleBox::cube(4, -2.0, 2.0), 0).points(&chart, 100) {
        assert_eq!(r.eval(&s.x, None).unwrap(), 0.0);
    }
}

#[test]
fn constant_case_two_needs_a_positive_potential() {
    let model = BianchiModel::new(BianchiType::I, PotentialFamily::Constant).with_v0(-1.0);
    assert!(bianchi_scenario(model).is_err());
    let c = BianchiModel::new(BianchiType::I, PotentialFamily::Constant).with_v0(2.0).case2_constant();
    assert!((c * c - 3.0).abs() < 1e-14);
}

#[test]
fn ermakov_corrected_generator_tracks_m() {
    for m in [1.0, 4.0, 9.0] {
        let sc = ermakov_scenario(m).unwrap();
        for c in sc.check_expected(CHECK_SAMPLES, 0, 1e-9).unwrap() {
            if c.status == "corrected" {
                assert!(c.passed, "m={m} {}: {:e}", c.label, c.residual);
            }
        }
    }
}

#[test]
fn table7_row_six_prints_the_wrong_sign() {
    let sc = table7_scenario(6, 1, 1, 2, 1).unwrap();
    let checks = sc.check_expected(CHECK_SAMPLES, 0, TOLERANCE).unwrap();
    let printed = checks.iter().find(|c| c.label == "Y2 + 2*Y3").unwrap();
    let fixed = checks.iter().find(|c| c.label == "Y2 - 2*Y3").unwrap();
    assert!(!printed.passed && fixed.passed);
}

#[test]
fn names_round_trip_through_the_registry() {
    for name in ["sphere:K=1:row=3", "sphere:K=-1", "bianchi:IX:vacuum", "bianchi:I:exponential:d=3", "ermakov:m=2"] {
        let sc = scenario_by_name(name).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(!sc.expected.is_empty() || sc.notes.iter().any(|n| !n.is_empty()), "{name}");
    }
    assert!(matches!(scenario_by_name("torus"), Err(ScenarioError::Unknown(_))));
    assert!(matches!(scenario_by_name("sphere:K=1:warp=2"), Err(ScenarioError::InvalidParameter(_))));
}

#[test]
fn custom_potential_on_the_sphere() {
    let sc = scenario_with_potential("sphere:K=1", "cos(theta)*sin(phi)").unwrap();
    assert!(sc.expected.iter().any(|e| e.label == "Y1"));
    let err = scenario_with_potential("sphere:K=1", "cos(psi)").unwrap_err();
    assert!(err.to_string().contains("psi"), "{err}");
}

#[test]
fn scenarios_are_deterministic() {
    let a = common::builtin_scenarios();
    let b = common::builtin_scenarios();
    for (x, y) in a.iter().zip(&b) {
        let cx = x.check_expected(20, 5, TOLERANCE).unwrap();
        let cy = y.check_expected(20, 5, TOLERANCE).unwrap();
        for (p, q) in cx.iter().zip(&cy) {
            assert_eq!(p.residual.to_bits(), q.residual.to_bits(), "{}", x.name);
        }
    }
}
