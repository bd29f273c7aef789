use std::path::Path;
use std::process::Command;

use geonoether::scenarios::{BianchiType, PotentialFamily, TABLE7_ROWS};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("geonoether").chain(args.iter().copied());
    let code = geonoether_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn binary() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_geonoether"));
    c.env_remove(geonoether_cli::SEED_VARIABLE);
    c
}

const OSCILLATOR: &str = r#"
schema_version = 1
name = "plane oscillator"

[metric]
coordinates = ["x", "y"]
diagonal = ["1", "1"]

[potential]
V = "(x^2 + y^2)/2"

[[vectors]]
name = "rotation"
eta = ["y", "-x"]
check = "noether"

[simulate]
x0 = [1.0, 0.0]
v0 = [0.0, 0.5]
t_span = [0.0, 2.0]
step = 0.01

[check]
seed = 7
"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn noether_find_lists_y1_with_its_integral() {
    let (code, out, _) = run(&["noether-find", "--scenario", "sphere:K=1", "--potential", "cos(theta)*sin(phi)"]);
    assert_eq!(code, 0);
    let row = out.lines().find(|l| l.starts_with("| Y1 |")).expect("Y1 row");
    let cells: Vec<&str> = row.split('|').map(str::trim).collect();
    assert_eq!(cells[4], "0", "p column: {row}");
    assert!(row.contains("| I_CK1 |"), "{row}");
    assert_eq!(out.lines().filter(|l| l.starts_with("| Y")).count(), 1);
}

#[test]
fn solve_killing_finds_six_euclidean_vectors() {
    let (code, out, _) = run(&["solve-killing", "--dim", "3", "--signature", "+++", "--kind", "KV"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("| KV")).count(), 6, "{out}");
}

#[test]
fn signature_must_match_dimension() {
    let (code, _, err) = run(&["solve-killing", "--dim", "2", "--signature", "+++"]);
    assert_eq!(code, 2);
    assert!(err.contains("--dim"), "{err}");
}

#[test]
fn bianchi_report_has_a_line_per_entry() {
    let (code, out, _) = run(&["report", "--table", "bianchi"]);
    assert_eq!(code, 0, "{out}");
    for heading in
        ["Bianchi I spacetime", "Bianchi II spacetime", "Bianchi VI0 and Bianchi VII0", "Bianchi VIII and Bianchi IX"]
    {
        assert!(out.contains(heading), "missing {heading}");
    }
    for line in out.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| cell")) {
        assert!(
            line.contains("| pass |") || line.contains("| FAIL") || line.contains("| fails as expected |"),
            "no verdict: {line}"
        );
    }
    assert!(!out.contains("Table 7"));
}

#[test]
fn report_covers_every_row() {
    let (code, out, _) = run(&["report"]);
    assert_eq!(code, 0);
    for sig in ["++", "+++", "+-"] {
        for kind in ["KV (gradient)", "KV (non-gradient)", "HV", "AC", "SPC"] {
            let row = |l: &&str| l.starts_with(&format!("| {sig} |")) && l.contains(&format!("| {kind} |"));
            assert!(out.lines().any(|l| row(&l)), "Table 2 {sig} {kind}");
        }
    }
    for k in ["1", "-1"] {
        for row in 1..=TABLE7_ROWS {
            assert!(out.lines().any(|l| l.starts_with(&format!("| {k} | {row} |"))), "Table 7 K={k} row {row}");
        }
    }
    for kind in BianchiType::ALL {
        for family in PotentialFamily::ALL {
            let cell = format!("{} {}", kind.label(), family.label());
            let listed = out.lines().any(|l| l.starts_with(&format!("| {cell} |")));
            let noted = out.contains(&format!("- {cell}: no entries listed"));
            assert!(listed || noted, "Bianchi cell {cell}");
        }
    }
    assert!(out.contains("FAIL (erratum)"));
}

#[test]
fn reports_are_byte_identical() {
    let a = run(&["report", "--table", "7", "--seed", "3"]);
    let b = run(&["report", "--table", "7", "--seed", "3"]);
    assert_eq!(a, b);
    assert!(a.1.contains("- seed: 3"));
    let j1 = run(&["report", "--table", "8", "--format", "json"]).1;
    let j2 = run(&["report", "--table", "8", "--format", "json"]).1;
    assert_eq!(j1, j2);
    let v: serde_json::Value = serde_json::from_str(&j1).unwrap();
    assert!(v["tables"].as_array().is_some_and(|t| !t.is_empty()));
}

#[test]
fn simulation_is_deterministic_and_writes_files() {
    let args = ["simulate", "--scenario", "sphere:K=-1:row=2", "--x0", "1.0,0.3", "--v0", "0.1,0.4", "--t-end", "0.5"];
    let (code, csv, legend) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(run(&args).1, csv);
    assert!(csv.starts_with("t,x1,x2,v1,v2,E,I_1\n"), "{}", &csv[..60]);
    assert!(legend.contains("I_1 = I_CK2"), "{legend}");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.csv");
    let mut with_output = args.to_vec();
    with_output.extend(["--output", path.to_str().unwrap()]);
    assert_eq!(run(&with_output).0, 0);
    assert_eq!(std::fs::read_to_string(path).unwrap(), csv);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["lie-check", "--scenario", "sphere:K=1:row=1"]).0, 0);
    assert_eq!(run(&["lie-check", "--scenario", "sphere:K=1:row=6"]).0, 1);
    assert_eq!(run(&["noether-check", "--scenario", "bianchi:II:vacuum", "--controls"]).0, 1);
    assert_eq!(run(&["lie-check", "--scenario", "bianchi:I:vacuum", "--vector", "Y1"]).0, 0);
    let (code, _, err) = run(&["lie-check", "--scenario", "nowhere"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    assert_eq!(run(&["frobnicate"]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("noether-find"));
}

#[test]
fn controls_pass_by_failing() {
    let (code, out, _) = run(&["noether-check", "--scenario", "bianchi:I:arbitrary", "--controls"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("fails as expected"));
}

#[test]
fn scenario_files_drive_checks_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "osc.toml", OSCILLATOR);
    let (code, out, _) = run(&["noether-check", "--file", &file]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("| rotation |") && out.contains("- seed: 7"), "{out}");
    let (code, out, _) = run(&["conserve-check", "--file", &file]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("- steps: 200"), "{out}");
    let (code, out, _) = run(&["catalog", "--file", &file]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.contains("| KV |")).count(), 3, "{out}");
    let (code, out, _) = run(&["noether-find", "--file", &file]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn bad_files_exit_2_with_a_location() {
    let dir = tempfile::tempdir().unwrap();
    let broken = OSCILLATOR.replace("eta = [\"y\", \"-x\"]", "eta = [\"y\", \"-z\"]");
    let file = write(dir.path(), "bad.toml", &broken);
    let (code, _, err) = run(&["noether-check", "--file", &file]);
    assert_eq!(code, 2);
    assert!(err.contains("vectors[0]") && err.contains("eta[1]"), "{err}");
    let file = write(dir.path(), "syntax.toml", "schema_version = 1\n[metric\n");
    let (code, _, err) = run(&["lie-check", "--file", &file]);
    assert_eq!(code, 2);
    assert!(err.contains("syntax.toml"), "{err}");
    let file = write(dir.path(), "future.toml", &OSCILLATOR.replace("schema_version = 1", "schema_version = 9"));
    assert_eq!(run(&["lie-check", "--file", &file]).0, 2);
}

#[test]
fn seed_comes_from_flag_then_environment() {
    let args = ["lie-check", "--scenario", "sphere:K=1:row=3"];
    let out = binary().args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("- seed: 0"));
    let out = binary().args(args).env(geonoether_cli::SEED_VARIABLE, "42").output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("- seed: 42"));
    let out = binary().arg("--seed").arg("5").args(args).env(geonoether_cli::SEED_VARIABLE, "42").output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("- seed: 5"));
    let out = binary().args(args).env(geonoether_cli::SEED_VARIABLE, "many").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
