use std::path::{Path, PathBuf};
use std::process::Command;

use cohere_cli::{dispatch, Outcome};
use serde_json::Value;
use tempfile::TempDir;

fn write_matrix(dir: &Path, name: &str, dim: usize, entries: &[[f64; 2]]) -> PathBuf {
    let path = dir.join(name);
    let doc = serde_json::json!({ "dim": dim, "entries": entries });
    std::fs::write(&path, doc.to_string()).unwrap();
    path
}

fn mixed_qubit(dir: &Path) -> PathBuf {
    write_matrix(dir, "mixed_qubit.json", 2, &[[0.75, 0.0], [0.0, 0.0], [0.0, 0.0], [0.25, 0.0]])
}

fn maximally_mixed_3(dir: &Path) -> PathBuf {
    let t = 1.0 / 3.0;
    let mut e = vec![[0.0, 0.0]; 9];
    for i in 0..3 {
        e[4 * i] = [t, 0.0];
    }
    write_matrix(dir, "maximally_mixed_3.json", 3, &e)
}

fn run(args: &[&str]) -> Outcome {
    dispatch(std::iter::once("cohere").chain(args.iter().copied()))
}

fn json(out: &Outcome) -> Value {
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn measure_mixed_qubit() {
    let dir = TempDir::new().unwrap();
    let path = mixed_qubit(dir.path());
    let doc = json(&run(&["measure", "--state", path.to_str().unwrap()]));
    assert_eq!(doc["schema"], 1);
    assert!((doc["c2"].as_f64().unwrap() - 0.125).abs() < 1e-12);
    assert!((doc["purity"].as_f64().unwrap() - 0.625).abs() < 1e-12);
    assert!((doc["c_trace"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(doc.get("c1").is_none());
    assert!(run(&["measure", "--state", path.to_str().unwrap()]).stdout.starts_with("{\n  \"schema\": 1"));
}

#[test]
fn measure_maximally_mixed_is_all_zero() {
    let dir = TempDir::new().unwrap();
    let path = maximally_mixed_3(dir.path());
    let doc = json(&run(&["measure", "--state", path.to_str().unwrap(), "--c1"]));
    for key in ["c2", "c_re", "c_skew", "c_trace", "c1"] {
        assert!(doc[key].as_f64().unwrap().abs() < 1e-9, "{key} = {}", doc[key]);
    }
}

#[test]
fn measure_csv_has_header_and_row() {
    let dir = TempDir::new().unwrap();
    let path = mixed_qubit(dir.path());
    let out = run(&["measure", "--state", path.to_str().unwrap(), "--output", "csv"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "dim,purity,c2,c_re,c_skew,c_trace,log_base");
    assert_eq!(lines[1], "2,0.625,0.125,0.188721875541,0.0669872981078,0.5,2");
}

#[test]
fn invalid_state_exits_one_and_names_invariant() {
    let dir = TempDir::new().unwrap();
    let not_psd = write_matrix(dir.path(), "bad.json", 2, &[[1.5, 0.0], [0.0, 0.0], [0.0, 0.0], [-0.5, 0.0]]);
    let out = run(&["measure", "--state", not_psd.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("invariant violated"), "{}", out.stderr);
    assert!(out.stderr.contains("positive"), "{}", out.stderr);

    let short = dir.path().join("short.json");
    std::fs::write(&short, r#"{"dim": 2, "entries": [[1, 0]]}"#).unwrap();
    assert_eq!(run(&["measure", "--state", short.to_str().unwrap()]).code, 1);
    assert_eq!(run(&["measure", "--state", "/nonexistent/file.json"]).code, 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[]).code, 2);
    assert_eq!(run(&["measure"]).code, 2);
    assert_eq!(run(&["swap-test", "--state", "x.json", "--copies", "two"]).code, 2);
    assert_eq!(run(&["probe", "--bloch", "1,2", "--system", "x.json", "--unitary", "u.json"]).code, 2);
    assert_eq!(run(&["sweep", "--preset", "qom-overlap", "--points", "1"]).code, 2);
    assert_eq!(run(&["verify", "--jobs", "0", "--suite", "purity"]).code, 2);
}

#[test]
fn verify_is_reproducible() {
    let args = ["verify", "--suite", "monotonicity", "--samples", "100", "--seed", "7"];
    let a = run(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let doc: Value = serde_json::from_str(&a.stdout).unwrap();
    let suite = &doc["suites"][0];
    assert_eq!(suite["suite"], "monotonicity");
    assert_eq!(suite["seed"], 7);
    assert_eq!(suite["passed"], 100);
    assert_eq!(suite["failed"], 0);
    assert_eq!(a, run(&args));

    let mut single = args.to_vec();
    single.extend(["--jobs", "1"]);
    assert_eq!(a, run(&single));
}

#[test]
fn swap_test_reports_probability_and_shots() {
    let dir = TempDir::new().unwrap();
    let path = mixed_qubit(dir.path());
    let p = path.to_str().unwrap();
    let doc = json(&run(&["swap-test", "--state", p, "--copies", "3"]));
    // (1 + 0.75^3 + 0.25^3) / 2
    assert!((doc["probability"].as_f64().unwrap() - 0.71875).abs() < 1e-12);
    assert!((doc["moment"].as_f64().unwrap() - 0.4375).abs() < 1e-12);
    assert!(doc.get("shots").is_none());

    let args = ["swap-test", "--state", p, "--copies", "2", "--shots", "10000", "--seed", "9"];
    let a = json(&run(&args));
    assert_eq!(a["shots"]["shots"], 10000);
    assert_eq!(a["seed"], 9);
    assert!((a["shots"]["estimate"].as_f64().unwrap() - 0.625).abs() < 0.05);
    assert_eq!(run(&args), run(&args));
}

#[test]
fn optimize_l2_matches_closed_form() {
    let dir = TempDir::new().unwrap();
    let path = mixed_qubit(dir.path());
    let doc = json(&run(&["optimize", "--state", path.to_str().unwrap(), "--objective", "l2", "--restarts", "4"]));
    assert!((doc["value"].as_f64().unwrap() - 0.125).abs() < 1e-9);
    assert!((doc["closed_form"].as_f64().unwrap() - 0.125).abs() < 1e-12);
    assert_eq!(doc["unitary"]["dim"], 2);

    let l1 = json(&run(&["optimize", "--state", path.to_str().unwrap(), "--objective", "l1"]));
    assert!((l1["value"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert!(l1["closed_form"].is_null());
}

#[test]
fn probe_modes() {
    let dir = TempDir::new().unwrap();
    let z = write_matrix(dir.path(), "z.json", 2, &[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [-1.0, 0.0]]);
    let x = write_matrix(dir.path(), "x.json", 2, &[[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]]);
    let plus = write_matrix(dir.path(), "plus.json", 2, &[[0.5, 0.0], [0.5, 0.0], [0.5, 0.0], [0.5, 0.0]]);
    let zero = write_matrix(dir.path(), "zero.json", 2, &[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]);

    let general = json(&run(&[
        "probe",
        "--bloch",
        "0,0,1",
        "--system",
        plus.to_str().unwrap(),
        "--unitary",
        z.to_str().unwrap(),
        x.to_str().unwrap(),
    ]));
    // Tr(|+><+| Z) = 0 and Tr(|+><+| X) = 1
    assert!((general["steps"][0]["delta_c"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(general["steps"][1]["delta_c"].as_f64().unwrap().abs() < 1e-12);
    assert!((general["total_cost"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let dqc1 = json(&run(&["probe", "--dqc1", "1", "--unitary", z.to_str().unwrap()]));
    assert!((dqc1["total_cost"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((dqc1["dqc1_delta_c"][0].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let one = write_matrix(dir.path(), "one.json", 2, &[[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]);
    let orth = json(&run(&["probe", "--qom", zero.to_str().unwrap(), one.to_str().unwrap()]));
    assert!((orth["qom_delta_c"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((orth["total_cost"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let far = run(&["probe", "--bloch", "1,1,0", "--system", plus.to_str().unwrap(), "--unitary", z.to_str().unwrap()]);
    assert_eq!(far.code, 1);
    assert!(far.stderr.contains("invariant violated"));
}

#[test]
fn qom_sweep_anchor_rows() {
    let out = run(&["sweep", "--preset", "qom-overlap", "--points", "11", "--output", "csv"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "overlap,delta_c,scheme_cost");
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[1], "0,0.5,0.5");
    assert_eq!(lines[11], "1,0,0");
    for row in &lines[1..] {
        let v: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[1] - 0.5 * (1.0 - v[0] * v[0])).abs() < 1e-11);
        assert!((v[1] - v[2]).abs() < 1e-11);
    }
}

#[test]
fn purity_sweep_c2_column() {
    let out = run(&["sweep", "--preset", "purity", "--points", "21", "--output", "csv"]);
    assert_eq!(out.code, 0);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next().unwrap(), "radius,purity,c2,c_re,c_skew,c_trace");
    for row in lines {
        let v: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[2] - (v[1] - 0.5)).abs() < 1e-11, "{row}");
    }
}

#[test]
fn binary_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = mixed_qubit(dir.path());
    let bin = env!("CARGO_BIN_EXE_cohere");

    let ok = Command::new(bin).args(["measure", "--state", good.to_str().unwrap()]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert!((doc["c2"].as_f64().unwrap() - 0.125).abs() < 1e-12);

    let bad = write_matrix(dir.path(), "bad.json", 2, &[[0.5, 0.0], [0.0, 0.0], [0.0, 0.0], [0.25, 0.0]]);
    let out = Command::new(bin).args(["measure", "--state", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace"));

    let usage = Command::new(bin).arg("nonsense").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
