//! End-to-end tests of the `monogenic` binary: subcommands, JSON/CSV
//! formats, exit codes and determinism.

use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monogenic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn strip_timestamp(mut v: Value) -> Value {
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timestamp");
    }
    v
}

#[test]
fn eval_cauchy_kernel() {
    let out = run(&["eval", "--kind", "cauchy", "--z", "2,0,0"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "cauchy");
    let c = v["value"]["coeffs"]["1"].as_f64().unwrap();
    assert!((c - 0.25).abs() < 1e-15);
}

#[test]
fn eval_epsilon_zero_order_equals_cot1() {
    let a = run(&[
        "eval", "--kind", "epsilon", "--z", "0.37,0.21,0.4,0.3", "--m-index", "0,0,0,0",
        "--lattice-k", "2", "--lattice-l", "1", "--max-shell", "8",
    ]);
    let b = run(&[
        "eval", "--kind", "cot1", "--z", "0.37,0.21,0.4,0.3", "--lattice-k", "2",
        "--lattice-l", "1", "--max-shell", "8",
    ]);
    assert!(a.status.success() && b.status.success());
    let (va, vb) = (stdout_json(&a), stdout_json(&b));
    assert_eq!(va["value"]["coeffs"], vb["value"]["coeffs"]);
}

#[test]
fn eval_hopf_self_consistency() {
    let a = run(&[
        "eval", "--kind", "hopf-g", "--x", "0.5,0.4,1.0", "--y", "-0.7,0.9,0.8",
        "--max-shell", "12",
    ]);
    let b = run(&[
        "eval", "--kind", "hopf-g", "--x", "0.5,0.4,1.0", "--y", "-0.7,0.9,0.8",
        "--max-shell", "24",
    ]);
    let (va, vb) = (stdout_json(&a), stdout_json(&b));
    let tail = va["tail_estimate"].as_f64().unwrap();
    let mut change: f64 = 0.0;
    for key in ["1", "2", "4", "7"] {
        let ca = va["value"]["coeffs"].get(key).and_then(Value::as_f64).unwrap_or(0.0);
        let cb = vb["value"]["coeffs"].get(key).and_then(Value::as_f64).unwrap_or(0.0);
        change += (ca - cb) * (ca - cb);
    }
    assert!(change.sqrt() <= tail, "change {} > tail {tail}", change.sqrt());
}

#[test]
fn verify_clifford_passes() {
    let out = run(&["verify", "--suite", "clifford"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
}

#[test]
fn precondition_errors_are_machine_readable_exit_2() {
    let out = run(&["eval", "--kind", "cauchy", "--z", "0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(err["error"]["code"], "singularity");
    // usage errors too
    let out = run(&["eval", "--kind", "p1", "--x", "1,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["code"], "usage");
}

#[test]
fn deterministic_output_modulo_timestamp() {
    let args = [
        "eval", "--kind", "hopf-h1", "--x", "0.2,0.1,1.1", "--y", "-0.3,0.2,1.3",
        "--max-shell", "10",
    ];
    let a = strip_timestamp(stdout_json(&run(&args)));
    let b = strip_timestamp(stdout_json(&run(&args)));
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn cosets_table_shape() {
    let short = run(&["cosets", "--p", "1", "--level", "1", "--kind", "full", "--max-word-length", "2"]);
    let long = run(&["cosets", "--p", "1", "--level", "1", "--kind", "full", "--max-word-length", "4"]);
    let (vs, vl) = (stdout_json(&short), stdout_json(&long));
    // identity always present: some rep with c = {} and d = {"0": 1.0}
    let reps = vs["reps"].as_array().unwrap();
    assert!(reps.iter().any(|r| {
        r["matrix"]["c"]["coeffs"].as_object().map(|o| o.is_empty()).unwrap_or(false)
            && r["matrix"]["d"]["coeffs"]["0"].as_f64() == Some(1.0)
    }));
    // counts monotone in word length
    assert!(vl["count"].as_u64().unwrap() >= vs["count"].as_u64().unwrap());
}

#[test]
fn table_csv_schema() {
    let out = run(&["table", "--kind", "hopf-g", "--radii", "4,8,12,16"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("radius,scalar,e1,e2,e12,e3,"));
    assert!(header.ends_with("tail_estimate"));
    let mut radii = Vec::new();
    let mut tails = Vec::new();
    for line in lines.filter(|l| !l.is_empty()) {
        let cells: Vec<&str> = line.split(',').collect();
        radii.push(cells[0].parse::<u64>().unwrap());
        tails.push(cells.last().unwrap().parse::<f64>().unwrap());
    }
    assert!(radii.windows(2).all(|w| w[1] > w[0]), "radius column increasing");
    assert!(tails.windows(2).all(|w| w[1] < w[0]), "tail column shrinking");
    // RFC 4180 line endings
    assert!(text.contains("\r\n"));
}

#[test]
fn reproduce_euclid_cauchy() {
    let out = run(&["reproduce", "--theorem", "euclid-cauchy"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["abs_error"].as_f64().unwrap() < 1e-5);
    assert_eq!(v["pass"], true);
    let out = run(&["reproduce", "--theorem", "hopf-hyper", "--field", "const"]);
    let v = stdout_json(&out);
    assert!(v["abs_error"].as_f64().unwrap() < 1e-2);
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join("monogenic_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("config.json");
    std::fs::write(
        &cfg_path,
        r#"{"hopf_m": 3, "truncation": {"max_shell": 6, "tail_tol": 0.5}}"#,
    )
    .unwrap();
    let out = run(&[
        "--config",
        cfg_path.to_str().unwrap(),
        "eval",
        "--kind",
        "hopf-g",
        "--x",
        "0.5,0.4,1.2",
        "--y",
        "-0.9,1.1,0.8",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["params"]["m"], 3);
    assert_eq!(v["params"]["max_shell"], 6);
    // flag overrides file
    let out = run(&[
        "--config",
        cfg_path.to_str().unwrap(),
        "eval",
        "--kind",
        "hopf-g",
        "--x",
        "0.5,0.4,1.2",
        "--y",
        "-0.9,1.1,0.8",
        "--max-shell",
        "9",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["params"]["max_shell"], 9);
    // --out writes the same payload
    let out_path = dir.join("result.json");
    let out = run(&[
        "--out",
        out_path.to_str().unwrap(),
        "eval",
        "--kind",
        "cauchy",
        "--z",
        "2,0,0",
    ]);
    assert!(out.status.success());
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(file["kind"], "cauchy");
}
