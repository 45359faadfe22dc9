use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fisherzeros(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fisherzeros"))
        .args(args)
        .env_remove("FISHERZEROS_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = fisherzeros(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> Option<i32> {
    fisherzeros(args).status.code()
}

fn rows(csv_text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

fn zero_locations(args: &[&str]) -> Vec<f64> {
    stdout_of(args)
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["location"].as_f64().unwrap())
        .collect()
}

fn assert_pi_multiples(found: &[f64], ks: &[u32]) {
    assert_eq!(found.len(), ks.len(), "{found:?}");
    for (x, k) in found.iter().zip(ks) {
        assert!((x - *k as f64 * PI).abs() < 1e-6, "{x} vs {k}pi");
    }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn chain_shot_sweep_has_81_rows() {
    let text = stdout_of(&[
        "sweep",
        "--system",
        "chain3",
        "--h-over-j",
        "0",
        "--shots",
        "1024",
        "--seed",
        "7",
    ]);
    assert!(text.starts_with("jbeta,p_exact,p_estimate,shots,seed\n"));
    let rows = rows(&text);
    assert_eq!(rows.len(), 81);
    assert_eq!(rows[0][3], "1024");
    assert_eq!(rows[0][4], "7");
    assert_eq!(rows[80][4], "87");
    let last: f64 = rows[80][0].parse().unwrap();
    assert!((last - 8.0 * PI).abs() < 1e-9);
}

#[test]
fn lagos_p_exact_is_cos12() {
    let text = stdout_of(&["sweep", "--system", "lagos7", "--shots", "8192"]);
    for row in rows(&text) {
        let (x, p): (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        assert!((p - (x / 4.0).cos().powi(12)).abs() < 1e-12);
        assert_eq!(row[3], "8192");
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "sweep",
        "--system",
        "triangle3",
        "--h-over-j",
        "1",
        "--mode",
        "noisy",
        "--shots",
        "300",
        "--seed",
        "5",
    ];
    let a = fisherzeros(&args);
    let b = fisherzeros(&[&args[..], &["--threads", "1"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = fisherzeros(&[
        "sweep",
        "--system",
        "triangle3",
        "--h-over-j",
        "1",
        "--mode",
        "noisy",
        "--shots",
        "300",
        "--seed",
        "6",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_fisherzeros"))
            .args(["sweep", "--system", "chain3", "--shots", "64"])
            .env("FISHERZEROS_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    let explicit = stdout_of(&["sweep", "--system", "chain3", "--shots", "64", "--seed", "42"]);
    assert_eq!(String::from_utf8(run("42")).unwrap(), explicit);
}

#[test]
fn files_in_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "pair.json",
        r#"{"n_sites": 2, "bonds": [[0, 1, 1.0]], "field": 0.0}"#,
    );
    let noise = write(
        dir.path(),
        "noise.json",
        r#"{"depol_2q": 0.0, "depol_1q": 0.0, "readout_flip": 0.0}"#,
    );
    let out = dir.path().join("sweep.csv");
    let out_str = out.to_str().unwrap();
    assert!(
        stdout_of(&["sweep", "--config", &config, "--noise", &noise, "--shots", "100", "--output", out_str]).is_empty()
    );
    let text = std::fs::read_to_string(&out).unwrap();
    let rows = rows(&text);
    assert_eq!(rows.len(), 81);
    // A single bond: |Z|^2 = cos^2(J beta / 4).
    for row in &rows {
        let (x, p): (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        assert!((p - (x / 4.0).cos().powi(2)).abs() < 1e-12);
    }
    // The noiseless noise file reproduces binomial sampling.
    let shots = stdout_of(&["sweep", "--config", &config, "--shots", "100", "--mode", "shots"]);
    assert_eq!(text, shots);
}

#[test]
fn exit_codes() {
    assert_eq!(
        code(&["sweep", "--system", "chain3", "--grid", "0", "0", "0.1"]),
        Some(2)
    );
    assert_eq!(
        code(&["sweep", "--system", "chain3", "--grid", "0", "1", "-0.1"]),
        Some(2)
    );
    assert_eq!(code(&["sweep", "--system", "square4"]), Some(2));
    assert_eq!(code(&["sweep", "--system", "chain3", "--shots", "0"]), Some(2));
    assert_eq!(code(&["sweep", "--system", "chain3", "--config", "x.json"]), Some(2));
    assert_eq!(code(&["locus", "--model", "lagos7"]), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let big = write(dir.path(), "big.json", r#"{"n_sites": 25, "bonds": [[0, 24, 1.0]]}"#);
    assert_eq!(code(&["sweep", "--config", &big]), Some(3));
    assert_eq!(code(&["zeros", "--config", &big]), Some(3));
    let bad = write(dir.path(), "bad.json", r#"{"n_sites": 3, "bonds": [[0, 3, 1.0]]}"#);
    assert_eq!(code(&["sweep", "--config", &bad]), Some(2));
    let noise = write(dir.path(), "noise.json", r#"{"readout_flip": 1.5}"#);
    assert_eq!(code(&["sweep", "--system", "chain3", "--noise", &noise]), Some(2));

    let out = fisherzeros(&["sweep", "--system", "chain3", "--grid", "0", "0", "0.1"]);
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());
}

#[test]
fn zero_reports() {
    assert_pi_multiples(
        &zero_locations(&["zeros", "--system", "chain3", "--h-over-j", "1"]),
        &[1, 2, 3, 5, 6, 7],
    );
    assert_pi_multiples(&zero_locations(&["zeros", "--system", "lagos7"]), &[2, 6]);
    assert!(zero_locations(&["zeros", "--system", "triangle3", "--h-over-j", "0"]).is_empty());

    let all = stdout_of(&["zeros", "--system", "triangle3", "--all"]);
    let first: Value = serde_json::from_str(all.lines().next().unwrap()).unwrap();
    assert_eq!(first["certified"], Value::Bool(false));
    assert!((first["residual"].as_f64().unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn shot_zero_reports_carry_error_bars() {
    let text = stdout_of(&[
        "zeros",
        "--system",
        "chain3",
        "--h-over-j",
        "1",
        "--shots",
        "1024",
        "--seed",
        "3",
    ]);
    assert!(!text.is_empty());
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["certified"], Value::Bool(false));
        assert!(v["std_error"].is_number());
    }
}

#[test]
fn locus_rows() {
    let chain = stdout_of(&["locus", "--model", "chain3", "--grid", "0", "2pi", "pi"]);
    let chain = rows(&chain);
    assert_eq!(chain.len(), 3);
    assert_eq!(chain[1][1], "degenerate_all");
    assert_eq!(chain[2][1], "roots");
    assert_eq!(chain[2][2], "merged:-1");
    assert!((chain[2][3].parse::<f64>().unwrap() - 2.0 * PI).abs() < 1e-12);

    let tri = rows(&stdout_of(&[
        "locus",
        "--model",
        "triangle3",
        "--grid",
        "0",
        "pi",
        "pi",
    ]));
    assert_eq!(tri[0][1], "none");
    assert_eq!(tri[1][1], "degenerate_all");
}

#[test]
fn export_qasm_counts() {
    let text = stdout_of(&["export-qasm", "--system", "chain3", "--h-over-j", "1", "--jbeta", "pi"]);
    let count = |op: &str| text.lines().filter(|l| l.starts_with(op)).count();
    assert_eq!((count("cx "), count("rz("), count("h ")), (4, 5, 6));
    assert!(text.starts_with("OPENQASM 2.0;"));
    assert_eq!(count("measure "), 3);

    let dir = tempfile::tempdir().unwrap();
    let single = write(dir.path(), "one.json", r#"{"n_sites": 1, "bonds": [], "field": 0.5}"#);
    let one = stdout_of(&["export-qasm", "--config", &single, "--jbeta", "1"]);
    let ops: Vec<&str> = one
        .lines()
        .filter(|l| {
            !l.starts_with("OPENQASM") && !l.starts_with("include") && !l.starts_with("//") && !l.contains("reg ")
        })
        .map(|l| l.split(['(', ' ']).next().unwrap())
        .collect();
    assert_eq!(ops, ["h", "rz", "h", "measure"]);

    let zero = stdout_of(&["export-qasm", "--system", "chain3", "--h-over-j", "1", "--jbeta", "0"]);
    assert_eq!(zero.matches("rz(0)").count(), 5);

    let json = stdout_of(&[
        "export-qasm",
        "--system",
        "lagos7",
        "--jbeta",
        "2pi",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["gates"].as_array().unwrap().len(), 14 + 6 + 12);
}
