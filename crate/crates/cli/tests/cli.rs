//! CLI behavior: the exit-code contract (0 success, 1 negative verdict,
//! 2 usage error, 3 numeric failure) and the generate -> file -> degree
//! round trip.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_linktopo")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn success_is_exit_zero() {
    let out = run(&["degree", "--pair", "hopf", "--samples", "64"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("degree 1"), "{stdout}");
}

#[test]
fn failed_expectation_is_exit_one() {
    let out = run(&["degree", "--pair", "hopf", "--samples", "64", "--expect", "0"]);
    assert_eq!(code(&out), 1);

    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    let ok = run(&[
        "train", "--layers", "3,3,1", "--pair", "hopf", "--samples", "16", "--epochs", "5",
        "--out", net.to_str().unwrap(),
    ]);
    assert_eq!(code(&ok), 0);
    let out = run(&[
        "separate", "--net", net.to_str().unwrap(), "--pair", "hopf", "--samples", "64",
        "--expect", "separated",
    ]);
    assert_eq!(code(&out), 1, "width-3 images cannot separate");
}

#[test]
fn usage_errors_are_exit_two() {
    // unknown subcommand (clap)
    assert_eq!(code(&run(&["frobnicate"])), 2);
    // unknown builtin pair
    assert_eq!(code(&run(&["degree", "--pair", "nope"])), 2);
    // missing pair source entirely
    assert_eq!(code(&run(&["degree"])), 2);
    // unknown activation
    assert_eq!(code(&run(&["flow", "--activation", "swish"])), 2);
    // degree on a pair with no applicable method: a sphere-point pair fed
    // into linking is fine, but a mangled file is a usage error
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"this\": \"is not a pair\"}").unwrap();
    assert_eq!(code(&run(&["degree", "--input", bad.to_str().unwrap()])), 2);
}

#[test]
fn numeric_failures_are_exit_three() {
    // a divergent training run ends in non-finite loss
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    let out = run(&[
        "train", "--layers", "3,6,6,1", "--activation", "tanh", "--loss", "mean-squared-error",
        "--dim", "3", "--delta", "100000", "--samples", "64", "--epochs", "500", "--lr", "1.0",
        "--momentum", "0.9", "--out", net.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(!net.exists(), "no net file on numeric failure");
}

#[test]
fn generate_then_degree_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let pair_path = dir.path().join("pair.json");
    let report_path = dir.path().join("report.json");
    assert_eq!(
        code(&run(&[
            "generate", "--pair", "hopf-reflected", "--samples", "96",
            "--out", pair_path.to_str().unwrap(),
        ])),
        0
    );
    let out = run(&[
        "degree", "--input", pair_path.to_str().unwrap(),
        "--out", report_path.to_str().unwrap(), "--expect", "-1",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    // file-driven numbers equal the in-memory pipeline bit for bit
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    let pair = linktopo::geometry::builtin_pair("hopf-reflected", 96).unwrap();
    let direct = linktopo::degree::linking_number(&pair).unwrap();
    assert_eq!(report["estimate"].as_f64().unwrap(), direct.estimate);
    assert_eq!(report["rounded"].as_i64().unwrap(), -1);
    assert_eq!(report["method"], "gauss-linking-integral");
}

#[test]
fn csv_outputs_have_declared_headers() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    assert_eq!(
        code(&run(&[
            "generate", "--pair", "unlinked", "--samples", "32",
            "--out", root.join("p.json").to_str().unwrap(),
            "--csv-dir", root.to_str().unwrap(),
        ])),
        0
    );
    let side_a = std::fs::read_to_string(root.join("side_a.csv")).unwrap();
    assert!(side_a.starts_with("x1,x2,x3\n"));
    assert_eq!(side_a.lines().count(), 33);

    let net = root.join("net.json");
    let loss = root.join("loss.csv");
    assert_eq!(
        code(&run(&[
            "train", "--layers", "3,2,1", "--pair", "hopf", "--samples", "16", "--epochs", "3",
            "--out", net.to_str().unwrap(), "--loss-csv", loss.to_str().unwrap(),
        ])),
        0
    );
    let loss_text = std::fs::read_to_string(&loss).unwrap();
    assert!(loss_text.starts_with("epoch,loss\n"));
    assert_eq!(loss_text.lines().count(), 4);
}

#[test]
fn flow_trace_csv_written() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = run(&[
        "flow", "--activation", "identity", "--check", "group-law", "--samples", "4",
        "--pair", "hopf", "--pair-samples", "24", "--s-steps", "5",
        "--trace", trace.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("s,min_gap,degree_estimate\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn experiment_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, "{\"experiment\": \"linking-degree\"}").unwrap(); // no out_dir
    assert_eq!(code(&run(&["experiment", "--config", cfg.to_str().unwrap()])), 2);
    assert_eq!(
        code(&run(&["experiment", "--config", Path::new("/no/such/file.json").to_str().unwrap()])),
        2
    );
}
