//! End-to-end runs of every registered experiment with small configs:
//! outputs land where the manifest says, the aggregate CSV has the fixed
//! schema, and headlines report the expected verdict patterns.

use linktopo::experiment::{run_experiment, ExperimentConfig};

fn base(name: &str, dir: &tempfile::TempDir) -> ExperimentConfig {
    ExperimentConfig::named(name, dir.path().join("out"))
}

fn check_artifacts(cfg: &ExperimentConfig, summary: &linktopo::experiment::ExperimentSummary) {
    let manifest_path = cfg.out_dir.join("manifest.json");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["experiment"], summary.experiment.as_str());
    assert_eq!(manifest["config_hash"], summary.config_hash.as_str());
    for rel in manifest["artifacts"].as_array().unwrap() {
        let path = cfg.out_dir.join(rel.as_str().unwrap());
        assert!(path.exists(), "missing artifact {}", path.display());
    }
    let csv = std::fs::read_to_string(cfg.out_dir.join("aggregate.csv")).unwrap();
    assert!(csv.starts_with("seed,width,depth,verdict,min_gap,degree\n"));
    assert_eq!(csv.lines().count(), summary.rows.len() + 1);
}

#[test]
fn linking_degree_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base("linking-degree", &dir);
    cfg.samples = Some(128);
    let summary = run_experiment(&cfg).unwrap();
    assert!(summary.rows.iter().all(|r| r.verdict == "match"), "{}", summary.headline);
    check_artifacts(&cfg, &summary);
}

#[test]
fn flow_group_law_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base("flow-group-law", &dir);
    cfg.samples = Some(8);
    let summary = run_experiment(&cfg).unwrap();
    assert!(summary.rows.iter().all(|r| r.verdict == "pass"), "{}", summary.headline);
    check_artifacts(&cfg, &summary);
}

#[test]
fn linear_obstruction_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base("linear-obstruction", &dir);
    cfg.samples = Some(128);
    cfg.seeds = Some((0..5).collect());
    let summary = run_experiment(&cfg).unwrap();
    let obstructed = summary.rows.iter().filter(|r| r.verdict == "not-separated").count();
    assert_eq!(obstructed, 10);
    assert!(summary.rows.iter().any(|r| r.verdict == "control-separated"));
    check_artifacts(&cfg, &summary);
}

#[test]
fn conjugate_obstruction_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base("conjugate-obstruction", &dir);
    cfg.samples = Some(128);
    cfg.seeds = Some((0..5).collect());
    let summary = run_experiment(&cfg).unwrap();
    assert!(summary.rows.iter().all(|r| r.verdict == "not-separated"));
    check_artifacts(&cfg, &summary);
}

#[test]
fn width_classification_experiment_small() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base("width-classification", &dir);
    cfg.samples = Some(48);
    cfg.widths = Some(vec![2, 3]);
    cfg.depths = Some(vec![2, 3]);
    cfg.seeds = Some(vec![0, 1]);
    cfg.activation = Some("relu".into());
    let summary = run_experiment(&cfg).unwrap();
    assert_eq!(summary.rows.len(), 8);
    assert!(
        summary
            .rows
            .iter()
            .all(|r| r.verdict == "init=not-separated;trained=not-separated"),
        "{}",
        summary.headline
    );
    check_artifacts(&cfg, &summary);
}

#[test]
fn approximation_bound_experiment_small() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base("approximation-bound", &dir);
    cfg.seeds = Some((0..4).collect());
    cfg.samples = Some(2000);
    let summary = run_experiment(&cfg).unwrap();
    // 4 random + 4 adversarial + 1 control
    assert_eq!(summary.rows.len(), 9);
    let bound_held = summary
        .rows
        .iter()
        .filter(|r| r.verdict.ends_with("gap>=delta"))
        .count();
    assert_eq!(bound_held, 8, "{}", summary.headline);
    assert!(summary.rows.iter().any(|r| r.verdict == "control:fit<delta"));
    check_artifacts(&cfg, &summary);
}

#[test]
fn unknown_experiment_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = base("no-such-thing", &dir);
    assert!(run_experiment(&cfg).is_err());
}
