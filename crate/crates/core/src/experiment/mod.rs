//! Named end-to-end experiments behind a registry: each experiment is a
//! trait object selected at runtime by the config's `experiment` field,
//! writing per-run JSON reports, one aggregate CSV, and a manifest
//! stamped with the config hash.

use std::path::{Path, PathBuf};

use rand::Rng as _;
use rand::SeedableRng as _;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{builtin_pair, EmbeddedPair, MonotoneMap};
use crate::linalg::Matrix;

mod approximation_bound;
mod conjugate_obstruction;
mod flow_group_law;
mod linear_obstruction;
mod linking_degree;
mod width_classification;

pub use approximation_bound::{
    run_approximation_grid, train_width_control, ApproxRun, WidthControlResult,
};
pub use flow_group_law::{group_law_grid, GROUP_LAW_TOLERANCE};
pub use width_classification::{run_width_grid, WidthGridParams, WidthRun, EVAL_REFINEMENT};

/// JSON experiment configuration; unknown fields are rejected so typos in
/// config files surface as errors instead of silently running defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    /// Builtin pair name or path to a pair JSON file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub widths: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depths: Option<Vec<usize>>,
    /// Activation descriptor; experiments with a default activation list
    /// run the whole list when this is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub activation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn named(experiment: &str, out_dir: PathBuf) -> Self {
        ExperimentConfig {
            experiment: experiment.to_string(),
            pair: None,
            widths: None,
            depths: None,
            activation: None,
            seeds: None,
            delta: None,
            samples: None,
            threshold: None,
            out_dir,
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Resolve the configured pair (builtin name or file path) at the
    /// given per-side sample count.
    pub fn resolve_pair(&self, default_name: &str, samples: usize) -> Result<EmbeddedPair> {
        let name = self.pair.as_deref().unwrap_or(default_name);
        match builtin_pair(name, samples) {
            Ok(pair) => Ok(pair),
            Err(Error::UnknownName { .. }) if Path::new(name).exists() => {
                EmbeddedPair::from_json_file(Path::new(name))
            }
            Err(e) => Err(e),
        }
    }

    pub fn seed_list(&self, default_count: u64) -> Vec<u64> {
        self.seeds.clone().unwrap_or_else(|| (0..default_count).collect())
    }
}

/// One aggregate-CSV row; inapplicable columns stay empty.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRow {
    pub seed: Option<u64>,
    pub width: Option<usize>,
    pub depth: Option<usize>,
    pub verdict: String,
    pub min_gap: Option<f64>,
    pub degree: Option<f64>,
}

impl RunRow {
    fn to_csv(&self) -> Vec<String> {
        vec![
            self.seed.map_or(String::new(), |s| s.to_string()),
            self.width.map_or(String::new(), |w| w.to_string()),
            self.depth.map_or(String::new(), |d| d.to_string()),
            self.verdict.clone(),
            self.min_gap.map_or(String::new(), |g| format!("{g}")),
            self.degree.map_or(String::new(), |d| format!("{d}")),
        ]
    }
}

/// What an experiment hands back to the coordinator.
pub struct ExperimentOutput {
    pub headline: String,
    pub rows: Vec<RunRow>,
    /// (file stem, report) pairs written under `out_dir/runs/`.
    pub reports: Vec<(String, Value)>,
}

/// A named experiment. Implementations stay stateless; the config carries
/// every knob.
pub trait Experiment: Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentOutput>;
}

static EXPERIMENTS: &[&dyn Experiment] = &[
    &linking_degree::LinkingDegree,
    &flow_group_law::FlowGroupLaw,
    &linear_obstruction::LinearObstruction,
    &conjugate_obstruction::ConjugateObstruction,
    &width_classification::WidthClassification,
    &approximation_bound::ApproximationBound,
];

pub fn registered_experiments() -> Vec<(&'static str, &'static str)> {
    EXPERIMENTS.iter().map(|e| (e.name(), e.summary())).collect()
}

pub fn find_experiment(name: &str) -> Result<&'static dyn Experiment> {
    EXPERIMENTS
        .iter()
        .find(|e| e.name() == name)
        .copied()
        .ok_or_else(|| Error::UnknownName { kind: "experiment", name: name.to_string() })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentSummary {
    pub experiment: String,
    pub config_hash: String,
    pub headline: String,
    pub rows: Vec<RunRow>,
    pub artifacts: Vec<PathBuf>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    experiment: &'a str,
    config_hash: &'a str,
    headline: &'a str,
    artifacts: &'a [PathBuf],
}

/// Dispatch on the config's experiment name, run it, and write the run
/// reports, the aggregate CSV, and the manifest under `out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let experiment = find_experiment(&cfg.experiment)?;
    let config_hash = crate::output::fnv1a64_hex(serde_json::to_string(cfg)?.as_bytes());
    let output = experiment.run(cfg)?;

    std::fs::create_dir_all(&cfg.out_dir)?;
    let mut artifacts = Vec::new();
    for (stem, report) in &output.reports {
        let rel = PathBuf::from("runs").join(format!("{stem}.json"));
        crate::output::write_json_pretty(&cfg.out_dir.join(&rel), report)?;
        artifacts.push(rel);
    }
    let aggregate = PathBuf::from("aggregate.csv");
    let csv_rows: Vec<Vec<String>> = output.rows.iter().map(|r| r.to_csv()).collect();
    crate::output::write_csv(
        &cfg.out_dir.join(&aggregate),
        &["seed", "width", "depth", "verdict", "min_gap", "degree"],
        &csv_rows,
    )?;
    artifacts.push(aggregate);

    let manifest = Manifest {
        experiment: experiment.name(),
        config_hash: &config_hash,
        headline: &output.headline,
        artifacts: &artifacts,
    };
    crate::output::write_json_pretty(&cfg.out_dir.join("manifest.json"), &manifest)?;

    Ok(ExperimentSummary {
        experiment: experiment.name().to_string(),
        config_hash,
        headline: output.headline,
        rows: output.rows,
        artifacts,
    })
}

// -- shared helpers for the experiment implementations --

pub(crate) fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random linear map with entries uniform in [-1, 1], rejecting
/// near-degenerate rows so every map honestly reduces dimension.
pub(crate) fn random_linear_map(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    loop {
        let data: Vec<f64> = (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect();
        let m = Matrix::new(rows, cols, data).expect("finite entries");
        let row_norms_ok = (0..rows).all(|r| crate::linalg::norm(m.row(r)) > 0.1);
        if row_norms_ok {
            return m;
        }
    }
}

/// Random strictly monotone scalar map for conjugation experiments.
pub(crate) fn random_monotone(rng: &mut ChaCha8Rng) -> MonotoneMap {
    match rng.random_range(0..3u32) {
        0 => MonotoneMap::Affine {
            scale: rng.random_range(0.5..2.0),
            offset: rng.random_range(-1.0..1.0),
        },
        1 => MonotoneMap::SineSkew { amplitude: rng.random_range(-0.8..0.8) },
        _ => MonotoneMap::CubicSkew { coefficient: rng.random_range(0.0..0.5) },
    }
}
