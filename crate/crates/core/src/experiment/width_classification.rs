//! Width-bounded classification failure: over a (seed x width x depth x
//! activation) grid, nets with hidden width <= n on a linked pair in R^n
//! must produce overlapping scalar output intervals, both at random
//! initialization and after separation training, while width n+1 is the
//! control arm where trained separation becomes possible.
//!
//! Nets here use a raw final affine output so the hinge objective is
//! well-posed; the obstruction covers this form since it is an affine map
//! composed with an activation-last network. Verdicts are evaluated on a
//! refined re-sampling of the pair so interval separation cannot be faked
//! by swinging between training samples.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::activation::ActivationKind;
use crate::analysis::classify_check;
use crate::error::Result;
use crate::experiment::{Experiment, ExperimentConfig, ExperimentOutput, RunRow};
use crate::geometry::EmbeddedPair;
use crate::net::{
    pair_training_data, train, FinalActivation, LossKind, MLPSpec, TrainConfig, MLP,
};

/// How much denser the verdict sampling is than the training sampling.
pub const EVAL_REFINEMENT: usize = 4;

#[derive(Clone, Debug)]
pub struct WidthGridParams {
    pub widths: Vec<usize>,
    /// Affine layer counts; each needs at least 2 so a hidden layer
    /// exists.
    pub depths: Vec<usize>,
    pub activations: Vec<ActivationKind>,
    pub seeds: Vec<u64>,
    pub epochs: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub threshold: Option<f64>,
}

impl Default for WidthGridParams {
    fn default() -> Self {
        WidthGridParams {
            widths: vec![2, 3, 4],
            depths: vec![2, 3, 4, 5, 6],
            activations: vec![ActivationKind::relu(), ActivationKind::sigmoid()],
            seeds: (0..50).collect(),
            epochs: 2000,
            learning_rate: 0.05,
            momentum: 0.0,
            threshold: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WidthRun {
    pub seed: u64,
    pub width: usize,
    pub depth: usize,
    pub activation: String,
    pub init_separated: bool,
    pub init_min_gap: f64,
    pub trained_separated: bool,
    pub trained_min_gap: f64,
    pub final_loss: f64,
}

fn layer_dims(input_dim: usize, width: usize, depth: usize) -> Vec<usize> {
    let mut dims = vec![input_dim];
    dims.extend(std::iter::repeat_n(width, depth - 1));
    dims.push(1);
    dims
}

fn run_one(
    train_pair: &EmbeddedPair,
    eval_pair: &EmbeddedPair,
    params: &WidthGridParams,
    seed: u64,
    width: usize,
    depth: usize,
    activation: &ActivationKind,
) -> Result<WidthRun> {
    let spec = MLPSpec::new(
        layer_dims(train_pair.ambient_dim(), width, depth),
        activation.clone(),
        FinalActivation::None,
        seed,
    )?;
    let net = MLP::init(spec);
    let init_report = classify_check(&net, eval_pair, params.threshold)?;

    let data = pair_training_data(train_pair);
    let cfg = TrainConfig {
        learning_rate: params.learning_rate,
        epochs: params.epochs,
        batch: usize::MAX,
        loss: LossKind::HingeSeparation,
        momentum: params.momentum,
        seed,
    };
    let outcome = train(net, &data, &cfg)?;
    let trained_report = classify_check(&outcome.net, eval_pair, params.threshold)?;

    Ok(WidthRun {
        seed,
        width,
        depth,
        activation: activation.descriptor(),
        init_separated: init_report.separated,
        init_min_gap: init_report.min_inter_gap,
        trained_separated: trained_report.separated,
        trained_min_gap: trained_report.min_inter_gap,
        final_loss: *outcome.loss_trace.last().unwrap(),
    })
}

/// Run the full grid; training runs are independent, so they fan out over
/// the thread pool and collect back in grid order.
pub fn run_width_grid(
    train_pair: &EmbeddedPair,
    eval_pair: &EmbeddedPair,
    params: &WidthGridParams,
) -> Result<Vec<WidthRun>> {
    let mut combos = Vec::new();
    for activation in &params.activations {
        for &width in &params.widths {
            for &depth in &params.depths {
                for &seed in &params.seeds {
                    combos.push((seed, width, depth, activation.clone()));
                }
            }
        }
    }
    combos
        .par_iter()
        .map(|(seed, width, depth, activation)| {
            run_one(train_pair, eval_pair, params, *seed, *width, *depth, activation)
        })
        .collect()
}

pub struct WidthClassification;

impl Experiment for WidthClassification {
    fn name(&self) -> &'static str {
        "width-classification"
    }

    fn summary(&self) -> &'static str {
        "width <= n nets cannot split a linked pair's output intervals; width n+1 can learn to"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
        let train_samples = cfg.samples.unwrap_or(128);
        let train_pair = cfg.resolve_pair("hopf", train_samples)?;
        let eval_pair = cfg.resolve_pair("hopf", train_samples * EVAL_REFINEMENT)?;
        let n = train_pair.ambient_dim();

        let mut params = WidthGridParams::default();
        if let Some(widths) = &cfg.widths {
            params.widths = widths.clone();
        }
        if let Some(depths) = &cfg.depths {
            params.depths = depths.clone();
        }
        if let Some(desc) = &cfg.activation {
            params.activations = vec![ActivationKind::parse(desc)?];
        }
        if let Some(seeds) = &cfg.seeds {
            params.seeds = seeds.clone();
        }
        params.threshold = cfg.threshold;

        let runs = run_width_grid(&train_pair, &eval_pair, &params)?;

        let narrow_total = runs.iter().filter(|r| r.width <= n).count();
        let narrow_overlap = runs
            .iter()
            .filter(|r| r.width <= n && !r.init_separated && !r.trained_separated)
            .count();
        let wide_separated = runs.iter().filter(|r| r.width > n && r.trained_separated).count();

        let rows: Vec<RunRow> = runs
            .iter()
            .map(|r| RunRow {
                seed: Some(r.seed),
                width: Some(r.width),
                depth: Some(r.depth),
                verdict: format!(
                    "init={};trained={}",
                    if r.init_separated { "separated" } else { "not-separated" },
                    if r.trained_separated { "separated" } else { "not-separated" },
                ),
                min_gap: Some(r.trained_min_gap),
                degree: None,
            })
            .collect();

        let reports = vec![(
            "width-classification".to_string(),
            json!({
                "input_dim": n,
                "train_samples": train_samples,
                "eval_samples": train_samples * EVAL_REFINEMENT,
                "narrow_overlap": narrow_overlap,
                "narrow_total": narrow_total,
                "wide_separated": wide_separated,
                "runs": runs,
            }),
        )];

        Ok(ExperimentOutput {
            headline: format!(
                "width<={n}: {narrow_overlap}/{narrow_total} overlap at init and after training; \
                 width>{n}: {wide_separated} trained runs separated"
            ),
            rows,
            reports,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_hopf_pair;

    #[test]
    fn tiny_grid_narrow_nets_overlap() {
        let train_pair = make_hopf_pair(1.0, 32).unwrap();
        let eval_pair = make_hopf_pair(1.0, 128).unwrap();
        let params = WidthGridParams {
            widths: vec![2, 3],
            depths: vec![2, 3],
            activations: vec![ActivationKind::relu()],
            seeds: vec![0, 1],
            epochs: 50,
            learning_rate: 0.05,
            momentum: 0.0,
            threshold: None,
        };
        let runs = run_width_grid(&train_pair, &eval_pair, &params).unwrap();
        assert_eq!(runs.len(), 8);
        for r in &runs {
            assert!(!r.init_separated, "{r:?}");
            assert!(!r.trained_separated, "{r:?}");
        }
    }
}
