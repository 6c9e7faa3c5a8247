//! Approximation lower bound: every width <= n net stays at sup
//! distance at least delta from the Urysohn target (0 at the origin, 2*delta on the unit
//! sphere), whether randomly initialized or adversarially trained to
//! shrink the measured gap; a width n+1 net trained on the target gets
//! under delta.
//!
//! Adversaries train against a coarse sphere; the reported gap is always
//! measured on a finer one, so grid overfitting surfaces instead of
//! producing a vacuous sub-delta readout.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::activation::ActivationKind;
use crate::analysis::{approximation_gap, train_gap_adversary, ApproxGapReport};
use crate::error::Result;
use crate::experiment::{Experiment, ExperimentConfig, ExperimentOutput, RunRow};
use crate::geometry::sample_ball_boundary_and_center;
use crate::net::{train, FinalActivation, LabeledData, LossKind, MLPSpec, TrainConfig, MLP};

#[derive(Clone, Debug, Serialize)]
pub struct ApproxRun {
    pub seed: u64,
    pub width: usize,
    pub depth: usize,
    pub activation: String,
    pub adversarial: bool,
    pub reported_gap: f64,
    pub net_at_origin: f64,
}

/// Evaluate random and adversarially trained width-limited nets against
/// the delta bound. `widths`/`depths` are cycled over the seed list; the
/// first `adversarial_count` seeds also get an adversarial run.
#[allow(clippy::too_many_arguments)]
pub fn run_approximation_grid(
    dim: usize,
    delta: f64,
    seeds: &[u64],
    adversarial_count: usize,
    widths: &[usize],
    depths: &[usize],
    eval_samples: usize,
    train_samples: usize,
    epochs: usize,
    learning_rate: f64,
    momentum: f64,
) -> Result<Vec<ApproxRun>> {
    let activations = [ActivationKind::relu(), ActivationKind::sigmoid()];
    let mut jobs: Vec<(u64, usize, usize, ActivationKind, bool)> = Vec::new();
    for (i, &seed) in seeds.iter().enumerate() {
        let width = widths[i % widths.len()];
        let depth = depths[i % depths.len()];
        let act = activations[i % activations.len()].clone();
        jobs.push((seed, width, depth, act, false));
    }
    for (i, &seed) in seeds.iter().take(adversarial_count).enumerate() {
        let width = widths[i % widths.len()];
        let depth = depths[i % depths.len()];
        let act = activations[i % activations.len()].clone();
        jobs.push((seed, width, depth, act, true));
    }

    jobs.par_iter()
        .map(|(seed, width, depth, act, adversarial)| {
            let mut dims = vec![dim];
            dims.extend(std::iter::repeat_n(*width, depth - 1));
            dims.push(1);
            let spec = MLPSpec::new(dims, act.clone(), FinalActivation::None, *seed)?;
            let net = MLP::init(spec);
            let net = if *adversarial {
                let (trained, _trace) = train_gap_adversary(
                    net,
                    dim,
                    delta,
                    train_samples,
                    epochs,
                    learning_rate,
                    momentum,
                )?;
                trained
            } else {
                net
            };
            let report = approximation_gap(&net, dim, delta, eval_samples)?;
            Ok(ApproxRun {
                seed: *seed,
                width: *width,
                depth: *depth,
                activation: act.descriptor(),
                adversarial: *adversarial,
                reported_gap: report.sup_error_lower_bound,
                net_at_origin: report.net_at_origin,
            })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct WidthControlResult {
    pub net: MLP,
    pub report: ApproxGapReport,
    pub final_train_mse: f64,
}

/// Control arm: train a width dim+1 relu net on the target values by MSE
/// and measure the sampled sup error on the evaluation sphere.
///
/// The origin is oversampled to roughly 30% of the sphere count:
/// with one copy its gradient contribution is negligible against
/// thousands of sphere points (and relu gradients at the zero input only
/// open up once biases move), so plain MSE training parks the net at the
/// constant 2*delta and never learns the dip to 0.
#[allow(clippy::too_many_arguments)]
pub fn train_width_control(
    dim: usize,
    delta: f64,
    seed: u64,
    train_samples: usize,
    eval_samples: usize,
    epochs: usize,
    learning_rate: f64,
    momentum: f64,
) -> Result<WidthControlResult> {
    let width = dim + 1;
    let spec = MLPSpec::new(
        vec![dim, width, width, width, 1],
        ActivationKind::relu(),
        FinalActivation::None,
        seed,
    )?;
    let net = MLP::init(spec);

    let sample = sample_ball_boundary_and_center(dim, delta, train_samples)?;
    let origin_weight = (sample.sphere.len() * 3 / 10).max(1);
    let mut inputs = Vec::with_capacity(origin_weight + sample.sphere.len());
    let mut targets = Vec::with_capacity(inputs.capacity());
    for _ in 0..origin_weight {
        inputs.push(sample.center.points[0].clone());
        targets.push(vec![sample.center_target]);
    }
    for p in &sample.sphere.points {
        inputs.push(p.clone());
        targets.push(vec![sample.sphere_target]);
    }
    let data = LabeledData::new(inputs, targets)?;
    let cfg = TrainConfig {
        learning_rate,
        epochs,
        batch: usize::MAX,
        loss: LossKind::MeanSquaredError,
        momentum,
        seed,
    };
    let outcome = train(net, &data, &cfg)?;
    let report = approximation_gap(&outcome.net, dim, delta, eval_samples)?;
    Ok(WidthControlResult {
        net: outcome.net,
        report,
        final_train_mse: *outcome.loss_trace.last().unwrap(),
    })
}

pub struct ApproximationBound;

impl Experiment for ApproximationBound {
    fn name(&self) -> &'static str {
        "approximation-bound"
    }

    fn summary(&self) -> &'static str {
        "width <= n nets stay >= delta from the Urysohn target; width n+1 gets under delta"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
        let dim = 3;
        let delta = cfg.delta.unwrap_or(0.1);
        let seeds = cfg.seed_list(50);
        let widths = cfg.widths.clone().unwrap_or_else(|| vec![2, 3]);
        let depths = cfg.depths.clone().unwrap_or_else(|| vec![2, 3, 4]);
        let eval_samples = cfg.samples.unwrap_or(16_000);
        let train_samples = 258;
        let epochs = 2000;

        let runs = run_approximation_grid(
            dim,
            delta,
            &seeds,
            10.min(seeds.len()),
            &widths,
            &depths,
            eval_samples,
            train_samples,
            epochs,
            0.05,
            0.9,
        )?;
        let control = train_width_control(dim, delta, 0, 1026, eval_samples, 6000, 0.05, 0.5)?;

        let bound_held = runs.iter().filter(|r| r.reported_gap >= delta - 1e-6).count();
        let mut rows: Vec<RunRow> = runs
            .iter()
            .map(|r| RunRow {
                seed: Some(r.seed),
                width: Some(r.width),
                depth: Some(r.depth),
                verdict: format!(
                    "{}gap{}",
                    if r.adversarial { "adversarial:" } else { "random:" },
                    if r.reported_gap >= delta - 1e-6 { ">=delta" } else { "<delta" },
                ),
                min_gap: Some(r.reported_gap),
                degree: None,
            })
            .collect();
        rows.push(RunRow {
            seed: Some(0),
            width: Some(dim + 1),
            depth: Some(4),
            verdict: format!(
                "control:{}",
                if control.report.sup_error_lower_bound < delta { "fit<delta" } else { "fit>=delta" }
            ),
            min_gap: Some(control.report.sup_error_lower_bound),
            degree: None,
        });

        let reports = vec![(
            "approximation-bound".to_string(),
            json!({
                "dim": dim,
                "delta": delta,
                "eval_samples": eval_samples,
                "train_samples": train_samples,
                "bound_held": bound_held,
                "total": runs.len(),
                "control_sup_error": control.report.sup_error_lower_bound,
                "control_train_mse": control.final_train_mse,
                "runs": runs,
            }),
        )];

        Ok(ExperimentOutput {
            headline: format!(
                "{bound_held}/{} width<={dim} nets report gap >= delta; \
                 width-{} control sup error {:.4}",
                runs.len(),
                dim + 1,
                control.report.sup_error_lower_bound
            ),
            rows,
            reports,
        })
    }
}
