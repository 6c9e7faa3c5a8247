//! Numerical check of the semigroup law of the activation flows over a
//! random grid of points and time pairs.

use rand::Rng as _;
use serde_json::json;

use crate::activation::ActivationKind;
use crate::error::Result;
use crate::experiment::{rng_for, Experiment, ExperimentConfig, ExperimentOutput, RunRow};
use crate::flow::{check_group_law, DEFAULT_STEP};

pub struct FlowGroupLaw;

pub const GROUP_LAW_TOLERANCE: f64 = 1e-6;

fn default_activations() -> Vec<ActivationKind> {
    vec![
        ActivationKind::relu(),
        ActivationKind::leaky_relu(0.1).expect("valid alpha"),
        ActivationKind::elu(1.0).expect("valid alpha"),
        ActivationKind::sigmoid(),
        ActivationKind::tanh(),
    ]
}

/// Random test grid: `points` vectors in [-5, 5]^dim and `pairs` time
/// pairs with t1 + t2 <= horizon.
pub fn group_law_grid(
    seed: u64,
    points: usize,
    dim: usize,
    pairs: usize,
    horizon: f64,
) -> (Vec<Vec<f64>>, Vec<(f64, f64)>) {
    let mut rng = rng_for(seed);
    let xs: Vec<Vec<f64>> = (0..points)
        .map(|_| (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect())
        .collect();
    let ts: Vec<(f64, f64)> = (0..pairs)
        .map(|_| {
            let total = rng.random_range(0.0..horizon);
            let split = rng.random_range(0.0..=1.0);
            (total * split, total * (1.0 - split))
        })
        .collect();
    (xs, ts)
}

impl Experiment for FlowGroupLaw {
    fn name(&self) -> &'static str {
        "flow-group-law"
    }

    fn summary(&self) -> &'static str {
        "verify H(x, t1+t2) = H(H(x, t1), t2) for the activation flows"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
        let activations = match &cfg.activation {
            Some(desc) => vec![ActivationKind::parse(desc)?],
            None => default_activations(),
        };
        let seeds = cfg.seed_list(1);
        let points = cfg.samples.unwrap_or(50);

        let mut rows = Vec::new();
        let mut reports = Vec::new();
        let mut worst_overall = 0.0f64;
        for kind in &activations {
            for &seed in &seeds {
                let (xs, ts) = group_law_grid(seed, points, 4, 10, 5.0);
                let deviation = check_group_law(kind, &xs, &ts, DEFAULT_STEP)?;
                worst_overall = worst_overall.max(deviation);
                let ok = deviation < GROUP_LAW_TOLERANCE;
                rows.push(RunRow {
                    seed: Some(seed),
                    width: None,
                    depth: None,
                    verdict: if ok { "pass".into() } else { "fail".into() },
                    min_gap: None,
                    degree: None,
                });
                reports.push((
                    format!("group-law-{kind}-{seed}").replace(['(', ')'], "-"),
                    json!({
                        "activation": kind.descriptor(),
                        "seed": seed,
                        "points": points,
                        "max_deviation": deviation,
                        "tolerance": GROUP_LAW_TOLERANCE,
                    }),
                ));
            }
        }

        Ok(ExperimentOutput {
            headline: format!(
                "max semigroup deviation {worst_overall:.3e} over {} activations",
                activations.len()
            ),
            rows,
            reports,
        })
    }
}
