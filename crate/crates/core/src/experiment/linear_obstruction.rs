//! Random linear maps R^3 -> R^m (m = 1, 2) applied to a linked pair must
//! never separate the images; the sampled inter-gap must shrink in step
//! with sample refinement; and the zero-degree control must separate under
//! the axis-keeping projection.

use serde_json::json;

use crate::analysis::linear_map_check;
use crate::error::Result;
use crate::experiment::{
    random_linear_map, rng_for, Experiment, ExperimentConfig, ExperimentOutput, RunRow,
};
use crate::geometry::builtin_pair;
use crate::linalg::Matrix;

pub struct LinearObstruction;

impl Experiment for LinearObstruction {
    fn name(&self) -> &'static str {
        "linear-obstruction"
    }

    fn summary(&self) -> &'static str {
        "random dimension-reducing linear maps never separate a nonzero-degree pair"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
        let samples = cfg.samples.unwrap_or(512);
        let pair = cfg.resolve_pair("hopf", samples)?;
        let pair_refined = cfg.resolve_pair("hopf", samples * 2)?;
        let seeds = cfg.seed_list(100);

        let mut rows = Vec::new();
        let mut reports = Vec::new();
        let mut not_separated = 0usize;
        let mut total = 0usize;
        let mut ratios = Vec::new();

        for target_dim in [1usize, 2] {
            for &seed in &seeds {
                let mut rng = rng_for(seed ^ (target_dim as u64) << 32);
                let l = random_linear_map(&mut rng, target_dim, pair.ambient_dim());
                let report = linear_map_check(&pair, &l, cfg.threshold)?;
                let refined = linear_map_check(&pair_refined, &l, cfg.threshold)?;
                total += 1;
                if !report.separated {
                    not_separated += 1;
                }
                let ratio = if report.min_inter_gap > 0.0 {
                    refined.min_inter_gap / report.min_inter_gap
                } else {
                    1.0
                };
                ratios.push(ratio);
                rows.push(RunRow {
                    seed: Some(seed),
                    width: Some(target_dim),
                    depth: None,
                    verdict: if report.separated { "separated".into() } else { "not-separated".into() },
                    min_gap: Some(report.min_inter_gap),
                    degree: None,
                });
                reports.push((
                    format!("linear-m{target_dim}-seed{seed}"),
                    json!({
                        "target_dim": target_dim,
                        "seed": seed,
                        "separated": report.separated,
                        "min_inter_gap": report.min_inter_gap,
                        "refined_min_inter_gap": refined.min_inter_gap,
                        "refinement_ratio": ratio,
                        "method": report.method,
                    }),
                ));
            }
        }

        // zero-degree control: far-separated circles, projection keeping
        // the separating x-axis
        let control_pair = builtin_pair("far-separated", samples)?;
        let keep_x = Matrix::new(1, 3, vec![1.0, 0.0, 0.0])?;
        let control = linear_map_check(&control_pair, &keep_x, cfg.threshold)?;
        rows.push(RunRow {
            seed: None,
            width: Some(1),
            depth: None,
            verdict: if control.separated { "control-separated".into() } else { "control-overlap".into() },
            min_gap: Some(control.min_inter_gap),
            degree: None,
        });
        reports.push((
            "linear-control".into(),
            json!({
                "pair": "far-separated",
                "map": "x-axis projection",
                "separated": control.separated,
                "min_inter_gap": control.min_inter_gap,
            }),
        ));

        let geo_mean_ratio = if ratios.is_empty() {
            f64::NAN
        } else {
            (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp()
        };

        Ok(ExperimentOutput {
            headline: format!(
                "{not_separated}/{total} maps not separated; control separated: {}; \
                 geometric-mean gap ratio on refinement {geo_mean_ratio:.3}",
                control.separated
            ),
            rows,
            reports,
        })
    }
}
