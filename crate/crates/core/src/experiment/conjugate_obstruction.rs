//! Maps conjugate to dimension-reducing linear maps (post . L . pre with
//! homeomorphisms pre/post) must not separate a nonzero-degree pair.

use serde_json::json;

use crate::analysis::conjugate_map_check;
use crate::error::Result;
use crate::experiment::{
    random_linear_map, random_monotone, rng_for, Experiment, ExperimentConfig, ExperimentOutput,
    RunRow,
};
use crate::geometry::Homeomorphism;
use crate::linalg::random_rotation3;

pub struct ConjugateObstruction;

impl Experiment for ConjugateObstruction {
    fn name(&self) -> &'static str {
        "conjugate-obstruction"
    }

    fn summary(&self) -> &'static str {
        "maps conjugate to a dimension-reducing linear map never separate a linked pair"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
        let samples = cfg.samples.unwrap_or(256);
        let pair = cfg.resolve_pair("hopf", samples)?;
        let seeds = cfg.seed_list(50);

        let mut rows = Vec::new();
        let mut reports = Vec::new();
        let mut not_separated = 0usize;

        for &seed in &seeds {
            let mut rng = rng_for(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1));
            let target_dim = 1 + (seed as usize % 2);
            let l = random_linear_map(&mut rng, target_dim, 3);
            // pre: rotation followed by componentwise smooth monotone maps
            let pre = Homeomorphism::composition(vec![
                Homeomorphism::affine(random_rotation3(&mut rng), vec![0.0; 3])?,
                Homeomorphism::componentwise(vec![
                    random_monotone(&mut rng),
                    random_monotone(&mut rng),
                    random_monotone(&mut rng),
                ])?,
            ])?;
            let post = Homeomorphism::componentwise(
                (0..target_dim).map(|_| random_monotone(&mut rng)).collect(),
            )?;

            let report = conjugate_map_check(&pair, &l, &pre, &post, cfg.threshold)?;
            if !report.separated {
                not_separated += 1;
            }
            rows.push(RunRow {
                seed: Some(seed),
                width: Some(target_dim),
                depth: None,
                verdict: if report.separated { "separated".into() } else { "not-separated".into() },
                min_gap: Some(report.min_inter_gap),
                degree: None,
            });
            reports.push((
                format!("conjugate-seed{seed}"),
                json!({
                    "seed": seed,
                    "target_dim": target_dim,
                    "separated": report.separated,
                    "min_inter_gap": report.min_inter_gap,
                    "method": report.method,
                }),
            ));
        }

        Ok(ExperimentOutput {
            headline: format!("{not_separated}/{} conjugated maps not separated", seeds.len()),
            rows,
            reports,
        })
    }
}
