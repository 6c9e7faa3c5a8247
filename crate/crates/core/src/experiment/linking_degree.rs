//! Degree table over the builtin pairs: the computed degree must match
//! each pair's expected_degree metadata.

use serde_json::json;

use crate::degree::degree_of;
use crate::error::Result;
use crate::experiment::{Experiment, ExperimentConfig, ExperimentOutput, RunRow};
use crate::geometry::builtin_pair_names;

pub struct LinkingDegree;

impl Experiment for LinkingDegree {
    fn name(&self) -> &'static str {
        "linking-degree"
    }

    fn summary(&self) -> &'static str {
        "compute the Gauss-map degree of every builtin pair and compare with expectations"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
        let samples = cfg.samples.unwrap_or(512);
        let mut rows = Vec::new();
        let mut reports = Vec::new();
        let mut matches = 0usize;

        let names: Vec<String> = match &cfg.pair {
            Some(name) => vec![name.clone()],
            None => builtin_pair_names().iter().map(|s| s.to_string()).collect(),
        };

        for name in &names {
            let pair = cfg
                .resolve_pair(name, samples)
                .or_else(|_| crate::geometry::builtin_pair(name, samples))?;
            let report = degree_of(&pair)?;
            let expected = pair.expected_degree;
            let ok = expected.is_none_or(|e| e == report.rounded);
            if ok {
                matches += 1;
            }
            rows.push(RunRow {
                seed: None,
                width: None,
                depth: None,
                verdict: if ok { "match".into() } else { "mismatch".into() },
                min_gap: Some(pair.min_gap),
                degree: Some(report.estimate),
            });
            let stem = name.replace('(', "-").replace(')', "").replace(',', "_");
            reports.push((
                format!("degree-{stem}"),
                json!({
                    "pair": name,
                    "expected_degree": expected,
                    "report": report,
                    "min_gap": pair.min_gap,
                }),
            ));
        }

        Ok(ExperimentOutput {
            headline: format!("{matches}/{} pairs match their expected degree", names.len()),
            rows,
            reports,
        })
    }
}
