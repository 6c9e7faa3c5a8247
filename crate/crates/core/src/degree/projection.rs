//! Coordinate-projection probe: project both sides of a pair to the first
//! m coordinates, test the images for separation, and trace the forced
//! collision of the interpolating homotopy that scales the dropped
//! coordinates by (1 - t).

use serde::{Deserialize, Serialize};

use crate::analysis::{check_separation, default_threshold, SeparationReport};
use crate::error::{Error, Result};
use crate::geometry::EmbeddedPair;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomotopyTracePoint {
    pub t: f64,
    pub min_gap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectionProbe {
    pub target_dim: usize,
    pub report: SeparationReport,
    pub homotopy_trace: Vec<HomotopyTracePoint>,
}

/// Number of interpolation times traced over [0, 1].
const TRACE_STEPS: usize = 20;

pub fn projection_probe(pair: &EmbeddedPair, target_dim: usize) -> Result<ProjectionProbe> {
    let n = pair.ambient_dim();
    if target_dim == 0 || target_dim >= n {
        return Err(Error::InvalidParameter(format!(
            "projection target dim must satisfy 1 <= m < {n}, got {target_dim}"
        )));
    }

    let img_a = pair.side_a.map_points(|p| p[..target_dim].to_vec())?;
    let img_b = pair.side_b.map_points(|p| p[..target_dim].to_vec())?;
    let threshold = default_threshold(&img_a, &img_b);
    let report = check_separation(&img_a, &img_b, threshold)?;

    let mut homotopy_trace = Vec::with_capacity(TRACE_STEPS + 1);
    for step in 0..=TRACE_STEPS {
        let t = step as f64 / TRACE_STEPS as f64;
        let scale = 1.0 - t;
        let mut min_gap = f64::INFINITY;
        for a in &pair.side_a.points {
            for b in &pair.side_b.points {
                let mut d2 = 0.0;
                for k in 0..n {
                    let s = if k < target_dim { 1.0 } else { scale };
                    let diff = s * (a[k] - b[k]);
                    d2 += diff * diff;
                }
                min_gap = min_gap.min(d2);
            }
        }
        homotopy_trace.push(HomotopyTracePoint { t, min_gap: min_gap.sqrt() });
    }

    Ok(ProjectionProbe { target_dim, report, homotopy_trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{builtin_pair, make_hopf_pair};

    #[test]
    fn hopf_projections_collide() {
        let pair = make_hopf_pair(1.0, 128).unwrap();
        for m in [1usize, 2] {
            let probe = projection_probe(&pair, m).unwrap();
            assert!(!probe.report.separated, "m = {m}");
            // the homotopy starts at the pair's own gap and ends at the
            // projected gap, which sits near zero
            let first = probe.homotopy_trace.first().unwrap();
            let last = probe.homotopy_trace.last().unwrap();
            assert!((first.min_gap - pair.min_gap).abs() < 1e-12);
            assert!(last.min_gap < 0.1, "final gap {}", last.min_gap);
        }
    }

    #[test]
    fn separated_control_stays_apart_on_kept_axis() {
        let pair = builtin_pair("far-separated", 64).unwrap();
        let probe = projection_probe(&pair, 1).unwrap();
        // the x-axis separates the two circles by construction
        assert!(probe.report.separated);
        assert!(probe.homotopy_trace.iter().all(|p| p.min_gap > 1.0));
    }

    #[test]
    fn rejects_bad_target_dims() {
        let pair = make_hopf_pair(1.0, 16).unwrap();
        assert!(projection_probe(&pair, 0).is_err());
        assert!(projection_probe(&pair, 3).is_err());
    }
}
