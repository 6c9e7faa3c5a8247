//! Activation flows as group homotopies: the autonomous ODE
//! dx/dt = mu(x) - x integrated with fixed-step RK4, its compactified
//! homotopy H(x, s) = phi(x, s/(1-s)) with the activation itself as the
//! s = 1 limit map, the semigroup-law check, and link-preservation traces
//! along the homotopy.

use serde::{Deserialize, Serialize};

use crate::activation::ActivationKind;
use crate::degree::degree_of;
use crate::error::{Error, Result};
use crate::geometry::{min_inter_gap, EmbeddedPair};
use crate::linalg::dist;

/// Durations are clamped here when compactified time approaches s = 1;
/// e^-40 sits far below every tolerance in use.
pub const MAX_FLOW_TIME: f64 = 40.0;

/// Default RK4 step. The field mu(x) - x is globally Lipschitz (constant
/// at most 2 for the supported activations), so a fixed step keeps the
/// integration deterministic with known error order.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Largest admissible step size.
pub const MAX_STEP: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    Rk4,
}

/// Trajectory bookkeeping for one flowed point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlowState {
    pub position: Vec<f64>,
    pub time: f64,
    pub step_size: f64,
    pub integrator: Integrator,
}

impl FlowState {
    pub fn new(position: Vec<f64>, step_size: f64) -> Result<Self> {
        if !(step_size > 0.0 && step_size <= MAX_STEP) {
            return Err(Error::InvalidParameter(format!(
                "step size must lie in (0, {MAX_STEP}], got {step_size}"
            )));
        }
        if position.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("flow initial position".into()));
        }
        Ok(FlowState { position, time: 0.0, step_size, integrator: Integrator::Rk4 })
    }

    /// Advance by `duration` using steps of at most `step_size`.
    pub fn advance(&mut self, kind: &ActivationKind, duration: f64) -> Result<()> {
        if !(duration >= 0.0 && duration.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "flow duration must be finite and nonnegative, got {duration}"
            )));
        }
        if duration == 0.0 {
            return Ok(());
        }
        let steps = (duration / self.step_size).ceil() as usize;
        let h = duration / steps as f64;
        let n = self.position.len();
        let mut k1 = vec![0.0; n];
        let mut k2 = vec![0.0; n];
        let mut k3 = vec![0.0; n];
        let mut k4 = vec![0.0; n];
        let mut tmp = vec![0.0; n];
        for _ in 0..steps {
            field_into(kind, &self.position, &mut k1);
            for i in 0..n {
                tmp[i] = self.position[i] + 0.5 * h * k1[i];
            }
            field_into(kind, &tmp, &mut k2);
            for i in 0..n {
                tmp[i] = self.position[i] + 0.5 * h * k2[i];
            }
            field_into(kind, &tmp, &mut k3);
            for i in 0..n {
                tmp[i] = self.position[i] + h * k3[i];
            }
            field_into(kind, &tmp, &mut k4);
            for i in 0..n {
                self.position[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        self.time += duration;
        if self.position.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("flow state".into()));
        }
        Ok(())
    }
}

fn field_into(kind: &ActivationKind, x: &[f64], out: &mut [f64]) {
    for (o, &v) in out.iter_mut().zip(x) {
        *o = kind.value(v) - v;
    }
}

/// The vector field mu(x) - x, componentwise.
pub fn flow_field(kind: &ActivationKind, x: &[f64]) -> Vec<f64> {
    x.iter().map(|&v| kind.value(v) - v).collect()
}

/// phi(x0, t): RK4 integration of the activation flow.
pub fn integrate_flow(kind: &ActivationKind, x0: &[f64], t: f64, step: f64) -> Result<Vec<f64>> {
    let mut state = FlowState::new(x0.to_vec(), step)?;
    state.advance(kind, t)?;
    Ok(state.position)
}

/// H(x, s) = phi(x, s/(1-s)) for s < 1; the activation itself at s = 1.
pub fn compactified_homotopy(kind: &ActivationKind, x: &[f64], s: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!("homotopy time must lie in [0, 1], got {s}")));
    }
    if s >= 1.0 {
        return Ok(kind.apply(x));
    }
    let t = (s / (1.0 - s)).min(MAX_FLOW_TIME);
    integrate_flow(kind, x, t, DEFAULT_STEP)
}

/// Largest violation of the semigroup law phi(x, t1 + t2) =
/// phi(phi(x, t1), t2) over the given points and time pairs.
pub fn check_group_law(
    kind: &ActivationKind,
    xs: &[Vec<f64>],
    pairs: &[(f64, f64)],
    step: f64,
) -> Result<f64> {
    for &(t1, t2) in pairs {
        if t1 < 0.0 || t2 < 0.0 || !(t1 + t2).is_finite() {
            return Err(Error::InvalidParameter(format!(
                "group-law times must be nonnegative and finite, got ({t1}, {t2})"
            )));
        }
    }
    let mut worst = 0.0f64;
    for x in xs {
        for &(t1, t2) in pairs {
            let direct = integrate_flow(kind, x, t1 + t2, step)?;
            let first = integrate_flow(kind, x, t1, step)?;
            let composed = integrate_flow(kind, &first, t2, step)?;
            worst = worst.max(dist(&direct, &composed));
        }
    }
    Ok(worst)
}

/// One row of a link-preservation trace: the flowed pair's inter-side gap
/// at homotopy time `s`, and the recomputed degree when the gap is wide
/// enough (above ten times the flowed clouds' sampling resolution) for the
/// estimate to be trustworthy.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceRow {
    pub s: f64,
    pub min_gap: f64,
    pub degree_estimate: Option<f64>,
    pub degree_rounded: Option<i64>,
}

/// Flow both sides of a pair through the compactified homotopy and record
/// the Prop-style dichotomy data: either the gap collapses at some s or
/// the degree stays put.
pub fn homotopy_link_preservation(
    kind: &ActivationKind,
    pair: &EmbeddedPair,
    s_grid: &[f64],
) -> Result<Vec<TraceRow>> {
    let mut rows = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let side_a = pair.side_a.map_points_fallible(|p| compactified_homotopy(kind, p, s))?;
        let side_b = pair.side_b.map_points_fallible(|p| compactified_homotopy(kind, p, s))?;
        let (gap, _) = min_inter_gap(&side_a, &side_b);
        let resolution = side_a.sampling_resolution().max(side_b.sampling_resolution());
        let mut degree_estimate = None;
        let mut degree_rounded = None;
        if gap > 10.0 * resolution {
            if let Ok(flowed) = EmbeddedPair::new(side_a, side_b, pair.expected_degree) {
                if let Ok(report) = degree_of(&flowed) {
                    degree_estimate = Some(report.estimate);
                    degree_rounded = Some(report.rounded);
                }
            }
        }
        rows.push(TraceRow { s, min_gap: gap, degree_estimate, degree_rounded });
    }
    Ok(rows)
}

/// Trace CSV: `s,min_gap,degree_estimate`, empty degree cell when the gap
/// was too small to recompute it.
pub fn write_trace_csv(rows: &[TraceRow], path: &std::path::Path) -> Result<()> {
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                format!("{}", r.s),
                format!("{}", r.min_gap),
                r.degree_estimate.map_or(String::new(), |d| format!("{d}")),
            ]
        })
        .collect();
    crate::output::write_csv(path, &["s", "min_gap", "degree_estimate"], &csv_rows)
}

/// Evenly spaced grid over [0, 1] including both endpoints.
pub fn unit_grid(len: usize) -> Vec<f64> {
    if len <= 1 {
        return vec![0.0];
    }
    (0..len).map(|i| i as f64 / (len - 1) as f64).collect()
}
