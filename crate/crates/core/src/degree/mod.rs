//! Topological degree of the Gauss map xi(x, y) = (x - y)/||x - y|| for
//! the two pair shapes the library generates: closed curve pairs in R^3
//! (linking number via the discrete Gauss integral) and sphere/point pairs
//! in R^2..R^4 (winding angles, simplicial solid angles).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::EmbeddedPair;
use crate::linalg::{norm, sub};

mod linking;
mod projection;
mod solid_angle;
mod winding;

pub use linking::linking_number;
pub use projection::{projection_probe, HomotopyTracePoint, ProjectionProbe};
pub use solid_angle::{sphere_point_degree, GaussMapProbe};
pub use winding::winding_number;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeMethod {
    GaussLinkingIntegral,
    WindingAngleSum,
    SolidAngleSimplicial,
}

impl std::fmt::Display for DegreeMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DegreeMethod::GaussLinkingIntegral => "gauss-linking-integral",
            DegreeMethod::WindingAngleSum => "winding-angle-sum",
            DegreeMethod::SolidAngleSimplicial => "solid-angle-simplicial",
        };
        f.write_str(s)
    }
}

/// A degree estimate together with its distance from the nearest integer.
/// Construction fails when the residual reaches 0.5 — the half-integer
/// boundary where an integer-valued degree becomes meaningless — so a
/// `DegreeReport` is always a usable value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub estimate: f64,
    pub rounded: i64,
    pub residual: f64,
    pub method: DegreeMethod,
    pub samples_used: usize,
}

impl DegreeReport {
    pub fn from_estimate(estimate: f64, method: DegreeMethod, samples_used: usize) -> Result<Self> {
        if !estimate.is_finite() {
            return Err(Error::NonFinite("degree estimate".into()));
        }
        let rounded = estimate.round();
        let residual = (estimate - rounded).abs();
        if residual >= 0.5 {
            return Err(Error::ResidualTooLarge { estimate, residual });
        }
        Ok(DegreeReport { estimate, rounded: rounded as i64, residual, method, samples_used })
    }
}

/// The Gauss map evaluated at one sample pair: the unit vector from
/// side B's j-th point toward side A's i-th point.
pub fn gauss_map(pair: &EmbeddedPair, i: usize, j: usize) -> Result<Vec<f64>> {
    let a = pair.side_a.points.get(i).ok_or(Error::InvalidParameter(format!(
        "side_a index {i} out of range ({} points)",
        pair.side_a.len()
    )))?;
    let b = pair.side_b.points.get(j).ok_or(Error::InvalidParameter(format!(
        "side_b index {j} out of range ({} points)",
        pair.side_b.len()
    )))?;
    let d = sub(a, b);
    let n = norm(&d);
    if n < 1e-12 {
        return Err(Error::GapCollapse { gap: n, limit: 1e-12 });
    }
    Ok(d.iter().map(|x| x / n).collect())
}

/// Dispatch to the degree method matching the pair's shape: sphere/point
/// pairs go to [`sphere_point_degree`], curve pairs in R^3 to
/// [`linking_number`].
pub fn degree_of(pair: &EmbeddedPair) -> Result<DegreeReport> {
    if pair.side_b.is_singleton() && !pair.side_a.is_singleton() {
        return sphere_point_degree(pair);
    }
    if pair.ambient_dim() == 3
        && pair.side_a.is_closed_curve()
        && pair.side_b.is_closed_curve()
    {
        return linking_number(pair);
    }
    Err(Error::InvalidGeometry(
        "no degree method for this pair shape (need curve-curve in R^3 or sphere-point)".into(),
    ))
}
