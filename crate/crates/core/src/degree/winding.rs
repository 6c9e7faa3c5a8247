//! Winding number of a closed planar polygon about a point, by summing
//! signed angle increments. Exact for polygons (up to rounding) whenever
//! consecutive samples subtend less than a half turn.

use std::f64::consts::TAU;

use crate::degree::{DegreeMethod, DegreeReport};
use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::linalg::{det2, dot, norm, sub};

pub fn winding_number(curve: &PointCloud, center: &[f64]) -> Result<DegreeReport> {
    if curve.ambient_dim != 2 {
        return Err(Error::UnsupportedDimension(curve.ambient_dim));
    }
    if !curve.is_closed_curve() {
        return Err(Error::InvalidGeometry("winding number needs a closed curve".into()));
    }
    if center.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: center.len() });
    }

    let rays: Vec<Vec<f64>> = curve
        .points
        .iter()
        .map(|p| {
            let r = sub(p, center);
            let n = norm(&r);
            if n < 1e-9 {
                return Err(Error::GapCollapse { gap: n, limit: 1e-9 });
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;

    let n = rays.len();
    let mut total = 0.0;
    for i in 0..n {
        let u = &rays[i];
        let v = &rays[(i + 1) % n];
        total += det2(u, v).atan2(dot(u, v));
    }
    let estimate = curve.orientation as f64 * total / TAU;
    DegreeReport::from_estimate(estimate, DegreeMethod::WindingAngleSum, n)
}
