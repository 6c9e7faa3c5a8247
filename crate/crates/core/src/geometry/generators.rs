//! Constructors for the link pairs and unlinked controls used throughout:
//! the canonical Hopf configuration, sphere/point pairs, and the Urysohn
//! target sample for the approximation experiments.

use crate::error::{Error, Result};
use crate::geometry::sphere_mesh::unit_sphere_mesh;
use crate::geometry::{EmbeddedPair, Parametrization, PointCloud};
use crate::linalg::norm;

use std::f64::consts::TAU;

/// Circle sampled uniformly in parameter; `frame` maps the planar
/// (cos, sin) coordinates into R^n.
fn circle_cloud(
    descriptor: String,
    samples: usize,
    frame: impl Fn(f64, f64) -> Vec<f64>,
) -> Result<PointCloud> {
    let params: Vec<f64> = (0..samples).map(|j| j as f64 / samples as f64).collect();
    let points: Vec<Vec<f64>> = params
        .iter()
        .map(|&t| {
            let angle = TAU * t;
            frame(angle.cos(), angle.sin())
        })
        .collect();
    let dim = points[0].len();
    PointCloud::with_parametrization(
        dim,
        points,
        Some(Parametrization::ClosedCurve { descriptor, params }),
        1,
    )
}

/// Canonical linked pair: circle A of radius `radius` in the xy-plane
/// about the origin, circle B of the same radius in the xz-plane about
/// (radius, 0, 0), so each passes through the other's center. B is
/// traversed so the pair's linking number is +1.
pub fn make_hopf_pair(radius: f64, samples: usize) -> Result<EmbeddedPair> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    if samples < 8 {
        return Err(Error::InvalidParameter(format!(
            "hopf pair needs at least 8 samples per side for reliable degree estimation, got {samples}"
        )));
    }
    let side_a = circle_cloud(
        format!("circle(center=(0,0,0), radius={radius}, plane=xy, samples={samples})"),
        samples,
        |c, s| vec![radius * c, radius * s, 0.0],
    )?;
    let side_b = circle_cloud(
        format!("circle(center=({radius},0,0), radius={radius}, plane=xz, samples={samples})"),
        samples,
        |c, s| vec![radius + radius * c, 0.0, -radius * s],
    )?;
    EmbeddedPair::new(side_a, side_b, Some(1))
}

/// Sampled unit sphere S^(dim-1) paired with the single point
/// `center_offset`. Expected degree is 1 when the point lies inside the
/// sphere and 0 outside; points on the sphere (within 1e-9) are rejected.
pub fn make_sphere_point_pair(
    dim: usize,
    center_offset: &[f64],
    samples: usize,
) -> Result<EmbeddedPair> {
    if dim < 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    if center_offset.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: center_offset.len() });
    }
    let r = norm(center_offset);
    if (r - 1.0).abs() < 1e-9 {
        return Err(Error::InvalidGeometry(format!(
            "point at distance {r} lies on the unit sphere"
        )));
    }
    let side_a = unit_sphere_cloud(dim, samples)?;
    let side_b = PointCloud::with_parametrization(
        dim,
        vec![center_offset.to_vec()],
        Some(Parametrization::Singleton { descriptor: format!("point(offset={center_offset:?})") }),
        1,
    )?;
    let expected = if r < 1.0 { 1 } else { 0 };
    EmbeddedPair::new(side_a, side_b, Some(expected))
}

/// Unit sphere sample: an ordered polygon for dim 2, a triangulated mesh
/// for dims 3 and 4.
pub fn unit_sphere_cloud(dim: usize, samples: usize) -> Result<PointCloud> {
    match dim {
        2 => {
            let samples = samples.max(8);
            circle_cloud(
                format!("circle(center=(0,0), radius=1, samples={samples})"),
                samples,
                |c, s| vec![c, s],
            )
        }
        3 | 4 => {
            let mesh = unit_sphere_mesh(dim, samples.max(dim + 1))?;
            PointCloud::with_parametrization(
                dim,
                mesh.vertices,
                Some(Parametrization::Sphere {
                    descriptor: format!("unit-sphere(dim={dim}, samples>={samples})"),
                    simplices: mesh.simplices,
                }),
                1,
            )
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// The sphere/center sample with the Urysohn-style target values used by
/// the approximation experiments: the target function is 0 at the origin
/// and `2 * delta` on the unit sphere.
#[derive(Clone, Debug)]
pub struct BallBoundarySample {
    pub sphere: PointCloud,
    pub center: PointCloud,
    pub sphere_target: f64,
    pub center_target: f64,
}

pub fn sample_ball_boundary_and_center(
    dim: usize,
    delta: f64,
    samples: usize,
) -> Result<BallBoundarySample> {
    if dim < 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    let sphere = unit_sphere_cloud(dim, samples)?;
    let center = PointCloud::with_parametrization(
        dim,
        vec![vec![0.0; dim]],
        Some(Parametrization::Singleton { descriptor: "origin".into() }),
        1,
    )?;
    Ok(BallBoundarySample { sphere, center, sphere_target: 2.0 * delta, center_target: 0.0 })
}

/// Far-separated control: hopf geometry with side B translated by
/// (offset, 0, 0); unlinked, degree 0.
fn far_separated_pair(radius: f64, samples: usize, offset: f64) -> Result<EmbeddedPair> {
    let hopf = make_hopf_pair(radius, samples)?;
    let side_b = hopf.side_b.map_points(|p| vec![p[0] + offset, p[1], p[2]])?;
    EmbeddedPair::new(hopf.side_a, side_b, Some(0))
}

/// Side-by-side circles in orthogonal planes; disjoint and unlinked but
/// not far apart.
fn unlinked_pair(radius: f64, samples: usize) -> Result<EmbeddedPair> {
    let side_a = circle_cloud(
        format!("circle(center=(0,0,0), radius={radius}, plane=xy, samples={samples})"),
        samples,
        |c, s| vec![radius * c, radius * s, 0.0],
    )?;
    let cx = 3.0 * radius;
    let side_b = circle_cloud(
        format!("circle(center=({cx},0,0), radius={radius}, plane=xz, samples={samples})"),
        samples,
        |c, s| vec![cx + radius * c, 0.0, -radius * s],
    )?;
    EmbeddedPair::new(side_a, side_b, Some(0))
}

fn hopf_reflected(radius: f64, samples: usize) -> Result<EmbeddedPair> {
    let hopf = make_hopf_pair(radius, samples)?;
    let reflect = super::Homeomorphism::affine(
        crate::linalg::Matrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, -1.0],
        ])?,
        vec![0.0; 3],
    )?;
    super::apply_homeomorphism(&reflect, &hopf)
}

/// Builtin pair names accepted by [`builtin_pair`] and the CLI.
pub fn builtin_pair_names() -> Vec<&'static str> {
    vec![
        "hopf",
        "hopf-reflected",
        "unlinked",
        "far-separated",
        "sphere-point(2)",
        "sphere-point(3)",
        "sphere-point(4)",
    ]
}

/// Construct a builtin pair by name with `samples` points per side.
/// Sphere/point pairs accept the ambient dimension in parentheses.
pub fn builtin_pair(name: &str, samples: usize) -> Result<EmbeddedPair> {
    match name.trim() {
        "hopf" => make_hopf_pair(1.0, samples),
        "hopf-reflected" => hopf_reflected(1.0, samples),
        "unlinked" => unlinked_pair(1.0, samples),
        "far-separated" => far_separated_pair(1.0, samples, 10.0),
        other => {
            if let Some(rest) = other.strip_prefix("sphere-point(") {
                if let Some(dim_str) = rest.strip_suffix(')') {
                    let dim: usize = dim_str.trim().parse().map_err(|_| {
                        Error::InvalidParameter(format!("bad sphere-point dimension `{dim_str}`"))
                    })?;
                    return make_sphere_point_pair(dim, &vec![0.0; dim], samples);
                }
            }
            Err(Error::UnknownName { kind: "builtin pair", name: other.to_string() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf_pair_shape() {
        let pair = make_hopf_pair(1.0, 64).unwrap();
        assert_eq!(pair.ambient_dim(), 3);
        assert_eq!(pair.expected_degree, Some(1));
        assert!(pair.min_gap > 0.0);
        assert_eq!(pair.side_a.len(), 64);
        assert!(pair.side_a.is_closed_curve());
        // side A lies in the xy-plane, side B in the xz-plane
        assert!(pair.side_a.points.iter().all(|p| p[2] == 0.0));
        assert!(pair.side_b.points.iter().all(|p| p[1] == 0.0));
    }

    #[test]
    fn hopf_rejects_small_sampling() {
        assert!(make_hopf_pair(1.0, 7).is_err());
        assert!(make_hopf_pair(0.0, 64).is_err());
        assert!(make_hopf_pair(-1.0, 64).is_err());
    }

    #[test]
    fn sphere_point_expected_degrees() {
        let inside = make_sphere_point_pair(3, &[0.0, 0.0, 0.0], 200).unwrap();
        assert_eq!(inside.expected_degree, Some(1));
        let outside = make_sphere_point_pair(3, &[2.0, 0.0, 0.0], 200).unwrap();
        assert_eq!(outside.expected_degree, Some(0));
        // point on the sphere rejected
        assert!(make_sphere_point_pair(3, &[1.0, 0.0, 0.0], 200).is_err());
        assert!(make_sphere_point_pair(3, &[1.0 + 5e-10, 0.0, 0.0], 200).is_err());
        assert!(make_sphere_point_pair(1, &[0.5], 16).is_err());
        assert!(make_sphere_point_pair(5, &[0.0; 5], 16).is_err());
    }

    #[test]
    fn ball_boundary_targets() {
        let s = sample_ball_boundary_and_center(3, 0.1, 500).unwrap();
        assert!((s.sphere_target - 0.2).abs() < 1e-15);
        assert_eq!(s.center_target, 0.0);
        assert!(s.sphere.len() >= 500);
        let s2 = sample_ball_boundary_and_center(2, 0.5, 64).unwrap();
        assert!((s2.sphere_target - 1.0).abs() < 1e-15);
        let s4 = sample_ball_boundary_and_center(4, 0.1, 200).unwrap();
        assert!((s4.sphere_target - 0.2).abs() < 1e-15);
        assert_eq!(s4.sphere.ambient_dim, 4);
    }

    #[test]
    fn builtin_names_all_construct() {
        for name in builtin_pair_names() {
            let pair = builtin_pair(name, 64).unwrap();
            assert!(pair.min_gap > 0.0, "{name} has positive gap");
        }
        assert!(builtin_pair("nope", 64).is_err());
        assert!(builtin_pair("sphere-point(9)", 64).is_err());
    }

    #[test]
    fn min_gap_monotone_under_nested_refinement() {
        // doubling a uniform parameter grid keeps the old samples, so the
        // sampled gap can only shrink toward the continuum gap
        let mut prev = f64::INFINITY;
        for samples in [16usize, 32, 64, 128, 256] {
            let pair = make_hopf_pair(1.0, samples).unwrap();
            assert!(pair.min_gap <= prev + 1e-9);
            prev = pair.min_gap;
        }
    }
}
