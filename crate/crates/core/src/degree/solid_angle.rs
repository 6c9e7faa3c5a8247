//! Degree of the radial map from a triangulated sphere sample about a
//! point, by signed solid-angle summation over the simplices.
//!
//! In R^3 each triangle contributes its exact signed solid angle (the
//! van Oosterom-Strackee formula), so the sum over a closed surface is an
//! exact multiple of 4pi up to rounding. In R^4 the solid angle of a
//! tetrahedral cone has no elementary closed form; each projected simplex
//! is refined geodesically a few levels and the leaves use the flat-simplex
//! approximation det/3!, giving an O(h^2) residual that the report exposes.

use std::f64::consts::PI;

use rand::Rng as _;
use rand::SeedableRng as _;

use crate::degree::{winding_number, DegreeMethod, DegreeReport};
use crate::error::{Error, Result};
use crate::geometry::{EmbeddedPair, Parametrization};
use crate::linalg::{det3, det4, dot, norm, solve_in_place, sub};

/// Geodesic refinement depth for the R^4 leaves.
const TET_REFINE_DEPTH: usize = 3;

fn unit_ray(p: &[f64], from: &[f64]) -> Result<Vec<f64>> {
    let r = sub(p, from);
    let n = norm(&r);
    if n < 1e-9 {
        return Err(Error::GapCollapse { gap: n, limit: 1e-9 });
    }
    Ok(r.iter().map(|x| x / n).collect())
}

/// Signed solid angle of the spherical triangle (u1, u2, u3), vertices on
/// the unit sphere. Positive when the vertex order is positively oriented
/// seen from inside.
pub(crate) fn triangle_solid_angle(u1: &[f64], u2: &[f64], u3: &[f64]) -> f64 {
    let num = det3(u1, u2, u3);
    let den = 1.0 + dot(u1, u2) + dot(u2, u3) + dot(u3, u1);
    2.0 * num.atan2(den)
}

fn geodesic_mid(a: &[f64], b: &[f64]) -> Vec<f64> {
    let m: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    let n = norm(&m);
    m.iter().map(|x| x / n).collect()
}

/// Signed spherical volume of the geodesic tetrahedron on S^3 with the
/// given unit vertices, by recursive refinement down to flat leaves.
fn tet_solid_angle(u: [&[f64]; 4], depth: usize) -> f64 {
    if depth == 0 {
        return det4(u[0], u[1], u[2], u[3]) / 6.0;
    }
    let m01 = geodesic_mid(u[0], u[1]);
    let m02 = geodesic_mid(u[0], u[2]);
    let m03 = geodesic_mid(u[0], u[3]);
    let m12 = geodesic_mid(u[1], u[2]);
    let m13 = geodesic_mid(u[1], u[3]);
    let m23 = geodesic_mid(u[2], u[3]);
    let d = depth - 1;
    // corner cells keep the parent's vertex slots; the central octahedron
    // cells need the (m13, m02, ..) diagonal order to preserve orientation
    tet_solid_angle([u[0], &m01, &m02, &m03], d)
        + tet_solid_angle([&m01, u[1], &m12, &m13], d)
        + tet_solid_angle([&m02, &m12, u[2], &m23], d)
        + tet_solid_angle([&m03, &m13, &m23, u[3]], d)
        + tet_solid_angle([&m13, &m02, &m01, &m03], d)
        + tet_solid_angle([&m13, &m02, &m03, &m23], d)
        + tet_solid_angle([&m13, &m02, &m23, &m12], d)
        + tet_solid_angle([&m13, &m02, &m12, &m01], d)
}

/// Degree of the Gauss map for a sphere/point pair: side A samples
/// S^(n-1), side B is a single point, 2 <= n <= 4.
pub fn sphere_point_degree(pair: &EmbeddedPair) -> Result<DegreeReport> {
    if !pair.side_b.is_singleton() {
        return Err(Error::InvalidGeometry(
            "sphere-point degree needs a singleton side B".into(),
        ));
    }
    let p = &pair.side_b.points[0];
    let n = pair.ambient_dim();
    match n {
        2 => {
            let mut report = winding_number(&pair.side_a, p)?;
            report.samples_used = pair.side_a.len() + 1;
            Ok(report)
        }
        3 | 4 => {
            let simplices = match &pair.side_a.parametrization {
                Some(Parametrization::Sphere { simplices, .. }) => simplices,
                _ => {
                    return Err(Error::InvalidGeometry(
                        "side A carries no sphere triangulation".into(),
                    ))
                }
            };
            if pair.min_gap < 1e-9 {
                return Err(Error::GapCollapse { gap: pair.min_gap, limit: 1e-9 });
            }
            let rays: Vec<Vec<f64>> = pair
                .side_a
                .points
                .iter()
                .map(|q| unit_ray(q, p))
                .collect::<Result<_>>()?;
            let mut total = 0.0;
            if n == 3 {
                for s in simplices {
                    total += triangle_solid_angle(&rays[s[0]], &rays[s[1]], &rays[s[2]]);
                }
                total /= 4.0 * PI;
            } else {
                for s in simplices {
                    total += tet_solid_angle(
                        [&rays[s[0]], &rays[s[1]], &rays[s[2]], &rays[s[3]]],
                        TET_REFINE_DEPTH,
                    );
                }
                total /= 2.0 * PI * PI;
            }
            let estimate = pair.side_a.orientation as f64 * total;
            DegreeReport::from_estimate(
                estimate,
                DegreeMethod::SolidAngleSimplicial,
                pair.side_a.len() + 1,
            )
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Regular-value probes of the Gauss map: unit directions along which ray
/// crossings of the triangulated sphere are counted with signs. Each
/// generic probe direction recovers the degree independently of the
/// solid-angle summation, which makes the probe a cheap cross-check.
#[derive(Clone, Debug)]
pub struct GaussMapProbe {
    pub pair: EmbeddedPair,
    pub direction_samples: Vec<Vec<f64>>,
}

impl GaussMapProbe {
    pub fn new(pair: &EmbeddedPair, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::EmptyInput("probe directions".into()));
        }
        let n = pair.ambient_dim();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut dirs = Vec::with_capacity(count);
        while dirs.len() < count {
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let len = norm(&v);
            if len > 1e-3 && len <= 1.0 {
                dirs.push(v.iter().map(|x| x / len).collect());
            }
        }
        Ok(GaussMapProbe { pair: pair.clone(), direction_samples: dirs })
    }

    /// Signed count of simplex crossings of the ray from side B's point
    /// along each probe direction. For a sphere/point pair every count
    /// equals the degree when the probe is a regular value.
    pub fn signed_crossing_counts(&self) -> Result<Vec<i64>> {
        if !self.pair.side_b.is_singleton() {
            return Err(Error::InvalidGeometry(
                "ray probes need a singleton side B".into(),
            ));
        }
        let n = self.pair.ambient_dim();
        let simplices = match &self.pair.side_a.parametrization {
            Some(Parametrization::Sphere { simplices, .. }) => simplices.clone(),
            Some(Parametrization::ClosedCurve { .. }) if n == 2 => {
                let len = self.pair.side_a.len();
                (0..len).map(|i| vec![i, (i + 1) % len]).collect()
            }
            _ => {
                return Err(Error::InvalidGeometry(
                    "side A carries no triangulation for ray probing".into(),
                ))
            }
        };
        let p = &self.pair.side_b.points[0];
        let pts = &self.pair.side_a.points;
        let mut counts = Vec::with_capacity(self.direction_samples.len());
        for u in &self.direction_samples {
            let mut count = 0i64;
            for s in &simplices {
                // solve sum_i lambda_i (w_i - p) - t u = 0, sum lambda = 1
                let mut m: Vec<Vec<f64>> = (0..=n)
                    .map(|row| {
                        let mut r = Vec::with_capacity(n + 1);
                        if row < n {
                            for &vi in s.iter() {
                                r.push(pts[vi][row] - p[row]);
                            }
                            r.push(-u[row]);
                        } else {
                            r.extend(std::iter::repeat_n(1.0, n));
                            r.push(0.0);
                        }
                        r
                    })
                    .collect();
                let mut rhs = vec![0.0; n + 1];
                rhs[n] = 1.0;
                let Some(sol) = solve_in_place(&mut m, &mut rhs) else {
                    continue;
                };
                let t = sol[n];
                if t <= 0.0 || sol[..n].iter().any(|&l| l <= 0.0) {
                    continue;
                }
                let sign = match n {
                    2 => crate::linalg::det2(
                        &sub(&pts[s[0]], p),
                        &sub(&pts[s[1]], p),
                    ),
                    3 => det3(
                        &sub(&pts[s[0]], p),
                        &sub(&pts[s[1]], p),
                        &sub(&pts[s[2]], p),
                    ),
                    4 => det4(
                        &sub(&pts[s[0]], p),
                        &sub(&pts[s[1]], p),
                        &sub(&pts[s[2]], p),
                        &sub(&pts[s[3]], p),
                    ),
                    d => return Err(Error::UnsupportedDimension(d)),
                };
                count += if sign >= 0.0 { 1 } else { -1 };
            }
            counts.push(count * self.pair.side_a.orientation as i64);
        }
        Ok(counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_sphere_point_pair;

    #[test]
    fn s2_degree_one_inside_zero_outside() {
        let inside = make_sphere_point_pair(3, &[0.0; 3], 500).unwrap();
        let r = sphere_point_degree(&inside).unwrap();
        assert_eq!(r.rounded, 1);
        assert!(r.residual < 1e-10, "residual {}", r.residual);

        let off_center = make_sphere_point_pair(3, &[0.3, -0.2, 0.1], 500).unwrap();
        assert_eq!(sphere_point_degree(&off_center).unwrap().rounded, 1);

        let outside = make_sphere_point_pair(3, &[2.0, 0.0, 0.0], 500).unwrap();
        let r = sphere_point_degree(&outside).unwrap();
        assert_eq!(r.rounded, 0);
    }

    #[test]
    fn s1_degree_via_winding() {
        let inside = make_sphere_point_pair(2, &[0.5, 0.0], 256).unwrap();
        let r = sphere_point_degree(&inside).unwrap();
        assert_eq!(r.rounded, 1);
        assert_eq!(r.method, DegreeMethod::WindingAngleSum);
    }

    #[test]
    fn s3_degree_one_inside_zero_outside() {
        let inside = make_sphere_point_pair(4, &[0.1, 0.0, -0.2, 0.0], 400).unwrap();
        let r = sphere_point_degree(&inside).unwrap();
        assert_eq!(r.rounded, 1);
        assert_eq!(r.method, DegreeMethod::SolidAngleSimplicial);

        let outside = make_sphere_point_pair(4, &[0.0, 1.5, 0.0, 0.0], 400).unwrap();
        assert_eq!(sphere_point_degree(&outside).unwrap().rounded, 0);
    }

    #[test]
    fn ray_probe_agrees_with_solid_angle() {
        for (dim, offset) in [(3usize, vec![0.2, 0.1, 0.0]), (4, vec![0.0, 0.3, 0.0, 0.1])] {
            let pair = make_sphere_point_pair(dim, &offset, 300).unwrap();
            let probe = GaussMapProbe::new(&pair, 5, 42).unwrap();
            for d in &probe.direction_samples {
                assert!((norm(d) - 1.0).abs() < 1e-12);
            }
            let counts = probe.signed_crossing_counts().unwrap();
            let degree = sphere_point_degree(&pair).unwrap().rounded;
            assert!(counts.iter().all(|&c| c == degree), "{counts:?} vs {degree}");
        }
    }

    #[test]
    fn full_sphere_measures() {
        // the summed solid angle over the whole triangulation seen from
        // the center is the full sphere measure
        let pair3 = make_sphere_point_pair(3, &[0.0; 3], 200).unwrap();
        let r3 = sphere_point_degree(&pair3).unwrap();
        assert!((r3.estimate - 1.0).abs() < 1e-10);

        let pair4 = make_sphere_point_pair(4, &[0.0; 4], 200).unwrap();
        let r4 = sphere_point_degree(&pair4).unwrap();
        assert!((r4.estimate - 1.0).abs() < 2e-2, "estimate {}", r4.estimate);
    }
}
