//! Minimum enclosing balls for separation certificates: exact intervals in
//! 1-D, Welzl's algorithm in 2-D/3-D, and a Ritter-style bounding sphere as
//! a conservative fallback for higher dimensions or very large clouds
//! (still a valid certificate, just not minimal).

use rand::seq::SliceRandom as _;
use rand::SeedableRng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dist, dot, solve_in_place, sub};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, p: &[f64], slack: f64) -> bool {
        dist(&self.center, p) <= self.radius + slack
    }

    /// Disjointness with a relative safety margin, so touching sets never
    /// pass as separated on rounding noise.
    pub fn is_disjoint_from(&self, other: &Ball) -> bool {
        let sum = self.radius + other.radius;
        dist(&self.center, &other.center) > sum + 1e-9 * (1.0 + sum)
    }
}

const WELZL_POINT_LIMIT: usize = 20_000;

pub fn min_enclosing_ball(points: &[Vec<f64>]) -> Result<Ball> {
    if points.is_empty() {
        return Err(Error::EmptyInput("enclosing ball of no points".into()));
    }
    let dim = points[0].len();
    match dim {
        0 => Err(Error::UnsupportedDimension(0)),
        1 => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for p in points {
                lo = lo.min(p[0]);
                hi = hi.max(p[0]);
            }
            Ok(Ball { center: vec![0.5 * (lo + hi)], radius: 0.5 * (hi - lo) })
        }
        2 | 3 if points.len() <= WELZL_POINT_LIMIT => Ok(welzl(points, dim)),
        _ => Ok(ritter(points)),
    }
}

fn welzl(points: &[Vec<f64>], dim: usize) -> Ball {
    let mut refs: Vec<&Vec<f64>> = points.iter().collect();
    // deterministic shuffle: expected-linear behavior without entropy
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    refs.shuffle(&mut rng);
    let mut boundary: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    let ball = welzl_rec(&refs, refs.len(), &mut boundary, dim);
    // snug the radius to the farthest point so containment never fails
    // by a rounding hair
    let max_d = points.iter().map(|p| dist(&ball.center, p)).fold(0.0, f64::max);
    Ball { center: ball.center, radius: ball.radius.max(max_d) }
}

fn welzl_rec(pts: &[&Vec<f64>], n: usize, boundary: &mut Vec<Vec<f64>>, dim: usize) -> Ball {
    if n == 0 || boundary.len() == dim + 1 {
        return ball_from_boundary(boundary, dim);
    }
    let p = pts[n - 1];
    let b = welzl_rec(pts, n - 1, boundary, dim);
    if b.radius >= 0.0 && b.contains(p, 1e-10 * (1.0 + b.radius)) {
        return b;
    }
    boundary.push(p.clone());
    let b = welzl_rec(pts, n - 1, boundary, dim);
    boundary.pop();
    b
}

/// Smallest ball with all boundary points on its surface. Radius -1 marks
/// "no ball yet" for the empty boundary; affinely dependent boundaries
/// fall back to dropping their oldest point.
fn ball_from_boundary(boundary: &[Vec<f64>], dim: usize) -> Ball {
    match boundary.len() {
        0 => Ball { center: vec![0.0; dim], radius: -1.0 },
        1 => Ball { center: boundary[0].clone(), radius: 0.0 },
        k => {
            let p0 = &boundary[0];
            let spans: Vec<Vec<f64>> = boundary[1..].iter().map(|p| sub(p, p0)).collect();
            let mut gram: Vec<Vec<f64>> = spans
                .iter()
                .map(|vi| spans.iter().map(|vj| dot(vi, vj)).collect())
                .collect();
            let mut rhs: Vec<f64> = spans.iter().map(|v| 0.5 * dot(v, v)).collect();
            match solve_in_place(&mut gram, &mut rhs) {
                Some(coeffs) => {
                    let mut center = p0.clone();
                    for (c, v) in coeffs.iter().zip(&spans) {
                        for (ci, vi) in center.iter_mut().zip(v) {
                            *ci += c * vi;
                        }
                    }
                    let radius = dist(&center, p0);
                    Ball { center, radius }
                }
                None => ball_from_boundary(&boundary[1..k], dim),
            }
        }
    }
}

/// Ritter's two-pass bounding sphere plus a final snugging pass.
fn ritter(points: &[Vec<f64>]) -> Ball {
    let p0 = &points[0];
    let p1 = points
        .iter()
        .max_by(|a, b| dist(p0, a).total_cmp(&dist(p0, b)))
        .unwrap();
    let p2 = points
        .iter()
        .max_by(|a, b| dist(p1, a).total_cmp(&dist(p1, b)))
        .unwrap();
    let mut center: Vec<f64> = p1.iter().zip(p2.iter()).map(|(a, b)| 0.5 * (a + b)).collect();
    let mut radius = 0.5 * dist(p1, p2);
    for p in points {
        let d = dist(&center, p);
        if d > radius {
            let new_radius = 0.5 * (radius + d);
            // slide the center toward p so both p and the old ball fit
            let k = (d - new_radius) / d;
            for (c, x) in center.iter_mut().zip(p) {
                *c += k * (x - *c);
            }
            radius = new_radius;
        }
    }
    let max_d = points.iter().map(|p| dist(&center, p)).fold(0.0, f64::max);
    Ball { center, radius: radius.max(max_d) }
}
