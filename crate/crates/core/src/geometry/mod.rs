//! Sampled embeddings of compact sets (curves, spheres, points) in R^n and
//! the disjoint pairs every other module consumes.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dist;

mod generators;
mod homeomorphism;
pub mod sphere_mesh;

pub use generators::{
    builtin_pair, builtin_pair_names, make_hopf_pair, make_sphere_point_pair,
    sample_ball_boundary_and_center, unit_sphere_cloud, BallBoundarySample,
};
pub use homeomorphism::{apply_homeomorphism, Homeomorphism, MonotoneMap};

/// Inter-side gaps below this are treated as coincident points.
pub const GAP_COLLAPSE_LIMIT: f64 = 1e-12;

/// How the points of a cloud arose. `descriptor` is a human-readable
/// provenance string ("circle(center=.., radius=.., samples=..)");
/// the structured fields are what the algorithms rely on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Parametrization {
    /// Closed curve: points ordered by strictly increasing parameter
    /// values in [0, 1).
    ClosedCurve { descriptor: String, params: Vec<f64> },
    /// Sampled (n-1)-sphere with an outward-oriented simplicial
    /// triangulation; each simplex holds `ambient_dim` vertex indices.
    Sphere { descriptor: String, simplices: Vec<Vec<usize>> },
    /// A single point.
    Singleton { descriptor: String },
}

impl Parametrization {
    pub fn descriptor(&self) -> &str {
        match self {
            Parametrization::ClosedCurve { descriptor, .. }
            | Parametrization::Sphere { descriptor, .. }
            | Parametrization::Singleton { descriptor } => descriptor,
        }
    }
}

/// Finite oriented sample of an embedded compact set in R^n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub ambient_dim: usize,
    /// +1 or -1: orientation of the underlying parametrized manifold
    /// relative to the recorded point order / simplex order.
    pub orientation: i8,
    pub parametrization: Option<Parametrization>,
    pub points: Vec<Vec<f64>>,
}

impl PointCloud {
    pub fn new(ambient_dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_parametrization(ambient_dim, points, None, 1)
    }

    pub fn with_parametrization(
        ambient_dim: usize,
        points: Vec<Vec<f64>>,
        parametrization: Option<Parametrization>,
        orientation: i8,
    ) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        if points.is_empty() {
            return Err(Error::EmptyInput("point cloud".into()));
        }
        if orientation != 1 && orientation != -1 {
            return Err(Error::InvalidParameter(format!(
                "orientation must be +1 or -1, got {orientation}"
            )));
        }
        for p in &points {
            if p.len() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, got: p.len() });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("point coordinates".into()));
            }
        }
        let cloud = PointCloud { ambient_dim, orientation, parametrization, points };
        cloud.validate_parametrization()?;
        Ok(cloud)
    }

    fn validate_parametrization(&self) -> Result<()> {
        match &self.parametrization {
            None => Ok(()),
            Some(Parametrization::Singleton { .. }) => {
                if self.points.len() != 1 {
                    return Err(Error::InvalidGeometry(format!(
                        "singleton parametrization with {} points",
                        self.points.len()
                    )));
                }
                Ok(())
            }
            Some(Parametrization::ClosedCurve { params, .. }) => {
                if self.points.len() < 3 {
                    return Err(Error::InvalidGeometry(
                        "curves need at least 3 samples".into(),
                    ));
                }
                if params.len() != self.points.len() {
                    return Err(Error::DimensionMismatch {
                        expected: self.points.len(),
                        got: params.len(),
                    });
                }
                for w in params.windows(2) {
                    if !(w[1] > w[0]) {
                        return Err(Error::InvalidGeometry(
                            "curve parameter values must strictly increase".into(),
                        ));
                    }
                }
                if params[0] < 0.0 || *params.last().unwrap() >= 1.0 {
                    return Err(Error::InvalidGeometry(
                        "curve parameters must lie in [0, 1)".into(),
                    ));
                }
                // pairwise distinct samples; adjacent (cyclically) checks
                // suffice for strictly monotone parametrizations of
                // embedded curves
                let n = self.points.len();
                for i in 0..n {
                    let j = (i + 1) % n;
                    if dist(&self.points[i], &self.points[j]) < GAP_COLLAPSE_LIMIT {
                        return Err(Error::InvalidGeometry(
                            "curve samples must be pairwise distinct".into(),
                        ));
                    }
                }
                Ok(())
            }
            Some(Parametrization::Sphere { simplices, .. }) => {
                let need = if self.ambient_dim >= 3 { 4 } else { 3 };
                if self.points.len() < need {
                    return Err(Error::InvalidGeometry(format!(
                        "sphere sample needs at least {need} points"
                    )));
                }
                if simplices.is_empty() {
                    return Err(Error::InvalidGeometry("sphere without simplices".into()));
                }
                for s in simplices {
                    if s.len() != self.ambient_dim {
                        return Err(Error::DimensionMismatch {
                            expected: self.ambient_dim,
                            got: s.len(),
                        });
                    }
                    if s.iter().any(|&i| i >= self.points.len()) {
                        return Err(Error::InvalidGeometry(
                            "simplex index out of range".into(),
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_closed_curve(&self) -> bool {
        matches!(self.parametrization, Some(Parametrization::ClosedCurve { .. }))
    }

    pub fn is_singleton(&self) -> bool {
        self.points.len() == 1
    }

    /// Map every point through `f`, carrying parametrization metadata and
    /// orientation along. The output dimension is taken from the first
    /// image point.
    pub fn map_points(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Result<PointCloud> {
        self.map_points_fallible(|p| Ok(f(p)))
    }

    /// [`map_points`](Self::map_points) for maps that can fail.
    ///
    /// Parametrization metadata only survives when the image still
    /// satisfies its invariants; a map that collapses curve samples or
    /// changes the ambient dimension under a triangulation produces a
    /// bare cloud instead (the image is no longer an embedding of that
    /// kind).
    pub fn map_points_fallible(
        &self,
        mut f: impl FnMut(&[f64]) -> Result<Vec<f64>>,
    ) -> Result<PointCloud> {
        let mut mapped = Vec::with_capacity(self.points.len());
        for p in &self.points {
            mapped.push(f(p)?);
        }
        let dim = mapped[0].len();
        match PointCloud::with_parametrization(
            dim,
            mapped.clone(),
            self.parametrization.clone(),
            self.orientation,
        ) {
            Ok(cloud) => Ok(cloud),
            Err(Error::NonFinite(e)) => Err(Error::NonFinite(e)),
            Err(_) => PointCloud::with_parametrization(dim, mapped, None, self.orientation),
        }
    }

    /// Largest nearest-neighbor spacing within the cloud: the sampling
    /// resolution used to scale separation thresholds. Zero for singletons.
    pub fn sampling_resolution(&self) -> f64 {
        let n = self.points.len();
        if n < 2 {
            return 0.0;
        }
        if self.ambient_dim == 1 {
            // nearest neighbors are adjacent in sorted order
            let mut xs: Vec<f64> = self.points.iter().map(|p| p[0]).collect();
            xs.sort_by(|a, b| a.total_cmp(b));
            let mut worst = 0.0f64;
            for i in 0..n {
                let left = if i > 0 { xs[i] - xs[i - 1] } else { f64::INFINITY };
                let right = if i + 1 < n { xs[i + 1] - xs[i] } else { f64::INFINITY };
                worst = worst.max(left.min(right));
            }
            return worst;
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut nearest = f64::INFINITY;
            for j in 0..n {
                if i != j {
                    nearest = nearest.min(dist(&self.points[i], &self.points[j]));
                }
            }
            worst = worst.max(nearest);
        }
        worst
    }

    /// CSV with header `x1,...,xn`, one point per row.
    pub fn to_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header: Vec<String> = (1..=self.ambient_dim).map(|i| format!("x{i}")).collect();
        writeln!(w, "{}", header.join(","))?;
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|x| format!("{x}")).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.to_csv(std::io::BufWriter::new(file))
    }
}

/// Minimum pairwise distance between two clouds, with the achieving
/// index pair.
pub fn min_inter_gap(a: &PointCloud, b: &PointCloud) -> (f64, (usize, usize)) {
    let mut best = f64::INFINITY;
    let mut arg = (0, 0);
    for (i, p) in a.points.iter().enumerate() {
        for (j, q) in b.points.iter().enumerate() {
            let d = dist(p, q);
            if d < best {
                best = d;
                arg = (i, j);
            }
        }
    }
    (best, arg)
}

/// Two disjoint point clouds with link metadata. `min_gap` is computed at
/// construction and must stay positive (the standing disjointness
/// assumption).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedPair {
    pub side_a: PointCloud,
    pub side_b: PointCloud,
    pub expected_degree: Option<i64>,
    pub min_gap: f64,
}

impl EmbeddedPair {
    pub fn new(
        side_a: PointCloud,
        side_b: PointCloud,
        expected_degree: Option<i64>,
    ) -> Result<Self> {
        if side_a.ambient_dim != side_b.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: side_a.ambient_dim,
                got: side_b.ambient_dim,
            });
        }
        let (min_gap, _) = min_inter_gap(&side_a, &side_b);
        if !(min_gap > GAP_COLLAPSE_LIMIT) {
            return Err(Error::GapCollapse { gap: min_gap, limit: GAP_COLLAPSE_LIMIT });
        }
        Ok(EmbeddedPair { side_a, side_b, expected_degree, min_gap })
    }

    pub fn ambient_dim(&self) -> usize {
        self.side_a.ambient_dim
    }

    pub fn to_json_file(&self, path: &Path) -> Result<()> {
        crate::output::write_json_pretty(path, self)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let pair: EmbeddedPair = serde_json::from_str(&text)?;
        // re-validate invariants on load
        EmbeddedPair::new(pair.side_a, pair.side_b, pair.expected_degree)
    }
}
