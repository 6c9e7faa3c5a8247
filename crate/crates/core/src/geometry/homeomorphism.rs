//! A checkable subclass of homeomorphisms of R^n: invertible affine maps,
//! componentwise strictly increasing smooth maps, and their compositions.
//! Orientation bookkeeping rides along so applying one to a pair can carry
//! the expected degree with the right sign.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{min_inter_gap, EmbeddedPair, GAP_COLLAPSE_LIMIT};
use crate::linalg::{add, Matrix};

/// Strictly increasing scalar map. Monotonicity is a construction
/// invariant; `validate` additionally samples the derivative on the
/// working domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MonotoneMap {
    Identity,
    /// x -> scale * x + offset with scale > 0.
    Affine { scale: f64, offset: f64 },
    /// x -> x + amplitude * sin(x) with |amplitude| < 1.
    SineSkew { amplitude: f64 },
    /// x -> x + coefficient * x^3 with coefficient >= 0.
    CubicSkew { coefficient: f64 },
}

impl MonotoneMap {
    pub fn apply(&self, x: f64) -> f64 {
        match self {
            MonotoneMap::Identity => x,
            MonotoneMap::Affine { scale, offset } => scale * x + offset,
            MonotoneMap::SineSkew { amplitude } => x + amplitude * x.sin(),
            MonotoneMap::CubicSkew { coefficient } => x + coefficient * x * x * x,
        }
    }

    fn derivative(&self, x: f64) -> f64 {
        match self {
            MonotoneMap::Identity => 1.0,
            MonotoneMap::Affine { scale, .. } => *scale,
            MonotoneMap::SineSkew { amplitude } => 1.0 + amplitude * x.cos(),
            MonotoneMap::CubicSkew { coefficient } => 1.0 + 3.0 * coefficient * x * x,
        }
    }

    /// Parameter checks plus a sampled strict-monotonicity/bounded-derivative
    /// check over [-limit, limit].
    pub fn validate(&self, limit: f64) -> Result<()> {
        match self {
            MonotoneMap::Identity => {}
            MonotoneMap::Affine { scale, offset } => {
                if !(scale.is_finite() && offset.is_finite() && *scale > 0.0) {
                    return Err(Error::DegenerateMap(format!(
                        "affine scalar map needs positive finite scale, got {scale}"
                    )));
                }
            }
            MonotoneMap::SineSkew { amplitude } => {
                if !(amplitude.is_finite() && amplitude.abs() < 1.0) {
                    return Err(Error::DegenerateMap(format!(
                        "sine skew amplitude must satisfy |a| < 1, got {amplitude}"
                    )));
                }
            }
            MonotoneMap::CubicSkew { coefficient } => {
                if !(coefficient.is_finite() && *coefficient >= 0.0) {
                    return Err(Error::DegenerateMap(format!(
                        "cubic skew coefficient must be nonnegative, got {coefficient}"
                    )));
                }
            }
        }
        let steps = 256;
        for i in 0..=steps {
            let x = -limit + 2.0 * limit * i as f64 / steps as f64;
            let d = self.derivative(x);
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::DegenerateMap(format!(
                    "scalar map derivative {d} at x = {x} is not strictly positive"
                )));
            }
        }
        Ok(())
    }
}

/// Homeomorphism of R^n from the affine-invertible / componentwise-monotone
/// subclass, or a composition of such pieces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Homeomorphism {
    Affine { matrix: Matrix, offset: Vec<f64> },
    Componentwise { maps: Vec<MonotoneMap> },
    Composition { pieces: Vec<Homeomorphism> },
}

impl Homeomorphism {
    pub fn identity(dim: usize) -> Self {
        Homeomorphism::Affine { matrix: Matrix::identity(dim), offset: vec![0.0; dim] }
    }

    pub fn affine(matrix: Matrix, offset: Vec<f64>) -> Result<Self> {
        let h = Homeomorphism::Affine { matrix, offset };
        h.validate()?;
        Ok(h)
    }

    pub fn translation(offset: Vec<f64>) -> Result<Self> {
        Self::affine(Matrix::identity(offset.len()), offset)
    }

    pub fn componentwise(maps: Vec<MonotoneMap>) -> Result<Self> {
        let h = Homeomorphism::Componentwise { maps };
        h.validate()?;
        Ok(h)
    }

    pub fn composition(pieces: Vec<Homeomorphism>) -> Result<Self> {
        let h = Homeomorphism::Composition { pieces };
        h.validate()?;
        Ok(h)
    }

    pub fn dim(&self) -> usize {
        match self {
            Homeomorphism::Affine { matrix, .. } => matrix.cols(),
            Homeomorphism::Componentwise { maps } => maps.len(),
            Homeomorphism::Composition { pieces } => {
                pieces.first().map_or(0, |p| p.dim())
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Homeomorphism::Affine { matrix, offset } => {
                if matrix.rows() != matrix.cols() {
                    return Err(Error::DegenerateMap(
                        "affine homeomorphism needs a square matrix".into(),
                    ));
                }
                if offset.len() != matrix.rows() {
                    return Err(Error::DimensionMismatch {
                        expected: matrix.rows(),
                        got: offset.len(),
                    });
                }
                let det = matrix.determinant()?;
                if det.abs() < 1e-12 {
                    return Err(Error::DegenerateMap(format!(
                        "affine part is singular (det = {det:e})"
                    )));
                }
                Ok(())
            }
            Homeomorphism::Componentwise { maps } => {
                if maps.is_empty() {
                    return Err(Error::EmptyInput("componentwise maps".into()));
                }
                for m in maps {
                    m.validate(10.0)?;
                }
                Ok(())
            }
            Homeomorphism::Composition { pieces } => {
                if pieces.is_empty() {
                    return Err(Error::EmptyInput("composition pieces".into()));
                }
                let dim = pieces[0].dim();
                for p in pieces {
                    p.validate()?;
                    if p.dim() != dim {
                        return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
                    }
                }
                Ok(())
            }
        }
    }

    /// Apply to a point. Pieces of a composition apply left to right
    /// (pieces[0] first).
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Homeomorphism::Affine { matrix, offset } => add(&matrix.matvec(x), offset),
            Homeomorphism::Componentwise { maps } => {
                maps.iter().zip(x).map(|(m, &v)| m.apply(v)).collect()
            }
            Homeomorphism::Composition { pieces } => {
                let mut y = x.to_vec();
                for p in pieces {
                    y = p.apply(&y);
                }
                y
            }
        }
    }

    /// +1 for orientation-preserving, -1 for orientation-reversing.
    pub fn orientation_sign(&self) -> i8 {
        match self {
            Homeomorphism::Affine { matrix, .. } => {
                if matrix.determinant().unwrap_or(0.0) < 0.0 {
                    -1
                } else {
                    1
                }
            }
            Homeomorphism::Componentwise { .. } => 1,
            Homeomorphism::Composition { pieces } => {
                pieces.iter().map(|p| p.orientation_sign() as i32).product::<i32>() as i8
            }
        }
    }
}

/// Map both sides of a pair pointwise. The expected degree carries over,
/// with its sign flipped by orientation-reversing maps; the recomputed gap
/// must stay above the collapse limit.
pub fn apply_homeomorphism(h: &Homeomorphism, pair: &EmbeddedPair) -> Result<EmbeddedPair> {
    h.validate()?;
    if h.dim() != pair.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: pair.ambient_dim(), got: h.dim() });
    }
    let side_a = pair.side_a.map_points(|p| h.apply(p))?;
    let side_b = pair.side_b.map_points(|p| h.apply(p))?;
    let expected = pair.expected_degree.map(|d| d * h.orientation_sign() as i64);
    let (gap, _) = min_inter_gap(&side_a, &side_b);
    if !(gap > GAP_COLLAPSE_LIMIT) {
        return Err(Error::GapCollapse { gap, limit: GAP_COLLAPSE_LIMIT });
    }
    EmbeddedPair::new(side_a, side_b, expected)
}
