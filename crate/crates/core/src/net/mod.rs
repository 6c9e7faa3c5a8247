//! Small fully connected networks: architecture specs with the width
//! statistic the obstruction theorems bound, seeded deterministic
//! initialization, forward evaluation, and pointwise images of clouds.
//! Training lives in [`train`].

use std::path::Path;

use rand::Rng as _;
use rand::SeedableRng as _;
use serde::{Deserialize, Serialize};

use crate::activation::ActivationKind;
use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::linalg::Matrix;

pub mod train;

pub use train::{
    analytic_gradient, numerical_gradient, pair_training_data, train, write_loss_csv, Gradients,
    LabeledData, LossKind, TrainConfig, TrainOutcome,
};

/// Whether the last affine layer is followed by the hidden activation
/// (the composed form Net = mu . A_k . mu . A_{k-1} ...) or returned raw
/// (needed for regression targets outside the activation's range).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FinalActivation {
    SameAsHidden,
    None,
}

/// Architecture description: `layer_dims = [n_1, ..., n_{k+1}]` with
/// `n_1` the input dimension and `n_{k+1}` the output dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MLPSpec {
    pub layer_dims: Vec<usize>,
    pub activation: ActivationKind,
    pub final_activation: FinalActivation,
    pub seed: u64,
}

impl MLPSpec {
    pub fn new(
        layer_dims: Vec<usize>,
        activation: ActivationKind,
        final_activation: FinalActivation,
        seed: u64,
    ) -> Result<Self> {
        if layer_dims.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a network needs at least input and output dims, got {layer_dims:?}"
            )));
        }
        if layer_dims.contains(&0) {
            return Err(Error::InvalidParameter("zero-width layer".into()));
        }
        Ok(MLPSpec { layer_dims, activation, final_activation, seed })
    }

    pub fn input_dim(&self) -> usize {
        self.layer_dims[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.layer_dims.last().unwrap()
    }

    /// Number of affine layers.
    pub fn depth(&self) -> usize {
        self.layer_dims.len() - 1
    }

    /// Maximum hidden-layer dimension; `None` when there are no hidden
    /// layers. This is the width the lower-bound theorems compare against
    /// the input dimension.
    pub fn width(&self) -> Option<usize> {
        let hidden = &self.layer_dims[1..self.layer_dims.len() - 1];
        hidden.iter().copied().max()
    }
}

/// An evaluable network: spec plus weight matrices `W_i`
/// (`n_{i+1} x n_i`, row-major) and bias vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MLP {
    pub spec: MLPSpec,
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
}

impl MLP {
    /// Deterministic initialization: weights uniform in
    /// [-1/sqrt(fan_in), 1/sqrt(fan_in)] from a ChaCha stream seeded by
    /// `spec.seed`; biases zero. Same spec, same bits.
    pub fn init(spec: MLPSpec) -> MLP {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(spec.seed);
        let mut weights = Vec::with_capacity(spec.depth());
        let mut biases = Vec::with_capacity(spec.depth());
        for layer in 0..spec.depth() {
            let fan_in = spec.layer_dims[layer];
            let fan_out = spec.layer_dims[layer + 1];
            let scale = 1.0 / (fan_in as f64).sqrt();
            let data: Vec<f64> = (0..fan_in * fan_out)
                .map(|_| rng.random_range(-1.0..1.0) * scale)
                .collect();
            weights.push(Matrix::new(fan_out, fan_in, data).expect("consistent dims"));
            biases.push(vec![0.0; fan_out]);
        }
        MLP { spec, weights, biases }
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.len() != self.spec.depth() || self.biases.len() != self.spec.depth() {
            return Err(Error::InvalidParameter("layer count mismatch".into()));
        }
        for layer in 0..self.spec.depth() {
            let w = &self.weights[layer];
            if w.rows() != self.spec.layer_dims[layer + 1] || w.cols() != self.spec.layer_dims[layer]
            {
                return Err(Error::DimensionMismatch {
                    expected: self.spec.layer_dims[layer + 1] * self.spec.layer_dims[layer],
                    got: w.rows() * w.cols(),
                });
            }
            if self.biases[layer].len() != w.rows() {
                return Err(Error::DimensionMismatch {
                    expected: w.rows(),
                    got: self.biases[layer].len(),
                });
            }
            if w.data().iter().any(|x| !x.is_finite())
                || self.biases[layer].iter().any(|x| !x.is_finite())
            {
                return Err(Error::NonFinite("network parameters".into()));
            }
        }
        Ok(())
    }

    /// Alternating affine/activation composition.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.spec.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.spec.input_dim(),
                got: x.len(),
            });
        }
        let mut scratch = Scratch::new(&self.spec);
        self.forward_cached(x, &mut scratch);
        Ok(scratch.acts.last().unwrap().clone())
    }

    /// Forward pass caching pre-activations and activations per layer for
    /// backpropagation; `scratch.acts[0]` is the input.
    pub(crate) fn forward_cached(&self, x: &[f64], scratch: &mut Scratch) {
        scratch.acts[0].copy_from_slice(x);
        let depth = self.spec.depth();
        for layer in 0..depth {
            let (input, rest) = scratch.acts.split_at_mut(layer + 1);
            let input = &input[layer];
            let z = &mut scratch.preacts[layer];
            self.weights[layer].matvec_into(input, z);
            for (zi, bi) in z.iter_mut().zip(&self.biases[layer]) {
                *zi += bi;
            }
            let out = &mut rest[0];
            let activate =
                layer + 1 < depth || self.spec.final_activation == FinalActivation::SameAsHidden;
            if activate {
                for (o, &zi) in out.iter_mut().zip(z.iter()) {
                    *o = self.spec.activation.value(zi);
                }
            } else {
                out.copy_from_slice(z);
            }
        }
    }

    /// Smallest pre-activation magnitude over all layers at `x`. Gradient
    /// checks use this to keep finite-difference probes away from
    /// relu-style kinks.
    pub fn min_preactivation_magnitude(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.spec.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.spec.input_dim(),
                got: x.len(),
            });
        }
        let mut scratch = Scratch::new(&self.spec);
        self.forward_cached(x, &mut scratch);
        Ok(scratch
            .preacts
            .iter()
            .flatten()
            .map(|z| z.abs())
            .fold(f64::INFINITY, f64::min))
    }

    /// Pointwise image of a cloud; parametrization metadata carries
    /// through where the image still supports it.
    pub fn image_of(&self, cloud: &PointCloud) -> Result<PointCloud> {
        if cloud.ambient_dim != self.spec.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.spec.input_dim(),
                got: cloud.ambient_dim,
            });
        }
        let mut scratch = Scratch::new(&self.spec);
        cloud.map_points(|p| {
            self.forward_cached(p, &mut scratch);
            scratch.acts.last().unwrap().clone()
        })
    }

    pub fn to_json_file(&self, path: &Path) -> Result<()> {
        crate::output::write_json_pretty(path, self)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let net: MLP = serde_json::from_str(&text)?;
        net.validate()?;
        Ok(net)
    }
}

/// Reusable per-point buffers for forward/backward passes.
pub(crate) struct Scratch {
    /// acts[i]: output of layer i (acts[0] = input).
    pub acts: Vec<Vec<f64>>,
    /// preacts[i]: affine output z_{i+1} before activation.
    pub preacts: Vec<Vec<f64>>,
    /// deltas[i]: dLoss/dz_{i+1}.
    pub deltas: Vec<Vec<f64>>,
}

impl Scratch {
    pub fn new(spec: &MLPSpec) -> Self {
        let acts = spec.layer_dims.iter().map(|&d| vec![0.0; d]).collect();
        let preacts = spec.layer_dims[1..].iter().map(|&d| vec![0.0; d]).collect();
        let deltas = spec.layer_dims[1..].iter().map(|&d| vec![0.0; d]).collect();
        Scratch { acts, preacts, deltas }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(dims: &[usize], seed: u64) -> MLPSpec {
        MLPSpec::new(dims.to_vec(), ActivationKind::relu(), FinalActivation::None, seed).unwrap()
    }

    #[test]
    fn spec_validation_and_width() {
        assert!(MLPSpec::new(vec![3], ActivationKind::relu(), FinalActivation::None, 0).is_err());
        assert_eq!(spec(&[3, 4, 4, 1], 0).width(), Some(4));
        assert_eq!(spec(&[3, 2, 5, 1], 0).width(), Some(5));
        assert_eq!(spec(&[3, 1], 0).width(), None);
        assert_eq!(spec(&[3, 4, 1], 0).depth(), 2);
    }

    #[test]
    fn init_is_seed_deterministic() {
        let a = MLP::init(spec(&[3, 3, 1], 7));
        let b = MLP::init(spec(&[3, 3, 1], 7));
        assert_eq!(a, b);
        let c = MLP::init(spec(&[3, 3, 1], 8));
        assert_ne!(a, c);
        // biases start at zero
        assert!(a.biases.iter().flatten().all(|&x| x == 0.0));
    }

    #[test]
    fn identity_weight_forward_matches_relu() {
        let spec = MLPSpec::new(
            vec![2, 2],
            ActivationKind::relu(),
            FinalActivation::SameAsHidden,
            0,
        )
        .unwrap();
        let net = MLP {
            spec,
            weights: vec![Matrix::identity(2)],
            biases: vec![vec![0.0, 0.0]],
        };
        assert_eq!(net.forward(&[1.0, 2.0]).unwrap(), vec![1.0, 2.0]);
        assert_eq!(net.forward(&[-1.0, 2.0]).unwrap(), vec![0.0, 2.0]);
        assert!(net.forward(&[1.0]).is_err());
    }

    #[test]
    fn sigmoid_single_layer() {
        let spec = MLPSpec::new(
            vec![2, 1],
            ActivationKind::sigmoid(),
            FinalActivation::SameAsHidden,
            0,
        )
        .unwrap();
        let net = MLP {
            spec,
            weights: vec![Matrix::new(1, 2, vec![1.0, 1.0]).unwrap()],
            biases: vec![vec![0.0]],
        };
        let y = net.forward(&[0.0, 0.0]).unwrap();
        assert!((y[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn image_of_projection_net() {
        let circle = crate::geometry::unit_sphere_cloud(2, 32).unwrap();
        let spec = MLPSpec::new(
            vec![2, 1],
            ActivationKind::identity(),
            FinalActivation::None,
            0,
        )
        .unwrap();
        let net = MLP {
            spec,
            weights: vec![Matrix::new(1, 2, vec![1.0, 0.0]).unwrap()],
            biases: vec![vec![0.0]],
        };
        let img = net.image_of(&circle).unwrap();
        assert_eq!(img.ambient_dim, 1);
        let lo = img.points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = img.points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        assert!((lo + 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let net = MLP::init(spec(&[3, 4, 1], 3));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.json");
        net.to_json_file(&path).unwrap();
        let back = MLP::from_json_file(&path).unwrap();
        assert_eq!(net, back);
    }
}
