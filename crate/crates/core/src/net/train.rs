//! Full-batch gradient descent with reverse-mode differentiation through
//! the affine/activation stack. Deterministic by construction: fixed batch
//! order, no entropy, so identical configs reproduce identical weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::EmbeddedPair;
use crate::linalg::Matrix;
use crate::net::{FinalActivation, Scratch, MLP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossKind {
    /// mean(max(0, 1 - label * y)) over scalar outputs with labels +-1.
    HingeSeparation,
    /// mean squared error over all output components.
    MeanSquaredError,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    /// Points per gradient step; clamped to the dataset size (full batch)
    /// by default. Batches are taken in fixed order, never shuffled.
    pub batch: usize,
    pub loss: LossKind,
    /// Heavy-ball momentum; 0 gives plain gradient descent.
    pub momentum: f64,
    /// Recorded for reproducibility bookkeeping; the deterministic
    /// full-batch loop draws no randomness from it.
    pub seed: u64,
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "learning rate must lie in (0, 1], got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 || self.batch == 0 {
            return Err(Error::InvalidParameter("epochs and batch must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::InvalidParameter(format!(
                "momentum must lie in [0, 1), got {}",
                self.momentum
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledData {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<Vec<f64>>,
}

impl LabeledData {
    pub fn new(inputs: Vec<Vec<f64>>, targets: Vec<Vec<f64>>) -> Result<Self> {
        if inputs.is_empty() || inputs.len() != targets.len() {
            return Err(Error::InvalidParameter(format!(
                "need matching nonempty inputs/targets, got {} and {}",
                inputs.len(),
                targets.len()
            )));
        }
        Ok(LabeledData { inputs, targets })
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }
}

/// Classification data from a pair: side A labeled +1, side B labeled -1.
pub fn pair_training_data(pair: &EmbeddedPair) -> LabeledData {
    let mut inputs = Vec::with_capacity(pair.side_a.len() + pair.side_b.len());
    let mut targets = Vec::with_capacity(inputs.capacity());
    for p in &pair.side_a.points {
        inputs.push(p.clone());
        targets.push(vec![1.0]);
    }
    for p in &pair.side_b.points {
        inputs.push(p.clone());
        targets.push(vec![-1.0]);
    }
    LabeledData { inputs, targets }
}

/// Per-parameter gradient (or velocity) storage shaped like a network.
#[derive(Clone, Debug)]
pub struct Gradients {
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
}

impl Gradients {
    pub fn zeros_like(net: &MLP) -> Self {
        Gradients {
            weights: net.weights.iter().map(|w| Matrix::zeros(w.rows(), w.cols())).collect(),
            biases: net.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }

    fn reset(&mut self) {
        for w in &mut self.weights {
            w.data_mut().fill(0.0);
        }
        for b in &mut self.biases {
            b.fill(0.0);
        }
    }

    fn scale(&mut self, s: f64) {
        for w in &mut self.weights {
            for v in w.data_mut() {
                *v *= s;
            }
        }
        for b in &mut self.biases {
            for v in b {
                *v *= s;
            }
        }
    }
}

/// Loss over a dataset without touching gradients.
pub fn loss_of(net: &MLP, data: &LabeledData, loss: LossKind) -> Result<f64> {
    let mut scratch = Scratch::new(&net.spec);
    let mut total = 0.0;
    for (x, t) in data.inputs.iter().zip(&data.targets) {
        net.forward_cached(x, &mut scratch);
        let y = scratch.acts.last().unwrap();
        total += point_loss(y, t, loss)?;
    }
    Ok(total / data.len() as f64)
}

fn point_loss(y: &[f64], t: &[f64], loss: LossKind) -> Result<f64> {
    match loss {
        LossKind::HingeSeparation => {
            if y.len() != 1 || t.len() != 1 {
                return Err(Error::InvalidParameter(
                    "hinge separation needs scalar outputs and +-1 labels".into(),
                ));
            }
            Ok((1.0 - t[0] * y[0]).max(0.0))
        }
        LossKind::MeanSquaredError => {
            if y.len() != t.len() {
                return Err(Error::DimensionMismatch { expected: t.len(), got: y.len() });
            }
            Ok(y.iter().zip(t).map(|(a, b)| (a - b) * (a - b)).sum())
        }
    }
}

/// dLoss/dy for one point, *not* yet divided by the dataset size.
fn point_loss_grad(y: &[f64], t: &[f64], loss: LossKind, out: &mut Vec<f64>) {
    out.clear();
    match loss {
        LossKind::HingeSeparation => {
            let margin = 1.0 - t[0] * y[0];
            out.push(if margin > 0.0 { -t[0] } else { 0.0 });
        }
        LossKind::MeanSquaredError => {
            out.extend(y.iter().zip(t).map(|(a, b)| 2.0 * (a - b)));
        }
    }
}

/// Accumulate dLoss/dparams for one point into `grads`, given the output
/// gradient `dl_dy`. Exposed within the crate so custom objectives (the
/// adversarial gap loss) can reuse the backward pass.
pub(crate) fn backprop_point(
    net: &MLP,
    x: &[f64],
    dl_dy: &[f64],
    scratch: &mut Scratch,
    grads: &mut Gradients,
) {
    net.forward_cached(x, scratch);
    let depth = net.spec.depth();
    // output layer delta
    {
        let delta = &mut scratch.deltas[depth - 1];
        let z = &scratch.preacts[depth - 1];
        match net.spec.final_activation {
            FinalActivation::SameAsHidden => {
                for i in 0..delta.len() {
                    delta[i] = dl_dy[i] * net.spec.activation.derivative(z[i]);
                }
            }
            FinalActivation::None => delta.copy_from_slice(dl_dy),
        }
    }
    for layer in (0..depth).rev() {
        // propagate before borrowing the gradient buffers mutably
        if layer > 0 {
            let (lower, upper) = scratch.deltas.split_at_mut(layer);
            let delta = &upper[0];
            let prev_delta = &mut lower[layer - 1];
            net.weights[layer].matvec_transpose_into(delta, prev_delta);
            let z = &scratch.preacts[layer - 1];
            for i in 0..prev_delta.len() {
                prev_delta[i] *= net.spec.activation.derivative(z[i]);
            }
        }
        let delta = &scratch.deltas[layer];
        let input = &scratch.acts[layer];
        let gw = &mut grads.weights[layer];
        let cols = gw.cols();
        let gdata = gw.data_mut();
        for (r, &d) in delta.iter().enumerate() {
            if d == 0.0 {
                continue;
            }
            let row = &mut gdata[r * cols..(r + 1) * cols];
            for (g, &a) in row.iter_mut().zip(input) {
                *g += d * a;
            }
        }
        for (g, &d) in grads.biases[layer].iter_mut().zip(delta) {
            *g += d;
        }
    }
}

fn apply_update(net: &mut MLP, grads: &Gradients, velocity: &mut Gradients, cfg: &TrainConfig) {
    let lr = cfg.learning_rate;
    let mu = cfg.momentum;
    for layer in 0..net.weights.len() {
        let v = velocity.weights[layer].data_mut();
        let g = grads.weights[layer].data();
        let w = net.weights[layer].data_mut();
        for i in 0..w.len() {
            v[i] = mu * v[i] - lr * g[i];
            w[i] += v[i];
        }
        let vb = &mut velocity.biases[layer];
        let gb = &grads.biases[layer];
        let b = &mut net.biases[layer];
        for i in 0..b.len() {
            vb[i] = mu * vb[i] - lr * gb[i];
            b[i] += vb[i];
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub net: MLP,
    /// Mean loss per epoch, measured before that epoch's updates.
    pub loss_trace: Vec<f64>,
}

/// Gradient-descent training. Batches sweep the data in fixed order;
/// with `batch >= data.len()` this is plain full-batch descent.
pub fn train(net: MLP, data: &LabeledData, cfg: &TrainConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    net.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyInput("training data".into()));
    }
    for x in &data.inputs {
        if x.len() != net.spec.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: net.spec.input_dim(),
                got: x.len(),
            });
        }
    }
    if cfg.loss == LossKind::HingeSeparation {
        if net.spec.output_dim() != 1 {
            return Err(Error::InvalidParameter(
                "hinge separation needs a scalar output".into(),
            ));
        }
        if data.targets.iter().any(|t| t.len() != 1 || (t[0] != 1.0 && t[0] != -1.0)) {
            return Err(Error::InvalidParameter(
                "hinge separation labels must be +1 or -1".into(),
            ));
        }
    }

    let mut net = net;
    let batch = cfg.batch.min(data.len());
    let mut scratch = Scratch::new(&net.spec);
    let mut grads = Gradients::zeros_like(&net);
    let mut velocity = Gradients::zeros_like(&net);
    let mut dl_dy: Vec<f64> = Vec::with_capacity(net.spec.output_dim());
    let mut loss_trace = Vec::with_capacity(cfg.epochs);

    for _epoch in 0..cfg.epochs {
        let mut epoch_loss = 0.0;
        let mut start = 0;
        while start < data.len() {
            let end = (start + batch).min(data.len());
            grads.reset();
            for idx in start..end {
                let x = &data.inputs[idx];
                let t = &data.targets[idx];
                net.forward_cached(x, &mut scratch);
                let y = scratch.acts.last().unwrap();
                epoch_loss += point_loss(y, t, cfg.loss)?;
                point_loss_grad(y, t, cfg.loss, &mut dl_dy);
                backprop_point(&net, x, &dl_dy, &mut scratch, &mut grads);
            }
            grads.scale(1.0 / (end - start) as f64);
            apply_update(&mut net, &grads, &mut velocity, cfg);
            start = end;
        }
        let mean = epoch_loss / data.len() as f64;
        if !mean.is_finite() {
            return Err(Error::NonFinite("training loss (divergent learning rate?)".into()));
        }
        loss_trace.push(mean);
    }
    Ok(TrainOutcome { net, loss_trace })
}

/// Central-difference gradient of the dataset loss, for verifying the
/// analytic backward pass.
pub fn numerical_gradient(
    net: &MLP,
    data: &LabeledData,
    loss: LossKind,
    eps: f64,
) -> Result<Gradients> {
    let mut grads = Gradients::zeros_like(net);
    let mut probe = net.clone();
    for layer in 0..net.weights.len() {
        for i in 0..net.weights[layer].data().len() {
            let orig = probe.weights[layer].data()[i];
            probe.weights[layer].data_mut()[i] = orig + eps;
            let up = loss_of(&probe, data, loss)?;
            probe.weights[layer].data_mut()[i] = orig - eps;
            let dn = loss_of(&probe, data, loss)?;
            probe.weights[layer].data_mut()[i] = orig;
            grads.weights[layer].data_mut()[i] = (up - dn) / (2.0 * eps);
        }
        for i in 0..net.biases[layer].len() {
            let orig = probe.biases[layer][i];
            probe.biases[layer][i] = orig + eps;
            let up = loss_of(&probe, data, loss)?;
            probe.biases[layer][i] = orig - eps;
            let dn = loss_of(&probe, data, loss)?;
            probe.biases[layer][i] = orig;
            grads.biases[layer][i] = (up - dn) / (2.0 * eps);
        }
    }
    Ok(grads)
}

/// Analytic gradient of the dataset loss (mean over points), for tests and
/// the gradient check.
pub fn analytic_gradient(net: &MLP, data: &LabeledData, loss: LossKind) -> Result<Gradients> {
    let mut scratch = Scratch::new(&net.spec);
    let mut grads = Gradients::zeros_like(net);
    let mut dl_dy = Vec::with_capacity(net.spec.output_dim());
    for (x, t) in data.inputs.iter().zip(&data.targets) {
        net.forward_cached(x, &mut scratch);
        let y = scratch.acts.last().unwrap();
        point_loss_grad(y, t, loss, &mut dl_dy);
        backprop_point(net, x, &dl_dy, &mut scratch, &mut grads);
    }
    grads.scale(1.0 / data.len() as f64);
    Ok(grads)
}

/// Loss trace CSV: `epoch,loss`.
pub fn write_loss_csv(trace: &[f64], path: &std::path::Path) -> Result<()> {
    let rows: Vec<Vec<String>> = trace
        .iter()
        .enumerate()
        .map(|(epoch, loss)| vec![format!("{epoch}"), format!("{loss}")])
        .collect();
    crate::output::write_csv(path, &["epoch", "loss"], &rows)
}
