//! Fully connected feature network `h⁽ᵐ⁾ = g(W⁽ᵐ⁾h⁽ᵐ⁻¹⁾ + b⁽ᵐ⁾)` with
//! hand-written backpropagation for the per-sample self-expression loss.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActivationKind {
    Tanh,
    Sigmoid,
    /// Softplus `ln(1 + eᶻ)`: non-saturating for large `z`, derivative is the
    /// sigmoid.
    NsSigmoid,
    Relu,
    Identity,
}

impl ActivationKind {
    pub const ALL: [ActivationKind; 5] = [
        ActivationKind::Tanh,
        ActivationKind::Sigmoid,
        ActivationKind::NsSigmoid,
        ActivationKind::Relu,
        ActivationKind::Identity,
    ];

    pub fn apply(self, z: f64) -> f64 {
        match self {
            ActivationKind::Tanh => z.tanh(),
            ActivationKind::Sigmoid => sigmoid(z),
            ActivationKind::NsSigmoid => {
                if z > 0.0 {
                    z + (-z).exp().ln_1p()
                } else {
                    z.exp().ln_1p()
                }
            }
            ActivationKind::Relu => z.max(0.0),
            ActivationKind::Identity => z,
        }
    }

    pub fn derivative(self, z: f64) -> f64 {
        match self {
            ActivationKind::Tanh => {
                let t = z.tanh();
                1.0 - t * t
            }
            ActivationKind::Sigmoid => {
                let s = sigmoid(z);
                s * (1.0 - s)
            }
            ActivationKind::NsSigmoid => sigmoid(z),
            ActivationKind::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            ActivationKind::Identity => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ActivationKind::Tanh => "tanh",
            ActivationKind::Sigmoid => "sigmoid",
            ActivationKind::NsSigmoid => "nssigmoid",
            ActivationKind::Relu => "relu",
            ActivationKind::Identity => "identity",
        }
    }
}

impl fmt::Display for ActivationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ActivationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ActivationKind::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown activation {s:?}")))
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams {
    /// `d⁽ᵐ⁾ × d⁽ᵐ⁻¹⁾`
    pub w: Matrix,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    input_dim: usize,
    pub layers: Vec<LayerParams>,
    pub activation: ActivationKind,
}

/// Layer pre-activations and outputs retained for backpropagation.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTrace {
    /// `z⁽¹⁾..z⁽ᴹ⁾`
    pub pre_activations: Vec<Vec<f64>>,
    /// `h⁽⁰⁾..h⁽ᴹ⁾`, `h⁽⁰⁾` is the input.
    pub outputs: Vec<Vec<f64>>,
}

impl ForwardTrace {
    pub fn top(&self) -> &[f64] {
        self.outputs.last().expect("trace always holds the input")
    }
}

/// Gradients laid out like `NetworkParams::layers`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<LayerParams>,
}

/// Builds a network with widths `dims = [d⁽⁰⁾, d⁽¹⁾, …, d⁽ᴹ⁾]`. Weights are
/// the rectangular identity band, biases zero. A single width gives the
/// identity network (`M = 0`).
pub fn init_network(dims: &[usize], activation: ActivationKind) -> Result<NetworkParams> {
    if dims.is_empty() {
        return Err(Error::invalid("network needs at least the input width"));
    }
    if let Some(pos) = dims.iter().position(|&d| d == 0) {
        return Err(Error::invalid(format!("layer {pos} has zero width")));
    }
    let layers = dims
        .windows(2)
        .map(|w| {
            let (fan_in, fan_out) = (w[0], w[1]);
            let mut weights = Matrix::zeros(fan_out, fan_in);
            for i in 0..fan_in.min(fan_out) {
                weights[(i, i)] = 1.0;
            }
            LayerParams {
                w: weights,
                b: vec![0.0; fan_out],
            }
        })
        .collect();
    Ok(NetworkParams {
        input_dim: dims[0],
        layers,
        activation,
    })
}

impl NetworkParams {
    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(self.input_dim, |l| l.b.len())
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        std::iter::once(self.input_dim)
            .chain(self.layers.iter().map(|l| l.b.len()))
            .collect()
    }

    /// Same weights with the activation replaced by the identity.
    pub fn linearized(&self) -> NetworkParams {
        NetworkParams {
            activation: ActivationKind::Identity,
            ..self.clone()
        }
    }

    pub fn zero_gradients(&self) -> Gradients {
        Gradients {
            layers: self
                .layers
                .iter()
                .map(|l| LayerParams {
                    w: Matrix::zeros(l.w.rows(), l.w.cols()),
                    b: vec![0.0; l.b.len()],
                })
                .collect(),
        }
    }
}

pub fn forward(params: &NetworkParams, x: &[f64]) -> Result<ForwardTrace> {
    if x.len() != params.input_dim {
        return Err(Error::invalid(format!(
            "input has length {}, network expects {}",
            x.len(),
            params.input_dim
        )));
    }
    let g = params.activation;
    let mut pre_activations = Vec::with_capacity(params.depth());
    let mut outputs = Vec::with_capacity(params.depth() + 1);
    outputs.push(x.to_vec());
    for layer in &params.layers {
        let prev = outputs.last().unwrap();
        let z: Vec<f64> = (0..layer.w.rows())
            .map(|r| dot(layer.w.row(r), prev) + layer.b[r])
            .collect();
        outputs.push(z.iter().map(|&v| g.apply(v)).collect());
        pre_activations.push(z);
    }
    Ok(ForwardTrace {
        pre_activations,
        outputs,
    })
}

/// Applies `forward` to every column of `x`.
pub fn forward_batch(params: &NetworkParams, x: &Matrix) -> Result<Matrix> {
    let mut out = Matrix::zeros(params.output_dim(), x.cols());
    for j in 0..x.cols() {
        let trace = forward(params, &x.column(j))?;
        out.set_column(j, trace.top());
    }
    Ok(out)
}

/// `½‖h − target‖² + (λ/4)(hᵀh − 1)²` for the network output `h`.
pub fn per_sample_loss(params: &NetworkParams, x: &[f64], target: &[f64], lambda: f64) -> Result<f64> {
    let trace = forward(params, x)?;
    let h = trace.top();
    if h.len() != target.len() {
        return Err(Error::invalid(format!(
            "target has length {}, network output has {}",
            target.len(),
            h.len()
        )));
    }
    let recon: f64 = h.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum();
    let sphere = dot(h, h) - 1.0;
    Ok(0.5 * recon + 0.25 * lambda * sphere * sphere)
}

/// Backpropagates `per_sample_loss` with `target` held fixed.
pub fn per_sample_gradient(params: &NetworkParams, x: &[f64], target: &[f64], lambda: f64) -> Result<Gradients> {
    let trace = forward(params, x)?;
    let h = trace.top();
    if h.len() != target.len() {
        return Err(Error::invalid(format!(
            "target has length {}, network output has {}",
            target.len(),
            h.len()
        )));
    }
    let sphere = lambda * (dot(h, h) - 1.0);
    let mut err: Vec<f64> = h.iter().zip(target).map(|(&hv, &t)| (hv - t) + sphere * hv).collect();

    let g = params.activation;
    let mut grads = params.zero_gradients();
    for m in (0..params.depth()).rev() {
        let z = &trace.pre_activations[m];
        let delta: Vec<f64> = err.iter().zip(z).map(|(e, &zv)| e * g.derivative(zv)).collect();
        let input = &trace.outputs[m];
        let gw = &mut grads.layers[m].w;
        for (r, &dr) in delta.iter().enumerate() {
            if dr == 0.0 {
                continue;
            }
            for (o, &hin) in gw.row_mut(r).iter_mut().zip(input) {
                *o = dr * hin;
            }
        }
        if m > 0 {
            err = params.layers[m].w.tr_matvec(&delta)?;
        }
        grads.layers[m].b = delta;
    }
    Ok(grads)
}

/// `W ← W·(1 − μφ) − μ·∇W`, `b ← b − μ·∇b`. Biases are not decayed.
pub fn sgd_step(params: &mut NetworkParams, grads: &Gradients, mu: f64, phi: f64) -> Result<()> {
    if grads.layers.len() != params.layers.len() {
        return Err(Error::invalid("gradient depth does not match network"));
    }
    let keep = 1.0 - mu * phi;
    for (layer, grad) in params.layers.iter_mut().zip(&grads.layers) {
        if layer.w.shape() != grad.w.shape() || layer.b.len() != grad.b.len() {
            return Err(Error::invalid("gradient shape does not match layer"));
        }
        for r in 0..layer.w.rows() {
            for (w, &gw) in layer.w.row_mut(r).iter_mut().zip(grad.w.row(r)) {
                *w = *w * keep - mu * gw;
            }
        }
        for (b, &gb) in layer.b.iter_mut().zip(&grad.b) {
            *b -= mu * gb;
        }
    }
    Ok(())
}
