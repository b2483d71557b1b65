//! Alternating optimization of the feature network and the sparse
//! self-expressive codes.
//!
//! The objective on latent features `H = f(X)` is
//!
//! ```text
//! J = ½‖H − HC‖²_F + γ‖C‖₁ + (λ/4) Σᵢ (hᵢᵀhᵢ − 1)²,   diag(C) = 0
//! ```
//!
//! Each epoch visits the samples in a seeded random order. For sample `i`
//! the network output `hᵢ` is refreshed, its code `cᵢ` is re-solved against
//! the current latent columns, and one SGD step is taken on
//! `½‖hᵢ − Hcᵢ‖² + (λ/4)(hᵢᵀhᵢ − 1)²` with `Hcᵢ` held fixed.

use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::network::{
    forward, forward_batch, init_network, per_sample_gradient, sgd_step, ActivationKind, NetworkParams,
};
use crate::sparse::{self, CoefficientMatrix, DEFAULT_DELTA};

/// ℓ2 weight-decay coefficient applied to the weights in every SGD step.
pub const WEIGHT_DECAY: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaMode {
    /// `λ = 10⁻³ / n`
    Auto,
    Explicit(f64),
}

impl LambdaMode {
    pub fn effective(self, n: usize) -> f64 {
        match self {
            LambdaMode::Auto => 1e-3 / n as f64,
            LambdaMode::Explicit(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alternation {
    /// Refresh `cᵢ` then step the network, sample by sample.
    PerSample,
    /// Refresh all of `C`, then run one SGD pass over the samples.
    PerEpoch,
}

impl FromStr for Alternation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per_sample" => Ok(Alternation::PerSample),
            "per_epoch" => Ok(Alternation::PerEpoch),
            _ => Err(Error::invalid(format!("unknown alternation {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainerConfig {
    pub gamma: f64,
    pub delta: f64,
    pub lambda: LambdaMode,
    pub mu: f64,
    /// Epoch budget.
    pub tau: usize,
    /// Stop once the relative change of `J` between epochs drops below this.
    pub conv_tol: f64,
    /// `[d⁽⁰⁾, …, d⁽ᴹ⁾]`, `d⁽⁰⁾` is the input width.
    pub layer_dims: Vec<usize>,
    pub activation: ActivationKind,
    pub alternation: Alternation,
    pub post_linearize: bool,
    pub normalize_input: bool,
    pub weight_decay: f64,
    pub seed: u64,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        TrainerConfig {
            gamma: 0.01,
            delta: DEFAULT_DELTA,
            lambda: LambdaMode::Auto,
            mu: 1e-3,
            tau: 100,
            conv_tol: 1e-3,
            layer_dims: vec![300, 200, 150],
            activation: ActivationKind::Tanh,
            alternation: Alternation::PerSample,
            post_linearize: false,
            normalize_input: true,
            weight_decay: WEIGHT_DECAY,
            seed: 0,
        }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) {
            return Err(Error::invalid("gamma must be positive"));
        }
        if !(self.delta > 0.0) {
            return Err(Error::invalid("delta must be positive"));
        }
        if !(self.mu > 0.0) {
            return Err(Error::invalid("mu must be positive"));
        }
        if !(self.conv_tol > 0.0) {
            return Err(Error::invalid("conv_tol must be positive"));
        }
        if let LambdaMode::Explicit(v) = self.lambda {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid("lambda must be finite and nonnegative"));
            }
        }
        if !(self.weight_decay >= 0.0) {
            return Err(Error::invalid("weight decay must be nonnegative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBreakdown {
    /// `½‖H − HC‖²_F`
    pub recon: f64,
    /// `γ‖C‖₁`
    pub l1: f64,
    /// `(λ/4) Σᵢ (hᵢᵀhᵢ − 1)²`
    pub sphere: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    /// 1-based.
    pub epoch: usize,
    pub loss: LossBreakdown,
    /// Wall-clock seconds spent in this epoch.
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainTrace {
    pub epochs: Vec<EpochRecord>,
}

impl TrainTrace {
    pub fn len(&self) -> usize {
        self.epochs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epochs.is_empty()
    }

    pub fn last_loss(&self) -> Option<LossBreakdown> {
        self.epochs.last().map(|e| e.loss)
    }

    /// Relative change `|Jₜ − Jₜ₋₁| / max(Jₜ₋₁, 1e-12)` for each epoch after
    /// the first.
    pub fn relative_changes(&self) -> Vec<f64> {
        self.epochs
            .windows(2)
            .map(|w| relative_change(w[0].loss.total, w[1].loss.total))
            .collect()
    }
}

fn relative_change(prev: f64, cur: f64) -> f64 {
    (cur - prev).abs() / prev.max(1e-12)
}

/// Evaluates the objective on latent features already computed.
pub fn loss_on_features(h: &Matrix, c: &CoefficientMatrix, gamma: f64, lambda: f64) -> Result<LossBreakdown> {
    if h.cols() != c.n() {
        return Err(Error::invalid(format!(
            "{} latent columns but coefficient matrix is {}x{}",
            h.cols(),
            c.n(),
            c.n()
        )));
    }
    let hc = h.matmul(c.as_matrix())?;
    let recon = 0.5 * h.sub(&hc)?.as_slice().iter().map(|v| v * v).sum::<f64>();
    let l1 = gamma * c.l1_norm();
    let sphere = 0.25
        * lambda
        * (0..h.cols())
            .map(|i| {
                let col = h.column(i);
                let s = dot(&col, &col) - 1.0;
                s * s
            })
            .sum::<f64>();
    Ok(LossBreakdown {
        recon,
        l1,
        sphere,
        total: recon + l1 + sphere,
    })
}

/// Objective on `H = forward_batch(params, x)`.
pub fn compute_loss(
    params: &NetworkParams,
    x: &Matrix,
    c: &CoefficientMatrix,
    gamma: f64,
    lambda: f64,
) -> Result<LossBreakdown> {
    let h = forward_batch(params, x)?;
    loss_on_features(&h, c, gamma, lambda)
}

#[derive(Debug, Clone)]
pub struct TrainOutput {
    pub params: NetworkParams,
    pub coefficients: CoefficientMatrix,
    pub trace: TrainTrace,
    /// `λ` actually used.
    pub lambda: f64,
    /// Loss at initialization (before any epoch).
    pub initial_loss: LossBreakdown,
    pub converged: bool,
}

/// Latent features and their Gram matrix, kept in sync column by column.
struct Latent {
    h: Matrix,
    gram: Matrix,
}

impl Latent {
    fn new(h: Matrix) -> Self {
        let gram = h.gram();
        Latent { h, gram }
    }

    fn set_column(&mut self, i: usize, col: &[f64]) {
        self.h.set_column(i, col);
        let n = self.h.cols();
        for j in 0..n {
            let v = (0..col.len()).map(|r| col[r] * self.h[(r, j)]).sum::<f64>();
            self.gram[(i, j)] = v;
            self.gram[(j, i)] = v;
        }
    }

    /// `H c` for a code whose entry `i` is zero.
    fn reconstruct(&self, code: &[f64]) -> Vec<f64> {
        self.h.matvec(code).expect("code length matches n")
    }
}

/// Trains the network and coefficients on the columns of `x` (`d × n`).
/// Inputs are used as given; normalization and PCA are the caller's
/// concern.
pub fn train(x: &Matrix, config: &TrainerConfig) -> Result<TrainOutput> {
    config.validate()?;
    let n = x.cols();
    if n < 2 {
        return Err(Error::invalid("training needs at least two samples"));
    }
    if config.layer_dims.first() != Some(&x.rows()) {
        return Err(Error::invalid(format!(
            "input width {:?} does not match feature dimension {}",
            config.layer_dims.first(),
            x.rows()
        )));
    }
    let lambda = config.lambda.effective(n);
    let mut params = init_network(&config.layer_dims, config.activation)?;
    let columns: Vec<Vec<f64>> = (0..n).map(|j| x.column(j)).collect();

    let mut latent = Latent::new(forward_batch(&params, x)?);
    let mut c = sparse::self_expression(&latent.h, config.gamma, config.delta)
        .map_err(|e| e.context("initial self-expression"))?;
    let initial_loss = loss_on_features(&latent.h, &c, config.gamma, lambda)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut trace = TrainTrace::default();
    let mut prev_total = initial_loss.total;
    let mut converged = false;

    for epoch in 1..=config.tau {
        let started = Instant::now();
        order.shuffle(&mut rng);
        let ctx = |e: Error, i: usize| e.context(format!("epoch {epoch}, sample {i}"));

        if config.alternation == Alternation::PerEpoch {
            for i in 0..n {
                let code = sparse::solve_column(&latent.gram, i, config.gamma, config.delta).map_err(|e| ctx(e, i))?;
                c.set_column(i, &code);
            }
        }
        let frozen = (config.alternation == Alternation::PerEpoch).then(|| latent.h.clone());

        for &i in &order {
            let trace_i = forward(&params, &columns[i]).map_err(|e| ctx(e, i))?;
            let target = match &frozen {
                None => {
                    latent.set_column(i, trace_i.top());
                    let code =
                        sparse::solve_column(&latent.gram, i, config.gamma, config.delta).map_err(|e| ctx(e, i))?;
                    c.set_column(i, &code);
                    latent.reconstruct(&c.column(i))
                }
                Some(h) => h.matvec(&c.column(i))?,
            };
            let grads = per_sample_gradient(&params, &columns[i], &target, lambda).map_err(|e| ctx(e, i))?;
            sgd_step(&mut params, &grads, config.mu, config.weight_decay)?;
        }

        latent = Latent::new(forward_batch(&params, x)?);
        let loss = loss_on_features(&latent.h, &c, config.gamma, lambda)?;
        if !loss.total.is_finite() {
            return Err(Error::Numerical {
                message: format!("loss diverged at epoch {epoch}"),
                residual: loss.total,
            });
        }
        trace.epochs.push(EpochRecord {
            epoch,
            loss,
            seconds: started.elapsed().as_secs_f64(),
        });
        let change = relative_change(prev_total, loss.total);
        prev_total = loss.total;
        if epoch > 1 && change < config.conv_tol {
            converged = true;
            break;
        }
    }

    Ok(TrainOutput {
        params,
        coefficients: c,
        trace,
        lambda,
        initial_loss,
        converged,
    })
}

/// Latent features for clustering. With `post_linearize` the activation is
/// dropped, leaving the composed affine map.
pub fn infer_features(params: &NetworkParams, x: &Matrix, post_linearize: bool) -> Result<Matrix> {
    if post_linearize {
        forward_batch(&params.linearized(), x)
    } else {
        forward_batch(params, x)
    }
}

/// Shallow SSC: self-expression directly on the inputs.
pub fn ssc_baseline(x: &Matrix, gamma: f64, delta: f64) -> Result<CoefficientMatrix> {
    sparse::self_expression(x, gamma, delta)
}
