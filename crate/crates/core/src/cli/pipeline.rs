//! End-to-end clustering run and its machine-readable outputs.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use super::config::{Method, RunConfig};
use crate::data::{normalize_columns, pca_reduce, Dataset};
use crate::error::{Error, Result};
use crate::metrics::{self, Scores};
use crate::sparse;
use crate::spectral::{build_affinity, spectral_cluster};
use crate::trainer::{self, LossBreakdown, TrainTrace, TrainerConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport {
    pub scores: Option<Scores>,
    pub n: usize,
    pub k: usize,
    pub d_input: usize,
    pub d_latent: usize,
    pub method: Method,
    pub epochs_run: usize,
    pub final_loss: LossBreakdown,
    pub seed: u64,
}

/// Rounds to 6 significant digits.
fn sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

impl ClusterReport {
    /// Top-level keys; the four metric keys appear only with truth labels.
    pub const KEYS: [&'static str; 12] = [
        "acc",
        "nmi",
        "ari",
        "fscore",
        "n",
        "k",
        "d_input",
        "d_latent",
        "method",
        "epochs_run",
        "final_loss",
        "seed",
    ];

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        if let Some(s) = self.scores {
            m.insert("acc".into(), json!(sig6(s.acc)));
            m.insert("nmi".into(), json!(sig6(s.nmi)));
            m.insert("ari".into(), json!(sig6(s.ari)));
            m.insert("fscore".into(), json!(sig6(s.fscore)));
        }
        m.insert("n".into(), json!(self.n));
        m.insert("k".into(), json!(self.k));
        m.insert("d_input".into(), json!(self.d_input));
        m.insert("d_latent".into(), json!(self.d_latent));
        m.insert("method".into(), json!(self.method.name()));
        m.insert("epochs_run".into(), json!(self.epochs_run));
        let l = self.final_loss;
        m.insert(
            "final_loss".into(),
            json!({
                "recon": sig6(l.recon),
                "l1": sig6(l.l1),
                "sphere": sig6(l.sphere),
                "total": sig6(l.total),
            }),
        );
        m.insert("seed".into(), json!(self.seed));
        Value::Object(m)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Metrics alone, as printed by the `eval` command.
pub fn scores_json(s: &Scores) -> String {
    json!({
        "acc": sig6(s.acc),
        "nmi": sig6(s.nmi),
        "ari": sig6(s.ari),
        "fscore": sig6(s.fscore),
    })
    .to_string()
}

pub const TRACE_HEADER: &str = "epoch,loss_total,loss_recon,loss_l1,loss_sphere,seconds";

/// Trace CSV with shortest round-trip float formatting. Without
/// `with_timing` the `seconds` column is written as 0 so repeated runs
/// produce identical files.
pub fn trace_csv(trace: &TrainTrace, with_timing: bool) -> String {
    let mut out = String::new();
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for e in &trace.epochs {
        let secs = if with_timing { e.seconds } else { 0.0 };
        writeln!(
            out,
            "{},{},{},{},{},{}",
            e.epoch, e.loss.total, e.loss.recon, e.loss.l1, e.loss.sphere, secs
        )
        .unwrap();
    }
    out
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub labels: Vec<usize>,
    pub report: ClusterReport,
    pub trace: Option<TrainTrace>,
    pub coefficients: sparse::CoefficientMatrix,
}

/// Applies optional PCA then optional column normalization.
pub fn preprocess(x: &crate::Matrix, config: &RunConfig) -> Result<crate::Matrix> {
    let mut x = match config.pca_dim {
        Some(dim) => pca_reduce(x, dim)?.projected,
        None => x.clone(),
    };
    if config.trainer.normalize_input {
        x = normalize_columns(&x);
    }
    Ok(x)
}

/// Preprocess, learn `C`, cluster `|C| + |C|ᵀ`, and score if truth is known.
pub fn run(dataset: &Dataset, config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    let k = config
        .k
        .or(dataset.k)
        .ok_or_else(|| Error::invalid("cluster count k not given and no truth labels"))?;
    if k < 2 || k > dataset.n() {
        return Err(Error::invalid(format!("k = {k} outside 2..={}", dataset.n())));
    }
    let x = preprocess(&dataset.x, config)?;
    let tc: &TrainerConfig = &config.trainer;
    let n = x.cols();
    let lambda = tc.lambda.effective(n);

    let (coefficients, trace, final_loss, d_latent) = match config.method {
        Method::Ssc => {
            let c = trainer::ssc_baseline(&x, tc.gamma, tc.delta).map_err(|e| e.context("ssc"))?;
            let loss = trainer::loss_on_features(&x, &c, tc.gamma, lambda)?;
            (c, None, loss, x.rows())
        }
        Method::Dssc => {
            let out = trainer::train(&x, tc).map_err(|e| e.context("dssc training"))?;
            let loss = out.trace.last_loss().unwrap_or(out.initial_loss);
            let c = if tc.post_linearize {
                let h = trainer::infer_features(&out.params, &x, true)?;
                sparse::self_expression(&h, tc.gamma, tc.delta).map_err(|e| e.context("post-linearized codes"))?
            } else {
                out.coefficients
            };
            (c, Some(out.trace), loss, out.params.output_dim())
        }
    };

    let affinity = build_affinity(&coefficients);
    let assignment = spectral_cluster(&affinity, k, config.kmeans_restarts, tc.seed)?;
    let scores = match &dataset.labels {
        Some(truth) => Some(metrics::evaluate(&assignment.labels, truth)?),
        None => None,
    };
    let epochs_run = trace.as_ref().map_or(0, |t| t.len());
    Ok(RunOutput {
        labels: assignment.labels,
        report: ClusterReport {
            scores,
            n,
            k,
            d_input: dataset.dim(),
            d_latent,
            method: config.method,
            epochs_run,
            final_loss,
            seed: tc.seed,
        },
        trace,
        coefficients,
    })
}
