//! Flat `key = value` run configuration.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::network::ActivationKind;
use crate::trainer::{LambdaMode, TrainerConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ssc,
    Dssc,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ssc => "ssc",
            Method::Dssc => "dssc",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ssc" => Ok(Method::Ssc),
            "dssc" => Ok(Method::Dssc),
            _ => Err(Error::invalid(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub method: Method,
    pub trainer: TrainerConfig,
    /// Cluster count; falls back to the number of truth classes.
    pub k: Option<usize>,
    pub pca_dim: Option<usize>,
    pub kmeans_restarts: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            method: Method::Dssc,
            trainer: TrainerConfig::default(),
            k: None,
            pca_dim: None,
            kmeans_restarts: 20,
        }
    }
}

pub const KEYS: [&str; 16] = [
    "method",
    "gamma",
    "delta",
    "lambda",
    "mu",
    "tau",
    "conv_tol",
    "layers",
    "activation",
    "alternation",
    "post_linearize",
    "normalize_input",
    "pca_dim",
    "k",
    "seed",
    "kmeans_restarts",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::invalid(format!("{key}: cannot parse {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::invalid(format!("{key}: expected true or false, got {value:?}"))),
    }
}

impl RunConfig {
    /// Parses `key = value` lines. `#` starts a comment; unknown or
    /// repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<&str> = Vec::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: Error| e.context(format!("config line {}", line_no + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(Error::invalid(format!("expected key = value, got {line:?}"))))?;
            let (key, value) = (key.trim(), value.trim());
            let Some(known) = KEYS.iter().find(|k| **k == key) else {
                return Err(at(Error::invalid(format!("unknown key {key:?}"))));
            };
            if seen.contains(known) {
                return Err(at(Error::invalid(format!("duplicate key {key:?}"))));
            }
            seen.push(known);
            cfg.set(key, value).map_err(at)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::ingest(path, format!("cannot read config: {e}")))?;
        RunConfig::parse(&text).map_err(|e| e.context(path.display().to_string()))
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let t = &mut self.trainer;
        match key {
            "method" => self.method = value.parse()?,
            "gamma" => t.gamma = parse(key, value)?,
            "delta" => t.delta = parse(key, value)?,
            "lambda" => {
                t.lambda = if value == "auto" {
                    LambdaMode::Auto
                } else {
                    LambdaMode::Explicit(parse(key, value)?)
                }
            }
            "mu" => t.mu = parse(key, value)?,
            "tau" => t.tau = parse(key, value)?,
            "conv_tol" => t.conv_tol = parse(key, value)?,
            "layers" => {
                t.layer_dims = value
                    .split(',')
                    .map(|v| parse::<usize>(key, v.trim()))
                    .collect::<Result<_>>()?
            }
            "activation" => t.activation = value.parse::<ActivationKind>()?,
            "alternation" => t.alternation = value.parse()?,
            "post_linearize" => t.post_linearize = parse_bool(key, value)?,
            "normalize_input" => t.normalize_input = parse_bool(key, value)?,
            "pca_dim" => {
                self.pca_dim = if value == "none" {
                    None
                } else {
                    Some(parse(key, value)?)
                }
            }
            "k" => self.k = Some(parse(key, value)?),
            "seed" => t.seed = parse(key, value)?,
            "kmeans_restarts" => self.kmeans_restarts = parse(key, value)?,
            _ => unreachable!("key list checked by caller"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.trainer.validate()?;
        if let Some(k) = self.k {
            if k < 2 {
                return Err(Error::invalid("k must be at least 2"));
            }
        }
        if self.kmeans_restarts == 0 {
            return Err(Error::invalid("kmeans_restarts must be at least 1"));
        }
        if self.trainer.layer_dims.is_empty() || self.trainer.layer_dims.contains(&0) {
            return Err(Error::invalid("layers must be a list of positive widths"));
        }
        Ok(())
    }

    /// Serializes back to the file format.
    pub fn to_text(&self) -> String {
        let t = &self.trainer;
        let lambda = match t.lambda {
            LambdaMode::Auto => "auto".to_string(),
            LambdaMode::Explicit(v) => v.to_string(),
        };
        let layers: Vec<String> = t.layer_dims.iter().map(|d| d.to_string()).collect();
        let mut out = format!(
            "method = {}\ngamma = {}\ndelta = {}\nlambda = {lambda}\nmu = {}\ntau = {}\nconv_tol = {}\n\
             layers = {}\nactivation = {}\nalternation = {}\npost_linearize = {}\nnormalize_input = {}\n\
             seed = {}\nkmeans_restarts = {}\n",
            self.method.name(),
            t.gamma,
            t.delta,
            t.mu,
            t.tau,
            t.conv_tol,
            layers.join(","),
            t.activation,
            match t.alternation {
                crate::trainer::Alternation::PerSample => "per_sample",
                crate::trainer::Alternation::PerEpoch => "per_epoch",
            },
            t.post_linearize,
            t.normalize_input,
            t.seed,
            self.kmeans_restarts,
        );
        if let Some(p) = self.pca_dim {
            out.push_str(&format!("pca_dim = {p}\n"));
        }
        if let Some(k) = self.k {
            out.push_str(&format!("k = {k}\n"));
        }
        out
    }
}
