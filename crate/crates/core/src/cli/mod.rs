//! Command-line driver: `synth`, `cluster` and `eval`.

pub mod config;
pub mod pipeline;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::data::{self, Dataset, SynthSpec, Warp};
use crate::error::{Error, Result};
use crate::metrics;

pub use config::{Method, RunConfig};
pub use pipeline::{run, ClusterReport, RunOutput};

#[derive(Debug, Parser)]
#[command(name = "dssc", version, about = "Deep sparse subspace clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SynthKind {
    Linear,
    Nonlinear,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic union-of-subspaces dataset.
    Synth {
        #[arg(long, value_enum)]
        kind: SynthKind,
        #[arg(long)]
        subspaces: usize,
        /// Ambient dimension.
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        subdim: usize,
        /// Points per subspace.
        #[arg(long)]
        per: usize,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        labels: PathBuf,
    },
    /// Cluster a dataset with SSC or DSSC.
    Cluster {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Ground-truth labels; enables the metrics in the report.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Report JSON.
        #[arg(long)]
        out: PathBuf,
        /// Predicted labels, one per line.
        #[arg(long)]
        pred: PathBuf,
        /// Per-epoch loss trace (DSSC only).
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Record wall-clock seconds in the trace instead of 0.
        #[arg(long)]
        timing: bool,
    },
    /// Print ACC, NMI, ARI and F-score of two label files as JSON.
    Eval {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        truth: PathBuf,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(stdout) => {
            if !stdout.is_empty() {
                println!("{stdout}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Runs a command; the returned string goes to standard output.
pub fn execute(command: Command) -> Result<String> {
    match command {
        Command::Synth {
            kind,
            subspaces,
            dim,
            subdim,
            per,
            noise,
            seed,
            out,
            labels,
        } => {
            let spec = SynthSpec {
                num_subspaces: subspaces,
                ambient_dim: dim,
                subspace_dim: subdim,
                points_per: per,
                noise_sigma: noise,
                warp: match kind {
                    SynthKind::Linear => Warp::Identity,
                    SynthKind::Nonlinear => Warp::CubicRotate,
                },
                seed,
            };
            let ds = data::generate(&spec)?.dataset;
            let truth = ds.labels.as_deref().expect("generator labels");
            write_all(&[
                (&out, data::matrix_to_csv(&ds.x)),
                (&labels, data::labels_to_string(truth)),
            ])?;
            Ok(String::new())
        }
        Command::Cluster {
            config,
            data: data_path,
            labels,
            out,
            pred,
            trace,
            timing,
        } => {
            let cfg = RunConfig::load(&config)?;
            let x = data::load_matrix_csv(&data_path)?;
            let truth = labels.as_ref().map(data::load_labels).transpose()?;
            let ds = Dataset::new(x, truth)?;
            let result = run(&ds, &cfg)?;
            let mut files = vec![
                (&pred, data::labels_to_string(&result.labels)),
                (&out, result.report.to_json_string()),
            ];
            if let Some(path) = &trace {
                let t = result.trace.clone().unwrap_or_default();
                files.push((path, pipeline::trace_csv(&t, timing)));
            }
            write_all(&files)?;
            Ok(String::new())
        }
        Command::Eval { pred, truth } => {
            let p = data::load_labels(&pred)?;
            let t = data::load_labels(&truth)?;
            let scores = metrics::evaluate(&p, &t)?;
            Ok(pipeline::scores_json(&scores))
        }
    }
}

/// Writes every file or none: on the first failure, files already written
/// are removed.
fn write_all(files: &[(&PathBuf, String)]) -> Result<()> {
    let mut written: Vec<&Path> = Vec::new();
    for (path, contents) in files {
        if let Err(e) = fs::write(path, contents) {
            for p in written {
                let _ = fs::remove_file(p);
            }
            return Err(Error::ingest(path.as_path(), format!("cannot write: {e}")));
        }
        written.push(path.as_path());
    }
    Ok(())
}
