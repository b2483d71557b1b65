//! Deep sparse subspace clustering.
//!
//! A small fully connected network maps samples into a latent space where
//! each sample is sparsely reconstructed from the others. Network weights
//! and the self-expressive coefficient matrix `C` are learned by
//! alternating minimization; `|C| + |C|ᵀ` then feeds spectral clustering.
//! The shallow baseline (sparse subspace clustering on the raw inputs) is
//! the same pipeline with no network.
//!
//! ```
//! use dssc::data::{gen_linear_subspaces, normalize_columns, SynthSpec, Warp};
//! use dssc::{metrics, spectral, trainer};
//!
//! let spec = SynthSpec {
//!     num_subspaces: 2,
//!     ambient_dim: 10,
//!     subspace_dim: 2,
//!     points_per: 15,
//!     noise_sigma: 0.0,
//!     warp: Warp::Identity,
//!     seed: 1,
//! };
//! let data = gen_linear_subspaces(&spec)?;
//! let x = normalize_columns(&data.x);
//! let c = trainer::ssc_baseline(&x, 0.01, 1e-4)?;
//! let a = spectral::build_affinity(&c);
//! let pred = spectral::spectral_cluster(&a, 2, 10, 0)?;
//! let acc = metrics::accuracy(&pred.labels, data.labels.as_ref().unwrap())?;
//! assert_eq!(acc, 1.0);
//! # Ok::<(), dssc::Error>(())
//! ```
//!
//! The `book/` directory at the repository root walks through each stage;
//! its code listings are compiled and run as doctests of this crate.

pub mod cli;
pub mod data;
mod error;
pub mod linalg;
pub mod metrics;
pub mod network;
pub mod sparse;
pub mod spectral;
pub mod trainer;

pub use error::{Error, Result};
pub use linalg::Matrix;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/self_expression.md")]
    mod self_expression {}
    #[doc = include_str!("../../../book/src/homotopy.md")]
    mod homotopy {}
    #[doc = include_str!("../../../book/src/network.md")]
    mod network {}
    #[doc = include_str!("../../../book/src/training.md")]
    mod training {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
