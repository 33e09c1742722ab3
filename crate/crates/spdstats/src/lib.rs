//! Non-Euclidean statistics for symmetric positive semi-definite matrices.
//!
//! Covariance matrices — diffusion tensors in particular — live in a cone,
//! not a vector space, and averaging or interpolating them with plain
//! Euclidean arithmetic distorts shape and volume. This crate provides the
//! standard family of alternatives under one interface:
//!
//! - eight inter-matrix distances (Euclidean, log-Euclidean, affine-invariant
//!   Riemannian, Cholesky, root-Euclidean, Procrustes size-and-shape, full
//!   Procrustes, power-Euclidean), see [`metric`];
//! - the matching Fréchet mean estimator for each, including the Generalized
//!   Procrustes Algorithm and the Riemannian fixed-point mean, see [`mean`];
//! - minimal geodesics and tensor-field interpolation by weighted Fréchet
//!   means, see [`geodesic`];
//! - tangent-space principal component analysis about the Procrustes mean,
//!   see [`tangent`];
//! - scalar anisotropy measures (FA, PA, GA and the power-metric FA(α)),
//!   see [`anisotropy`];
//! - a deterministic Monte Carlo harness comparing the estimators by RMSE
//!   and Stein loss under four error models, see [`sim`];
//! - a noise-free diffusion-weighted-imaging forward model, a log-linear
//!   least squares tensor fit and tensor-field file I/O, see [`dwi`] and
//!   [`field`].
//!
//! The `examples/` directory exercises each capability end to end; the
//! `spdstats` binary exposes the same functionality as subcommands.

pub mod anisotropy;
pub mod cli;
pub mod dwi;
pub mod error;
pub mod field;
pub mod geodesic;
pub mod linalg;
pub mod mean;
pub mod metric;
pub mod rng;
pub mod sim;
pub mod synth;
pub mod tangent;

pub use error::{Error, Result};
pub use linalg::{FactorMat, LowerTri, Mat, SpdMat, SymMat};
pub use metric::MetricKind;
