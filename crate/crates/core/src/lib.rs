//! Hybrid quantum-classical LSTM-attention models for spatial permeability
//! prediction from well logs.
//!
//! The crate is organised bottom-up:
//!
//! - [`qsim`]: dense statevector simulation of the variational encoder with
//!   parameter-shift gradients.
//! - [`nncore`]: dense kernels (linear, activations, softmax, attention,
//!   dropout, Huber loss, Adam) with analytic backward passes.
//! - [`network`]: classical LSTM, shared-gate and independent-gate quantum
//!   LSTM cells, the attention + dense head, and backpropagation through time.
//! - [`dataio`]: well model, CSV I/O, log/min-max transforms, natural cubic
//!   spline resampling and a synthetic delta-plain well generator.
//! - [`training`]: full-batch training, checkpointing, multi-run averaging.
//! - [`evaluation`]: MAE/RMSE reports, error-evolution curves and a
//!   facies-aware inverse-distance baseline.
//! - [`cli`]: the `qlstma` command-line tool.

pub mod cli;
pub mod dataio;
pub mod error;
pub mod evaluation;
pub mod network;
pub mod nncore;
pub mod qsim;
pub mod training;

pub use error::{Error, Result};
