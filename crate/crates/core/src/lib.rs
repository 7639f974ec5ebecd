//! Decomposable hybrid time-series forecasting.
//!
//! The model composes interpretable modules (piecewise-linear trend,
//! Fourier seasonality, events, future regressors, auto-regression and
//! lagged regressors), each contributing additively or scaled by the
//! trend to an `h`-step forecast, trained end to end by mini-batch
//! gradient descent with hand-rolled exact gradients.

// index-window arithmetic reads better as explicit loops here
#![allow(clippy::needless_range_loop)]

pub mod components;
pub mod config_file;
pub mod data;
pub mod error;
pub mod eval;
pub mod lagged;
pub mod model;
pub mod synth;
pub mod train;

pub use error::{Error, Result};
pub use model::{fit, predict, FittedModel, ModelConfig};
