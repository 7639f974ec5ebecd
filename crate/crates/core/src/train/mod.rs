//! Training: loss functions, regularization with a ramp schedule,
//! optimizers, learning-rate selection, and size heuristics.

pub mod heuristics;
pub mod loss;
pub mod lr_finder;
pub mod optim;
pub mod reg;
pub mod schedule;

pub use heuristics::{batch_size_heuristic, epochs_heuristic, lr_test_iterations};
pub use loss::{huber_loss, LossKind};
pub use optim::{Optimizer, OptimizerKind};
pub use reg::reg_schedule;
pub use schedule::one_cycle_lr;

use serde::{Deserialize, Serialize};

/// Training hyperparameters. Every unset option resolves by a data-size
/// heuristic or the learning-rate range test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub loss: LossKind,
    pub huber_beta: f64,
    pub optimizer: OptimizerKind,
    pub learning_rate: Option<f64>,
    pub batch_size: Option<usize>,
    pub epochs: Option<usize>,
    /// Training-progress fraction at which regularization starts ramping.
    pub reg_ramp_start: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            loss: LossKind::Huber,
            huber_beta: 1.0,
            optimizer: OptimizerKind::AdamW,
            learning_rate: None,
            batch_size: None,
            epochs: None,
            reg_ramp_start: 0.5,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> crate::error::Result<()> {
        let positive = [
            ("huber_beta", self.huber_beta),
            ("learning_rate", self.learning_rate.unwrap_or(1.0)),
        ];
        for (name, v) in positive {
            if v.is_nan() || v <= 0.0 {
                return Err(crate::error::Error::Config(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.reg_ramp_start) {
            return Err(crate::error::Error::Config(format!(
                "reg_ramp_start must lie in [0, 1], got {}",
                self.reg_ramp_start
            )));
        }
        if self.batch_size == Some(0) || self.epochs == Some(0) {
            return Err(crate::error::Error::Config(
                "batch_size and epochs must be at least 1 when set".into(),
            ));
        }
        Ok(())
    }
}
