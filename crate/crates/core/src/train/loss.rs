//! Training losses. Huber is the default; MSE and MAE are alternatives.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LossKind {
    #[default]
    Huber,
    Mse,
    Mae,
}

impl LossKind {
    pub fn parse(s: &str) -> crate::error::Result<Self> {
        match s {
            "huber" => Ok(Self::Huber),
            "mse" => Ok(Self::Mse),
            "mae" => Ok(Self::Mae),
            other => Err(crate::error::Error::Config(format!(
                "unknown loss '{other}' (expected huber, mse or mae)"
            ))),
        }
    }

    /// Loss value for a single residual `r = y - yhat`.
    pub fn value(&self, r: f64, beta: f64) -> f64 {
        match self {
            Self::Huber => huber_loss_residual(r, beta),
            Self::Mse => r * r,
            Self::Mae => r.abs(),
        }
    }

    /// Derivative of the loss with respect to `yhat`.
    pub fn grad_yhat(&self, r: f64, beta: f64) -> f64 {
        match self {
            Self::Huber => {
                if r.abs() < beta {
                    -r / beta
                } else {
                    -r.signum()
                }
            }
            Self::Mse => -2.0 * r,
            Self::Mae => -r.signum(),
        }
    }
}

/// Huber loss (smooth L1): quadratic below `beta`, linear above.
pub fn huber_loss(y: f64, yhat: f64, beta: f64) -> f64 {
    huber_loss_residual(y - yhat, beta)
}

fn huber_loss_residual(r: f64, beta: f64) -> f64 {
    let a = r.abs();
    if a < beta {
        r * r / (2.0 * beta)
    } else {
        a - beta / 2.0
    }
}
