//! Flat-parameter optimizers: AdamW (default) and SGD with momentum.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    #[default]
    AdamW,
    Sgd,
}

impl OptimizerKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "adamw" => Ok(Self::AdamW),
            "sgd" => Ok(Self::Sgd),
            other => Err(Error::Config(format!(
                "unknown optimizer '{other}' (expected adamw or sgd)"
            ))),
        }
    }
}

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;
const SGD_MOMENTUM: f64 = 0.9;
pub const DEFAULT_WEIGHT_DECAY: f64 = 1e-4;

/// Optimizer state over one flat parameter vector.
#[derive(Debug, Clone)]
pub struct Optimizer {
    kind: OptimizerKind,
    weight_decay: f64,
    step: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl Optimizer {
    pub fn new(kind: OptimizerKind, param_count: usize, weight_decay: f64) -> Self {
        Self {
            kind,
            weight_decay,
            step: 0,
            m: vec![0.0; param_count],
            v: match kind {
                OptimizerKind::AdamW => vec![0.0; param_count],
                OptimizerKind::Sgd => Vec::new(),
            },
        }
    }

    /// Applies one update. Fails with [`Error::NonFiniteGradient`] if any
    /// gradient entry is NaN or infinite.
    pub fn step(&mut self, params: &mut [f64], grads: &[f64], lr: f64) -> Result<()> {
        debug_assert_eq!(params.len(), grads.len());
        if let Some(i) = grads.iter().position(|g| !g.is_finite()) {
            return Err(Error::NonFiniteGradient {
                step: self.step as usize,
                detail: format!("gradient[{i}] = {}", grads[i]),
            });
        }
        self.step += 1;
        match self.kind {
            OptimizerKind::AdamW => {
                let bc1 = 1.0 - ADAM_BETA1.powi(self.step as i32);
                let bc2 = 1.0 - ADAM_BETA2.powi(self.step as i32);
                for i in 0..params.len() {
                    // decoupled weight decay
                    params[i] -= lr * self.weight_decay * params[i];
                    self.m[i] = ADAM_BETA1 * self.m[i] + (1.0 - ADAM_BETA1) * grads[i];
                    self.v[i] = ADAM_BETA2 * self.v[i] + (1.0 - ADAM_BETA2) * grads[i] * grads[i];
                    let m_hat = self.m[i] / bc1;
                    let v_hat = self.v[i] / bc2;
                    params[i] -= lr * m_hat / (v_hat.sqrt() + ADAM_EPS);
                }
            }
            OptimizerKind::Sgd => {
                for i in 0..params.len() {
                    let g = grads[i] + self.weight_decay * params[i];
                    self.m[i] = SGD_MOMENTUM * self.m[i] + g;
                    params[i] -= lr * self.m[i];
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_zero_decay_leaves_params() {
        for kind in [OptimizerKind::AdamW, OptimizerKind::Sgd] {
            let mut opt = Optimizer::new(kind, 3, 0.0);
            let mut params = vec![1.0, -2.0, 0.5];
            let before = params.clone();
            opt.step(&mut params, &[0.0, 0.0, 0.0], 0.1).unwrap();
            assert_eq!(params, before);
        }
    }

    #[test]
    fn plain_sgd_step() {
        let mut opt = Optimizer::new(OptimizerKind::Sgd, 1, 0.0);
        let mut params = vec![1.0];
        opt.step(&mut params, &[2.0], 0.1).unwrap();
        assert!((params[0] - (1.0 - 0.1 * 2.0)).abs() < 1e-15);
    }

    #[test]
    fn adamw_first_step_is_nearly_minus_lr() {
        let mut opt = Optimizer::new(OptimizerKind::AdamW, 1, 0.0);
        let mut params = vec![0.0];
        let lr = 0.05;
        opt.step(&mut params, &[1.0], lr).unwrap();
        // bias correction makes m_hat = v_hat = 1 on the first step
        let want = -lr / (1.0 + ADAM_EPS);
        assert!((params[0] - want).abs() < 1e-12);
    }

    #[test]
    fn non_finite_gradient_is_an_error() {
        let mut opt = Optimizer::new(OptimizerKind::AdamW, 2, 0.0);
        let mut params = vec![0.0, 0.0];
        let err = opt.step(&mut params, &[0.0, f64::NAN], 0.1).unwrap_err();
        assert!(matches!(err, Error::NonFiniteGradient { .. }));
    }

    #[test]
    fn adamw_converges_on_convex_quadratic() {
        // loss = 0.5 * sum((p - target)^2)
        let target = [3.0, -1.5, 0.25];
        let mut params = vec![0.0; 3];
        let mut opt = Optimizer::new(OptimizerKind::AdamW, 3, 0.0);
        let loss = |p: &[f64]| -> f64 {
            p.iter()
                .zip(&target)
                .map(|(x, t)| 0.5 * (x - t) * (x - t))
                .sum()
        };
        let initial = loss(&params);
        for _ in 0..200 {
            let grads: Vec<f64> = params.iter().zip(&target).map(|(x, t)| x - t).collect();
            opt.step(&mut params, &grads, 0.1).unwrap();
        }
        assert!(loss(&params) < 0.01 * initial);
    }
}
