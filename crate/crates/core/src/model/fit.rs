//! The fit pipeline: preprocessing, hyperparameter resolution, and the
//! shuffled mini-batch training loop with the 1cycle schedule and ramped
//! regularization. Deterministic given the seed.

use super::config::{resolve, ModelConfig, ModelSpec, PenaltyKind};
use super::network::{Network, Scratch};
use super::params::ParamLayout;
use super::FittedModel;
use crate::data::{
    design_matrix, impute_slice, normalize_slice, tabularize, Frame, NormMode, NormState, SampleSet,
};
use crate::error::{Error, Result};
use crate::lagged;
use crate::train::{
    batch_size_heuristic, epochs_heuristic, lr_finder, lr_test_iterations, one_cycle_lr,
    reg::{self, log_penalty, log_penalty_grad},
    Optimizer, TrainConfig,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::ops::Range;

/// Per-epoch training metrics in normalized space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub loss: f64,
    pub rmse: f64,
    pub mae: f64,
}

/// Everything `fit` produces besides the model itself.
#[derive(Debug)]
pub struct FitReport {
    pub model: FittedModel,
    pub epochs: Vec<EpochRecord>,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub n_epochs: usize,
    pub sample_count: usize,
    pub warnings: Vec<String>,
}

/// Preprocessed training inputs: imputed raw-scale frame plus normalized
/// series and their states.
pub(crate) struct Prepared {
    pub frame: Frame,
    pub y_norm: Vec<f64>,
    pub y_state: NormState,
    pub covariates: Vec<Vec<f64>>,
    pub covariate_states: Vec<NormState>,
    pub futures: Vec<Vec<f64>>,
    pub future_states: Vec<NormState>,
    pub warnings: Vec<String>,
}

/// Fits a model to the frame: impute, normalize, tabularize, resolve
/// hyperparameters, then run the mini-batch loop.
pub fn fit(frame: &Frame, config: &ModelConfig, train: &TrainConfig) -> Result<FitReport> {
    train.validate()?;
    let uses_lags = config.ar.is_some() || !config.lagged_regressors.is_empty();
    let mut prepared = preprocess_fit(frame, config, uses_lags)?;
    let spec = resolve(config, &prepared.frame)?;
    let layout = ParamLayout::build(&spec);

    let design = design_matrix(
        &prepared.frame.timestamps,
        &spec,
        std::mem::take(&mut prepared.futures),
    );
    let samples = tabularize(
        &spec,
        design,
        prepared.y_norm.clone(),
        prepared.covariates.clone(),
    )?;

    let t = prepared.frame.len();
    let batch_size = train
        .batch_size
        .unwrap_or_else(|| batch_size_heuristic(t))
        .min(samples.len())
        .max(1);
    let n_epochs = train.epochs.unwrap_or_else(|| epochs_heuristic(t));

    let net = Network::new(&spec, &layout);
    let mut trainer = Trainer::new(&net, &samples, train, &spec, &layout);

    let mut warnings = std::mem::take(&mut prepared.warnings);
    let learning_rate = match train.learning_rate {
        Some(lr) => lr,
        None => match range_test(&mut trainer, &layout, t, batch_size, train.seed) {
            Ok(lr) => lr,
            Err(_) => {
                warnings.push(format!(
                    "learning-rate range test diverged; falling back to {}",
                    lr_finder::LR_FALLBACK
                ));
                lr_finder::LR_FALLBACK
            }
        },
    };

    let mut params = layout.init_params(train.seed);
    let mut optimizer = Optimizer::new(
        train.optimizer,
        layout.len,
        crate::train::optim::DEFAULT_WEIGHT_DECAY,
    );
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(train.seed ^ 0x0bad_5eed);
    let mut order: Vec<usize> = (0..samples.len()).collect();
    let steps_per_epoch = samples.len().div_ceil(batch_size);
    let total_steps = (n_epochs * steps_per_epoch).max(1);
    let mut step = 0usize;
    let mut epochs = Vec::with_capacity(n_epochs);

    for epoch in 0..n_epochs {
        order.shuffle(&mut shuffle_rng);
        let mut loss_sum = 0.0;
        let mut se_sum = 0.0;
        let mut ae_sum = 0.0;
        let mut count = 0usize;
        for chunk in order.chunks(batch_size) {
            let progress = if total_steps > 1 {
                step as f64 / (total_steps - 1) as f64
            } else {
                1.0
            };
            let stats = trainer.batch_step(&params, chunk, progress);
            let lr = one_cycle_lr(progress, learning_rate);
            optimizer.step(&mut params, &trainer.grads, lr)?;
            loss_sum += stats.loss_sum;
            se_sum += stats.se_sum;
            ae_sum += stats.ae_sum;
            count += stats.count;
            step += 1;
        }
        let n = count.max(1) as f64;
        epochs.push(EpochRecord {
            epoch,
            loss: loss_sum / n,
            rmse: (se_sum / n).sqrt(),
            mae: ae_sum / n,
        });
    }

    let model = FittedModel {
        spec,
        layout,
        params,
        y_state: prepared.y_state,
        covariate_states: prepared.covariate_states,
        future_states: prepared.future_states,
    };
    Ok(FitReport {
        model,
        epochs,
        learning_rate,
        batch_size,
        n_epochs,
        sample_count: samples.len(),
        warnings,
    })
}

/// Objective value and analytic gradients of a mini-batch at `params`:
/// mean data loss over `batch` plus regularization ramped by `progress`.
/// Diagnostic surface for gradient verification.
pub fn batch_objective(
    spec: &ModelSpec,
    layout: &ParamLayout,
    samples: &SampleSet,
    train: &TrainConfig,
    params: &[f64],
    batch: &[usize],
    progress: f64,
) -> (f64, Vec<f64>) {
    let net = Network::new(spec, layout);
    let mut trainer = Trainer::new(&net, samples, train, spec, layout);
    let stats = trainer.batch_step(params, batch, progress);
    let objective =
        stats.loss_sum / stats.count.max(1) as f64 + trainer.reg_value(params, progress);
    (objective, trainer.grads)
}

/// Builds the tabularized training inputs for a config without running the
/// fit loop: `(spec, layout, samples)`.
pub fn prepare_training(
    frame: &Frame,
    config: &ModelConfig,
) -> Result<(ModelSpec, ParamLayout, SampleSet)> {
    let uses_lags = config.ar.is_some() || !config.lagged_regressors.is_empty();
    let prepared = preprocess_fit(frame, config, uses_lags)?;
    let spec = resolve(config, &prepared.frame)?;
    let layout = ParamLayout::build(&spec);
    let design = design_matrix(&prepared.frame.timestamps, &spec, prepared.futures);
    let samples = tabularize(&spec, design, prepared.y_norm, prepared.covariates)?;
    Ok((spec, layout, samples))
}

/// Runs the learning-rate range test three times on freshly initialized
/// parameters and returns the log10-mean of the selected rates.
fn range_test(
    trainer: &mut Trainer,
    layout: &ParamLayout,
    series_len: usize,
    batch_size: usize,
    seed: u64,
) -> std::result::Result<f64, crate::error::DivergedTest> {
    let iterations = lr_test_iterations(series_len);
    let lrs = lr_finder::lr_schedule_points(iterations);
    let mut etas = Vec::new();
    for run in 0u64..3 {
        let mut params = layout.init_params(seed ^ (0x17ab_c0de + run));
        let mut optimizer = Optimizer::new(
            trainer.train.optimizer,
            layout.len,
            crate::train::optim::DEFAULT_WEIGHT_DECAY,
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x90_0d1e + run));
        let mut order: Vec<usize> = (0..trainer.samples.len()).collect();
        order.shuffle(&mut rng);
        let mut cursor = 0usize;
        let mut losses = Vec::with_capacity(lrs.len());
        // divergence check on an exponentially smoothed loss so one noisy
        // batch cannot end the sweep
        let ema_beta = lr_finder::LOSS_EMA_BETA;
        let mut ema = 0.0;
        let mut best_smoothed = f64::INFINITY;
        for (iter, &lr) in lrs.iter().enumerate() {
            if cursor + batch_size > order.len() {
                order.shuffle(&mut rng);
                cursor = 0;
            }
            let hi = (cursor + batch_size).min(order.len());
            let chunk: Vec<usize> = order[cursor..hi].to_vec();
            cursor = hi;
            // regularization stays off during the sweep (ramp not started)
            let stats = trainer.batch_step(&params, &chunk, 0.0);
            let loss = stats.loss_sum / stats.count.max(1) as f64;
            ema = ema_beta * ema + (1.0 - ema_beta) * loss;
            let smoothed = ema / (1.0 - ema_beta.powi(iter as i32 + 1));
            if smoothed > 4.0 * best_smoothed {
                break;
            }
            best_smoothed = best_smoothed.min(smoothed);
            losses.push(loss);
            if optimizer.step(&mut params, &trainer.grads, lr).is_err() {
                losses.push(f64::NAN);
                break;
            }
        }
        if let Ok(eta) = lr_finder::select_steepest(&lrs[..losses.len().min(lrs.len())], &losses) {
            etas.push(eta);
        }
    }
    if etas.is_empty() {
        return Err(crate::error::DivergedTest);
    }
    Ok(lr_finder::log10_mean(&etas))
}

pub(crate) struct BatchStats {
    pub loss_sum: f64,
    pub se_sum: f64,
    pub ae_sum: f64,
    pub count: usize,
}

/// One regularized parameter block.
struct RegTarget {
    range: Range<usize>,
    strength: f64,
    penalty: PenaltyKind,
    eps: f64,
}

/// Owns the gradient buffer and scratch space for batch steps.
pub(crate) struct Trainer<'a> {
    net: &'a Network<'a>,
    samples: &'a SampleSet,
    pub train: &'a TrainConfig,
    pub grads: Vec<f64>,
    scratch: Scratch,
    grad_yhat: Vec<f64>,
    reg_targets: Vec<RegTarget>,
}

impl<'a> Trainer<'a> {
    pub fn new(
        net: &'a Network<'a>,
        samples: &'a SampleSet,
        train: &'a TrainConfig,
        spec: &ModelSpec,
        layout: &ParamLayout,
    ) -> Self {
        let mut reg_targets = Vec::new();
        if spec.trend.reg > 0.0 {
            if let Some(g) = &layout.growth {
                reg_targets.push(RegTarget {
                    range: g.deltas.clone(),
                    strength: spec.trend.reg,
                    penalty: PenaltyKind::Default,
                    eps: 1.0,
                });
            }
        }
        if let (Some(ar), Some(ar_layout)) = (&spec.ar, &layout.ar) {
            if ar.sparsity > 0.0 {
                reg_targets.push(RegTarget {
                    range: ar_layout.sparsity_theta(),
                    strength: ar.sparsity,
                    penalty: ar.penalty,
                    eps: 3.0,
                });
            }
        }
        for ((_, m), m_layout) in spec.lagged_regressors.iter().zip(&layout.lagged) {
            if m.sparsity > 0.0 {
                reg_targets.push(RegTarget {
                    range: m_layout.sparsity_theta(),
                    strength: m.sparsity,
                    penalty: m.penalty,
                    eps: 3.0,
                });
            }
        }
        Self {
            net,
            samples,
            train,
            grads: vec![0.0; layout.len],
            scratch: net.scratch(),
            grad_yhat: vec![0.0; spec.horizon],
            reg_targets,
        }
    }

    /// Forward/backward over one batch of sample indices. Gradients are
    /// left in `self.grads`; regularization is ramped by `progress`.
    pub fn batch_step(&mut self, params: &[f64], batch: &[usize], progress: f64) -> BatchStats {
        self.grads.fill(0.0);
        let h = self.samples.h;
        let denom = (batch.len() * h) as f64;
        let beta = self.train.huber_beta;
        let mut stats = BatchStats {
            loss_sum: 0.0,
            se_sum: 0.0,
            ae_sum: 0.0,
            count: 0,
        };
        for &idx in batch {
            let origin = self.samples.origins[idx];
            self.net.forward(
                params,
                &self.samples.design,
                &self.samples.y,
                &self.samples.covariates,
                origin,
                &mut self.scratch,
            );
            for i in 0..h {
                let r = self.samples.y[origin + i] - self.scratch.yhat[i];
                stats.loss_sum += self.train.loss.value(r, beta);
                stats.se_sum += r * r;
                stats.ae_sum += r.abs();
                stats.count += 1;
                self.grad_yhat[i] = self.train.loss.grad_yhat(r, beta) / denom;
            }
            let grad_yhat = std::mem::take(&mut self.grad_yhat);
            self.net.backward(
                params,
                &self.samples.design,
                &grad_yhat,
                origin,
                &mut self.scratch,
                &mut self.grads,
            );
            self.grad_yhat = grad_yhat;
        }
        for target in &self.reg_targets {
            let strength = reg::reg_schedule(progress, target.strength, self.train.reg_ramp_start);
            if strength == 0.0 {
                continue;
            }
            let theta = &params[target.range.clone()];
            match target.penalty {
                PenaltyKind::Default => {
                    let g = &mut self.grads[target.range.clone()];
                    log_penalty_grad(theta, target.eps, 1.0, strength, g);
                }
                PenaltyKind::ArNet => {
                    let g = &mut self.grads[target.range.clone()];
                    lagged::sparsity_grad_arnet(theta, 3.0, 3.0, strength, g);
                }
            }
        }
        stats
    }

    /// Ramped regularization value added to the objective at `progress`;
    /// reported separately from the data loss.
    #[allow(dead_code)]
    pub fn reg_value(&self, params: &[f64], progress: f64) -> f64 {
        self.reg_targets
            .iter()
            .map(|t| {
                let strength = reg::reg_schedule(progress, t.strength, self.train.reg_ramp_start);
                let theta = &params[t.range.clone()];
                match t.penalty {
                    PenaltyKind::Default => strength * log_penalty(theta, t.eps, 1.0),
                    PenaltyKind::ArNet => {
                        strength * lagged::sparsity_penalty_arnet(theta, 3.0, 3.0)
                    }
                }
            })
            .sum()
    }
}

/// Imputes and normalizes a training frame. When imputation aborts, rows
/// with missing targets are dropped and remaining gaps skip samples.
pub(crate) fn preprocess_fit(
    frame: &Frame,
    config: &ModelConfig,
    uses_lags: bool,
) -> Result<Prepared> {
    let mut warnings = Vec::new();
    let mut work = frame.clone();

    if uses_lags && work.y.iter().any(|v| v.is_nan()) {
        match impute_slice(
            &work.y,
            crate::data::DEFAULT_LINEAR_LIMIT,
            crate::data::DEFAULT_ROLLING_LIMIT,
            crate::data::DEFAULT_ROLLING_WINDOW,
        ) {
            Ok(filled) => work.y = filled,
            Err(abort) => {
                warnings.push(format!(
                    "imputation aborted (gap of {} at {}); dropping missing rows",
                    abort.gap_len, abort.at
                ));
                work = work.drop_missing_y();
            }
        }
    }

    // covariates and future regressors impute best-effort; remaining gaps
    // simply skip samples during tabularization
    let impute_col = |values: &[f64], warnings: &mut Vec<String>, name: &str| -> Vec<f64> {
        match impute_slice(
            values,
            crate::data::DEFAULT_LINEAR_LIMIT,
            crate::data::DEFAULT_ROLLING_LIMIT,
            crate::data::DEFAULT_ROLLING_WINDOW,
        ) {
            Ok(filled) => filled,
            Err(abort) => {
                warnings.push(format!(
                    "column '{name}': gap of {} at {} left unfilled",
                    abort.gap_len, abort.at
                ));
                values.to_vec()
            }
        }
    };

    let y_nan_free: Vec<f64> = work.y.iter().copied().filter(|v| !v.is_nan()).collect();
    if y_nan_free.is_empty() {
        return Err(Error::InsufficientData {
            required: 1,
            actual: 0,
        });
    }
    let (y_norm, y_state) =
        normalize_or_fallback(&work.y, config.normalization, "y", &mut warnings)?;

    let mut covariates = Vec::new();
    let mut covariate_states = Vec::new();
    for l in &config.lagged_regressors {
        let raw = work
            .extra(&l.name)
            .ok_or_else(|| Error::Config(format!("lagged regressor '{}' missing", l.name)))?
            .to_vec();
        let imputed = impute_col(&raw, &mut warnings, &l.name);
        let (norm, state) =
            normalize_or_fallback(&imputed, NormMode::Auto, &l.name, &mut warnings)?;
        covariates.push(norm);
        covariate_states.push(state);
    }

    let mut futures = Vec::new();
    let mut future_states = Vec::new();
    for f in &config.future_regressors {
        let raw = work
            .extra(&f.name)
            .ok_or_else(|| Error::Config(format!("future regressor '{}' missing", f.name)))?
            .to_vec();
        let imputed = impute_col(&raw, &mut warnings, &f.name);
        let (norm, state) =
            normalize_or_fallback(&imputed, NormMode::Auto, &f.name, &mut warnings)?;
        futures.push(norm);
        future_states.push(state);
    }

    Ok(Prepared {
        frame: work,
        y_norm,
        y_state,
        covariates,
        covariate_states,
        futures,
        future_states,
        warnings,
    })
}

fn normalize_or_fallback(
    values: &[f64],
    mode: NormMode,
    name: &str,
    warnings: &mut Vec<String>,
) -> Result<(Vec<f64>, NormState)> {
    match normalize_slice(values, mode) {
        Ok(out) => Ok(out),
        Err(Error::DegenerateScale { .. }) => {
            warnings.push(format!(
                "column '{name}' is constant; normalization disabled"
            ));
            normalize_slice(values, NormMode::Off)
        }
        Err(e) => Err(e),
    }
}
