//! AR-Net: feed-forward auto-regression mapping `p` lags to `h` additive
//! forecast effects, in linear (no hidden layers), deep (ReLU MLP) and
//! sparse (regularized) variants. Lagged-regressor modules reuse the same
//! machinery with covariate histories as inputs.
//!
//! The output layer has no bias and no activation; the linear variant has
//! no biases at all. Parameters live in one flat `f64` vector shared with
//! every other module; [`MlpLayout`] records where each layer sits.

use crate::error::{Error, Result};
use crate::train::reg;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::ops::Range;

/// Shape of one AR-Net module: `p` inputs, `h` outputs and hidden layer
/// dimensions (empty for the linear variant).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlpSpec {
    pub p: usize,
    pub h: usize,
    pub hidden: Vec<usize>,
}

impl MlpSpec {
    pub fn linear(p: usize, h: usize) -> Self {
        Self {
            p,
            h,
            hidden: Vec::new(),
        }
    }

    /// `(rows, cols)` of each weight matrix, input to output.
    pub fn layer_shapes(&self) -> Vec<(usize, usize)> {
        let mut shapes = Vec::with_capacity(self.hidden.len() + 1);
        let mut fan_in = self.p;
        for &d in &self.hidden {
            shapes.push((d, fan_in));
            fan_in = d;
        }
        shapes.push((self.h, fan_in));
        shapes
    }

    pub fn param_count(&self) -> usize {
        let weights: usize = self.layer_shapes().iter().map(|(r, c)| r * c).sum();
        let biases: usize = self.hidden.iter().sum();
        weights + biases
    }
}

/// Placement of one module's weights and biases inside the flat parameter
/// vector. Weight matrices are row-major `[out x in]`; biases exist for
/// hidden layers only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlpLayout {
    pub spec: MlpSpec,
    pub weights: Vec<Range<usize>>,
    pub biases: Vec<Range<usize>>,
}

impl MlpLayout {
    /// Lays the module out starting at `offset`; returns the layout and the
    /// first index past it.
    pub fn place(spec: MlpSpec, offset: usize) -> (Self, usize) {
        let mut cursor = offset;
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for (i, (rows, cols)) in spec.layer_shapes().iter().enumerate() {
            weights.push(cursor..cursor + rows * cols);
            cursor += rows * cols;
            if i < spec.hidden.len() {
                biases.push(cursor..cursor + rows);
                cursor += rows;
            }
        }
        (
            Self {
                spec,
                weights,
                biases,
            },
            cursor,
        )
    }

    /// The sparsity-regularized weight block: the full matrix when linear,
    /// the first layer when deep.
    pub fn sparsity_theta(&self) -> Range<usize> {
        self.weights[0].clone()
    }

    /// Initializes this module's slice of `params`: zeros for the linear
    /// variant; uniform `[-1/sqrt(fan_in), 1/sqrt(fan_in)]` weights and
    /// zero biases when hidden layers are present.
    pub fn init(&self, params: &mut [f64], seed: u64) {
        if self.spec.hidden.is_empty() {
            for i in self.weights[0].clone() {
                params[i] = 0.0;
            }
            return;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (range, (_, cols)) in self.weights.iter().zip(self.spec.layer_shapes()) {
            let bound = 1.0 / (cols as f64).sqrt();
            for i in range.clone() {
                params[i] = rng.random_range(-bound..bound);
            }
        }
        for range in &self.biases {
            for i in range.clone() {
                params[i] = 0.0;
            }
        }
    }
}

/// Reusable buffers for one module's forward and backward passes.
#[derive(Debug, Clone, Default)]
pub struct MlpScratch {
    /// Post-activation values per hidden layer.
    activations: Vec<Vec<f64>>,
    /// Module outputs (length `h`).
    pub output: Vec<f64>,
    delta: Vec<f64>,
    delta_next: Vec<f64>,
}

impl MlpScratch {
    pub fn for_spec(spec: &MlpSpec) -> Self {
        let max_dim = spec.hidden.iter().copied().max().unwrap_or(0).max(spec.h);
        Self {
            activations: spec.hidden.iter().map(|&d| vec![0.0; d]).collect(),
            output: vec![0.0; spec.h],
            delta: vec![0.0; max_dim],
            delta_next: vec![0.0; max_dim],
        }
    }
}

/// Forward pass: `scratch.output` receives the `h` effects.
pub fn mlp_forward(layout: &MlpLayout, params: &[f64], input: &[f64], scratch: &mut MlpScratch) {
    debug_assert_eq!(input.len(), layout.spec.p);
    let shapes = layout.spec.layer_shapes();
    let l = layout.spec.hidden.len();
    if l == 0 {
        matvec(
            &params[layout.weights[0].clone()],
            shapes[0],
            input,
            &mut scratch.output,
        );
        return;
    }
    for layer in 0..l {
        let (before, rest) = scratch.activations.split_at_mut(layer);
        let src: &[f64] = if layer == 0 {
            input
        } else {
            &before[layer - 1]
        };
        let (rows, _) = shapes[layer];
        let w = &params[layout.weights[layer].clone()];
        let b = &params[layout.biases[layer].clone()];
        let out = &mut rest[0];
        matvec(w, shapes[layer], src, out);
        for i in 0..rows {
            out[i] = (out[i] + b[i]).max(0.0);
        }
    }
    matvec(
        &params[layout.weights[l].clone()],
        shapes[l],
        &scratch.activations[l - 1],
        &mut scratch.output,
    );
}

/// Backward pass: accumulates `d loss / d params` into `grads` given
/// `grad_out = d loss / d output`. Must follow a forward pass on the same
/// input so the scratch activations are current.
pub fn mlp_backward(
    layout: &MlpLayout,
    params: &[f64],
    input: &[f64],
    scratch: &mut MlpScratch,
    grad_out: &[f64],
    grads: &mut [f64],
) {
    let shapes = layout.spec.layer_shapes();
    let l = layout.spec.hidden.len();
    if l == 0 {
        let (rows, cols) = shapes[0];
        let g = &mut grads[layout.weights[0].clone()];
        for r in 0..rows {
            for c in 0..cols {
                g[r * cols + c] += grad_out[r] * input[c];
            }
        }
        return;
    }

    let mut delta = std::mem::take(&mut scratch.delta);
    let mut delta_next = std::mem::take(&mut scratch.delta_next);

    // output layer: grad wrt W_{l+1} and delta into the last hidden layer
    let (rows, cols) = shapes[l];
    delta[..cols].fill(0.0);
    {
        let a = &scratch.activations[l - 1];
        let w = &params[layout.weights[l].clone()];
        let g = &mut grads[layout.weights[l].clone()];
        for r in 0..rows {
            for c in 0..cols {
                g[r * cols + c] += grad_out[r] * a[c];
                delta[c] += grad_out[r] * w[r * cols + c];
            }
        }
    }

    for layer in (0..l).rev() {
        let (rows, cols) = shapes[layer];
        // gate through ReLU: dead units pass nothing
        for r in 0..rows {
            if scratch.activations[layer][r] <= 0.0 {
                delta[r] = 0.0;
            }
        }
        let src: &[f64] = if layer == 0 {
            input
        } else {
            &scratch.activations[layer - 1]
        };
        delta_next[..cols].fill(0.0);
        let w = &params[layout.weights[layer].clone()];
        {
            let gw = &mut grads[layout.weights[layer].clone()];
            for r in 0..rows {
                let d = delta[r];
                if d == 0.0 {
                    continue;
                }
                for c in 0..cols {
                    gw[r * cols + c] += d * src[c];
                    delta_next[c] += d * w[r * cols + c];
                }
            }
        }
        let gb = &mut grads[layout.biases[layer].clone()];
        for r in 0..rows {
            gb[r] += delta[r];
        }
        std::mem::swap(&mut delta, &mut delta_next);
    }

    scratch.delta = delta;
    scratch.delta_next = delta_next;
}

fn matvec(w: &[f64], (rows, cols): (usize, usize), x: &[f64], out: &mut [f64]) {
    debug_assert_eq!(w.len(), rows * cols);
    debug_assert_eq!(x.len(), cols);
    for r in 0..rows {
        let row = &w[r * cols..(r + 1) * cols];
        out[r] = row.iter().zip(x).map(|(a, b)| a * b).sum();
    }
}

/// Standalone owned parameters for one AR-Net module; the convenience
/// container used outside the training loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArNetParams {
    pub layout: MlpLayout,
    pub params: Vec<f64>,
}

impl ArNetParams {
    pub fn zeros(spec: MlpSpec) -> Self {
        let (layout, len) = MlpLayout::place(spec, 0);
        Self {
            layout,
            params: vec![0.0; len],
        }
    }

    pub fn linear_from_weights(p: usize, h: usize, weights: Vec<f64>) -> Self {
        assert_eq!(weights.len(), p * h);
        let (layout, _) = MlpLayout::place(MlpSpec::linear(p, h), 0);
        Self {
            layout,
            params: weights,
        }
    }
}

/// Forward pass producing the `h` auto-regressive effects for one lag
/// vector `(y_{t-1}, ..., y_{t-p})`.
pub fn arnet_forward(lags: &[f64], net: &ArNetParams) -> Result<Vec<f64>> {
    if lags.len() != net.layout.spec.p {
        return Err(Error::ShapeMismatch {
            expected: net.layout.spec.p,
            actual: lags.len(),
            context: "AR-Net input lags".into(),
        });
    }
    let mut scratch = MlpScratch::for_spec(&net.layout.spec);
    mlp_forward(&net.layout, &net.params, lags, &mut scratch);
    Ok(scratch.output)
}

/// Forward pass for one lagged-regressor module: functionally identical to
/// [`arnet_forward`] with the covariate's history `(x_{t-1}, ..., x_{t-p})`
/// as input. Each covariate gets its own module so its effect stays
/// individually attributable.
pub fn lagged_reg_forward(covariate_lags: &[f64], net: &ArNetParams) -> Result<Vec<f64>> {
    arnet_forward(covariate_lags, net)
}

/// Default sparsity penalty `L(theta, eps=3, alpha=1)` over the designated
/// weight block.
pub fn sparsity_penalty_default(theta: &[f64]) -> f64 {
    reg::log_penalty(theta, 3.0, 1.0)
}

/// The reference AR-Net regularization
/// `(1/p) sum 2 * (1 + exp(-c1 * |t_i|^(1/c2)))^-1 - 1`; available as an
/// alternative, not the default.
pub fn sparsity_penalty_arnet(theta: &[f64], c1: f64, c2: f64) -> f64 {
    if theta.is_empty() {
        return 0.0;
    }
    let n = theta.len() as f64;
    theta
        .iter()
        .map(|w| 2.0 / (1.0 + (-c1 * w.abs().powf(1.0 / c2)).exp()) - 1.0)
        .sum::<f64>()
        / n
}

/// Gradient of [`sparsity_penalty_arnet`] scaled by `strength`.
pub fn sparsity_grad_arnet(theta: &[f64], c1: f64, c2: f64, strength: f64, grads: &mut [f64]) {
    if theta.is_empty() {
        return;
    }
    let n = theta.len() as f64;
    for (w, g) in theta.iter().zip(grads.iter_mut()) {
        let a = w.abs();
        if a < 1e-12 {
            continue; // subgradient 0 at the non-differentiable origin
        }
        let u = a.powf(1.0 / c2);
        let e = (-c1 * u).exp();
        let sig = 1.0 / (1.0 + e);
        let d = 2.0 * sig * sig * e * c1 * u / (c2 * a) * w.signum();
        *g += strength * d / n;
    }
}

/// Relative importance of each lag: column-wise sums of the absolute first
/// layer weights.
pub fn lag_importance(net: &ArNetParams) -> Vec<f64> {
    let p = net.layout.spec.p;
    let w = &net.params[net.layout.weights[0].clone()];
    let rows = w.len() / p;
    (0..p)
        .map(|c| (0..rows).map(|r| w[r * p + c].abs()).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_forward_is_a_dot_product() {
        let net = ArNetParams::linear_from_weights(2, 1, vec![0.3, 0.3]);
        let out = arnet_forward(&[1.0, 2.0], &net).unwrap();
        assert!((out[0] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn zero_weights_zero_output() {
        let net = ArNetParams::zeros(MlpSpec {
            p: 4,
            h: 3,
            hidden: vec![],
        });
        let out = arnet_forward(&[1.0, -1.0, 2.0, 0.5], &net).unwrap();
        assert_eq!(out, vec![0.0; 3]);
    }

    #[test]
    fn wrong_input_length_is_shape_mismatch() {
        let net = ArNetParams::linear_from_weights(2, 1, vec![0.3, 0.3]);
        assert!(matches!(
            arnet_forward(&[1.0], &net),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn relu_kills_negative_preactivations() {
        // 1 hidden unit fed a negative pre-activation contributes nothing
        let spec = MlpSpec {
            p: 1,
            h: 1,
            hidden: vec![1],
        };
        let mut net = ArNetParams::zeros(spec);
        // W1 = [-1], b1 = 0, W2 = [5]
        net.params[net.layout.weights[0].clone()][0] = -1.0;
        net.params[net.layout.weights[1].clone()][0] = 5.0;
        assert_eq!(arnet_forward(&[2.0], &net).unwrap(), vec![0.0]);
        assert!((arnet_forward(&[-2.0], &net).unwrap()[0] - 10.0).abs() < 1e-15);
    }

    #[test]
    fn exact_linearity_of_linear_variant() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let p = 4;
        let h = 3;
        let weights: Vec<f64> = (0..p * h).map(|_| rng.random_range(-1.0..1.0)).collect();
        let net = ArNetParams::linear_from_weights(p, h, weights.clone());
        let lags: Vec<f64> = (0..p).map(|_| rng.random_range(-2.0..2.0)).collect();
        let base = arnet_forward(&lags, &net).unwrap();
        for j in 0..p {
            let delta = 0.37;
            let mut bumped = lags.clone();
            bumped[j] += delta;
            let out = arnet_forward(&bumped, &net).unwrap();
            for i in 0..h {
                let want = base[i] + weights[i * p + j] * delta;
                assert!((out[i] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bias_free_deep_net_is_positively_homogeneous() {
        let spec = MlpSpec {
            p: 3,
            h: 2,
            hidden: vec![4, 4],
        };
        let (layout, len) = MlpLayout::place(spec.clone(), 0);
        let mut params = vec![0.0; len];
        layout.init(&mut params, 99);
        // init leaves biases at zero
        let net = ArNetParams { layout, params };
        let x = [0.4, -1.2, 0.8];
        let base = arnet_forward(&x, &net).unwrap();
        let s = 2.5;
        let scaled: Vec<f64> = x.iter().map(|v| v * s).collect();
        let out = arnet_forward(&scaled, &net).unwrap();
        for (a, b) in base.iter().zip(&out) {
            assert!((a * s - b).abs() < 1e-12);
        }
    }

    #[test]
    fn lagged_regressor_selects_configured_lags() {
        // W = [1, 0, 0] picks x_{t-1}
        let net = ArNetParams::linear_from_weights(3, 1, vec![1.0, 0.0, 0.0]);
        let out = lagged_reg_forward(&[5.0, 7.0, 9.0], &net).unwrap();
        assert_eq!(out, vec![5.0]);
        // zero history contributes nothing
        assert_eq!(lagged_reg_forward(&[0.0; 3], &net).unwrap(), vec![0.0]);
    }

    #[test]
    fn two_covariate_modules_add() {
        let a = ArNetParams::linear_from_weights(2, 1, vec![0.5, 0.0]);
        let b = ArNetParams::linear_from_weights(2, 1, vec![0.0, 2.0]);
        let la = lagged_reg_forward(&[1.0, 3.0], &a).unwrap();
        let lb = lagged_reg_forward(&[4.0, 0.25], &b).unwrap();
        assert_eq!(la[0] + lb[0], 0.5 + 0.5);
    }

    #[test]
    fn default_penalty_anchors() {
        assert!(sparsity_penalty_default(&[0.0; 5]).abs() < 1e-15);
        // theta = 1 - 1/(3e): the log term vanishes, leaving log(3) + 1
        let theta = 1.0 - 1.0 / (3.0 * std::f64::consts::E);
        let want = 3.0f64.ln() + 1.0;
        assert!((sparsity_penalty_default(&[theta]) - want).abs() < 1e-12);
        // monotone in |theta|
        assert!(sparsity_penalty_default(&[0.5]) < sparsity_penalty_default(&[1.0]));
    }

    #[test]
    fn arnet_penalty_anchors() {
        assert!(sparsity_penalty_arnet(&[0.0], 3.0, 3.0).abs() < 1e-15);
        let want = 2.0 / (1.0 + (-3.0f64).exp()) - 1.0;
        assert!((sparsity_penalty_arnet(&[1.0], 3.0, 3.0) - want).abs() < 1e-12);
        // saturates toward 1 per term
        assert!(sparsity_penalty_arnet(&[1e9], 3.0, 3.0) > 0.999);
    }

    #[test]
    fn arnet_penalty_grad_matches_finite_differences() {
        let theta = [0.4, -1.3, 2.0];
        let h = 1e-7;
        for i in 0..theta.len() {
            let mut up = theta;
            up[i] += h;
            let mut dn = theta;
            dn[i] -= h;
            let num = (sparsity_penalty_arnet(&up, 3.0, 3.0)
                - sparsity_penalty_arnet(&dn, 3.0, 3.0))
                / (2.0 * h);
            let mut grads = vec![0.0; 3];
            sparsity_grad_arnet(&theta, 3.0, 3.0, 1.0, &mut grads);
            assert!(
                (grads[i] - num).abs() < 1e-5,
                "component {i}: {} vs {num}",
                grads[i]
            );
        }
    }

    #[test]
    fn importance_sums_absolute_first_layer_columns() {
        let net = ArNetParams::linear_from_weights(2, 1, vec![0.5, 0.0]);
        assert_eq!(lag_importance(&net), vec![0.5, 0.0]);

        // W_1 = [[1, -2], [0, 1]] -> (1, 3)
        let spec = MlpSpec {
            p: 2,
            h: 1,
            hidden: vec![2],
        };
        let mut net = ArNetParams::zeros(spec);
        let w1 = net.layout.weights[0].clone();
        net.params[w1].copy_from_slice(&[1.0, -2.0, 0.0, 1.0]);
        assert_eq!(lag_importance(&net), vec![1.0, 3.0]);
    }
}
