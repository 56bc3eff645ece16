//! Inference path, whole or split around the tuned head.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::ops::{conv_forward, fc_forward, maxpool, relu, softmax};
use super::weights::{BlockKind, SearchSlice, Weights};
use super::{LayerSpec, NetworkSpec, Tensor};

/// Dropout behavior for one pass.
pub enum DropoutMode<'a> {
    /// Identity; the deterministic inference path.
    Inference,
    /// Bernoulli mask with kept units scaled by `1 / (1 - p)`.
    Sample(&'a mut dyn RngCore),
}

fn first_dense_layer(spec: &NetworkSpec) -> Result<usize> {
    spec.layers
        .iter()
        .position(|l| matches!(l, LayerSpec::FullyConnected { .. }))
        .ok_or_else(|| Error::contract("network has no dense layers"))
}

/// Index of the first layer whose parameters belong to the search slice.
fn first_tuned_layer(spec: &NetworkSpec, slice: SearchSlice) -> Result<usize> {
    let dense: Vec<usize> = spec
        .layers
        .iter()
        .enumerate()
        .filter(|(_, l)| matches!(l, LayerSpec::FullyConnected { .. }))
        .map(|(i, _)| i)
        .collect();
    if dense.is_empty() {
        return Err(Error::contract("network has no dense layers"));
    }
    Ok(match slice {
        SearchSlice::FinalFc => *dense.last().unwrap(),
        SearchSlice::LastTwoFc => dense[dense.len().saturating_sub(2)],
    })
}

fn fc_params<'w, F: Real>(
    weights: &'w Weights<F>,
    layer_index: usize,
) -> Result<(&'w [F], &'w [F])> {
    let blocks = weights.layer_blocks(layer_index);
    let matrix = blocks
        .iter()
        .find(|b| b.kind == BlockKind::FcMatrix)
        .ok_or_else(|| Error::contract(format!("layer {layer_index}: missing dense matrix")))?;
    let bias = blocks
        .iter()
        .find(|b| b.kind == BlockKind::FcBias)
        .ok_or_else(|| Error::contract(format!("layer {layer_index}: missing dense bias")))?;
    Ok((weights.block_slice(matrix), weights.block_slice(bias)))
}

/// Run the spatial section and concatenate the side features: the vector
/// entering the first dense layer.
fn dense_input<F: Real>(
    spec: &NetworkSpec,
    weights: &Weights<F>,
    image: &Tensor<F>,
    side_features: &[F],
) -> Result<Vec<F>> {
    if side_features.len() != spec.side_features {
        return Err(Error::DimensionMismatch {
            context: "side features",
            expected: spec.side_features,
            actual: side_features.len(),
        });
    }
    if image.shape() != (1, spec.input_height, spec.input_width) {
        return Err(Error::DimensionMismatch {
            context: "input image tensor",
            expected: spec.input_height * spec.input_width,
            actual: image.data.len(),
        });
    }
    let stop = first_dense_layer(spec)?;
    let mut value = image.clone();
    for (index, layer) in spec.layers.iter().take(stop).enumerate() {
        value = match *layer {
            LayerSpec::Conv { filters, kernel, stride, padding } => {
                let blocks = weights.layer_blocks(index);
                let kernels = blocks
                    .iter()
                    .find(|b| b.kind == BlockKind::ConvKernel)
                    .ok_or_else(|| Error::contract(format!("layer {index}: missing kernels")))?;
                let biases = blocks
                    .iter()
                    .find(|b| b.kind == BlockKind::ConvBias)
                    .ok_or_else(|| Error::contract(format!("layer {index}: missing biases")))?;
                conv_forward(
                    &value,
                    weights.block_slice(kernels),
                    weights.block_slice(biases),
                    filters,
                    kernel,
                    stride,
                    padding,
                )?
            }
            LayerSpec::Relu => relu(&value),
            LayerSpec::MaxPool { window, stride } => maxpool(&value, window, stride)?,
            _ => {
                return Err(Error::contract(format!(
                    "layer {index}: unexpected dense-section layer in spatial section"
                )))
            }
        };
    }
    let mut flat = value.data;
    flat.extend_from_slice(side_features);
    Ok(flat)
}

/// Run dense layers `[from, until)`; `until` may point past the classifier.
fn run_dense<F: Real>(
    spec: &NetworkSpec,
    weights: &Weights<F>,
    from: usize,
    until: usize,
    mut value: Vec<F>,
    mode: &mut DropoutMode<'_>,
) -> Result<Vec<F>> {
    for (index, layer) in spec.layers.iter().enumerate().take(until).skip(from) {
        value = match *layer {
            LayerSpec::FullyConnected { activation, .. } => {
                let (matrix, bias) = fc_params(weights, index)?;
                fc_forward(&value, matrix, bias, activation).map_err(|e| {
                    Error::contract(format!("layer {index}: {e}"))
                })?
            }
            LayerSpec::Dropout { probability } => match mode {
                DropoutMode::Inference => value,
                DropoutMode::Sample(rng) => {
                    let p = F::from_f64(probability);
                    let keep_scale = F::one() / (F::one() - p);
                    value
                        .into_iter()
                        .map(|v| {
                            if F::unit_uniform(rng) >= p {
                                v * keep_scale
                            } else {
                                F::zero()
                            }
                        })
                        .collect()
                }
            },
            LayerSpec::SoftmaxClassifier { .. } => softmax(&value),
            _ => {
                return Err(Error::contract(format!(
                    "layer {index}: unexpected spatial layer in dense section"
                )))
            }
        };
    }
    Ok(value)
}

/// Pre-softmax logits for one image plus its (already normalized) side
/// features.
pub fn forward_logits<F: Real>(
    spec: &NetworkSpec,
    weights: &Weights<F>,
    image: &Tensor<F>,
    side_features: &[F],
    mut mode: DropoutMode<'_>,
) -> Result<Vec<F>> {
    let start = first_dense_layer(spec)?;
    let input = dense_input(spec, weights, image, side_features)?;
    run_dense(spec, weights, start, spec.layers.len() - 1, input, &mut mode)
}

/// Class probabilities for one image; softmax output sums to one.
pub fn forward<F: Real>(
    spec: &NetworkSpec,
    weights: &Weights<F>,
    image: &Tensor<F>,
    side_features: &[F],
    mode: DropoutMode<'_>,
) -> Result<Vec<F>> {
    Ok(softmax(&forward_logits(spec, weights, image, side_features, mode)?))
}

/// The activation vector entering the first tuned layer, inference mode.
/// It does not depend on the tuned slice, so it can be cached per item.
pub fn trunk_output<F: Real>(
    spec: &NetworkSpec,
    weights: &Weights<F>,
    image: &Tensor<F>,
    side_features: &[F],
    slice: SearchSlice,
) -> Result<Vec<F>> {
    let start = first_dense_layer(spec)?;
    let tuned = first_tuned_layer(spec, slice)?;
    let input = dense_input(spec, weights, image, side_features)?;
    run_dense(spec, weights, start, tuned, input, &mut DropoutMode::Inference)
}

/// Class probabilities from a cached trunk vector, inference mode.
pub fn head_forward<F: Real>(
    spec: &NetworkSpec,
    weights: &Weights<F>,
    trunk: &[F],
    slice: SearchSlice,
) -> Result<Vec<F>> {
    let tuned = first_tuned_layer(spec, slice)?;
    run_dense(
        spec,
        weights,
        tuned,
        spec.layers.len(),
        trunk.to_vec(),
        &mut DropoutMode::Inference,
    )
}
