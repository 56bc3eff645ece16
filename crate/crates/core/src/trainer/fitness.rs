//! Batch-RMSE objective over the tuned head, in two interchangeable forms:
//! a reference path that runs the whole network per call, and a cached path
//! that reuses the fixed trunk activations. Both compute identical values.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::network::{
    forward, softmax, trunk_output, DropoutMode, LayerSpec, NetworkSpec, SearchSlice, Tensor,
    Weights,
};
use crate::optimizer::FitnessFn;
use crate::scalar::Real;

use super::{Class, DatasetItem, FeatureScaler};

fn rmse_from_residuals<F: Real>(sq_sum: F, items: usize, classes: usize) -> F {
    (sq_sum / F::from_f64((items * classes) as f64)).sqrt()
}

/// Reference objective: install `head_weights` into a scratch copy of the
/// full weight vector and run the complete inference path per batch item.
pub fn rmse_fitness<F: Real>(
    head_weights: &[F],
    spec: &NetworkSpec,
    base_weights: &Weights<F>,
    slice: SearchSlice,
    scaler: &FeatureScaler,
    batch: &[&DatasetItem<F>],
) -> Result<F> {
    if batch.is_empty() {
        return Err(Error::contract("rmse_fitness on empty batch"));
    }
    let range = base_weights.slice_range(slice)?;
    if head_weights.len() != range.len() {
        return Err(Error::DimensionMismatch {
            context: "head weight slice",
            expected: range.len(),
            actual: head_weights.len(),
        });
    }
    let mut scratch = base_weights.clone();
    scratch.write_slice(range, head_weights)?;

    let mut sq_sum = F::zero();
    for item in batch {
        let image = Tensor::from_image(&item.image);
        let side = scaler.apply(&item.features);
        let probs = forward(spec, &scratch, &image, &side, DropoutMode::Inference)?;
        let target = item.label.one_hot::<F>();
        for (p, t) in probs.iter().zip(target) {
            let d = *p - t;
            sq_sum = sq_sum + d * d;
        }
    }
    Ok(rmse_from_residuals(sq_sum, batch.len(), spec.classes()))
}

#[derive(Debug, Clone)]
enum HeadStage {
    Dense { units: usize, inputs: usize, relu: bool },
    Softmax,
}

/// Cached objective: per-item trunk activations are computed once; each
/// evaluation runs only the tuned head directly from the position vector.
///
/// Evaluations are read-only and safe to run concurrently.
pub struct HeadFitness<F: Real> {
    stages: Vec<HeadStage>,
    dim: usize,
    classes: usize,
    trunks: Vec<Vec<F>>,
    targets: Vec<Class>,
    batch: Vec<usize>,
}

impl<F: Real> HeadFitness<F> {
    /// Precompute trunk activations for every item; `batch` indexes into
    /// `items` and is the subset the `FitnessFn` evaluations score.
    pub fn new(
        spec: &NetworkSpec,
        weights: &Weights<F>,
        scaler: &FeatureScaler,
        items: &[&DatasetItem<F>],
        batch: Vec<usize>,
        slice: SearchSlice,
    ) -> Result<Self> {
        if batch.is_empty() {
            return Err(Error::contract("head fitness needs a non-empty batch"));
        }
        if let Some(&bad) = batch.iter().find(|&&i| i >= items.len()) {
            return Err(Error::contract(format!("batch index {bad} out of range")));
        }

        // Head structure: dense layers from the first tuned layer onward.
        let dense_indices: Vec<usize> = spec
            .layers
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, LayerSpec::FullyConnected { .. }))
            .map(|(i, _)| i)
            .collect();
        if dense_indices.is_empty() {
            return Err(Error::contract("network has no dense layers"));
        }
        let first_tuned = match slice {
            SearchSlice::FinalFc => *dense_indices.last().unwrap(),
            SearchSlice::LastTwoFc => dense_indices[dense_indices.len().saturating_sub(2)],
        };
        let chain = spec.shape_chain()?;
        let first_dense = dense_indices[0];
        let mut stages = Vec::new();
        let mut dim = 0;
        for (index, layer) in spec.layers.iter().enumerate().skip(first_tuned) {
            match *layer {
                LayerSpec::FullyConnected { units, activation } => {
                    let mut inputs = chain[index].len();
                    if index == first_dense {
                        inputs += spec.side_features;
                    }
                    dim += units * inputs + units;
                    stages.push(HeadStage::Dense {
                        units,
                        inputs,
                        relu: activation == crate::network::Activation::Relu,
                    });
                }
                LayerSpec::Dropout { .. } => {}
                LayerSpec::SoftmaxClassifier { .. } => stages.push(HeadStage::Softmax),
                _ => {
                    return Err(Error::contract(format!(
                        "layer {index}: unexpected spatial layer behind the tuned head"
                    )))
                }
            }
        }

        let trunks: Vec<Vec<F>> = items
            .par_iter()
            .map(|item| {
                let image = Tensor::from_image(&item.image);
                let side = scaler.apply(&item.features);
                trunk_output(spec, weights, &image, &side, slice)
            })
            .collect::<Result<_>>()?;
        let targets = items.iter().map(|item| item.label).collect();
        Ok(Self { stages, dim, classes: spec.classes(), trunks, targets, batch })
    }

    /// Search-space dimensionality (the tuned parameter count).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn batch_len(&self) -> usize {
        self.batch.len()
    }

    /// Class probabilities for one cached item under `position`.
    pub fn probabilities(&self, position: &[F], item: usize) -> Result<Vec<F>> {
        if position.len() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "head position vector",
                expected: self.dim,
                actual: position.len(),
            });
        }
        let mut value = self.trunks[item].clone();
        let mut offset = 0;
        for stage in &self.stages {
            match *stage {
                HeadStage::Dense { units, inputs, relu } => {
                    if value.len() != inputs {
                        return Err(Error::DimensionMismatch {
                            context: "head stage input",
                            expected: inputs,
                            actual: value.len(),
                        });
                    }
                    let matrix = &position[offset..offset + units * inputs];
                    let bias = &position[offset + units * inputs..offset + units * inputs + units];
                    offset += units * inputs + units;
                    let mut next = Vec::with_capacity(units);
                    for u in 0..units {
                        let mut acc = bias[u];
                        let row = &matrix[u * inputs..(u + 1) * inputs];
                        for (w, x) in row.iter().zip(&value) {
                            acc = acc + *w * *x;
                        }
                        next.push(if relu && acc < F::zero() { F::zero() } else { acc });
                    }
                    value = next;
                }
                HeadStage::Softmax => value = softmax(&value),
            }
        }
        Ok(value)
    }

    /// RMSE of probabilities against one-hot targets over `indices`.
    pub fn rmse(&self, position: &[F], indices: &[usize]) -> Result<F> {
        if indices.is_empty() {
            return Err(Error::contract("rmse over empty index set"));
        }
        let mut sq_sum = F::zero();
        for &i in indices {
            let probs = self.probabilities(position, i)?;
            let target = self.targets[i].one_hot::<F>();
            for (p, t) in probs.iter().zip(target) {
                let d = *p - t;
                sq_sum = sq_sum + d * d;
            }
        }
        Ok(rmse_from_residuals(sq_sum, indices.len(), self.classes))
    }

    /// Fraction of `indices` classified correctly (argmax, ties to class 0).
    pub fn accuracy(&self, position: &[F], indices: &[usize]) -> Result<f64> {
        if indices.is_empty() {
            return Err(Error::contract("accuracy over empty index set"));
        }
        let mut hits = 0usize;
        for &i in indices {
            let probs = self.probabilities(position, i)?;
            let predicted = if probs[1] > probs[0] { Class::Positive } else { Class::Negative };
            if predicted == self.targets[i] {
                hits += 1;
            }
        }
        Ok(hits as f64 / indices.len() as f64)
    }

    /// Confusion counts over `indices`.
    pub fn confusion(&self, position: &[F], indices: &[usize]) -> Result<super::ConfusionMatrix> {
        let mut cm = super::ConfusionMatrix::default();
        for &i in indices {
            let probs = self.probabilities(position, i)?;
            let predicted = if probs[1] > probs[0] { Class::Positive } else { Class::Negative };
            cm.record(predicted, self.targets[i]);
        }
        Ok(cm)
    }
}

impl<F: Real> FitnessFn<F> for HeadFitness<F> {
    fn evaluate(&self, position: &[F]) -> Result<F> {
        self.rmse(position, &self.batch)
    }
}
