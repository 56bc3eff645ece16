//! Full-forward evaluation over a dataset split.

use crate::error::{Error, Result};
use crate::network::{forward, DropoutMode, NetworkSpec, Tensor, Weights};
use crate::scalar::Real;

use super::{Class, ConfusionMatrix, DatasetItem, FeatureScaler};

fn class_probabilities<F: Real>(
    spec: &NetworkSpec,
    weights: &Weights<F>,
    scaler: &FeatureScaler,
    item: &DatasetItem<F>,
) -> Result<Vec<F>> {
    let image = Tensor::from_image(&item.image);
    let side = scaler.apply(&item.features);
    forward(spec, weights, &image, &side, DropoutMode::Inference)
}

/// Confusion counts over a split; predicted class is the argmax probability
/// with ties going to the negative class.
pub fn evaluate<F: Real>(
    spec: &NetworkSpec,
    weights: &Weights<F>,
    scaler: &FeatureScaler,
    items: &[&DatasetItem<F>],
) -> Result<ConfusionMatrix> {
    if items.is_empty() {
        return Err(Error::contract("evaluate on empty split"));
    }
    let mut cm = ConfusionMatrix::default();
    for item in items {
        let probs = class_probabilities(spec, weights, scaler, item)?;
        let predicted = if probs[1] > probs[0] { Class::Positive } else { Class::Negative };
        cm.record(predicted, item.label);
    }
    Ok(cm)
}

/// `(false positive rate, true positive rate)` per threshold: an item is
/// called positive when its positive-class probability reaches the
/// threshold. A rate with no population is reported as zero.
pub fn roc_points<F: Real>(
    spec: &NetworkSpec,
    weights: &Weights<F>,
    scaler: &FeatureScaler,
    items: &[&DatasetItem<F>],
    thresholds: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let scores: Vec<(f64, Class)> = items
        .iter()
        .map(|item| {
            class_probabilities(spec, weights, scaler, item)
                .map(|p| (p[1].to_f64_lossy(), item.label))
        })
        .collect::<Result<_>>()?;
    let positives = scores.iter().filter(|(_, l)| *l == Class::Positive).count();
    let negatives = scores.len() - positives;
    let mut points = Vec::with_capacity(thresholds.len());
    for &tau in thresholds {
        let mut tp = 0usize;
        let mut fp = 0usize;
        for &(score, label) in &scores {
            if score >= tau {
                match label {
                    Class::Positive => tp += 1,
                    Class::Negative => fp += 1,
                }
            }
        }
        let tpr = if positives > 0 { tp as f64 / positives as f64 } else { 0.0 };
        let fpr = if negatives > 0 { fp as f64 / negatives as f64 } else { 0.0 };
        points.push((fpr, tpr));
    }
    Ok(points)
}
