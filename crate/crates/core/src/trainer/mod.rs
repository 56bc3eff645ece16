//! Training and evaluation: wires the hybrid optimizer to the classifier
//! head with a batch-RMSE objective, manages splits, and computes the
//! confusion-matrix metrics.

mod fitness;
mod metrics;
mod report;
mod synth;
mod train;

pub use fitness::{rmse_fitness, HeadFitness};
pub use metrics::{evaluate, roc_points};
pub use report::{write_roc_csv, EpochPoint, TimingReport, TraceRow, TrainReport};
pub use synth::blob_dataset;
pub use train::{train, TrainOptions};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::rng::{RngContext, StreamDomain};
use crate::scalar::Real;
use crate::segmentation::GrayImage;

/// Binary class label; tumor is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Negative = 0,
    Positive = 1,
}

impl Class {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Self {
        if index == 1 {
            Class::Positive
        } else {
            Class::Negative
        }
    }

    /// One-hot target over the two classes.
    pub fn one_hot<F: Real>(self) -> [F; 2] {
        match self {
            Class::Negative => [F::one(), F::zero()],
            Class::Positive => [F::zero(), F::one()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

/// One labeled example: the network input image plus its side features.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetItem<F: Real> {
    pub image: GrayImage,
    pub features: FeatureVector<F>,
    pub label: Class,
    pub split: Split,
}

/// Labeled corpus with train/test assignment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset<F: Real> {
    items: Vec<DatasetItem<F>>,
}

impl<F: Real> Dataset<F> {
    pub fn new(items: Vec<DatasetItem<F>>) -> Self {
        Self { items }
    }

    pub fn push(&mut self, item: DatasetItem<F>) {
        self.items.push(item);
    }

    pub fn items(&self) -> &[DatasetItem<F>] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Seeded shuffle assigning exactly `floor(train_fraction * n)` items to
    /// the train split and the rest to test.
    pub fn assign_splits(&mut self, seed: u64, train_fraction: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&train_fraction) {
            return Err(Error::contract("train_fraction must lie in [0, 1]"));
        }
        let n = self.items.len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = RngContext::new(seed).stream(StreamDomain::Shuffle, 0, 0);
        // Fisher-Yates
        for i in (1..n).rev() {
            let j = rand::Rng::gen_range(&mut rng, 0..=i);
            order.swap(i, j);
        }
        let train_count = (train_fraction * n as f64).floor() as usize;
        for (rank, &idx) in order.iter().enumerate() {
            self.items[idx].split = if rank < train_count { Split::Train } else { Split::Test };
        }
        Ok(())
    }

    pub fn indices_of(&self, split: Split) -> Vec<usize> {
        self.items
            .iter()
            .enumerate()
            .filter(|(_, item)| item.split == split)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn split_items(&self, split: Split) -> Vec<&DatasetItem<F>> {
        self.items.iter().filter(|item| item.split == split).collect()
    }
}

/// Min-max scaler for the three side features, fit on the train split and
/// stored in the model container.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScaler {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl FeatureScaler {
    /// No-op scaler (zero min, unit-range guard maps values through).
    pub fn identity() -> Self {
        Self { min: [0.0; 3], max: [1.0; 3] }
    }

    pub fn fit<'a, F: Real>(features: impl Iterator<Item = &'a FeatureVector<F>>) -> Self {
        let mut min = [f64::INFINITY; 3];
        let mut max = [f64::NEG_INFINITY; 3];
        let mut any = false;
        for fv in features {
            any = true;
            for (k, v) in fv.as_array().into_iter().enumerate() {
                let v = v.to_f64_lossy();
                min[k] = min[k].min(v);
                max[k] = max[k].max(v);
            }
        }
        if !any {
            return Self::identity();
        }
        Self { min, max }
    }

    /// Scale each feature into [0, 1]; a degenerate range maps to zero.
    pub fn apply<F: Real>(&self, features: &FeatureVector<F>) -> [F; 3] {
        let raw = features.as_array();
        let mut out = [F::zero(); 3];
        for k in 0..3 {
            let range = self.max[k] - self.min[k];
            if range > 0.0 {
                let v = (raw[k].to_f64_lossy() - self.min[k]) / range;
                out[k] = F::from_f64(v.clamp(0.0, 1.0));
            }
        }
        out
    }
}

/// Binary confusion counts; positive = tumor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        Self { tp, fp, fn_, tn }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn record(&mut self, predicted: Class, actual: Class) {
        match (predicted, actual) {
            (Class::Positive, Class::Positive) => self.tp += 1,
            (Class::Positive, Class::Negative) => self.fp += 1,
            (Class::Negative, Class::Positive) => self.fn_ += 1,
            (Class::Negative, Class::Negative) => self.tn += 1,
        }
    }

    /// Derived rates; a metric with a zero denominator is undefined, not 0.
    pub fn metrics(&self) -> Metrics {
        let ratio = |num: u64, den: u64| {
            if den == 0 {
                None
            } else {
                Some(num as f64 / den as f64)
            }
        };
        let accuracy = ratio(self.tp + self.tn, self.total());
        let precision = ratio(self.tp, self.tp + self.fp);
        let recall = ratio(self.tp, self.tp + self.fn_);
        let f_measure = match (precision, recall) {
            (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
            _ => None,
        };
        Metrics { accuracy, precision, recall, f_measure }
    }
}

/// Accuracy, precision, recall and F-measure; `None` marks an undefined
/// value (zero denominator).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f_measure: Option<f64>,
}
