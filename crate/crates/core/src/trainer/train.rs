//! The training loop: hybrid-optimize the head slice against batch RMSE.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{NetworkSpec, SearchSlice, Weights};
use crate::optimizer::{g_hho_optimize, RunConfig, SearchSpace};
use crate::rng::{RngContext, StreamDomain};
use crate::scalar::Real;
use crate::util::peak_rss_bytes;

use super::fitness::HeadFitness;
use super::report::{trace_rows, EpochPoint, TimingReport, TrainReport};
use super::{Dataset, FeatureScaler, Split};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainOptions {
    /// Which trailing dense layers the optimizer tunes.
    pub slice: SearchSlice,
    /// Symmetric search-space bound per tuned weight.
    pub weight_bound: f64,
    /// Fitness batch cap; the effective batch is `min(cap, train size)`.
    pub batch_cap: usize,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self { slice: SearchSlice::default(), weight_bound: 1.0, batch_cap: 1024 }
    }
}

/// Train the head: seeded He initialization for the trunk, a fixed seeded
/// fitness batch, and the two-phase hybrid search over the head slice.
/// Returns the weights with the best head installed plus the full report.
pub fn train<F: Real>(
    dataset: &Dataset<F>,
    spec: &NetworkSpec,
    run_config: &RunConfig,
    options: &TrainOptions,
) -> Result<(Weights<F>, TrainReport)> {
    let start = Instant::now();
    let train_indices: Vec<usize> = dataset.indices_of(Split::Train);
    let test_indices: Vec<usize> = dataset.indices_of(Split::Test);
    if train_indices.len() < 2 {
        return Err(Error::contract("training requires at least 2 train items"));
    }
    if options.weight_bound <= 0.0 {
        return Err(Error::contract("weight_bound must be positive"));
    }
    if options.batch_cap == 0 {
        return Err(Error::contract("batch_cap must be >= 1"));
    }

    let mut weights = Weights::<F>::init_he(spec, run_config.seed)?;
    let scaler = FeatureScaler::fit(
        train_indices.iter().map(|&i| &dataset.items()[i].features),
    );

    // Fixed seeded batch: one subset per run, not resampled per call, so the
    // objective stays deterministic.
    let batch_size = options.batch_cap.min(train_indices.len());
    let mut shuffled = train_indices.clone();
    let mut rng = RngContext::new(run_config.seed).stream(StreamDomain::Batch, 0, 0);
    for i in (1..shuffled.len()).rev() {
        let j = rand::Rng::gen_range(&mut rng, 0..=i);
        shuffled.swap(i, j);
    }
    let batch: Vec<usize> = shuffled[..batch_size].to_vec();

    let all_items: Vec<&super::DatasetItem<F>> = dataset.items().iter().collect();
    let fitness =
        HeadFitness::new(spec, &weights, &scaler, &all_items, batch, options.slice)?;
    let space = SearchSpace::symmetric(fitness.dim(), F::from_f64(options.weight_bound))?;

    let (best, trace) = g_hho_optimize(run_config, &space, &fitness)?;
    let best_position = best.position.clone();
    let best_rmse = best.fitness()?.to_f64_lossy();

    let curves: Vec<EpochPoint> = trace
        .records()
        .iter()
        .map(|record| {
            let position = &record.best_position;
            Ok(EpochPoint {
                epoch: record.iteration,
                train_loss: fitness.rmse(position, &train_indices)?.to_f64_lossy(),
                test_loss: if test_indices.is_empty() {
                    f64::NAN
                } else {
                    fitness.rmse(position, &test_indices)?.to_f64_lossy()
                },
                train_acc: fitness.accuracy(position, &train_indices)?,
                test_acc: if test_indices.is_empty() {
                    f64::NAN
                } else {
                    fitness.accuracy(position, &test_indices)?
                },
            })
        })
        .collect::<Result<_>>()?;

    let confusion = if test_indices.is_empty() {
        fitness.confusion(&best_position, &train_indices)?
    } else {
        fitness.confusion(&best_position, &test_indices)?
    };
    let train_metrics = fitness.confusion(&best_position, &train_indices)?.metrics();
    let test_metrics = confusion.metrics();

    let range = weights.slice_range(options.slice)?;
    weights.write_slice(range, &best_position)?;

    let report = TrainReport {
        seed: run_config.seed,
        run_config: run_config.clone(),
        search_dim: fitness.dim(),
        batch_size,
        train_items: train_indices.len(),
        test_items: test_indices.len(),
        best_rmse,
        evaluations: trace.final_evaluations(),
        confusion,
        train_metrics,
        test_metrics,
        curves,
        trace: trace_rows(&trace),
        timing: TimingReport {
            wall_clock_seconds: start.elapsed().as_secs_f64(),
            peak_memory_bytes: peak_rss_bytes(),
        },
    };
    Ok((weights, report))
}
