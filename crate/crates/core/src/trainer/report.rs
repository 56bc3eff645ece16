//! Serializable training report and its CSV companions.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::optimizer::{Phase, RunConfig, Trace};
use crate::scalar::Real;

use super::{ConfusionMatrix, Metrics};

/// One point of the per-iteration learning curves.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EpochPoint {
    pub epoch: usize,
    pub train_loss: f64,
    pub test_loss: f64,
    pub train_acc: f64,
    pub test_acc: f64,
}

/// Trace row without the position vector; enough for the CSV export.
#[derive(Debug, Clone, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub phase: Phase,
    pub best_fitness: f64,
    pub evaluations: u64,
}

/// Wall-clock and memory live apart from the deterministic payload so
/// reports can be diffed across runs.
#[derive(Debug, Clone, Serialize)]
pub struct TimingReport {
    pub wall_clock_seconds: f64,
    pub peak_memory_bytes: Option<u64>,
}

/// Everything `train` learned about the run.
#[derive(Debug, Clone, Serialize)]
pub struct TrainReport {
    pub seed: u64,
    pub run_config: RunConfig,
    pub search_dim: usize,
    pub batch_size: usize,
    pub train_items: usize,
    pub test_items: usize,
    pub best_rmse: f64,
    pub evaluations: u64,
    pub confusion: ConfusionMatrix,
    pub train_metrics: Metrics,
    pub test_metrics: Metrics,
    pub curves: Vec<EpochPoint>,
    pub trace: Vec<TraceRow>,
    pub timing: TimingReport,
}

impl TrainReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| crate::error::Error::contract(format!("report serialization: {e}")))
    }

    /// `epoch,train_loss,test_loss,train_acc,test_acc`
    pub fn write_curves_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "epoch,train_loss,test_loss,train_acc,test_acc")?;
        for p in &self.curves {
            writeln!(
                out,
                "{},{},{},{},{}",
                p.epoch, p.train_loss, p.test_loss, p.train_acc, p.test_acc
            )?;
        }
        Ok(())
    }

    /// Same columns as the optimizer trace CSV.
    pub fn write_trace_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "iteration,phase,best_fitness,evaluations")?;
        for r in &self.trace {
            writeln!(out, "{},{},{},{}", r.iteration, r.phase, r.best_fitness, r.evaluations)?;
        }
        Ok(())
    }
}

pub(super) fn trace_rows<F: Real>(trace: &Trace<F>) -> Vec<TraceRow> {
    trace
        .records()
        .iter()
        .map(|r| TraceRow {
            iteration: r.iteration,
            phase: r.phase,
            best_fitness: r.best_fitness.to_f64_lossy(),
            evaluations: r.evaluations,
        })
        .collect()
}

/// `fpr,tpr` rows for the ROC export.
pub fn write_roc_csv<W: Write>(points: &[(f64, f64)], thresholds: &[f64], mut out: W) -> Result<()> {
    writeln!(out, "threshold,fpr,tpr")?;
    for (&tau, &(fpr, tpr)) in thresholds.iter().zip(points) {
        writeln!(out, "{tau},{fpr},{tpr}")?;
    }
    Ok(())
}
