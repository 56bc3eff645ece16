//! Convergence records and their export formats.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::scalar::Real;

use super::{Candidate, RunConfig};

/// Which optimizer produced an iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Phase {
    Hho,
    Gwo,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Phase::Hho => write!(f, "HHO"),
            Phase::Gwo => write!(f, "GWO"),
        }
    }
}

/// Best-so-far snapshot after one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord<F: Real> {
    pub iteration: usize,
    pub phase: Phase,
    pub best_fitness: F,
    pub best_position: Vec<F>,
    /// Cumulative fitness evaluations charged so far.
    pub evaluations: u64,
}

impl<F: Real> TraceRecord<F> {
    pub fn new(iteration: usize, phase: Phase, best: &Candidate<F>, evaluations: u64) -> Result<Self> {
        Ok(Self {
            iteration,
            phase,
            best_fitness: best.fitness()?,
            best_position: best.position.clone(),
            evaluations,
        })
    }
}

/// Per-iteration history of one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace<F: Real> {
    records: Vec<TraceRecord<F>>,
}

impl<F: Real> Trace<F> {
    pub fn push(&mut self, record: TraceRecord<F>) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[TraceRecord<F>] {
        &self.records
    }

    pub fn final_evaluations(&self) -> u64 {
        self.records.last().map_or(0, |r| r.evaluations)
    }

    pub fn final_best_fitness(&self) -> Option<F> {
        self.records.last().map(|r| r.best_fitness)
    }

    /// True when the best-so-far fitness never increases, including across
    /// the phase boundary.
    pub fn best_fitness_is_monotone(&self) -> bool {
        self.records
            .windows(2)
            .all(|w| w[1].best_fitness <= w[0].best_fitness)
    }

    /// CSV export with columns `iteration,phase,best_fitness,evaluations`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "iteration,phase,best_fitness,evaluations")?;
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{}",
                r.iteration,
                r.phase,
                r.best_fitness.to_f64_lossy(),
                r.evaluations
            )?;
        }
        Ok(())
    }
}

/// End-of-run report. Timing lives in its own field so deterministic parts
/// can be compared byte-for-byte across runs.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub seed: u64,
    pub config: RunConfig,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    pub evaluations: u64,
    pub wall_clock_seconds: f64,
}

impl RunSummary {
    pub fn new<F: Real>(
        config: &RunConfig,
        best: &Candidate<F>,
        trace: &Trace<F>,
        wall_clock_seconds: f64,
    ) -> Result<Self> {
        Ok(Self {
            seed: config.seed,
            config: config.clone(),
            best_position: best.position.iter().map(|v| v.to_f64_lossy()).collect(),
            best_fitness: best.fitness()?.to_f64_lossy(),
            evaluations: trace.final_evaluations(),
            wall_clock_seconds,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| crate::error::Error::contract(format!("summary serialization: {e}")))
    }
}
