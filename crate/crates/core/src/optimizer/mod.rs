//! Population metaheuristics: hawk-style pursuit (exploration, four besiege
//! modes, heavy-tailed dives), the wolf-pack refinement stage, the sequential
//! hybrid of the two, and a small zoo of benchmark objectives.

mod benchmarks;
mod gwo;
mod hho;
mod hybrid;
mod levy;
mod trace;

pub use benchmarks::Benchmark;
pub use gwo::{gwo_a, gwo_move, gwo_step, Leaders};
pub use hho::{
    hard_besiege, hard_besiege_dive, hho_explore, hho_step, mean_position, soft_besiege,
    soft_besiege_dive, update_energy, StepContext,
};
pub use hybrid::{g_hho_optimize, init_population, run_gwo, run_hho};
pub use levy::{levy_flight, levy_sigma};
pub use trace::{Phase, RunSummary, Trace, TraceRecord};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Bounded box-shaped search space.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace<F: Real> {
    lower: Vec<F>,
    upper: Vec<F>,
}

impl<F: Real> SearchSpace<F> {
    /// Per-dimension bounds. Fails unless `lower[k] < upper[k]` for every `k`.
    pub fn new(lower: Vec<F>, upper: Vec<F>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::contract("search space must have dim >= 1"));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                context: "search space bounds",
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(*l < *u)) {
            return Err(Error::contract("lower bound must be strictly below upper bound"));
        }
        Ok(Self { lower, upper })
    }

    /// `[-bound, bound]` in every dimension.
    pub fn symmetric(dim: usize, bound: F) -> Result<Self> {
        Self::new(vec![-bound; dim], vec![bound; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[F] {
        &self.lower
    }

    pub fn upper(&self) -> &[F] {
        &self.upper
    }

    /// Clamp a position into the box, component-wise.
    pub fn clamp(&self, position: &mut [F]) {
        for ((x, lo), hi) in position.iter_mut().zip(&self.lower).zip(&self.upper) {
            if *x < *lo {
                *x = *lo;
            } else if *x > *hi {
                *x = *hi;
            }
        }
    }

    pub fn contains(&self, position: &[F]) -> bool {
        position.len() == self.dim()
            && position
                .iter()
                .zip(&self.lower)
                .zip(&self.upper)
                .all(|((x, lo), hi)| *lo <= *x && *x <= *hi)
    }
}

/// A position in the search space with its cached objective value.
///
/// Hawks, wolves, the prey and the pack leaders are all `Candidate`s; the
/// role is contextual.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate<F: Real> {
    pub position: Vec<F>,
    pub fitness: Option<F>,
}

impl<F: Real> Candidate<F> {
    pub fn new(position: Vec<F>) -> Self {
        Self { position, fitness: None }
    }

    pub fn evaluated(position: Vec<F>, fitness: F) -> Self {
        Self { position, fitness: Some(fitness) }
    }

    /// Cached fitness; errors if the candidate was never evaluated.
    pub fn fitness(&self) -> Result<F> {
        self.fitness
            .ok_or_else(|| Error::contract("candidate fitness not evaluated"))
    }

    pub fn dim(&self) -> usize {
        self.position.len()
    }
}

/// Escape-energy state for one hawk in one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyState<F: Real> {
    /// Initial energy, drawn uniformly from `[-1, 1]`.
    pub initial: F,
    /// Current decayed energy.
    pub current: F,
    /// Jump strength `J = 2 (1 - r5)`.
    pub jump: F,
}

impl<F: Real> EnergyState<F> {
    /// Draw initial energy and jump strength, then decay per the iteration.
    pub fn draw<R: rand::Rng + ?Sized>(
        rng: &mut R,
        iteration: usize,
        max_iterations: usize,
    ) -> Result<Self> {
        let two = F::from_f64(2.0);
        let initial = two * F::unit_uniform(rng) - F::one();
        let jump = two * (F::one() - F::unit_uniform(rng));
        Ok(Self {
            initial,
            current: update_energy(initial, iteration, max_iterations)?,
            jump,
        })
    }
}

/// Evaluation scheduling for one optimizer iteration.
///
/// Both modes produce bit-identical traces; `Parallel` fans candidate moves
/// out over the rayon pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    Sequential,
    #[default]
    Parallel,
}

/// Run parameters shared by all three optimizers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Population size N.
    pub population: usize,
    /// Total iteration budget I.
    pub max_iterations: usize,
    /// Root seed for all derived randomness.
    pub seed: u64,
    /// Fraction of the budget spent in the hawk phase of the hybrid.
    pub hho_fraction: f64,
    /// Levy-flight exponent.
    pub beta: f64,
    /// Evaluation scheduling.
    pub eval_mode: EvalMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            population: 30,
            max_iterations: 500,
            seed: 0,
            hho_fraction: 0.5,
            beta: 1.5,
            eval_mode: EvalMode::default(),
        }
    }
}

impl RunConfig {
    /// Validate invariants shared by every run.
    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(Error::contract("population must be >= 1"));
        }
        if self.max_iterations == 0 {
            return Err(Error::contract("max_iterations must be >= 1"));
        }
        if !(self.beta > 1.0 && self.beta <= 2.0) {
            return Err(Error::contract("beta must lie in (1, 2]"));
        }
        Ok(())
    }

    /// Validate the hybrid phase split: both phases must get >= 1 iteration.
    pub fn validate_hybrid(&self) -> Result<(usize, usize)> {
        self.validate()?;
        if !(self.hho_fraction > 0.0 && self.hho_fraction < 1.0) {
            return Err(Error::contract("hho_fraction must lie in (0, 1)"));
        }
        let hho_iters = (self.hho_fraction * self.max_iterations as f64).floor() as usize;
        let gwo_iters = self.max_iterations - hho_iters;
        if hho_iters == 0 || gwo_iters == 0 {
            return Err(Error::contract(
                "hho_fraction leaves an empty phase for this iteration budget",
            ));
        }
        Ok((hho_iters, gwo_iters))
    }
}

/// Objective contract: deterministic, side-effect-free, lower is better.
pub trait FitnessFn<F: Real>: Sync {
    fn evaluate(&self, position: &[F]) -> Result<F>;
}

impl<F: Real, T> FitnessFn<F> for T
where
    T: Fn(&[F]) -> F + Sync,
{
    fn evaluate(&self, position: &[F]) -> Result<F> {
        Ok(self(position))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_space_rejects_inverted_bounds() {
        assert!(SearchSpace::new(vec![1.0], vec![1.0]).is_err());
        assert!(SearchSpace::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(SearchSpace::<f64>::new(vec![], vec![]).is_err());
    }

    #[test]
    fn clamp_pins_to_box() {
        let space = SearchSpace::symmetric(3, 1.0).unwrap();
        let mut pos = vec![-5.0, 0.25, 9.0];
        space.clamp(&mut pos);
        assert_eq!(pos, vec![-1.0, 0.25, 1.0]);
        assert!(space.contains(&pos));
    }

    #[test]
    fn hybrid_split_needs_both_phases() {
        let cfg = RunConfig { max_iterations: 1, ..RunConfig::default() };
        assert!(cfg.validate_hybrid().is_err());
        let cfg = RunConfig { max_iterations: 10, hho_fraction: 0.05, ..RunConfig::default() };
        assert!(cfg.validate_hybrid().is_err());
        let cfg = RunConfig { max_iterations: 10, ..RunConfig::default() };
        assert_eq!(cfg.validate_hybrid().unwrap(), (5, 5));
    }

    #[test]
    fn energy_state_respects_envelope() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for iter in 0..=20 {
            let e = EnergyState::<f64>::draw(&mut rng, iter, 20).unwrap();
            assert!(e.initial.abs() <= 1.0);
            assert!(e.current.abs() <= 2.0 * e.initial.abs() + 1e-15);
            assert!(e.jump >= 0.0 && e.jump <= 2.0);
        }
    }
}
