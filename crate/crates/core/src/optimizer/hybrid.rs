//! Run drivers: standalone hawk and wolf optimizers plus the two-phase
//! hybrid in which the wolf pack refines the hawks' final population.

use rayon::prelude::*;

use crate::error::Result;
use crate::rng::{RngContext, StreamDomain};
use crate::scalar::Real;

use super::gwo::{gwo_step, Leaders};
use super::hho::{hho_step, StepContext};
use super::trace::{Phase, Trace, TraceRecord};
use super::{Candidate, EvalMode, FitnessFn, RunConfig, SearchSpace};

/// Sample and evaluate the initial population. Charges one evaluation per
/// candidate.
pub fn init_population<F: Real, O: FitnessFn<F> + ?Sized>(
    config: &RunConfig,
    space: &SearchSpace<F>,
    rng: &RngContext,
    fitness: &O,
) -> Result<(Vec<Candidate<F>>, u64)> {
    let sample_one = |index: usize| -> Result<Candidate<F>> {
        let mut stream = rng.stream(StreamDomain::Init, 0, index as u64);
        let position: Vec<F> = space
            .lower()
            .iter()
            .zip(space.upper())
            .map(|(lo, hi)| {
                let u = F::unit_uniform(&mut stream);
                *lo + u * (*hi - *lo)
            })
            .collect();
        let fit = fitness.evaluate(&position)?;
        Ok(Candidate::evaluated(position, fit))
    };

    let population: Vec<Candidate<F>> = match config.eval_mode {
        EvalMode::Sequential => (0..config.population).map(sample_one).collect::<Result<_>>()?,
        EvalMode::Parallel => (0..config.population)
            .into_par_iter()
            .map(sample_one)
            .collect::<Result<_>>()?,
    };
    let evaluations = population.len() as u64;
    Ok((population, evaluations))
}

fn best_of<F: Real>(population: &[Candidate<F>]) -> Result<Candidate<F>> {
    let mut best = &population[0];
    for candidate in &population[1..] {
        if candidate.fitness()? < best.fitness()? {
            best = candidate;
        }
    }
    Ok(best.clone())
}

/// Hawk-only run over the full iteration budget.
pub fn run_hho<F: Real, O: FitnessFn<F> + ?Sized>(
    config: &RunConfig,
    space: &SearchSpace<F>,
    fitness: &O,
) -> Result<(Candidate<F>, Trace<F>)> {
    config.validate()?;
    let rng = RngContext::new(config.seed);
    let (mut population, mut evaluations) = init_population(config, space, &rng, fitness)?;
    let mut prey = best_of(&population)?;
    let mut trace = Trace::default();

    for iteration in 0..config.max_iterations {
        let ctx = StepContext {
            rng: &rng,
            space,
            global_iteration: iteration,
            phase_iteration: iteration,
            phase_length: config.max_iterations,
            beta: config.beta,
            eval_mode: config.eval_mode,
        };
        evaluations += hho_step(&mut population, &mut prey, &ctx, fitness)?;
        trace.push(TraceRecord::new(iteration, Phase::Hho, &prey, evaluations)?);
    }
    Ok((prey, trace))
}

/// Wolf-only run over the full iteration budget.
pub fn run_gwo<F: Real, O: FitnessFn<F> + ?Sized>(
    config: &RunConfig,
    space: &SearchSpace<F>,
    fitness: &O,
) -> Result<(Candidate<F>, Trace<F>)> {
    config.validate()?;
    let rng = RngContext::new(config.seed);
    let (mut wolves, mut evaluations) = init_population(config, space, &rng, fitness)?;
    let mut leaders = Leaders::from_population(&wolves)?;
    let mut trace = Trace::default();

    for iteration in 0..config.max_iterations {
        let ctx = StepContext {
            rng: &rng,
            space,
            global_iteration: iteration,
            phase_iteration: iteration,
            phase_length: config.max_iterations,
            beta: config.beta,
            eval_mode: config.eval_mode,
        };
        evaluations += gwo_step(&mut wolves, &mut leaders, &ctx, fitness)?;
        trace.push(TraceRecord::new(iteration, Phase::Gwo, &leaders.alpha, evaluations)?);
    }
    Ok((leaders.alpha.clone(), trace))
}

/// Two-phase hybrid: hawks explore for `floor(hho_fraction * I)` iterations,
/// then the final hawk population becomes the wolf pack with the prey
/// injected as the initial alpha for the remaining budget.
///
/// Fully deterministic given the seed, in both evaluation modes.
pub fn g_hho_optimize<F: Real, O: FitnessFn<F> + ?Sized>(
    config: &RunConfig,
    space: &SearchSpace<F>,
    fitness: &O,
) -> Result<(Candidate<F>, Trace<F>)> {
    let (hho_iters, gwo_iters) = config.validate_hybrid()?;
    let rng = RngContext::new(config.seed);
    let (mut population, mut evaluations) = init_population(config, space, &rng, fitness)?;
    let mut prey = best_of(&population)?;
    let mut trace = Trace::default();

    for iteration in 0..hho_iters {
        let ctx = StepContext {
            rng: &rng,
            space,
            global_iteration: iteration,
            phase_iteration: iteration,
            phase_length: hho_iters,
            beta: config.beta,
            eval_mode: config.eval_mode,
        };
        evaluations += hho_step(&mut population, &mut prey, &ctx, fitness)?;
        trace.push(TraceRecord::new(iteration, Phase::Hho, &prey, evaluations)?);
    }

    let mut leaders = Leaders::seeded(prey, &population)?;
    for iteration in 0..gwo_iters {
        let ctx = StepContext {
            rng: &rng,
            space,
            global_iteration: hho_iters + iteration,
            phase_iteration: iteration,
            phase_length: gwo_iters,
            beta: config.beta,
            eval_mode: config.eval_mode,
        };
        evaluations += gwo_step(&mut population, &mut leaders, &ctx, fitness)?;
        trace.push(TraceRecord::new(
            hho_iters + iteration,
            Phase::Gwo,
            &leaders.alpha,
            evaluations,
        )?);
    }
    Ok((leaders.alpha.clone(), trace))
}
