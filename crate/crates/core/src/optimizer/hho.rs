//! Hawk-pursuit update rules: exploration, energy decay, the four besiege
//! modes (with and without heavy-tailed dives), and the per-iteration step
//! that routes every hawk to the right move.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{RngContext, StreamDomain};
use crate::scalar::Real;

use super::levy::levy_flight;
use super::{Candidate, EnergyState, EvalMode, FitnessFn, SearchSpace};

fn check_dim<F: Real>(context: &'static str, expected: usize, v: &[F]) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch { context, expected, actual: v.len() });
    }
    Ok(())
}

/// Escape-energy decay: `2 eng0 (1 - iteration / max_iterations)`.
pub fn update_energy<F: Real>(eng0: F, iteration: usize, max_iterations: usize) -> Result<F> {
    if max_iterations == 0 {
        return Err(Error::contract("max_iterations must be >= 1"));
    }
    if iteration > max_iterations {
        return Err(Error::contract("iteration exceeds max_iterations"));
    }
    if eng0.abs() > F::one() {
        return Err(Error::contract("initial energy must lie in [-1, 1]"));
    }
    let ratio = F::from_f64(iteration as f64 / max_iterations as f64);
    Ok(F::from_f64(2.0) * eng0 * (F::one() - ratio))
}

/// Component-wise arithmetic mean of the population's positions.
pub fn mean_position<F: Real>(population: &[Candidate<F>]) -> Result<Vec<F>> {
    let first = population
        .first()
        .ok_or_else(|| Error::contract("mean_position of empty population"))?;
    let dim = first.dim();
    let mut mean = vec![F::zero(); dim];
    for candidate in population {
        check_dim("mean_position", dim, &candidate.position)?;
        for (m, x) in mean.iter_mut().zip(&candidate.position) {
            *m = *m + *x;
        }
    }
    let n = F::from_f64(population.len() as f64);
    for m in &mut mean {
        *m = *m / n;
    }
    Ok(mean)
}

/// Exploration move with the five random factors supplied explicitly.
///
/// `q >= 0.5` perches relative to a random pack member, otherwise relative to
/// the prey and the population mean over the bound box.
pub fn hho_explore_with<F: Real>(
    hawk: &Candidate<F>,
    prey: &Candidate<F>,
    rand_member: &Candidate<F>,
    mean_position: &[F],
    space: &SearchSpace<F>,
    q: F,
    r: [F; 4],
) -> Result<Candidate<F>> {
    let dim = space.dim();
    check_dim("hho_explore hawk", dim, &hawk.position)?;
    check_dim("hho_explore prey", dim, &prey.position)?;
    check_dim("hho_explore rand_member", dim, &rand_member.position)?;
    check_dim("hho_explore mean", dim, mean_position)?;

    let two = F::from_f64(2.0);
    let half = F::from_f64(0.5);
    let mut position = Vec::with_capacity(dim);
    if q >= half {
        for k in 0..dim {
            let rand_k = rand_member.position[k];
            position.push(rand_k - r[0] * (rand_k - two * r[1] * hawk.position[k]).abs());
        }
    } else {
        for k in 0..dim {
            let lb = space.lower()[k];
            let ub = space.upper()[k];
            position.push(prey.position[k] - mean_position[k] - r[2] * (lb + r[3] * (ub - lb)));
        }
    }
    space.clamp(&mut position);
    Ok(Candidate::new(position))
}

/// Exploration move drawing `q` and `r1..r4` from the stream.
pub fn hho_explore<F: Real, R: Rng + ?Sized>(
    hawk: &Candidate<F>,
    prey: &Candidate<F>,
    rand_member: &Candidate<F>,
    mean_position: &[F],
    space: &SearchSpace<F>,
    rng: &mut R,
) -> Result<Candidate<F>> {
    let q = F::unit_uniform(rng);
    let r = [
        F::unit_uniform(rng),
        F::unit_uniform(rng),
        F::unit_uniform(rng),
        F::unit_uniform(rng),
    ];
    hho_explore_with(hawk, prey, rand_member, mean_position, space, q, r)
}

/// Soft besiege: `(prey - hawk) - eng |jump * prey - hawk|`, clamped.
pub fn soft_besiege<F: Real>(
    hawk: &Candidate<F>,
    prey: &Candidate<F>,
    eng: F,
    jump: F,
    space: &SearchSpace<F>,
) -> Result<Candidate<F>> {
    let dim = space.dim();
    check_dim("soft_besiege hawk", dim, &hawk.position)?;
    check_dim("soft_besiege prey", dim, &prey.position)?;
    let mut position = Vec::with_capacity(dim);
    for k in 0..dim {
        let delta = prey.position[k] - hawk.position[k];
        position.push(delta - eng * (jump * prey.position[k] - hawk.position[k]).abs());
    }
    space.clamp(&mut position);
    Ok(Candidate::new(position))
}

/// Hard besiege: `prey - eng |prey - hawk|`, clamped.
pub fn hard_besiege<F: Real>(
    hawk: &Candidate<F>,
    prey: &Candidate<F>,
    eng: F,
    space: &SearchSpace<F>,
) -> Result<Candidate<F>> {
    let dim = space.dim();
    check_dim("hard_besiege hawk", dim, &hawk.position)?;
    check_dim("hard_besiege prey", dim, &prey.position)?;
    let mut position = Vec::with_capacity(dim);
    for k in 0..dim {
        position.push(prey.position[k] - eng * (prey.position[k] - hawk.position[k]).abs());
    }
    space.clamp(&mut position);
    Ok(Candidate::new(position))
}

/// Greedy trial selection shared by both dive moves: accept `y`, else a
/// levy-perturbed `z`, else keep the hawk. Always charges two evaluations.
fn dive_select<F: Real, O: FitnessFn<F> + ?Sized, R: Rng + ?Sized>(
    hawk: &Candidate<F>,
    mut y: Vec<F>,
    beta: f64,
    space: &SearchSpace<F>,
    fitness: &O,
    rng: &mut R,
) -> Result<(Candidate<F>, u64)> {
    let dim = space.dim();
    space.clamp(&mut y);

    let mut z = Vec::with_capacity(dim);
    let scale: Vec<F> = (0..dim).map(|_| F::unit_uniform(rng)).collect();
    let step = levy_flight::<F, _>(dim, beta, rng)?;
    for k in 0..dim {
        z.push(y[k] + scale[k] * step[k]);
    }
    space.clamp(&mut z);

    let current = hawk.fitness()?;
    let fy = fitness.evaluate(&y)?;
    let fz = fitness.evaluate(&z)?;
    let chosen = if fy < current {
        Candidate::evaluated(y, fy)
    } else if fz < current {
        Candidate::evaluated(z, fz)
    } else {
        hawk.clone()
    };
    Ok((chosen, 2))
}

/// Soft besiege with progressive rapid dives.
///
/// `y = prey - eng |jump * prey - hawk|`; the perturbed trial adds a random
/// vector times a levy step. Returns the chosen candidate with its fitness
/// already cached, plus the evaluation charge.
pub fn soft_besiege_dive<F: Real, O: FitnessFn<F> + ?Sized, R: Rng + ?Sized>(
    hawk: &Candidate<F>,
    prey: &Candidate<F>,
    eng: F,
    jump: F,
    beta: f64,
    space: &SearchSpace<F>,
    fitness: &O,
    rng: &mut R,
) -> Result<(Candidate<F>, u64)> {
    let dim = space.dim();
    check_dim("soft_besiege_dive hawk", dim, &hawk.position)?;
    check_dim("soft_besiege_dive prey", dim, &prey.position)?;
    let y: Vec<F> = (0..dim)
        .map(|k| prey.position[k] - eng * (jump * prey.position[k] - hawk.position[k]).abs())
        .collect();
    dive_select(hawk, y, beta, space, fitness, rng)
}

/// Hard besiege with progressive rapid dives; the approach point uses the
/// population mean instead of the hawk itself.
pub fn hard_besiege_dive<F: Real, O: FitnessFn<F> + ?Sized, R: Rng + ?Sized>(
    hawk: &Candidate<F>,
    prey: &Candidate<F>,
    mean_position: &[F],
    eng: F,
    jump: F,
    beta: f64,
    space: &SearchSpace<F>,
    fitness: &O,
    rng: &mut R,
) -> Result<(Candidate<F>, u64)> {
    let dim = space.dim();
    check_dim("hard_besiege_dive hawk", dim, &hawk.position)?;
    check_dim("hard_besiege_dive prey", dim, &prey.position)?;
    check_dim("hard_besiege_dive mean", dim, mean_position)?;
    let y: Vec<F> = (0..dim)
        .map(|k| prey.position[k] - eng * (jump * prey.position[k] - mean_position[k]).abs())
        .collect();
    dive_select(hawk, y, beta, space, fitness, rng)
}

/// Everything one iteration step needs besides the population itself.
#[derive(Debug, Clone, Copy)]
pub struct StepContext<'a, F: Real> {
    pub rng: &'a RngContext,
    pub space: &'a SearchSpace<F>,
    /// Global iteration index, unique across phases; keys the rng streams.
    pub global_iteration: usize,
    /// Iteration index within the current phase, drives schedules.
    pub phase_iteration: usize,
    /// Length of the current phase.
    pub phase_length: usize,
    pub beta: f64,
    pub eval_mode: EvalMode,
}

fn hho_move<F: Real, O: FitnessFn<F> + ?Sized>(
    index: usize,
    population: &[Candidate<F>],
    prey: &Candidate<F>,
    mean: &[F],
    ctx: &StepContext<'_, F>,
    fitness: &O,
) -> Result<(Candidate<F>, u64)> {
    let hawk = &population[index];
    let mut rng = ctx
        .rng
        .stream(StreamDomain::Step, ctx.global_iteration as u64, index as u64);
    let energy = EnergyState::<F>::draw(&mut rng, ctx.phase_iteration, ctx.phase_length)?;
    let escape = F::unit_uniform(&mut rng);
    let eng = energy.current;
    let half = F::from_f64(0.5);

    if eng.abs() >= F::one() {
        let member = rng.gen_range(0..population.len());
        let moved = hho_explore(hawk, prey, &population[member], mean, ctx.space, &mut rng)?;
        let fit = fitness.evaluate(&moved.position)?;
        Ok((Candidate::evaluated(moved.position, fit), 1))
    } else if escape >= half && eng.abs() >= half {
        let moved = soft_besiege(hawk, prey, eng, energy.jump, ctx.space)?;
        let fit = fitness.evaluate(&moved.position)?;
        Ok((Candidate::evaluated(moved.position, fit), 1))
    } else if escape >= half {
        let moved = hard_besiege(hawk, prey, eng, ctx.space)?;
        let fit = fitness.evaluate(&moved.position)?;
        Ok((Candidate::evaluated(moved.position, fit), 1))
    } else if eng.abs() >= half {
        soft_besiege_dive(hawk, prey, eng, energy.jump, ctx.beta, ctx.space, fitness, &mut rng)
    } else {
        hard_besiege_dive(
            hawk, prey, mean, eng, energy.jump, ctx.beta, ctx.space, fitness, &mut rng,
        )
    }
}

/// One synchronous hawk iteration.
///
/// Every hawk draws from its own `(seed, iteration, index)` stream, moves
/// against a snapshot of the old population, and the new population is
/// installed in one barrier. The prey is replaced only by a strictly better
/// candidate. Returns the number of fitness evaluations charged.
pub fn hho_step<F: Real, O: FitnessFn<F> + ?Sized>(
    population: &mut Vec<Candidate<F>>,
    prey: &mut Candidate<F>,
    ctx: &StepContext<'_, F>,
    fitness: &O,
) -> Result<u64> {
    if population.is_empty() {
        return Err(Error::contract("hho_step on empty population"));
    }
    let mean = mean_position(population)?;

    let moves: Vec<(Candidate<F>, u64)> = match ctx.eval_mode {
        EvalMode::Sequential => (0..population.len())
            .map(|i| hho_move(i, population, prey, &mean, ctx, fitness))
            .collect::<Result<_>>()?,
        EvalMode::Parallel => (0..population.len())
            .into_par_iter()
            .map(|i| hho_move(i, population, prey, &mean, ctx, fitness))
            .collect::<Result<_>>()?,
    };

    let mut evaluations = 0;
    for (slot, (candidate, cost)) in population.iter_mut().zip(moves) {
        *slot = candidate;
        evaluations += cost;
    }

    let prey_fitness = prey.fitness()?;
    let mut best: Option<&Candidate<F>> = None;
    for candidate in population.iter() {
        let fit = candidate.fitness()?;
        if fit < best.map_or(prey_fitness, |b| b.fitness.unwrap()) {
            best = Some(candidate);
        }
    }
    if let Some(better) = best {
        *prey = better.clone();
    }
    Ok(evaluations)
}
