//! Wolf-pack refinement: every candidate moves toward the three best
//! solutions under a linearly decaying coefficient.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::StreamDomain;
use crate::scalar::Real;

use super::hho::StepContext;
use super::{Candidate, EvalMode, FitnessFn};

/// The three best solutions seen so far, never worsening.
#[derive(Debug, Clone)]
pub struct Leaders<F: Real> {
    pub alpha: Candidate<F>,
    pub beta: Candidate<F>,
    pub delta: Candidate<F>,
}

impl<F: Real> Leaders<F> {
    /// Rank an evaluated population; with fewer than three members the best
    /// is duplicated into the missing slots.
    pub fn from_population(population: &[Candidate<F>]) -> Result<Self> {
        if population.is_empty() {
            return Err(Error::contract("leaders require at least one candidate"));
        }
        let mut order: Vec<usize> = (0..population.len()).collect();
        // Stable sort: earlier indices win exact ties.
        for c in population {
            c.fitness()?;
        }
        order.sort_by(|&a, &b| {
            population[a]
                .fitness
                .unwrap()
                .partial_cmp(&population[b].fitness.unwrap())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let pick = |rank: usize| population[order[rank.min(order.len() - 1)]].clone();
        Ok(Self { alpha: pick(0), beta: pick(1), delta: pick(2) })
    }

    /// Seed the hierarchy with an external best solution injected as alpha;
    /// beta and delta come from the population ranking.
    pub fn seeded(alpha: Candidate<F>, population: &[Candidate<F>]) -> Result<Self> {
        alpha.fitness()?;
        let ranked = Self::from_population(population)?;
        Ok(Self { alpha, beta: ranked.alpha, delta: ranked.beta })
    }

    /// Offer a candidate; it displaces alpha, beta or delta only when
    /// strictly better.
    pub fn offer(&mut self, candidate: &Candidate<F>) -> Result<()> {
        let fit = candidate.fitness()?;
        if fit < self.alpha.fitness()? {
            self.delta = std::mem::replace(&mut self.beta, std::mem::replace(&mut self.alpha, candidate.clone()));
        } else if fit < self.beta.fitness()? {
            self.delta = std::mem::replace(&mut self.beta, candidate.clone());
        } else if fit < self.delta.fitness()? {
            self.delta = candidate.clone();
        }
        Ok(())
    }
}

/// Pack coefficient `a`, decaying linearly from 2 to 0 over the phase:
/// exactly `2 (1 - iteration / phase_length)`.
pub fn gwo_a<F: Real>(phase_iteration: usize, phase_length: usize) -> Result<F> {
    if phase_length == 0 {
        return Err(Error::contract("gwo phase length must be >= 1"));
    }
    Ok(F::from_f64(2.0 * (1.0 - phase_iteration as f64 / phase_length as f64)))
}

/// One wolf's move toward the hierarchy: for each leader `L`,
/// `A = 2 a r1 - a`, `C = 2 r2`, `X_L' = X_L - A |C X_L - X|`; the new
/// position is the average of the three pulls (unclamped).
pub fn gwo_move<F: Real>(
    wolf: &[F],
    leaders: &Leaders<F>,
    a: F,
    draws: &[(F, F); 3],
) -> Vec<F> {
    let two = F::from_f64(2.0);
    let third = F::from_f64(1.0 / 3.0);
    let dim = wolf.len();
    let mut next = vec![F::zero(); dim];
    for (leader, &(r1, r2)) in [&leaders.alpha, &leaders.beta, &leaders.delta]
        .into_iter()
        .zip(draws)
    {
        let coeff_a = two * a * r1 - a;
        let coeff_c = two * r2;
        for k in 0..dim {
            let lead = leader.position[k];
            let pull = lead - coeff_a * (coeff_c * lead - wolf[k]).abs();
            next[k] = next[k] + pull;
        }
    }
    for v in &mut next {
        *v = *v * third;
    }
    next
}

/// One synchronous wolf iteration; `a` decays exactly as
/// `2 (1 - phase_iteration / phase_length)`. Returns evaluations charged.
pub fn gwo_step<F: Real, O: FitnessFn<F> + ?Sized>(
    wolves: &mut Vec<Candidate<F>>,
    leaders: &mut Leaders<F>,
    ctx: &StepContext<'_, F>,
    fitness: &O,
) -> Result<u64> {
    if wolves.is_empty() {
        return Err(Error::contract("gwo_step on empty population"));
    }
    let a = gwo_a::<F>(ctx.phase_iteration, ctx.phase_length)?;

    let move_one = |index: usize| -> Result<Candidate<F>> {
        let mut rng = ctx
            .rng
            .stream(StreamDomain::Step, ctx.global_iteration as u64, index as u64);
        let draws = [
            (F::unit_uniform(&mut rng), F::unit_uniform(&mut rng)),
            (F::unit_uniform(&mut rng), F::unit_uniform(&mut rng)),
            (F::unit_uniform(&mut rng), F::unit_uniform(&mut rng)),
        ];
        let mut position = gwo_move(&wolves[index].position, leaders, a, &draws);
        ctx.space.clamp(&mut position);
        let fit = fitness.evaluate(&position)?;
        Ok(Candidate::evaluated(position, fit))
    };

    let moved: Vec<Candidate<F>> = match ctx.eval_mode {
        EvalMode::Sequential => (0..wolves.len()).map(move_one).collect::<Result<_>>()?,
        EvalMode::Parallel => (0..wolves.len())
            .into_par_iter()
            .map(move_one)
            .collect::<Result<_>>()?,
    };

    let evaluations = moved.len() as u64;
    *wolves = moved;
    for wolf in wolves.iter() {
        leaders.offer(wolf)?;
    }
    Ok(evaluations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn evaluated(pos: &[f64], fit: f64) -> Candidate<f64> {
        Candidate::evaluated(pos.to_vec(), fit)
    }

    #[test]
    fn leaders_rank_stably() {
        let pop = vec![
            evaluated(&[1.0], 3.0),
            evaluated(&[2.0], 1.0),
            evaluated(&[3.0], 1.0),
            evaluated(&[4.0], 2.0),
        ];
        let leaders = Leaders::from_population(&pop).unwrap();
        // index 1 wins the tie with index 2
        assert_eq!(leaders.alpha.position, vec![2.0]);
        assert_eq!(leaders.beta.position, vec![3.0]);
        assert_eq!(leaders.delta.position, vec![4.0]);
    }

    #[test]
    fn leaders_duplicate_when_population_is_small() {
        let pop = vec![evaluated(&[1.0], 5.0)];
        let leaders = Leaders::from_population(&pop).unwrap();
        assert_eq!(leaders.alpha.position, leaders.beta.position);
        assert_eq!(leaders.beta.position, leaders.delta.position);
        assert!(Leaders::<f64>::from_population(&[]).is_err());
    }

    #[test]
    fn offer_never_worsens_hierarchy() {
        let pop = vec![evaluated(&[0.0], 2.0), evaluated(&[1.0], 4.0), evaluated(&[2.0], 6.0)];
        let mut leaders = Leaders::from_population(&pop).unwrap();
        leaders.offer(&evaluated(&[9.0], 99.0)).unwrap();
        assert_eq!(leaders.alpha.fitness, Some(2.0));
        assert_eq!(leaders.delta.fitness, Some(6.0));
        leaders.offer(&evaluated(&[5.0], 1.0)).unwrap();
        assert_eq!(leaders.alpha.fitness, Some(1.0));
        assert_eq!(leaders.beta.fitness, Some(2.0));
        assert_eq!(leaders.delta.fitness, Some(4.0));
    }

    #[test]
    fn collapsed_pack_with_zero_a_stays_put() {
        // All wolves and leaders at the same point and a = 0: every pull is
        // exactly the leader position, so nothing moves.
        let point = vec![0.7, -0.3];
        let leaders = Leaders {
            alpha: evaluated(&point, 1.0),
            beta: evaluated(&point, 1.0),
            delta: evaluated(&point, 1.0),
        };
        let next = gwo_move(&point, &leaders, 0.0, &[(0.9, 0.1), (0.2, 0.8), (0.5, 0.5)]);
        for (n, p) in next.iter().zip(&point) {
            assert!((n - p).abs() < 1e-15);
        }
    }
}
