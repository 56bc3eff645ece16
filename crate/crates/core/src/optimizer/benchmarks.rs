//! Synthetic objectives for validating the optimizers.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Classic continuous test functions, all minimization problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Benchmark {
    /// `sum x_k^2`; global minimum 0 at the origin.
    Sphere,
    /// `10 d + sum (x_k^2 - 10 cos(2 pi x_k))`; global minimum 0 at the origin.
    Rastrigin,
    /// `sum 100 (x_{k+1} - x_k^2)^2 + (1 - x_k)^2`; global minimum 0 at (1, ..., 1).
    Rosenbrock,
    /// Nearly flat shell with a deep well; global minimum 0 at the origin.
    Ackley,
}

impl Benchmark {
    pub fn all() -> [Benchmark; 4] {
        [Benchmark::Sphere, Benchmark::Rastrigin, Benchmark::Rosenbrock, Benchmark::Ackley]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Benchmark::Sphere => "sphere",
            Benchmark::Rastrigin => "rastrigin",
            Benchmark::Rosenbrock => "rosenbrock",
            Benchmark::Ackley => "ackley",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "sphere" => Some(Benchmark::Sphere),
            "rastrigin" => Some(Benchmark::Rastrigin),
            "rosenbrock" => Some(Benchmark::Rosenbrock),
            "ackley" => Some(Benchmark::Ackley),
            _ => None,
        }
    }

    /// Conventional search box for this function.
    pub fn default_bound(&self) -> f64 {
        match self {
            Benchmark::Sphere => 100.0,
            Benchmark::Rastrigin => 5.12,
            Benchmark::Rosenbrock => 30.0,
            Benchmark::Ackley => 32.0,
        }
    }

    /// Location of the global minimum in `dim` dimensions.
    pub fn optimum<F: Real>(&self, dim: usize) -> Vec<F> {
        match self {
            Benchmark::Rosenbrock => vec![F::one(); dim],
            _ => vec![F::zero(); dim],
        }
    }

    pub fn eval<F: Real>(&self, x: &[F]) -> F {
        match self {
            Benchmark::Sphere => x.iter().map(|&v| v * v).sum(),
            Benchmark::Rastrigin => {
                let ten = F::from_f64(10.0);
                let two_pi = F::from_f64(2.0) * F::PI();
                let d = F::from_f64(x.len() as f64);
                ten * d
                    + x.iter()
                        .map(|&v| v * v - ten * (two_pi * v).cos())
                        .sum::<F>()
            }
            Benchmark::Rosenbrock => {
                let hundred = F::from_f64(100.0);
                x.windows(2)
                    .map(|w| {
                        let a = w[1] - w[0] * w[0];
                        let b = F::one() - w[0];
                        hundred * a * a + b * b
                    })
                    .sum()
            }
            Benchmark::Ackley => {
                let d = F::from_f64(x.len() as f64);
                let twenty = F::from_f64(20.0);
                let two_pi = F::from_f64(2.0) * F::PI();
                let sum_sq: F = x.iter().map(|&v| v * v).sum();
                let sum_cos: F = x.iter().map(|&v| (two_pi * v).cos()).sum();
                twenty + F::E() - twenty * (F::from_f64(-0.2) * (sum_sq / d).sqrt()).exp()
                    - (sum_cos / d).exp()
            }
        }
    }
}

impl<F: Real> super::FitnessFn<F> for Benchmark {
    fn evaluate(&self, position: &[F]) -> crate::error::Result<F> {
        Ok(self.eval(position))
    }
}
