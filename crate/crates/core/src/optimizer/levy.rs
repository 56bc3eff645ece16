//! Levy-flight step generator.

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Lanczos approximation (g = 7, n = 9), accurate to ~15 significant digits
/// for positive arguments.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection for the left half-plane.
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// Scale constant of the heavy-tailed step distribution:
///
/// `sigma = [Gamma(1+beta) sin(pi beta / 2) / (Gamma((1+beta)/2) beta 2^((beta-1)/2))]^(1/beta)`
pub fn levy_sigma<F: Real>(beta: f64) -> Result<F> {
    if !(beta > 1.0 && beta <= 2.0) {
        return Err(Error::contract("levy beta must lie in (1, 2]"));
    }
    let numerator = gamma(1.0 + beta) * (std::f64::consts::PI * beta / 2.0).sin();
    let denominator = gamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    Ok(F::from_f64((numerator / denominator).powf(1.0 / beta)))
}

/// One heavy-tailed step per dimension: `0.01 * u / |v|^(1/beta)` with
/// `u ~ N(0, sigma^2)` and `v ~ N(0, 1)`.
pub fn levy_flight<F: Real, R: Rng + ?Sized>(dim: usize, beta: f64, rng: &mut R) -> Result<Vec<F>> {
    let sigma = levy_sigma::<F>(beta)?;
    let scale = F::from_f64(0.01);
    let exponent = F::from_f64(1.0 / beta);
    let mut step = Vec::with_capacity(dim);
    for _ in 0..dim {
        let u = F::standard_normal(rng) * sigma;
        let v = F::standard_normal(rng);
        step.push(scale * u / v.abs().powf(exponent));
    }
    Ok(step)
}
