//! Otsu threshold selection: minimize the two-class weighted sum of
//! variances over all split points.

use crate::error::{Error, Result};

use super::Histogram;

/// Weighted intra-class variance proxy for one split, as an exact fraction.
///
/// With integer class weight `W`, intensity sum `S1` and squared-intensity
/// sum `S2`, the class contributes `(W * S2 - S1^2) / W` to `N * sigma_w^2`.
/// Summing the two classes gives a single fraction `(p, q)`; comparing
/// fractions with cross-multiplication keeps the argmin exact, so plateau
/// ties always resolve toward the smallest split.
#[derive(Debug, Clone, Copy)]
struct Objective {
    p: u128,
    q: u128,
}

impl Objective {
    fn from_classes(a0: u128, w0: u128, a1: u128, w1: u128) -> Self {
        // A class with zero weight contributes nothing.
        if w0 == 0 {
            Self { p: a1, q: w1 }
        } else if w1 == 0 {
            Self { p: a0, q: w0 }
        } else {
            Self { p: a0 * w1 + a1 * w0, q: w0 * w1 }
        }
    }

    fn less_than(&self, other: &Self) -> bool {
        match (self.p.checked_mul(other.q), other.p.checked_mul(self.q)) {
            (Some(lhs), Some(rhs)) => lhs < rhs,
            // Beyond ~4.8M pixels the cross products can no longer be exact;
            // the ratio comparison is then the best available.
            _ => (self.p as f64) / (self.q as f64) < (other.p as f64) / (other.q as f64),
        }
    }
}

fn class_numerator(w: u128, s1: u128, s2: u128) -> u128 {
    // W * S2 - S1^2 >= 0 by Cauchy-Schwarz.
    w * s2 - s1 * s1
}

/// Threshold minimizing the intra-class variance, ties broken toward the
/// smallest value. Bins `0..=t` form the background class.
pub fn otsu_threshold(hist: &Histogram) -> Result<u8> {
    if hist.total() == 0 {
        return Err(Error::contract("otsu_threshold on empty histogram"));
    }
    if hist.occupied_bins() < 2 {
        return Err(Error::DegenerateHistogram);
    }

    let counts = hist.counts();
    let mut total_w: u128 = 0;
    let mut total_s1: u128 = 0;
    let mut total_s2: u128 = 0;
    for (bin, &c) in counts.iter().enumerate() {
        let c = c as u128;
        let b = bin as u128;
        total_w += c;
        total_s1 += b * c;
        total_s2 += b * b * c;
    }

    let mut w0: u128 = 0;
    let mut s1_0: u128 = 0;
    let mut s2_0: u128 = 0;
    let mut best_t = 0u8;
    let mut best: Option<Objective> = None;
    for t in 0..=254usize {
        let c = counts[t] as u128;
        let b = t as u128;
        w0 += c;
        s1_0 += b * c;
        s2_0 += b * b * c;
        let w1 = total_w - w0;
        let a0 = class_numerator(w0, s1_0, s2_0);
        let a1 = class_numerator(w1, total_s1 - s1_0, total_s2 - s2_0);
        let objective = Objective::from_classes(a0, w0, a1, w1);
        if best.map_or(true, |b| objective.less_than(&b)) {
            best = Some(objective);
            best_t = t as u8;
        }
    }
    Ok(best_t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segmentation::{GrayImage, Histogram};
    use rand::{Rng, SeedableRng};

    /// Brute-force reference: for each split recompute both classes from the
    /// raw bins and keep the exact fractional objective.
    fn brute_force_otsu(hist: &Histogram) -> u8 {
        let counts = hist.counts();
        let mut best_t = 0u8;
        let mut best: Option<(u128, u128)> = None;
        for t in 0..=254usize {
            let mut class = [(0u128, 0u128, 0u128); 2];
            for (bin, &c) in counts.iter().enumerate() {
                let slot = usize::from(bin > t);
                class[slot].0 += c as u128;
                class[slot].1 += (bin as u128) * c as u128;
                class[slot].2 += (bin as u128) * (bin as u128) * c as u128;
            }
            let a = |(w, s1, s2): (u128, u128, u128)| w * s2 - s1 * s1;
            let (p, q) = if class[0].0 == 0 {
                (a(class[1]), class[1].0)
            } else if class[1].0 == 0 {
                (a(class[0]), class[0].0)
            } else {
                (a(class[0]) * class[1].0 + a(class[1]) * class[0].0, class[0].0 * class[1].0)
            };
            let better = match best {
                None => true,
                Some((bp, bq)) => p * bq < bp * q,
            };
            if better {
                best = Some((p, q));
                best_t = t as u8;
            }
        }
        best_t
    }

    #[test]
    fn two_delta_histogram_tie_breaks_low() {
        let mut counts = [0u64; 256];
        counts[0] = 50;
        counts[255] = 50;
        let hist = Histogram::from_counts(counts);
        assert_eq!(otsu_threshold(&hist).unwrap(), 0);
    }

    #[test]
    fn single_bin_is_degenerate() {
        let mut counts = [0u64; 256];
        counts[42] = 100;
        let hist = Histogram::from_counts(counts);
        assert!(matches!(otsu_threshold(&hist), Err(Error::DegenerateHistogram)));
        assert!(otsu_threshold(&Histogram::from_counts([0; 256])).is_err());
    }

    #[test]
    fn bimodal_histogram_splits_between_modes() {
        let mut counts = [0u64; 256];
        for b in 40..=60 {
            counts[b] = 10;
        }
        for b in 190..=210 {
            counts[b] = 10;
        }
        let t = otsu_threshold(&Histogram::from_counts(counts)).unwrap();
        assert!((60..190).contains(&(t as usize)), "t = {t}");
    }

    #[test]
    fn matches_brute_force_on_random_images() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let pixels: Vec<u8> = (0..256).map(|_| rng.gen()).collect();
            let img = GrayImage::new(16, 16, pixels).unwrap();
            let hist = Histogram::from_image(&img);
            assert_eq!(otsu_threshold(&hist).unwrap(), brute_force_otsu(&hist));
        }
    }

    #[test]
    fn matches_brute_force_on_plateau_heavy_images() {
        // Few distinct levels force large flat stretches of the objective.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let levels = [0u8, 3, 200, 255];
            let pixels: Vec<u8> = (0..64).map(|_| levels[rng.gen_range(0..4)]).collect();
            let img = GrayImage::new(8, 8, pixels).unwrap();
            let hist = Histogram::from_image(&img);
            assert_eq!(otsu_threshold(&hist).unwrap(), brute_force_otsu(&hist));
        }
    }
}
