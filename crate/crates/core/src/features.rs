//! Per-segment statistical features: intensity mean, spread, and an
//! ellipse-area tumor-size estimate from the bounding box.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::segmentation::{GrayImage, Segment};

/// How the spread feature is computed.
///
/// The printed formula this pipeline follows is a mean absolute deviation;
/// a conventional squared variance is available behind the flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceMode {
    #[default]
    AbsoluteDeviation,
    Squared,
}

/// The three per-segment features fed to the classifier head.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector<F: Real> {
    /// Mean intensity, in [0, 255].
    pub mean: F,
    /// Spread of intensities around the mean (see [`VarianceMode`]).
    pub variance: F,
    /// Ellipse-area estimate `pi/4 * L * W` from the bounding box, px^2.
    pub tumor_size: F,
}

impl<F: Real> FeatureVector<F> {
    pub fn zeros() -> Self {
        Self { mean: F::zero(), variance: F::zero(), tumor_size: F::zero() }
    }

    pub fn as_array(&self) -> [F; 3] {
        [self.mean, self.variance, self.tumor_size]
    }
}

/// Average intensity of a non-empty pixel set.
pub fn segment_mean<F: Real>(pixels: &[u8]) -> Result<F> {
    if pixels.is_empty() {
        return Err(Error::contract("segment_mean of empty segment"));
    }
    let sum: F = pixels.iter().map(|&p| F::from_f64(p as f64)).sum();
    Ok(sum / F::from_f64(pixels.len() as f64))
}

/// Spread around a precomputed mean.
pub fn segment_variance<F: Real>(pixels: &[u8], mean: F, mode: VarianceMode) -> Result<F> {
    if pixels.is_empty() {
        return Err(Error::contract("segment_variance of empty segment"));
    }
    let n = F::from_f64(pixels.len() as f64);
    let sum: F = pixels
        .iter()
        .map(|&p| {
            let d = F::from_f64(p as f64) - mean;
            match mode {
                VarianceMode::AbsoluteDeviation => d.abs(),
                VarianceMode::Squared => d * d,
            }
        })
        .sum();
    Ok(sum / n)
}

/// Ellipse-area estimate from bounding-box height and width.
pub fn tumor_size<F: Real>(box_length: F, box_width: F) -> F {
    F::from_f64(std::f64::consts::FRAC_PI_4) * box_length * box_width
}

/// Compose the three features for one segment of a source image.
pub fn build_feature_vector<F: Real>(
    segment: &Segment,
    source: &GrayImage,
    mode: VarianceMode,
) -> Result<FeatureVector<F>> {
    let pixels: Vec<u8> = segment
        .pixels
        .iter()
        .map(|&idx| source.pixels()[idx])
        .collect();
    let mean = segment_mean::<F>(&pixels)?;
    let variance = segment_variance(&pixels, mean, mode)?;
    let size = tumor_size(
        F::from_f64(segment.box_height() as f64),
        F::from_f64(segment.box_width() as f64),
    );
    Ok(FeatureVector { mean, variance, tumor_size: size })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segmentation::{binarize, extract_segments};

    #[test]
    fn mean_basics() {
        assert_eq!(segment_mean::<f64>(&[10, 20, 30]).unwrap(), 20.0);
        assert_eq!(segment_mean::<f64>(&[7]).unwrap(), 7.0);
        assert!(segment_mean::<f64>(&[]).is_err());
    }

    #[test]
    fn mean_matches_compensated_sum() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let pixels: Vec<u8> = (0..1000).map(|_| rng.gen()).collect();
        let mean: f64 = segment_mean(&pixels).unwrap();
        // Kahan summation as the independent route.
        let mut sum = 0.0f64;
        let mut carry = 0.0f64;
        for &p in &pixels {
            let y = p as f64 - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        let oracle = sum / 1000.0;
        assert!((mean - oracle).abs() <= 1e-9 * oracle.abs());
    }

    #[test]
    fn absolute_deviation_as_printed() {
        // (|10-20| + 0 + |30-20|) / 3
        let v: f64 =
            segment_variance(&[10, 20, 30], 20.0, VarianceMode::AbsoluteDeviation).unwrap();
        assert!((v - 20.0 / 3.0).abs() < 1e-12);
        let v: f64 =
            segment_variance(&[50, 50, 50], 50.0, VarianceMode::AbsoluteDeviation).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn squared_mode_differs() {
        let v: f64 = segment_variance(&[10, 20, 30], 20.0, VarianceMode::Squared).unwrap();
        assert!((v - 200.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn variance_matches_two_pass_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let pixels: Vec<u8> = (0..500).map(|_| rng.gen()).collect();
        let mean: f64 = segment_mean(&pixels).unwrap();
        let v: f64 = segment_variance(&pixels, mean, VarianceMode::AbsoluteDeviation).unwrap();
        let oracle: f64 =
            pixels.iter().map(|&p| (p as f64 - mean).abs()).sum::<f64>() / pixels.len() as f64;
        assert!((v - oracle).abs() < 1e-12);
    }

    #[test]
    fn tumor_size_formula() {
        assert_eq!(tumor_size::<f64>(0.0, 6.0), 0.0);
        assert!((tumor_size::<f64>(10.0, 10.0) - 25.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!((tumor_size::<f64>(4.0, 6.0) - 6.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn feature_vector_composition() {
        // 2x2 block of 50s inside a 4x4 image.
        let mut img = GrayImage::filled(4, 4, 0).unwrap();
        for (x, y) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            img.set(x, y, 50);
        }
        let mask = binarize(&img, 0);
        let segments = extract_segments(&mask);
        assert_eq!(segments.len(), 1);
        let fv: FeatureVector<f64> =
            build_feature_vector(&segments[0], &img, VarianceMode::AbsoluteDeviation).unwrap();
        assert_eq!(fv.mean, 50.0);
        assert_eq!(fv.variance, 0.0);
        assert!((fv.tumor_size - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn tumor_size_scales_quadratically() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let l: f64 = rng.gen_range(0.0..50.0);
            let w: f64 = rng.gen_range(0.0..50.0);
            let k: f64 = rng.gen_range(0.1..4.0);
            let base = tumor_size(l, w);
            let scaled = tumor_size(k * l, k * w);
            assert!((scaled - k * k * base).abs() <= 1e-9 * (1.0 + scaled.abs()));
        }
    }

    #[test]
    fn mean_and_spread_stay_in_range() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..50 {
            let n = rng.gen_range(1..200);
            let pixels: Vec<u8> = (0..n).map(|_| rng.gen()).collect();
            let lo = *pixels.iter().min().unwrap() as f64;
            let hi = *pixels.iter().max().unwrap() as f64;
            let mean: f64 = segment_mean(&pixels).unwrap();
            assert!(lo <= mean && mean <= hi);
            let spread: f64 =
                segment_variance(&pixels, mean, VarianceMode::AbsoluteDeviation).unwrap();
            assert!(spread <= hi - lo + 1e-12);
        }
    }

    #[test]
    fn one_feature_vector_per_segment() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        let pixels: Vec<u8> = (0..144).map(|_| rng.gen()).collect();
        let img = GrayImage::new(12, 12, pixels).unwrap();
        let mask = binarize(&img, 128);
        let segments = extract_segments(&mask);
        let features: Vec<FeatureVector<f64>> = segments
            .iter()
            .map(|s| build_feature_vector(s, &img, VarianceMode::AbsoluteDeviation).unwrap())
            .collect();
        assert_eq!(features.len(), segments.len());
    }

    #[test]
    fn shift_moves_mean_only() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let pixels: Vec<u8> = (0..64).map(|_| rng.gen_range(0..100)).collect();
        let shifted: Vec<u8> = pixels.iter().map(|&p| p + 100).collect();
        let m1: f64 = segment_mean(&pixels).unwrap();
        let m2: f64 = segment_mean(&shifted).unwrap();
        assert!((m2 - m1 - 100.0).abs() < 1e-9);
        let v1: f64 = segment_variance(&pixels, m1, VarianceMode::AbsoluteDeviation).unwrap();
        let v2: f64 = segment_variance(&shifted, m2, VarianceMode::AbsoluteDeviation).unwrap();
        assert!((v1 - v2).abs() < 1e-9);
    }
}
