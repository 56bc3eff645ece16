//! Image preprocessing: median denoise, min-max contrast stretch, histogram
//! equalization. Stages are individually toggleable.

use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::{GrayImage, Histogram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PreprocessOptions {
    /// 3x3 median filter (window clipped at borders).
    pub median_filter: bool,
    /// Min-max stretch to the full [0, 255] range.
    pub normalize: bool,
    /// Histogram equalization.
    pub equalize: bool,
}

impl Default for PreprocessOptions {
    fn default() -> Self {
        Self { median_filter: true, normalize: true, equalize: false }
    }
}

fn median_3x3(image: &GrayImage) -> GrayImage {
    let (w, h) = (image.width(), image.height());
    let mut out = vec![0u8; w * h];
    let mut window = [0u8; 9];
    for y in 0..h {
        for x in 0..w {
            let mut n = 0;
            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    window[n] = image.get(nx, ny);
                    n += 1;
                }
            }
            window[..n].sort_unstable();
            out[y * w + x] = window[n / 2];
        }
    }
    GrayImage::new(w, h, out).expect("dimensions preserved")
}

fn min_max_stretch(image: &GrayImage) -> GrayImage {
    let min = *image.pixels().iter().min().expect("non-empty image");
    let max = *image.pixels().iter().max().expect("non-empty image");
    if min == max {
        // Degenerate range maps to itself.
        return image.clone();
    }
    let range = (max - min) as u32;
    let pixels = image
        .pixels()
        .iter()
        .map(|&p| (((p - min) as u32 * 255 + range / 2) / range) as u8)
        .collect();
    GrayImage::new(image.width(), image.height(), pixels).expect("dimensions preserved")
}

fn equalize(image: &GrayImage) -> GrayImage {
    let hist = Histogram::from_image(image);
    let total = hist.total();
    let mut cdf = [0u64; 256];
    let mut acc = 0;
    for (bin, &c) in hist.counts().iter().enumerate() {
        acc += c;
        cdf[bin] = acc;
    }
    let cdf_min = cdf.iter().copied().find(|&c| c > 0).unwrap_or(0);
    if total == cdf_min {
        return image.clone();
    }
    let denom = total - cdf_min;
    let mut lut = [0u8; 256];
    for bin in 0..256 {
        lut[bin] = (((cdf[bin].saturating_sub(cdf_min)) * 255 + denom / 2) / denom) as u8;
    }
    let pixels = image.pixels().iter().map(|&p| lut[p as usize]).collect();
    GrayImage::new(image.width(), image.height(), pixels).expect("dimensions preserved")
}

/// Run the enabled stages in order: median, stretch, equalize.
pub fn preprocess(image: &GrayImage, options: &PreprocessOptions) -> Result<GrayImage> {
    let mut out = image.clone();
    if options.median_filter {
        out = median_3x3(&out);
    }
    if options.normalize {
        out = min_max_stretch(&out);
    }
    if options.equalize {
        out = equalize(&out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL_ON: PreprocessOptions =
        PreprocessOptions { median_filter: true, normalize: true, equalize: true };

    #[test]
    fn constant_image_is_a_fixed_point() {
        let img = GrayImage::filled(4, 4, 77).unwrap();
        assert_eq!(preprocess(&img, &ALL_ON).unwrap(), img);
    }

    #[test]
    fn median_removes_salt_pixel() {
        let mut img = GrayImage::filled(3, 3, 10).unwrap();
        img.set(1, 1, 255);
        let opts = PreprocessOptions { median_filter: true, normalize: false, equalize: false };
        let out = preprocess(&img, &opts).unwrap();
        // median of {10 x8, 255} = 10
        assert_eq!(out.get(1, 1), 10);
    }

    #[test]
    fn stretch_hits_full_range_endpoints() {
        let img = GrayImage::new(2, 2, vec![50, 60, 80, 100]).unwrap();
        let opts = PreprocessOptions { median_filter: false, normalize: true, equalize: false };
        let out = preprocess(&img, &opts).unwrap();
        assert_eq!(*out.pixels().iter().min().unwrap(), 0);
        assert_eq!(*out.pixels().iter().max().unwrap(), 255);
        assert_eq!(out.get(0, 0), 0);
        assert_eq!(out.get(1, 1), 255);
    }

    #[test]
    fn dimensions_are_preserved() {
        let img = GrayImage::new(7, 3, (0..21).map(|i| i as u8 * 3).collect()).unwrap();
        let out = preprocess(&img, &ALL_ON).unwrap();
        assert_eq!(out.width(), 7);
        assert_eq!(out.height(), 3);
    }

    #[test]
    fn equalize_spreads_two_level_image() {
        let img = GrayImage::new(4, 1, vec![100, 100, 100, 101]).unwrap();
        let opts = PreprocessOptions { median_filter: false, normalize: false, equalize: true };
        let out = preprocess(&img, &opts).unwrap();
        assert_eq!(out.pixels(), &[0, 0, 0, 255]);
    }
}
