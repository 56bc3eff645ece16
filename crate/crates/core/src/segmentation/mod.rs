//! Grayscale images, binary masks and the segmentation pipeline:
//! preprocessing, Otsu thresholding, binarization, hole filling, connected
//! components and masking.

mod components;
mod morphology;
mod otsu;
mod pgm;
mod preprocess;

pub use components::{extract_segments, Segment};
pub use morphology::fill_holes;
pub use otsu::otsu_threshold;
pub use pgm::{read_pgm, write_pgm};
pub use preprocess::{preprocess, PreprocessOptions};

use crate::error::{Error, Result};

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::contract("image must have positive area"));
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch {
                context: "image pixel buffer",
                expected: width * height,
                actual: pixels.len(),
            });
        }
        Ok(Self { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.pixels[y * self.width + x] = value;
    }
}

/// Intensity histogram of one image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: [u64; 256],
    total: u64,
}

impl Histogram {
    pub fn from_image(image: &GrayImage) -> Self {
        let mut counts = [0u64; 256];
        for &p in image.pixels() {
            counts[p as usize] += 1;
        }
        Self { counts, total: image.pixels().len() as u64 }
    }

    pub fn from_counts(counts: [u64; 256]) -> Self {
        let total = counts.iter().sum();
        Self { counts, total }
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn occupied_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

/// Binary mask aligned with a source image, remembering the threshold it
/// came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
    threshold: u8,
}

impl SegmentMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>, threshold: u8) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::DimensionMismatch {
                context: "mask bit buffer",
                expected: width * height,
                actual: bits.len(),
            });
        }
        Ok(Self { width, height, bits, threshold })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self { width, height, bits: vec![false; width * height], threshold: 0 }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn threshold(&self) -> u8 {
        self.threshold
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Set a bit wherever the pixel intensity strictly exceeds `threshold`.
pub fn binarize(image: &GrayImage, threshold: u8) -> SegmentMask {
    let bits = image.pixels().iter().map(|&p| p > threshold).collect();
    SegmentMask {
        width: image.width(),
        height: image.height(),
        bits,
        threshold,
    }
}

/// Keep pixels under set bits, zero the rest.
pub fn apply_mask(image: &GrayImage, mask: &SegmentMask) -> Result<GrayImage> {
    if image.width() != mask.width() || image.height() != mask.height() {
        return Err(Error::DimensionMismatch {
            context: "apply_mask",
            expected: image.width() * image.height(),
            actual: mask.width() * mask.height(),
        });
    }
    let pixels = image
        .pixels()
        .iter()
        .zip(mask.bits())
        .map(|(&p, &b)| if b { p } else { 0 })
        .collect();
    GrayImage::new(image.width(), image.height(), pixels)
}
