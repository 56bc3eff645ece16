//! Seeded synthetic corpus: bright square blobs over low noise (positive)
//! versus noise-only frames (negative). Desk-scale stand-in for a real
//! scan corpus.

use rand::Rng;

use crate::rng::{RngContext, StreamDomain};
use crate::segmentation::GrayImage;

use super::Class;

/// Generate `count` images of `size x size`, alternating labels. Positives
/// carry one bright axis-aligned square at a random position.
pub fn blob_dataset(count: usize, size: usize, seed: u64) -> Vec<(GrayImage, Class)> {
    let ctx = RngContext::new(seed);
    (0..count)
        .map(|i| {
            let mut rng = ctx.stream(StreamDomain::Synth, 0, i as u64);
            let label = Class::from_index(i % 2);
            let mut pixels = vec![0u8; size * size];
            for p in &mut pixels {
                *p = rng.gen_range(0..=25);
            }
            let mut image = GrayImage::new(size, size, pixels).expect("valid size");
            if label == Class::Positive {
                let side = rng.gen_range(size / 6..=size / 3).max(2);
                let x0 = rng.gen_range(0..=size - side);
                let y0 = rng.gen_range(0..=size - side);
                let level: u8 = rng.gen_range(180..=250);
                for y in y0..y0 + side {
                    for x in x0..x0 + side {
                        image.set(x, y, level.saturating_add(rng.gen_range(0..=5)));
                    }
                }
            }
            (image, label)
        })
        .collect()
}
