//! Deterministic label-preserving image transforms.

use hawkwolf::segmentation::GrayImage;
use hawkwolf::trainer::Class;

use crate::error::CliError;

/// One augmentation transform. Rotations and flips are exact pixel
/// permutations; brightness saturates at the intensity bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugmentOp {
    Rotate90,
    Rotate180,
    Rotate270,
    FlipH,
    FlipV,
    Brightness(i16),
}

impl AugmentOp {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "rotate90" => Ok(AugmentOp::Rotate90),
            "rotate180" => Ok(AugmentOp::Rotate180),
            "rotate270" => Ok(AugmentOp::Rotate270),
            "flip_h" => Ok(AugmentOp::FlipH),
            "flip_v" => Ok(AugmentOp::FlipV),
            other => {
                if let Some(delta) = other.strip_prefix("brightness") {
                    let delta: i16 = delta.parse().map_err(|_| {
                        CliError::data(format!("bad brightness delta in augment op {other:?}"))
                    })?;
                    Ok(AugmentOp::Brightness(delta))
                } else {
                    Err(CliError::data(format!("unknown augment op {other:?}")))
                }
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            AugmentOp::Rotate90 => "rotate90".into(),
            AugmentOp::Rotate180 => "rotate180".into(),
            AugmentOp::Rotate270 => "rotate270".into(),
            AugmentOp::FlipH => "flip_h".into(),
            AugmentOp::FlipV => "flip_v".into(),
            AugmentOp::Brightness(d) => format!("brightness{d:+}"),
        }
    }

    pub fn apply(&self, image: &GrayImage) -> GrayImage {
        let (w, h) = (image.width(), image.height());
        match self {
            // clockwise quarter turn: (x, y) <- (y, h-1-x) of the source
            AugmentOp::Rotate90 => {
                let mut out = vec![0u8; w * h];
                for y in 0..h {
                    for x in 0..w {
                        out[x * h + (h - 1 - y)] = image.get(x, y);
                    }
                }
                GrayImage::new(h, w, out).expect("transposed dims")
            }
            AugmentOp::Rotate180 => {
                let mut out = image.pixels().to_vec();
                out.reverse();
                GrayImage::new(w, h, out).expect("same dims")
            }
            AugmentOp::Rotate270 => {
                let mut out = vec![0u8; w * h];
                for y in 0..h {
                    for x in 0..w {
                        out[(w - 1 - x) * h + y] = image.get(x, y);
                    }
                }
                GrayImage::new(h, w, out).expect("transposed dims")
            }
            AugmentOp::FlipH => {
                let mut out = vec![0u8; w * h];
                for y in 0..h {
                    for x in 0..w {
                        out[y * w + (w - 1 - x)] = image.get(x, y);
                    }
                }
                GrayImage::new(w, h, out).expect("same dims")
            }
            AugmentOp::FlipV => {
                let mut out = vec![0u8; w * h];
                for y in 0..h {
                    for x in 0..w {
                        out[(h - 1 - y) * w + x] = image.get(x, y);
                    }
                }
                GrayImage::new(w, h, out).expect("same dims")
            }
            AugmentOp::Brightness(delta) => {
                let pixels = image
                    .pixels()
                    .iter()
                    .map(|&p| (p as i16 + delta).clamp(0, 255) as u8)
                    .collect();
                GrayImage::new(w, h, pixels).expect("same dims")
            }
        }
    }
}

/// Expand a labeled corpus: every input yields one item per enabled op,
/// plus the original when requested. Labels are inherited.
pub fn augment_dataset(
    labeled: &[(GrayImage, Class)],
    ops: &[AugmentOp],
    include_original: bool,
) -> Vec<(GrayImage, Class)> {
    let per_image = ops.len() + usize::from(include_original);
    let mut out = Vec::with_capacity(labeled.len() * per_image);
    for (image, label) in labeled {
        if include_original {
            out.push((image.clone(), *label));
        }
        for op in ops {
            out.push((op.apply(image), *label));
        }
    }
    out
}
