//! Per-image pipeline glue: preprocess, threshold, segment, featurize,
//! mask — and dataset assembly from labeled images.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{build_feature_vector, FeatureVector, VarianceMode};
use crate::scalar::Real;
use crate::segmentation::{
    apply_mask, binarize, extract_segments, fill_holes, otsu_threshold, preprocess, GrayImage,
    Histogram, PreprocessOptions, Segment, SegmentMask,
};
use crate::trainer::{Class, Dataset, DatasetItem, Split};

/// Image-side knobs shared by training and prediction; stored in the model
/// container so inference replays the training pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineOptions {
    pub preprocess: PreprocessOptions,
    /// Threshold via the intra-class-variance minimizer; when off,
    /// `fixed_threshold` is used instead.
    pub otsu: bool,
    pub fixed_threshold: u8,
    pub variance: VarianceMode,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            preprocess: PreprocessOptions::default(),
            otsu: true,
            fixed_threshold: 128,
            variance: VarianceMode::default(),
        }
    }
}

/// Everything the pipeline derives from one image.
#[derive(Debug, Clone)]
pub struct ProcessedImage<F: Real> {
    pub preprocessed: GrayImage,
    pub mask: SegmentMask,
    pub segments: Vec<Segment>,
    /// Features of the dominant (largest-area) segment; zeros when the mask
    /// is empty.
    pub features: FeatureVector<F>,
    /// Preprocessed image restricted to the mask: the network input.
    pub masked: GrayImage,
}

/// Run the full image pipeline. A flat image (no foreground/background
/// separation) yields an empty mask and zero features instead of an error.
pub fn process_image<F: Real>(
    image: &GrayImage,
    options: &PipelineOptions,
) -> Result<ProcessedImage<F>> {
    let preprocessed = preprocess(image, &options.preprocess)?;
    let threshold = if options.otsu {
        match otsu_threshold(&Histogram::from_image(&preprocessed)) {
            Ok(t) => Some(t),
            Err(Error::DegenerateHistogram) => None,
            Err(e) => return Err(e),
        }
    } else {
        Some(options.fixed_threshold)
    };

    let mask = match threshold {
        Some(t) => fill_holes(&binarize(&preprocessed, t)),
        None => SegmentMask::empty(preprocessed.width(), preprocessed.height()),
    };
    let segments = extract_segments(&mask);
    let features = match segments.iter().max_by_key(|s| s.area()) {
        Some(largest) => build_feature_vector(largest, &preprocessed, options.variance)?,
        None => FeatureVector::zeros(),
    };
    let masked = apply_mask(&preprocessed, &mask)?;
    Ok(ProcessedImage { preprocessed, mask, segments, features, masked })
}

/// Process labeled images into a dataset (masked image + features per item).
/// Split assignment is left to the caller.
pub fn build_dataset<F: Real>(
    labeled: &[(GrayImage, Class)],
    options: &PipelineOptions,
) -> Result<Dataset<F>> {
    let items: Vec<DatasetItem<F>> = labeled
        .par_iter()
        .map(|(image, label)| {
            let processed = process_image::<F>(image, options)?;
            Ok(DatasetItem {
                image: processed.masked,
                features: processed.features,
                label: *label,
                split: Split::Train,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Dataset::new(items))
}
