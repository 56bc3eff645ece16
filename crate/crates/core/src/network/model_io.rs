//! Versioned model container: JSON header (spec, feature scaler, pipeline
//! options), little-endian `f64` weight blocks in layout order, FNV-1a
//! trailer checksum.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::PipelineOptions;
use crate::scalar::Real;
use crate::trainer::FeatureScaler;
use crate::util::Fnv1a64;

use super::{NetworkSpec, Weights};

const MAGIC: &[u8; 8] = b"HWKWLF01";

/// Everything needed to run inference later.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelContainer<F: Real> {
    pub spec: NetworkSpec,
    pub weights: Weights<F>,
    pub scaler: FeatureScaler,
    pub pipeline: PipelineOptions,
}

#[derive(Serialize, Deserialize)]
struct Header {
    spec: NetworkSpec,
    scaler: FeatureScaler,
    pipeline: PipelineOptions,
    weight_count: usize,
}

/// Serialize a model container.
pub fn save_model<F: Real, W: Write>(model: &ModelContainer<F>, mut out: W) -> Result<()> {
    let header = Header {
        spec: model.spec.clone(),
        scaler: model.scaler.clone(),
        pipeline: model.pipeline.clone(),
        weight_count: model.weights.len(),
    };
    let header_json = serde_json::to_vec(&header)
        .map_err(|e| Error::ModelFormat(format!("header serialization: {e}")))?;

    let mut hash = Fnv1a64::new();
    let mut write_hashed = |out: &mut W, bytes: &[u8]| -> Result<()> {
        hash.update(bytes);
        out.write_all(bytes)?;
        Ok(())
    };
    write_hashed(&mut out, MAGIC)?;
    write_hashed(&mut out, &(header_json.len() as u32).to_le_bytes())?;
    write_hashed(&mut out, &header_json)?;
    for &v in model.weights.as_flat() {
        write_hashed(&mut out, &v.to_f64_lossy().to_le_bytes())?;
    }
    out.write_all(&hash.finish().to_le_bytes())?;
    Ok(())
}

/// Deserialize and verify a model container. Rejects bad magic, corrupted
/// payloads and spec/weight length mismatches.
pub fn load_model<F: Real, R: Read>(mut input: R) -> Result<ModelContainer<F>> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() < MAGIC.len() + 4 + 8 {
        return Err(Error::ModelFormat("container too short".into()));
    }
    let (payload, checksum_bytes) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(checksum_bytes.try_into().unwrap());
    if crate::util::fnv1a64(payload) != stored {
        return Err(Error::ModelFormat("checksum mismatch".into()));
    }
    if &payload[..8] != MAGIC {
        return Err(Error::ModelFormat("bad magic or unsupported version".into()));
    }
    let header_len = u32::from_le_bytes(payload[8..12].try_into().unwrap()) as usize;
    let header_end = 12 + header_len;
    if payload.len() < header_end {
        return Err(Error::ModelFormat("truncated header".into()));
    }
    let header: Header = serde_json::from_slice(&payload[12..header_end])
        .map_err(|e| Error::ModelFormat(format!("header parse: {e}")))?;

    let weight_bytes = &payload[header_end..];
    if weight_bytes.len() != header.weight_count * 8 {
        return Err(Error::ModelFormat(format!(
            "weight payload holds {} bytes, header promises {} values",
            weight_bytes.len(),
            header.weight_count
        )));
    }
    let flat: Vec<F> = weight_bytes
        .chunks_exact(8)
        .map(|c| F::from_f64(f64::from_le_bytes(c.try_into().unwrap())))
        .collect();
    let weights = Weights::from_flat(&header.spec, flat).map_err(|e| {
        Error::ModelFormat(format!("spec/weight length mismatch: {e}"))
    })?;
    Ok(ModelContainer {
        spec: header.spec,
        weights,
        scaler: header.scaler,
        pipeline: header.pipeline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Activation, LayerSpec};

    fn sample_model() -> ModelContainer<f64> {
        let spec = NetworkSpec {
            input_height: 6,
            input_width: 6,
            side_features: 3,
            layers: vec![
                LayerSpec::Conv { filters: 2, kernel: 3, stride: 1, padding: 0 },
                LayerSpec::Relu,
                LayerSpec::MaxPool { window: 2, stride: 2 },
                LayerSpec::FullyConnected { units: 4, activation: Activation::Relu },
                LayerSpec::Dropout { probability: 0.5 },
                LayerSpec::FullyConnected { units: 2, activation: Activation::Identity },
                LayerSpec::SoftmaxClassifier { classes: 2 },
            ],
        };
        let weights = Weights::init_he(&spec, 77).unwrap();
        ModelContainer {
            spec,
            weights,
            scaler: FeatureScaler::identity(),
            pipeline: PipelineOptions::default(),
        }
    }

    #[test]
    fn round_trip_preserves_everything() {
        let model = sample_model();
        let mut buf = Vec::new();
        save_model(&model, &mut buf).unwrap();
        let back: ModelContainer<f64> = load_model(buf.as_slice()).unwrap();
        assert_eq!(back, model);
    }

    #[test]
    fn corruption_is_rejected() {
        let model = sample_model();
        let mut buf = Vec::new();
        save_model(&model, &mut buf).unwrap();
        let mid = buf.len() / 2;
        buf[mid] ^= 0xFF;
        assert!(matches!(load_model::<f64, _>(buf.as_slice()), Err(Error::ModelFormat(_))));
    }

    #[test]
    fn truncated_weights_are_rejected() {
        let model = sample_model();
        let mut buf = Vec::new();
        save_model(&model, &mut buf).unwrap();
        // drop one f64 from the payload and re-trail a fresh checksum
        let cut = buf.len() - 8 - 8;
        let mut shorter = buf[..cut].to_vec();
        let checksum = crate::util::fnv1a64(&shorter);
        shorter.extend_from_slice(&checksum.to_le_bytes());
        assert!(matches!(load_model::<f64, _>(shorter.as_slice()), Err(Error::ModelFormat(_))));
    }
}
