//! `predict`: per-image label and probability from a stored model.

use std::path::Path;

use serde::Serialize;

use hawkwolf::network::{forward, load_model, DropoutMode, ModelContainer, Tensor};
use hawkwolf::pipeline::process_image;

use crate::commands::{out_file, write_text};
use crate::error::CliError;
use crate::ingest::{collect_inputs, load_gray, normalize_geometry};

#[derive(Serialize)]
struct Prediction {
    file: String,
    label: String,
    probability: f64,
}

pub fn run(model_path: &Path, input: &Path, out_dir: &Path) -> Result<(), CliError> {
    let bytes = std::fs::read(model_path)
        .map_err(|e| CliError::data(format!("cannot read model {}: {e}", model_path.display())))?;
    let model: ModelContainer<f64> = load_model(bytes.as_slice())?;

    let mut predictions = Vec::new();
    for path in collect_inputs(input)? {
        let raw = load_gray(&path)?;
        let normalized = normalize_geometry(&raw, model.spec.input_height);
        let processed = process_image::<f64>(&normalized, &model.pipeline)?;
        let side = model.scaler.apply(&processed.features);
        let tensor = Tensor::from_image(&processed.masked);
        let probs = forward(&model.spec, &model.weights, &tensor, &side, DropoutMode::Inference)?;
        let positive = probs[1];
        let label = if positive > probs[0] { "yes" } else { "no" };
        println!("{}: {} (p_tumor = {:.4})", path.display(), label, positive);
        predictions.push(Prediction {
            file: path.display().to_string(),
            label: label.to_string(),
            probability: positive,
        });
    }
    let json = serde_json::to_string_pretty(&predictions)
        .map_err(|e| CliError::Internal(format!("prediction serialization: {e}")))?;
    write_text(&out_file(out_dir, "predictions.json")?, &json)?;
    Ok(())
}
