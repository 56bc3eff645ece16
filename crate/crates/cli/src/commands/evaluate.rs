//! `evaluate`: metrics from a stored confusion matrix, or from a model run
//! over a labeled corpus (with ROC export).

use std::path::Path;

use serde::Serialize;

use hawkwolf::network::{load_model, ModelContainer};
use hawkwolf::pipeline::build_dataset;
use hawkwolf::trainer::{evaluate, roc_points, write_roc_csv, ConfusionMatrix, Metrics};

use crate::commands::{out_file, write_text};
use crate::config::FileConfig;
use crate::error::CliError;
use crate::ingest::ingest;

#[derive(Serialize)]
struct EvaluationReport {
    confusion: ConfusionMatrix,
    metrics: Metrics,
}

fn print_metrics(m: &Metrics) {
    let fmt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.2}"));
    println!(
        "accuracy {} precision {} recall {} f-measure {}",
        fmt(m.accuracy),
        fmt(m.precision),
        fmt(m.recall),
        fmt(m.f_measure)
    );
}

fn emit(cm: ConfusionMatrix, out_dir: &Path) -> Result<(), CliError> {
    let metrics = cm.metrics();
    print_metrics(&metrics);
    let report = EvaluationReport { confusion: cm, metrics };
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Internal(format!("report serialization: {e}")))?;
    write_text(&out_file(out_dir, "evaluation.json")?, &json)?;
    Ok(())
}

/// Parse `tp,fp,fn,tn`.
pub fn parse_confusion(text: &str) -> Result<ConfusionMatrix, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::usage("--confusion expects tp,fp,fn,tn"));
    }
    let parse = |s: &str| -> Result<u64, CliError> {
        s.parse()
            .map_err(|_| CliError::usage(format!("bad confusion count {s:?}")))
    };
    Ok(ConfusionMatrix::new(
        parse(parts[0])?,
        parse(parts[1])?,
        parse(parts[2])?,
        parse(parts[3])?,
    ))
}

pub fn run_from_confusion(text: &str, out_dir: &Path) -> Result<(), CliError> {
    emit(parse_confusion(text)?, out_dir)
}

pub fn run_with_model(
    config: &FileConfig,
    model_path: &Path,
    input: &Path,
    labels: Option<&Path>,
    out_dir: &Path,
) -> Result<(), CliError> {
    let bytes = std::fs::read(model_path)
        .map_err(|e| CliError::data(format!("cannot read model {}: {e}", model_path.display())))?;
    let model: ModelContainer<f64> = load_model(bytes.as_slice())?;

    let ingested = ingest(input, labels, model.spec.input_height)?;
    let labeled: Vec<_> = ingested
        .items
        .into_iter()
        .map(|(_, image, class)| (image, class))
        .collect();
    let dataset = build_dataset::<f64>(&labeled, &model.pipeline)?;
    let items: Vec<_> = dataset.items().iter().collect();

    let cm = evaluate(&model.spec, &model.weights, &model.scaler, &items)?;
    let thresholds: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let points = roc_points(&model.spec, &model.weights, &model.scaler, &items, &thresholds)?;
    let mut roc = Vec::new();
    write_roc_csv(&points, &thresholds, &mut roc)?;
    write_text(&out_file(out_dir, "roc.csv")?, &String::from_utf8_lossy(&roc))?;
    let _ = config;
    emit(cm, out_dir)
}
