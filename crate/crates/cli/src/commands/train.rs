//! `train`: full pipeline from a labeled corpus to a trained model file.

use std::path::Path;

use hawkwolf::network::{save_model, ModelContainer};
use hawkwolf::pipeline::build_dataset;
use hawkwolf::trainer::{train, FeatureScaler, Split};

use crate::commands::{out_file, write_text};
use crate::config::FileConfig;
use crate::error::CliError;
use crate::ingest::ingest;

pub fn run(
    config: &FileConfig,
    input: &Path,
    labels: Option<&Path>,
    seed: u64,
    out_dir: &Path,
) -> Result<(), CliError> {
    let spec = config.network.to_spec()?;
    let ingested = ingest(input, labels, spec.input_height)?;
    println!(
        "ingested {} image(s), skipped {}",
        ingested.items.len(),
        ingested.skipped
    );

    let labeled: Vec<_> = ingested
        .items
        .into_iter()
        .map(|(_, image, class)| (image, class))
        .collect();
    let options = config.pipeline_options();
    let mut dataset = build_dataset::<f64>(&labeled, &options)?;
    dataset.assign_splits(seed, config.train.train_fraction)?;

    let run_config = config.run_config(seed);
    let (weights, report) = train(&dataset, &spec, &run_config, &config.train_options())?;

    let scaler = FeatureScaler::fit(
        dataset
            .indices_of(Split::Train)
            .into_iter()
            .map(|i| &dataset.items()[i].features),
    );
    let model = ModelContainer { spec, weights, scaler, pipeline: options };
    let model_path = out_file(out_dir, "model.hw")?;
    let mut buf = Vec::new();
    save_model(&model, &mut buf)?;
    std::fs::write(&model_path, buf)?;

    write_text(&out_file(out_dir, "train_report.json")?, &report.to_json()?)?;
    let head_range = model.weights.slice_range(config.train_options().slice)?;
    let summary = hawkwolf::optimizer::RunSummary {
        seed,
        config: run_config,
        best_position: model.weights.as_flat()[head_range].to_vec(),
        best_fitness: report.best_rmse,
        evaluations: report.evaluations,
        wall_clock_seconds: report.timing.wall_clock_seconds,
    };
    write_text(&out_file(out_dir, "run_summary.json")?, &summary.to_json()?)?;
    let mut curves = Vec::new();
    report.write_curves_csv(&mut curves)?;
    write_text(&out_file(out_dir, "curves.csv")?, &String::from_utf8_lossy(&curves))?;
    let mut trace = Vec::new();
    report.write_trace_csv(&mut trace)?;
    write_text(&out_file(out_dir, "trace.csv")?, &String::from_utf8_lossy(&trace))?;

    let fmt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.4}"));
    println!("model -> {}", model_path.display());
    println!(
        "best batch RMSE {:.6} after {} evaluations",
        report.best_rmse, report.evaluations
    );
    println!(
        "test accuracy {} precision {} recall {} f-measure {}",
        fmt(report.test_metrics.accuracy),
        fmt(report.test_metrics.precision),
        fmt(report.test_metrics.recall),
        fmt(report.test_metrics.f_measure),
    );
    Ok(())
}
