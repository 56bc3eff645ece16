//! `features`: per-segment feature CSV across the inputs.

use std::fmt::Write as _;
use std::path::Path;

use hawkwolf::features::build_feature_vector;
use hawkwolf::pipeline::{process_image, ProcessedImage};

use crate::commands::{file_stem, out_file, write_text};
use crate::config::FileConfig;
use crate::error::CliError;
use crate::ingest::{collect_inputs, load_gray};

pub fn run(config: &FileConfig, input: &Path, out_dir: &Path) -> Result<(), CliError> {
    let options = config.pipeline_options();
    let mut csv = String::from("image_id,segment_label,mean,variance,tumor_size\n");
    let mut segment_count = 0usize;
    for path in collect_inputs(input)? {
        let image = load_gray(&path)?;
        let processed: ProcessedImage<f64> = process_image(&image, &options)?;
        let stem = file_stem(&path);
        for segment in &processed.segments {
            let fv = build_feature_vector::<f64>(segment, &processed.preprocessed, options.variance)
                .map_err(CliError::from)?;
            writeln!(
                csv,
                "{stem},{},{},{},{}",
                segment.label, fv.mean, fv.variance, fv.tumor_size
            )
            .expect("string write");
            segment_count += 1;
        }
    }
    let path = out_file(out_dir, "features.csv")?;
    write_text(&path, &csv)?;
    println!("{segment_count} segment feature row(s) -> {}", path.display());
    Ok(())
}
