//! `segment`: masks plus a threshold report for each input image.

use std::path::Path;

use serde::Serialize;

use hawkwolf::pipeline::{process_image, ProcessedImage};

use crate::commands::{file_stem, out_file, write_text};
use crate::config::FileConfig;
use crate::error::CliError;
use crate::ingest::{collect_inputs, load_gray};

#[derive(Serialize)]
struct SegmentRow {
    file: String,
    threshold: u8,
    segments: usize,
    foreground_pixels: usize,
    mask: String,
}

pub fn run(config: &FileConfig, input: &Path, out_dir: &Path) -> Result<(), CliError> {
    let options = config.pipeline_options();
    let mut rows = Vec::new();
    for path in collect_inputs(input)? {
        let image = load_gray(&path)?;
        let processed: ProcessedImage<f64> = process_image(&image, &options)?;
        let stem = file_stem(&path);
        let mask_path = out_file(out_dir, &format!("{stem}_mask.pgm"))?;
        let mut buf = Vec::new();
        processed.mask.write_pgm(&mut buf)?;
        std::fs::write(&mask_path, buf)?;
        rows.push(SegmentRow {
            file: path.display().to_string(),
            threshold: processed.mask.threshold(),
            segments: processed.segments.len(),
            foreground_pixels: processed.mask.count_ones(),
            mask: mask_path.display().to_string(),
        });
        println!(
            "{}: threshold {} -> {} segment(s), {} px foreground",
            path.display(),
            processed.mask.threshold(),
            processed.segments.len(),
            processed.mask.count_ones()
        );
    }
    let report = serde_json::to_string_pretty(&rows)
        .map_err(|e| CliError::Internal(format!("report serialization: {e}")))?;
    write_text(&out_file(out_dir, "segment_report.json")?, &report)?;
    Ok(())
}
