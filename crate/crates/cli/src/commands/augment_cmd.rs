//! `augment`: materialize the augmentation recipe as PNG files.

use std::path::Path;

use hawkwolf::segmentation::GrayImage;
use hawkwolf::trainer::Class;

use crate::augment::{augment_dataset, AugmentOp};
use crate::commands::file_stem;
use crate::config::FileConfig;
use crate::error::CliError;
use crate::ingest::{collect_inputs, load_gray};

fn save_png(image: &GrayImage, path: &Path) -> Result<(), CliError> {
    let buffer = image::GrayImage::from_raw(
        image.width() as u32,
        image.height() as u32,
        image.pixels().to_vec(),
    )
    .expect("buffer matches dims");
    buffer
        .save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

pub fn run(config: &FileConfig, input: &Path, out_dir: &Path) -> Result<(), CliError> {
    let ops = config.augment.parsed_ops()?;
    let include_original = config.augment.include_original;

    let inputs = collect_inputs(input)?;
    let labeled: Vec<(GrayImage, Class)> = inputs
        .iter()
        .map(|path| load_gray(path).map(|img| (img, Class::Negative)))
        .collect::<Result<_, _>>()?;
    let expanded = augment_dataset(&labeled, &ops, include_original);

    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", out_dir.display())))?;
    let per_image = ops.len() + usize::from(include_original);
    let mut names: Vec<String> = Vec::with_capacity(per_image);
    if include_original {
        names.push("original".into());
    }
    names.extend(ops.iter().map(AugmentOp::name));

    for (index, (image, _)) in expanded.iter().enumerate() {
        let source = &inputs[index / per_image];
        let variant = &names[index % per_image];
        let path = out_dir.join(format!("{}__{}.png", file_stem(source), variant));
        save_png(image, &path)?;
    }
    println!(
        "{} input(s) x {} variant(s) -> {} file(s) in {}",
        inputs.len(),
        per_image,
        expanded.len(),
        out_dir.display()
    );
    Ok(())
}
