//! Dataset ingestion: decode images, normalize geometry, attach labels.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use image::imageops::FilterType;

use hawkwolf::segmentation::GrayImage;
use hawkwolf::trainer::Class;

use crate::error::CliError;

const IMAGE_EXTENSIONS: [&str; 5] = ["png", "jpg", "jpeg", "pgm", "pnm"];

fn is_image_path(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
        .unwrap_or(false)
}

/// Decode to 8-bit grayscale by luminance.
pub fn load_gray(path: &Path) -> Result<GrayImage, CliError> {
    let decoded = image::open(path)
        .map_err(|e| CliError::data(format!("cannot decode {}: {e}", path.display())))?;
    let luma = decoded.to_luma8();
    GrayImage::new(luma.width() as usize, luma.height() as usize, luma.into_raw())
        .map_err(CliError::from)
}

/// Pad to a centered square, then resize to `target x target`.
pub fn normalize_geometry(image: &GrayImage, target: usize) -> GrayImage {
    let (w, h) = (image.width(), image.height());
    let side = w.max(h);
    let mut canvas = image::GrayImage::new(side as u32, side as u32);
    let (dx, dy) = ((side - w) / 2, (side - h) / 2);
    for y in 0..h {
        for x in 0..w {
            canvas.put_pixel((x + dx) as u32, (y + dy) as u32, image::Luma([image.get(x, y)]));
        }
    }
    let resized = image::imageops::resize(&canvas, target as u32, target as u32, FilterType::Triangle);
    GrayImage::new(target, target, resized.into_raw()).expect("resize yields target dims")
}

fn sorted_image_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && is_image_path(p))
        .collect();
    files.sort();
    Ok(files)
}

fn parse_label(text: &str) -> Option<Class> {
    match text.trim().to_ascii_lowercase().as_str() {
        "yes" | "1" | "positive" | "tumor" => Some(Class::Positive),
        "no" | "0" | "negative" => Some(Class::Negative),
        _ => None,
    }
}

/// Read a `filename,label` (or whitespace-separated) mapping.
fn read_labels_file(path: &Path) -> Result<BTreeMap<String, Class>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read labels {}: {e}", path.display())))?;
    let mut labels = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, label) = line
            .split_once(',')
            .or_else(|| line.split_once(char::is_whitespace))
            .ok_or_else(|| {
                CliError::data(format!("labels line {}: expected 'file,label'", lineno + 1))
            })?;
        let class = parse_label(label).ok_or_else(|| {
            CliError::data(format!("labels line {}: unknown label {label:?}", lineno + 1))
        })?;
        labels.insert(name.trim().to_string(), class);
    }
    Ok(labels)
}

/// Outcome of ingesting one directory tree.
pub struct Ingested {
    pub items: Vec<(PathBuf, GrayImage, Class)>,
    pub skipped: usize,
}

/// Load a labeled image corpus and normalize geometry to `target`.
///
/// Layouts: `yes/` and `no/` class directories, or a flat directory plus a
/// labels file. Unreadable files are skipped with a warning on stderr; an
/// empty result is fatal.
pub fn ingest(dir: &Path, labels_file: Option<&Path>, target: usize) -> Result<Ingested, CliError> {
    let yes_dir = dir.join("yes");
    let no_dir = dir.join("no");
    let mut sources: Vec<(PathBuf, Class)> = Vec::new();
    if yes_dir.is_dir() && no_dir.is_dir() {
        for path in sorted_image_files(&no_dir)? {
            sources.push((path, Class::Negative));
        }
        for path in sorted_image_files(&yes_dir)? {
            sources.push((path, Class::Positive));
        }
    } else {
        let labels_path = labels_file.ok_or_else(|| {
            CliError::data(format!(
                "{} has no yes/ and no/ directories; pass --labels <file>",
                dir.display()
            ))
        })?;
        let labels = read_labels_file(labels_path)?;
        for path in sorted_image_files(dir)? {
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            match labels.get(name) {
                Some(&class) => sources.push((path.clone(), class)),
                None => {
                    eprintln!("warning: no label for {name}, skipping");
                }
            }
        }
    }

    let mut items = Vec::new();
    let mut skipped = 0;
    for (path, class) in sources {
        match load_gray(&path) {
            Ok(raw) => items.push((path, normalize_geometry(&raw, target), class)),
            Err(e) => {
                skipped += 1;
                eprintln!("warning: {e}");
            }
        }
    }
    if skipped > 0 {
        eprintln!("warning: skipped {skipped} unreadable file(s)");
    }
    if items.is_empty() {
        return Err(CliError::data(format!("no usable images under {}", dir.display())));
    }
    Ok(Ingested { items, skipped })
}

/// Collect loose images (no labels) for segment/features/predict commands.
pub fn collect_inputs(path: &Path) -> Result<Vec<PathBuf>, CliError> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    if path.is_dir() {
        let mut files = sorted_image_files(path)?;
        // class-directory layouts work here too
        for sub in ["yes", "no"] {
            let nested = path.join(sub);
            if nested.is_dir() {
                files.extend(sorted_image_files(&nested)?);
            }
        }
        if files.is_empty() {
            return Err(CliError::data(format!("no images under {}", path.display())));
        }
        return Ok(files);
    }
    Err(CliError::data(format!("{} does not exist", path.display())))
}
