use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::RgbImage;

const EXTENSIONS: [&str; 4] = ["png", "jpg", "jpeg", "bmp"];

/// Decoded color images, ordered by file name.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub images: Vec<(String, RgbImage)>,
    /// Files that looked like images but could not be used.
    pub warnings: Vec<String>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

pub(crate) fn has_image_extension(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
}

/// Loads every PNG, JPEG and BMP file in `dir` (not recursive).
///
/// The image id is the file stem. Undecodable files and repeated stems are
/// skipped with a warning; a directory with nothing usable is an error.
pub fn load_dataset(dir: &Path) -> Result<Dataset> {
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && has_image_extension(&path) {
            paths.push(path);
        }
    }
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));

    let mut images: Vec<(String, RgbImage)> = Vec::with_capacity(paths.len());
    let mut warnings = Vec::new();
    for path in paths {
        let Some(id) = path.file_stem().and_then(|s| s.to_str()).map(str::to_owned) else {
            warnings.push(format!("{}: file name is not valid UTF-8", path.display()));
            continue;
        };
        if images.iter().any(|(existing, _)| *existing == id) {
            warnings.push(format!(
                "{}: duplicate image id {id:?}, skipped",
                path.display()
            ));
            continue;
        }
        match RgbImage::open(&path) {
            Ok(img) => images.push((id, img)),
            Err(e) => warnings.push(format!("{e}, skipped")),
        }
    }
    if images.is_empty() {
        return Err(Error::EmptyDataset(dir.to_path_buf()));
    }
    let name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string());
    Ok(Dataset {
        name,
        images,
        warnings,
    })
}
