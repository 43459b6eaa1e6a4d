use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::dataset::{has_image_extension, Dataset};
use super::report::{Entry, QualityReport};
use crate::colorspace::{cie_y_gray, ntsc_gray, srgb_to_lab};
use crate::decolor::{best_index, DecolorConfig, PreparedImage};
use crate::error::{Error, Result};
use crate::image::{GrayImage, RgbImage};
use crate::metric::c2g_ssim_many;

/// A decolorization method taking part in an evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum MethodId {
    Ntsc,
    CieY,
    /// SVD method with a fixed weight; `None` uses the config's `fixed_c`.
    SvdFixed {
        c: Option<f64>,
    },
    SvdAdaptive,
    /// Precomputed gray images named `<image_id>.<ext>` in `dir`.
    External {
        label: String,
        dir: PathBuf,
    },
}

impl MethodId {
    pub fn name(&self) -> String {
        match self {
            MethodId::Ntsc => "ntsc".into(),
            MethodId::CieY => "cie-y".into(),
            MethodId::SvdFixed { c: None } => "svd-fixed".into(),
            MethodId::SvdFixed { c: Some(c) } => format!("svd-fixed:{c}"),
            MethodId::SvdAdaptive => "svd-adaptive".into(),
            MethodId::External { label, .. } => format!("external:{label}"),
        }
    }

    /// Parses a built-in method: `ntsc`, `cie-y`, `svd-fixed[:<c>]`,
    /// `svd-adaptive`.
    pub fn parse_builtin(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "ntsc" => Ok(MethodId::Ntsc),
            "cie-y" => Ok(MethodId::CieY),
            "svd-fixed" => Ok(MethodId::SvdFixed { c: None }),
            "svd-adaptive" => Ok(MethodId::SvdAdaptive),
            other => match other.strip_prefix("svd-fixed:") {
                Some(c) => {
                    let c: f64 = c.parse().map_err(|_| {
                        Error::InvalidConfig(format!("bad weight in method {other:?}"))
                    })?;
                    if !(c > 0.0 && c.is_finite()) {
                        return Err(Error::InvalidConfig(format!(
                            "weight must be positive in method {other:?}"
                        )));
                    }
                    Ok(MethodId::SvdFixed { c: Some(c) })
                }
                None => Err(Error::InvalidConfig(format!("unknown method {other:?}"))),
            },
        }
    }

    fn uses_svd(&self) -> bool {
        matches!(self, MethodId::SvdFixed { .. } | MethodId::SvdAdaptive)
    }

    /// Directory-safe version of the name.
    fn dir_name(&self) -> String {
        self.name().replace([':', '/', '\\'], "_")
    }
}

fn find_external(dir: &Path, id: &str) -> Option<PathBuf> {
    let mut candidates: Vec<PathBuf> = fs::read_dir(dir)
        .ok()?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| has_image_extension(p) && p.file_stem().and_then(|s| s.to_str()) == Some(id))
        .collect();
    candidates.sort();
    candidates.into_iter().next()
}

struct ImageOutcome {
    entries: Vec<Entry>,
    warnings: Vec<String>,
}

/// How a method's entry is produced from the shared scoring batch.
enum Plan {
    /// Index of the candidate in the batch.
    Single(usize),
    /// First index of the sweep candidates.
    Sweep(usize),
    Skip,
}

fn evaluate_image(
    id: &str,
    img: &RgbImage,
    methods: &[MethodId],
    cfg: &DecolorConfig,
    outputs: Option<&Path>,
) -> Result<ImageOutcome> {
    let prepared = if methods.iter().any(MethodId::uses_svd) {
        Some(PreparedImage::new(img, &cfg.rank_policy)?)
    } else {
        None
    };
    let mut warnings = Vec::new();
    let mut batch: Vec<GrayImage> = Vec::new();
    // The sweep goes first so a fixed weight on the grid can reuse its candidate.
    let sweep = match (&prepared, methods.contains(&MethodId::SvdAdaptive)) {
        (Some(p), true) => {
            batch.extend(p.sweep_candidates(cfg));
            Some(0)
        }
        _ => None,
    };
    let mut plans = Vec::with_capacity(methods.len());
    for method in methods {
        let name = method.name();
        let plan = match method {
            MethodId::Ntsc => {
                batch.push(ntsc_gray(img).quantized_8bit());
                Plan::Single(batch.len() - 1)
            }
            MethodId::CieY => {
                batch.push(cie_y_gray(img).quantized_8bit());
                Plan::Single(batch.len() - 1)
            }
            MethodId::SvdFixed { c } => {
                let c = c.unwrap_or(cfg.fixed_c);
                match (sweep, cfg.c_grid.iter().position(|&g| g == c)) {
                    (Some(start), Some(i)) => Plan::Single(start + i),
                    _ => {
                        let prepared = prepared.as_ref().expect("prepared for svd methods");
                        batch.push(prepared.gray(c)?.quantized_8bit());
                        Plan::Single(batch.len() - 1)
                    }
                }
            }
            MethodId::SvdAdaptive => Plan::Sweep(sweep.expect("sweep built for svd-adaptive")),
            MethodId::External { dir, .. } => match load_external(id, img, dir) {
                Ok(gray) => {
                    batch.push(gray);
                    Plan::Single(batch.len() - 1)
                }
                Err(msg) => {
                    warnings.push(format!("{name}: {msg}"));
                    Plan::Skip
                }
            },
        };
        plans.push(plan);
    }

    let scores = {
        let refs: Vec<&GrayImage> = batch.iter().collect();
        match &prepared {
            Some(p) => c2g_ssim_many(p.lab(), &refs, &cfg.metric)?,
            None => c2g_ssim_many(&srgb_to_lab(img), &refs, &cfg.metric)?,
        }
    };

    let mut entries = Vec::with_capacity(methods.len());
    for (method, plan) in methods.iter().zip(plans) {
        let (gray, score, chosen_c) = match plan {
            Plan::Skip => continue,
            Plan::Single(i) => (&batch[i], scores[i], None),
            Plan::Sweep(start) => {
                let n = cfg.c_grid.len();
                let k = best_index(&scores[start..start + n]);
                (&batch[start + k], scores[start + k], Some(cfg.c_grid[k]))
            }
        };
        if let (Some(root), false) = (outputs, matches!(method, MethodId::External { .. })) {
            let dir = root.join(method.dir_name());
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            gray.save_png(&dir.join(format!("{id}.png")))?;
        }
        entries.push(Entry {
            image_id: id.to_owned(),
            method: method.name(),
            score,
            chosen_c,
        });
    }
    Ok(ImageOutcome { entries, warnings })
}

fn load_external(id: &str, img: &RgbImage, dir: &Path) -> std::result::Result<GrayImage, String> {
    let path = find_external(dir, id)
        .ok_or_else(|| format!("no gray image for {id:?} in {}", dir.display()))?;
    let gray = GrayImage::open(&path).map_err(|e| e.to_string())?;
    if gray.dimensions() != img.dimensions() {
        return Err(format!(
            "{} is {:?}, expected {:?}",
            path.display(),
            gray.dimensions(),
            img.dimensions()
        ));
    }
    Ok(gray)
}

/// Scores every method on every image of `dataset`.
///
/// Images run in parallel on the current rayon pool; entries come back
/// ordered by image id, then method name. Gray outputs of the built-in
/// methods are written to `outputs/<method>/<image_id>.png` when given.
pub fn evaluate(
    dataset: &Dataset,
    methods: &[MethodId],
    cfg: &DecolorConfig,
    outputs: Option<&Path>,
) -> Result<QualityReport> {
    if methods.is_empty() {
        return Err(Error::InvalidConfig("no methods to evaluate".into()));
    }
    let mut seen = HashSet::new();
    for m in methods {
        if !seen.insert(m.name()) {
            return Err(Error::InvalidConfig(format!(
                "method {} listed twice",
                m.name()
            )));
        }
    }
    let cfg = DecolorConfig {
        quantize_8bit: true,
        ..cfg.clone()
    };
    cfg.validate()?;

    let outcomes = dataset
        .images
        .par_iter()
        .map(|(id, img)| evaluate_image(id, img, methods, &cfg, outputs))
        .collect::<Result<Vec<_>>>()?;

    let mut entries = Vec::new();
    let mut warnings = dataset.warnings.clone();
    for outcome in outcomes {
        entries.extend(outcome.entries);
        warnings.extend(outcome.warnings);
    }
    entries.sort_by(|a, b| (&a.image_id, &a.method).cmp(&(&b.image_id, &b.method)));
    Ok(QualityReport {
        dataset: dataset.name.clone(),
        metric_config: cfg.metric,
        entries,
        warnings,
    })
}
