//! SVD chrominance incorporation and the metric-driven choice of its weight.
//!
//! For a weight `c` the gray rendition is built as follows: convert to Lab,
//! rebuild both chroma planes from their singular triplets, add `c` times
//! their sum to L* (clamped to `[0, 100]`), map the achromatic Lab result
//! back to sRGB and average the three encoded channels. The adaptive variant
//! sweeps `c` over a grid and keeps the rendition with the best C2G-SSIM.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colorspace::{lab_to_rgb, srgb_to_lab};
use crate::error::{Error, Result};
use crate::image::{GrayImage, LabImage, RgbImage};
use crate::lowrank::{matrix_to_plane, plane_to_matrix, reconstruct, svd_decompose, RankPolicy};
use crate::metric::{c2g_ssim_lab, c2g_ssim_many, MetricConfig};

/// Weight used by the non-adaptive SVD method.
pub const DEFAULT_FIXED_C: f64 = 0.25;

/// `0.05, 0.10, ..., 1.00`.
pub fn default_c_grid() -> Vec<f64> {
    (1..=20).map(|i| f64::from(i) / 20.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecolorConfig {
    pub c_grid: Vec<f64>,
    pub rank_policy: RankPolicy,
    pub metric: MetricConfig,
    pub fixed_c: f64,
    /// Score (and return) candidates snapped to the 8-bit grid, i.e. exactly
    /// what an 8-bit file of the output holds.
    #[serde(default)]
    pub quantize_8bit: bool,
}

impl Default for DecolorConfig {
    fn default() -> Self {
        Self {
            c_grid: default_c_grid(),
            rank_policy: RankPolicy::default(),
            metric: MetricConfig::default(),
            fixed_c: DEFAULT_FIXED_C,
            quantize_8bit: false,
        }
    }
}

impl DecolorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.c_grid.is_empty() {
            return Err(Error::InvalidConfig("c grid is empty".into()));
        }
        if let Some(c) = self.c_grid.iter().find(|c| !(**c > 0.0 && c.is_finite())) {
            return Err(Error::InvalidConfig(format!(
                "c grid values must be positive, got {c}"
            )));
        }
        if self.c_grid.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidConfig(
                "c grid must be strictly increasing".into(),
            ));
        }
        check_weight(self.fixed_c)?;
        self.rank_policy.validate()?;
        self.metric.validate()
    }

    /// Whether the fixed weight is one of the grid points, which makes the
    /// adaptive score an upper bound of the fixed one.
    pub fn fixed_c_in_grid(&self) -> bool {
        self.c_grid.contains(&self.fixed_c)
    }
}

fn check_weight(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "weight c must be positive, got {c}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecolorResult {
    pub gray: GrayImage,
    pub chosen_c: f64,
    pub score: f64,
    /// `(c, score)` for every grid point, in grid order.
    pub per_c_scores: Vec<(f64, f64)>,
}

/// An image converted to Lab with its chroma planes already rebuilt, so any
/// number of weights can be applied without repeating the SVD.
#[derive(Debug, Clone)]
pub struct PreparedImage {
    lab: LabImage,
    chroma_sum: Vec<f64>,
}

impl PreparedImage {
    pub fn new(img: &RgbImage, policy: &RankPolicy) -> Result<Self> {
        policy.validate()?;
        let lab = srgb_to_lab(img);
        let (w, h) = lab.dimensions();
        let rebuild = |plane: &[f64]| -> Result<Vec<f64>> {
            let f = svd_decompose(&plane_to_matrix(w, h, plane))?;
            Ok(matrix_to_plane(&reconstruct(&f, policy)))
        };
        let (ra, rb) = rayon::join(|| rebuild(lab.a()), || rebuild(lab.b()));
        let (ra, rb) = (ra?, rb?);
        let chroma_sum = ra.iter().zip(&rb).map(|(x, y)| x + y).collect();
        Ok(Self { lab, chroma_sum })
    }

    pub fn lab(&self) -> &LabImage {
        &self.lab
    }

    /// Sum of the two rebuilt chroma planes.
    pub fn chroma_sum(&self) -> &[f64] {
        &self.chroma_sum
    }

    /// Gray rendition for weight `c`.
    pub fn gray(&self, c: f64) -> Result<GrayImage> {
        check_weight(c)?;
        Ok(self.gray_unchecked(c))
    }

    fn gray_unchecked(&self, c: f64) -> GrayImage {
        let data = self
            .lab
            .lightness()
            .iter()
            .zip(&self.chroma_sum)
            .map(|(&l, &chroma)| {
                let g = (l + c * chroma).clamp(0.0, 100.0);
                let [r, gr, b] = lab_to_rgb([g, 0.0, 0.0]);
                (r + gr + b) / 3.0
            })
            .collect();
        let (w, h) = self.lab.dimensions();
        GrayImage::new(w, h, data).expect("dimensions come from a valid image")
    }

    fn candidate(&self, c: f64, quantize: bool) -> GrayImage {
        let gray = self.gray_unchecked(c);
        if quantize {
            gray.quantized_8bit()
        } else {
            gray
        }
    }

    /// Scores a candidate gray image against this reference.
    pub fn score(&self, gray: &GrayImage, metric: &MetricConfig) -> Result<f64> {
        c2g_ssim_lab(&self.lab, gray, metric)
    }

    /// Weight sweep; the first grid point reaching the maximum wins.
    pub fn adaptive(&self, cfg: &DecolorConfig) -> Result<DecolorResult> {
        cfg.validate()?;
        let candidates = self.sweep_candidates(cfg);
        let refs: Vec<&GrayImage> = candidates.iter().collect();
        let scores = c2g_ssim_many(&self.lab, &refs, &cfg.metric)?;
        Ok(select(&cfg.c_grid, candidates, scores))
    }

    pub(crate) fn sweep_candidates(&self, cfg: &DecolorConfig) -> Vec<GrayImage> {
        cfg.c_grid
            .par_iter()
            .map(|&c| self.candidate(c, cfg.quantize_8bit))
            .collect()
    }
}

/// Index of the first maximum.
pub(crate) fn best_index(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

fn select(grid: &[f64], candidates: Vec<GrayImage>, scores: Vec<f64>) -> DecolorResult {
    let best = best_index(&scores);
    DecolorResult {
        gray: candidates.into_iter().nth(best).expect("grid is non-empty"),
        chosen_c: grid[best],
        score: scores[best],
        per_c_scores: grid.iter().copied().zip(scores).collect(),
    }
}

/// SVD decolorization with a fixed chroma weight `c`.
pub fn decolor_fixed(img: &RgbImage, c: f64, policy: &RankPolicy) -> Result<GrayImage> {
    check_weight(c)?;
    PreparedImage::new(img, policy)?.gray(c)
}

/// SVD decolorization with the weight chosen from `cfg.c_grid` by C2G-SSIM.
pub fn decolor_adaptive(img: &RgbImage, cfg: &DecolorConfig) -> Result<DecolorResult> {
    cfg.validate()?;
    PreparedImage::new(img, &cfg.rank_policy)?.adaptive(cfg)
}
