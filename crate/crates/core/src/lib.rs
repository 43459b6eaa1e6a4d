//! Perceptual color-to-grayscale conversion.
//!
//! The building blocks are exposed individually:
//!
//! * [`colorspace`]: sRGB / XYZ / L*a*b* conversions and the NTSC and CIE Y
//!   baselines.
//! * [`lowrank`]: SVD of a plane and rank-truncated reconstruction.
//! * [`metric`]: the C2G-SSIM quality index.
//! * [`decolor`]: SVD chroma incorporation with a fixed or adaptively chosen
//!   weight.
//! * [`harness`]: dataset loading, multi-method evaluation, success-rate and
//!   average statistics, report files.

pub mod colorspace;
pub mod decolor;
pub mod error;
pub mod harness;
pub mod image;
pub mod lowrank;
pub mod metric;

pub use crate::colorspace::{cie_y_gray, lab_to_srgb, ntsc_gray, srgb_to_lab};
pub use crate::decolor::{
    decolor_adaptive, decolor_fixed, DecolorConfig, DecolorResult, PreparedImage,
};
pub use crate::error::{Error, Result};
pub use crate::image::{GrayImage, LabImage, RgbImage};
pub use crate::lowrank::{numerical_rank, reconstruct, svd_decompose, RankPolicy, SvdFactors};
pub use crate::metric::{
    c2g_ssim, gaussian_window, local_stats, similarity_maps, ImageKind, LocalStats, MetricConfig,
    SimilarityMaps,
};
