//! C2G-SSIM: full-reference quality of a grayscale rendition against its
//! color original.
//!
//! Every pixel gets a Gaussian-weighted window. Inside it the color side
//! measures each neighbor's CIE76 distance from the window's weighted mean
//! Lab color; the gray side measures each neighbor's absolute distance from
//! the weighted mean gray tone. The window means of lightness, the mean
//! distances and their spreads feed the luminance, contrast and structure
//! terms, which are multiplied and averaged over the image.
//!
//! Gray values in `[0, 1]` are scaled to `[0, 100]` so they share units with
//! L*. Borders use symmetric reflection (`..., 1, 0 | 0, 1, ...`).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colorspace::srgb_to_lab;
use crate::error::{Error, Result};
use crate::image::{GrayImage, LabImage, RgbImage};

/// Whether an image is a photograph or synthetic artwork. Selects the
/// exponent on the luminance term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageKind {
    #[default]
    Photographic,
    Synthetic,
}

impl ImageKind {
    pub fn luminance_exponent(self) -> f64 {
        match self {
            ImageKind::Photographic => 1.0,
            ImageKind::Synthetic => 0.0,
        }
    }
}

impl std::str::FromStr for ImageKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "photographic" => Ok(ImageKind::Photographic),
            "synthetic" => Ok(ImageKind::Synthetic),
            other => Err(Error::InvalidConfig(format!(
                "unknown image kind {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    pub window_size: usize,
    pub window_sigma: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub kind: ImageKind,
}

impl Default for MetricConfig {
    /// 11x11 window, sigma 1.5, SSIM constants scaled to an L* range of 100.
    fn default() -> Self {
        let c2 = (0.03f64 * 100.0).powi(2);
        Self {
            window_size: 11,
            window_sigma: 1.5,
            c1: (0.01f64 * 100.0).powi(2),
            c2,
            c3: c2 / 2.0,
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            kind: ImageKind::Photographic,
        }
    }
}

impl MetricConfig {
    /// Sets the image kind together with its luminance exponent.
    pub fn with_kind(mut self, kind: ImageKind) -> Self {
        self.kind = kind;
        self.alpha = kind.luminance_exponent();
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.window_size < 3 || self.window_size % 2 == 0 {
            return bad(format!(
                "window size must be odd and at least 3, got {}",
                self.window_size
            ));
        }
        if !(self.window_sigma > 0.0 && self.window_sigma.is_finite()) {
            return bad(format!(
                "window sigma must be positive, got {}",
                self.window_sigma
            ));
        }
        for (name, c) in [("c1", self.c1), ("c2", self.c2), ("c3", self.c3)] {
            if !(c > 0.0 && c.is_finite()) {
                return bad(format!("{name} must be positive, got {c}"));
            }
        }
        for (name, e) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ] {
            if !(e >= 0.0 && e.is_finite()) {
                return bad(format!("{name} must be non-negative, got {e}"));
            }
        }
        if self.alpha != self.kind.luminance_exponent() {
            return bad(format!(
                "alpha = {} does not match image kind {:?}",
                self.alpha, self.kind
            ));
        }
        Ok(())
    }
}

/// Normalized square Gaussian window, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianWindow {
    size: usize,
    weights: Vec<f64>,
}

impl GaussianWindow {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        self.size / 2
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, dx: usize, dy: usize) -> f64 {
        self.weights[dy * self.size + dx]
    }
}

/// Normalized 1-D Gaussian taps; the square window is their outer product.
fn gaussian_taps(size: usize, sigma: f64) -> Vec<f64> {
    let r = (size / 2) as f64;
    let taps: Vec<f64> = (0..size)
        .map(|i| (-(i as f64 - r).powi(2) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / total).collect()
}

pub fn gaussian_window(size: usize, sigma: f64) -> Result<GaussianWindow> {
    if size < 3 || size % 2 == 0 {
        return Err(Error::InvalidConfig(format!(
            "window size must be odd and at least 3, got {size}"
        )));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "window sigma must be positive, got {sigma}"
        )));
    }
    let taps = gaussian_taps(size, sigma);
    let weights = taps
        .iter()
        .flat_map(|ty| taps.iter().map(move |tx| ty * tx))
        .collect();
    Ok(GaussianWindow { size, weights })
}

/// Per-pixel window statistics, each plane row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalStats {
    pub width: usize,
    pub height: usize,
    /// Weighted mean L* of the reference.
    pub u_f: Vec<f64>,
    /// Weighted mean gray tone (0..100 scale).
    pub u_g: Vec<f64>,
    /// Weighted mean color distance from the window mean color.
    pub d_f: Vec<f64>,
    /// Weighted mean gray distance from the window mean gray.
    pub d_g: Vec<f64>,
    pub sigma_f: Vec<f64>,
    pub sigma_g: Vec<f64>,
    pub sigma_fg: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMaps {
    pub width: usize,
    pub height: usize,
    pub luminance: Vec<f64>,
    pub contrast: Vec<f64>,
    pub structure: Vec<f64>,
    pub quality: Vec<f64>,
}

impl SimilarityMaps {
    /// Unweighted mean of the quality map. Each row is summed left to right,
    /// then the row sums top to bottom.
    pub fn mean_quality(&self) -> f64 {
        let total: f64 = self
            .quality
            .chunks(self.width)
            .map(|row| row.iter().sum::<f64>())
            .sum();
        total / self.quality.len() as f64
    }
}

/// Maps a possibly out-of-range index onto `0..n` by symmetric reflection.
pub(crate) fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let period = 2 * n;
    let m = i.rem_euclid(period);
    (if m >= n { period - 1 - m } else { m }) as usize
}

/// A plane padded on every side with reflected samples, plus its window
/// means.
struct Padded {
    stride: usize,
    data: Vec<f64>,
    /// Row-major `h x w` Gaussian-weighted window means.
    mean: Vec<f64>,
}

impl Padded {
    fn new(plane: &[f64], w: usize, h: usize, taps: &[f64], scale: f64) -> Self {
        let r = taps.len() / 2;
        let stride = w + 2 * r;
        let cols: Vec<usize> = (0..stride)
            .map(|x| reflect(x as isize - r as isize, w))
            .collect();
        let mut data = Vec::with_capacity(stride * (h + 2 * r));
        for y in 0..h + 2 * r {
            let row = reflect(y as isize - r as isize, h) * w;
            data.extend(cols.iter().map(|&x| scale * plane[row + x]));
        }
        // Separable blur: rows first, then columns.
        let mut horiz = vec![0.0; w * (h + 2 * r)];
        for (src, dst) in data.chunks(stride).zip(horiz.chunks_mut(w)) {
            for (dx, t) in taps.iter().enumerate() {
                for (o, v) in dst.iter_mut().zip(&src[dx..dx + w]) {
                    *o += t * v;
                }
            }
        }
        let mut mean = vec![0.0; w * h];
        for (y, dst) in mean.chunks_mut(w).enumerate() {
            for (dy, t) in taps.iter().enumerate() {
                let src = &horiz[(y + dy) * w..(y + dy + 1) * w];
                for (o, v) in dst.iter_mut().zip(src) {
                    *o += t * v;
                }
            }
        }
        Self { stride, data, mean }
    }

    fn mean_row(&self, y: usize, w: usize) -> &[f64] {
        &self.mean[y * w..(y + 1) * w]
    }
}

/// Reference-side statistics for one image row.
#[derive(Debug, Clone, Default)]
struct ColorRow {
    u_f: Vec<f64>,
    d_f: Vec<f64>,
    sigma_f: Vec<f64>,
}

/// Gray-side statistics for one image row.
#[derive(Debug, Clone, Default)]
struct GrayRow {
    u_g: Vec<f64>,
    d_g: Vec<f64>,
    sigma_g: Vec<f64>,
    sigma_fg: Vec<f64>,
}

struct GraySums<'a> {
    mu: &'a [f64],
    s_a: &'a mut [f64],
    s_aa: &'a mut [f64],
    s_fa: &'a mut [f64],
}

/// Per-thread buffers: `dist[k * w + x]` holds `w_k * dist_k` for pixel `x`
/// of the current row.
struct Scratch {
    dist: Vec<f64>,
    acc: Vec<f64>,
}

/// Window machinery for one reference. Rows are processed independently;
/// within a row the loops run across pixels, and each pixel accumulates its
/// window offsets in raster order.
struct WindowEngine {
    width: usize,
    height: usize,
    size: usize,
    weights: Vec<f64>,
    taps: Vec<f64>,
    lab: [Padded; 3],
}

impl WindowEngine {
    fn new(reference: &LabImage, cfg: &MetricConfig) -> Result<Self> {
        cfg.validate()?;
        let window = gaussian_window(cfg.window_size, cfg.window_sigma)?;
        let taps = gaussian_taps(cfg.window_size, cfg.window_sigma);
        let (w, h) = reference.dimensions();
        Ok(Self {
            width: w,
            height: h,
            size: window.size(),
            weights: window.weights,
            lab: [
                Padded::new(&reference.l, w, h, &taps, 1.0),
                Padded::new(&reference.a, w, h, &taps, 1.0),
                Padded::new(&reference.b, w, h, &taps, 1.0),
            ],
            taps,
        })
    }

    fn check(&self, gray: &GrayImage) -> Result<()> {
        if (self.width, self.height) != gray.dimensions() {
            return Err(Error::DimensionMismatch {
                expected: (self.width, self.height),
                found: gray.dimensions(),
            });
        }
        Ok(())
    }

    fn scratch(&self) -> Scratch {
        Scratch {
            dist: vec![0.0; self.size * self.size * self.width],
            acc: vec![0.0; self.width],
        }
    }

    fn color_row(&self, y: usize, scratch: &mut Scratch) -> ColorRow {
        let (w, size) = (self.width, self.size);
        let means = self.lab.each_ref().map(|p| p.mean_row(y, w));
        let mut d_f = vec![0.0; w];
        for dy in 0..size {
            let rows = self.lab.each_ref().map(|p| &p.data[(y + dy) * p.stride..]);
            for dx in 0..size {
                let k = dy * size + dx;
                let wt = self.weights[k];
                let dist = &mut scratch.dist[k * w..(k + 1) * w];
                for x in 0..w {
                    let el = rows[0][dx + x] - means[0][x];
                    let ea = rows[1][dx + x] - means[1][x];
                    let eb = rows[2][dx + x] - means[2][x];
                    let d = (el * el + ea * ea + eb * eb).sqrt();
                    dist[x] = d;
                    d_f[x] += wt * d;
                }
            }
        }
        let var = &mut scratch.acc;
        var.fill(0.0);
        for (k, wt) in self.weights.iter().enumerate() {
            let dist = &mut scratch.dist[k * w..(k + 1) * w];
            for x in 0..w {
                let e = dist[x] - d_f[x];
                var[x] += wt * e * e;
                dist[x] *= wt;
            }
        }
        ColorRow {
            u_f: means[0].to_vec(),
            d_f,
            sigma_f: var.iter().map(|v| v.sqrt()).collect(),
        }
    }

    fn gray_row(&self, gray: &Padded, y: usize, color: &ColorRow, scratch: &Scratch) -> GrayRow {
        let w = self.width;
        let mu = gray.mean_row(y, w);
        let mut s_a = vec![0.0; w];
        let mut s_aa = vec![0.0; w];
        let mut s_fa = vec![0.0; w];
        let sums = GraySums {
            mu,
            s_a: &mut s_a,
            s_aa: &mut s_aa,
            s_fa: &mut s_fa,
        };
        self.dispatch(|| self.gray_sums(gray, y, &scratch.dist, sums));
        let sigma_g = s_a
            .iter()
            .zip(&s_aa)
            .map(|(d, sq)| (sq - d * d).max(0.0).sqrt())
            .collect();
        let sigma_fg = s_fa
            .iter()
            .zip(s_a.iter().zip(&color.d_f))
            .map(|(fa, (d_g, d_f))| fa - d_f * d_g)
            .collect();
        GrayRow {
            u_g: mu.to_vec(),
            d_g: s_a,
            sigma_g,
            sigma_fg,
        }
    }

    #[inline(always)]
    fn gray_sums(&self, gray: &Padded, y: usize, wdist: &[f64], sums: GraySums<'_>) {
        let (w, size) = (self.width, self.size);
        let GraySums {
            mu,
            s_a,
            s_aa,
            s_fa,
        } = sums;
        for dy in 0..size {
            let row = &gray.data[(y + dy) * gray.stride..];
            for dx in 0..size {
                let k = dy * size + dx;
                let wt = self.weights[k];
                let wd = &wdist[k * w..(k + 1) * w];
                let vals = &row[dx..dx + w];
                for x in 0..w {
                    let a = (vals[x] - mu[x]).abs();
                    let wa = wt * a;
                    s_a[x] += wa;
                    s_aa[x] += wa * a;
                    s_fa[x] += wd[x] * a;
                }
            }
        }
    }

    /// Runs `f` compiled for the widest vector unit available. Every variant
    /// performs the same operations in the same order.
    #[inline(always)]
    fn dispatch(&self, f: impl FnOnce()) {
        #[cfg(target_arch = "x86_64")]
        {
            #[target_feature(enable = "avx2")]
            unsafe fn wide(f: impl FnOnce()) {
                f()
            }
            if std::arch::is_x86_feature_detected!("avx2") {
                // SAFETY: the CPU supports AVX2, checked just above.
                unsafe { wide(f) };
                return;
            }
        }
        f()
    }

    /// Maps every image row through `per_row`, which sees the row's color
    /// statistics and one gray row per candidate. Results come back in row
    /// order.
    fn run<R: Send>(
        &self,
        grays: &[&GrayImage],
        per_row: impl Fn(&ColorRow, &[GrayRow]) -> R + Sync,
    ) -> Result<Vec<R>> {
        for g in grays {
            self.check(g)?;
        }
        let (w, h) = (self.width, self.height);
        let padded: Vec<Padded> = grays
            .par_iter()
            .map(|g| Padded::new(g.data(), w, h, &self.taps, 100.0))
            .collect();
        Ok((0..h)
            .into_par_iter()
            .map_init(
                || self.scratch(),
                |scratch, y| {
                    let color = self.color_row(y, scratch);
                    let gray: Vec<GrayRow> = padded
                        .iter()
                        .map(|pg| self.gray_row(pg, y, &color, scratch))
                        .collect();
                    per_row(&color, &gray)
                },
            )
            .collect())
    }
}

pub fn local_stats(
    reference: &LabImage,
    gray: &GrayImage,
    cfg: &MetricConfig,
) -> Result<LocalStats> {
    let engine = WindowEngine::new(reference, cfg)?;
    let rows = engine.run(&[gray], |c, g| (c.clone(), g[0].clone()))?;
    let (w, h) = reference.dimensions();
    let mut stats = LocalStats {
        width: w,
        height: h,
        u_f: Vec::with_capacity(w * h),
        u_g: Vec::with_capacity(w * h),
        d_f: Vec::with_capacity(w * h),
        d_g: Vec::with_capacity(w * h),
        sigma_f: Vec::with_capacity(w * h),
        sigma_g: Vec::with_capacity(w * h),
        sigma_fg: Vec::with_capacity(w * h),
    };
    for (c, g) in rows {
        stats.u_f.extend(c.u_f);
        stats.d_f.extend(c.d_f);
        stats.sigma_f.extend(c.sigma_f);
        stats.u_g.extend(g.u_g);
        stats.d_g.extend(g.d_g);
        stats.sigma_g.extend(g.sigma_g);
        stats.sigma_fg.extend(g.sigma_fg);
    }
    Ok(stats)
}

#[inline]
fn pow_term(v: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        1.0
    } else if exponent == 1.0 {
        v
    } else {
        v.powf(exponent)
    }
}

/// `(luminance, contrast, structure, quality)` at one pixel; `p` holds
/// `u_f, u_g, d_f, d_g, sigma_f, sigma_g, sigma_fg`.
#[inline]
fn pixel_similarity(p: [f64; 7], cfg: &MetricConfig) -> [f64; 4] {
    let [uf, ug, df, dg, sf, sg, sfg] = p;
    let lum = (2.0 * uf * ug + cfg.c1) / (uf * uf + ug * ug + cfg.c1);
    let con = (2.0 * df * dg + cfg.c2) / (df * df + dg * dg + cfg.c2);
    let st = (sfg + cfg.c3) / (sf * sg + cfg.c3);
    let q = pow_term(lum, cfg.alpha) * pow_term(con, cfg.beta) * pow_term(st, cfg.gamma);
    [lum, con, st, q]
}

pub fn similarity_maps(stats: &LocalStats, cfg: &MetricConfig) -> SimilarityMaps {
    let n = stats.u_f.len();
    let mut maps = SimilarityMaps {
        width: stats.width,
        height: stats.height,
        luminance: Vec::with_capacity(n),
        contrast: Vec::with_capacity(n),
        structure: Vec::with_capacity(n),
        quality: Vec::with_capacity(n),
    };
    for i in 0..n {
        let p = [
            stats.u_f[i],
            stats.u_g[i],
            stats.d_f[i],
            stats.d_g[i],
            stats.sigma_f[i],
            stats.sigma_g[i],
            stats.sigma_fg[i],
        ];
        let [lum, con, st, q] = pixel_similarity(p, cfg);
        maps.luminance.push(lum);
        maps.contrast.push(con);
        maps.structure.push(st);
        maps.quality.push(q);
    }
    maps
}

/// Scores several candidates against one reference, sharing the color-side
/// window work. Each score equals [`c2g_ssim_lab`] on that candidate.
pub fn c2g_ssim_many(
    reference: &LabImage,
    grays: &[&GrayImage],
    cfg: &MetricConfig,
) -> Result<Vec<f64>> {
    let engine = WindowEngine::new(reference, cfg)?;
    let row_sums = engine.run(grays, |c, rows| {
        rows.iter()
            .map(|g| {
                (0..c.u_f.len())
                    .map(|x| {
                        let p = [
                            c.u_f[x],
                            g.u_g[x],
                            c.d_f[x],
                            g.d_g[x],
                            c.sigma_f[x],
                            g.sigma_g[x],
                            g.sigma_fg[x],
                        ];
                        pixel_similarity(p, cfg)[3]
                    })
                    .sum::<f64>()
            })
            .collect::<Vec<f64>>()
    })?;
    let n = reference.l.len() as f64;
    Ok((0..grays.len())
        .map(|ci| row_sums.iter().map(|r| r[ci]).sum::<f64>() / n)
        .collect())
}

/// Quality maps of `gray` against an already converted reference.
pub fn c2g_ssim_maps_lab(
    reference: &LabImage,
    gray: &GrayImage,
    cfg: &MetricConfig,
) -> Result<SimilarityMaps> {
    let stats = local_stats(reference, gray, cfg)?;
    Ok(similarity_maps(&stats, cfg))
}

/// Score of `gray` against an already converted reference.
pub fn c2g_ssim_lab(reference: &LabImage, gray: &GrayImage, cfg: &MetricConfig) -> Result<f64> {
    Ok(c2g_ssim_many(reference, &[gray], cfg)?[0])
}

pub fn c2g_ssim_maps(
    reference: &RgbImage,
    gray: &GrayImage,
    cfg: &MetricConfig,
) -> Result<SimilarityMaps> {
    check_same_dims(reference, gray)?;
    c2g_ssim_maps_lab(&srgb_to_lab(reference), gray, cfg)
}

/// C2G-SSIM of `gray` against the color `reference`; higher is better.
pub fn c2g_ssim(reference: &RgbImage, gray: &GrayImage, cfg: &MetricConfig) -> Result<f64> {
    check_same_dims(reference, gray)?;
    c2g_ssim_lab(&srgb_to_lab(reference), gray, cfg)
}

fn check_same_dims(reference: &RgbImage, gray: &GrayImage) -> Result<()> {
    if reference.dimensions() != gray.dimensions() {
        return Err(Error::DimensionMismatch {
            expected: reference.dimensions(),
            found: gray.dimensions(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorspace::rgb_to_lab;

    #[test]
    fn flat_window_limit() {
        let win = gaussian_window(3, 1e6).unwrap();
        assert!(win.weights().iter().all(|w| (w - 1.0 / 9.0).abs() < 1e-3));
    }

    #[test]
    fn window_sums_to_one_and_is_symmetric() {
        for (size, sigma) in [(3, 0.5), (5, 1.0), (11, 1.5), (21, 7.0)] {
            let win = gaussian_window(size, sigma).unwrap();
            let sum: f64 = win.weights().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            for dy in 0..size {
                for dx in 0..size {
                    let w = win.weight(dx, dy);
                    assert!(w >= 0.0);
                    assert_eq!(w, win.weight(size - 1 - dx, dy));
                    assert_eq!(w, win.weight(dy, dx));
                }
            }
        }
    }

    #[test]
    fn window_center_weight() {
        // Direct evaluation: 1 / sum_{i,j=-5..5} exp(-(i^2+j^2) / 4.5).
        let win = gaussian_window(11, 1.5).unwrap();
        assert!((win.weight(5, 5) - 0.07076223776394697).abs() < 1e-14);
    }

    #[test]
    fn invalid_window() {
        assert!(gaussian_window(4, 1.0).is_err());
        assert!(gaussian_window(1, 1.0).is_err());
        assert!(gaussian_window(3, 0.0).is_err());
        assert!(gaussian_window(3, f64::NAN).is_err());
    }

    #[test]
    fn reflection_indices() {
        let got: Vec<usize> = (-4..8).map(|i| reflect(i, 3)).collect();
        assert_eq!(got, vec![2, 2, 1, 0, 0, 1, 2, 2, 1, 0, 0, 1]);
        assert_eq!(reflect(-7, 1), 0);
    }

    #[test]
    fn config_validation() {
        assert!(MetricConfig::default().validate().is_ok());
        let syn = MetricConfig::default().with_kind(ImageKind::Synthetic);
        assert_eq!(syn.alpha, 0.0);
        assert!(syn.validate().is_ok());
        let mismatched = MetricConfig { alpha: 1.0, ..syn };
        assert!(mismatched.validate().is_err());
        let even = MetricConfig {
            window_size: 10,
            ..Default::default()
        };
        assert!(even.validate().is_err());
        let zero_c = MetricConfig {
            c2: 0.0,
            ..Default::default()
        };
        assert!(zero_c.validate().is_err());
    }

    #[test]
    fn default_constants() {
        let cfg = MetricConfig::default();
        assert!((cfg.c1 - 1.0).abs() < 1e-12);
        assert!((cfg.c2 - 9.0).abs() < 1e-12);
        assert!((cfg.c3 - 4.5).abs() < 1e-12);
    }

    #[test]
    fn constant_images_have_no_variation() {
        let lab = LabImage::new(6, 5, vec![40.0; 30], vec![12.0; 30], vec![-3.0; 30]).unwrap();
        let gray = GrayImage::new(6, 5, vec![0.7; 30]).unwrap();
        let cfg = MetricConfig::default();
        let stats = local_stats(&lab, &gray, &cfg).unwrap();
        for plane in [
            &stats.d_f,
            &stats.d_g,
            &stats.sigma_f,
            &stats.sigma_g,
            &stats.sigma_fg,
        ] {
            assert!(plane.iter().all(|v| v.abs() < 1e-12));
        }
        let maps = similarity_maps(&stats, &cfg);
        assert!(maps.contrast.iter().all(|v| (v - 1.0).abs() < 1e-9));
        assert!(maps.structure.iter().all(|v| (v - 1.0).abs() < 1e-9));
        // Closed form of the luminance term with u_f = 40, u_g = 70, C1 = 1.
        let expected = (2.0 * 40.0 * 70.0 + 1.0) / (40.0f64.powi(2) + 70.0f64.powi(2) + 1.0);
        for v in &maps.luminance {
            assert!((v - expected).abs() < 1e-9);
        }
        assert!((maps.mean_quality() - expected).abs() < 1e-9);
    }

    #[test]
    fn achromatic_reference_matches_its_lightness() {
        let (w, h) = (9, 7);
        let l: Vec<f64> = (0..w * h).map(|i| ((i * 37) % 101) as f64).collect();
        let lab = LabImage::new(w, h, l.clone(), vec![0.0; w * h], vec![0.0; w * h]).unwrap();
        let gray = GrayImage::new(w, h, l.iter().map(|v| v / 100.0).collect()).unwrap();
        let cfg = MetricConfig::default();
        let stats = local_stats(&lab, &gray, &cfg).unwrap();
        for i in 0..w * h {
            assert!((stats.d_f[i] - stats.d_g[i]).abs() < 1e-9);
            assert!((stats.sigma_f[i] - stats.sigma_g[i]).abs() < 1e-9);
            assert!((stats.sigma_fg[i] - stats.sigma_f[i].powi(2)).abs() < 1e-9);
        }
        let score = c2g_ssim_lab(&lab, &gray, &cfg).unwrap();
        assert!((score - 1.0).abs() < 1e-6);
    }

    #[test]
    fn similarity_limits() {
        let cfg = MetricConfig::default();
        let n = 4;
        let stats = LocalStats {
            width: 2,
            height: 2,
            u_f: vec![30.0, 50.0, 0.0, 100.0],
            u_g: vec![30.0, 50.0, 0.0, 100.0],
            d_f: vec![0.0; n],
            d_g: vec![0.0; n],
            sigma_f: vec![0.0; n],
            sigma_g: vec![0.0; n],
            sigma_fg: vec![0.0; n],
        };
        let maps = similarity_maps(&stats, &cfg);
        assert!(maps.luminance.iter().all(|&v| v == 1.0));
        assert!(maps.contrast.iter().all(|&v| v == 1.0));
        assert!(maps.structure.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn synthetic_kind_ignores_luminance() {
        let cfg = MetricConfig::default().with_kind(ImageKind::Synthetic);
        let stats = LocalStats {
            width: 2,
            height: 1,
            u_f: vec![10.0, 80.0],
            u_g: vec![90.0, 5.0],
            d_f: vec![3.0, 4.0],
            d_g: vec![1.0, 6.0],
            sigma_f: vec![2.0, 1.0],
            sigma_g: vec![1.0, 2.0],
            sigma_fg: vec![1.5, -1.0],
        };
        let maps = similarity_maps(&stats, &cfg);
        for i in 0..2 {
            assert!(maps.luminance[i] < 1.0);
            assert_eq!(maps.quality[i], maps.contrast[i] * maps.structure[i]);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let rgb = RgbImage::new(2, 2, vec![[0.5; 3]; 4]).unwrap();
        let gray = GrayImage::new(2, 1, vec![0.5; 2]).unwrap();
        assert!(matches!(
            c2g_ssim(&rgb, &gray, &MetricConfig::default()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tiny_images_are_scored() {
        let rgb = RgbImage::new(1, 1, vec![[0.2, 0.4, 0.6]]).unwrap();
        let l = rgb_to_lab([0.2, 0.4, 0.6])[0];
        let gray = GrayImage::new(1, 1, vec![l / 100.0]).unwrap();
        let s = c2g_ssim(&rgb, &gray, &MetricConfig::default()).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
    }
}
