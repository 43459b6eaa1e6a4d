//! Raster types shared by every stage of the pipeline.
//!
//! All planes are row-major `f64`. Color rasters hold sRGB-encoded values in
//! `[0, 1]`; 8-bit data is normalized by `1/255` on the way in.

use std::path::Path;

use image::{DynamicImage, ImageBuffer, Luma};

use crate::error::{Error, Result};

fn check_dims(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidImage(format!(
            "dimensions must be positive, got {width}x{height}"
        )));
    }
    if width * height != len {
        return Err(Error::InvalidImage(format!(
            "{width}x{height} image needs {} pixels, got {len}",
            width * height
        )));
    }
    Ok(())
}

/// An sRGB-encoded color image with channels in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<[f64; 3]>,
}

impl RgbImage {
    /// Builds an image from row-major pixels. Every channel must lie in `[0, 1]`.
    pub fn new(width: usize, height: usize, data: Vec<[f64; 3]>) -> Result<Self> {
        check_dims(width, height, data.len())?;
        if let Some(p) = data
            .iter()
            .find(|p| p.iter().any(|c| !(0.0..=1.0).contains(c)))
        {
            return Err(Error::InvalidImage(format!(
                "channel value outside [0, 1]: {p:?}"
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [f64; 3],
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    /// Builds an image, clamping every channel into `[0, 1]`.
    pub(crate) fn from_clamped(width: usize, height: usize, mut data: Vec<[f64; 3]>) -> Self {
        for p in &mut data {
            for c in p.iter_mut() {
                *c = c.clamp(0.0, 1.0);
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[[f64; 3]] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        self.data[y * self.width + x]
    }

    /// Converts any decoded image. Integer formats are normalized by their
    /// full-scale value; alpha is dropped.
    pub fn from_dynamic(img: &DynamicImage) -> Result<Self> {
        let rgb = img.to_rgb32f();
        let (w, h) = (rgb.width() as usize, rgb.height() as usize);
        let data = rgb
            .pixels()
            .map(|p| p.0.map(|c| f64::from(c).clamp(0.0, 1.0)))
            .collect::<Vec<_>>();
        check_dims(w, h, data.len())?;
        Ok(Self::from_clamped(w, h, data))
    }

    pub fn open(path: &Path) -> Result<Self> {
        let img = image::open(path).map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_dynamic(&img)
    }
}

/// A CIEL*a*b* image stored as three planes.
#[derive(Debug, Clone, PartialEq)]
pub struct LabImage {
    pub(crate) width: usize,
    pub(crate) height: usize,
    pub(crate) l: Vec<f64>,
    pub(crate) a: Vec<f64>,
    pub(crate) b: Vec<f64>,
}

impl LabImage {
    pub fn new(width: usize, height: usize, l: Vec<f64>, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        check_dims(width, height, l.len())?;
        check_dims(width, height, a.len())?;
        check_dims(width, height, b.len())?;
        if l.iter().chain(&a).chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("Lab planes"));
        }
        Ok(Self {
            width,
            height,
            l,
            a,
            b,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn lightness(&self) -> &[f64] {
        &self.l
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        let i = y * self.width + x;
        [self.l[i], self.a[i], self.b[i]]
    }
}

/// A single-channel image with values clamped to `[0, 1]` on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    /// Builds a gray image; values are clamped into `[0, 1]`. NaN is rejected.
    pub fn new(width: usize, height: usize, mut data: Vec<f64>) -> Result<Self> {
        check_dims(width, height, data.len())?;
        if data.iter().any(|v| v.is_nan()) {
            return Err(Error::NonFinite("gray image"));
        }
        for v in &mut data {
            *v = v.clamp(0.0, 1.0);
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Snaps every value onto the 8-bit grid, `round(255 g) / 255`, so the
    /// result is exactly what an 8-bit file decodes back to.
    pub fn quantized_8bit(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .map(|&v| f64::from(to_u8(v)) / 255.0)
                .collect(),
        }
    }

    pub fn to_luma8(&self) -> ImageBuffer<Luma<u8>, Vec<u8>> {
        let raw = self.data.iter().map(|&v| to_u8(v)).collect();
        ImageBuffer::from_raw(self.width as u32, self.height as u32, raw)
            .expect("buffer length matches dimensions")
    }

    pub fn from_dynamic(img: &DynamicImage) -> Result<Self> {
        let luma = img.to_luma32f();
        let (w, h) = (luma.width() as usize, luma.height() as usize);
        let data = luma.pixels().map(|p| f64::from(p.0[0])).collect();
        Self::new(w, h, data)
    }

    /// Decodes a grayscale file. 8-bit data lands exactly on `k / 255`.
    pub fn open(path: &Path) -> Result<Self> {
        let img = image::open(path).map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })?;
        match img {
            DynamicImage::ImageLuma8(buf) => {
                let (w, h) = (buf.width() as usize, buf.height() as usize);
                let data = buf.pixels().map(|p| f64::from(p.0[0]) / 255.0).collect();
                Self::new(w, h, data)
            }
            other => Self::from_dynamic(&other),
        }
    }

    /// Writes an 8-bit PNG with `value = round(255 * gray)`.
    pub fn save_png(&self, path: &Path) -> Result<()> {
        self.to_luma8()
            .save_with_format(path, image::ImageFormat::Png)
            .map_err(|source| Error::Image {
                path: path.to_path_buf(),
                source,
            })
    }
}

fn to_u8(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}
