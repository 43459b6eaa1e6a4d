//! Test-only oracles and fixtures, kept independent of the library's
//! implementation paths.
#![allow(dead_code)]

use std::path::Path;

use c2g_core::{GrayImage, LabImage, RgbImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Window statistics at one pixel, in the order
/// `u_f, u_g, d_f, d_g, sigma_f, sigma_g, sigma_fg`.
pub type PixelStats = [f64; 7];

fn mirror(mut i: i64, n: i64) -> usize {
    // Fold repeatedly until the index lands inside; edge samples repeat.
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - 1 - i;
        } else {
            return i as usize;
        }
    }
}

/// Materializes a padded copy of a row-major plane.
fn pad(plane: &[f64], w: usize, h: usize, r: usize) -> Vec<Vec<f64>> {
    let (pw, ph) = (w + 2 * r, h + 2 * r);
    (0..ph)
        .map(|py| {
            (0..pw)
                .map(|px| {
                    let y = mirror(py as i64 - r as i64, h as i64);
                    let x = mirror(px as i64 - r as i64, w as i64);
                    plane[y * w + x]
                })
                .collect()
        })
        .collect()
}

fn gaussian(size: usize, sigma: f64) -> Vec<Vec<f64>> {
    let c = (size / 2) as f64;
    let raw: Vec<Vec<f64>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    let d2 = (i as f64 - c).powi(2) + (j as f64 - c).powi(2);
                    (-d2 / (2.0 * sigma * sigma)).exp()
                })
                .collect()
        })
        .collect();
    let total: f64 = raw.iter().flatten().sum();
    raw.into_iter()
        .map(|row| row.into_iter().map(|v| v / total).collect())
        .collect()
}

/// Naive per-window double loop over explicitly padded planes.
pub fn brute_force_stats(
    lab: &LabImage,
    gray: &GrayImage,
    size: usize,
    sigma: f64,
) -> Vec<PixelStats> {
    let (w, h) = lab.dimensions();
    let r = size / 2;
    let wts = gaussian(size, sigma);
    let gscaled: Vec<f64> = gray.data().iter().map(|v| 100.0 * v).collect();
    let pl = pad(lab.lightness(), w, h, r);
    let pa = pad(lab.a(), w, h, r);
    let pb = pad(lab.b(), w, h, r);
    let pg = pad(&gscaled, w, h, r);

    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let mut weights = Vec::new();
            let mut colors = Vec::new();
            let mut grays = Vec::new();
            for i in 0..size {
                for j in 0..size {
                    weights.push(wts[i][j]);
                    colors.push([pl[y + i][x + j], pa[y + i][x + j], pb[y + i][x + j]]);
                    grays.push(pg[y + i][x + j]);
                }
            }
            let wsum = |v: &dyn Fn(usize) -> f64| -> f64 {
                (0..weights.len()).map(|k| weights[k] * v(k)).sum()
            };
            let mean_color: Vec<f64> = (0..3).map(|ch| wsum(&|k| colors[k][ch])).collect();
            let mean_gray = wsum(&|k| grays[k]);
            let df: Vec<f64> = colors
                .iter()
                .map(|c| {
                    c.iter()
                        .zip(&mean_color)
                        .map(|(a, b)| (a - b).powi(2))
                        .sum::<f64>()
                        .sqrt()
                })
                .collect();
            let dg: Vec<f64> = grays.iter().map(|g| (g - mean_gray).abs()).collect();
            let d_f = wsum(&|k| df[k]);
            let d_g = wsum(&|k| dg[k]);
            let var_f = wsum(&|k| (df[k] - d_f).powi(2));
            let var_g = wsum(&|k| (dg[k] - d_g).powi(2));
            let cov = wsum(&|k| (df[k] - d_f) * (dg[k] - d_g));
            out.push([
                mean_color[0],
                mean_gray,
                d_f,
                d_g,
                var_f.sqrt(),
                var_g.sqrt(),
                cov,
            ]);
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rgb(rng: &mut ChaCha8Rng, w: usize, h: usize) -> RgbImage {
    RgbImage::from_fn(w, h, |_, _| {
        [
            rng.random_range(0.0..=1.0),
            rng.random_range(0.0..=1.0),
            rng.random_range(0.0..=1.0),
        ]
    })
    .unwrap()
}

pub fn random_gray(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayImage {
    GrayImage::new(
        w,
        h,
        (0..w * h).map(|_| rng.random_range(0.0..=1.0)).collect(),
    )
    .unwrap()
}

/// Smooth color scene with blobs of nearly equal lightness, resembling the
/// isoluminant test charts.
pub fn synthetic_scene(seed: u64, w: usize, h: usize) -> RgbImage {
    let mut r = rng(seed);
    let blobs: Vec<(f64, f64, f64, [f64; 3])> = (0..6)
        .map(|_| {
            (
                r.random_range(0.0..w as f64),
                r.random_range(0.0..h as f64),
                r.random_range(8.0..(w.min(h) as f64 / 3.0).max(9.0)),
                [
                    r.random_range(0.1..0.9),
                    r.random_range(0.1..0.9),
                    r.random_range(0.1..0.9),
                ],
            )
        })
        .collect();
    RgbImage::from_fn(w, h, |x, y| {
        let mut px = [
            0.5 + 0.2 * (x as f64 / w as f64),
            0.5,
            0.5 - 0.2 * (y as f64 / h as f64),
        ];
        for &(cx, cy, rad, col) in &blobs {
            let d = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
            let t = (1.0 - d / rad).clamp(0.0, 1.0);
            for c in 0..3 {
                px[c] = px[c] * (1.0 - t) + col[c] * t;
            }
        }
        px.map(|v: f64| v.clamp(0.0, 1.0))
    })
    .unwrap()
}

/// Writes an 8-bit RGB file; the format follows the extension.
pub fn save_rgb(img: &RgbImage, path: &Path) {
    let raw: Vec<u8> = img
        .pixels()
        .iter()
        .flat_map(|p| p.map(|c| (c * 255.0).round() as u8))
        .collect();
    image::RgbImage::from_raw(img.width() as u32, img.height() as u32, raw)
        .unwrap()
        .save(path)
        .unwrap();
}
