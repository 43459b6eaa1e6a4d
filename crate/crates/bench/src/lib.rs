//! Deterministic inputs for the benchmarks.

use c2g_core::RgbImage;

/// Smooth color scene: a diagonal hue ramp with a few isoluminant discs.
pub fn scene(width: usize, height: usize) -> RgbImage {
    let discs = [
        (0.3, 0.3, 0.15, [0.8, 0.3, 0.3]),
        (0.7, 0.4, 0.2, [0.3, 0.6, 0.3]),
        (0.5, 0.75, 0.18, [0.3, 0.4, 0.8]),
    ];
    RgbImage::from_fn(width, height, |x, y| {
        let (u, v) = (x as f64 / width as f64, y as f64 / height as f64);
        let mut px = [
            0.4 + 0.4 * u,
            0.5 + 0.2 * (6.0 * v).sin(),
            0.6 - 0.4 * u * v,
        ];
        for (cx, cy, r, color) in discs {
            if (u - cx).powi(2) + (v - cy).powi(2) < r * r {
                px = color;
            }
        }
        px.map(|c: f64| c.clamp(0.0, 1.0))
    })
    .expect("channels are clamped")
}
