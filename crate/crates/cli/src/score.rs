use std::fs;

use anyhow::{Context, Result};
use c2g_core::metric::c2g_ssim_maps;
use c2g_core::{GrayImage, RgbImage};

use crate::config::Settings;
use crate::ScoreArgs;

pub fn run(args: ScoreArgs, mut settings: Settings) -> Result<()> {
    args.metric.apply(&mut settings);
    let cfg = settings.decolor.metric;
    cfg.validate()?;
    let color = RgbImage::open(&args.color)?;
    let gray = GrayImage::open(&args.gray)?;
    let maps = c2g_ssim_maps(&color, &gray, &cfg)?;
    println!("{}", maps.mean_quality());

    if let Some(dir) = &args.maps {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let (w, h) = gray.dimensions();
        // Luminance and contrast lie in (0, 1]; structure and quality in [-1, 1].
        let unit = |v: &[f64]| v.to_vec();
        let signed = |v: &[f64]| v.iter().map(|x| (x + 1.0) / 2.0).collect::<Vec<_>>();
        for (name, plane) in [
            ("luminance", unit(&maps.luminance)),
            ("contrast", unit(&maps.contrast)),
            ("structure", signed(&maps.structure)),
            ("quality", signed(&maps.quality)),
        ] {
            GrayImage::new(w, h, plane)?.save_png(&dir.join(format!("{name}.png")))?;
        }
    }
    Ok(())
}
