use std::path::Path;

use anyhow::{Context, Result};
use c2g_core::{cie_y_gray, ntsc_gray, PreparedImage, RgbImage};

use crate::config::Settings;
use crate::error::UsageError;
use crate::{ConvertArgs, Method};

pub fn run(args: ConvertArgs, mut settings: Settings) -> Result<()> {
    if args.c.is_some() && args.method != Method::SvdFixed {
        return Err(UsageError("--c applies to svd-fixed only".into()).into());
    }
    if args.trace.is_some() && args.method != Method::SvdAdaptive {
        return Err(UsageError("--trace applies to svd-adaptive only".into()).into());
    }
    args.metric.apply(&mut settings);
    let mut cfg = settings.decolor;
    if let Some(rank) = args.rank {
        cfg.rank_policy = rank;
    }
    if let Some(c) = args.c {
        cfg.fixed_c = c;
    }
    cfg.quantize_8bit = true;
    cfg.validate()?;

    let img = RgbImage::open(&args.input)?;
    let gray = match args.method {
        Method::Ntsc => ntsc_gray(&img),
        Method::CieY => cie_y_gray(&img),
        Method::SvdFixed => PreparedImage::new(&img, &cfg.rank_policy)?.gray(cfg.fixed_c)?,
        Method::SvdAdaptive => {
            let res = PreparedImage::new(&img, &cfg.rank_policy)?.adaptive(&cfg)?;
            println!("c = {}  score = {:.6}", res.chosen_c, res.score);
            if let Some(path) = &args.trace {
                write_trace(path, &res.per_c_scores)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            res.gray
        }
    };
    gray.save_png(&args.output)?;
    Ok(())
}

fn write_trace(path: &Path, scores: &[(f64, f64)]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    w.write_record(["c", "score"])?;
    for (c, s) in scores {
        w.write_record([format!("{c:.6}"), format!("{s:.6}")])?;
    }
    w.flush()?;
    Ok(())
}
