use std::path::PathBuf;

use anyhow::{Context, Result};
use c2g_core::harness::{
    emit_plot_data, evaluate, export_report, load_dataset, summarize, MethodId, ReportFormat,
};

use crate::config::Settings;
use crate::error::UsageError;
use crate::EvalArgs;

fn parse_external(spec: &str) -> Result<MethodId> {
    let (label, dir) = spec
        .split_once('=')
        .filter(|(l, d)| !l.trim().is_empty() && !d.is_empty())
        .ok_or_else(|| UsageError(format!("--external expects <label>=<dir>, got {spec:?}")))?;
    Ok(MethodId::External {
        label: label.trim().to_owned(),
        dir: PathBuf::from(dir),
    })
}

pub fn run(args: EvalArgs, mut settings: Settings) -> Result<()> {
    args.metric.apply(&mut settings);
    if let Some(rank) = args.rank {
        settings.decolor.rank_policy = rank;
    }
    let epsilon = args.epsilon.unwrap_or(settings.epsilon);
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(UsageError(format!("--epsilon must be non-negative, got {epsilon}")).into());
    }
    if args.jobs == Some(0) {
        return Err(UsageError("--jobs must be at least 1".into()).into());
    }
    let mut methods = args
        .methods
        .iter()
        .filter(|m| !m.trim().is_empty())
        .map(|m| MethodId::parse_builtin(m).map_err(anyhow::Error::from))
        .collect::<Result<Vec<_>>>()?;
    for spec in &args.external {
        methods.push(parse_external(spec)?);
    }
    settings.decolor.validate()?;

    let dataset = load_dataset(&args.dataset)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .context("starting worker pool")?;
    let report = pool.install(|| {
        evaluate(
            &dataset,
            &methods,
            &settings.decolor,
            args.outputs.as_deref(),
        )
    })?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let stats = summarize(&report, epsilon)?;

    export_report(&report, &stats, ReportFormat::Json, &args.report)?;
    if let Some(path) = &args.csv {
        export_report(&report, &stats, ReportFormat::Csv, path)?;
    }
    if let Some(path) = &args.plot_data {
        emit_plot_data(&stats, path)?;
    }

    println!(
        "{} images, {} entries",
        stats.n_images,
        report.entries.len()
    );
    println!("{:<24} {:>8} {:>10}", "method", "success", "average");
    for (method, avg) in &stats.average_score {
        let wins = stats.success_rate.get(method).copied().unwrap_or(0);
        println!("{method:<24} {wins:>8} {avg:>10.6}");
    }
    Ok(())
}
