use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::stats::SummaryStats;
use crate::error::{Error, Result};
use crate::metric::MetricConfig;

/// One score of one method on one image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub image_id: String,
    pub method: String,
    pub score: f64,
    /// Weight picked by the adaptive method.
    pub chosen_c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub dataset: String,
    pub metric_config: MetricConfig,
    pub entries: Vec<Entry>,
    /// Skipped files, missing external images and similar problems.
    pub warnings: Vec<String>,
}

impl QualityReport {
    pub fn new(
        dataset: impl Into<String>,
        metric_config: MetricConfig,
        entries: Vec<Entry>,
    ) -> Self {
        Self {
            dataset: dataset.into(),
            metric_config,
            entries,
            warnings: Vec::new(),
        }
    }

    /// Distinct image ids in first-seen order.
    pub fn image_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = Vec::new();
        for e in &self.entries {
            if !ids.contains(&e.image_id.as_str()) {
                ids.push(&e.image_id);
            }
        }
        ids
    }

    pub fn score(&self, image_id: &str, method: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.image_id == image_id && e.method == method)
            .map(|e| e.score)
    }

    /// Checks that no `(image, method)` pair repeats and every score is finite.
    pub fn validate(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::EmptyReport);
        }
        let mut seen = std::collections::HashSet::new();
        for e in &self.entries {
            if !e.score.is_finite() {
                return Err(Error::NonFinite("report score"));
            }
            if !seen.insert((&e.image_id, &e.method)) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate entry for image {:?}, method {:?}",
                    e.image_id, e.method
                )));
            }
        }
        Ok(())
    }
}

/// The JSON report file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub dataset: String,
    pub metric_config: MetricConfig,
    pub entries: Vec<Entry>,
    pub success_rate: BTreeMap<String, usize>,
    pub average_score: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(contents).map_err(|e| Error::io(path, e))
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn csv_bytes(rows: Vec<Vec<String>>) -> Vec<u8> {
    let mut w = csv_writer();
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

/// Serialized report. JSON keeps scores at full precision; CSV rows are
/// `image_id,method,score,chosen_c` with six decimals.
pub fn render_report(
    report: &QualityReport,
    stats: &SummaryStats,
    format: ReportFormat,
) -> Result<Vec<u8>> {
    report.validate()?;
    match format {
        ReportFormat::Json => {
            let doc = ReportDocument {
                dataset: report.dataset.clone(),
                metric_config: report.metric_config,
                entries: report.entries.clone(),
                success_rate: stats.success_rate.clone(),
                average_score: stats.average_score.clone(),
            };
            let mut out = serde_json::to_vec_pretty(&doc).expect("report serializes");
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Csv => {
            let mut rows = vec![vec![
                "image_id".to_owned(),
                "method".to_owned(),
                "score".to_owned(),
                "chosen_c".to_owned(),
            ]];
            for e in &report.entries {
                rows.push(vec![
                    e.image_id.clone(),
                    e.method.clone(),
                    format!("{:.6}", e.score),
                    e.chosen_c.map(|c| format!("{c:.6}")).unwrap_or_default(),
                ]);
            }
            Ok(csv_bytes(rows))
        }
    }
}

pub fn export_report(
    report: &QualityReport,
    stats: &SummaryStats,
    format: ReportFormat,
    path: &Path,
) -> Result<()> {
    let bytes = render_report(report, stats, format)?;
    write_file(path, &bytes)
}

/// Reads a JSON report written by [`export_report`].
pub fn read_report(path: &Path) -> Result<(QualityReport, SummaryStats)> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let doc: ReportDocument = serde_json::from_slice(&bytes).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    let report = QualityReport::new(doc.dataset, doc.metric_config, doc.entries);
    let n_images = report.image_ids().len();
    Ok((
        report,
        SummaryStats {
            success_rate: doc.success_rate,
            average_score: doc.average_score,
            n_images,
        },
    ))
}

/// `method,success_rate,average_score` rows for external plotting.
pub fn emit_plot_data(stats: &SummaryStats, path: &Path) -> Result<()> {
    let mut rows = vec![vec![
        "method".to_owned(),
        "success_rate".to_owned(),
        "average_score".to_owned(),
    ]];
    let methods = stats
        .success_rate
        .keys()
        .chain(stats.average_score.keys())
        .collect::<std::collections::BTreeSet<_>>();
    for m in methods {
        rows.push(vec![
            m.clone(),
            stats.success_rate.get(m).copied().unwrap_or(0).to_string(),
            stats
                .average_score
                .get(m)
                .map(|s| format!("{s:.6}"))
                .unwrap_or_default(),
        ]);
    }
    write_file(path, &csv_bytes(rows))
}
