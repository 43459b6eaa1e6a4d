//! Benchmark harness: run several decolorization methods over a directory of
//! color images, score every output with C2G-SSIM and summarize.
//!
//! Methods computed here are scored on their 8-bit encoding, which is what
//! gets written to disk and what externally produced gray files contain.

mod dataset;
mod evaluate;
mod report;
mod stats;

pub use dataset::{load_dataset, Dataset};
pub use evaluate::{evaluate, MethodId};
pub use report::{
    emit_plot_data, export_report, read_report, Entry, QualityReport, ReportDocument, ReportFormat,
};
pub use stats::{average_score, success_rate, summarize, SummaryStats};
