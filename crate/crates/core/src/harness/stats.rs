use std::collections::BTreeMap;

use super::report::QualityReport;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    /// Images on which each method reached the best score.
    pub success_rate: BTreeMap<String, usize>,
    pub average_score: BTreeMap<String, f64>,
    pub n_images: usize,
}

/// Per method, the number of images where its score is within `epsilon` of
/// the best score on that image. Ties credit every tied method.
pub fn success_rate(report: &QualityReport, epsilon: f64) -> Result<BTreeMap<String, usize>> {
    if report.entries.is_empty() {
        return Err(Error::EmptyReport);
    }
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "epsilon must be non-negative, got {epsilon}"
        )));
    }
    let mut counts: BTreeMap<String, usize> = report
        .entries
        .iter()
        .map(|e| (e.method.clone(), 0))
        .collect();
    for id in report.image_ids() {
        let scores: Vec<_> = report.entries.iter().filter(|e| e.image_id == id).collect();
        let best = scores
            .iter()
            .map(|e| e.score)
            .fold(f64::NEG_INFINITY, f64::max);
        for e in scores {
            if e.score >= best - epsilon {
                *counts.get_mut(&e.method).expect("seeded above") += 1;
            }
        }
    }
    Ok(counts)
}

/// Mean score of each method over the images it has entries for.
pub fn average_score(report: &QualityReport) -> Result<BTreeMap<String, f64>> {
    if report.entries.is_empty() {
        return Err(Error::EmptyReport);
    }
    let mut sums: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for e in &report.entries {
        let slot = sums.entry(e.method.clone()).or_insert((0.0, 0));
        slot.0 += e.score;
        slot.1 += 1;
    }
    Ok(sums
        .into_iter()
        .map(|(m, (sum, n))| (m, sum / n as f64))
        .collect())
}

pub fn summarize(report: &QualityReport, epsilon: f64) -> Result<SummaryStats> {
    Ok(SummaryStats {
        success_rate: success_rate(report, epsilon)?,
        average_score: average_score(report)?,
        n_images: report.image_ids().len(),
    })
}
