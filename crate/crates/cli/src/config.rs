//! `key = value` defaults file for the metric and decolorization settings.
//!
//! ```text
//! # comments start with '#'
//! kind = photographic
//! window_size = 11
//! c_grid = 0.05, 0.10, 0.25
//! rank = k=8
//! ```

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use c2g_core::{DecolorConfig, ImageKind, RankPolicy};

use crate::error::UsageError;

/// Settings shared by every subcommand, before command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub decolor: DecolorConfig,
    pub epsilon: f64,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut settings = Settings::default();
        if let Some(path) = path {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            settings
                .apply(&text)
                .with_context(|| format!("in config {}", path.display()))?;
        }
        Ok(settings)
    }

    pub fn apply(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| UsageError(format!("line {}: expected key = value", n + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| UsageError(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let metric = &mut self.decolor.metric;
        match key {
            "kind" => {
                let kind: ImageKind = value.parse().map_err(|e| format!("{e}"))?;
                *metric = metric.with_kind(kind);
            }
            "window_size" => metric.window_size = number(key, value)?,
            "window_sigma" => metric.window_sigma = number(key, value)?,
            "c1" => metric.c1 = number(key, value)?,
            "c2" => metric.c2 = number(key, value)?,
            "c3" => metric.c3 = number(key, value)?,
            "beta" => metric.beta = number(key, value)?,
            "gamma" => metric.gamma = number(key, value)?,
            "fixed_c" => self.decolor.fixed_c = number(key, value)?,
            "c_grid" => {
                self.decolor.c_grid = value
                    .split(',')
                    .map(|v| number(key, v.trim()))
                    .collect::<std::result::Result<_, _>>()?;
            }
            "rank" => {
                self.decolor.rank_policy =
                    value.parse::<RankPolicy>().map_err(|e| format!("{e}"))?;
            }
            "epsilon" => self.epsilon = number(key, value)?,
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("{key}: cannot parse {value:?}"))
}
