//! Experiment reports: a grid of accuracies plus run metadata, rendered as
//! an aligned table for reading and as key/value lines for diffing.
//!
//! Both renderings are deterministic functions of the grid. Wall-clock
//! timings stay in the in-memory report for logging and never reach either
//! rendering, so two runs with the same seed produce identical artifacts.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{FeatureSet, Method, Regime};
use crate::corpus::Platform;

/// One (feature set, platform) accuracy measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportCell {
    pub feature_set: FeatureSet,
    pub platform: Platform,
    pub regime: Regime,
    pub accuracy: f64,
    pub n_train: usize,
    pub n_test: usize,
    /// Gold posts excluded because the model trained on them.
    pub dropped_overlap: usize,
}

/// A full experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub method: Method,
    pub regime: Regime,
    pub seed: u64,
    pub split_ratio: f64,
    pub cells: Vec<ReportCell>,
    /// (label, elapsed) pairs; excluded from rendered artifacts.
    #[serde(skip)]
    pub timings_ms: Vec<(String, u128)>,
}

impl Report {
    pub fn cell(&self, fs: FeatureSet, platform: Platform) -> Option<&ReportCell> {
        self.cells
            .iter()
            .find(|c| c.feature_set == fs && c.platform == platform)
    }

    fn platforms(&self) -> Vec<Platform> {
        let mut out: Vec<Platform> = Vec::new();
        for c in &self.cells {
            if !out.contains(&c.platform) {
                out.push(c.platform);
            }
        }
        out
    }

    fn feature_sets(&self) -> Vec<FeatureSet> {
        let mut out: Vec<FeatureSet> = Vec::new();
        for c in &self.cells {
            if !out.contains(&c.feature_set) {
                out.push(c.feature_set);
            }
        }
        out
    }
}

/// Aligned text table: feature sets down, platforms across.
pub fn render_table(report: &Report) -> String {
    let platforms = report.platforms();
    let feature_sets = report.feature_sets();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "method: {}  regime: {}  seed: {}  split: {}",
        report.method.name(),
        report.regime.name(),
        report.seed,
        report.split_ratio,
    );
    let name_width = feature_sets
        .iter()
        .map(|f| f.name().len())
        .chain(["feature_set".len()])
        .max()
        .unwrap_or(0);
    let col_width = 10usize;
    let _ = write!(out, "{:<name_width$}", "feature_set");
    for p in &platforms {
        let _ = write!(out, "  {:>col_width$}", p.code());
    }
    out.push('\n');
    for fs in &feature_sets {
        let _ = write!(out, "{:<name_width$}", fs.name());
        for p in &platforms {
            match report.cell(*fs, *p) {
                Some(c) => {
                    let _ = write!(out, "  {:>col_width$.4}", c.accuracy);
                }
                None => {
                    let _ = write!(out, "  {:>col_width$}", "-");
                }
            }
        }
        out.push('\n');
    }
    // Sizes, one line per platform; identical across feature sets.
    for p in &platforms {
        if let Some(c) = report.cells.iter().find(|c| c.platform == *p) {
            let _ = write!(
                out,
                "{}: train {} / test {}",
                p.code(),
                c.n_train,
                c.n_test
            );
            if c.dropped_overlap > 0 {
                let _ = write!(out, " (dropped {} train-overlap)", c.dropped_overlap);
            }
            out.push('\n');
        }
    }
    out
}

/// Key/value lines, one fact per line, in a fixed order.
pub fn write_kv(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "method={}", report.method.name());
    let _ = writeln!(out, "regime={}", report.regime.name());
    let _ = writeln!(out, "seed={}", report.seed);
    let _ = writeln!(out, "split_ratio={}", report.split_ratio);
    for c in &report.cells {
        let prefix = format!("cell.{}.{}", c.feature_set.name(), c.platform.code());
        let _ = writeln!(out, "{prefix}.accuracy={}", c.accuracy);
        let _ = writeln!(out, "{prefix}.n_train={}", c.n_train);
        let _ = writeln!(out, "{prefix}.n_test={}", c.n_test);
        if c.dropped_overlap > 0 {
            let _ = writeln!(out, "{prefix}.dropped_overlap={}", c.dropped_overlap);
        }
    }
    out
}
