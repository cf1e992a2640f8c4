use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use synth_audit::metrics::MetricEntry;
use synth_audit::{Direction, MetricConfig, MetricId};

use crate::args::ReportFormat;

/// Everything that determines a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub real: PathBuf,
    pub synth: PathBuf,
    pub schema: PathBuf,
    pub generation_map: Option<PathBuf>,
    pub metrics: MetricConfig,
    /// Empty means every metric.
    pub selection: Vec<MetricId>,
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Serialize)]
pub struct Inputs {
    pub real_sha256: String,
    pub synth_sha256: String,
    pub schema_sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generation_map_sha256: Option<String>,
    pub real_rows: usize,
    pub synth_rows: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultEntry {
    pub id: MetricId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized_score: Option<f64>,
    pub direction: Direction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clamped: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

impl From<MetricEntry> for ResultEntry {
    fn from(e: MetricEntry) -> Self {
        let elapsed_ms = e.elapsed.as_secs_f64() * 1e3;
        match e.outcome {
            Ok(r) => ResultEntry {
                id: e.id,
                raw_score: Some(r.raw_score),
                normalized_score: Some(r.normalized_score),
                direction: r.direction,
                clamped: Some(r.clamped),
                notes: r.notes,
                params: r.params,
                error: None,
                elapsed_ms,
            },
            Err(err) => ResultEntry {
                id: e.id,
                raw_score: None,
                normalized_score: None,
                direction: e.id.direction(),
                clamped: None,
                notes: Vec::new(),
                params: BTreeMap::new(),
                error: Some(err.to_string()),
                elapsed_ms,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub inputs: Inputs,
    pub config: RunConfig,
    pub results: Vec<ResultEntry>,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn has_errors(&self) -> bool {
        self.results.iter().any(|r| r.error.is_some())
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            ReportFormat::Markdown => self.markdown(),
        }
    }

    fn markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {} {} report\n", self.tool, self.version);
        let _ = writeln!(s, "- real: `{}` ({} rows, sha256 {})", self.config.real.display(), self.inputs.real_rows, self.inputs.real_sha256);
        let _ = writeln!(s, "- synthetic: `{}` ({} rows, sha256 {})", self.config.synth.display(), self.inputs.synth_rows, self.inputs.synth_sha256);
        let _ = writeln!(s, "- schema: `{}` (sha256 {})", self.config.schema.display(), self.inputs.schema_sha256);
        let _ = writeln!(s, "- seed: {}\n", self.config.metrics.seed);
        s.push_str("| metric | raw | normalized | direction | notes |\n");
        s.push_str("|---|---|---|---|---|\n");
        for r in &self.results {
            match (&r.error, r.raw_score, r.normalized_score) {
                (Some(e), _, _) => {
                    let _ = writeln!(s, "| {} | - | - | {} | error: {} |", r.id, r.direction, e);
                }
                (None, Some(raw), Some(norm)) => {
                    let _ = writeln!(
                        s,
                        "| {} | {:.6} | {:.6} | {} | {} |",
                        r.id,
                        raw,
                        norm,
                        r.direction,
                        r.notes.join("; ")
                    );
                }
                _ => unreachable!("entries carry either scores or an error"),
            }
        }
        s
    }
}
