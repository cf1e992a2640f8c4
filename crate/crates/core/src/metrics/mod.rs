//! The seventeen privacy metrics.
//!
//! Every metric is a pure function of `(Y, Z, config)`. Attack-style metrics
//! build a guess set `G`, adjudicate the correct subset `C` and aggregate;
//! distance-style metrics build `C` directly from nearest-neighbour
//! relations. Scores are reported raw and normalized to `[0, 1]`.

mod attack;
mod config;
mod distance;
mod learned;
mod matching;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::ClassifyError;
use crate::dataset::{Dataset, DatasetError};
use crate::geometry::GeometryError;

pub use attack::{air, crp, gcap, zcap};
pub use config::{AirF1Mode, IdWeighting, MetricConfig};
pub use distance::{
    auth, cvp, dcr, dvp, hidden_rate, hitting_rate, identifiability, mdcr, nndr, nnaa, nsnd,
};
pub use learned::{dmlp, mir};
pub use matching::{
    adjudicate, air_guesses, cvp_matches, gcap_guesses, zcap_guesses, Match, MatchKind, MatchSet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricId {
    Zcap,
    Gcap,
    Air,
    Crp,
    Cvp,
    Dvp,
    Dmlp,
    Auth,
    Identifiability,
    Nsnd,
    Nndr,
    Dcr,
    Mdcr,
    Nnaa,
    Mir,
    HiddenRate,
    HittingRate,
}

impl MetricId {
    /// Canonical reporting order.
    pub const ALL: [MetricId; 17] = [
        MetricId::Zcap,
        MetricId::Gcap,
        MetricId::Air,
        MetricId::Crp,
        MetricId::Cvp,
        MetricId::Dvp,
        MetricId::Dmlp,
        MetricId::Auth,
        MetricId::Identifiability,
        MetricId::Nsnd,
        MetricId::Nndr,
        MetricId::Dcr,
        MetricId::Mdcr,
        MetricId::Nnaa,
        MetricId::Mir,
        MetricId::HiddenRate,
        MetricId::HittingRate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricId::Zcap => "zcap",
            MetricId::Gcap => "gcap",
            MetricId::Air => "air",
            MetricId::Crp => "crp",
            MetricId::Cvp => "cvp",
            MetricId::Dvp => "dvp",
            MetricId::Dmlp => "dmlp",
            MetricId::Auth => "auth",
            MetricId::Identifiability => "identifiability",
            MetricId::Nsnd => "nsnd",
            MetricId::Nndr => "nndr",
            MetricId::Dcr => "dcr",
            MetricId::Mdcr => "mdcr",
            MetricId::Nnaa => "nnaa",
            MetricId::Mir => "mir",
            MetricId::HiddenRate => "hidden_rate",
            MetricId::HittingRate => "hitting_rate",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            MetricId::Zcap => "Zero correct attribution probability: exact key matches sharing the sensitive value",
            MetricId::Gcap => "Generalized CAP: Hamming-nearest key matches sharing the sensitive value",
            MetricId::Air => "Attribute inference risk: entropy-weighted F1 of nearest-key inference",
            MetricId::Crp => "Common rows proportion: synthetic rows identical to a real row",
            MetricId::Cvp => "Close value probability: normalized NN distance <= threshold",
            MetricId::Dvp => "Distant value probability, reported as 1 - DVP",
            MetricId::Dmlp => "Detection MLP: mean k-fold AUC of a real-vs-synthetic classifier",
            MetricId::Auth => "Authenticity, reported as 1 - Auth",
            MetricId::Identifiability => "Identifiability: entropy-weighted synthetic NN closer than real NN",
            MetricId::Nsnd => "Nearest synthetic neighbour distance (normalized mean)",
            MetricId::Nndr => "Nearest neighbour distance ratio in the projected space",
            MetricId::Dcr => "Distance to closest record, reported as 1 - sigmoid(ln DCR)",
            MetricId::Mdcr => "Median DCR ratio, reported as sigmoid(ratio)",
            MetricId::Nnaa => "Nearest neighbour adversarial accuracy, reported as 1 - NNAA",
            MetricId::Mir => "Membership inference risk: holdout recall of a boosted-tree classifier",
            MetricId::HiddenRate => "Hidden rate: real records whose NN is their own synthetic copy",
            MetricId::HittingRate => "Hitting rate: real records with a near-identical synthetic record",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            MetricId::Nsnd | MetricId::Dmlp => Direction::AsWrittenAnomalous,
            _ => Direction::OneMeansNoPrivacy,
        }
    }

    /// Configuration the metric cannot run without.
    pub fn required_config(self) -> &'static str {
        match self {
            MetricId::Zcap | MetricId::Gcap | MetricId::Air => "keys, sensitive",
            MetricId::HiddenRate => "generation map or |Y| = |Z|",
            MetricId::Dmlp | MetricId::Mir | MetricId::Nnaa => "seed",
            _ => "-",
        }
    }

    pub fn uses_classifier(self) -> bool {
        matches!(self, MetricId::Dmlp | MetricId::Mir)
    }

    pub fn compute(self, y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
        match self {
            MetricId::Zcap => zcap(y, z, cfg),
            MetricId::Gcap => gcap(y, z, cfg),
            MetricId::Air => air::<f64>(y, z, cfg),
            MetricId::Crp => crp(y, z, cfg),
            MetricId::Cvp => cvp::<f64>(y, z, cfg),
            MetricId::Dvp => dvp::<f64>(y, z, cfg),
            MetricId::Dmlp => dmlp::<f64>(y, z, cfg),
            MetricId::Auth => auth::<f64>(y, z, cfg),
            MetricId::Identifiability => identifiability::<f64>(y, z, cfg),
            MetricId::Nsnd => nsnd::<f64>(y, z, cfg),
            MetricId::Nndr => nndr::<f64>(y, z, cfg),
            MetricId::Dcr => dcr::<f64>(y, z, cfg),
            MetricId::Mdcr => mdcr::<f64>(y, z, cfg),
            MetricId::Nnaa => nnaa::<f64>(y, z, cfg),
            MetricId::Mir => mir::<f64>(y, z, cfg),
            MetricId::HiddenRate => hidden_rate::<f64>(y, z, cfg),
            MetricId::HittingRate => hitting_rate(y, z, cfg),
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricId {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let alias = match key.as_str() {
            "d_mlp" => "dmlp",
            "id" => "identifiability",
            "hiddr" => "hidden_rate",
            "hitr" => "hitting_rate",
            other => other,
        };
        MetricId::ALL
            .into_iter()
            .find(|m| m.as_str() == alias)
            .ok_or_else(|| MetricError::UnknownMetric(s.to_string()))
    }
}

/// Reading of a score relative to "0 = complete privacy, 1 = no privacy".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    OneMeansNoPrivacy,
    /// Reported on the metric's own scale, which does not follow that convention.
    AsWrittenAnomalous,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::OneMeansNoPrivacy => "one_means_no_privacy",
            Direction::AsWrittenAnomalous => "as_written_anomalous",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricResult {
    pub id: MetricId,
    pub raw_score: f64,
    pub normalized_score: f64,
    pub direction: Direction,
    /// The normalized score was clamped into `[0, 1]`.
    pub clamped: bool,
    /// Conventions applied during this evaluation (degenerate cases, averaging, ...).
    pub notes: Vec<String>,
    /// Effective parameters used by this metric.
    pub params: BTreeMap<String, String>,
}

impl MetricResult {
    pub(crate) fn new(id: MetricId, raw_score: f64, normalized: f64) -> Self {
        let clamped_value = normalized.clamp(0.0, 1.0);
        MetricResult {
            id,
            raw_score,
            normalized_score: clamped_value,
            direction: id.direction(),
            clamped: clamped_value != normalized,
            notes: Vec::new(),
            params: BTreeMap::new(),
        }
    }

    pub(crate) fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub(crate) fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("`{0}` must be configured for this metric")]
    MissingRole(&'static str),
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("real dataset has zero entropy (all records identical); weights are undefined")]
    DegenerateEntropy,
    #[error("need at least {needed} real records, found {found}")]
    InsufficientRealRecords { needed: usize, found: usize },
    #[error("need at least {needed} synthetic records, found {found}")]
    InsufficientSyntheticRecords { needed: usize, found: usize },
    #[error("no generation map given and |Y| = {real} differs from |Z| = {synth}")]
    MissingGenerationMap { real: usize, synth: usize },
    #[error("invalid generation map: {0}")]
    InvalidGenerationMap(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// One metric's outcome inside a batch.
#[derive(Debug)]
pub struct MetricEntry {
    pub id: MetricId,
    pub outcome: Result<MetricResult, MetricError>,
    pub elapsed: Duration,
}

/// Runs `selection` (all metrics when empty) in canonical order. Failures are
/// recorded per entry and never abort the batch. Metrics run concurrently on
/// the current rayon pool.
pub fn evaluate_all(y: &Dataset, z: &Dataset, cfg: &MetricConfig, selection: &[MetricId]) -> Vec<MetricEntry> {
    let mut ids: Vec<MetricId> = if selection.is_empty() {
        MetricId::ALL.to_vec()
    } else {
        selection.to_vec()
    };
    ids.sort();
    ids.dedup();
    ids.into_par_iter()
        .map(|id| {
            let start = Instant::now();
            let outcome = cfg.validate().and_then(|_| id.compute(y, z, cfg));
            MetricEntry {
                id,
                outcome,
                elapsed: start.elapsed(),
            }
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::dataset::{load_dataset, Dataset, Role};

    fn load(csv: &str, schema: &str, role: Role) -> Dataset {
        load_dataset(csv.as_bytes(), schema.as_bytes(), role).unwrap()
    }

    pub fn tiny() -> (Dataset, Dataset) {
        let s = include_str!("../../../../fixtures/f_tiny.schema.json");
        (
            load(include_str!("../../../../fixtures/f_tiny_real.csv"), s, Role::Real),
            load(include_str!("../../../../fixtures/f_tiny_synth.csv"), s, Role::Synthetic),
        )
    }

    pub fn num() -> (Dataset, Dataset) {
        let s = include_str!("../../../../fixtures/f_num.schema.json");
        (
            load(include_str!("../../../../fixtures/f_num_real.csv"), s, Role::Real),
            load(include_str!("../../../../fixtures/f_num_synth.csv"), s, Role::Synthetic),
        )
    }

    /// One numerical column.
    pub fn column(real: &[f64], synth: &[f64]) -> (Dataset, Dataset) {
        let schema = r#"{"attributes":[{"name":"x","type":"numerical"}]}"#;
        let csv = |v: &[f64]| {
            let mut s = String::from("x\n");
            for x in v {
                s.push_str(&format!("{x}\n"));
            }
            s
        };
        (
            load(&csv(real), schema, Role::Real),
            load(&csv(synth), schema, Role::Synthetic),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip_and_aliases() {
        for id in MetricId::ALL {
            assert_eq!(id.as_str().parse::<MetricId>().unwrap(), id);
        }
        assert_eq!("D-MLP".parse::<MetricId>().unwrap(), MetricId::Dmlp);
        assert_eq!("HiddR".parse::<MetricId>().unwrap(), MetricId::HiddenRate);
        assert!("nope".parse::<MetricId>().is_err());
        let mut sorted = MetricId::ALL;
        sorted.sort();
        assert_eq!(sorted, MetricId::ALL);
    }

    #[test]
    fn clamping_is_flagged() {
        let r = MetricResult::new(MetricId::Crp, 1.5, 1.5);
        assert_eq!(r.normalized_score, 1.0);
        assert!(r.clamped);
        assert!(!MetricResult::new(MetricId::Crp, 0.5, 0.5).clamped);
    }

    #[test]
    fn full_tiny_run() {
        let (y, z) = fixtures::tiny();
        let cfg = MetricConfig::with_roles(["sex", "smoker"], "age");
        let out = evaluate_all(&y, &z, &cfg, &[]);
        assert_eq!(out.len(), 17);
        assert_eq!(out.iter().map(|e| e.id).collect::<Vec<_>>(), MetricId::ALL.to_vec());
        for e in &out {
            if let Ok(r) = &e.outcome {
                assert!((0.0..=1.0).contains(&r.normalized_score), "{}", e.id);
            }
        }
    }

    #[test]
    fn selection_and_per_entry_errors() {
        let (y, z) = fixtures::tiny();
        let cfg = MetricConfig::with_roles(["sex", "smoker"], "age");
        let out = evaluate_all(&y, &z, &cfg, &[MetricId::Crp]);
        assert_eq!(out.len(), 1);
        assert!(out[0].outcome.is_ok());

        let no_roles = MetricConfig::default();
        let out = evaluate_all(&y, &z, &no_roles, &[MetricId::Zcap, MetricId::Crp, MetricId::Zcap]);
        assert_eq!(out.len(), 2);
        assert!(matches!(out[0].outcome, Err(MetricError::MissingRole(_))));
        assert!(out[1].outcome.is_ok());
    }
}
