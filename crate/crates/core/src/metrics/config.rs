use serde::{Deserialize, Serialize};

use super::MetricError;
use crate::dataset::Schema;
use crate::geometry::NumericScaling;

/// How AIR turns true/false positives into an F1 score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AirF1Mode {
    /// F1 of each real record's own nearest-neighbour guess, entropy weighted.
    #[default]
    PerRecord,
    /// One F1 from TP/FP/FN totalled over all guesses.
    Global,
}

/// Entropy weighting used by the identifiability score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdWeighting {
    /// `w(a, v) = 1 / (H(a, v) + eps)` per attribute value.
    #[default]
    PerValue,
    /// `w(a) = 1 / (H(a) + eps)` with the attribute's total entropy.
    PerAttribute,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricConfig {
    pub key_attributes: Vec<String>,
    pub sensitive_attribute: Option<String>,
    pub cvp_threshold: f64,
    pub dvp_threshold: f64,
    pub air_relative_band: f64,
    pub air_f1_mode: AirF1Mode,
    pub hitr_divisor: f64,
    pub minkowski_p: f64,
    pub projection_k: Option<usize>,
    /// Numeric scaling ahead of the projection used by NNDR, DCR and hidden rate.
    pub projection_scaling: NumericScaling,
    pub id_weighting: IdWeighting,
    pub kfold_k: usize,
    pub mir_test_fraction: f64,
    pub seed: u64,
    pub epsilon: f64,
    /// `generation_map[i]` is the synthetic row generated from real row `i`.
    pub generation_map: Option<Vec<usize>>,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            key_attributes: Vec::new(),
            sensitive_attribute: None,
            cvp_threshold: 0.2,
            dvp_threshold: 0.8,
            air_relative_band: 0.1,
            air_f1_mode: AirF1Mode::PerRecord,
            hitr_divisor: 30.0,
            minkowski_p: 2.0,
            projection_k: None,
            projection_scaling: NumericScaling::Raw,
            id_weighting: IdWeighting::PerValue,
            kfold_k: 5,
            mir_test_fraction: 0.2,
            seed: 42,
            epsilon: 1e-8,
            generation_map: None,
        }
    }
}

fn open_unit(name: &str, v: f64) -> Result<(), MetricError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(MetricError::InvalidConfig(format!("{name} must lie in (0, 1), got {v}")))
    }
}

impl MetricConfig {
    pub fn with_roles<I, S>(keys: I, sensitive: &str) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        MetricConfig {
            key_attributes: keys.into_iter().map(Into::into).collect(),
            sensitive_attribute: Some(sensitive.to_string()),
            ..MetricConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), MetricError> {
        open_unit("cvp_threshold", self.cvp_threshold)?;
        open_unit("dvp_threshold", self.dvp_threshold)?;
        open_unit("air_relative_band", self.air_relative_band)?;
        open_unit("mir_test_fraction", self.mir_test_fraction)?;
        if !(self.hitr_divisor > 0.0 && self.hitr_divisor.is_finite()) {
            return Err(MetricError::InvalidConfig("hitr_divisor must be positive".into()));
        }
        if !(self.minkowski_p > 0.0 && self.minkowski_p.is_finite()) {
            return Err(MetricError::InvalidConfig("minkowski_p must be positive".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(MetricError::InvalidConfig("epsilon must be positive".into()));
        }
        if self.kfold_k < 2 {
            return Err(MetricError::InvalidConfig("kfold_k must be at least 2".into()));
        }
        if let Some(s) = &self.sensitive_attribute {
            if self.key_attributes.iter().any(|k| k == s) {
                return Err(MetricError::InvalidConfig(format!(
                    "sensitive attribute `{s}` is also a key attribute"
                )));
            }
        }
        Ok(())
    }

    /// Key column indices and the sensitive column index.
    pub(crate) fn roles(&self, schema: &Schema) -> Result<(Vec<usize>, usize), MetricError> {
        self.validate()?;
        let sensitive = self
            .sensitive_attribute
            .as_deref()
            .ok_or(MetricError::MissingRole("sensitive attribute"))?;
        if self.key_attributes.is_empty() {
            return Err(MetricError::MissingRole("key attributes"));
        }
        let keys = schema.indices_of(&self.key_attributes)?;
        let s = schema.indices_of(&[sensitive])?[0];
        Ok((keys, s))
    }
}
