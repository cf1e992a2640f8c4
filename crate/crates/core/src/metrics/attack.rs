use std::collections::HashSet;

use super::matching::{adjudicate, air_guesses, gcap_guesses, zcap_guesses, MatchSet};
use super::{AirF1Mode, MetricConfig, MetricError, MetricId, MetricResult};
use crate::dataset::{entropy_term, Dataset, Record, Value, ValueStats};
use crate::geometry::{encode_pair, NumericScaling};
use crate::scalar::Scalar;

pub(super) fn check_inputs(y: &Dataset, z: &Dataset) -> Result<(), MetricError> {
    y.ensure_same_schema(z)?;
    if y.is_empty() {
        return Err(MetricError::InsufficientRealRecords { needed: 1, found: 0 });
    }
    if z.is_empty() {
        return Err(MetricError::InsufficientSyntheticRecords { needed: 1, found: 0 });
    }
    Ok(())
}

/// Mean over real rows of `|C(y)| / max(1, |G(y)|)`.
fn mean_ratio(g: &MatchSet, c: &MatchSet) -> f64 {
    let gc = g.counts_per_real();
    let cc = c.counts_per_real();
    let total: f64 = gc
        .iter()
        .zip(&cc)
        .map(|(&g, &c)| c as f64 / g.max(1) as f64)
        .sum();
    total / g.real_rows as f64
}

pub fn zcap(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    check_inputs(y, z)?;
    let (keys, s) = cfg.roles(y.schema())?;
    let g = zcap_guesses(y, z, &keys);
    let c = adjudicate(&g, y, z, |a, b| a.get(s) == b.get(s));
    let score = mean_ratio(&g, &c);
    Ok(MetricResult::new(MetricId::Zcap, score, score)
        .param("guesses", g.len())
        .param("correct", c.len()))
}

pub fn gcap(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    check_inputs(y, z)?;
    let (keys, s) = cfg.roles(y.schema())?;
    let g = gcap_guesses(y, z, &keys);
    let c = adjudicate(&g, y, z, |a, b| a.get(s) == b.get(s));
    let score = mean_ratio(&g, &c);
    Ok(MetricResult::new(MetricId::Gcap, score, score)
        .param("guesses", g.len())
        .param("correct", c.len()))
}

/// Equality for categorical and binary values; relative band around the
/// synthetic value for numerical ones.
fn sensitive_match(real: &Value, synth: &Value, band: f64) -> bool {
    match (real, synth) {
        (Value::Numerical(a), Value::Numerical(b)) => (a - b).abs() <= band * b.abs(),
        _ => real == synth,
    }
}

pub fn air<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    check_inputs(y, z)?;
    let (_, s) = cfg.roles(y.schema())?;
    let stats = ValueStats::new(y);
    let h = stats.entropy();
    if h <= 0.0 {
        return Err(MetricError::DegenerateEntropy);
    }
    let band = cfg.air_relative_band;
    let (yk, zk) = encode_pair::<T>(
        &y.project(&cfg.key_attributes)?,
        &z.project(&cfg.key_attributes)?,
        NumericScaling::MinMax,
    )?;
    let g = air_guesses(&yk, &zk)?;
    let c = adjudicate(&g, y, z, |a, b| sensitive_match(a.get(s), b.get(s), band));

    let mut tp = vec![false; y.len()];
    for m in &c.entries {
        tp[m.real] = true;
    }
    // FN(y): synthetic records carrying y's sensitive value, counted only when the guess failed
    let fn_count = |i: usize| -> usize {
        let v = y.record(i).get(s);
        z.records()
            .iter()
            .filter(|r| sensitive_match(v, r.get(s), band))
            .count()
    };

    let (score, note) = match cfg.air_f1_mode {
        AirF1Mode::PerRecord => {
            // every copy of a record has the same keys and hence the same guess
            let f1_of_row = |i: usize| if tp[i] { 1.0 } else { 0.0 };
            let weighted: f64 = stats
                .distinct_records()
                .iter()
                .map(|&(row, count)| {
                    let term = entropy_term(count as f64 / y.len() as f64);
                    term * f1_of_row(row)
                })
                .sum();
            (weighted / h, "per-record F1 from each record's nearest-neighbour guess")
        }
        AirF1Mode::Global => {
            let tp_total = tp.iter().filter(|&&t| t).count() as f64;
            let fp_total = y.len() as f64 - tp_total;
            let fn_total: f64 = (0..y.len()).filter(|&i| !tp[i]).map(|i| fn_count(i) as f64).sum();
            let f1 = if tp_total == 0.0 {
                0.0
            } else {
                2.0 * tp_total / (2.0 * tp_total + fp_total + fn_total)
            };
            (f1, "global F1 over all guesses; weights sum to one")
        }
    };
    let false_negatives: usize = (0..y.len()).filter(|&i| !tp[i]).map(fn_count).sum();
    Ok(MetricResult::new(MetricId::Air, score, score)
        .note(note)
        .param("entropy", h)
        .param("true_positives", c.len())
        .param("false_negatives", false_negatives))
}

pub fn crp(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    check_inputs(y, z)?;
    cfg.validate()?;
    let real: HashSet<&Record> = y.records().iter().collect();
    let common = z.records().iter().filter(|r| real.contains(r)).count();
    let raw = common as f64 / (y.len() as f64 + cfg.epsilon);
    let mut r = MetricResult::new(MetricId::Crp, raw, raw).param("common_rows", common);
    if r.clamped {
        r = r.note("more common synthetic rows than real rows; clamped to 1");
    }
    Ok(r)
}
