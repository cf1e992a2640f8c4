use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::attack::check_inputs;
use super::matching::{auth_triples, cvp_matches};
use super::{IdWeighting, MetricConfig, MetricError, MetricId, MetricResult};
use crate::classify::derive_seed;
use crate::dataset::{entropy_term, Dataset};
use crate::geometry::{
    distance_extrema, encode_pair, fit_projection, nearest_all, nearest_two_all, EncodedMatrix, Kernel,
    NumericScaling,
};
use crate::scalar::{median, sigmoid, Scalar};

type Pair<T> = (EncodedMatrix<T>, EncodedMatrix<T>);

fn need_real(y: &Dataset, needed: usize) -> Result<(), MetricError> {
    if y.len() < needed {
        return Err(MetricError::InsufficientRealRecords {
            needed,
            found: y.len(),
        });
    }
    Ok(())
}

fn encoded<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<Pair<T>, MetricError> {
    check_inputs(y, z)?;
    cfg.validate()?;
    Ok(encode_pair(y, z, NumericScaling::MinMax)?)
}

/// Both datasets in the projected space.
fn projected<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<(Pair<T>, usize), MetricError> {
    check_inputs(y, z)?;
    cfg.validate()?;
    let (ey, ez) = encode_pair::<T>(y, z, cfg.projection_scaling)?;
    let model = fit_projection(&ey, &ez, cfg.projection_k)?;
    Ok((
        (model.project_matrix(&ey)?, model.project_matrix(&ez)?),
        model.k(),
    ))
}

fn fraction(count: usize, total: usize) -> f64 {
    count as f64 / total as f64
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

/// Real-to-nearest-synthetic distances rescaled by the pairwise extrema.
/// `None` when every real/synthetic pair is equally distant.
fn normalized_nn<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<Option<Vec<f64>>, MetricError> {
    let (ey, ez) = encoded::<T>(y, z, cfg)?;
    let c = cvp_matches(&ey, &ez)?;
    let (lo, hi) = distance_extrema(&ey, &ez)?;
    let (lo, hi) = (lo.as_f64(), hi.as_f64());
    if hi <= lo {
        return Ok(None);
    }
    Ok(Some(c.entries.iter().map(|m| (m.distance - lo) / (hi - lo)).collect()))
}

const DEGENERATE_EXTREMA: &str = "all real/synthetic distances equal; normalization undefined";

pub fn cvp<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    let r = match normalized_nn::<T>(y, z, cfg)? {
        Some(d) => {
            let s = fraction(d.iter().filter(|&&v| v <= cfg.cvp_threshold).count(), d.len());
            MetricResult::new(MetricId::Cvp, s, s)
        }
        None => MetricResult::new(MetricId::Cvp, 1.0, 1.0).note(DEGENERATE_EXTREMA),
    };
    Ok(r.param("threshold", cfg.cvp_threshold))
}

pub fn dvp<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    let r = match normalized_nn::<T>(y, z, cfg)? {
        Some(d) => {
            let s = fraction(d.iter().filter(|&&v| v >= cfg.dvp_threshold).count(), d.len());
            MetricResult::new(MetricId::Dvp, s, 1.0 - s)
        }
        None => MetricResult::new(MetricId::Dvp, 0.0, 1.0).note(DEGENERATE_EXTREMA),
    };
    Ok(r.param("threshold", cfg.dvp_threshold))
}

pub fn nsnd<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    Ok(match normalized_nn::<T>(y, z, cfg)? {
        Some(d) => {
            let s = mean(d.into_iter());
            MetricResult::new(MetricId::Nsnd, s, s)
        }
        None => MetricResult::new(MetricId::Nsnd, 0.0, 0.0).note(DEGENERATE_EXTREMA),
    })
}

pub fn auth<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    let (ey, ez) = encoded::<T>(y, z, cfg)?;
    need_real(y, 2)?;
    let t = auth_triples(&ey, &ez)?;
    let real_closer = t
        .entries
        .iter()
        .filter(|m| m.companion.is_some_and(|(_, d)| d < m.distance))
        .count();
    let a = fraction(real_closer, y.len());
    Ok(MetricResult::new(MetricId::Auth, a, 1.0 - a))
}

/// Rescales every encoded cell by its entropy weight over `y`.
fn entropy_weighted<T: Scalar>(ey: &EncodedMatrix<T>, ez: &EncodedMatrix<T>, mode: IdWeighting, eps: f64) -> Pair<T> {
    let n = ey.rows() as f64;
    let key = |v: T| (v.as_f64() + 0.0).to_bits();
    let mut counts: Vec<HashMap<u64, usize>> = vec![HashMap::new(); ey.width()];
    for row in ey.iter_rows() {
        for (c, &v) in row.iter().enumerate() {
            *counts[c].entry(key(v)).or_insert(0) += 1;
        }
    }
    let column_entropy: Vec<f64> = counts
        .iter()
        .map(|m| m.values().map(|&k| entropy_term(k as f64 / n)).sum())
        .collect();
    let weight = |c: usize, v: T| -> f64 {
        let h = match mode {
            IdWeighting::PerValue => {
                let k = counts[c].get(&key(v)).copied().unwrap_or(0);
                entropy_term(k as f64 / n)
            }
            IdWeighting::PerAttribute => column_entropy[c],
        };
        1.0 / (h + eps)
    };
    let scale = |c: usize, v: T| T::of(v.as_f64() / (weight(c, v) + eps));
    (ey.map_cells(scale), ez.map_cells(scale))
}

pub fn identifiability<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    let (ey, ez) = encoded::<T>(y, z, cfg)?;
    need_real(y, 2)?;
    let (wy, wz) = entropy_weighted(&ey, &ez, cfg.id_weighting, cfg.epsilon);
    let syn = nearest_all(&wy, &wz, false, Kernel::Euclidean)?;
    let real = nearest_all(&wy, &wy, true, Kernel::Euclidean)?;
    let hits = syn.iter().zip(&real).filter(|(s, r)| s.distance < r.distance).count();
    let s = fraction(hits, y.len());
    let mode = match cfg.id_weighting {
        IdWeighting::PerValue => "per-value",
        IdWeighting::PerAttribute => "per-attribute",
    };
    Ok(MetricResult::new(MetricId::Identifiability, s, s).param("weighting", mode))
}

pub fn nndr<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    check_inputs(y, z)?;
    need_real(y, 2)?;
    let ((py, pz), k) = projected::<T>(y, z, cfg)?;
    let pairs = nearest_two_all(&pz, &py, Kernel::Euclidean)?;
    let s = mean(pairs.iter().map(|(a, b)| {
        let (d1, d2) = (a.distance.as_f64(), b.distance.as_f64());
        if d1 == 0.0 {
            1.0
        } else {
            d1 / d2
        }
    }));
    Ok(MetricResult::new(MetricId::Nndr, s, s).param("components", k))
}

pub fn dcr<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    let ((py, pz), k) = projected::<T>(y, z, cfg)?;
    let nn = nearest_all(&py, &pz, false, Kernel::Euclidean)?;
    let d = mean(nn.iter().map(|n| n.distance.as_f64()));
    let normalized = 1.0 - sigmoid(d.max(cfg.epsilon).ln());
    Ok(MetricResult::new(MetricId::Dcr, d, normalized).param("components", k))
}

pub fn mdcr<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    let (ey, ez) = encoded::<T>(y, z, cfg)?;
    need_real(y, 2)?;
    let to_synth: Vec<f64> = nearest_all(&ey, &ez, false, Kernel::Euclidean)?
        .iter()
        .map(|n| n.distance.as_f64())
        .collect();
    let to_real: Vec<f64> = nearest_all(&ey, &ey, true, Kernel::Euclidean)?
        .iter()
        .map(|n| n.distance.as_f64())
        .collect();
    let num = median(&to_synth).expect("non-empty");
    let den = median(&to_real).expect("non-empty");
    let ratio = num / (den + cfg.epsilon);
    let mut r = MetricResult::new(MetricId::Mdcr, ratio, sigmoid(ratio));
    if den == 0.0 {
        r = r.note("median real-to-real distance is zero; ratio guarded by epsilon");
    }
    Ok(r)
}

fn sorted_sample(n: usize, m: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = rand::seq::index::sample(&mut rng, n, m).into_vec();
    idx.sort_unstable();
    idx
}

fn farther_fraction<T: Scalar>(queries: &EncodedMatrix<T>, other: &EncodedMatrix<T>) -> Result<f64, MetricError> {
    let cross = nearest_all(queries, other, false, Kernel::Euclidean)?;
    let own = nearest_all(queries, queries, true, Kernel::Euclidean)?;
    let count = cross.iter().zip(&own).filter(|(c, o)| c.distance > o.distance).count();
    Ok(fraction(count, queries.rows()))
}

pub fn nnaa<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    let (mut ey, mut ez) = encoded::<T>(y, z, cfg)?;
    let m = y.len().min(z.len());
    if m < 2 {
        return Err(if y.len() < 2 {
            MetricError::InsufficientRealRecords { needed: 2, found: y.len() }
        } else {
            MetricError::InsufficientSyntheticRecords { needed: 2, found: z.len() }
        });
    }
    let seed = derive_seed(cfg.seed, MetricId::Nnaa as u64);
    let mut notes = vec!["the two adversarial terms are averaged so NNAA lies in [0, 1]".to_string()];
    if ey.rows() > m {
        ey = ey.select_rows(&sorted_sample(ey.rows(), m, seed));
        notes.push(format!("real set subsampled to {m} rows"));
    } else if ez.rows() > m {
        ez = ez.select_rows(&sorted_sample(ez.rows(), m, seed));
        notes.push(format!("synthetic set subsampled to {m} rows"));
    }
    let real_term = farther_fraction(&ey, &ez)?;
    let synth_term = farther_fraction(&ez, &ey)?;
    let a = (real_term + synth_term) / 2.0;
    let mut r = MetricResult::new(MetricId::Nnaa, a, 1.0 - a).param("rows_per_side", m);
    for n in notes {
        r = r.note(n);
    }
    Ok(r)
}

/// Synthetic row generated from each real row.
fn generation_map(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<Vec<usize>, MetricError> {
    match &cfg.generation_map {
        None if y.len() == z.len() => Ok((0..y.len()).collect()),
        None => Err(MetricError::MissingGenerationMap {
            real: y.len(),
            synth: z.len(),
        }),
        Some(map) => {
            if map.len() != y.len() || y.len() != z.len() {
                return Err(MetricError::InvalidGenerationMap(format!(
                    "map has {} entries for {} real and {} synthetic rows",
                    map.len(),
                    y.len(),
                    z.len()
                )));
            }
            let mut seen = vec![false; z.len()];
            for (i, &j) in map.iter().enumerate() {
                if j >= z.len() {
                    return Err(MetricError::InvalidGenerationMap(format!(
                        "real row {i} maps to synthetic row {j}, out of range"
                    )));
                }
                if std::mem::replace(&mut seen[j], true) {
                    return Err(MetricError::InvalidGenerationMap(format!(
                        "synthetic row {j} is mapped more than once"
                    )));
                }
            }
            Ok(map.clone())
        }
    }
}

pub fn hidden_rate<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    check_inputs(y, z)?;
    let g = generation_map(y, z, cfg)?;
    let kernel = Kernel::minkowski(cfg.minkowski_p)?;
    let ((py, pz), k) = projected::<T>(y, z, cfg)?;
    let nn = nearest_all(&py, &pz, false, kernel)?;
    let hits = nn.iter().enumerate().filter(|(i, n)| n.index == g[*i]).count();
    let s = fraction(hits, z.len());
    Ok(MetricResult::new(MetricId::HiddenRate, s, s)
        .param("minkowski_p", cfg.minkowski_p)
        .param("components", k)
        .param(
            "generation_map",
            if cfg.generation_map.is_some() { "explicit" } else { "index" },
        ))
}

pub fn hitting_rate(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    check_inputs(y, z)?;
    cfg.validate()?;
    let width = y.schema().len();
    let tolerance: Vec<Option<f64>> = (0..width)
        .map(|a| {
            y.numeric_column(a).map(|col| {
                let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (hi - lo) / cfg.hitr_divisor
            })
        })
        .collect();
    let close = |a: &crate::dataset::Record, b: &crate::dataset::Record| {
        (0..width).all(|i| match tolerance[i] {
            Some(h) => {
                let (u, v) = (a.get(i).as_f64().unwrap_or(0.0), b.get(i).as_f64().unwrap_or(0.0));
                (u - v).abs() <= h
            }
            None => a.get(i) == b.get(i),
        })
    };
    let hit = y
        .records()
        .iter()
        .filter(|r| z.records().iter().any(|s| close(r, s)))
        .count();
    let s = fraction(hit, y.len());
    Ok(MetricResult::new(MetricId::HittingRate, s, s).param("divisor", cfg.hitr_divisor))
}
