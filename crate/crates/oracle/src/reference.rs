use synth_audit::metrics::IdWeighting;
use synth_audit::{AttributeType, Dataset, MetricConfig, MetricId, Value};

use crate::encode::{encode, euclid, minkowski, Table};
use crate::pca::project;

/// Normalized score by brute force, or `None` where the metric is undefined
/// for these inputs. Classifier metrics are not covered.
pub fn reference_score(id: MetricId, y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Option<f64> {
    let all: Vec<usize> = (0..y.schema().len()).collect();
    match id {
        MetricId::Zcap => zcap(y, z, cfg),
        MetricId::Gcap => gcap(y, z, cfg),
        MetricId::Air => air(y, z, cfg),
        MetricId::Crp => Some(crp(y, z).min(1.0)),
        MetricId::Cvp | MetricId::Dvp | MetricId::Nsnd => {
            let (ey, ez) = encode(y, z, &all, true);
            Some(normalized_nn(id, &ey, &ez, cfg))
        }
        MetricId::Auth => {
            let (ey, ez) = encode(y, z, &all, true);
            if ey.len() < 2 {
                return None;
            }
            let n = (0..ey.len())
                .filter(|&i| nn_excluding(&ey[i], &ey, i) < nn(&ey[i], &ez))
                .count();
            Some(1.0 - n as f64 / ey.len() as f64)
        }
        MetricId::Identifiability => identifiability(y, z, cfg),
        MetricId::Nndr => {
            if y.len() < 2 {
                return None;
            }
            let (py, pz) = projected(y, z, cfg);
            let mut total = 0.0;
            for q in &pz {
                let mut d: Vec<f64> = py.iter().map(|r| euclid(q, r)).collect();
                d.sort_by(|a, b| a.partial_cmp(b).unwrap());
                total += if d[0] == 0.0 { 1.0 } else { d[0] / d[1] };
            }
            Some(total / pz.len() as f64)
        }
        MetricId::Dcr => {
            let (py, pz) = projected(y, z, cfg);
            let dcr = py.iter().map(|q| nn(q, &pz)).sum::<f64>() / py.len() as f64;
            let x = dcr.max(cfg.epsilon).ln();
            Some(1.0 - 1.0 / (1.0 + (-x).exp()))
        }
        MetricId::Mdcr => {
            let (ey, ez) = encode(y, z, &all, true);
            if ey.len() < 2 {
                return None;
            }
            let num = median(ey.iter().map(|q| nn(q, &ez)).collect());
            let den = median((0..ey.len()).map(|i| nn_excluding(&ey[i], &ey, i)).collect());
            let ratio = num / (den + cfg.epsilon);
            Some(1.0 / (1.0 + (-ratio).exp()))
        }
        MetricId::Nnaa => {
            // subsampling is seeded inside the main crate; only equal sizes are comparable
            if y.len() != z.len() || y.len() < 2 {
                return None;
            }
            let (ey, ez) = encode(y, z, &all, true);
            let n = ey.len() as f64;
            let t1 = (0..ey.len())
                .filter(|&i| nn(&ey[i], &ez) > nn_excluding(&ey[i], &ey, i))
                .count() as f64
                / n;
            let t2 = (0..ez.len())
                .filter(|&i| nn(&ez[i], &ey) > nn_excluding(&ez[i], &ez, i))
                .count() as f64
                / n;
            Some(1.0 - (t1 + t2) / 2.0)
        }
        MetricId::HiddenRate => {
            if y.len() != z.len() {
                return None;
            }
            let g: Vec<usize> = cfg.generation_map.clone().unwrap_or_else(|| (0..y.len()).collect());
            let (py, pz) = projected(y, z, cfg);
            let mut hits = 0;
            for (i, q) in py.iter().enumerate() {
                let mut best = 0;
                for j in 1..pz.len() {
                    if minkowski(q, &pz[j], cfg.minkowski_p) < minkowski(q, &pz[best], cfg.minkowski_p) {
                        best = j;
                    }
                }
                if best == g[i] {
                    hits += 1;
                }
            }
            Some(hits as f64 / z.len() as f64)
        }
        MetricId::HittingRate => Some(hitting_rate(y, z, cfg)),
        MetricId::Dmlp | MetricId::Mir => None,
    }
}

fn nn(q: &[f64], pool: &Table) -> f64 {
    pool.iter().map(|r| euclid(q, r)).fold(f64::INFINITY, f64::min)
}

fn nn_excluding(q: &[f64], pool: &Table, skip: usize) -> f64 {
    pool.iter()
        .enumerate()
        .filter(|(j, _)| *j != skip)
        .map(|(_, r)| euclid(q, r))
        .fold(f64::INFINITY, f64::min)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

fn projected(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> (Table, Table) {
    let all: Vec<usize> = (0..y.schema().len()).collect();
    let scale = cfg.projection_scaling == synth_audit::geometry::NumericScaling::MinMax;
    let (ey, ez) = encode(y, z, &all, scale);
    project(&ey, &ez, cfg.projection_k)
}

fn roles(y: &Dataset, cfg: &MetricConfig) -> Option<(Vec<usize>, usize)> {
    let s = y.schema().index_of(cfg.sensitive_attribute.as_deref()?)?;
    let keys: Option<Vec<usize>> = cfg.key_attributes.iter().map(|k| y.schema().index_of(k)).collect();
    let keys = keys?;
    if keys.is_empty() || keys.contains(&s) {
        return None;
    }
    Some((keys, s))
}

fn keys_equal(a: &synth_audit::Record, b: &synth_audit::Record, keys: &[usize]) -> bool {
    keys.iter().all(|&k| a.get(k) == b.get(k))
}

fn zcap(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Option<f64> {
    let (keys, s) = roles(y, cfg)?;
    let mut total = 0.0;
    for r in y.records() {
        let matches: Vec<_> = z.records().iter().filter(|q| keys_equal(r, q, &keys)).collect();
        let correct = matches.iter().filter(|q| q.get(s) == r.get(s)).count();
        total += correct as f64 / matches.len().max(1) as f64;
    }
    Some(total / y.len() as f64)
}

fn gcap(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Option<f64> {
    let (keys, s) = roles(y, cfg)?;
    let hamming = |a: &synth_audit::Record, b: &synth_audit::Record| keys.iter().filter(|&&k| a.get(k) != b.get(k)).count();
    let mut total = 0.0;
    for r in y.records() {
        let best = z.records().iter().map(|q| hamming(r, q)).min()?;
        let set: Vec<_> = z.records().iter().filter(|q| hamming(r, q) == best).collect();
        let correct = set.iter().filter(|q| q.get(s) == r.get(s)).count();
        total += correct as f64 / set.len() as f64;
    }
    Some(total / y.len() as f64)
}

fn sensitive_match(a: &Value, b: &Value, band: f64) -> bool {
    match (a, b) {
        (Value::Numerical(x), Value::Numerical(w)) => (x - w).abs() <= band * w.abs(),
        _ => a == b,
    }
}

fn air(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Option<f64> {
    let (keys, s) = roles(y, cfg)?;
    let n = y.len() as f64;
    let count = |r: &synth_audit::Record| y.records().iter().filter(|q| *q == r).count() as f64;
    let h: f64 = y
        .records()
        .iter()
        .map(|r| {
            let p = count(r) / n;
            -p * p.ln() / count(r)
        })
        .sum();
    if h <= 0.0 {
        return None;
    }
    let (ky, kz) = encode(y, z, &keys, true);
    let mut total = 0.0;
    for (i, r) in y.records().iter().enumerate() {
        let mut best = 0;
        for j in 1..kz.len() {
            if euclid(&ky[i], &kz[j]) < euclid(&ky[i], &kz[best]) {
                best = j;
            }
        }
        if sensitive_match(r.get(s), z.record(best).get(s), cfg.air_relative_band) {
            let p = count(r) / n;
            total += (-p * p.ln() / h) / count(r);
        }
    }
    Some(total)
}

fn crp(y: &Dataset, z: &Dataset) -> f64 {
    let common = z.records().iter().filter(|q| y.records().contains(q)).count();
    common as f64 / (y.len() as f64 + 1e-8)
}

fn normalized_nn(id: MetricId, ey: &Table, ez: &Table, cfg: &MetricConfig) -> f64 {
    let all: Vec<f64> = ey.iter().flat_map(|a| ez.iter().map(move |b| euclid(a, b))).collect();
    let lo = all.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = all.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        return match id {
            MetricId::Nsnd => 0.0,
            _ => 1.0,
        };
    }
    let d: Vec<f64> = ey.iter().map(|q| (nn(q, ez) - lo) / (hi - lo)).collect();
    let n = d.len() as f64;
    match id {
        MetricId::Cvp => d.iter().filter(|&&v| v <= cfg.cvp_threshold).count() as f64 / n,
        MetricId::Dvp => 1.0 - d.iter().filter(|&&v| v >= cfg.dvp_threshold).count() as f64 / n,
        _ => d.iter().sum::<f64>() / n,
    }
}

fn identifiability(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Option<f64> {
    if y.len() < 2 {
        return None;
    }
    let all: Vec<usize> = (0..y.schema().len()).collect();
    let (ey, ez) = encode(y, z, &all, true);
    let n = ey.len() as f64;
    let width = ey[0].len();
    let h = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    let freq = |c: usize, v: f64| ey.iter().filter(|r| r[c] == v).count() as f64 / n;
    let attribute_entropy = |c: usize| {
        let mut seen: Vec<f64> = Vec::new();
        for r in &ey {
            if !seen.contains(&r[c]) {
                seen.push(r[c]);
            }
        }
        seen.iter().map(|&v| h(freq(c, v))).sum::<f64>()
    };
    let column_h: Vec<f64> = (0..width).map(attribute_entropy).collect();
    let weigh = |t: &Table| -> Table {
        t.iter()
            .map(|r| {
                (0..width)
                    .map(|c| {
                        let hv = match cfg.id_weighting {
                            IdWeighting::PerValue => h(freq(c, r[c])),
                            IdWeighting::PerAttribute => column_h[c],
                        };
                        let w = 1.0 / (hv + cfg.epsilon);
                        r[c] / (w + cfg.epsilon)
                    })
                    .collect()
            })
            .collect()
    };
    let (wy, wz) = (weigh(&ey), weigh(&ez));
    let hits = (0..wy.len())
        .filter(|&i| nn(&wy[i], &wz) < nn_excluding(&wy[i], &wy, i))
        .count();
    Some(hits as f64 / n)
}

fn hitting_rate(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> f64 {
    let schema = y.schema();
    let mut hit = 0;
    for r in y.records() {
        let matched = z.records().iter().any(|q| {
            (0..schema.len()).all(|a| match schema.kind(a) {
                AttributeType::Numerical => {
                    let col: Vec<f64> = y.records().iter().map(|t| t.get(a).as_f64().unwrap()).collect();
                    let max = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    let min = col.iter().cloned().fold(f64::INFINITY, f64::min);
                    (r.get(a).as_f64().unwrap() - q.get(a).as_f64().unwrap()).abs() <= (max - min) / cfg.hitr_divisor
                }
                _ => r.get(a) == q.get(a),
            })
        });
        if matched {
            hit += 1;
        }
    }
    hit as f64 / y.len() as f64
}
