use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use synth_audit::metrics::{cvp, dcr, hidden_rate, nndr};
use synth_audit::{
    evaluate_all, Attribute, AttributeType, Dataset, MetricConfig, MetricId, Record, Role, Schema, Value,
};

fn schema() -> Schema {
    Schema::new(vec![
        Attribute::new("income", AttributeType::Numerical),
        Attribute::new("height", AttributeType::Numerical),
        Attribute::new("city", AttributeType::Categorical),
        Attribute::new("owner", AttributeType::Binary),
    ])
    .unwrap()
}

fn rows<R: Rng>(rng: &mut R, n: usize) -> Vec<Record> {
    (0..n)
        .map(|_| {
            Record::new(vec![
                Value::Numerical(rng.gen_range(0.0..100.0)),
                Value::Numerical(rng.gen_range(150.0..200.0)),
                Value::Categorical(["a", "b", "c"][rng.gen_range(0..3)].to_string()),
                Value::Binary(rng.gen_range(0..2)),
            ])
        })
        .collect()
}

fn pair(seed: u64, n: usize) -> (Vec<Record>, Vec<Record>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = rows(&mut rng, n);
    let mut z = rows(&mut rng, n);
    // a few verbatim copies so exact-match metrics are non-trivial
    for i in (0..n).step_by(5) {
        z[i] = y[(i * 7) % n].clone();
    }
    (y, z)
}

fn dataset(records: Vec<Record>, role: Role) -> Dataset {
    Dataset::new(schema(), records, role).unwrap()
}

/// A continuous key keeps the key-space neighbour search free of ties.
fn config(g: Vec<usize>) -> MetricConfig {
    MetricConfig {
        generation_map: Some(g),
        ..MetricConfig::with_roles(["height", "city"], "income")
    }
}

/// Everything except the classifier metrics, whose folds follow row order.
fn order_free() -> Vec<MetricId> {
    MetricId::ALL.iter().copied().filter(|id| !id.uses_classifier()).collect()
}

fn scores(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Vec<(MetricId, f64)> {
    evaluate_all(y, z, cfg, &order_free())
        .into_iter()
        .map(|e| (e.id, e.outcome.expect("tie-free data scores every metric").normalized_score))
        .collect()
}

#[test]
fn row_order_does_not_matter() {
    for seed in 0..10 {
        let n = 25;
        let (y, z) = pair(seed, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
        let mut g: Vec<usize> = (0..n).collect();
        g.shuffle(&mut rng);
        let base = scores(&dataset(y.clone(), Role::Real), &dataset(z.clone(), Role::Synthetic), &config(g.clone()));

        let mut pi: Vec<usize> = (0..n).collect();
        let mut sigma: Vec<usize> = (0..n).collect();
        pi.shuffle(&mut rng);
        sigma.shuffle(&mut rng);
        let mut sigma_inv = vec![0; n];
        for (m, &s) in sigma.iter().enumerate() {
            sigma_inv[s] = m;
        }
        let y2: Vec<Record> = pi.iter().map(|&k| y[k].clone()).collect();
        let z2: Vec<Record> = sigma.iter().map(|&m| z[m].clone()).collect();
        let g2: Vec<usize> = pi.iter().map(|&k| sigma_inv[g[k]]).collect();
        let shuffled = scores(&dataset(y2, Role::Real), &dataset(z2, Role::Synthetic), &config(g2));

        for ((id, a), (_, b)) in base.iter().zip(&shuffled) {
            assert!((a - b).abs() <= 1e-12, "seed {seed} {id}: {a} vs {b}");
        }
    }
}

#[test]
fn evaluate_all_is_deterministic() {
    let (y, z) = pair(3, 40);
    let (y, z) = (dataset(y, Role::Real), dataset(z, Role::Synthetic));
    let cfg = MetricConfig::with_roles(["city"], "owner");
    let strip = |entries: Vec<synth_audit::MetricEntry>| -> Vec<String> {
        entries
            .into_iter()
            .map(|e| format!("{} {:?}", e.id, e.outcome.map(|r| (r.raw_score.to_bits(), r.normalized_score.to_bits(), r.notes, r.params))))
            .collect()
    };
    let first = strip(evaluate_all(&y, &z, &cfg, &[]));
    let second = strip(evaluate_all(&y, &z, &cfg, &[]));
    assert_eq!(first.len(), 17);
    assert_eq!(first, second);
}

#[test]
fn results_follow_canonical_order() {
    let (y, z) = pair(4, 12);
    let (y, z) = (dataset(y, Role::Real), dataset(z, Role::Synthetic));
    let cfg = MetricConfig::with_roles(["city"], "owner");
    let ids: Vec<MetricId> = evaluate_all(&y, &z, &cfg, &[MetricId::HittingRate, MetricId::Zcap, MetricId::Zcap])
        .into_iter()
        .map(|e| e.id)
        .collect();
    assert_eq!(ids, vec![MetricId::Zcap, MetricId::HittingRate]);
}

#[test]
fn missing_roles_only_fail_role_metrics() {
    let (y, z) = pair(5, 15);
    let (y, z) = (dataset(y, Role::Real), dataset(z, Role::Synthetic));
    let entries = evaluate_all(&y, &z, &MetricConfig::default(), &[]);
    for e in entries {
        let needs_roles = matches!(e.id, MetricId::Zcap | MetricId::Gcap | MetricId::Air);
        assert_eq!(e.outcome.is_err(), needs_roles, "{}", e.id);
    }
}

#[test]
fn single_precision_tracks_double() {
    let (y, z) = pair(6, 30);
    let (y, z) = (dataset(y, Role::Real), dataset(z, Role::Synthetic));
    let cfg = MetricConfig::default();
    let pairs = [
        (cvp::<f32>(&y, &z, &cfg).unwrap(), cvp::<f64>(&y, &z, &cfg).unwrap()),
        (nndr::<f32>(&y, &z, &cfg).unwrap(), nndr::<f64>(&y, &z, &cfg).unwrap()),
        (dcr::<f32>(&y, &z, &cfg).unwrap(), dcr::<f64>(&y, &z, &cfg).unwrap()),
        (hidden_rate::<f32>(&y, &z, &cfg).unwrap(), hidden_rate::<f64>(&y, &z, &cfg).unwrap()),
    ];
    for (single, double) in pairs {
        assert!(
            (single.normalized_score - double.normalized_score).abs() < 1e-3,
            "{}: {} vs {}",
            double.id,
            single.normalized_score,
            double.normalized_score
        );
    }
}
