use rand::seq::SliceRandom;
use rand::Rng;
use synth_audit::metrics::IdWeighting;
use synth_audit::{Attribute, AttributeType, Dataset, MetricConfig, Record, Role, Schema, Value};

#[derive(Debug, Clone)]
pub struct Instance {
    pub y: Dataset,
    pub z: Dataset,
    pub config: MetricConfig,
}

fn draw_value<R: Rng>(rng: &mut R, kind: AttributeType, alphabet: usize) -> Value {
    match kind {
        AttributeType::Numerical => Value::Numerical(rng.gen_range(-5.0..20.0)),
        AttributeType::Binary => Value::Binary(rng.gen_range(0..2)),
        AttributeType::Categorical => {
            Value::Categorical(((b'a' + rng.gen_range(0..alphabet) as u8) as char).to_string())
        }
    }
}

/// Random mixed-type pair with a role assignment and randomized options.
///
/// Every instance has at least one continuous column, so distinct records
/// are at distinct distances almost surely. About a fifth of the synthetic
/// rows are verbatim copies of real rows, and synthetic categoricals may
/// use one category absent from the real data.
pub fn random_instance<R: Rng>(rng: &mut R, max_n: usize) -> Instance {
    let max_n = max_n.max(3);
    let mut kinds = vec![AttributeType::Numerical; rng.gen_range(1..=2)];
    kinds.extend(vec![AttributeType::Categorical; rng.gen_range(0..=2)]);
    kinds.extend(vec![AttributeType::Binary; rng.gen_range(0..=1)]);
    if kinds.len() < 2 {
        kinds.push(AttributeType::Categorical);
    }
    kinds.shuffle(rng);
    let schema = Schema::new(
        kinds
            .iter()
            .enumerate()
            .map(|(i, &k)| Attribute::new(format!("a{i}"), k))
            .collect(),
    )
    .expect("valid schema");
    let alphabet: Vec<usize> = kinds.iter().map(|_| rng.gen_range(2..=4)).collect();

    let ny = rng.gen_range(3..=max_n);
    let nz = if rng.gen_bool(0.5) { ny } else { rng.gen_range(3..=max_n) };
    let real: Vec<Record> = (0..ny)
        .map(|_| Record::new(kinds.iter().zip(&alphabet).map(|(&k, &a)| draw_value(rng, k, a)).collect()))
        .collect();
    let synth: Vec<Record> = (0..nz)
        .map(|_| {
            if rng.gen_bool(0.2) {
                real[rng.gen_range(0..ny)].clone()
            } else {
                Record::new(
                    kinds
                        .iter()
                        .zip(&alphabet)
                        .map(|(&k, &a)| draw_value(rng, k, a + 1))
                        .collect(),
                )
            }
        })
        .collect();

    let names: Vec<String> = schema.names().map(str::to_string).collect();
    let sensitive = rng.gen_range(0..names.len());
    let mut others: Vec<usize> = (0..names.len()).filter(|&i| i != sensitive).collect();
    // discrete keys make guess sets non-trivial; continuous keys are kept occasionally
    let discrete: Vec<usize> = others
        .iter()
        .copied()
        .filter(|&i| kinds[i] != AttributeType::Numerical)
        .collect();
    if !discrete.is_empty() && rng.gen_bool(0.8) {
        others = discrete;
    }
    others.shuffle(rng);
    let take = rng.gen_range(1..=others.len());
    let mut keys: Vec<usize> = others[..take].to_vec();
    keys.sort_unstable();

    let generation_map = (ny == nz && rng.gen_bool(0.5)).then(|| {
        let mut g: Vec<usize> = (0..nz).collect();
        g.shuffle(rng);
        g
    });
    let config = MetricConfig {
        key_attributes: keys.iter().map(|&i| names[i].clone()).collect(),
        sensitive_attribute: Some(names[sensitive].clone()),
        minkowski_p: *[1.0, 2.0, 3.0].choose(rng).expect("non-empty"),
        projection_k: rng.gen_bool(0.3).then_some(1),
        id_weighting: if rng.gen_bool(0.5) {
            IdWeighting::PerValue
        } else {
            IdWeighting::PerAttribute
        },
        seed: rng.gen(),
        generation_map,
        ..MetricConfig::default()
    };
    Instance {
        y: Dataset::new(schema.clone(), real, Role::Real).expect("valid real data"),
        z: Dataset::new(schema, synth, Role::Synthetic).expect("valid synthetic data"),
        config,
    }
}
