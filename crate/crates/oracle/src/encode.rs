use synth_audit::{Dataset, Value};

pub type Table = Vec<Vec<f64>>;

/// One-hot categoricals over the categories of `y` then `z`, binaries as 0/1,
/// numerics optionally min-max scaled on `y`'s range.
pub fn encode(y: &Dataset, z: &Dataset, attrs: &[usize], min_max: bool) -> (Table, Table) {
    let mut columns: Vec<Box<dyn Fn(&Value) -> Vec<f64>>> = Vec::new();
    for &a in attrs {
        match y.record(0).get(a) {
            Value::Numerical(_) => {
                let vals: Vec<f64> = y.records().iter().map(|r| r.get(a).as_f64().unwrap()).collect();
                let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                columns.push(Box::new(move |v| {
                    let x = v.as_f64().unwrap();
                    if !min_max {
                        vec![x]
                    } else if hi > lo {
                        vec![(x - lo) / (hi - lo)]
                    } else {
                        vec![0.0]
                    }
                }));
            }
            Value::Binary(_) => columns.push(Box::new(|v| vec![v.as_f64().unwrap()])),
            Value::Categorical(_) => {
                let mut cats: Vec<String> = Vec::new();
                for r in y.records().iter().chain(z.records()) {
                    if let Value::Categorical(c) = r.get(a) {
                        if !cats.contains(c) {
                            cats.push(c.clone());
                        }
                    }
                }
                columns.push(Box::new(move |v| match v {
                    Value::Categorical(c) => cats.iter().map(|k| if k == c { 1.0 } else { 0.0 }).collect(),
                    _ => unreachable!(),
                }));
            }
        }
    }
    let table = |d: &Dataset| -> Table {
        d.records()
            .iter()
            .map(|r| {
                attrs
                    .iter()
                    .zip(&columns)
                    .flat_map(|(&a, f)| f(r.get(a)))
                    .collect()
            })
            .collect()
    };
    (table(y), table(z))
}

pub fn euclid(u: &[f64], v: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..u.len() {
        s += (u[i] - v[i]) * (u[i] - v[i]);
    }
    s.sqrt()
}

pub fn minkowski(u: &[f64], v: &[f64], p: f64) -> f64 {
    let mut s = 0.0;
    for i in 0..u.len() {
        s += (u[i] - v[i]).abs().powf(p);
    }
    s.powf(1.0 / p)
}
