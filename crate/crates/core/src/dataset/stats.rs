use std::collections::HashMap;

use super::{Dataset, Record, Value};

/// Empirical frequencies of a (real) dataset.
///
/// `P(y)` counts exact duplicates of the full record. All logarithms are
/// natural and `0 * ln 0` is taken as 0.
#[derive(Debug, Clone)]
pub struct ValueStats {
    n: usize,
    /// Multiplicity of each row's record.
    multiplicity: Vec<usize>,
    /// (first row, count) per distinct record, in first-appearance order.
    distinct: Vec<(usize, usize)>,
    entropy: f64,
    attribute_counts: Vec<HashMap<Value, usize>>,
}

/// `-p ln p` with the `0 ln 0 = 0` convention.
pub fn entropy_term(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.ln()
    }
}

impl ValueStats {
    pub fn new(data: &Dataset) -> Self {
        let n = data.len();
        let mut index: HashMap<&Record, usize> = HashMap::new();
        let mut distinct: Vec<(usize, usize)> = Vec::new();
        let mut slot_of_row = Vec::with_capacity(n);
        for (row, rec) in data.records().iter().enumerate() {
            let slot = *index.entry(rec).or_insert_with(|| {
                distinct.push((row, 0));
                distinct.len() - 1
            });
            distinct[slot].1 += 1;
            slot_of_row.push(slot);
        }
        let multiplicity = slot_of_row.iter().map(|&s| distinct[s].1).collect();

        let nf = n as f64;
        let entropy = distinct
            .iter()
            .map(|&(_, c)| entropy_term(c as f64 / nf))
            .sum();

        let width = data.schema().len();
        let mut attribute_counts = vec![HashMap::new(); width];
        for rec in data.records() {
            for (a, v) in rec.values().iter().enumerate() {
                *attribute_counts[a].entry(v.clone()).or_insert(0) += 1;
            }
        }

        ValueStats {
            n,
            multiplicity,
            distinct,
            entropy,
            attribute_counts,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `P(y)` for the record at `row`.
    pub fn record_probability(&self, row: usize) -> f64 {
        self.multiplicity[row] as f64 / self.n as f64
    }

    pub fn multiplicity(&self, row: usize) -> usize {
        self.multiplicity[row]
    }

    /// Distinct records as (first row, count), first-appearance order.
    pub fn distinct_records(&self) -> &[(usize, usize)] {
        &self.distinct
    }

    /// `H(Y)`, summed over distinct records.
    pub fn entropy(&self) -> f64 {
        self.entropy
    }

    /// `P(Y[a] = v)`; zero for values never observed.
    pub fn value_probability(&self, attribute: usize, value: &Value) -> f64 {
        let count = self.attribute_counts[attribute]
            .get(value)
            .copied()
            .unwrap_or(0);
        count as f64 / self.n as f64
    }

    /// `H(a, v) = -P(Y[a]=v) ln P(Y[a]=v)`.
    pub fn value_entropy(&self, attribute: usize, value: &Value) -> f64 {
        entropy_term(self.value_probability(attribute, value))
    }

    /// Observed values of an attribute with their counts (unordered).
    pub fn value_counts(&self, attribute: usize) -> &HashMap<Value, usize> {
        &self.attribute_counts[attribute]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{load_dataset, Attribute, AttributeType, Role, Schema};

    fn tiny() -> Dataset {
        load_dataset(
            include_str!("../../../../fixtures/f_tiny_real.csv").as_bytes(),
            include_str!("../../../../fixtures/f_tiny.schema.json").as_bytes(),
            Role::Real,
        )
        .unwrap()
    }

    #[test]
    fn tiny_records_are_distinct() {
        let s = ValueStats::new(&tiny());
        for row in 0..4 {
            assert_eq!(s.record_probability(row), 0.25);
        }
        assert!((s.entropy() - 4f64.ln()).abs() < 1e-12);
        assert!((s.entropy() - 1.3863).abs() < 1e-4);
    }

    #[test]
    fn identical_records_have_zero_entropy() {
        let schema = Schema::new(vec![Attribute::new("x", AttributeType::Numerical)]).unwrap();
        let rec = Record::new(vec![Value::Numerical(1.0)]);
        let d = Dataset::new(schema, vec![rec.clone(), rec], Role::Real).unwrap();
        let s = ValueStats::new(&d);
        assert_eq!(s.record_probability(0), 1.0);
        assert_eq!(s.entropy(), 0.0);
    }

    #[test]
    fn per_value_entropy() {
        let s = ValueStats::new(&tiny());
        let m = Value::Categorical("M".into());
        let f = Value::Categorical("F".into());
        assert_eq!(s.value_probability(1, &m), 0.5);
        assert_eq!(s.value_probability(1, &f), 0.5);
        // 0.5 ln 2
        assert!((s.value_entropy(1, &m) - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert!((s.value_entropy(1, &m) - 0.3466).abs() < 1e-4);
        assert_eq!(s.value_entropy(1, &Value::Categorical("X".into())), 0.0);
        let total: f64 = s
            .value_counts(0)
            .values()
            .map(|&c| c as f64 / s.len() as f64)
            .sum();
        assert!((total - 1.0).abs() < 1e-15);
    }
}
