use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::dataset::{AttributeType, Dataset, Schema, Value};
use crate::scalar::Scalar;

/// How numerical attributes are placed in the vector space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NumericScaling {
    /// `(v - min) / (max - min)` with the real data's bounds; constant columns map to 0.
    #[default]
    MinMax,
    /// Values pass through unchanged.
    Raw,
}

/// Columns occupied by one attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSpan {
    pub attribute: String,
    pub kind: AttributeType,
    pub start: usize,
    pub len: usize,
    /// One-hot order for categorical attributes.
    pub categories: Vec<String>,
}

/// Dense row-major matrix of encoded records.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedMatrix<T> {
    data: Vec<T>,
    rows: usize,
    width: usize,
    spans: Arc<Vec<ColumnSpan>>,
}

impl<T: Scalar> EncodedMatrix<T> {
    /// Matrix from plain vectors, without an attribute column map.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, GeometryError> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(GeometryError::WidthMismatch {
                left: width,
                right: rows.iter().map(Vec::len).find(|&w| w != width).unwrap_or(0),
            });
        }
        let n = rows.len();
        Ok(EncodedMatrix {
            data: rows.into_iter().flatten().collect(),
            rows: n,
            width,
            spans: Arc::new(Vec::new()),
        })
    }

    pub fn from_flat(data: Vec<T>, width: usize) -> Self {
        assert!(width > 0 && data.len() % width == 0, "ragged flat matrix");
        EncodedMatrix {
            rows: data.len() / width,
            data,
            width,
            spans: Arc::new(Vec::new()),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.data.chunks_exact(self.width.max(1)).take(self.rows)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn spans(&self) -> &[ColumnSpan] {
        &self.spans
    }

    /// Applies `f(column, value)` to every cell.
    pub fn map_cells(&self, mut f: impl FnMut(usize, T) -> T) -> Self {
        let width = self.width;
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(i, &v)| f(i % width, v))
            .collect();
        EncodedMatrix {
            data,
            rows: self.rows,
            width,
            spans: Arc::clone(&self.spans),
        }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn concat(&self, other: &Self) -> Result<Self, GeometryError> {
        check_width(self.width, other.width)?;
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(EncodedMatrix {
            data,
            rows: self.rows + other.rows,
            width: self.width,
            spans: Arc::clone(&self.spans),
        })
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.width);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        EncodedMatrix {
            data,
            rows: rows.len(),
            width: self.width,
            spans: Arc::clone(&self.spans),
        }
    }
}

pub(crate) fn check_width(left: usize, right: usize) -> Result<(), GeometryError> {
    if left != right {
        Err(GeometryError::WidthMismatch { left, right })
    } else {
        Ok(())
    }
}

/// Encoding parameters fitted on the real dataset plus the category universe
/// of every dataset that will be encoded with it.
#[derive(Debug, Clone)]
pub struct Encoder {
    schema: Schema,
    spans: Arc<Vec<ColumnSpan>>,
    /// (min, max) of each numerical attribute over the fit data.
    ranges: Vec<Option<(f64, f64)>>,
    scaling: NumericScaling,
    width: usize,
}

impl Encoder {
    /// Scaling bounds come from `fit_on`; categories are the union over
    /// `fit_on` and `others`, in first-appearance order.
    pub fn fit(
        fit_on: &Dataset,
        others: &[&Dataset],
        scaling: NumericScaling,
    ) -> Result<Self, GeometryError> {
        for d in others {
            if d.schema() != fit_on.schema() {
                return Err(GeometryError::SchemaMismatch);
            }
        }
        let schema = fit_on.schema().clone();
        let mut spans = Vec::with_capacity(schema.len());
        let mut ranges = Vec::with_capacity(schema.len());
        let mut start = 0;
        for (a, attr) in schema.attributes().iter().enumerate() {
            let (len, categories, range) = match attr.kind {
                AttributeType::Numerical => {
                    let col = fit_on.numeric_column(a).expect("numerical column");
                    let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
                    let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    (1, Vec::new(), Some((lo, hi)))
                }
                AttributeType::Binary => (1, Vec::new(), None),
                AttributeType::Categorical => {
                    let mut cats: Vec<String> = Vec::new();
                    for d in std::iter::once(fit_on).chain(others.iter().copied()) {
                        for r in d.records() {
                            if let Value::Categorical(c) = r.get(a) {
                                if !cats.contains(c) {
                                    cats.push(c.clone());
                                }
                            }
                        }
                    }
                    (cats.len(), cats, None)
                }
            };
            spans.push(ColumnSpan {
                attribute: attr.name.clone(),
                kind: attr.kind,
                start,
                len,
                categories,
            });
            ranges.push(range);
            start += len;
        }
        Ok(Encoder {
            schema,
            spans: Arc::new(spans),
            ranges,
            scaling,
            width: start,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn spans(&self) -> &[ColumnSpan] {
        &self.spans
    }

    pub fn transform<T: Scalar>(&self, d: &Dataset) -> Result<EncodedMatrix<T>, GeometryError> {
        if d.schema() != &self.schema {
            return Err(GeometryError::SchemaMismatch);
        }
        let mut data = vec![T::zero(); d.len() * self.width];
        for (i, rec) in d.records().iter().enumerate() {
            let row = &mut data[i * self.width..(i + 1) * self.width];
            for (a, span) in self.spans.iter().enumerate() {
                match rec.get(a) {
                    Value::Numerical(v) => {
                        let scaled = match (self.scaling, self.ranges[a]) {
                            (NumericScaling::MinMax, Some((lo, hi))) => {
                                if hi > lo {
                                    (v - lo) / (hi - lo)
                                } else {
                                    0.0
                                }
                            }
                            _ => *v,
                        };
                        row[span.start] = T::of(scaled);
                    }
                    Value::Binary(b) => row[span.start] = T::of(f64::from(*b)),
                    Value::Categorical(c) => {
                        let k = span.categories.iter().position(|x| x == c).ok_or_else(|| {
                            GeometryError::UnknownCategory {
                                attribute: span.attribute.clone(),
                                value: c.clone(),
                            }
                        })?;
                        row[span.start + k] = T::one();
                    }
                }
            }
        }
        Ok(EncodedMatrix {
            data,
            rows: d.len(),
            width: self.width,
            spans: Arc::clone(&self.spans),
        })
    }
}

/// Encodes `d` with min-max bounds fitted on `fit_on` and categories from both.
pub fn encode<T: Scalar>(d: &Dataset, fit_on: &Dataset) -> Result<EncodedMatrix<T>, GeometryError> {
    Encoder::fit(fit_on, &[d], NumericScaling::MinMax)?.transform(d)
}

/// Encodes a real/synthetic pair with one shared encoder.
pub fn encode_pair<T: Scalar>(
    real: &Dataset,
    synth: &Dataset,
    scaling: NumericScaling,
) -> Result<(EncodedMatrix<T>, EncodedMatrix<T>), GeometryError> {
    let enc = Encoder::fit(real, &[synth], scaling)?;
    Ok((enc.transform(real)?, enc.transform(synth)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{load_dataset, Role};

    fn load(csv: &str, schema: &str, role: Role) -> Dataset {
        load_dataset(csv.as_bytes(), schema.as_bytes(), role).unwrap()
    }

    fn tiny() -> (Dataset, Dataset) {
        let s = include_str!("../../../../fixtures/f_tiny.schema.json");
        (
            load(include_str!("../../../../fixtures/f_tiny_real.csv"), s, Role::Real),
            load(include_str!("../../../../fixtures/f_tiny_synth.csv"), s, Role::Synthetic),
        )
    }

    #[test]
    fn tiny_real_first_row() {
        let (y, _) = tiny();
        let m: EncodedMatrix<f64> = encode(&y, &y).unwrap();
        assert_eq!(m.width(), 4);
        assert_eq!(m.row(0), &[0.0, 1.0, 0.0, 1.0]);
        // (40 - 30) / 20
        assert_eq!(m.row(1), &[0.5, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn synthetic_values_are_not_clipped() {
        let (y, z) = tiny();
        let m: EncodedMatrix<f64> = encode(&z, &y).unwrap();
        assert_eq!(m.row(2)[0], 1.5);
    }

    #[test]
    fn constant_numeric_column_is_zero() {
        let schema = r#"{"attributes":[{"name":"c","type":"numerical"}]}"#;
        let d = load("c\n7\n7\n7\n", schema, Role::Real);
        let m: EncodedMatrix<f32> = encode(&d, &d).unwrap();
        assert!(m.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn one_hot_spans_hold_a_single_one() {
        let (y, z) = tiny();
        let (ey, ez) = encode_pair::<f64>(&y, &z, NumericScaling::MinMax).unwrap();
        for m in [&ey, &ez] {
            let span = &m.spans()[1];
            for r in m.iter_rows() {
                let ones = r[span.start..span.start + span.len]
                    .iter()
                    .filter(|&&v| v == 1.0)
                    .count();
                assert_eq!(ones, 1);
            }
        }
    }

    #[test]
    fn raw_scaling_keeps_units() {
        let (y, z) = tiny();
        let (_, ez) = encode_pair::<f64>(&y, &z, NumericScaling::Raw).unwrap();
        assert_eq!(ez.row(2)[0], 60.0);
    }
}
