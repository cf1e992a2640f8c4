//! Typed tabular datasets: loading, validation, projection and value statistics.
//!
//! A dataset is immutable once loaded. The row index is the record identity,
//! so loaders preserve CSV row order.

mod schema;
mod stats;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::io::{Read, Write};
use std::sync::Arc;

use thiserror::Error;

pub use schema::{Attribute, AttributeType, Schema};
pub use stats::{entropy_term, ValueStats};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("CSV does not match schema: {0}")]
    SchemaMismatch(String),
    #[error("non-finite value `{value}` in column `{column}` (row {row})")]
    NonFiniteValue {
        row: usize,
        column: String,
        value: String,
    },
    #[error("binary column `{column}` holds `{value}` (row {row}); expected 0 or 1")]
    InvalidBinary {
        row: usize,
        column: String,
        value: String,
    },
    #[error("cannot parse `{value}` as a number in column `{column}` (row {row})")]
    InvalidNumber {
        row: usize,
        column: String,
        value: String,
    },
    #[error("missing value in column `{column}` (row {row})")]
    MissingValue { row: usize, column: String },
    #[error("dataset has no records")]
    EmptyDataset,
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("record has {found} values but the schema has {expected} attributes")]
    Arity { expected: usize, found: usize },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Real,
    Synthetic,
}

/// A single cell. Numerical values are finite; binary values are 0 or 1.
#[derive(Debug, Clone)]
pub enum Value {
    Numerical(f64),
    Categorical(String),
    Binary(u8),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Numerical(v) => Some(*v),
            Value::Binary(b) => Some(f64::from(*b)),
            Value::Categorical(_) => None,
        }
    }

    pub fn kind(&self) -> AttributeType {
        match self {
            Value::Numerical(_) => AttributeType::Numerical,
            Value::Categorical(_) => AttributeType::Categorical,
            Value::Binary(_) => AttributeType::Binary,
        }
    }
}

// Numerical values are finite after load, so float equality is an equivalence.
impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Numerical(a), Value::Numerical(b)) => a == b,
            (Value::Categorical(a), Value::Categorical(b)) => a == b,
            (Value::Binary(a), Value::Binary(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Value {}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Value::Numerical(v) => {
                0u8.hash(state);
                // -0.0 == 0.0
                let v = if *v == 0.0 { 0.0 } else { *v };
                v.to_bits().hash(state);
            }
            Value::Categorical(s) => {
                1u8.hash(state);
                s.hash(state);
            }
            Value::Binary(b) => {
                2u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Numerical(v) => write!(f, "{v}"),
            Value::Categorical(s) => f.write_str(s),
            Value::Binary(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Record {
    values: Vec<Value>,
}

impl Record {
    pub fn new(values: Vec<Value>) -> Self {
        Record { values }
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn get(&self, index: usize) -> &Value {
        &self.values[index]
    }

    /// `d[A']` for the attribute positions in `indices`.
    pub fn project(&self, indices: &[usize]) -> Record {
        Record {
            values: indices.iter().map(|&i| self.values[i].clone()).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    schema: Arc<Schema>,
    records: Vec<Record>,
    role: Role,
}

impl Dataset {
    /// Builds a dataset from in-memory records, enforcing the same invariants as the CSV loader.
    pub fn new(schema: Schema, records: Vec<Record>, role: Role) -> Result<Self, DatasetError> {
        Self::with_shared_schema(Arc::new(schema), records, role)
    }

    pub fn with_shared_schema(
        schema: Arc<Schema>,
        records: Vec<Record>,
        role: Role,
    ) -> Result<Self, DatasetError> {
        if records.is_empty() {
            return Err(DatasetError::EmptyDataset);
        }
        for (row, r) in records.iter().enumerate() {
            if r.values.len() != schema.len() {
                return Err(DatasetError::Arity {
                    expected: schema.len(),
                    found: r.values.len(),
                });
            }
            for (attr, v) in schema.attributes().iter().zip(&r.values) {
                if v.kind() != attr.kind {
                    return Err(DatasetError::SchemaMismatch(format!(
                        "row {row}: `{}` expects a {} value",
                        attr.name, attr.kind
                    )));
                }
                match v {
                    Value::Numerical(x) if !x.is_finite() => {
                        return Err(DatasetError::NonFiniteValue {
                            row,
                            column: attr.name.clone(),
                            value: x.to_string(),
                        })
                    }
                    Value::Binary(b) if *b > 1 => {
                        return Err(DatasetError::InvalidBinary {
                            row,
                            column: attr.name.clone(),
                            value: b.to_string(),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(Dataset {
            schema,
            records,
            role,
        })
    }

    /// Reads an RFC-4180 CSV whose header must list the schema attributes in schema order.
    pub fn from_csv<R: Read>(reader: R, schema: Schema, role: Role) -> Result<Self, DatasetError> {
        let mut csv = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let header = csv.headers()?.clone();
        let names: Vec<&str> = schema.names().collect();
        if header.len() != names.len() || header.iter().zip(&names).any(|(h, n)| h != *n) {
            return Err(DatasetError::SchemaMismatch(format!(
                "header [{}] differs from schema [{}]",
                header.iter().collect::<Vec<_>>().join(","),
                names.join(",")
            )));
        }
        let mut records = Vec::new();
        for (row, result) in csv.records().enumerate() {
            let raw = result?;
            let mut values = Vec::with_capacity(schema.len());
            for (attr, cell) in schema.attributes().iter().zip(raw.iter()) {
                values.push(parse_cell(row, attr, cell)?);
            }
            records.push(Record { values });
        }
        Dataset::new(schema, records, role)
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn record(&self, row: usize) -> &Record {
        &self.records[row]
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Numeric view of one column; `None` for categorical attributes.
    pub fn numeric_column(&self, index: usize) -> Option<Vec<f64>> {
        self.records.iter().map(|r| r.values[index].as_f64()).collect()
    }

    /// Restricts every record to `attrs`, keeping row order.
    pub fn project<S: AsRef<str>>(&self, attrs: &[S]) -> Result<Dataset, DatasetError> {
        let indices = self.schema.indices_of(attrs)?;
        let attributes = indices
            .iter()
            .map(|&i| self.schema.attributes()[i].clone())
            .collect();
        let schema = Schema::new(attributes)?;
        Ok(Dataset {
            schema: Arc::new(schema),
            records: self.records.iter().map(|r| r.project(&indices)).collect(),
            role: self.role,
        })
    }

    /// New dataset with the same schema holding the records at `rows`, in that order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Dataset, DatasetError> {
        Dataset::with_shared_schema(
            Arc::clone(&self.schema),
            rows.iter().map(|&r| self.records[r].clone()).collect(),
            self.role,
        )
    }

    /// Writes header and records; numbers use the shortest round-tripping form.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), DatasetError> {
        let mut csv = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        csv.write_record(self.schema.names())?;
        for r in &self.records {
            csv.write_record(r.values.iter().map(|v| v.to_string()))?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn ensure_same_schema(&self, other: &Dataset) -> Result<(), DatasetError> {
        if self.schema() != other.schema() {
            return Err(DatasetError::SchemaMismatch(
                "real and synthetic datasets have different schemas".into(),
            ));
        }
        Ok(())
    }
}

/// Convenience wrapper: parse the schema JSON, then the CSV.
pub fn load_dataset<C: Read, S: Read>(
    csv: C,
    schema_json: S,
    role: Role,
) -> Result<Dataset, DatasetError> {
    let schema = Schema::from_json(schema_json)?;
    Dataset::from_csv(csv, schema, role)
}

fn parse_cell(row: usize, attr: &Attribute, cell: &str) -> Result<Value, DatasetError> {
    let text = cell.trim();
    if text.is_empty() {
        return Err(DatasetError::MissingValue {
            row,
            column: attr.name.clone(),
        });
    }
    match attr.kind {
        AttributeType::Numerical => {
            let v: f64 = text.parse().map_err(|_| DatasetError::InvalidNumber {
                row,
                column: attr.name.clone(),
                value: text.to_string(),
            })?;
            if !v.is_finite() {
                return Err(DatasetError::NonFiniteValue {
                    row,
                    column: attr.name.clone(),
                    value: text.to_string(),
                });
            }
            Ok(Value::Numerical(v))
        }
        AttributeType::Categorical => Ok(Value::Categorical(cell.to_string())),
        AttributeType::Binary => match text {
            "0" => Ok(Value::Binary(0)),
            "1" => Ok(Value::Binary(1)),
            _ => Err(DatasetError::InvalidBinary {
                row,
                column: attr.name.clone(),
                value: text.to_string(),
            }),
        },
    }
}
