use std::collections::HashSet;
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::DatasetError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeType {
    Numerical,
    Categorical,
    Binary,
}

impl fmt::Display for AttributeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttributeType::Numerical => "numerical",
            AttributeType::Categorical => "categorical",
            AttributeType::Binary => "binary",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: AttributeType,
}

impl Attribute {
    pub fn new(name: impl Into<String>, kind: AttributeType) -> Self {
        Attribute {
            name: name.into(),
            kind,
        }
    }
}

/// Ordered, uniquely named attribute list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schema {
    attributes: Vec<Attribute>,
}

#[derive(Deserialize)]
struct SchemaFile {
    attributes: Vec<Attribute>,
}

impl Schema {
    pub fn new(attributes: Vec<Attribute>) -> Result<Self, DatasetError> {
        if attributes.is_empty() {
            return Err(DatasetError::InvalidSchema(
                "schema declares no attributes".into(),
            ));
        }
        let mut seen = HashSet::new();
        for a in &attributes {
            if a.name.is_empty() {
                return Err(DatasetError::InvalidSchema("empty attribute name".into()));
            }
            if !seen.insert(a.name.as_str()) {
                return Err(DatasetError::InvalidSchema(format!(
                    "duplicate attribute `{}`",
                    a.name
                )));
            }
        }
        Ok(Schema { attributes })
    }

    /// Parses `{"attributes":[{"name":..,"type":"numerical|categorical|binary"}]}`.
    pub fn from_json<R: Read>(reader: R) -> Result<Self, DatasetError> {
        let file: SchemaFile = serde_json::from_reader(reader)
            .map_err(|e| DatasetError::InvalidSchema(e.to_string()))?;
        Schema::new(file.attributes)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("schema serializes")
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    /// Resolves names to column indices, failing on the first unknown one.
    pub fn indices_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>, DatasetError> {
        names
            .iter()
            .map(|n| {
                self.index_of(n.as_ref())
                    .ok_or_else(|| DatasetError::UnknownAttribute(n.as_ref().to_string()))
            })
            .collect()
    }

    pub fn kind(&self, index: usize) -> AttributeType {
        self.attributes[index].kind
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.attributes.iter().map(|a| a.name.as_str())
    }
}
