//! Privacy metrics for synthetic tabular data.
//!
//! Given a real dataset `Y` and a synthetic dataset `Z` sharing one schema,
//! the [`metrics`] module scores seventeen re-identification, attribute
//! inference and membership inference risks. Every score is reported in
//! `[0, 1]` together with a direction annotation.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the metric pipeline uses.

pub mod classify;
pub mod dataset;
pub mod geometry;
pub mod metrics;
mod scalar;

pub use dataset::{load_dataset, Attribute, AttributeType, Dataset, Record, Role, Schema, Value, ValueStats};
pub use metrics::{
    evaluate_all, Direction, MetricConfig, MetricEntry, MetricError, MetricId, MetricResult,
};
pub use scalar::{median, sigmoid, Scalar};

/// Encoded matrix in double precision.
pub type Matrix = geometry::EncodedMatrix<f64>;
/// Fitted PCA map in double precision.
pub type Projection = geometry::ProjectionModel<f64>;
/// Neighbour query result in double precision.
pub type Neighbor = geometry::Neighbor<f64>;
/// Labelled training data in double precision.
pub type LabeledSet = classify::LabeledSet<f64>;
