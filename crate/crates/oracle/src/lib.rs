//! Independent brute-force reference for the non-classifier metrics.
//!
//! Everything here is re-derived from the metric definitions over plain
//! `Vec<Vec<f64>>` tables: its own encoder, full distance matrices, sorted
//! neighbour lists and a nalgebra eigendecomposition for the projection.
//! Only the dataset and configuration types are shared with the main crate.

mod compare;
mod encode;
mod generate;
mod pca;
mod reference;

pub use compare::{run, MetricStat, OracleReport, COMPARED, TOLERANCE};
pub use generate::{random_instance, Instance};
pub use reference::reference_score;
