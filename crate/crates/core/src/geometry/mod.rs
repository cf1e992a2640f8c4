//! Vector-space view of mixed-type records: encoding, distance kernels,
//! exact nearest-neighbour search, distance extrema and PCA projection.

mod distance;
mod encode;
mod neighbors;
mod projection;

use thiserror::Error;

pub use distance::{dist_euclid, dist_hamming, dist_minkowski, Kernel};
pub(crate) use distance::hamming_unchecked;
pub use encode::{encode, encode_pair, ColumnSpan, EncodedMatrix, Encoder, NumericScaling};
pub use neighbors::{
    argmin_by, distance_extrema, minimizer_set, minimizers_by, nearest, nearest_all, nearest_two,
    nearest_two_all, Neighbor,
};
pub use projection::{fit_projection, symmetric_eigen, ProjectionModel, DEFAULT_VARIANCE_TARGET};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("vector widths differ ({left} vs {right})")]
    WidthMismatch { left: usize, right: usize },
    #[error("Minkowski order must be positive and finite, got {0}")]
    InvalidOrder(f64),
    #[error("neighbour pool is empty")]
    EmptyPool,
    #[error("datasets do not share a schema")]
    SchemaMismatch,
    #[error("category `{value}` of `{attribute}` was not seen when fitting the encoder")]
    UnknownCategory { attribute: String, value: String },
    #[error("cannot keep {k} components of a {width}-dimensional space")]
    InvalidComponentCount { k: usize, width: usize },
    #[error("projection needs at least 2 rows, got {0}")]
    TooFewRows(usize),
}
