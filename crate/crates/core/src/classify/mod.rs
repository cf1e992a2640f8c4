//! Real-vs-synthetic binary classification: the learner contract, a shallow
//! MLP, gradient-boosted trees, and AUC / recall evaluation.
//!
//! Label 1 marks real records and label 0 synthetic ones.

mod eval;
mod folds;
mod gbt;
mod mlp;

use thiserror::Error;

use crate::geometry::{EncodedMatrix, GeometryError};
use crate::scalar::Scalar;

pub use eval::{auc, holdout_recall, kfold_auc, HoldoutRecall};
pub use folds::{stratified_folds, stratified_split, Fold, FoldPlan};
pub use gbt::{Gbt, GbtLearner};
pub use mlp::{Mlp, MlpLearner};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("both classes are required ({positives} real, {negatives} synthetic)")]
    SingleClass { positives: usize, negatives: usize },
    #[error("fold {fold} lacks one of the classes")]
    FoldMissingClass { fold: usize },
    #[error("cannot build {k} folds from {n} rows")]
    InvalidFoldCount { k: usize, n: usize },
    #[error("test fraction must lie in (0, 1), got {0}")]
    InvalidTestFraction(f64),
    #[error("labels and scores differ in length ({labels} vs {scores})")]
    LengthMismatch { labels: usize, scores: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Fitted model mapping a feature vector to P(real).
pub trait ProbabilityModel<T>: Send + Sync {
    fn predict_probability(&self, x: &[T]) -> T;
}

/// Training procedure. Identical data and seed give identical models.
pub trait Learner<T: Scalar>: Sync {
    type Model: ProbabilityModel<T>;

    fn train(&self, data: &LabeledSet<T>, seed: u64) -> Result<Self::Model, ClassifyError>;
}

/// Features with 0/1 labels; built with real rows first.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSet<T> {
    features: EncodedMatrix<T>,
    labels: Vec<u8>,
}

impl<T: Scalar> LabeledSet<T> {
    pub fn new(features: EncodedMatrix<T>, labels: Vec<u8>) -> Result<Self, ClassifyError> {
        if features.rows() != labels.len() {
            return Err(ClassifyError::LengthMismatch {
                labels: labels.len(),
                scores: features.rows(),
            });
        }
        let set = LabeledSet { features, labels };
        set.require_both_classes()?;
        Ok(set)
    }

    pub fn features(&self) -> &EncodedMatrix<T> {
        &self.features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    pub fn subset(&self, rows: &[usize]) -> Result<Self, ClassifyError> {
        LabeledSet::new(
            self.features.select_rows(rows),
            rows.iter().map(|&r| self.labels[r]).collect(),
        )
    }

    fn require_both_classes(&self) -> Result<(), ClassifyError> {
        let positives = self.positives();
        let negatives = self.len() - positives;
        if positives == 0 || negatives == 0 {
            Err(ClassifyError::SingleClass {
                positives,
                negatives,
            })
        } else {
            Ok(())
        }
    }
}

/// Real rows labelled 1, then synthetic rows labelled 0.
pub fn build_labeled_set<T: Scalar>(
    real: &EncodedMatrix<T>,
    synth: &EncodedMatrix<T>,
) -> Result<LabeledSet<T>, ClassifyError> {
    let features = real.concat(synth)?;
    let mut labels = vec![1u8; real.rows()];
    labels.resize(real.rows() + synth.rows(), 0);
    LabeledSet::new(features, labels)
}

/// SplitMix64 step; derives independent per-fold / per-metric seeds.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
