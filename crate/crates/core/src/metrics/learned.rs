use super::attack::check_inputs;
use super::{MetricConfig, MetricError, MetricId, MetricResult};
use crate::classify::{build_labeled_set, derive_seed, holdout_recall, kfold_auc, GbtLearner, MlpLearner};
use crate::dataset::Dataset;
use crate::geometry::{encode_pair, NumericScaling};
use crate::scalar::Scalar;

/// Mean k-fold AUC of a real-vs-synthetic MLP; 0.5 means indistinguishable.
pub fn dmlp<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    check_inputs(y, z)?;
    cfg.validate()?;
    let (ey, ez) = encode_pair::<T>(y, z, NumericScaling::MinMax)?;
    let data = build_labeled_set(&ey, &ez)?;
    let seed = derive_seed(cfg.seed, MetricId::Dmlp as u64);
    let auc = kfold_auc(&data, cfg.kfold_k, &MlpLearner::default(), seed)?;
    Ok(MetricResult::new(MetricId::Dmlp, auc, auc)
        .note("stratified folds")
        .param("folds", cfg.kfold_k)
        .param("seed", seed))
}

/// Recall on held-out real rows of a boosted-tree real-vs-synthetic classifier.
pub fn mir<T: Scalar>(y: &Dataset, z: &Dataset, cfg: &MetricConfig) -> Result<MetricResult, MetricError> {
    check_inputs(y, z)?;
    cfg.validate()?;
    let (ey, ez) = encode_pair::<T>(y, z, NumericScaling::MinMax)?;
    let data = build_labeled_set(&ey, &ez)?;
    let seed = derive_seed(cfg.seed, MetricId::Mir as u64);
    let r = holdout_recall(&data, cfg.mir_test_fraction, &GbtLearner::default(), seed)?;
    let mut out = MetricResult::new(MetricId::Mir, r.recall, r.recall)
        .param("test_fraction", cfg.mir_test_fraction)
        .param("test_positives", r.test_positives)
        .param("seed", seed);
    if r.constant_predictions {
        out = out.note("degenerate: classifier output is constant on the holdout");
    }
    Ok(out)
}
