use rayon::prelude::*;

use super::folds::{stratified_folds, stratified_split};
use super::{derive_seed, ClassifyError, LabeledSet, Learner, ProbabilityModel};
use crate::scalar::Scalar;

/// Rank-based (Mann-Whitney) ROC AUC; tied scores count one half.
pub fn auc<T: Scalar>(labels: &[u8], scores: &[T]) -> Result<f64, ClassifyError> {
    if labels.len() != scores.len() {
        return Err(ClassifyError::LengthMismatch {
            labels: labels.len(),
            scores: scores.len(),
        });
    }
    let positives = labels.iter().filter(|&&l| l == 1).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(ClassifyError::SingleClass {
            positives,
            negatives,
        });
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));

    // sum of 1-based average ranks of the positives
    let mut rank_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        let avg_rank = (start + 1 + end) as f64 / 2.0;
        let tied_pos = order[start..end].iter().filter(|&&i| labels[i] == 1).count();
        rank_sum += avg_rank * tied_pos as f64;
        start = end;
    }
    let p = positives as f64;
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * negatives as f64))
}

/// Mean test-fold AUC over stratified, seeded folds.
pub fn kfold_auc<T, L>(data: &LabeledSet<T>, k: usize, learner: &L, seed: u64) -> Result<f64, ClassifyError>
where
    T: Scalar,
    L: Learner<T>,
{
    let plan = stratified_folds(data.labels(), k, seed)?;
    for (f, fold) in plan.folds.iter().enumerate() {
        let pos = fold.test.iter().filter(|&&i| data.labels()[i] == 1).count();
        if pos == 0 || pos == fold.test.len() {
            return Err(ClassifyError::FoldMissingClass { fold: f });
        }
    }
    let aucs = plan
        .folds
        .par_iter()
        .enumerate()
        .map(|(f, fold)| {
            let train = data.subset(&fold.train)?;
            let model = learner.train(&train, derive_seed(seed, f as u64))?;
            let scores: Vec<T> = fold
                .test
                .iter()
                .map(|&i| model.predict_probability(data.features().row(i)))
                .collect();
            let labels: Vec<u8> = fold.test.iter().map(|&i| data.labels()[i]).collect();
            auc(&labels, &scores)
        })
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(aucs.iter().sum::<f64>() / aucs.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoldoutRecall {
    /// TP / (TP + FN) over the held-out real rows.
    pub recall: f64,
    pub test_positives: usize,
    /// Every held-out row received the same probability.
    pub constant_predictions: bool,
}

/// Recall on a stratified seeded holdout; probability `>= 0.5` predicts real.
pub fn holdout_recall<T, L>(
    data: &LabeledSet<T>,
    test_fraction: f64,
    learner: &L,
    seed: u64,
) -> Result<HoldoutRecall, ClassifyError>
where
    T: Scalar,
    L: Learner<T>,
{
    let split = stratified_split(data.labels(), test_fraction, seed)?;
    let train = data.subset(&split.train)?;
    let model = learner.train(&train, derive_seed(seed, 0))?;
    let threshold = T::of(0.5);
    let mut tp = 0;
    let mut positives = 0;
    let mut first: Option<T> = None;
    let mut constant = true;
    for &i in &split.test {
        let p = model.predict_probability(data.features().row(i));
        match first {
            None => first = Some(p),
            Some(f) if f != p => constant = false,
            _ => {}
        }
        if data.labels()[i] == 1 {
            positives += 1;
            if p >= threshold {
                tp += 1;
            }
        }
    }
    Ok(HoldoutRecall {
        recall: tp as f64 / positives as f64,
        test_positives: positives,
        constant_predictions: constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::testdata::clusters;
    use crate::classify::{build_labeled_set, GbtLearner, MlpLearner};
    use crate::geometry::EncodedMatrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn auc_examples() {
        assert_eq!(auc(&[1, 0], &[0.9, 0.1]).unwrap(), 1.0);
        assert_eq!(auc(&[1, 0], &[0.1, 0.9]).unwrap(), 0.0);
        assert_eq!(auc(&[1, 0, 1, 0], &[0.3; 4]).unwrap(), 0.5);
        assert!(matches!(
            auc(&[1, 1], &[0.1, 0.2]),
            Err(ClassifyError::SingleClass { .. })
        ));
    }

    fn brute_auc(labels: &[u8], scores: &[f64]) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..labels.len() {
            for j in 0..labels.len() {
                if labels[i] == 1 && labels[j] == 0 {
                    den += 1.0;
                    num += if scores[i] > scores[j] {
                        1.0
                    } else if scores[i] == scores[j] {
                        0.5
                    } else {
                        0.0
                    };
                }
            }
        }
        num / den
    }

    proptest! {
        #[test]
        fn auc_matches_pair_counting_and_ignores_monotone_maps(
            pairs in prop::collection::vec((0u8..2, 0u8..20), 2..60)
        ) {
            let labels: Vec<u8> = pairs.iter().map(|p| p.0).collect();
            prop_assume!(labels.contains(&0) && labels.contains(&1));
            let scores: Vec<f64> = pairs.iter().map(|p| f64::from(p.1) / 20.0).collect();
            let a = auc(&labels, &scores).unwrap();
            prop_assert!((a - brute_auc(&labels, &scores)).abs() < 1e-12);
            let mapped: Vec<f64> = scores.iter().map(|s| (3.0 * s).exp() - 7.0).collect();
            prop_assert_eq!(a, auc(&labels, &mapped).unwrap());
        }
    }

    #[test]
    fn separable_kfold_auc() {
        let data = clusters(50, 2, 10.0, 4);
        let a = kfold_auc(&data, 5, &MlpLearner::default(), 42).unwrap();
        assert!(a >= 0.95, "{a}");
    }

    #[test]
    fn same_distribution_kfold_auc_is_chance() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut draw = |n: usize| {
            EncodedMatrix::from_rows(
                (0..n)
                    .map(|_| (0..3).map(|_| rng.gen::<f64>()).collect())
                    .collect(),
            )
            .unwrap()
        };
        let data = build_labeled_set(&draw(200), &draw(200)).unwrap();
        let a = kfold_auc(&data, 5, &MlpLearner::default(), 42).unwrap();
        assert!((0.4..=0.6).contains(&a), "{a}");
        assert_eq!(a, kfold_auc(&data, 5, &MlpLearner::default(), 42).unwrap());
    }

    #[test]
    fn separable_holdout_recall() {
        let data = clusters(50, 2, 10.0, 6);
        let r = holdout_recall(&data, 0.2, &GbtLearner::default(), 42).unwrap();
        assert!(r.recall >= 0.9, "{r:?}");
        assert_eq!(r.test_positives, 10);
        let again = holdout_recall(&data, 0.2, &GbtLearner::default(), 42).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn kfold_requires_both_classes_in_each_fold() {
        let y = EncodedMatrix::from_rows(vec![vec![0.0]; 2]).unwrap();
        let z = EncodedMatrix::from_rows(vec![vec![1.0]; 8]).unwrap();
        let data = build_labeled_set(&y, &z).unwrap();
        assert!(matches!(
            kfold_auc(&data, 5, &GbtLearner::default(), 0),
            Err(ClassifyError::FoldMissingClass { .. })
        ));
    }
}
