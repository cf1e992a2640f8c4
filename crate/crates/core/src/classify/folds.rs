use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ClassifyError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified k-fold assignment; test folds partition `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<Fold>,
}

fn shuffled_classes(labels: &[u8], rng: &mut ChaCha8Rng) -> [Vec<usize>; 2] {
    let mut pos: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == 1).collect();
    let mut neg: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] != 1).collect();
    pos.shuffle(rng);
    neg.shuffle(rng);
    [pos, neg]
}

/// Deals each class's shuffled rows round-robin over the folds, continuing the
/// rotation from one class to the next so fold sizes differ by at most one.
pub fn stratified_folds(labels: &[u8], k: usize, seed: u64) -> Result<FoldPlan, ClassifyError> {
    let n = labels.len();
    if k < 2 || k > n {
        return Err(ClassifyError::InvalidFoldCount { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tests = vec![Vec::new(); k];
    let mut slot = 0;
    for class in shuffled_classes(labels, &mut rng) {
        for i in class {
            tests[slot % k].push(i);
            slot += 1;
        }
    }
    let folds = tests
        .into_iter()
        .map(|mut test| {
            test.sort_unstable();
            let mut in_test = vec![false; n];
            for &i in &test {
                in_test[i] = true;
            }
            let train = (0..n).filter(|&i| !in_test[i]).collect();
            Fold { train, test }
        })
        .collect();
    Ok(FoldPlan { k, seed, folds })
}

/// Per-class holdout: `round(n_c * test_fraction)` rows of each class, at
/// least one and leaving at least one for training.
pub fn stratified_split(labels: &[u8], test_fraction: f64, seed: u64) -> Result<Fold, ClassifyError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(ClassifyError::InvalidTestFraction(test_fraction));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (c, class) in shuffled_classes(labels, &mut rng).into_iter().enumerate() {
        if class.len() < 2 {
            return Err(ClassifyError::FoldMissingClass { fold: c });
        }
        let take = ((class.len() as f64 * test_fraction).round() as usize).clamp(1, class.len() - 1);
        test.extend_from_slice(&class[..take]);
        train.extend_from_slice(&class[take..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Fold { train, test })
}
