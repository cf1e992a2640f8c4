use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ClassifyError, LabeledSet, Learner, ProbabilityModel};
use crate::scalar::{sigmoid, Scalar};

/// One ReLU hidden layer with a logistic output, trained by mini-batch
/// gradient descent on binary cross-entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlpLearner {
    pub hidden: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    /// Weights start uniform in `(-init_scale, init_scale)`; biases start at 0.
    pub init_scale: f64,
}

impl Default for MlpLearner {
    fn default() -> Self {
        MlpLearner {
            hidden: 64,
            epochs: 200,
            batch_size: 32,
            learning_rate: 0.01,
            init_scale: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp<T> {
    inputs: usize,
    hidden: usize,
    /// hidden x inputs, row-major.
    w1: Vec<T>,
    b1: Vec<T>,
    w2: Vec<T>,
    b2: T,
}

impl<T: Scalar> Mlp<T> {
    fn hidden_activations(&self, x: &[T], out: &mut [T]) {
        for (j, h) in out.iter_mut().enumerate() {
            let w = &self.w1[j * self.inputs..(j + 1) * self.inputs];
            let z = w.iter().zip(x).map(|(&a, &b)| a * b).sum::<T>() + self.b1[j];
            *h = z.max(T::zero());
        }
    }

    fn logit(&self, h: &[T]) -> T {
        self.w2.iter().zip(h).map(|(&a, &b)| a * b).sum::<T>() + self.b2
    }
}

impl<T: Scalar> ProbabilityModel<T> for Mlp<T> {
    fn predict_probability(&self, x: &[T]) -> T {
        let mut h = vec![T::zero(); self.hidden];
        self.hidden_activations(x, &mut h);
        sigmoid(self.logit(&h))
    }
}

impl<T: Scalar> Learner<T> for MlpLearner {
    type Model = Mlp<T>;

    fn train(&self, data: &LabeledSet<T>, seed: u64) -> Result<Mlp<T>, ClassifyError> {
        data.require_both_classes()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inputs = data.features().width();
        let hidden = self.hidden;
        let scale = self.init_scale;
        let draw = |rng: &mut ChaCha8Rng| T::of(rng.gen_range(-scale..scale));
        let mut net = Mlp {
            inputs,
            hidden,
            w1: (0..hidden * inputs).map(|_| draw(&mut rng)).collect(),
            b1: vec![T::zero(); hidden],
            w2: (0..hidden).map(|_| draw(&mut rng)).collect(),
            b2: T::zero(),
        };

        let n = data.len();
        let lr = T::of(self.learning_rate);
        let mut order: Vec<usize> = (0..n).collect();
        let mut h = vec![T::zero(); hidden];
        let mut g_w1 = vec![T::zero(); hidden * inputs];
        let mut g_b1 = vec![T::zero(); hidden];
        let mut g_w2 = vec![T::zero(); hidden];
        for _ in 0..self.epochs {
            order.shuffle(&mut rng);
            for batch in order.chunks(self.batch_size.max(1)) {
                g_w1.iter_mut().for_each(|g| *g = T::zero());
                g_b1.iter_mut().for_each(|g| *g = T::zero());
                g_w2.iter_mut().for_each(|g| *g = T::zero());
                let mut g_b2 = T::zero();
                for &i in batch {
                    let x = data.features().row(i);
                    let y = T::of(f64::from(data.labels()[i]));
                    net.hidden_activations(x, &mut h);
                    // d(BCE)/d(logit) for a sigmoid output
                    let delta = sigmoid(net.logit(&h)) - y;
                    g_b2 += delta;
                    for j in 0..hidden {
                        g_w2[j] += delta * h[j];
                        if h[j] > T::zero() {
                            let dj = delta * net.w2[j];
                            g_b1[j] += dj;
                            let row = &mut g_w1[j * inputs..(j + 1) * inputs];
                            for (g, &xv) in row.iter_mut().zip(x) {
                                *g += dj * xv;
                            }
                        }
                    }
                }
                let step = lr / T::of_usize(batch.len());
                for (w, &g) in net.w1.iter_mut().zip(&g_w1) {
                    *w -= step * g;
                }
                for (b, &g) in net.b1.iter_mut().zip(&g_b1) {
                    *b -= step * g;
                }
                for (w, &g) in net.w2.iter_mut().zip(&g_w2) {
                    *w -= step * g;
                }
                net.b2 -= step * g_b2;
            }
        }
        Ok(net)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::build_labeled_set;
    use crate::classify::testdata::{accuracy, clusters};
    use crate::geometry::EncodedMatrix;

    #[test]
    fn separates_distant_clusters() {
        let data = clusters(50, 2, 10.0, 1);
        let model = MlpLearner::default().train(&data, 7).unwrap();
        assert!(accuracy(&model, &data) >= 0.95);
    }

    #[test]
    fn identical_rows_stay_undecided() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![(i % 5) as f64 * 0.25, 0.5]).collect();
        let m = EncodedMatrix::from_rows(rows).unwrap();
        let data = build_labeled_set(&m, &m).unwrap();
        let model = MlpLearner::default().train(&data, 3).unwrap();
        for x in data.features().iter_rows() {
            let p = model.predict_probability(x);
            assert!((p - 0.5).abs() <= 0.1, "{p}");
        }
    }

    #[test]
    fn one_point_per_class() {
        let y = EncodedMatrix::from_rows(vec![vec![1.0, 0.0]]).unwrap();
        let z = EncodedMatrix::from_rows(vec![vec![0.0, 1.0]]).unwrap();
        let data = build_labeled_set(&y, &z).unwrap();
        let model = MlpLearner::default().train(&data, 0).unwrap();
        assert!(model.predict_probability(&[1.0_f64, 0.0]).is_finite());
    }

    #[test]
    fn deterministic_under_seed() {
        let data = clusters(20, 3, 1.0, 2);
        let a = MlpLearner::default().train(&data, 5).unwrap();
        let b = MlpLearner::default().train(&data, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_precision_training() {
        let y = EncodedMatrix::<f32>::from_rows(vec![vec![1.0], vec![0.9]]).unwrap();
        let z = EncodedMatrix::<f32>::from_rows(vec![vec![0.0], vec![0.1]]).unwrap();
        let data = build_labeled_set(&y, &z).unwrap();
        let model = MlpLearner::default().train(&data, 0).unwrap();
        assert!(model.predict_probability(&[1.0]) > model.predict_probability(&[0.0]));
    }
}
