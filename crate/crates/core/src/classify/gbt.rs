use super::{ClassifyError, LabeledSet, Learner, ProbabilityModel};
use crate::scalar::{sigmoid, Scalar};

/// Gradient-boosted regression trees on the logistic loss, grown with exact
/// greedy splits and Newton leaf values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbtLearner {
    pub trees: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    /// L2 penalty on leaf values.
    pub lambda: f64,
    pub min_child_hessian: f64,
}

impl Default for GbtLearner {
    fn default() -> Self {
        GbtLearner {
            trees: 100,
            max_depth: 3,
            learning_rate: 0.1,
            lambda: 1.0,
            min_child_hessian: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node<T> {
    Leaf(T),
    /// `x[feature] <= threshold` goes left.
    Split {
        feature: usize,
        threshold: T,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
struct Tree<T> {
    nodes: Vec<Node<T>>,
}

impl<T: Scalar> Tree<T> {
    fn predict(&self, x: &[T]) -> T {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf(v) => return *v,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[*feature] <= *threshold { *left } else { *right },
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gbt<T> {
    base: T,
    learning_rate: T,
    trees: Vec<Tree<T>>,
}

impl<T: Scalar> Gbt<T> {
    fn margin(&self, x: &[T]) -> T {
        self.base
            + self.learning_rate * self.trees.iter().map(|t| t.predict(x)).sum::<T>()
    }

    pub fn tree_count(&self) -> usize {
        self.trees.len()
    }
}

impl<T: Scalar> ProbabilityModel<T> for Gbt<T> {
    fn predict_probability(&self, x: &[T]) -> T {
        sigmoid(self.margin(x))
    }
}

struct Grower<'a, T> {
    cfg: &'a GbtLearner,
    data: &'a LabeledSet<T>,
    grad: &'a [T],
    hess: &'a [T],
    nodes: Vec<Node<T>>,
}

struct BestSplit<T> {
    gain: T,
    feature: usize,
    threshold: T,
    cut: usize,
    order: Vec<usize>,
}

impl<T: Scalar> Grower<'_, T> {
    fn score(&self, g: T, h: T) -> T {
        g * g / (h + T::of(self.cfg.lambda))
    }

    fn grow(&mut self, rows: Vec<usize>, depth: usize) -> usize {
        let g: T = rows.iter().map(|&i| self.grad[i]).sum();
        let h: T = rows.iter().map(|&i| self.hess[i]).sum();
        let slot = self.nodes.len();
        self.nodes.push(Node::Leaf(-g / (h + T::of(self.cfg.lambda))));
        if depth >= self.cfg.max_depth || rows.len() < 2 {
            return slot;
        }
        let Some(best) = self.best_split(&rows, g, h) else {
            return slot;
        };
        let (left_rows, right_rows) = best.order.split_at(best.cut);
        let (left_rows, right_rows) = (left_rows.to_vec(), right_rows.to_vec());
        let left = self.grow(left_rows, depth + 1);
        let right = self.grow(right_rows, depth + 1);
        self.nodes[slot] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        slot
    }

    /// Highest-gain split; ties keep the lower feature and lower threshold.
    fn best_split(&self, rows: &[usize], g: T, h: T) -> Option<BestSplit<T>> {
        let x = self.data.features();
        let min_h = T::of(self.cfg.min_child_hessian);
        let parent = self.score(g, h);
        let mut best: Option<BestSplit<T>> = None;
        for f in 0..x.width() {
            let mut order = rows.to_vec();
            order.sort_by(|&a, &b| {
                x.row(a)[f]
                    .partial_cmp(&x.row(b)[f])
                    .expect("finite features")
                    .then(a.cmp(&b))
            });
            let mut gl = T::zero();
            let mut hl = T::zero();
            let mut found: Option<(T, T, usize)> = None;
            for pos in 0..order.len() - 1 {
                let i = order[pos];
                gl += self.grad[i];
                hl += self.hess[i];
                let here = x.row(i)[f];
                if here == x.row(order[pos + 1])[f] {
                    continue;
                }
                let (gr, hr) = (g - gl, h - hl);
                if hl < min_h || hr < min_h {
                    continue;
                }
                let gain = self.score(gl, hl) + self.score(gr, hr) - parent;
                if found.map_or(true, |(bg, _, _)| gain > bg) {
                    found = Some((gain, here, pos + 1));
                }
            }
            if let Some((gain, threshold, cut)) = found {
                if gain > T::zero() && best.as_ref().map_or(true, |b| gain > b.gain) {
                    best = Some(BestSplit {
                        gain,
                        feature: f,
                        threshold,
                        cut,
                        order,
                    });
                }
            }
        }
        best
    }
}

impl<T: Scalar> Learner<T> for GbtLearner {
    type Model = Gbt<T>;

    /// Tree growth is fully deterministic; the seed is unused.
    fn train(&self, data: &LabeledSet<T>, _seed: u64) -> Result<Gbt<T>, ClassifyError> {
        data.require_both_classes()?;
        let n = data.len();
        let prior = T::of_usize(data.positives()) / T::of_usize(n);
        let base = (prior / (T::one() - prior)).ln();
        let lr = T::of(self.learning_rate);
        let mut margin = vec![base; n];
        let mut grad = vec![T::zero(); n];
        let mut hess = vec![T::zero(); n];
        let mut trees = Vec::with_capacity(self.trees);
        for _ in 0..self.trees {
            for i in 0..n {
                let p = sigmoid(margin[i]);
                grad[i] = p - T::of(f64::from(data.labels()[i]));
                hess[i] = p * (T::one() - p);
            }
            let mut grower = Grower {
                cfg: self,
                data,
                grad: &grad,
                hess: &hess,
                nodes: Vec::new(),
            };
            grower.grow((0..n).collect(), 0);
            let tree = Tree {
                nodes: grower.nodes,
            };
            for (i, m) in margin.iter_mut().enumerate() {
                *m += lr * tree.predict(data.features().row(i));
            }
            trees.push(tree);
        }
        Ok(Gbt {
            base,
            learning_rate: lr,
            trees,
        })
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
        let model = GbtLearner::default().train(&data, 0).unwrap();
        assert!(accuracy(&model, &data) >= 0.95);
        assert_eq!(model.tree_count(), 100);
    }

    #[test]
    fn constant_features_predict_the_prior() {
        let y = EncodedMatrix::from_rows(vec![vec![1.0, 0.5]; 3]).unwrap();
        let z = EncodedMatrix::from_rows(vec![vec![1.0, 0.5]; 5]).unwrap();
        let data = build_labeled_set(&y, &z).unwrap();
        let model = GbtLearner::default().train(&data, 0).unwrap();
        for x in data.features().iter_rows() {
            assert!((model.predict_probability(x) - 3.0_f64 / 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn repeat_training_is_bit_identical() {
        let data = clusters(30, 3, 0.5, 9);
        let a = GbtLearner::default().train(&data, 1).unwrap();
        let b = GbtLearner::default().train(&data, 1).unwrap();
        assert_eq!(a, b);
        for x in data.features().iter_rows() {
            assert_eq!(
                a.predict_probability(x).to_bits(),
                b.predict_probability(x).to_bits()
            );
        }
    }

    #[test]
    fn split_prefers_lower_feature_on_ties() {
        // both features separate the classes perfectly
        let y = EncodedMatrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let z = EncodedMatrix::from_rows(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let data = build_labeled_set(&y, &z).unwrap();
        let model = GbtLearner {
            trees: 1,
            ..GbtLearner::default()
        }
        .train(&data, 0)
        .unwrap();
        match &model.trees[0].nodes[0] {
            Node::Split { feature, threshold, .. } => {
                assert_eq!(*feature, 0);
                assert_eq!(*threshold, 0.0);
            }
            Node::Leaf(_) => panic!("expected a split"),
        }
    }
}
