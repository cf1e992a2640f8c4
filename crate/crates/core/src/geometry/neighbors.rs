//! Exact nearest-neighbour queries by exhaustive scan.
//!
//! Ties on the single argmin go to the lowest pool index.

use rayon::prelude::*;

use super::distance::Kernel;
use super::encode::{check_width, EncodedMatrix};
use super::GeometryError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor<T> {
    pub index: usize,
    pub distance: T,
}

/// Lowest-index minimizer of `dist(i)` over `candidates`.
pub fn argmin_by<T, I, F>(candidates: I, mut dist: F) -> Option<Neighbor<T>>
where
    T: PartialOrd + Copy,
    I: IntoIterator<Item = usize>,
    F: FnMut(usize) -> T,
{
    let mut best: Option<Neighbor<T>> = None;
    for i in candidates {
        let d = dist(i);
        match best {
            Some(b) if !(d < b.distance) => {}
            _ => best = Some(Neighbor { index: i, distance: d }),
        }
    }
    best
}

/// Every candidate attaining the exact minimum, in index order, and that minimum.
pub fn minimizers_by<T, I, F>(candidates: I, mut dist: F) -> Option<(Vec<usize>, T)>
where
    T: PartialOrd + Copy,
    I: IntoIterator<Item = usize>,
    F: FnMut(usize) -> T,
{
    let mut best: Option<(Vec<usize>, T)> = None;
    for i in candidates {
        let d = dist(i);
        match &mut best {
            Some((set, m)) if d == *m => set.push(i),
            Some((_, m)) if d > *m => {}
            _ => best = Some((vec![i], d)),
        }
    }
    best
}

fn pool_indices(rows: usize, exclude: Option<usize>) -> impl Iterator<Item = usize> {
    (0..rows).filter(move |&i| Some(i) != exclude)
}

pub fn nearest<T: Scalar>(
    query: &[T],
    pool: &EncodedMatrix<T>,
    exclude: Option<usize>,
    kernel: Kernel,
) -> Result<Neighbor<T>, GeometryError> {
    check_width(query.len(), pool.width())?;
    argmin_by(pool_indices(pool.rows(), exclude), |i| kernel.eval(query, pool.row(i)))
        .ok_or(GeometryError::EmptyPool)
}

/// Closest and second closest; the second is drawn from the pool minus the first.
pub fn nearest_two<T: Scalar>(
    query: &[T],
    pool: &EncodedMatrix<T>,
    exclude: Option<usize>,
    kernel: Kernel,
) -> Result<(Neighbor<T>, Neighbor<T>), GeometryError> {
    let first = nearest(query, pool, exclude, kernel)?;
    let second = argmin_by(
        pool_indices(pool.rows(), exclude).filter(|&i| i != first.index),
        |i| kernel.eval(query, pool.row(i)),
    )
    .ok_or(GeometryError::EmptyPool)?;
    Ok((first, second))
}

pub fn minimizer_set<T: Scalar>(
    query: &[T],
    pool: &EncodedMatrix<T>,
    exclude: Option<usize>,
    kernel: Kernel,
) -> Result<(Vec<usize>, T), GeometryError> {
    check_width(query.len(), pool.width())?;
    minimizers_by(pool_indices(pool.rows(), exclude), |i| {
        kernel.eval(query, pool.row(i))
    })
    .ok_or(GeometryError::EmptyPool)
}

/// Nearest pool row for every query row. With `exclude_self`, query `i`
/// skips pool row `i` (queries and pool are the same set).
pub fn nearest_all<T: Scalar>(
    queries: &EncodedMatrix<T>,
    pool: &EncodedMatrix<T>,
    exclude_self: bool,
    kernel: Kernel,
) -> Result<Vec<Neighbor<T>>, GeometryError> {
    check_width(queries.width(), pool.width())?;
    (0..queries.rows())
        .into_par_iter()
        .map(|i| nearest(queries.row(i), pool, exclude_self.then_some(i), kernel))
        .collect()
}

pub fn nearest_two_all<T: Scalar>(
    queries: &EncodedMatrix<T>,
    pool: &EncodedMatrix<T>,
    kernel: Kernel,
) -> Result<Vec<(Neighbor<T>, Neighbor<T>)>, GeometryError> {
    check_width(queries.width(), pool.width())?;
    (0..queries.rows())
        .into_par_iter()
        .map(|i| nearest_two(queries.row(i), pool, None, kernel))
        .collect()
}

/// Minimum and maximum Euclidean distance over all real/synthetic pairs.
pub fn distance_extrema<T: Scalar>(
    real: &EncodedMatrix<T>,
    synth: &EncodedMatrix<T>,
) -> Result<(T, T), GeometryError> {
    check_width(real.width(), synth.width())?;
    if real.is_empty() || synth.is_empty() {
        return Err(GeometryError::EmptyPool);
    }
    let (lo, hi) = (0..real.rows())
        .into_par_iter()
        .map(|i| {
            let y = real.row(i);
            synth.iter_rows().fold((T::infinity(), T::neg_infinity()), |(lo, hi), z| {
                let d = Kernel::Euclidean.eval(y, z);
                (lo.min(d), hi.max(d))
            })
        })
        .reduce(
            || (T::infinity(), T::neg_infinity()),
            |(a, b), (c, d)| (a.min(c), b.max(d)),
        );
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn col(v: &[f64]) -> EncodedMatrix<f64> {
        EncodedMatrix::from_rows(v.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    const Y: [f64; 4] = [0.0, 1.0, 2.0, 3.0];
    const Z: [f64; 4] = [0.0, 1.1, 2.5, 10.0];

    #[test]
    fn f_num_nearest() {
        let n = nearest(&[3.0], &col(&Z), None, Kernel::Euclidean).unwrap();
        assert_eq!(n.index, 2);
        assert_eq!(n.distance, 0.5);
        let n = nearest(&[1.1], &col(&Z), None, Kernel::Euclidean).unwrap();
        assert_eq!((n.index, n.distance), (1, 0.0));
    }

    #[test]
    fn f_num_tie_goes_to_lowest_index() {
        let (a, b) = nearest_two(&[2.5], &col(&Y), None, Kernel::Euclidean).unwrap();
        assert_eq!((a.index, a.distance), (2, 0.5));
        assert_eq!((b.index, b.distance), (3, 0.5));
        let (set, d) = minimizer_set(&[2.5], &col(&Y), None, Kernel::Euclidean).unwrap();
        assert_eq!(set, vec![2, 3]);
        assert_eq!(d, 0.5);
    }

    #[test]
    fn exclusion_and_empty_pool() {
        let pool = col(&[4.0]);
        assert!(matches!(
            nearest(&[4.0], &pool, Some(0), Kernel::Euclidean),
            Err(GeometryError::EmptyPool)
        ));
        assert!(nearest_two(&[4.0], &pool, None, Kernel::Euclidean).is_err());
        let n = nearest(&[1.0], &col(&Y), Some(1), Kernel::Euclidean).unwrap();
        assert_eq!((n.index, n.distance), (0, 1.0));
    }

    #[test]
    fn extrema_examples() {
        assert_eq!(distance_extrema(&col(&Y), &col(&Z)).unwrap(), (0.0, 10.0));
        assert_eq!(distance_extrema(&col(&[2.0]), &col(&[2.0])).unwrap(), (0.0, 0.0));
        assert_eq!(distance_extrema(&col(&[0.0]), &col(&[5.0])).unwrap(), (5.0, 5.0));
    }

    fn matrix(rows: std::ops::Range<usize>, w: usize) -> impl Strategy<Value = EncodedMatrix<f64>> {
        prop::collection::vec(prop::collection::vec(-5.0f64..5.0, w), rows)
            .prop_map(|r| EncodedMatrix::from_rows(r).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn nearest_matches_exhaustive_scan(
            (pool, q) in (1usize..4).prop_flat_map(|w| (matrix(1..40, w), prop::collection::vec(-5.0f64..5.0, w)))
        ) {
            let n = nearest(&q, &pool, None, Kernel::Euclidean).unwrap();
            let mut best = (0, f64::INFINITY);
            for i in 0..pool.rows() {
                let d: f64 = q.iter().zip(pool.row(i)).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                if d < best.1 { best = (i, d); }
            }
            prop_assert_eq!(n.index, best.0);
            prop_assert!((n.distance - best.1).abs() < 1e-12);
            prop_assert_eq!(n.distance, Kernel::Euclidean.eval(&q, pool.row(n.index)));
        }

        #[test]
        fn extrema_match_enumeration(
            (a, b) in (1usize..4).prop_flat_map(|w| (matrix(1..50, w), matrix(1..50, w)))
        ) {
            let (lo, hi) = distance_extrema(&a, &b).unwrap();
            let all: Vec<f64> = a.iter_rows()
                .flat_map(|y| b.iter_rows().map(move |z| Kernel::Euclidean.eval(y, z)))
                .collect();
            prop_assert_eq!(lo, all.iter().copied().fold(f64::INFINITY, f64::min));
            prop_assert_eq!(hi, all.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        }

        #[test]
        fn minimizer_set_members_share_the_minimum(
            (pool, q) in (1usize..3).prop_flat_map(|w| (
                prop::collection::vec(prop::collection::vec(0u8..3, w), 1..30)
                    .prop_map(|r| EncodedMatrix::from_rows(
                        r.into_iter().map(|v| v.into_iter().map(f64::from).collect()).collect()
                    ).unwrap()),
                prop::collection::vec(0u8..3, w).prop_map(|v| v.into_iter().map(f64::from).collect::<Vec<_>>())
            ))
        ) {
            let (set, d) = minimizer_set(&q, &pool, None, Kernel::Euclidean).unwrap();
            prop_assert!(!set.is_empty());
            for &i in &set {
                prop_assert_eq!(Kernel::Euclidean.eval(&q, pool.row(i)), d);
            }
            for i in 0..pool.rows() {
                prop_assert!(Kernel::Euclidean.eval(&q, pool.row(i)) >= d);
            }
            prop_assert_eq!(nearest(&q, &pool, None, Kernel::Euclidean).unwrap().index, set[0]);
        }
    }
}
