use serde::{Deserialize, Serialize};

use super::encode::check_width;
use super::GeometryError;
use crate::dataset::Record;
use crate::scalar::Scalar;

/// Distance kernel over encoded vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    Euclidean,
    Minkowski(f64),
}

impl Kernel {
    pub fn minkowski(p: f64) -> Result<Self, GeometryError> {
        if p > 0.0 && p.is_finite() {
            Ok(Kernel::Minkowski(p))
        } else {
            Err(GeometryError::InvalidOrder(p))
        }
    }

    /// Unchecked: widths must already agree.
    #[inline]
    pub fn eval<T: Scalar>(&self, u: &[T], v: &[T]) -> T {
        match *self {
            Kernel::Euclidean => euclid(u, v),
            Kernel::Minkowski(p) if p == 2.0 => euclid(u, v),
            Kernel::Minkowski(p) if p == 1.0 => u.iter().zip(v).map(|(&a, &b)| (a - b).abs()).sum(),
            Kernel::Minkowski(p) => {
                let p = T::of(p);
                let s: T = u.iter().zip(v).map(|(&a, &b)| (a - b).abs().powf(p)).sum();
                s.powf(T::one() / p)
            }
        }
    }

    pub fn distance<T: Scalar>(&self, u: &[T], v: &[T]) -> Result<T, GeometryError> {
        check_width(u.len(), v.len())?;
        if let Kernel::Minkowski(p) = *self {
            Kernel::minkowski(p)?;
        }
        Ok(self.eval(u, v))
    }
}

#[inline]
fn euclid<T: Scalar>(u: &[T], v: &[T]) -> T {
    let mut s = T::zero();
    for (&a, &b) in u.iter().zip(v) {
        let d = a - b;
        s += d * d;
    }
    s.sqrt()
}

pub fn dist_euclid<T: Scalar>(u: &[T], v: &[T]) -> Result<T, GeometryError> {
    Kernel::Euclidean.distance(u, v)
}

pub fn dist_minkowski<T: Scalar>(u: &[T], v: &[T], p: f64) -> Result<T, GeometryError> {
    Kernel::minkowski(p)?.distance(u, v)
}

/// Number of positions holding different raw values.
pub fn dist_hamming(u: &Record, v: &Record) -> Result<usize, GeometryError> {
    check_width(u.values().len(), v.values().len())?;
    Ok(hamming_unchecked(u, v))
}

#[inline]
pub(crate) fn hamming_unchecked(u: &Record, v: &Record) -> usize {
    u.values()
        .iter()
        .zip(v.values())
        .filter(|(a, b)| a != b)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Value;
    use proptest::prelude::*;

    #[test]
    fn worked_examples() {
        assert_eq!(dist_euclid(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(dist_minkowski(&[0.0, 0.0], &[3.0, 4.0], 1.0).unwrap(), 7.0);
        assert_eq!(dist_euclid(&[0.0f32, 0.0], &[3.0, 4.0]).unwrap(), 5.0f32);
        let a = Record::new(vec![Value::Categorical("M".into()), Value::Binary(1)]);
        let b = Record::new(vec![Value::Categorical("F".into()), Value::Binary(1)]);
        assert_eq!(dist_hamming(&a, &b).unwrap(), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            dist_euclid(&[0.0], &[1.0, 2.0]),
            Err(GeometryError::WidthMismatch { .. })
        ));
        assert!(matches!(
            dist_minkowski(&[0.0], &[1.0], 0.0),
            Err(GeometryError::InvalidOrder(_))
        ));
        assert!(dist_minkowski(&[0.0], &[1.0], -1.0).is_err());
    }

    fn triple() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
        (1usize..6).prop_flat_map(|w| {
            let v = || prop::collection::vec(-100.0f64..100.0, w);
            (v(), v(), v())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn metric_axioms((u, v, w) in triple(), p in 1.0f64..4.0) {
            for k in [Kernel::Euclidean, Kernel::Minkowski(1.0), Kernel::Minkowski(p)] {
                let uv = k.eval(&u, &v);
                prop_assert!((uv - k.eval(&v, &u)).abs() <= 1e-9);
                prop_assert!(uv <= k.eval(&u, &w) + k.eval(&w, &v) + 1e-9);
                prop_assert!(uv >= 0.0);
            }
            prop_assert_eq!(Kernel::Minkowski(2.0).eval(&u, &v), dist_euclid(&u, &v).unwrap());
        }
    }
}
