//! Principal-component projection fitted jointly on real and synthetic rows.

use super::encode::{check_width, EncodedMatrix};
use super::GeometryError;
use crate::scalar::Scalar;

/// Share of total variance the default component count must retain.
pub const DEFAULT_VARIANCE_TARGET: f64 = 0.95;

/// Linear map `v -> C (v - mean)`; the identity when it keeps every dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionModel<T> {
    mean: Vec<T>,
    /// k rows of length `width`, orthonormal.
    components: Vec<Vec<T>>,
    /// Eigenvalues of the covariance, descending.
    spectrum: Vec<T>,
    k: usize,
    width: usize,
    captured: T,
    identity: bool,
}

impl<T: Scalar> ProjectionModel<T> {
    pub fn identity(width: usize) -> Self {
        ProjectionModel {
            mean: vec![T::zero(); width],
            components: Vec::new(),
            spectrum: Vec::new(),
            k: width,
            width,
            captured: T::one(),
            identity: true,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    /// Fraction of the fit data's variance kept by the first k components.
    pub fn captured_variance(&self) -> T {
        self.captured
    }

    pub fn spectrum(&self) -> &[T] {
        &self.spectrum
    }

    pub fn project_point(&self, v: &[T]) -> Result<Vec<T>, GeometryError> {
        check_width(v.len(), self.width)?;
        Ok(self.project_unchecked(v))
    }

    fn project_unchecked(&self, v: &[T]) -> Vec<T> {
        if self.identity {
            return v.to_vec();
        }
        self.components
            .iter()
            .map(|c| {
                c.iter()
                    .zip(v.iter().zip(&self.mean))
                    .map(|(&w, (&x, &m))| w * (x - m))
                    .sum()
            })
            .collect()
    }

    pub fn project_matrix(&self, m: &EncodedMatrix<T>) -> Result<EncodedMatrix<T>, GeometryError> {
        check_width(m.width(), self.width)?;
        if self.identity {
            return Ok(m.clone());
        }
        let mut data = Vec::with_capacity(m.rows() * self.k);
        for r in m.iter_rows() {
            data.extend(self.project_unchecked(r));
        }
        Ok(EncodedMatrix::from_flat(data, self.k))
    }

    /// Maps projected coordinates back into the encoded space.
    pub fn reconstruct(&self, coords: &[T]) -> Result<Vec<T>, GeometryError> {
        check_width(coords.len(), self.k)?;
        if self.identity {
            return Ok(coords.to_vec());
        }
        let mut out = self.mean.clone();
        for (c, &a) in self.components.iter().zip(coords) {
            for (o, &w) in out.iter_mut().zip(c) {
                *o += a * w;
            }
        }
        Ok(out)
    }
}

/// PCA on the concatenation of `real` and `synth`.
///
/// Without `k`, keeps the fewest components reaching
/// [`DEFAULT_VARIANCE_TARGET`] of the variance. Keeping every dimension
/// yields the identity map.
pub fn fit_projection<T: Scalar>(
    real: &EncodedMatrix<T>,
    synth: &EncodedMatrix<T>,
    k: Option<usize>,
) -> Result<ProjectionModel<T>, GeometryError> {
    check_width(real.width(), synth.width())?;
    let width = real.width();
    let n = real.rows() + synth.rows();
    if n < 2 {
        return Err(GeometryError::TooFewRows(n));
    }
    if let Some(k) = k {
        if k > width {
            return Err(GeometryError::InvalidComponentCount { k, width });
        }
        if k == 0 {
            return Err(GeometryError::InvalidComponentCount { k, width });
        }
        if k == width {
            return Ok(ProjectionModel::identity(width));
        }
    }

    let rows = || real.iter_rows().chain(synth.iter_rows());
    let nf = T::of_usize(n);
    let mut mean = vec![T::zero(); width];
    for r in rows() {
        for (m, &x) in mean.iter_mut().zip(r) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= nf;
    }
    let mut cov = vec![vec![T::zero(); width]; width];
    for r in rows() {
        for i in 0..width {
            let di = r[i] - mean[i];
            for j in i..width {
                cov[i][j] += di * (r[j] - mean[j]);
            }
        }
    }
    let denom = T::of_usize(n - 1);
    for i in 0..width {
        for j in i..width {
            cov[i][j] /= denom;
            cov[j][i] = cov[i][j];
        }
    }

    let (values, vectors) = symmetric_eigen(cov);
    let mut order: Vec<usize> = (0..width).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).expect("finite eigenvalues"));
    let spectrum: Vec<T> = order.iter().map(|&i| values[i].max(T::zero())).collect();
    let total: T = spectrum.iter().copied().sum();
    if total <= T::zero() {
        return Ok(ProjectionModel::identity(width));
    }

    let k = match k {
        Some(k) => k,
        None => {
            let target = T::of(DEFAULT_VARIANCE_TARGET) * total;
            let mut acc = T::zero();
            let mut chosen = width;
            for (i, &l) in spectrum.iter().enumerate() {
                acc += l;
                if acc >= target {
                    chosen = i + 1;
                    break;
                }
            }
            chosen
        }
    };
    if k >= width {
        return Ok(ProjectionModel::identity(width));
    }

    let components = order[..k]
        .iter()
        .map(|&c| (0..width).map(|r| vectors[r][c]).collect())
        .collect();
    let captured = spectrum[..k].iter().copied().sum::<T>() / total;
    Ok(ProjectionModel {
        mean,
        components,
        spectrum,
        k,
        width,
        captured,
        identity: false,
    })
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
/// Returns eigenvalues and the eigenvector matrix (eigenvectors in columns).
pub fn symmetric_eigen<T: Scalar>(mut a: Vec<Vec<T>>) -> (Vec<T>, Vec<Vec<T>>) {
    let n = a.len();
    let mut v = vec![vec![T::zero(); n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = T::one();
    }
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut norm = T::zero();
        for i in 0..n {
            for j in 0..n {
                let sq = a[i][j] * a[i][j];
                norm += sq;
                if i != j {
                    off += sq;
                }
            }
        }
        if off <= eps * eps * norm || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::of(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}
