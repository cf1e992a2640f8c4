use nalgebra::{DMatrix, SymmetricEigen};

use crate::encode::Table;

/// Projects both tables onto the leading principal axes of their union.
/// Returns the inputs unchanged when every dimension is kept.
pub fn project(y: &Table, z: &Table, k: Option<usize>) -> (Table, Table) {
    let width = y[0].len();
    let all: Vec<&Vec<f64>> = y.iter().chain(z).collect();
    let n = all.len();
    let data = DMatrix::from_fn(n, width, |i, j| all[i][j]);
    let mean = data.row_mean();
    let mut centered = data.clone();
    for i in 0..n {
        for j in 0..width {
            centered[(i, j)] -= mean[j];
        }
    }
    let cov = centered.transpose() * &centered / (n as f64 - 1.0);
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..width).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
    let total: f64 = values.iter().sum();
    if total <= 0.0 {
        return (y.clone(), z.clone());
    }
    let k = k.unwrap_or_else(|| {
        let mut acc = 0.0;
        for (i, v) in values.iter().enumerate() {
            acc += v;
            if acc >= 0.95 * total {
                return i + 1;
            }
        }
        width
    });
    if k >= width {
        return (y.clone(), z.clone());
    }
    let map = |t: &Table| -> Table {
        t.iter()
            .map(|row| {
                order[..k]
                    .iter()
                    .map(|&c| {
                        (0..width)
                            .map(|j| (row[j] - mean[j]) * eig.eigenvectors[(j, c)])
                            .sum()
                    })
                    .collect()
            })
            .collect()
    };
    (map(y), map(z))
}
