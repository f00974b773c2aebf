//! First principal component via nalgebra's symmetric eigensolver.

use nalgebra::{Matrix4, SymmetricEigen};

/// Unit loadings (third entry made positive) and explained-variance fraction.
pub fn first_component(rows: &[[f64; 4]]) -> ([f64; 4], f64) {
    let n = rows.len() as f64;
    let mut mean = [0.0; 4];
    for r in rows {
        for k in 0..4 {
            mean[k] += r[k] / n;
        }
    }
    let mut cov: Matrix4<f64> = Matrix4::zeros();
    for r in rows {
        for i in 0..4 {
            for j in 0..4 {
                cov[(i, j)] += (r[i] - mean[i]) * (r[j] - mean[j]) / (n - 1.0);
            }
        }
    }
    let eig: SymmetricEigen<f64, nalgebra::U4> = SymmetricEigen::new(cov);
    let values: [f64; 4] = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2], eig.eigenvalues[3]];
    let top = (0..4usize).max_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    let v = eig.eigenvectors.column(top);
    let sign = if v[2] < 0.0 { -1.0 } else { 1.0 };
    let coefficients = [v[0] * sign, v[1] * sign, v[2] * sign, v[3] * sign];
    (coefficients, values[top] / cov.trace())
}
