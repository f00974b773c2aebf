//! Soft-margin SVM optimality check.

fn rbf(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let mut d = 0.0;
    for i in 0..a.len() {
        d += (a[i] - b[i]).powi(2);
    }
    (-gamma * d).exp()
}

/// Decision value `sum_j alpha_j y_j K(x_j, x) + b`.
pub fn decision(x: &[Vec<f64>], y: &[f64], alphas: &[f64], bias: f64, gamma: f64, at: &[f64]) -> f64 {
    (0..x.len()).map(|j| alphas[j] * y[j] * rbf(&x[j], at, gamma)).sum::<f64>() + bias
}

/// Indices violating the KKT conditions by more than `tol`; also fails the
/// box and equality constraints.
#[allow(clippy::too_many_arguments)]
pub fn kkt_violations(x: &[Vec<f64>], y: &[f64], alphas: &[f64], bias: f64, c: f64, gamma: f64, tol: f64) -> Vec<usize> {
    let mut bad = vec![];
    let balance: f64 = alphas.iter().zip(y).map(|(a, y)| a * y).sum();
    for i in 0..x.len() {
        let a = alphas[i];
        let m = y[i] * decision(x, y, alphas, bias, gamma, &x[i]);
        let ok = if !(0.0..=c).contains(&a) {
            false
        } else if a == 0.0 {
            m >= 1.0 - tol
        } else if a == c {
            m <= 1.0 + tol
        } else {
            (m - 1.0).abs() <= tol
        };
        if !ok || balance.abs() > 1e-6 * c * x.len() as f64 {
            bad.push(i);
        }
    }
    bad
}
