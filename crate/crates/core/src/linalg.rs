//! Small dense symmetric eigensolver (cyclic Jacobi rotations).

/// Eigen-decomposition of a symmetric matrix.
///
/// Returns eigenvalues in descending order and the matching unit eigenvectors
/// as columns (`vectors[row][k]` is component `row` of eigenvector `k`).
/// Only the upper triangle of `a` is read.
#[allow(clippy::needless_range_loop)]
pub fn symmetric_eigen<const N: usize>(a: &[[f64; N]; N]) -> ([f64; N], [[f64; N]; N]) {
    let mut m = *a;
    for i in 0..N {
        for j in 0..i {
            m[i][j] = m[j][i];
        }
    }
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let scale: f64 = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return ([0.0; N], v);
    }

    for _sweep in 0..100 {
        let off: f64 = (0..N).flat_map(|i| (i + 1..N).map(move |j| (i, j))).map(|(i, j)| m[i][j] * m[i][j]).sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in m.iter_mut() {
                    let mkp = row[p];
                    let mkq = row[q];
                    row[p] = c * mkp - s * mkq;
                    row[q] = s * mkp + c * mkq;
                }
                for k in 0..N {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&x, &y| m[y][y].total_cmp(&m[x][x]));
    let values = std::array::from_fn(|k| m[order[k]][order[k]]);
    let vectors = std::array::from_fn(|row| std::array::from_fn(|k| v[row][order[k]]));
    (values, vectors)
}
