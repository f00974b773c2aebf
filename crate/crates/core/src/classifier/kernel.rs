/// `exp(-gamma * |x - z|^2)`.
pub fn rbf_kernel(x: &[f64], z: &[f64], gamma: f64) -> f64 {
    debug_assert_eq!(x.len(), z.len());
    let d2: f64 = x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum();
    (-gamma * d2).exp()
}

/// Dense symmetric Gram matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    n: usize,
    values: Vec<f64>,
}

impl KernelMatrix {
    pub fn rbf<R: AsRef<[f64]>>(rows: &[R], gamma: f64) -> Self {
        let n = rows.len();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            values[i * n + i] = 1.0;
            for j in i + 1..n {
                let k = rbf_kernel(rows[i].as_ref(), rows[j].as_ref(), gamma);
                values[i * n + j] = k;
                values[j * n + i] = k;
            }
        }
        KernelMatrix { n, values }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_values() {
        assert_eq!(rbf_kernel(&[0.3, -2.0], &[0.3, -2.0], 5.0), 1.0);
        assert!((rbf_kernel(&[0.0], &[1.0], 1.0) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn small_gamma_tends_to_one() {
        let mut last = 0.0;
        for g in [1.0, 0.1, 0.01, 0.001, 1e-6] {
            let k = rbf_kernel(&[0.0, 0.0], &[1.0, 2.0], g);
            assert!(k > last);
            last = k;
        }
        assert!((last - 1.0).abs() < 1e-5);
    }

    #[test]
    fn matrix_is_symmetric() {
        let rows = [[0.0, 1.0], [1.0, 0.5], [-0.3, 0.2]];
        let k = KernelMatrix::rbf(&rows, 0.7);
        for i in 0..3 {
            assert_eq!(k.get(i, i), 1.0);
            for j in 0..3 {
                assert_eq!(k.get(i, j), k.get(j, i));
                assert_eq!(k.get(i, j), rbf_kernel(&rows[i], &rows[j], 0.7));
            }
        }
    }
}
