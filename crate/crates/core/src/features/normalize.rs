use serde::{Deserialize, Serialize};

use super::FeatureError;

/// Per-dimension training range used to map features onto `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationParams {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl NormalizationParams {
    /// Fits the range of each column. Fails only on empty or ragged input.
    pub fn fit<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, FeatureError> {
        let first = rows.first().ok_or(FeatureError::EmptyInput)?.as_ref();
        let dim = first.len();
        let mut min = first.to_vec();
        let mut max = first.to_vec();
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(FeatureError::DimensionMismatch { expected: dim, found: row.len() });
            }
            for (k, &v) in row.iter().enumerate() {
                min[k] = min[k].min(v);
                max[k] = max[k].max(v);
            }
        }
        Ok(NormalizationParams { min, max })
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    /// Maps train-min to -1 and train-max to +1. Zero-range dimensions map to 0;
    /// values outside the training range are not clamped.
    pub fn apply(&self, row: &[f64]) -> Result<Vec<f64>, FeatureError> {
        if row.len() != self.dim() {
            return Err(FeatureError::DimensionMismatch { expected: self.dim(), found: row.len() });
        }
        Ok(row
            .iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&v, (&lo, &hi))| {
                let range = hi - lo;
                if range > 0.0 {
                    2.0 * (v - lo) / range - 1.0
                } else {
                    0.0
                }
            })
            .collect())
    }
}

/// Fits normalization on a set of rows.
pub fn fit_normalization<R: AsRef<[f64]>>(rows: &[R]) -> Result<NormalizationParams, FeatureError> {
    NormalizationParams::fit(rows)
}

pub fn apply_normalization(row: &[f64], params: &NormalizationParams) -> Result<Vec<f64>, FeatureError> {
    params.apply(row)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_endpoints() {
        let p = fit_normalization(&[[2.0], [4.0]]).unwrap();
        assert_eq!(p.apply(&[2.0]).unwrap(), vec![-1.0]);
        assert_eq!(p.apply(&[4.0]).unwrap(), vec![1.0]);
        assert_eq!(p.apply(&[3.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn constant_dimension_maps_to_zero() {
        let p = fit_normalization(&[[5.0], [5.0], [5.0]]).unwrap();
        assert_eq!(p.apply(&[5.0]).unwrap(), vec![0.0]);
        assert_eq!(p.apply(&[9.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn no_clamp_outside_range() {
        let p = fit_normalization(&[[2.0], [4.0]]).unwrap();
        assert_eq!(p.apply(&[5.0]).unwrap(), vec![2.0]);
    }

    #[test]
    fn ragged_and_empty() {
        assert_eq!(fit_normalization::<[f64; 1]>(&[]).unwrap_err(), FeatureError::EmptyInput);
        let rows: Vec<Vec<f64>> = vec![vec![1.0, 2.0], vec![1.0]];
        assert!(fit_normalization(&rows).is_err());
    }
}
