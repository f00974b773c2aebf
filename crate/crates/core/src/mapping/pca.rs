use serde::{Deserialize, Serialize};

use crate::linalg::symmetric_eigen;

use super::ratings::{Adjective, AdjectiveMeans};
use super::MappingError;

/// Pearson correlations between adjective columns. A pair involving a
/// constant column is undefined (`None`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub values: [[Option<f64>; 4]; 4],
}

impl CorrelationMatrix {
    pub fn get(&self, a: Adjective, b: Adjective) -> Option<f64> {
        self.values[a.index()][b.index()]
    }
}

fn columns(means: &[AdjectiveMeans]) -> [Vec<f64>; 4] {
    std::array::from_fn(|k| means.iter().map(|m| m.means[k]).collect())
}

fn centered(col: &[f64]) -> Vec<f64> {
    let mean = col.iter().sum::<f64>() / col.len() as f64;
    col.iter().map(|v| v - mean).collect()
}

pub fn adjective_correlations(means: &[AdjectiveMeans]) -> Result<CorrelationMatrix, MappingError> {
    if means.len() < 2 {
        return Err(MappingError::TooFewGaits { needed: 2, found: means.len() });
    }
    let cols = columns(means).map(|c| centered(&c));
    let norms = cols.clone().map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt());
    let mut values = [[None; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            if norms[i] == 0.0 || norms[j] == 0.0 {
                continue;
            }
            let r = if i == j {
                1.0
            } else {
                let dot: f64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
                (dot / (norms[i] * norms[j])).clamp(-1.0, 1.0)
            };
            values[i][j] = Some(r);
            values[j][i] = Some(r);
        }
    }
    Ok(CorrelationMatrix { values })
}

/// First principal component of the adjective means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaAxis {
    /// Unit loadings in [`Adjective`] order, oriented so `dominant` is positive.
    pub coefficients: [f64; 4],
    /// Fraction of total variance along the axis.
    pub explained_variance: f64,
}

/// Principal axis of the mean-centered 4-column matrix of per-gait means.
pub fn pca_dominance_axis(means: &[AdjectiveMeans]) -> Result<PcaAxis, MappingError> {
    if means.len() < 4 {
        return Err(MappingError::TooFewGaits { needed: 4, found: means.len() });
    }
    let cols = columns(means).map(|c| centered(&c));
    let n = means.len() as f64;
    let mut cov = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let c = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum::<f64>() / (n - 1.0);
            cov[i][j] = c;
            cov[j][i] = c;
        }
    }
    let trace: f64 = (0..4).map(|i| cov[i][i]).sum();
    if trace <= 0.0 {
        return Err(MappingError::RankZero);
    }
    let (values, vectors) = symmetric_eigen(&cov);
    let mut coefficients: [f64; 4] = std::array::from_fn(|row| vectors[row][0]);
    let norm = coefficients.iter().map(|c| c * c).sum::<f64>().sqrt();
    for c in coefficients.iter_mut() {
        *c /= norm;
    }
    // Orient by the dominant loading; fall back to the largest loading when it vanishes.
    let pivot = if coefficients[Adjective::Dominant.index()].abs() > 1e-12 {
        Adjective::Dominant.index()
    } else {
        (0..4).max_by(|&a, &b| coefficients[a].abs().total_cmp(&coefficients[b].abs())).unwrap()
    };
    if coefficients[pivot] < 0.0 {
        for c in coefficients.iter_mut() {
            *c = -*c;
        }
    }
    Ok(PcaAxis { coefficients, explained_variance: (values[0] / trace).clamp(0.0, 1.0) })
}
