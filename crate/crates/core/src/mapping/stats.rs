use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::MappingError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    /// Two-tailed p-value.
    pub p: f64,
}

pub fn student_t_two_tailed_p(t: f64, df: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    (2.0 * dist.sf(t.abs())).min(1.0)
}

/// Paired-samples t-test on `x[i] - y[i]` with `n - 1` degrees of freedom.
pub fn paired_t_test(x: &[f64], y: &[f64]) -> Result<TTest, MappingError> {
    if x.len() != y.len() {
        return Err(MappingError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 2 {
        return Err(MappingError::TooFewPairs(n));
    }
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let mean = d.iter().sum::<f64>() / n as f64;
    let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    if var == 0.0 {
        return Err(MappingError::DegenerateSample);
    }
    let t = mean / (var / n as f64).sqrt();
    let df = (n - 1) as f64;
    Ok(TTest { t, df, p: student_t_two_tailed_p(t, df) })
}
