use serde::{Deserialize, Serialize};

use super::cv::{cross_validate, CvConfig, SvmLearner};
use super::smo::SvmHyperParams;
use super::ClassifierError;
use crate::mapping::LabelSet;

pub const DEFAULT_C_GRID: [f64; 4] = [0.1, 1.0, 10.0, 100.0];
pub const DEFAULT_GAMMA_GRID: [f64; 6] = [0.01, 0.03, 1.0 / 29.0, 0.1, 0.3, 1.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub c: f64,
    pub gamma: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best: SvmHyperParams,
    pub best_accuracy: f64,
    /// Every evaluated point, ordered by (C, gamma).
    pub points: Vec<GridPoint>,
}

/// Picks the (C, gamma) pair with the best inner-CV accuracy; ties go to the
/// smaller C, then the smaller gamma. `base` supplies tolerance and pass limit.
#[allow(clippy::too_many_arguments)]
pub fn grid_search<R: AsRef<[f64]> + Sync>(
    x: &[R],
    labels: &[usize],
    label_set: LabelSet,
    c_grid: &[f64],
    gamma_grid: &[f64],
    inner_k: usize,
    seed: u64,
    base: &SvmHyperParams,
) -> Result<GridSearchResult, ClassifierError> {
    if c_grid.is_empty() || gamma_grid.is_empty() {
        return Err(ClassifierError::InvalidParams("hyperparameter grids must be non-empty".into()));
    }
    let mut cs = c_grid.to_vec();
    let mut gammas = gamma_grid.to_vec();
    cs.sort_by(f64::total_cmp);
    gammas.sort_by(f64::total_cmp);
    let mut points = Vec::new();
    let mut best: Option<(SvmHyperParams, f64)> = None;
    for &c in &cs {
        for &gamma in &gammas {
            let params = SvmHyperParams { c, gamma, ..*base };
            params.validate()?;
            let learner = SvmLearner { params, label_set };
            let cfg = CvConfig { k: inner_k, iterations: 1, seed };
            let accuracy = cross_validate(&learner, x, labels, label_set.class_count(), cfg)?.mean_accuracy;
            points.push(GridPoint { c, gamma, accuracy });
            if best.is_none_or(|(_, a)| accuracy > a) {
                best = Some((params, accuracy));
            }
        }
    }
    let (best, best_accuracy) = best.expect("non-empty grid");
    Ok(GridSearchResult { best, best_accuracy, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_grid() {
        let x: Vec<Vec<f64>> = (0..12).map(|i| vec![i as f64 / 12.0]).collect();
        let y: Vec<usize> = (0..12).map(|i| i * 3 / 12).collect();
        let r = grid_search(&x, &y, LabelSet::Three, &[3.0], &[0.5], 3, 0, &SvmHyperParams::default()).unwrap();
        assert_eq!((r.best.c, r.best.gamma), (3.0, 0.5));
        assert_eq!(r.points.len(), 1);
    }

    #[test]
    fn ties_prefer_small_c() {
        // Two far-apart blobs: every grid point classifies perfectly.
        let x: Vec<Vec<f64>> = (0..20).map(|i| vec![if i < 10 { -1.0 } else { 1.0 } + 0.01 * i as f64]).collect();
        let y: Vec<usize> = (0..20).map(|i| if i < 10 { 0 } else { 2 }).collect();
        let r = grid_search(&x, &y, LabelSet::Three, &[10.0, 1.0], &[1.0], 5, 0, &SvmHyperParams::default()).unwrap();
        assert_eq!(r.best_accuracy, 1.0);
        assert_eq!(r.best.c, 1.0);
    }

    #[test]
    fn empty_grid() {
        let x = vec![vec![0.0]; 4];
        assert!(grid_search(&x, &[0, 1, 0, 1], LabelSet::Three, &[], &[1.0], 2, 0, &SvmHyperParams::default()).is_err());
    }
}
