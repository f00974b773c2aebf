use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::labels::{DominanceLabel, GaitLabel};
use super::pca::PcaAxis;
use super::ratings::AdjectiveMeans;
use super::MappingError;

/// Weights in (submissive, withdrawn, dominant, confident) order.
pub const PUBLISHED_AXIS: [f64; 4] = [-0.44, -0.57, 0.43, 0.54];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoringAxis {
    pub coefficients: [f64; 4],
}

impl Default for ScoringAxis {
    fn default() -> Self {
        ScoringAxis { coefficients: PUBLISHED_AXIS }
    }
}

impl From<&PcaAxis> for ScoringAxis {
    fn from(axis: &PcaAxis) -> Self {
        ScoringAxis { coefficients: axis.coefficients }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceScore {
    pub raw: f64,
    pub normalized: f64,
}

/// Raw score: weighted sum of the four adjective means.
pub fn dominance_score(means: &[f64; 4], axis: &ScoringAxis) -> f64 {
    means.iter().zip(&axis.coefficients).map(|(m, c)| m * c).sum()
}

pub fn score_to_label(r: f64) -> Result<DominanceLabel, MappingError> {
    if !(-1.0..=1.0).contains(&r) {
        return Err(MappingError::ScoreRange(r));
    }
    Ok(if r < -0.8 {
        DominanceLabel::HS
    } else if r < -0.5 {
        DominanceLabel::S
    } else if r <= 0.5 {
        DominanceLabel::N
    } else if r <= 0.8 {
        DominanceLabel::D
    } else {
        DominanceLabel::HD
    })
}

/// Raw-to-normalized mapping fitted on a rated corpus: the corpus minimum maps
/// to -1 and its maximum to +1.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DominanceMapping {
    pub axis: ScoringAxis,
    range: Option<(f64, f64)>,
    scores: BTreeMap<String, DominanceScore>,
}

impl DominanceMapping {
    pub fn new(axis: ScoringAxis) -> Self {
        DominanceMapping { axis, range: None, scores: BTreeMap::new() }
    }

    /// Replaces any previously registered corpus.
    pub fn register(&mut self, means: &[AdjectiveMeans]) -> Result<(), MappingError> {
        if means.is_empty() {
            return Err(MappingError::TooFewGaits { needed: 1, found: 0 });
        }
        let raws: Vec<f64> = means.iter().map(|m| dominance_score(&m.means, &self.axis)).collect();
        let lo = raws.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = raws.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.range = Some((lo, hi));
        self.scores.clear();
        for (m, raw) in means.iter().zip(raws) {
            let normalized = self.normalize(raw)?;
            self.scores.insert(m.gait_id.clone(), DominanceScore { raw, normalized });
        }
        Ok(())
    }

    pub fn is_registered(&self) -> bool {
        self.range.is_some()
    }

    /// Observed raw range of the registered corpus.
    pub fn range(&self) -> Option<(f64, f64)> {
        self.range
    }

    /// Raw scores outside the registered range clamp to the nearest end; a
    /// corpus with a single distinct score maps everything to 0.
    pub fn normalize(&self, raw: f64) -> Result<f64, MappingError> {
        let (lo, hi) = self.range.ok_or(MappingError::NotRegistered)?;
        if hi == lo {
            return Ok(0.0);
        }
        Ok((2.0 * (raw - lo) / (hi - lo) - 1.0).clamp(-1.0, 1.0))
    }

    /// Score of a gait in the registered corpus.
    pub fn score(&self, gait_id: &str) -> Option<DominanceScore> {
        self.scores.get(gait_id).copied()
    }

    pub fn scores(&self) -> impl Iterator<Item = (&str, &DominanceScore)> {
        self.scores.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn label(&self, gait_id: &str) -> Option<GaitLabel> {
        let s = self.score(gait_id)?;
        let label5 = score_to_label(s.normalized).ok()?;
        Some(GaitLabel { gait_id: gait_id.to_string(), raw: s.raw, normalized: s.normalized, label5, label3: label5.collapse() })
    }
}

/// Scores, normalizes and labels every gait of a corpus, in input order.
pub fn label_corpus(means: &[AdjectiveMeans], axis: &ScoringAxis) -> Result<(DominanceMapping, Vec<GaitLabel>), MappingError> {
    let mut mapping = DominanceMapping::new(*axis);
    mapping.register(means)?;
    let labels = means.iter().map(|m| mapping.label(&m.gait_id).expect("registered gait")).collect();
    Ok((mapping, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn means(rows: &[[f64; 4]]) -> Vec<AdjectiveMeans> {
        rows.iter()
            .enumerate()
            .map(|(i, r)| AdjectiveMeans { gait_id: format!("g{i}"), means: *r, responses: 1 })
            .collect()
    }

    #[test]
    fn centred_extreme_score() {
        let raw = dominance_score(&[-1.0, -1.0, 1.0, 1.0], &ScoringAxis::default());
        assert!((raw - 1.98).abs() < 1e-12);
        assert_eq!(dominance_score(&[0.0; 4], &ScoringAxis::default()), 0.0);
    }

    #[test]
    fn boundary_vector() {
        let r = [-1.0, -0.9, -0.8, -0.5, 0.0, 0.5, 0.65, 0.8, 0.9, 1.0];
        let got: Vec<&str> = r.iter().map(|&x| score_to_label(x).unwrap().name()).collect();
        assert_eq!(got, ["HS", "HS", "S", "N", "N", "N", "D", "D", "HD", "HD"]);
        assert!(score_to_label(1.0 + 1e-12).is_err());
        assert!(score_to_label(f64::NAN).is_err());
    }

    #[test]
    fn normalization_endpoints() {
        let m = means(&[[1.0, 1.0, 5.0, 5.0], [3.0, 3.0, 3.0, 3.0], [5.0, 5.0, 1.0, 1.0]]);
        let (mapping, labels) = label_corpus(&m, &ScoringAxis::default()).unwrap();
        assert_eq!(labels[0].normalized, 1.0);
        assert_eq!(labels[2].normalized, -1.0);
        assert_eq!(labels[0].label5, DominanceLabel::HD);
        assert_eq!(labels[2].label5, DominanceLabel::HS);
        assert_eq!(mapping.score("g1").unwrap().raw, labels[1].raw);
        assert_eq!(mapping.score("missing"), None);
    }

    #[test]
    fn unregistered() {
        assert_eq!(DominanceMapping::default().normalize(0.3), Err(MappingError::NotRegistered));
    }

    #[test]
    fn single_score_maps_to_neutral() {
        let (_, labels) = label_corpus(&means(&[[2.0; 4], [2.0; 4]]), &ScoringAxis::default()).unwrap();
        assert!(labels.iter().all(|l| l.normalized == 0.0 && l.label5 == DominanceLabel::N));
    }
}
