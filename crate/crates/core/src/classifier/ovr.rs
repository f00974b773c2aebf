use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::features::{GaitFeatures, NormalizationParams, FEATURE_LAYOUT_VERSION};
use crate::mapping::LabelSet;

use super::kernel::KernelMatrix;
use super::smo::{train_with_kernel, BinarySvmModel, SvmHyperParams, TrainOutcome};
use super::ClassifierError;

/// Per-class scorer. Classes absent from the training data score a constant -1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ClassScorer {
    Trained(BinarySvmModel),
    Degenerate,
}

impl ClassScorer {
    pub fn decision(&self, x: &[f64]) -> f64 {
        match self {
            ClassScorer::Trained(m) => m.decision(x),
            ClassScorer::Degenerate => -1.0,
        }
    }
}

/// One-vs-rest scorers over already-normalized features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OvrClassifier {
    pub label_set: LabelSet,
    pub scorers: Vec<ClassScorer>,
}

/// Convergence record for each class; `None` for degenerate classes.
#[derive(Debug, Clone, PartialEq)]
pub struct OvrTraining {
    pub classifier: OvrClassifier,
    pub outcomes: Vec<Option<TrainOutcome>>,
}

impl OvrTraining {
    pub fn converged(&self) -> bool {
        self.outcomes.iter().flatten().all(|o| o.converged)
    }
}

/// Index of the largest value; ties go to the lower index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

impl OvrClassifier {
    pub fn decision_values(&self, x: &[f64]) -> Vec<f64> {
        self.scorers.iter().map(|s| s.decision(x)).collect()
    }

    /// Class index with the highest decision value, lower levels winning ties.
    pub fn predict(&self, x: &[f64]) -> usize {
        argmax(&self.decision_values(x))
    }
}

pub(crate) fn class_seed(seed: u64, class: usize) -> u64 {
    seed ^ (class as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Trains one binary scorer per class of `label_set`. `labels` are class indices.
pub fn train_ovr<R: AsRef<[f64]> + Sync>(
    x: &[R],
    labels: &[usize],
    label_set: LabelSet,
    params: &SvmHyperParams,
    seed: u64,
) -> Result<OvrTraining, ClassifierError> {
    params.validate()?;
    if x.is_empty() {
        return Err(ClassifierError::Empty);
    }
    if x.len() != labels.len() {
        return Err(ClassifierError::DimensionMismatch { expected: x.len(), found: labels.len() });
    }
    let classes = label_set.class_count();
    if let Some(&bad) = labels.iter().find(|&&l| l >= classes) {
        return Err(ClassifierError::InvalidParams(format!("class index {bad} outside {classes} classes")));
    }
    let mut present = vec![false; classes];
    for &l in labels {
        present[l] = true;
    }
    if present.iter().filter(|&&p| p).count() < 2 {
        return Err(ClassifierError::SingleClass);
    }

    let kernel = KernelMatrix::rbf(x, params.gamma);
    let results: Vec<Result<Option<TrainOutcome>, ClassifierError>> = (0..classes)
        .into_par_iter()
        .map(|class| {
            if !present[class] {
                return Ok(None);
            }
            let y: Vec<f64> = labels.iter().map(|&l| if l == class { 1.0 } else { -1.0 }).collect();
            train_with_kernel(x, &y, &kernel, params, class_seed(seed, class)).map(Some)
        })
        .collect();
    let outcomes = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let scorers = outcomes
        .iter()
        .map(|o| match o {
            Some(o) => ClassScorer::Trained(o.model.clone()),
            None => ClassScorer::Degenerate,
        })
        .collect();
    Ok(OvrTraining { classifier: OvrClassifier { label_set, scorers }, outcomes })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub seed: u64,
    pub params: SvmHyperParams,
    pub samples: usize,
    /// Classes that had no training examples.
    pub degenerate_classes: Vec<String>,
    pub converged: bool,
}

/// A deployable classifier: normalization, scorers and provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OvrModel {
    pub classifier: OvrClassifier,
    pub normalization: NormalizationParams,
    pub layout_version: u32,
    pub metadata: TrainingMetadata,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub class: usize,
    pub label: String,
    pub decision_values: Vec<f64>,
}

impl OvrModel {
    /// Fits normalization on `features`, then trains the scorers.
    pub fn train(
        features: &[GaitFeatures],
        labels: &[usize],
        label_set: LabelSet,
        params: &SvmHyperParams,
        seed: u64,
    ) -> Result<Self, ClassifierError> {
        if let Some(f) = features.iter().find(|f| f.layout_version != FEATURE_LAYOUT_VERSION) {
            return Err(ClassifierError::LayoutMismatch { model: FEATURE_LAYOUT_VERSION, features: f.layout_version });
        }
        let raw: Vec<&[f64]> = features.iter().map(|f| f.as_slice()).collect();
        let normalization = NormalizationParams::fit(&raw)?;
        let x = raw.iter().map(|r| normalization.apply(r)).collect::<Result<Vec<_>, _>>()?;
        let training = train_ovr(&x, labels, label_set, params, seed)?;
        let names = label_set.class_names();
        let degenerate_classes = training
            .classifier
            .scorers
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, ClassScorer::Degenerate))
            .map(|(i, _)| names[i].to_string())
            .collect();
        Ok(OvrModel {
            metadata: TrainingMetadata {
                seed,
                params: *params,
                samples: features.len(),
                degenerate_classes,
                converged: training.converged(),
            },
            classifier: training.classifier,
            normalization,
            layout_version: FEATURE_LAYOUT_VERSION,
        })
    }

    pub fn label_set(&self) -> LabelSet {
        self.classifier.label_set
    }

    pub fn predict(&self, features: &GaitFeatures) -> Result<Prediction, ClassifierError> {
        if features.layout_version != self.layout_version {
            return Err(ClassifierError::LayoutMismatch { model: self.layout_version, features: features.layout_version });
        }
        let x = self.normalization.apply(features.as_slice())?;
        let decision_values = self.classifier.decision_values(&x);
        let class = argmax(&decision_values);
        let label = self.label_set().class_name(class).unwrap_or("?").to_string();
        Ok(Prediction { class, label, decision_values })
    }
}

pub fn predict(model: &OvrModel, features: &GaitFeatures) -> Result<Prediction, ClassifierError> {
    model.predict(features)
}
