//! RBF one-vs-rest SVM over normalized gait features.

mod cv;
mod grid;
mod kernel;
mod model_io;
mod ovr;
mod smo;

use thiserror::Error;

use crate::features::FeatureError;

pub use cv::{assign_folds, cross_validate, Confusion, CvConfig, CvReport, FoldLearner, SvmFoldModel, SvmLearner};
pub use grid::{grid_search, GridPoint, GridSearchResult, DEFAULT_C_GRID, DEFAULT_GAMMA_GRID};
pub use kernel::{rbf_kernel, KernelMatrix};
pub use model_io::{load_model, model_from_json, model_to_json, save_model, MODEL_FORMAT, MODEL_VERSION};
pub use ovr::{argmax, predict, train_ovr, ClassScorer, OvrClassifier, OvrModel, OvrTraining, Prediction, TrainingMetadata};
pub use smo::{kkt_violations, train_binary_svm, BinarySvmModel, SvmHyperParams, TrainOutcome};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifierError {
    #[error("no training samples")]
    Empty,
    #[error("training data contains a single class")]
    SingleClass,
    #[error("expected {expected} values, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("cannot split {samples} samples into {k} folds")]
    FoldCount { k: usize, samples: usize },
    #[error("feature layout mismatch: model v{model}, features v{features}")]
    LayoutMismatch { model: u32, features: u32 },
    #[error("model file version {found} unsupported (expected {supported})")]
    ModelVersion { found: u32, supported: u32 },
    #[error("corrupt model file: {0}")]
    Corrupt(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}
