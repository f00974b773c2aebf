//! Perceived-dominance toolkit for walking characters.
//!
//! Motion capture is parsed and retargeted onto a 16-joint skeleton
//! ([`mocap`]), reduced to a 29-value posture and movement descriptor
//! ([`features`]), labeled from questionnaire ratings ([`mapping`]), learned
//! by an RBF one-vs-rest SVM ([`classifier`]) and used at runtime to pick and
//! play gaits of a requested dominance level ([`engine`]).

pub mod classifier;
pub mod classify;
pub mod engine;
pub mod features;
pub mod linalg;
pub mod mapping;
pub mod mocap;
pub mod synth;

use thiserror::Error;

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Mocap(#[from] mocap::MocapError),
    #[error(transparent)]
    Feature(#[from] features::FeatureError),
    #[error(transparent)]
    Mapping(#[from] mapping::MappingError),
    #[error(transparent)]
    Classifier(#[from] classifier::ClassifierError),
    #[error(transparent)]
    Engine(#[from] engine::EngineError),
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/gaits.md")]
    mod gaits {}
    #[doc = include_str!("../../../book/src/features.md")]
    mod features {}
    #[doc = include_str!("../../../book/src/labels.md")]
    mod labels {}
    #[doc = include_str!("../../../book/src/classifier.md")]
    mod classifier {}
    #[doc = include_str!("../../../book/src/engine.md")]
    mod engine {}
    #[doc = include_str!("../../../book/src/tools.md")]
    mod tools {}
}
