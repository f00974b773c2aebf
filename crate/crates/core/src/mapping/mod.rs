//! From Likert ratings to dominance scores and labels.
//!
//! Ratings on four adjectives are averaged per gait, combined into one scalar
//! along a dominance axis, normalized to `[-1, 1]` over the rated corpus, and
//! cut into five levels (or three after collapsing the extremes).

mod labels;
mod pca;
mod ratings;
mod reliability;
mod score;
mod stats;

use thiserror::Error;

pub use labels::{read_labels_csv, write_labels_csv, LABELS_HEADER, DominanceLabel, GaitLabel, LabelSet, Level3};
pub use pca::{adjective_correlations, pca_dominance_axis, CorrelationMatrix, PcaAxis};
pub use ratings::{
    aggregate_responses, read_responses_csv, write_responses_csv, Adjective, AdjectiveMeans, Aggregation, IncompleteGait,
    Likert, RatingRecord, RESPONSES_HEADER,
};
pub use reliability::{split_half_error, SplitHalfReport};
pub use score::{dominance_score, label_corpus, score_to_label, DominanceMapping, DominanceScore, ScoringAxis, PUBLISHED_AXIS};
pub use stats::{paired_t_test, student_t_two_tailed_p, TTest};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MappingError {
    #[error("likert value {0} outside 1..=5")]
    LikertRange(i64),
    #[error("unknown adjective `{0}`")]
    UnknownAdjective(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("score {0} outside [-1, 1]")]
    ScoreRange(f64),
    #[error("need at least {needed} gaits, found {found}")]
    TooFewGaits { needed: usize, found: usize },
    #[error("covariance of adjective means is zero")]
    RankZero,
    #[error("gait `{0}` lacks ratings for some adjectives")]
    IncompleteMeans(String),
    #[error("no corpus registered for score normalization")]
    NotRegistered,
    #[error("samples must have equal length, got {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 pairs, found {0}")]
    TooFewPairs(usize),
    #[error("paired differences have zero variance")]
    DegenerateSample,
    #[error("csv: {0}")]
    Csv(String),
}
