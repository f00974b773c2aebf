//! Runtime gait selection by dominance level and playback under navigation.

mod bench;
mod library;
mod navigation;
mod playback;
mod scene;

use thiserror::Error;

use crate::mapping::DominanceLabel;

pub use bench::{benchmark_update, run_benchmark, BenchConfig, BenchRow, BENCH_ROWS, MIN_BENCH_FRAMES};
pub use library::{select_gait, ConstraintPredicate, GaitLibrary, LibraryEntry, PreparedGait};
pub use navigation::{
    straight_line_step, NavigationOutput, NavigationState, Navigator, SourcePathNavigation, StraightLineNavigation,
};
pub use playback::{root_of, step_character, CharacterState};
pub use scene::{write_trace_csv, CharacterConfig, Scene, SceneConfig, TraceRow, TRACE_HEADER};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("gait library is empty")]
    EmptyLibrary,
    #[error("no gait at level {level} satisfies `{predicate}`")]
    NoMatchingGait { level: DominanceLabel, predicate: String },
    #[error("duplicate gait id `{0}`")]
    DuplicateGait(String),
    #[error("gait `{0}` has no label")]
    UnlabeledGait(String),
    #[error("navigation failed for character {character}: {message}")]
    Navigation { character: usize, message: String },
    #[error("time step {0} must be positive")]
    InvalidTimeStep(f64),
    #[error("scene config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}
