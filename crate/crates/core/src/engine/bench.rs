use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::mapping::DominanceLabel;
use crate::mocap::Vec3;

use super::library::{select_gait, ConstraintPredicate, GaitLibrary};
use super::navigation::StraightLineNavigation;
use super::playback::CharacterState;
use super::scene::Scene;
use super::EngineError;

/// Character counts of the published timing table.
pub const BENCH_ROWS: [usize; 7] = [1, 2, 5, 10, 20, 50, 100];
pub const MIN_BENCH_FRAMES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub rows: Vec<usize>,
    /// Timed frames per measurement; raised to at least 1000.
    pub frames: usize,
    pub seed: u64,
    pub dt: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { rows: BENCH_ROWS.to_vec(), frames: MIN_BENCH_FRAMES, seed: 0, dt: 1.0 / 30.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub characters: usize,
    pub frames: usize,
    /// Mean milliseconds per frame update with gaits drawn regardless of label.
    pub without_dominance_ms: f64,
    /// Mean milliseconds per frame update with gaits selected by dominance level.
    pub with_dominance_ms: f64,
}

/// Characters on a circle walking to the opposite side.
fn build_scene(library: &GaitLibrary, n: usize, seed: u64, dominance: bool) -> Result<Scene, EngineError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let levels: Vec<DominanceLabel> = DominanceLabel::ALL.into_iter().filter(|&l| library.count(l) > 0).collect();
    if levels.is_empty() {
        return Err(EngineError::EmptyLibrary);
    }
    let predicate = ConstraintPredicate::max_walking_speed(f64::INFINITY);
    let radius = 10.0;
    let mut characters = Vec::with_capacity(n);
    let mut goals = Vec::with_capacity(n);
    for i in 0..n {
        let angle = std::f64::consts::TAU * i as f64 / n as f64;
        let spawn = Vec3::new(radius * angle.sin(), 0.0, radius * angle.cos());
        let (label, gait) = if dominance {
            let label = levels[i % levels.len()];
            (label, select_gait(library, label, &predicate, &mut rng)?)
        } else {
            let e = &library.entries()[rng.random_range(0..library.len())];
            (e.label, e.gait.clone())
        };
        let heading = (-spawn.x).atan2(-spawn.z);
        characters.push(CharacterState::new(i, label, gait, spawn, heading));
        goals.push(-spawn);
    }
    let nav = StraightLineNavigation::new(goals, vec![1.3; n]);
    Ok(Scene::new(characters, Box::new(nav)))
}

/// Mean wall-clock milliseconds per scene update for `n` characters.
pub fn benchmark_update(
    library: &GaitLibrary,
    n: usize,
    frames: usize,
    seed: u64,
    dt: f64,
    dominance: bool,
) -> Result<f64, EngineError> {
    let frames = frames.max(MIN_BENCH_FRAMES);
    let mut scene = build_scene(library, n, seed, dominance)?;
    for _ in 0..10 {
        scene.step(dt)?;
    }
    let start = Instant::now();
    for _ in 0..frames {
        scene.step(dt)?;
    }
    std::hint::black_box(&scene.joints);
    Ok(start.elapsed().as_secs_f64() * 1e3 / frames as f64)
}

pub fn run_benchmark(library: &GaitLibrary, config: &BenchConfig) -> Result<Vec<BenchRow>, EngineError> {
    if !(config.dt > 0.0 && config.dt.is_finite()) {
        return Err(EngineError::InvalidTimeStep(config.dt));
    }
    let frames = config.frames.max(MIN_BENCH_FRAMES);
    config
        .rows
        .iter()
        .map(|&n| {
            Ok(BenchRow {
                characters: n,
                frames,
                without_dominance_ms: benchmark_update(library, n, frames, config.seed, config.dt, false)?,
                with_dominance_ms: benchmark_update(library, n, frames, config.seed, config.dt, true)?,
            })
        })
        .collect()
}
