use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::mapping::DominanceLabel;
use crate::mocap::{Vec3, JOINT_COUNT};

use super::library::{select_gait, ConstraintPredicate, GaitLibrary};
use super::navigation::{NavigationState, Navigator, StraightLineNavigation};
use super::playback::{step_character, CharacterState};
use super::EngineError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterConfig {
    pub level: DominanceLabel,
    pub spawn: [f64; 3],
    pub goal: [f64; 3],
    /// Navigation speed cap, m/s.
    pub speed: f64,
    /// Only gaits whose own walking speed is at most this are eligible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_gait_speed: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneConfig {
    #[serde(default)]
    pub seed: u64,
    /// Simulation time step, seconds.
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub frames: usize,
    pub characters: Vec<CharacterConfig>,
}

fn default_dt() -> f64 {
    1.0 / 30.0
}

impl SceneConfig {
    pub fn from_json(text: &str) -> Result<Self, EngineError> {
        let cfg: SceneConfig = serde_json::from_str(text).map_err(|e| EngineError::Config(e.to_string()))?;
        if !(cfg.dt > 0.0 && cfg.dt.is_finite()) {
            return Err(EngineError::InvalidTimeStep(cfg.dt));
        }
        if let Some((i, c)) = cfg.characters.iter().enumerate().find(|(_, c)| !(c.speed >= 0.0 && c.speed.is_finite())) {
            return Err(EngineError::Config(format!("characters[{i}].speed: {} is not a non-negative number", c.speed)));
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, EngineError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| EngineError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// Per-frame record of one character.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub frame: usize,
    pub time: f64,
    pub character: usize,
    pub gait_id: String,
    pub level: DominanceLabel,
    pub root: [f64; 3],
    pub heading: f64,
    pub cursor: f64,
}

/// Characters advancing together against a shared navigation state.
pub struct Scene {
    pub characters: Vec<CharacterState>,
    pub env: NavigationState,
    pub joints: Vec<[Vec3; JOINT_COUNT]>,
    navigation: Box<dyn Navigator>,
    frame: usize,
}

impl Scene {
    pub fn new(characters: Vec<CharacterState>, navigation: Box<dyn Navigator>) -> Self {
        let env = NavigationState::new(characters.iter().map(|c| c.root).collect());
        let joints = characters.iter().map(|c| c.joints()).collect();
        Scene { characters, env, joints, navigation, frame: 0 }
    }

    /// Selects a gait for each configured character and routes them in straight lines.
    pub fn from_config(config: &SceneConfig, library: &GaitLibrary) -> Result<Self, EngineError> {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut characters = Vec::with_capacity(config.characters.len());
        for (id, c) in config.characters.iter().enumerate() {
            let predicate = match c.max_gait_speed {
                Some(v) => ConstraintPredicate::max_walking_speed(v),
                None => ConstraintPredicate::always(),
            };
            let gait = select_gait(library, c.level, &predicate, &mut rng)?;
            let spawn = Vec3::from(c.spawn);
            let to_goal = Vec3::from(c.goal) - spawn;
            let heading = if to_goal.x.hypot(to_goal.z) > 0.0 { to_goal.x.atan2(to_goal.z) } else { 0.0 };
            characters.push(CharacterState::new(id, c.level, gait, spawn, heading));
        }
        let nav = StraightLineNavigation::new(
            config.characters.iter().map(|c| Vec3::from(c.goal)).collect(),
            config.characters.iter().map(|c| c.speed).collect(),
        );
        Ok(Scene::new(characters, Box::new(nav)))
    }

    pub fn frame(&self) -> usize {
        self.frame
    }

    /// Advances every character by `dt`. All navigation queries see the state
    /// of the previous step.
    pub fn step(&mut self, dt: f64) -> Result<(), EngineError> {
        let previous = std::mem::take(&mut self.env);
        let mut next = NavigationState { time: previous.time + dt, ..previous.clone() };
        for (i, c) in self.characters.iter_mut().enumerate() {
            self.joints[i] = step_character(c, self.navigation.as_mut(), &previous, dt)?;
            next.velocities[i] = (c.root - previous.positions[i]) / dt;
            next.positions[i] = c.root;
        }
        self.env = next;
        self.frame += 1;
        Ok(())
    }

    pub fn trace_rows(&self) -> Vec<TraceRow> {
        self.characters
            .iter()
            .map(|c| TraceRow {
                frame: self.frame,
                time: self.env.time,
                character: c.id,
                gait_id: c.gait.id().to_string(),
                level: c.label,
                root: [c.root.x, c.root.y, c.root.z],
                heading: c.heading,
                cursor: c.cursor,
            })
            .collect()
    }

    /// Runs `frames` steps, returning the trace including the initial state.
    pub fn run(&mut self, frames: usize, dt: f64) -> Result<Vec<TraceRow>, EngineError> {
        let mut rows = self.trace_rows();
        for _ in 0..frames {
            self.step(dt)?;
            rows.extend(self.trace_rows());
        }
        Ok(rows)
    }
}

pub const TRACE_HEADER: [&str; 10] = ["frame", "time", "character", "gait_id", "level", "x", "y", "z", "heading", "cursor"];

pub fn write_trace_csv<W: Write>(writer: W, rows: &[TraceRow]) -> Result<(), EngineError> {
    let err = |e: csv::Error| EngineError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(TRACE_HEADER).map_err(err)?;
    for r in rows {
        w.write_record([
            r.frame.to_string(),
            r.time.to_string(),
            r.character.to_string(),
            r.gait_id.clone(),
            r.level.name().to_string(),
            r.root[0].to_string(),
            r.root[1].to_string(),
            r.root[2].to_string(),
            r.heading.to_string(),
            r.cursor.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| EngineError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{synthesize_gait, WalkerParams};

    fn library() -> GaitLibrary {
        let g = |id: &str, z: f64| synthesize_gait(id, &WalkerParams { dominance: z, frames: 60, ..WalkerParams::default() });
        GaitLibrary::new(vec![(g("slow", -0.8), DominanceLabel::S), (g("fast", 0.9), DominanceLabel::HD)]).unwrap()
    }

    const CONFIG: &str = r#"{
        "seed": 3, "dt": 0.05, "frames": 40,
        "characters": [
            {"level": "HD", "spawn": [0, 0, 0], "goal": [1, 0, 0], "speed": 1.0},
            {"level": "S", "spawn": [0, 0, 5], "goal": [0, 0, 0], "speed": 0.5, "max_gait_speed": 10.0}
        ]
    }"#;

    #[test]
    fn scene_walks_to_goals() {
        let cfg = SceneConfig::from_json(CONFIG).unwrap();
        let mut scene = Scene::from_config(&cfg, &library()).unwrap();
        let rows = scene.run(cfg.frames, cfg.dt).unwrap();
        assert_eq!(rows.len(), 2 * 41);
        assert_eq!(rows[0].gait_id, "fast");
        assert_eq!(scene.characters[0].root, Vec3::new(1.0, 0.0, 0.0));
        assert!((scene.characters[1].root.z - (5.0 - 0.5 * 2.0)).abs() < 1e-9);
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("frame,time,character,gait_id,level,x,y,z,heading,cursor\n"));
        assert_eq!(text.lines().count(), rows.len() + 1);
    }

    #[test]
    fn unsatisfiable_character() {
        let cfg = SceneConfig::from_json(&CONFIG.replace("10.0", "0.0001")).unwrap();
        assert!(matches!(Scene::from_config(&cfg, &library()), Err(EngineError::NoMatchingGait { level: DominanceLabel::S, .. })));
    }

    #[test]
    fn config_validation() {
        assert!(SceneConfig::from_json(&CONFIG.replace("0.05", "-1")).is_err());
        assert!(SceneConfig::from_json(&CONFIG.replace("\"HD\"", "\"XX\"")).is_err());
    }
}
