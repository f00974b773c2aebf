use std::sync::Arc;

use crate::mocap::Vec3;

use super::library::PreparedGait;

/// Positions and velocities of every live character at one time step.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NavigationState {
    pub time: f64,
    pub positions: Vec<Vec3>,
    pub velocities: Vec<Vec3>,
}

impl NavigationState {
    pub fn new(positions: Vec<Vec3>) -> Self {
        let velocities = vec![Vec3::zeros(); positions.len()];
        NavigationState { time: 0.0, positions, velocities }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// One navigation answer for one character.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NavigationOutput {
    /// New ground-plane root position; its height offsets the gait's own root height.
    pub root: Vec3,
    pub velocity: Vec3,
    /// Facing direction to use instead of the velocity direction.
    pub heading: Option<f64>,
}

/// Any navigation algorithm that can move a character one time step.
pub trait Navigator {
    fn navigate(&mut self, character: usize, env: &NavigationState, dt: f64) -> Result<NavigationOutput, String>;
}

/// Position after moving toward `goal` for `dt` at `speed`, stopping at the goal.
pub fn straight_line_step(position: Vec3, goal: Vec3, speed: f64, dt: f64) -> Vec3 {
    let to_goal = goal - position;
    let remaining = to_goal.norm();
    let step = speed.max(0.0) * dt;
    if remaining <= step || remaining == 0.0 {
        goal
    } else {
        position + to_goal * (step / remaining)
    }
}

/// Each character walks straight toward its goal at its own speed.
#[derive(Debug, Clone, PartialEq)]
pub struct StraightLineNavigation {
    pub goals: Vec<Vec3>,
    pub speeds: Vec<f64>,
}

impl StraightLineNavigation {
    pub fn new(goals: Vec<Vec3>, speeds: Vec<f64>) -> Self {
        assert_eq!(goals.len(), speeds.len());
        StraightLineNavigation { goals, speeds }
    }
}

impl Navigator for StraightLineNavigation {
    fn navigate(&mut self, character: usize, env: &NavigationState, dt: f64) -> Result<NavigationOutput, String> {
        let (Some(&goal), Some(&speed), Some(&position)) =
            (self.goals.get(character), self.speeds.get(character), env.positions.get(character))
        else {
            return Err(format!("no route for character {character}"));
        };
        let root = straight_line_step(position, goal, speed, dt);
        Ok(NavigationOutput { root, velocity: (root - position) / dt, heading: None })
    }
}

/// Replays the source clip's own root path from a spawn point, facing the
/// clip's original direction.
#[derive(Debug, Clone)]
pub struct SourcePathNavigation {
    gait: Arc<PreparedGait>,
    spawn: Vec3,
    cursor: f64,
}

impl SourcePathNavigation {
    pub fn new(gait: Arc<PreparedGait>, spawn: Vec3) -> Self {
        SourcePathNavigation { gait, spawn, cursor: 0.0 }
    }
}

impl Navigator for SourcePathNavigation {
    fn navigate(&mut self, character: usize, env: &NavigationState, dt: f64) -> Result<NavigationOutput, String> {
        self.cursor = super::playback::advance_cursor(self.cursor, dt * self.gait.fps(), self.gait.frame_count());
        let start = self.gait.source_root_at(0.0);
        let now = self.gait.source_root_at(self.cursor);
        let root = self.spawn + Vec3::new(now.x - start.x, 0.0, now.z - start.z);
        let previous = env.positions.get(character).copied().unwrap_or(self.spawn);
        Ok(NavigationOutput { root, velocity: (root - previous) / dt, heading: Some(self.gait.source_heading()) })
    }
}
