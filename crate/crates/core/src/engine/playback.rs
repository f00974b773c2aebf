use std::sync::Arc;

use crate::mapping::DominanceLabel;
use crate::mocap::{rotate_about_vertical, JointId, Vec3, JOINT_COUNT};

use super::library::PreparedGait;
use super::navigation::{NavigationState, Navigator};
use super::EngineError;

/// Below this horizontal speed a character keeps its previous heading.
const MIN_HEADING_SPEED: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct CharacterState {
    pub id: usize,
    pub label: DominanceLabel,
    pub gait: Arc<PreparedGait>,
    /// Fractional frame index in `[0, frame_count)`.
    pub cursor: f64,
    pub root: Vec3,
    /// Radians from +Z toward +X.
    pub heading: f64,
}

impl CharacterState {
    pub fn new(id: usize, label: DominanceLabel, gait: Arc<PreparedGait>, root: Vec3, heading: f64) -> Self {
        CharacterState { id, label, gait, cursor: 0.0, root, heading }
    }

    /// World joint positions for the current state.
    pub fn joints(&self) -> [Vec3; JOINT_COUNT] {
        let pose = self.gait.pose_at(self.cursor);
        pose.map(|p| rotate_about_vertical(&p, self.heading) + self.root)
    }
}

/// Cyclic advance; values within 1e-9 of a whole frame snap onto it.
pub(crate) fn advance_cursor(cursor: f64, frames: f64, frame_count: usize) -> f64 {
    let n = frame_count as f64;
    let mut c = (cursor + frames).rem_euclid(n);
    let r = c.round();
    if (c - r).abs() < 1e-9 {
        c = r;
    }
    if c >= n {
        c -= n;
    }
    c
}

/// Moves one character forward by `dt`: asks navigation for the new root,
/// advances the playback cursor and returns the placed joints.
pub fn step_character(
    state: &mut CharacterState,
    navigation: &mut dyn Navigator,
    env: &NavigationState,
    dt: f64,
) -> Result<[Vec3; JOINT_COUNT], EngineError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(EngineError::InvalidTimeStep(dt));
    }
    let out = navigation
        .navigate(state.id, env, dt)
        .map_err(|message| EngineError::Navigation { character: state.id, message })?;
    state.root = out.root;
    if let Some(h) = out.heading {
        state.heading = h;
    } else if out.velocity.x.hypot(out.velocity.z) > MIN_HEADING_SPEED {
        state.heading = out.velocity.x.atan2(out.velocity.z);
    }
    state.cursor = advance_cursor(state.cursor, dt * state.gait.fps(), state.gait.frame_count());
    Ok(state.joints())
}

/// Root joint of a placed pose.
pub fn root_of(joints: &[Vec3; JOINT_COUNT]) -> Vec3 {
    joints[JointId::Root.index()]
}
