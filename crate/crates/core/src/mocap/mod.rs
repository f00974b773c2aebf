//! Motion-capture input: BVH parsing, forward kinematics and retargeting onto
//! the canonical 16-joint skeleton.
//!
//! Coordinates are right-handed, Y-up, in meters once the optional per-file
//! scale has been applied.

mod bvh;
mod fk;
mod gait_file;
mod retarget;
mod skeleton;

use thiserror::Error;

pub use bvh::{parse_bvh, BvhClip, BvhError, Channel, RawJoint, SkeletonHierarchy};
pub use fk::{clip_positions, forward_kinematics, RawMotion};
pub use gait_file::{load_gait, save_gait};
pub use retarget::{retarget, JointMapping};
pub use skeleton::{rotate_about_vertical, Gait, JointId, Pose, Vec3, JOINT_COUNT};

/// Scale factor that converts CMU BVH offsets to meters.
pub const CMU_SCALE: f64 = 0.056444;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MocapError {
    #[error(transparent)]
    Bvh(#[from] BvhError),
    #[error("frame has {found} channel values, hierarchy declares {expected}")]
    ChannelLength { expected: usize, found: usize },
    #[error("unknown canonical joint `{0}`")]
    UnknownJoint(String),
    #[error("canonical joint {joint} mapped from both `{first}` and `{second}`")]
    DuplicateTarget { joint: JointId, first: String, second: String },
    #[error("unmapped canonical joints: {}", join_joints(.0))]
    UnmappedJoints(Vec<JointId>),
    #[error("{path}: {reason}")]
    Invalid { path: String, reason: String },
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

fn join_joints(joints: &[JointId]) -> String {
    joints.iter().map(|j| j.name()).collect::<Vec<_>>().join(", ")
}

/// Options for converting a BVH clip into a canonical gait.
#[derive(Debug, Clone)]
pub struct ConvertOptions {
    pub scale: f64,
    pub fps_override: Option<f64>,
}

impl Default for ConvertOptions {
    fn default() -> Self {
        ConvertOptions { scale: 1.0, fps_override: None }
    }
}

/// Parse, run forward kinematics and retarget in one step.
pub fn bvh_to_gait(text: &str, mapping: &JointMapping, options: &ConvertOptions, id: &str, source: &str) -> Result<Gait, MocapError> {
    let clip = parse_bvh(text)?;
    let raw = clip_positions(&clip, options.scale)?;
    let fps = options.fps_override.unwrap_or_else(|| clip.fps());
    retarget(&raw, mapping, fps, id, source)
}
