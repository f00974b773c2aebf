use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::MocapError;

pub type Vec3 = Vector3<f64>;

/// Number of joints in the canonical skeleton.
pub const JOINT_COUNT: usize = 16;

/// The canonical 16-joint skeleton. Discriminants are the storage order used
/// by [`Pose`] and by the gait interchange file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum JointId {
    Root = 0,
    Spine,
    Neck,
    Head,
    LShoulder,
    LElbow,
    LHand,
    RShoulder,
    RElbow,
    RHand,
    LHip,
    LKnee,
    LFoot,
    RHip,
    RKnee,
    RFoot,
}

impl JointId {
    pub const ALL: [JointId; JOINT_COUNT] = [
        JointId::Root,
        JointId::Spine,
        JointId::Neck,
        JointId::Head,
        JointId::LShoulder,
        JointId::LElbow,
        JointId::LHand,
        JointId::RShoulder,
        JointId::RElbow,
        JointId::RHand,
        JointId::LHip,
        JointId::LKnee,
        JointId::LFoot,
        JointId::RHip,
        JointId::RKnee,
        JointId::RFoot,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<JointId> {
        Self::ALL.get(index).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            JointId::Root => "Root",
            JointId::Spine => "Spine",
            JointId::Neck => "Neck",
            JointId::Head => "Head",
            JointId::LShoulder => "LShoulder",
            JointId::LElbow => "LElbow",
            JointId::LHand => "LHand",
            JointId::RShoulder => "RShoulder",
            JointId::RElbow => "RElbow",
            JointId::RHand => "RHand",
            JointId::LHip => "LHip",
            JointId::LKnee => "LKnee",
            JointId::LFoot => "LFoot",
            JointId::RHip => "RHip",
            JointId::RKnee => "RKnee",
            JointId::RFoot => "RFoot",
        }
    }

    /// Parent in the canonical bone tree, used for drawing limb segments.
    pub fn parent(self) -> Option<JointId> {
        use JointId::*;
        Some(match self {
            Root => return None,
            Spine | LHip | RHip => Root,
            Neck => Spine,
            Head | LShoulder | RShoulder => Neck,
            LElbow => LShoulder,
            LHand => LElbow,
            RElbow => RShoulder,
            RHand => RElbow,
            LKnee => LHip,
            LFoot => LKnee,
            RKnee => RHip,
            RFoot => RKnee,
        })
    }
}

impl fmt::Display for JointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for JointId {
    type Err = MocapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        JointId::ALL
            .iter()
            .copied()
            .find(|j| j.name() == s)
            .ok_or_else(|| MocapError::UnknownJoint(s.to_string()))
    }
}

/// One frame of the canonical skeleton, positions in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub positions: [Vec3; JOINT_COUNT],
}

impl Pose {
    pub fn new(positions: [Vec3; JOINT_COUNT]) -> Self {
        Pose { positions }
    }

    pub fn from_arrays(points: &[[f64; 3]; JOINT_COUNT]) -> Self {
        let mut positions = [Vec3::zeros(); JOINT_COUNT];
        for (dst, p) in positions.iter_mut().zip(points) {
            *dst = Vec3::new(p[0], p[1], p[2]);
        }
        Pose { positions }
    }

    pub fn to_arrays(&self) -> [[f64; 3]; JOINT_COUNT] {
        let mut out = [[0.0; 3]; JOINT_COUNT];
        for (dst, p) in out.iter_mut().zip(&self.positions) {
            *dst = [p.x, p.y, p.z];
        }
        out
    }

    #[inline]
    pub fn joint(&self, joint: JointId) -> Vec3 {
        self.positions[joint.index()]
    }

    pub fn is_finite(&self) -> bool {
        self.positions.iter().all(|p| p.iter().all(|c| c.is_finite()))
    }

    pub fn translated(&self, offset: Vec3) -> Pose {
        let mut out = *self;
        for p in out.positions.iter_mut() {
            *p += offset;
        }
        out
    }

    /// Rotates every joint about the world vertical (Y) axis through the origin.
    pub fn rotated_about_vertical(&self, angle: f64) -> Pose {
        let mut out = *self;
        for p in out.positions.iter_mut() {
            *p = rotate_about_vertical(p, angle);
        }
        out
    }
}

/// Right-handed rotation about +Y: +Z turns toward +X for positive angles.
#[inline]
pub fn rotate_about_vertical(p: &Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    Vec3::new(c * p.x + s * p.z, p.y, -s * p.x + c * p.z)
}

/// A captured walk: an ordered list of canonical poses with its capture rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Gait {
    pub id: String,
    pub frames: Vec<Pose>,
    pub fps: f64,
    pub source: String,
}

impl Gait {
    pub fn new(id: impl Into<String>, frames: Vec<Pose>, fps: f64, source: impl Into<String>) -> Result<Gait, MocapError> {
        let gait = Gait { id: id.into(), frames, fps, source: source.into() };
        gait.validate()?;
        Ok(gait)
    }

    pub fn validate(&self) -> Result<(), MocapError> {
        if !(self.fps.is_finite() && self.fps > 0.0) {
            return Err(MocapError::Invalid { path: "fps".into(), reason: format!("must be finite and positive, got {}", self.fps) });
        }
        if self.frames.is_empty() {
            return Err(MocapError::Invalid { path: "frames".into(), reason: "at least one frame required".into() });
        }
        for (i, pose) in self.frames.iter().enumerate() {
            if !pose.is_finite() {
                return Err(MocapError::Invalid { path: format!("frames[{i}]"), reason: "non-finite coordinate".into() });
            }
        }
        Ok(())
    }

    #[inline]
    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    pub fn duration(&self) -> f64 {
        self.frames.len() as f64 / self.fps
    }

    /// Trajectory of one joint across all frames.
    pub fn track(&self, joint: JointId) -> Vec<Vec3> {
        self.frames.iter().map(|p| p.joint(joint)).collect()
    }

    pub fn map_poses(&self, f: impl Fn(&Pose) -> Pose) -> Gait {
        Gait { id: self.id.clone(), frames: self.frames.iter().map(f).collect(), fps: self.fps, source: self.source.clone() }
    }

    /// Mean horizontal root speed along the walked path, m/s.
    pub fn mean_walking_speed(&self) -> f64 {
        if self.frames.len() < 2 {
            return 0.0;
        }
        let path: f64 = self
            .frames
            .windows(2)
            .map(|w| {
                let d = w[1].joint(JointId::Root) - w[0].joint(JointId::Root);
                d.x.hypot(d.z)
            })
            .sum();
        path * self.fps / (self.frames.len() - 1) as f64
    }
}
