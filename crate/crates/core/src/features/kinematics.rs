use crate::mocap::{Gait, JointId, Vec3};

use super::FeatureError;

/// Joints whose motion is summarised, in feature order.
pub const TRACKED_JOINTS: [JointId; 5] = [JointId::RHand, JointId::LHand, JointId::Head, JointId::RFoot, JointId::LFoot];

/// Minimum frames for jerk (three successive differences).
pub const MIN_KINEMATIC_FRAMES: usize = 4;

/// Per-frame speed, acceleration and jerk magnitudes of the tracked joints.
/// Every series has one entry per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct JointKinematics {
    pub speed: [Vec<f64>; 5],
    pub acceleration: [Vec<f64>; 5],
    pub jerk: [Vec<f64>; 5],
}

fn forward_difference(series: &[Vec3], fps: f64) -> Vec<Vec3> {
    series.windows(2).map(|w| (w[1] - w[0]) * fps).collect()
}

/// Magnitudes of a difference series, front-padded with its first value
/// until the series covers `len` frames.
fn padded_magnitudes(series: &[Vec3], len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let first = series[0].norm();
    out.resize(len - series.len(), first);
    out.extend(series.iter().map(|v| v.norm()));
    out
}

pub fn joint_kinematics(gait: &Gait) -> Result<JointKinematics, FeatureError> {
    let tau = gait.frame_count();
    if tau < MIN_KINEMATIC_FRAMES {
        return Err(FeatureError::InsufficientFrames { needed: MIN_KINEMATIC_FRAMES, found: tau });
    }
    let mut speed: [Vec<f64>; 5] = Default::default();
    let mut acceleration: [Vec<f64>; 5] = Default::default();
    let mut jerk: [Vec<f64>; 5] = Default::default();
    for (k, joint) in TRACKED_JOINTS.iter().enumerate() {
        let track = gait.track(*joint);
        let vel = forward_difference(&track, gait.fps);
        let acc = forward_difference(&vel, gait.fps);
        let jrk = forward_difference(&acc, gait.fps);
        speed[k] = padded_magnitudes(&vel, tau);
        acceleration[k] = padded_magnitudes(&acc, tau);
        jerk[k] = padded_magnitudes(&jrk, tau);
    }
    Ok(JointKinematics { speed, acceleration, jerk })
}
