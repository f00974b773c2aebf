use crate::mocap::{rotate_about_vertical, JointId, Pose, Vec3};

use super::POSTURE_DIM;

/// Vectors shorter than this are treated as coincident joints.
const DEGENERATE_LENGTH: f64 = 1e-12;

/// Posture block of one frame plus whether any angle or the heading was degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostureBlock {
    pub values: [f64; POSTURE_DIM],
    pub degenerate: bool,
}

/// Angle between two vectors in `[0, π]`, or `None` if either is near zero.
pub(crate) fn angle_between(u: &Vec3, v: &Vec3) -> Option<f64> {
    if u.norm() < DEGENERATE_LENGTH || v.norm() < DEGENERATE_LENGTH {
        return None;
    }
    Some(u.cross(v).norm().atan2(u.dot(v)))
}

fn angle_at(vertex: Vec3, a: Vec3, b: Vec3) -> Option<f64> {
    angle_between(&(a - vertex), &(b - vertex))
}

fn triangle_area(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    0.5 * (b - a).cross(&(c - a)).norm()
}

/// Facing direction about the vertical, as the angle θ with forward =
/// (sin θ, 0, cos θ). Forward is the hip line (left minus right) crossed with
/// +Y. `None` when the hip line is vertical or the hips coincide.
pub fn heading_angle(pose: &Pose) -> Option<f64> {
    let hips = pose.joint(JointId::LHip) - pose.joint(JointId::RHip);
    let forward = hips.cross(&Vec3::y());
    if forward.x.hypot(forward.z) < DEGENERATE_LENGTH {
        return None;
    }
    Some(forward.x.atan2(forward.z))
}

/// Axis-aligned bounding-box volume after turning the pose to face +Z.
fn heading_aligned_volume(pose: &Pose) -> (f64, bool) {
    let (angle, degenerate) = match heading_angle(pose) {
        Some(a) => (a, false),
        None => (0.0, true),
    };
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for p in &pose.positions {
        let q = if degenerate { *p } else { rotate_about_vertical(p, -angle) };
        lo = lo.inf(&q);
        hi = hi.sup(&q);
    }
    let extent = hi - lo;
    (extent.x * extent.y * extent.z, degenerate)
}

/// Openness and erectness measures of a single pose.
///
/// Layout: volume; angles at the neck by the shoulders, at the right shoulder,
/// at the left shoulder, between world vertical and neck→spine, and at the neck
/// by head and spine; root distances of right hand, left hand, right foot and
/// left foot; areas of the hands–neck and feet–root triangles.
pub fn posture_features(pose: &Pose) -> PostureBlock {
    use JointId::*;
    let j = |id| pose.joint(id);
    let mut degenerate = false;
    let mut angle = |v: Option<f64>| {
        v.unwrap_or_else(|| {
            degenerate = true;
            0.0
        })
    };

    let (volume, heading_degenerate) = heading_aligned_volume(pose);
    let neck = j(Neck);
    let values = [
        volume,
        angle(angle_at(neck, j(LShoulder), j(RShoulder))),
        angle(angle_at(j(RShoulder), neck, j(LShoulder))),
        angle(angle_at(j(LShoulder), neck, j(RShoulder))),
        angle(angle_between(&Vec3::y(), &(j(Spine) - neck))),
        angle(angle_at(neck, j(Head), j(Spine))),
        (j(RHand) - j(Root)).norm(),
        (j(LHand) - j(Root)).norm(),
        (j(RFoot) - j(Root)).norm(),
        (j(LFoot) - j(Root)).norm(),
        triangle_area(j(RHand), j(LHand), neck),
        triangle_area(j(RFoot), j(LFoot), j(Root)),
    ];
    PostureBlock { values, degenerate: degenerate || heading_degenerate }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pose_with(edits: &[(JointId, [f64; 3])]) -> Pose {
        // A plausible upright pose facing +Z.
        let mut p = [[0.0; 3]; 16];
        let base: [(JointId, [f64; 3]); 16] = [
            (JointId::Root, [0.0, 1.0, 0.0]),
            (JointId::Spine, [0.0, 1.3, 0.0]),
            (JointId::Neck, [0.0, 1.55, 0.0]),
            (JointId::Head, [0.0, 1.7, 0.02]),
            (JointId::LShoulder, [0.2, 1.5, 0.0]),
            (JointId::LElbow, [0.25, 1.2, 0.0]),
            (JointId::LHand, [0.27, 0.95, 0.05]),
            (JointId::RShoulder, [-0.2, 1.5, 0.0]),
            (JointId::RElbow, [-0.25, 1.2, 0.0]),
            (JointId::RHand, [-0.27, 0.95, -0.05]),
            (JointId::LHip, [0.1, 0.95, 0.0]),
            (JointId::LKnee, [0.1, 0.5, 0.05]),
            (JointId::LFoot, [0.1, 0.05, 0.1]),
            (JointId::RHip, [-0.1, 0.95, 0.0]),
            (JointId::RKnee, [-0.1, 0.5, -0.05]),
            (JointId::RFoot, [-0.1, 0.05, -0.1]),
        ];
        for (id, v) in base.iter().chain(edits) {
            p[id.index()] = *v;
        }
        Pose::from_arrays(&p)
    }

    #[test]
    fn collinear_shoulders_give_pi_at_neck() {
        let pose = pose_with(&[
            (JointId::LShoulder, [-1.0, 0.0, 0.0]),
            (JointId::Neck, [0.0, 0.0, 0.0]),
            (JointId::RShoulder, [1.0, 0.0, 0.0]),
        ]);
        let b = posture_features(&pose);
        assert_eq!(b.values[1], PI);
        assert_eq!(b.values[2], 0.0);
        assert_eq!(b.values[3], 0.0);
    }

    #[test]
    fn hands_neck_right_triangle() {
        let pose = pose_with(&[
            (JointId::RHand, [1.0, 0.0, 0.0]),
            (JointId::LHand, [0.0, 1.0, 0.0]),
            (JointId::Neck, [0.0, 0.0, 0.0]),
        ]);
        assert!((posture_features(&pose).values[10] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unit_cube_volume() {
        // Hips along X so the pose already faces +Z; corners span the unit cube.
        let corners = [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [1.0, 1.0, 0.0],
            [1.0, 0.0, 1.0],
            [0.0, 1.0, 1.0],
            [1.0, 1.0, 1.0],
        ];
        let mut p = [[0.5; 3]; 16];
        for (i, c) in corners.iter().enumerate() {
            p[i] = *c;
        }
        p[JointId::LHip.index()] = [0.7, 0.5, 0.5];
        p[JointId::RHip.index()] = [0.3, 0.5, 0.5];
        let b = posture_features(&Pose::from_arrays(&p));
        assert!((b.values[0] - 1.0).abs() < 1e-12, "{}", b.values[0]);
        assert!(!b.degenerate || b.values[1..6].contains(&0.0));
    }

    #[test]
    fn coincident_joints_flagged() {
        let pose = pose_with(&[(JointId::Head, [0.0, 1.55, 0.0])]);
        let b = posture_features(&pose);
        assert!(b.degenerate);
        assert_eq!(b.values[5], 0.0);
    }

    #[test]
    fn upright_back_points_down() {
        let b = posture_features(&pose_with(&[]));
        assert!((b.values[4] - PI).abs() < 1e-12);
        assert!(!b.degenerate);
    }

    #[test]
    fn heading_of_default_pose_is_forward_z() {
        assert!(heading_angle(&pose_with(&[])).unwrap().abs() < 1e-15);
        let turned = pose_with(&[]).rotated_about_vertical(0.7);
        assert!((heading_angle(&turned).unwrap() - 0.7).abs() < 1e-12);
    }
}
