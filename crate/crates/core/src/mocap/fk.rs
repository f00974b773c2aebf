use nalgebra::{Matrix3, Rotation3, Vector3};

use super::bvh::{BvhClip, Channel, SkeletonHierarchy};
use super::skeleton::Vec3;
use super::MocapError;

/// World positions of raw (file) joints for every frame of a clip.
#[derive(Debug, Clone, PartialEq)]
pub struct RawMotion {
    pub joint_names: Vec<String>,
    pub frames: Vec<Vec<Vec3>>,
}

fn axis_rotation(channel: Channel, degrees: f64) -> Matrix3<f64> {
    let angle = degrees.to_radians();
    let axis = match channel {
        Channel::Xrotation => Vector3::x_axis(),
        Channel::Yrotation => Vector3::y_axis(),
        Channel::Zrotation => Vector3::z_axis(),
        _ => unreachable!("position channel passed as rotation"),
    };
    *Rotation3::from_axis_angle(&axis, angle).matrix()
}

/// Computes world joint positions for one frame of channel values.
///
/// Each joint's local transform is a translation by `scale * (offset +
/// position channels)` followed by the rotation channels composed in the
/// order the file declares them (`Zrotation Xrotation Yrotation` means
/// `Rz * Rx * Ry`). Angles are in degrees.
pub fn forward_kinematics(hierarchy: &SkeletonHierarchy, frame: &[f64], scale: f64) -> Result<Vec<Vec3>, MocapError> {
    if frame.len() != hierarchy.channel_count() {
        return Err(MocapError::ChannelLength { expected: hierarchy.channel_count(), found: frame.len() });
    }
    let joints = hierarchy.joints();
    let mut rotations: Vec<Matrix3<f64>> = Vec::with_capacity(joints.len());
    let mut positions: Vec<Vec3> = Vec::with_capacity(joints.len());

    for (i, joint) in joints.iter().enumerate() {
        let start = hierarchy.channel_start(i);
        let mut translation = joint.offset;
        let mut local = Matrix3::identity();
        for (k, &ch) in joint.channels.iter().enumerate() {
            let v = frame[start + k];
            match ch {
                Channel::Xposition => translation.x += v,
                Channel::Yposition => translation.y += v,
                Channel::Zposition => translation.z += v,
                _ => local *= axis_rotation(ch, v),
            }
        }
        translation *= scale;
        let (world_rot, world_pos) = match joint.parent {
            None => (local, translation),
            Some(p) => (rotations[p] * local, positions[p] + rotations[p] * translation),
        };
        rotations.push(world_rot);
        positions.push(world_pos);
    }
    Ok(positions)
}

/// Runs forward kinematics over every frame of a parsed clip.
pub fn clip_positions(clip: &BvhClip, scale: f64) -> Result<RawMotion, MocapError> {
    let frames = clip
        .motion
        .iter()
        .map(|row| forward_kinematics(&clip.hierarchy, row, scale))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RawMotion { joint_names: clip.hierarchy.names(), frames })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mocap::bvh::RawJoint;

    fn joint(name: &str, parent: Option<usize>, offset: [f64; 3], channels: Vec<Channel>) -> RawJoint {
        RawJoint { name: name.into(), parent, offset: Vec3::new(offset[0], offset[1], offset[2]), channels }
    }

    const ROT: [Channel; 3] = [Channel::Zrotation, Channel::Xrotation, Channel::Yrotation];

    #[test]
    fn identity_child_offset() {
        let h = SkeletonHierarchy::new(vec![
            joint("root", None, [0.0; 3], ROT.to_vec()),
            joint("child", Some(0), [0.0, 1.0, 0.0], vec![]),
        ])
        .unwrap();
        let p = forward_kinematics(&h, &[0.0; 3], 1.0).unwrap();
        assert_eq!(p[1], Vec3::new(0.0, 1.0, 0.0));
    }

    #[test]
    fn yaw_quarter_turn_maps_x_to_minus_z() {
        let h = SkeletonHierarchy::new(vec![
            joint("root", None, [0.0; 3], ROT.to_vec()),
            joint("child", Some(0), [1.0, 0.0, 0.0], vec![]),
        ])
        .unwrap();
        let p = forward_kinematics(&h, &[0.0, 0.0, 90.0], 1.0).unwrap();
        assert!((p[1] - Vec3::new(0.0, 0.0, -1.0)).norm() < 1e-12, "{:?}", p[1]);
    }

    #[test]
    fn stacked_offsets_add() {
        let h = SkeletonHierarchy::new(vec![
            joint("a", None, [0.0; 3], vec![]),
            joint("b", Some(0), [0.0, 1.0, 0.0], vec![]),
            joint("c", Some(1), [0.0, 1.0, 0.0], vec![]),
        ])
        .unwrap();
        let p = forward_kinematics(&h, &[], 1.0).unwrap();
        assert_eq!(p[2], Vec3::new(0.0, 2.0, 0.0));
    }

    #[test]
    fn rotation_order_follows_channel_declaration() {
        // Rz(90) * Rx(90) applied to +Y: Rx sends +Y to +Z, Rz keeps +Z.
        let zx = SkeletonHierarchy::new(vec![
            joint("r", None, [0.0; 3], vec![Channel::Zrotation, Channel::Xrotation]),
            joint("c", Some(0), [0.0, 1.0, 0.0], vec![]),
        ])
        .unwrap();
        let p = forward_kinematics(&zx, &[90.0, 90.0], 1.0).unwrap();
        assert!((p[1] - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-12);
        // Rx(90) * Rz(90) applied to +Y: Rz sends +Y to -X, Rx keeps -X.
        let xz = SkeletonHierarchy::new(vec![
            joint("r", None, [0.0; 3], vec![Channel::Xrotation, Channel::Zrotation]),
            joint("c", Some(0), [0.0, 1.0, 0.0], vec![]),
        ])
        .unwrap();
        let p = forward_kinematics(&xz, &[90.0, 90.0], 1.0).unwrap();
        assert!((p[1] - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn position_channels_and_scale() {
        let h = SkeletonHierarchy::new(vec![
            joint("r", None, [1.0, 0.0, 0.0], vec![Channel::Xposition, Channel::Yposition, Channel::Zposition]),
            joint("c", Some(0), [0.0, 2.0, 0.0], vec![]),
        ])
        .unwrap();
        let p = forward_kinematics(&h, &[1.0, 2.0, 3.0], 0.5).unwrap();
        assert!((p[0] - Vec3::new(1.0, 1.0, 1.5)).norm() < 1e-15);
        assert!((p[1] - Vec3::new(1.0, 2.0, 1.5)).norm() < 1e-15);
    }

    #[test]
    fn channel_length_checked() {
        let h = SkeletonHierarchy::new(vec![joint("r", None, [0.0; 3], ROT.to_vec())]).unwrap();
        assert!(matches!(
            forward_kinematics(&h, &[0.0; 2], 1.0),
            Err(MocapError::ChannelLength { expected: 3, found: 2 })
        ));
    }
}
