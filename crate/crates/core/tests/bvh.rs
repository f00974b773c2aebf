use gaitdom::mocap::{clip_positions, parse_bvh, BvhError, Vec3};

type Check = fn(&BvhError) -> bool;

const CHAIN: &str = include_str!("fixtures/chain.bvh");

#[test]
fn chain_channels_and_frame_time() {
    let clip = parse_bvh(CHAIN).unwrap();
    assert_eq!(clip.hierarchy.channel_count(), 18);
    assert_eq!(clip.motion.len(), 4);
    assert!(clip.motion.iter().all(|r| r.len() == 18));
    assert!((clip.frame_time - 0.0333333).abs() < 1e-15);
    let names = clip.hierarchy.names();
    assert_eq!(&names[..3], ["Hips", "Knee", "Ankle"]);
}

#[test]
fn forward_kinematics_matches_hand_computation() {
    let clip = parse_bvh(CHAIN).unwrap();
    let motion = clip_positions(&clip, 1.0).unwrap();
    let v = Vec3::new;
    let expected = [
        // rest pose
        [v(0.0, 0.0, 0.0), v(0.0, 1.0, 0.0), v(1.0, 1.0, 0.0), v(1.0, 1.0, 0.5)],
        // root moved to (1,2,3), turned 90 degrees about +Y: +X goes to -Z, +Z to +X
        [v(1.0, 2.0, 3.0), v(1.0, 3.0, 3.0), v(1.0, 3.0, 2.0), v(1.5, 3.0, 2.0)],
        // knee bent 90 degrees about +Z: +X goes to +Y
        [v(0.0, 0.0, 0.0), v(0.0, 1.0, 0.0), v(0.0, 2.0, 0.0), v(0.0, 2.0, 0.5)],
        // root pitched 90 degrees about +X (+Y to +Z, +Z to -Y), knee channel shifts it 0.5 along local Y
        [v(0.0, 0.0, 0.0), v(0.0, 0.0, 1.5), v(1.0, 0.0, 1.5), v(1.0, -0.5, 1.5)],
    ];
    for (f, want) in expected.iter().enumerate() {
        for (j, w) in want.iter().enumerate() {
            let got = motion.frames[f][j];
            assert!((got - w).norm() < 1e-6, "frame {f} joint {j}: {got:?} vs {w:?}");
        }
    }
}

fn mutate(from: &str, to: &str) -> String {
    assert!(CHAIN.contains(from), "{from}");
    CHAIN.replacen(from, to, 1)
}

#[test]
fn malformed_files_yield_structured_errors() {
    let cases: Vec<(String, Check, usize)> = vec![
        (mutate("HIERARCHY\n", "HIERARCH\n"), |e| matches!(e, BvhError::MissingHierarchy { .. }), 1),
        (mutate("      }\n    }\n  }\n}\n", "      }\n    }\n  }\n"), |e| matches!(e, BvhError::UnbalancedBraces { .. }), 3),
        (mutate("    OFFSET 0.0 1.0 0.0\n", ""), |e| matches!(e, BvhError::MissingOffset { joint, .. } if joint == "Knee"), 6),
        (mutate("      CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation\n      End", "      End"), |e| matches!(e, BvhError::MissingChannels { joint, .. } if joint == "Ankle"), 10),
        (mutate("Frames: 4", "Frames: 5"), |e| matches!(e, BvhError::FrameCountMismatch { declared: 5, found: 4, .. }), 27),
        (mutate("1 2 3 0 0 90", "1 2 x 0 0 90"), |e| matches!(e, BvhError::NonNumeric { token, .. } if token == "x"), 25),
        (mutate("0 0 0 0 90 0 0 0.5 0 0 0 0 0 0 0 0 0 0", "0 0 0 0 90 0 0 0.5 0 0 0 0 0 0 0 0 0"), |e| matches!(e, BvhError::RowWidth { expected: 18, found: 17, .. }), 27),
    ];
    assert_eq!(cases.len(), 7);
    for (text, check, line) in &cases {
        let err = parse_bvh(text).unwrap_err();
        assert!(check(&err), "{err:?}");
        assert_eq!(err.line(), Some(*line), "{err}");
    }
}
