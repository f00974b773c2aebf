mod common;

use std::f64::consts::PI;

use gaitdom::features::{extract_features, FEATURE_DIM, FEATURE_NAMES};
use gaitdom::mocap::{rotate_about_vertical, Gait, JointId, Pose, Vec3};
use gaitdom::synth::reference_pose;
use gaitdom_testkit::{close, features::brute_force_features};

/// Rigid reference pose gliding at `speed` along `heading`, both feet bobbing
/// with period `period` (minima exactly at multiples of the period).
pub fn analytic_gait(heading: f64, speed: f64, period: f64, fps: f64, frames: usize) -> Gait {
    let base = reference_pose();
    let poses = (0..frames)
        .map(|f| {
            let t = f as f64 / fps;
            let mut p = base;
            for (k, foot) in [(0.0, JointId::LFoot), (0.5, JointId::RFoot)] {
                let lift = 0.06 * (1.0 - (2.0 * PI * (t / period - k)).cos());
                p.positions[foot.index()].y += lift;
            }
            let moved = p.translated(Vec3::new(0.0, 0.0, speed * t));
            moved.rotated_about_vertical(heading)
        })
        .collect::<Vec<Pose>>();
    Gait::new("analytic", poses, fps, "test").unwrap()
}

fn assert_matches_oracle(g: &Gait) {
    let ours = extract_features(g).unwrap();
    let oracle = brute_force_features(&common::to_arrays(g), g.fps).expect("oracle finds a gait cycle");
    assert_eq!(ours.values.len(), FEATURE_DIM);
    for k in 0..FEATURE_DIM {
        assert!(close(ours.values[k], oracle[k], 1e-9), "{} {}: {} vs {}", g.id, FEATURE_NAMES[k], ours.values[k], oracle[k]);
    }
}

#[test]
fn random_gaits_match_brute_force() {
    for seed in 0..50 {
        assert_matches_oracle(&common::random_gait(seed));
    }
}

#[test]
fn analytic_gaits_match_brute_force_and_closed_form() {
    let cases = [
        (0.0, 1.0, 1.0, 60.0),
        (0.7, 1.2, 1.1, 60.0),
        (-2.0, 0.8, 0.9, 30.0),
        (PI, 1.5, 1.2, 120.0),
        (1.3, 0.5, 1.5, 60.0),
        (-0.4, 1.1, 1.0, 100.0),
        (2.5, 1.4, 0.8, 50.0),
        (0.1, 0.9, 1.25, 40.0),
        (-1.57, 1.3, 1.05, 60.0),
        (3.0, 1.0, 0.95, 80.0),
    ];
    for (heading, speed, period, fps) in cases {
        let frames = (3.5 * period * fps) as usize;
        let g = analytic_gait(heading, speed, period, fps, frames);
        assert_matches_oracle(&g);
        let f = extract_features(&g).unwrap();
        // whole hands glide rigidly
        assert!((f.values[12] - speed).abs() < 1e-9 * speed.max(1.0));
        assert!(f.values[17].abs() < 1e-6);
        let frame_period = (period * fps).round() / fps;
        assert!((f.gait_cycle_time() - frame_period).abs() <= 1.0 / fps, "{heading} {}", f.gait_cycle_time());
        assert!((f.stride_length() - speed * f.gait_cycle_time()).abs() < 1e-9);
    }
}

#[test]
fn dimension_is_29() {
    assert_eq!(FEATURE_DIM, 29);
    assert_eq!(FEATURE_NAMES.len(), 29);
}

#[test]
fn heading_does_not_change_posture() {
    let a = extract_features(&analytic_gait(0.0, 1.0, 1.0, 60.0, 200)).unwrap();
    let b = extract_features(&analytic_gait(1.0, 1.0, 1.0, 60.0, 200)).unwrap();
    let p = reference_pose();
    assert!(rotate_about_vertical(&p.joint(JointId::Root), 0.0) == p.joint(JointId::Root));
    for ((x, y), name) in a.values.iter().zip(&b.values).zip(FEATURE_NAMES) {
        assert!(close(*x, *y, 1e-6), "{name}");
    }
}
