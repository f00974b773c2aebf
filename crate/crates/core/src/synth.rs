//! Procedural walkers for tests, benchmarks and pipeline rehearsals.
//!
//! A single `dominance` scalar in `[-1, 1]` drives the posture and movement
//! cues the feature set measures: submissive walkers lean forward, drop the
//! head, keep the arms close and swinging little, and walk slowly with short
//! strides; dominant walkers do the opposite. Individual body size and
//! cadence vary independently of dominance.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::mapping::{Adjective, Likert, RatingRecord};
use crate::mocap::{rotate_about_vertical, Gait, JointId, Pose, Vec3, JOINT_COUNT};

#[derive(Debug, Clone, PartialEq)]
pub struct WalkerParams {
    pub dominance: f64,
    pub fps: f64,
    pub frames: usize,
    /// Facing direction, radians about +Y (0 faces +Z).
    pub heading: f64,
    /// Horizontal start position (x, z) of the root.
    pub start: (f64, f64),
    /// Overall body size multiplier.
    pub body_scale: f64,
    /// Cadence multiplier on the gait-cycle time.
    pub cadence: f64,
    /// Standard deviation of positional noise on upper-body joints, meters.
    pub noise: f64,
    pub seed: u64,
}

impl Default for WalkerParams {
    fn default() -> Self {
        WalkerParams {
            dominance: 0.0,
            fps: 60.0,
            frames: 180,
            heading: 0.0,
            start: (0.0, 0.0),
            body_scale: 1.0,
            cadence: 1.0,
            noise: 0.0,
            seed: 0,
        }
    }
}

impl WalkerParams {
    pub fn cycle_time(&self) -> f64 {
        (1.10 - 0.12 * self.dominance) * self.cadence
    }

    pub fn stride_length(&self) -> f64 {
        (1.30 + 0.20 * self.dominance) * self.body_scale
    }

    pub fn walking_speed(&self) -> f64 {
        self.stride_length() / self.cycle_time()
    }

    /// Draws a walker with random individual traits around the given dominance.
    pub fn random_individual<R: Rng>(dominance: f64, rng: &mut R) -> Self {
        WalkerParams {
            dominance,
            fps: 60.0,
            frames: 150,
            heading: rng.random_range(-PI..PI),
            start: (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)),
            body_scale: rng.random_range(0.9..1.1),
            cadence: rng.random_range(0.94..1.06),
            noise: 0.001,
            seed: rng.random(),
        }
    }
}

/// Stance phase fraction of the gait cycle.
const STANCE: f64 = 0.6;

/// Forward position (along the walking direction) and height of a foot.
fn foot_track(phase: f64, phase_offset: f64, stride: f64, scale: f64) -> (f64, f64) {
    let k = phase.floor();
    let u = phase - k;
    let plant = |k: f64| stride * (k + 0.5 * STANCE - phase_offset);
    let ground = 0.05 * scale;
    if u < STANCE {
        // shallow bowl so each contact has a single lowest frame
        let s = u / STANCE - 0.5;
        (plant(k), ground + 0.04 * scale * s * s)
    } else {
        let s = (u - STANCE) / (1.0 - STANCE);
        let smooth = s * s * (3.0 - 2.0 * s);
        let forward = plant(k) + stride * smooth;
        (forward, ground + 0.01 * scale + 0.12 * scale * (PI * s).sin())
    }
}

fn arm_direction(side: f64, abduction: f64, swing: f64) -> Vec3 {
    Vec3::new(side * abduction.sin(), -abduction.cos() * swing.cos(), abduction.cos() * swing.sin()).normalize()
}

/// Generates a walking clip. Deterministic for fixed parameters.
pub fn synthesize_gait(id: &str, params: &WalkerParams) -> Gait {
    let z = params.dominance.clamp(-1.0, 1.0);
    let sub = (1.0 - z) / 2.0; // 0 dominant .. 1 submissive
    let dom = 1.0 - sub;
    let s = params.body_scale;
    let cycle = params.cycle_time();
    let stride = params.stride_length();
    let speed = stride / cycle;

    let lean = 0.04 + 0.18 * sub;
    let head_pitch = 0.08 + 0.35 * sub;
    let abduction = 0.06 + 0.20 * dom;
    let swing_amp = 0.15 + 0.35 * dom;
    let shoulder_half = 0.17 * s * (1.0 + 0.08 * z);
    let slump = 0.05 * s * sub;
    let foot_half = (0.08 + 0.04 * dom) * s;

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let noise = Normal::new(0.0, params.noise.max(0.0)).expect("finite noise");

    let frames = (0..params.frames)
        .map(|f| {
            let t = f as f64 / params.fps;
            let phase = t / cycle;
            let mut p = [Vec3::zeros(); JOINT_COUNT];

            let progress = speed * t;
            let root = Vec3::new(0.0, 0.95 * s + 0.015 * s * (4.0 * PI * phase).cos(), progress);
            let up = Vec3::new(0.0, lean.cos(), lean.sin());
            let spine = root + up * 0.28 * s;
            let neck = spine + up * 0.27 * s;
            let head = neck + Vec3::new(0.0, (lean + head_pitch).cos(), (lean + head_pitch).sin()) * 0.15 * s;

            p[JointId::Root.index()] = root;
            p[JointId::Spine.index()] = spine;
            p[JointId::Neck.index()] = neck;
            p[JointId::Head.index()] = head;

            for (side, shoulder_id, elbow_id, hand_id, arm_offset) in [
                (1.0, JointId::LShoulder, JointId::LElbow, JointId::LHand, 0.5),
                (-1.0, JointId::RShoulder, JointId::RElbow, JointId::RHand, 0.0),
            ] {
                // each arm swings with the opposite leg
                let swing = swing_amp * (2.0 * PI * (phase + arm_offset)).sin();
                let shoulder = neck + Vec3::new(side * shoulder_half, -0.03 * s - slump, 0.0);
                let elbow = shoulder + arm_direction(side, abduction, swing) * 0.28 * s;
                let hand = elbow + arm_direction(side, abduction * 0.8, swing + 0.25) * 0.26 * s;
                p[shoulder_id.index()] = shoulder;
                p[elbow_id.index()] = elbow;
                p[hand_id.index()] = hand;
            }

            for (side, hip_id, knee_id, foot_id, offset) in [
                (1.0, JointId::LHip, JointId::LKnee, JointId::LFoot, 0.0),
                (-1.0, JointId::RHip, JointId::RKnee, JointId::RFoot, 0.5),
            ] {
                let hip = root + Vec3::new(side * 0.1 * s, -0.03 * s, 0.0);
                let (forward, height) = foot_track(phase + offset, offset, stride, s);
                let foot = Vec3::new(side * foot_half, height, forward);
                let knee = (hip + foot) * 0.5 + Vec3::new(0.0, 0.0, 0.06 * s);
                p[hip_id.index()] = hip;
                p[knee_id.index()] = knee;
                p[foot_id.index()] = foot;
            }

            if params.noise > 0.0 {
                for j in [
                    JointId::Spine,
                    JointId::Neck,
                    JointId::Head,
                    JointId::LShoulder,
                    JointId::LElbow,
                    JointId::LHand,
                    JointId::RShoulder,
                    JointId::RElbow,
                    JointId::RHand,
                ] {
                    let n = Vec3::new(noise.sample(&mut rng), noise.sample(&mut rng), noise.sample(&mut rng));
                    p[j.index()] += n;
                }
            }

            let offset = Vec3::new(params.start.0, 0.0, params.start.1);
            let mut pose = Pose::new(p);
            for q in pose.positions.iter_mut() {
                *q = rotate_about_vertical(q, params.heading) + offset;
            }
            pose
        })
        .collect();

    Gait::new(id, frames, params.fps, "synthetic").expect("synthetic walker is valid")
}

/// An upright neutral pose facing +Z with the root at (0, 0.95, 0).
pub fn reference_pose() -> Pose {
    synthesize_gait("reference", &WalkerParams { frames: 1, ..WalkerParams::default() }).frames[0]
}

/// A synthetic gait with the dominance value that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedGait {
    pub gait: Gait,
    pub dominance: f64,
}

/// `n` walkers with dominance drawn uniformly from `[-1, 1]` and random
/// individual traits, ids `syn000`, `syn001`, ...
pub fn synthetic_corpus(n: usize, seed: u64) -> Vec<PlantedGait> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let dominance = rng.random_range(-1.0..=1.0);
            let params = WalkerParams::random_individual(dominance, &mut rng);
            PlantedGait { gait: synthesize_gait(&format!("syn{i:03}"), &params), dominance }
        })
        .collect()
}

/// Simulated questionnaire participants.
#[derive(Debug, Clone, PartialEq)]
pub struct RaterPanel {
    pub raters: usize,
    /// Per-answer noise standard deviation, Likert points.
    pub noise: f64,
    /// Standard deviation of each rater's constant leniency offset.
    pub leniency: f64,
    pub seed: u64,
}

impl Default for RaterPanel {
    fn default() -> Self {
        RaterPanel { raters: 20, noise: 0.6, leniency: 0.3, seed: 0 }
    }
}

/// Agreement direction of each adjective with dominance, in
/// (submissive, withdrawn, dominant, confident) order.
const ADJECTIVE_LOADINGS: [f64; 4] = [-1.0, -0.9, 1.0, 0.9];

/// Every rater answers all four adjectives for every gait:
/// `round(3 + 2 * loading * dominance + leniency + noise)`, clamped to 1..=5.
pub fn simulate_ratings(gaits: &[(String, f64)], panel: &RaterPanel) -> Vec<RatingRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(panel.seed);
    let noise = Normal::new(0.0, panel.noise.max(0.0)).expect("finite noise");
    let leniency = Normal::new(0.0, panel.leniency.max(0.0)).expect("finite leniency");
    let offsets: Vec<f64> = (0..panel.raters).map(|_| leniency.sample(&mut rng)).collect();
    let mut out = Vec::with_capacity(gaits.len() * panel.raters * 4);
    for (r, offset) in offsets.iter().enumerate() {
        for (id, z) in gaits {
            for (adjective, loading) in Adjective::ALL.iter().zip(ADJECTIVE_LOADINGS) {
                let v = (3.0 + 2.0 * loading * z + offset + noise.sample(&mut rng)).round().clamp(1.0, 5.0);
                out.push(RatingRecord {
                    gait_id: id.clone(),
                    participant_id: format!("rater{r:02}"),
                    adjective: *adjective,
                    value: Likert::new(v as i64).expect("clamped"),
                    timestamp: "1970-01-01T00:00:00Z".into(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{detect_foot_strikes, extract_features, stride_and_cycle, StrikeConfig};

    #[test]
    fn strikes_match_scripted_schedule() {
        for z in [-1.0, 0.0, 1.0] {
            let params = WalkerParams { dominance: z, frames: 300, ..WalkerParams::default() };
            let g = synthesize_gait("w", &params);
            let strikes = detect_foot_strikes(&g, &StrikeConfig::default()).unwrap();
            let period = params.cycle_time() * params.fps;
            for foot in [&strikes.left, &strikes.right] {
                assert!(foot.len() >= 3, "{foot:?}");
                for w in foot.windows(2) {
                    assert!(((w[1] - w[0]) as f64 - period).abs() <= 1.0);
                }
            }
            let (stride, cycle) = stride_and_cycle(&g, &strikes).unwrap();
            assert!((cycle - params.cycle_time()).abs() <= 1.0 / params.fps);
            assert!((stride - params.stride_length()).abs() < 0.05 * params.stride_length(), "{stride}");
        }
    }

    #[test]
    fn dominance_moves_the_cues() {
        let f = |z| extract_features(&synthesize_gait("w", &WalkerParams { dominance: z, ..WalkerParams::default() })).unwrap();
        let (lo, hi) = (f(-1.0), f(1.0));
        assert!(hi.stride_length() > lo.stride_length());
        assert!(hi.gait_cycle_time() < lo.gait_cycle_time());
        assert!(hi.values[0] > lo.values[0], "volume");
        assert!(hi.values[12] > lo.values[12], "hand speed");
    }

    #[test]
    fn deterministic() {
        let p = WalkerParams { noise: 0.01, seed: 9, ..WalkerParams::default() };
        assert_eq!(synthesize_gait("a", &p), synthesize_gait("a", &p));
    }

    #[test]
    fn simulated_ratings_follow_dominance() {
        let recs = simulate_ratings(&[("low".into(), -1.0), ("high".into(), 1.0)], &RaterPanel { raters: 10, ..RaterPanel::default() });
        assert_eq!(recs.len(), 2 * 10 * 4);
        let agg = crate::mapping::aggregate_responses(&recs);
        let (high, low) = (&agg.complete[0], &agg.complete[1]);
        assert!(high.get(Adjective::Dominant) > low.get(Adjective::Dominant) + 2.0);
        assert!(high.get(Adjective::Submissive) < low.get(Adjective::Submissive) - 2.0);
    }

    #[test]
    fn corpus_is_seeded() {
        let a = synthetic_corpus(3, 9);
        assert_eq!(a, synthetic_corpus(3, 9));
        assert_eq!(a[2].gait.id, "syn002");
        assert!(a.iter().all(|p| (-1.0..=1.0).contains(&p.dominance)));
    }
}
