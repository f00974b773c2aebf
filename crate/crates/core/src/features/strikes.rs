use serde::{Deserialize, Serialize};

use crate::mocap::{Gait, JointId};

use super::FeatureError;

/// Thresholds of the foot-strike detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrikeConfig {
    /// A strike must lie within this fraction of the foot's height range above its minimum.
    pub height_band: f64,
    /// Minimum spacing between strikes of one foot, seconds.
    pub refractory_seconds: f64,
}

impl Default for StrikeConfig {
    fn default() -> Self {
        StrikeConfig { height_band: 0.1, refractory_seconds: 0.2 }
    }
}

/// Frame indices of detected foot strikes, strictly increasing per foot.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FootStrikes {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Low local minima of a height signal.
///
/// A frame is a candidate when it is strictly lower than its predecessor and
/// no higher than its successor (so a flat contact phase yields its first
/// frame) and within the height band. Candidates closer than `min_gap` frames
/// to the previously accepted strike replace it only if lower.
pub fn strike_frames(heights: &[f64], config: &StrikeConfig, fps: f64) -> Vec<usize> {
    let n = heights.len();
    if n < 3 {
        return Vec::new();
    }
    let lo = heights.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = heights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ceiling = lo + config.height_band * (hi - lo);
    let min_gap = config.refractory_seconds * fps;

    let mut strikes: Vec<usize> = Vec::new();
    for t in 1..n - 1 {
        let h = heights[t];
        if !(h < heights[t - 1] && h <= heights[t + 1] && h <= ceiling) {
            continue;
        }
        match strikes.last_mut() {
            Some(last) if ((t - *last) as f64) < min_gap => {
                if h < heights[*last] {
                    *last = t;
                }
            }
            _ => strikes.push(t),
        }
    }
    strikes
}

/// Detects strikes on both feet from the foot joints' vertical coordinate.
///
/// Fails when neither foot shows at least two strikes.
pub fn detect_foot_strikes(gait: &Gait, config: &StrikeConfig) -> Result<FootStrikes, FeatureError> {
    let height = |joint| gait.frames.iter().map(|p| p.joint(joint).y).collect::<Vec<f64>>();
    let strikes = FootStrikes {
        left: strike_frames(&height(JointId::LFoot), config, gait.fps),
        right: strike_frames(&height(JointId::RFoot), config, gait.fps),
    };
    if strikes.left.len() < 2 && strikes.right.len() < 2 {
        return Err(FeatureError::NoGaitCycle { left: strikes.left.len(), right: strikes.right.len() });
    }
    Ok(strikes)
}

/// Mean same-foot stride length (horizontal meters) and gait-cycle time
/// (seconds), averaged over the feet that have at least two strikes.
pub fn stride_and_cycle(gait: &Gait, strikes: &FootStrikes) -> Result<(f64, f64), FeatureError> {
    let mut strides = Vec::with_capacity(2);
    let mut gaps = Vec::with_capacity(2);
    for (joint, frames) in [(JointId::LFoot, &strikes.left), (JointId::RFoot, &strikes.right)] {
        if frames.len() < 2 {
            continue;
        }
        let pairs = (frames.len() - 1) as f64;
        let stride: f64 = frames
            .windows(2)
            .map(|w| {
                let d = gait.frames[w[1]].joint(joint) - gait.frames[w[0]].joint(joint);
                d.x.hypot(d.z)
            })
            .sum::<f64>()
            / pairs;
        let gap = (frames[frames.len() - 1] - frames[0]) as f64 / pairs;
        strides.push(stride);
        gaps.push(gap);
    }
    if strides.is_empty() {
        return Err(FeatureError::NoGaitCycle { left: strikes.left.len(), right: strikes.right.len() });
    }
    let n = strides.len() as f64;
    let stride_length = strides.iter().sum::<f64>() / n;
    let cycle_time = gaps.iter().sum::<f64>() / n / gait.fps;
    Ok((stride_length, cycle_time))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mocap::{Pose, Vec3, JOINT_COUNT};
    use std::f64::consts::PI;

    #[test]
    fn sine_minima_spacing() {
        let fps = 100.0;
        let period = 1.1;
        let h: Vec<f64> = (0..500).map(|f| 0.05 + 0.05 * (2.0 * PI * f as f64 / fps / period).sin()).collect();
        let s = strike_frames(&h, &StrikeConfig::default(), fps);
        assert!(s.len() >= 4, "{s:?}");
        for w in s.windows(2) {
            let gap = (w[1] - w[0]) as f64;
            assert!((gap - period * fps).abs() <= 1.0, "{gap}");
        }
        // first trough of sin at 3/4 period
        assert!((s[0] as f64 - 0.75 * period * fps).abs() <= 1.0);
    }

    #[test]
    fn monotone_has_no_strikes() {
        let h: Vec<f64> = (0..100).map(|f| f as f64 * 0.01).collect();
        assert!(strike_frames(&h, &StrikeConfig::default(), 30.0).is_empty());
        let h: Vec<f64> = (0..100).map(|f| -(f as f64)).collect();
        assert!(strike_frames(&h, &StrikeConfig::default(), 30.0).is_empty());
    }

    #[test]
    fn two_bounces() {
        // two V-shaped troughs of equal depth
        let mut h = vec![1.0; 60];
        for (i, v) in h.iter_mut().enumerate() {
            let d1 = (i as f64 - 15.0).abs();
            let d2 = (i as f64 - 45.0).abs();
            *v = (d1.min(d2) / 10.0).min(1.0);
        }
        assert_eq!(strike_frames(&h, &StrikeConfig::default(), 30.0), vec![15, 45]);
    }

    #[test]
    fn refractory_keeps_lower() {
        let h = [1.0, 0.0, 0.5, 0.01, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0];
        // at fps 20 the gap is 4 frames: 3 is merged into 1 (1 stays, lower)
        let s = strike_frames(&h, &StrikeConfig::default(), 20.0);
        assert_eq!(s, vec![1, 10]);
        let h = [1.0, 0.01, 0.5, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0];
        assert_eq!(strike_frames(&h, &StrikeConfig::default(), 20.0), vec![3, 10]);
    }

    fn walker(left: &[(usize, f64)], right: &[(usize, f64)], frames: usize, fps: f64) -> Gait {
        // feet rest on the ground (y = 0) at the scripted frames and are lifted otherwise
        let on = |script: &[(usize, f64)], f: usize| script.iter().find(|(t, _)| *t == f).map(|(_, x)| *x);
        let poses = (0..frames)
            .map(|f| {
                let mut positions = [Vec3::new(0.0, 1.0, 0.0); JOINT_COUNT];
                positions[JointId::LFoot.index()] = match on(left, f) {
                    Some(x) => Vec3::new(0.1, 0.0, x),
                    None => Vec3::new(0.1, 0.2, 0.0),
                };
                positions[JointId::RFoot.index()] = match on(right, f) {
                    Some(x) => Vec3::new(-0.1, 0.0, x),
                    None => Vec3::new(-0.1, 0.2, 0.0),
                };
                Pose::new(positions)
            })
            .collect();
        Gait::new("w", poses, fps, "test").unwrap()
    }

    #[test]
    fn uniform_stride_and_cycle() {
        let script: Vec<(usize, f64)> = (0..4).map(|i| (10 + 60 * i, 1.2 * i as f64)).collect();
        let g = walker(&script, &script, 200, 60.0);
        let s = detect_foot_strikes(&g, &StrikeConfig::default()).unwrap();
        assert_eq!(s.left, vec![10, 70, 130, 190]);
        let (stride, cycle) = stride_and_cycle(&g, &s).unwrap();
        assert!((stride - 1.2).abs() < 1e-12);
        assert!((cycle - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_foot_cycle_used_alone() {
        let left: Vec<(usize, f64)> = vec![(10, 0.0), (70, 1.5)];
        let right = vec![(40, 0.7)];
        let g = walker(&left, &right, 100, 60.0);
        let s = detect_foot_strikes(&g, &StrikeConfig::default()).unwrap();
        assert_eq!(s.right.len(), 1);
        let (stride, cycle) = stride_and_cycle(&g, &s).unwrap();
        assert!((stride - 1.5).abs() < 1e-12);
        assert!((cycle - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_cycle_error() {
        let g = walker(&[(10, 0.0)], &[(40, 0.0)], 100, 60.0);
        assert_eq!(
            detect_foot_strikes(&g, &StrikeConfig::default()).unwrap_err(),
            FeatureError::NoGaitCycle { left: 1, right: 1 }
        );
    }
}
