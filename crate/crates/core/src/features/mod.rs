//! The 29-dimensional gait descriptor.
//!
//! Per frame, 27 values are computed: 12 posture measures (openness and
//! erectness) followed by speed, acceleration and jerk magnitudes of the
//! hands, head and feet. These are averaged over the clip. Gait-cycle time and
//! stride length, which come from foot strikes rather than single frames, are
//! appended at the end.

mod kinematics;
mod normalize;
mod posture;
mod strikes;

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mocap::Gait;

pub use kinematics::{joint_kinematics, JointKinematics, MIN_KINEMATIC_FRAMES, TRACKED_JOINTS};
pub use normalize::{apply_normalization, fit_normalization, NormalizationParams};
pub use posture::{heading_angle, posture_features, PostureBlock};
pub use strikes::{detect_foot_strikes, stride_and_cycle, strike_frames, FootStrikes, StrikeConfig};

pub const POSTURE_DIM: usize = 12;
pub const FRAME_DIM: usize = 27;
pub const FEATURE_DIM: usize = 29;

/// Version of the column layout below. Models record it and refuse other layouts.
pub const FEATURE_LAYOUT_VERSION: u32 = 1;

pub const FEATURE_NAMES: [&str; FEATURE_DIM] = [
    "volume",
    "angle_neck_shoulders",
    "angle_rshoulder",
    "angle_lshoulder",
    "angle_vertical_back",
    "angle_head_back",
    "dist_rhand_root",
    "dist_lhand_root",
    "dist_rfoot_root",
    "dist_lfoot_root",
    "area_hands_neck",
    "area_feet_root",
    "speed_rhand",
    "speed_lhand",
    "speed_head",
    "speed_rfoot",
    "speed_lfoot",
    "accel_rhand",
    "accel_lhand",
    "accel_head",
    "accel_rfoot",
    "accel_lfoot",
    "jerk_rhand",
    "jerk_lhand",
    "jerk_head",
    "jerk_rfoot",
    "jerk_lfoot",
    "gait_cycle_time",
    "stride_length",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FeatureError {
    #[error("gait has {found} frames, at least {needed} required")]
    InsufficientFrames { needed: usize, found: usize },
    #[error("no complete gait cycle: {left} left and {right} right foot strikes")]
    NoGaitCycle { left: usize, right: usize },
    #[error("expected {expected} values, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no feature vectors given")]
    EmptyInput,
    #[error("features csv: {0}")]
    Csv(String),
}

/// Per-frame values in the layout above (first 27 columns).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameFeatures(pub [f64; FRAME_DIM]);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaitFeatures {
    pub values: [f64; FEATURE_DIM],
    pub layout_version: u32,
}

impl GaitFeatures {
    pub fn new(values: [f64; FEATURE_DIM]) -> Self {
        GaitFeatures { values, layout_version: FEATURE_LAYOUT_VERSION }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn gait_cycle_time(&self) -> f64 {
        self.values[27]
    }

    pub fn stride_length(&self) -> f64 {
        self.values[28]
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExtractOptions {
    pub strikes: StrikeConfig,
}

/// Per-frame feature rows of a gait.
pub fn frame_features(gait: &Gait) -> Result<Vec<FrameFeatures>, FeatureError> {
    let kin = joint_kinematics(gait)?;
    Ok(gait
        .frames
        .iter()
        .enumerate()
        .map(|(t, pose)| {
            let mut row = [0.0; FRAME_DIM];
            row[..POSTURE_DIM].copy_from_slice(&posture_features(pose).values);
            for k in 0..TRACKED_JOINTS.len() {
                row[POSTURE_DIM + k] = kin.speed[k][t];
                row[POSTURE_DIM + 5 + k] = kin.acceleration[k][t];
                row[POSTURE_DIM + 10 + k] = kin.jerk[k][t];
            }
            FrameFeatures(row)
        })
        .collect())
}

pub fn extract_features(gait: &Gait) -> Result<GaitFeatures, FeatureError> {
    extract_features_with(gait, &ExtractOptions::default())
}

pub fn extract_features_with(gait: &Gait, options: &ExtractOptions) -> Result<GaitFeatures, FeatureError> {
    let rows = frame_features(gait)?;
    let strikes = detect_foot_strikes(gait, &options.strikes)?;
    let (stride, cycle) = stride_and_cycle(gait, &strikes)?;

    let mut values = [0.0; FEATURE_DIM];
    for row in &rows {
        for (acc, v) in values.iter_mut().zip(row.0.iter()) {
            *acc += v;
        }
    }
    let tau = rows.len() as f64;
    for v in values[..FRAME_DIM].iter_mut() {
        *v /= tau;
    }
    values[FRAME_DIM] = cycle;
    values[FRAME_DIM + 1] = stride;
    Ok(GaitFeatures::new(values))
}

/// Writes `gait_id` plus the 29 named columns, one row per gait.
pub fn write_features_csv<W: Write>(writer: W, rows: &[(String, GaitFeatures)]) -> Result<(), FeatureError> {
    let mut w = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| FeatureError::Csv(e.to_string());
    let mut header = vec!["gait_id"];
    header.extend(FEATURE_NAMES);
    w.write_record(&header).map_err(err)?;
    for (id, f) in rows {
        let mut record = vec![id.clone()];
        record.extend(f.values.iter().map(|v| v.to_string()));
        w.write_record(&record).map_err(err)?;
    }
    w.flush().map_err(|e| FeatureError::Csv(e.to_string()))
}

pub fn read_features_csv<R: Read>(reader: R) -> Result<Vec<(String, GaitFeatures)>, FeatureError> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers().map_err(|e| FeatureError::Csv(e.to_string()))?.clone();
    let expected: Vec<&str> = std::iter::once("gait_id").chain(FEATURE_NAMES).collect();
    if header.iter().collect::<Vec<_>>() != expected {
        return Err(FeatureError::Csv("header does not match feature layout v1".into()));
    }
    let mut out = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record.map_err(|e| FeatureError::Csv(e.to_string()))?;
        let mut values = [0.0; FEATURE_DIM];
        for (k, v) in values.iter_mut().enumerate() {
            *v = record[k + 1]
                .parse()
                .map_err(|_| FeatureError::Csv(format!("row {}: column {} is not a number", line + 2, FEATURE_NAMES[k])))?;
        }
        out.push((record[0].to_string(), GaitFeatures::new(values)));
    }
    Ok(out)
}
