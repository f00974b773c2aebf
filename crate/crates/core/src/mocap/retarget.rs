use std::collections::BTreeMap;
use std::path::Path;

use super::fk::RawMotion;
use super::skeleton::{Gait, JointId, Pose, Vec3, JOINT_COUNT};
use super::MocapError;

/// Name-based assignment of raw skeleton joints to canonical joints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointMapping {
    raw_to_canonical: BTreeMap<String, JointId>,
}

impl JointMapping {
    /// Builds a mapping, rejecting two raw joints that target one canonical joint.
    pub fn new<I, S>(pairs: I) -> Result<Self, MocapError>
    where
        I: IntoIterator<Item = (S, JointId)>,
        S: Into<String>,
    {
        let mut raw_to_canonical = BTreeMap::new();
        let mut claimed: BTreeMap<JointId, String> = BTreeMap::new();
        for (raw, joint) in pairs {
            let raw = raw.into();
            if let Some(prev) = claimed.get(&joint) {
                if *prev != raw {
                    return Err(MocapError::DuplicateTarget { joint, first: prev.clone(), second: raw });
                }
            }
            claimed.insert(joint, raw.clone());
            raw_to_canonical.insert(raw, joint);
        }
        Ok(JointMapping { raw_to_canonical })
    }

    /// Each canonical name mapped to itself.
    pub fn identity() -> Self {
        Self::new(JointId::ALL.iter().map(|j| (j.name(), *j))).expect("canonical names are distinct")
    }

    /// Joint names used by the CMU motion-capture BVH conversions.
    pub fn cmu() -> Self {
        use JointId::*;
        Self::new([
            ("Hips", Root),
            ("Spine", Spine),
            ("Neck", Neck),
            ("Head", Head),
            ("LeftArm", LShoulder),
            ("LeftForeArm", LElbow),
            ("LeftHand", LHand),
            ("RightArm", RShoulder),
            ("RightForeArm", RElbow),
            ("RightHand", RHand),
            ("LeftUpLeg", LHip),
            ("LeftLeg", LKnee),
            ("LeftFoot", LFoot),
            ("RightUpLeg", RHip),
            ("RightLeg", RKnee),
            ("RightFoot", RFoot),
        ])
        .expect("preset is injective")
    }

    /// Parses a flat JSON object `{"raw name": "CanonicalName", ...}`.
    pub fn from_json(text: &str) -> Result<Self, MocapError> {
        let map: BTreeMap<String, String> =
            serde_json::from_str(text).map_err(|e| MocapError::Invalid { path: "mapping".into(), reason: e.to_string() })?;
        let pairs = map
            .into_iter()
            .map(|(raw, canon)| canon.parse::<JointId>().map(|j| (raw, j)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(pairs)
    }

    pub fn load(path: &Path) -> Result<Self, MocapError> {
        let text = std::fs::read_to_string(path).map_err(|e| MocapError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Self::from_json(&text)
    }

    pub fn get(&self, raw: &str) -> Option<JointId> {
        self.raw_to_canonical.get(raw).copied()
    }

    /// Canonical joints with no raw joint assigned.
    pub fn missing(&self) -> Vec<JointId> {
        JointId::ALL.iter().copied().filter(|j| !self.raw_to_canonical.values().any(|v| v == j)).collect()
    }
}

/// Relabels raw joint trajectories onto the canonical skeleton.
///
/// Positions are copied as-is; frames keep their source order.
pub fn retarget(raw: &RawMotion, mapping: &JointMapping, fps: f64, id: &str, source: &str) -> Result<Gait, MocapError> {
    let mut columns: [Option<usize>; JOINT_COUNT] = [None; JOINT_COUNT];
    for (col, name) in raw.joint_names.iter().enumerate() {
        if let Some(joint) = mapping.get(name) {
            columns[joint.index()] = Some(col);
        }
    }
    let missing: Vec<JointId> = JointId::ALL.iter().copied().filter(|j| columns[j.index()].is_none()).collect();
    if !missing.is_empty() {
        return Err(MocapError::UnmappedJoints(missing));
    }
    let columns: Vec<usize> = columns.iter().map(|c| c.unwrap()).collect();

    let frames = raw
        .frames
        .iter()
        .enumerate()
        .map(|(f, positions)| {
            if positions.len() != raw.joint_names.len() {
                return Err(MocapError::Invalid {
                    path: format!("frames[{f}]"),
                    reason: format!("expected {} joints, found {}", raw.joint_names.len(), positions.len()),
                });
            }
            let mut out = [Vec3::zeros(); JOINT_COUNT];
            for (dst, &col) in out.iter_mut().zip(&columns) {
                *dst = positions[col];
            }
            Ok(Pose::new(out))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Gait::new(id, frames, fps, source)
}
