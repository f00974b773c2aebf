//! Canonical gait interchange document.
//!
//! ```json
//! {"id": "cmu_01", "fps": 120.0, "source": "CMU",
//!  "frames": [[[x, y, z], ... 16 joints ...], ...]}
//! ```
//!
//! Joints appear in [`JointId`](super::JointId) order. Numbers are written with
//! shortest round-trip precision, so loading a saved gait is exact.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::skeleton::{Gait, Pose, JOINT_COUNT};
use super::MocapError;

#[derive(Debug, Serialize, Deserialize)]
struct GaitDocument {
    id: String,
    fps: f64,
    source: String,
    frames: Vec<Vec<[f64; 3]>>,
}

impl Gait {
    pub fn to_json(&self) -> String {
        let doc = GaitDocument {
            id: self.id.clone(),
            fps: self.fps,
            source: self.source.clone(),
            frames: self.frames.iter().map(|p| p.to_arrays().to_vec()).collect(),
        };
        serde_json::to_string(&doc).expect("gait document always serialises")
    }

    pub fn from_json(text: &str) -> Result<Gait, MocapError> {
        let doc: GaitDocument =
            serde_json::from_str(text).map_err(|e| MocapError::Invalid { path: "$".into(), reason: e.to_string() })?;
        let mut frames = Vec::with_capacity(doc.frames.len());
        for (i, joints) in doc.frames.iter().enumerate() {
            let arr: &[[f64; 3]; JOINT_COUNT] = joints.as_slice().try_into().map_err(|_| MocapError::Invalid {
                path: format!("frames[{i}]"),
                reason: format!("expected {JOINT_COUNT} joints, found {}", joints.len()),
            })?;
            frames.push(Pose::from_arrays(arr));
        }
        Gait::new(doc.id, frames, doc.fps, doc.source)
    }
}

pub fn load_gait(path: &Path) -> Result<Gait, MocapError> {
    let text = std::fs::read_to_string(path).map_err(|e| MocapError::Io { path: path.display().to_string(), reason: e.to_string() })?;
    Gait::from_json(&text)
}

pub fn save_gait(gait: &Gait, path: &Path) -> Result<(), MocapError> {
    std::fs::write(path, gait.to_json()).map_err(|e| MocapError::Io { path: path.display().to_string(), reason: e.to_string() })
}
