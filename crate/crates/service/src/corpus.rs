use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use gaitdom::mocap::{load_gait, Gait};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::ServiceError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaitSummary {
    pub id: String,
    pub frames: usize,
    pub fps: f64,
    pub source: String,
}

/// The registered gaits, with a content hash as version.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    gaits: BTreeMap<String, Arc<Gait>>,
    version: String,
}

impl Corpus {
    pub fn new(gaits: Vec<Gait>) -> Result<Self, ServiceError> {
        let mut map = BTreeMap::new();
        for g in gaits {
            let id = g.id.clone();
            if map.insert(id.clone(), Arc::new(g)).is_some() {
                return Err(ServiceError::Invalid(format!("duplicate gait id `{id}`")));
            }
        }
        let mut h = Sha256::new();
        for g in map.values() {
            h.update(g.to_json().as_bytes());
            h.update(b"\n");
        }
        let version = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        Ok(Corpus { gaits: map, version })
    }

    pub fn len(&self) -> usize {
        self.gaits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaits.is_empty()
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    /// Ids in sorted order.
    pub fn ids(&self) -> Vec<String> {
        self.gaits.keys().cloned().collect()
    }

    pub fn get(&self, id: &str) -> Option<&Arc<Gait>> {
        self.gaits.get(id)
    }

    pub fn summaries(&self) -> Vec<GaitSummary> {
        self.gaits
            .values()
            .map(|g| GaitSummary { id: g.id.clone(), frames: g.frame_count(), fps: g.fps, source: g.source.clone() })
            .collect()
    }
}

/// Every `*.json` gait document in `dir`; a missing directory is an empty corpus.
pub fn load_gait_dir(dir: &Path) -> Result<Vec<Gait>, ServiceError> {
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| ServiceError::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| load_gait(p).map_err(|e| ServiceError::Core(e.into()))).collect()
}
