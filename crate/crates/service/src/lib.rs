//! HTTP front end for the gait perception study.
//!
//! Participants get a seeded random subset of the corpus, fetch each gait as
//! a canonical interchange document, and post one four-adjective answer
//! sheet per gait. Answers go to an append-only log and can be exported as
//! the responses CSV read by the labelling pipeline. Trained models are
//! served through `POST /classify`.

mod api;
mod corpus;
pub mod session;
pub mod store;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

pub use api::router;
pub use corpus::{load_gait_dir, Corpus, GaitSummary};
pub use session::{assign_gaits, session_seed, AssignmentPolicy, PolicyConfig, StudySession};
pub use store::{RatingSubmission, SessionStatus, Snapshot, StoredRating, StudyStore};

use gaitdom::classifier::{load_model, OvrModel};
use gaitdom::mapping::DominanceMapping;

pub const PORT_ENV: &str = "GAITDOM_PORT";
pub const DATA_ENV: &str = "GAITDOM_DATA";
pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ServiceError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error("conflict: {0}")]
    Conflict(String),
    #[error("invalid request: {0}")]
    Invalid(String),
    #[error("corrupt data: {0}")]
    Corrupt(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] gaitdom::Error),
}

/// Everything a running service needs.
pub struct AppState {
    pub store: StudyStore,
    pub corpus: Corpus,
    pub models: std::collections::BTreeMap<String, OvrModel>,
    pub mapping: Option<DominanceMapping>,
    pub server_seed: u64,
    pub policy: PolicyConfig,
}

impl AppState {
    /// Assigns and logs a session for `participant_id`.
    pub fn create_session(&self, participant_id: &str, policy: AssignmentPolicy) -> Result<StudySession, ServiceError> {
        if participant_id.trim().is_empty() {
            return Err(ServiceError::Invalid("participant_id must not be empty".into()));
        }
        let (policy, size) = self.policy.resolve(policy, self.corpus.len());
        let seed = session_seed(self.server_seed, self.corpus.version(), participant_id);
        let ids = assign_gaits(&self.corpus.ids(), size, seed)?;
        self.store.create_session(participant_id, ids, policy)
    }
}

/// Data directory layout: `gaits/*.json`, `models/*.json` (model id = file
/// stem), optional `mapping.json`, and the two study logs.
#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub data_dir: PathBuf,
    pub port: u16,
    pub server_seed: u64,
    pub policy: PolicyConfig,
}

impl ServiceConfig {
    /// Port and data directory from the environment, falling back to the given values.
    pub fn from_env(data_dir: impl Into<PathBuf>, port: u16, server_seed: u64) -> Result<Self, ServiceError> {
        let port = match std::env::var(PORT_ENV) {
            Ok(p) => p.parse().map_err(|_| ServiceError::Invalid(format!("{PORT_ENV}=`{p}` is not a port")))?,
            Err(_) => port,
        };
        let data_dir = std::env::var_os(DATA_ENV).map(PathBuf::from).unwrap_or_else(|| data_dir.into());
        Ok(ServiceConfig { data_dir, port, server_seed, policy: PolicyConfig::default() })
    }
}

fn load_models(dir: &Path) -> Result<std::collections::BTreeMap<String, OvrModel>, ServiceError> {
    let mut out = std::collections::BTreeMap::new();
    if !dir.is_dir() {
        return Ok(out);
    }
    let entries = std::fs::read_dir(dir).map_err(|e| ServiceError::Io(format!("{}: {e}", dir.display())))?;
    for entry in entries {
        let path = entry.map_err(|e| ServiceError::Io(e.to_string()))?.path();
        if path.extension().is_some_and(|e| e == "json") {
            let id = path.file_stem().unwrap_or_default().to_string_lossy().to_string();
            let model = load_model(&path).map_err(gaitdom::Error::from)?;
            out.insert(id, model);
        }
    }
    Ok(out)
}

impl AppState {
    pub fn load(config: &ServiceConfig) -> Result<Self, ServiceError> {
        let dir = &config.data_dir;
        let corpus = Corpus::new(load_gait_dir(&dir.join("gaits"))?)?;
        let models = load_models(&dir.join("models"))?;
        let mapping_path = dir.join("mapping.json");
        let mapping = if mapping_path.is_file() {
            let text = std::fs::read_to_string(&mapping_path).map_err(|e| ServiceError::Io(e.to_string()))?;
            Some(serde_json::from_str(&text).map_err(|e| ServiceError::Corrupt(format!("mapping.json: {e}")))?)
        } else {
            None
        };
        Ok(AppState {
            store: StudyStore::open(dir)?,
            corpus,
            models,
            mapping,
            server_seed: config.server_seed,
            policy: config.policy,
        })
    }
}

/// Loads the data directory and serves until interrupted.
pub async fn serve(config: ServiceConfig) -> Result<(), ServiceError> {
    let state = Arc::new(AppState::load(&config)?);
    log::info!(
        "serving {} gaits and {} models from {} on port {}",
        state.corpus.len(),
        state.models.len(),
        config.data_dir.display(),
        config.port
    );
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", config.port))
        .await
        .map_err(|e| ServiceError::Io(format!("bind port {}: {e}", config.port)))?;
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| ServiceError::Io(e.to_string()))
}
