//! Append-only study log with an in-memory index rebuilt on open.
//!
//! Two line-delimited JSON files live in the data directory: `sessions.log`
//! and `responses.log`. Writers are serialized through one mutex; readers
//! clone an `Arc` of the current immutable snapshot.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use gaitdom::mapping::{Adjective, Likert, RatingRecord};
use serde::{Deserialize, Serialize};

use crate::session::{AssignmentPolicy, StudySession};
use crate::ServiceError;

pub const SESSIONS_LOG: &str = "sessions.log";
pub const RESPONSES_LOG: &str = "responses.log";

/// One questionnaire answer sheet as posted by a client.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingSubmission {
    pub session_id: String,
    pub gait_id: String,
    pub submissive: i64,
    pub withdrawn: i64,
    pub dominant: i64,
    pub confident: i64,
    /// Client-reported ISO-8601 time.
    pub timestamp: String,
}

impl RatingSubmission {
    fn values(&self) -> [i64; 4] {
        [self.submissive, self.withdrawn, self.dominant, self.confident]
    }
}

/// A validated submission as written to `responses.log`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredRating {
    pub session_id: String,
    pub participant_id: String,
    pub gait_id: String,
    /// In [`Adjective`] order.
    pub values: [Likert; 4],
    pub timestamp: String,
}

impl StoredRating {
    /// One mapping record per adjective.
    pub fn records(&self) -> impl Iterator<Item = RatingRecord> + '_ {
        Adjective::ALL.iter().zip(self.values).map(|(a, v)| RatingRecord {
            gait_id: self.gait_id.clone(),
            participant_id: self.participant_id.clone(),
            adjective: *a,
            value: v,
            timestamp: self.timestamp.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionStatus {
    #[serde(flatten)]
    pub session: StudySession,
    /// Assigned gaits already rated, in assignment order.
    pub completed: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Snapshot {
    sessions: BTreeMap<String, (StudySession, BTreeSet<String>)>,
    ratings: Vec<StoredRating>,
}

impl Snapshot {
    pub fn session(&self, id: &str) -> Option<SessionStatus> {
        self.sessions.get(id).map(|(s, done)| SessionStatus {
            session: s.clone(),
            completed: s.gait_ids.iter().filter(|g| done.contains(*g)).cloned().collect(),
        })
    }

    pub fn session_count(&self) -> usize {
        self.sessions.len()
    }

    pub fn ratings(&self) -> &[StoredRating] {
        &self.ratings
    }

    /// Rows in the responses CSV schema, in submission order.
    pub fn records(&self) -> Vec<RatingRecord> {
        self.ratings.iter().flat_map(|r| r.records()).collect()
    }

    fn validate(&self, sub: &RatingSubmission) -> Result<StoredRating, ServiceError> {
        let (session, done) = self
            .sessions
            .get(&sub.session_id)
            .ok_or_else(|| ServiceError::NotFound(format!("session `{}`", sub.session_id)))?;
        if !session.gait_ids.contains(&sub.gait_id) {
            return Err(ServiceError::Invalid(format!(
                "gait `{}` is not assigned to session `{}`",
                sub.gait_id, sub.session_id
            )));
        }
        let mut values = [Likert::new(1).expect("in range"); 4];
        for (slot, (a, v)) in values.iter_mut().zip(Adjective::ALL.iter().zip(sub.values())) {
            *slot = Likert::new(v).map_err(|_| ServiceError::Invalid(format!("{a} rating {v} outside 1..=5")))?;
        }
        if done.contains(&sub.gait_id) {
            return Err(ServiceError::Conflict(format!(
                "session `{}` already rated gait `{}`",
                sub.session_id, sub.gait_id
            )));
        }
        Ok(StoredRating {
            session_id: sub.session_id.clone(),
            participant_id: session.participant_id.clone(),
            gait_id: sub.gait_id.clone(),
            values,
            timestamp: sub.timestamp.clone(),
        })
    }

    fn apply_session(&mut self, s: StudySession) -> Result<(), ServiceError> {
        if self.sessions.contains_key(&s.session_id) {
            return Err(ServiceError::Corrupt(format!("session `{}` logged twice", s.session_id)));
        }
        self.sessions.insert(s.session_id.clone(), (s, BTreeSet::new()));
        Ok(())
    }

    fn apply_rating(&mut self, r: StoredRating) {
        if let Some((_, done)) = self.sessions.get_mut(&r.session_id) {
            done.insert(r.gait_id.clone());
        }
        self.ratings.push(r);
    }
}

struct Logs {
    sessions: File,
    responses: File,
}

pub struct StudyStore {
    dir: PathBuf,
    writer: Mutex<Logs>,
    snapshot: RwLock<Arc<Snapshot>>,
}

fn io(path: &Path, e: std::io::Error) -> ServiceError {
    ServiceError::Io(format!("{}: {e}", path.display()))
}

/// Opens a log for appending, cutting off a partial last line left by a crash.
fn open_log(path: &Path) -> Result<(File, Vec<String>), ServiceError> {
    let mut file = OpenOptions::new().read(true).append(true).create(true).open(path).map_err(|e| io(path, e))?;
    let mut lines = Vec::new();
    let mut complete_len = 0u64;
    let mut reader = BufReader::new(&file);
    let mut buf = String::new();
    loop {
        buf.clear();
        let n = reader.read_line(&mut buf).map_err(|e| io(path, e))?;
        if n == 0 {
            break;
        }
        if !buf.ends_with('\n') {
            log::warn!("{}: dropping incomplete final record", path.display());
            break;
        }
        complete_len += n as u64;
        if !buf.trim().is_empty() {
            lines.push(buf.trim_end().to_string());
        }
    }
    drop(reader);
    if file.metadata().map_err(|e| io(path, e))?.len() != complete_len {
        file.set_len(complete_len).map_err(|e| io(path, e))?;
    }
    file.seek(SeekFrom::End(0)).map_err(|e| io(path, e))?;
    Ok((file, lines))
}

fn append(file: &mut File, path: &Path, line: &str) -> Result<(), ServiceError> {
    let mut bytes = line.as_bytes().to_vec();
    bytes.push(b'\n');
    file.write_all(&bytes).map_err(|e| io(path, e))?;
    file.sync_data().map_err(|e| io(path, e))
}

impl StudyStore {
    /// Opens or creates the logs in `dir` and replays them.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, ServiceError> {
        let dir = dir.as_ref().to_path_buf();
        std::fs::create_dir_all(&dir).map_err(|e| io(&dir, e))?;
        let (sessions, session_lines) = open_log(&dir.join(SESSIONS_LOG))?;
        let (responses, response_lines) = open_log(&dir.join(RESPONSES_LOG))?;
        let mut snap = Snapshot::default();
        for (i, line) in session_lines.iter().enumerate() {
            let s: StudySession = serde_json::from_str(line)
                .map_err(|e| ServiceError::Corrupt(format!("{SESSIONS_LOG} record {}: {e}", i + 1)))?;
            snap.apply_session(s)?;
        }
        for (i, line) in response_lines.iter().enumerate() {
            let r: StoredRating = serde_json::from_str(line)
                .map_err(|e| ServiceError::Corrupt(format!("{RESPONSES_LOG} record {}: {e}", i + 1)))?;
            let sub = RatingSubmission {
                session_id: r.session_id.clone(),
                gait_id: r.gait_id.clone(),
                submissive: r.values[0].get().into(),
                withdrawn: r.values[1].get().into(),
                dominant: r.values[2].get().into(),
                confident: r.values[3].get().into(),
                timestamp: r.timestamp.clone(),
            };
            let checked = snap
                .validate(&sub)
                .map_err(|e| ServiceError::Corrupt(format!("{RESPONSES_LOG} record {}: {e}", i + 1)))?;
            snap.apply_rating(checked);
        }
        Ok(StudyStore { dir, writer: Mutex::new(Logs { sessions, responses }), snapshot: RwLock::new(Arc::new(snap)) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        Arc::clone(&self.snapshot.read().expect("snapshot lock"))
    }

    fn publish(&self, snap: Snapshot) {
        *self.snapshot.write().expect("snapshot lock") = Arc::new(snap);
    }

    /// Logs a new session with the next sequential id.
    pub fn create_session(
        &self,
        participant_id: &str,
        gait_ids: Vec<String>,
        policy: AssignmentPolicy,
    ) -> Result<StudySession, ServiceError> {
        let mut logs = self.writer.lock().expect("writer lock");
        let mut snap = (*self.snapshot()).clone();
        let session = StudySession {
            session_id: format!("s{:06}", snap.session_count() + 1),
            participant_id: participant_id.to_string(),
            gait_ids,
            policy,
        };
        let line = serde_json::to_string(&session).expect("session serialises");
        append(&mut logs.sessions, &self.dir.join(SESSIONS_LOG), &line)?;
        snap.apply_session(session.clone())?;
        self.publish(snap);
        Ok(session)
    }

    /// Validates and durably appends one submission.
    pub fn submit(&self, sub: &RatingSubmission) -> Result<StoredRating, ServiceError> {
        let mut logs = self.writer.lock().expect("writer lock");
        let mut snap = (*self.snapshot()).clone();
        let stored = snap.validate(sub)?;
        let line = serde_json::to_string(&stored).expect("rating serialises");
        append(&mut logs.responses, &self.dir.join(RESPONSES_LOG), &line)?;
        snap.apply_rating(stored.clone());
        self.publish(snap);
        Ok(stored)
    }
}
