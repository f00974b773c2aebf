use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ServiceError;

/// How many gaits a participant is shown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssignmentPolicy {
    /// A handful of clips, for small corpora.
    Small,
    /// More clips, for large corpora.
    Large,
    /// `Small` or `Large` depending on corpus size.
    Auto,
}

impl FromStr for AssignmentPolicy {
    type Err = ServiceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "small" => Ok(AssignmentPolicy::Small),
            "large" => Ok(AssignmentPolicy::Large),
            "auto" => Ok(AssignmentPolicy::Auto),
            other => Err(ServiceError::Invalid(format!("unknown policy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub small_size: usize,
    pub large_size: usize,
    /// Corpora with at least this many gaits get the large policy under `Auto`.
    pub large_corpus: usize,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        PolicyConfig { small_size: 6, large_size: 12, large_corpus: 100 }
    }
}

impl PolicyConfig {
    /// Concrete policy and subset size for a corpus.
    pub fn resolve(&self, policy: AssignmentPolicy, corpus_size: usize) -> (AssignmentPolicy, usize) {
        match policy {
            AssignmentPolicy::Small => (AssignmentPolicy::Small, self.small_size),
            AssignmentPolicy::Large => (AssignmentPolicy::Large, self.large_size),
            AssignmentPolicy::Auto if corpus_size >= self.large_corpus => (AssignmentPolicy::Large, self.large_size),
            AssignmentPolicy::Auto => (AssignmentPolicy::Small, self.small_size),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StudySession {
    pub session_id: String,
    pub participant_id: String,
    pub gait_ids: Vec<String>,
    pub policy: AssignmentPolicy,
}

/// Seed for one participant's assignment: the first 8 bytes of
/// SHA-256(server seed, corpus version, participant id).
pub fn session_seed(server_seed: u64, corpus_version: &str, participant_id: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(server_seed.to_le_bytes());
    h.update((corpus_version.len() as u64).to_le_bytes());
    h.update(corpus_version.as_bytes());
    h.update(participant_id.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("32-byte digest"))
}

/// `size` distinct ids drawn without replacement, in draw order.
pub fn assign_gaits(corpus: &[String], size: usize, seed: u64) -> Result<Vec<String>, ServiceError> {
    if size == 0 || size > corpus.len() {
        return Err(ServiceError::Invalid(format!("cannot assign {size} gaits from a corpus of {}", corpus.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sample(&mut rng, corpus.len(), size).into_iter().map(|i| corpus[i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn corpus(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("g{i:02}")).collect()
    }

    #[test]
    fn six_distinct_from_thirty_six() {
        let ids = assign_gaits(&corpus(36), 6, 1).unwrap();
        assert_eq!(ids.iter().collect::<HashSet<_>>().len(), 6);
    }

    #[test]
    fn too_small_corpus() {
        assert!(assign_gaits(&corpus(5), 6, 1).is_err());
    }

    #[test]
    fn participant_changes_the_seed() {
        assert_eq!(session_seed(1, "v", "alice"), session_seed(1, "v", "alice"));
        assert_ne!(session_seed(1, "v", "alice"), session_seed(1, "v", "bob"));
        assert_ne!(session_seed(1, "v", "alice"), session_seed(1, "w", "alice"));
        assert_ne!(session_seed(1, "v", "alice"), session_seed(2, "v", "alice"));
    }

    #[test]
    fn auto_policy_threshold() {
        let p = PolicyConfig::default();
        assert_eq!(p.resolve(AssignmentPolicy::Auto, 36), (AssignmentPolicy::Small, 6));
        assert_eq!(p.resolve(AssignmentPolicy::Auto, 150), (AssignmentPolicy::Large, 12));
    }
}
