use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::features::heading_angle;
use crate::mapping::{DominanceLabel, GaitLabel};
use crate::mocap::{rotate_about_vertical, Gait, JointId, Vec3, JOINT_COUNT};

use super::EngineError;

/// Horizontal displacements shorter than this do not define a walking direction.
const MIN_TRAVEL: f64 = 1e-6;

/// A gait readied for playback: poses relative to the horizontal root
/// position and turned to face +Z.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedGait {
    gait: Gait,
    relative: Vec<[Vec3; JOINT_COUNT]>,
    source_heading: f64,
    walking_speed: f64,
}

impl PreparedGait {
    pub fn new(gait: Gait) -> Self {
        let first = gait.frames[0].joint(JointId::Root);
        let last = gait.frames[gait.frames.len() - 1].joint(JointId::Root);
        let travel = Vec3::new(last.x - first.x, 0.0, last.z - first.z);
        let source_heading = if travel.norm() > MIN_TRAVEL {
            travel.x.atan2(travel.z)
        } else {
            heading_angle(&gait.frames[0]).unwrap_or(0.0)
        };
        let relative = gait
            .frames
            .iter()
            .map(|pose| {
                let root = pose.joint(JointId::Root);
                let origin = Vec3::new(root.x, 0.0, root.z);
                pose.positions.map(|p| rotate_about_vertical(&(p - origin), -source_heading))
            })
            .collect();
        let walking_speed = gait.mean_walking_speed();
        PreparedGait { gait, relative, source_heading, walking_speed }
    }

    pub fn id(&self) -> &str {
        &self.gait.id
    }

    pub fn gait(&self) -> &Gait {
        &self.gait
    }

    pub fn fps(&self) -> f64 {
        self.gait.fps
    }

    pub fn frame_count(&self) -> usize {
        self.relative.len()
    }

    /// Direction of travel of the source clip, radians from +Z toward +X.
    pub fn source_heading(&self) -> f64 {
        self.source_heading
    }

    pub fn walking_speed(&self) -> f64 {
        self.walking_speed
    }

    /// Canonical pose at a fractional frame index; the last frame blends back
    /// into the first.
    pub fn pose_at(&self, cursor: f64) -> [Vec3; JOINT_COUNT] {
        let n = self.relative.len();
        let c = cursor.rem_euclid(n as f64);
        let i0 = (c.floor() as usize).min(n - 1);
        let w = c - i0 as f64;
        let a = &self.relative[i0];
        if w == 0.0 {
            return *a;
        }
        let b = &self.relative[(i0 + 1) % n];
        std::array::from_fn(|k| a[k] + (b[k] - a[k]) * w)
    }

    /// Source root position at a fractional frame index, interpolated like [`Self::pose_at`].
    pub fn source_root_at(&self, cursor: f64) -> Vec3 {
        let n = self.gait.frames.len();
        let c = cursor.rem_euclid(n as f64);
        let i0 = (c.floor() as usize).min(n - 1);
        let w = c - i0 as f64;
        let a = self.gait.frames[i0].joint(JointId::Root);
        if w == 0.0 {
            return a;
        }
        let b = self.gait.frames[(i0 + 1) % n].joint(JointId::Root);
        a + (b - a) * w
    }
}

/// Pure boolean test over a gait, with a description for error messages.
#[derive(Clone)]
pub struct ConstraintPredicate {
    description: String,
    test: Arc<dyn Fn(&PreparedGait) -> bool + Send + Sync>,
}

impl ConstraintPredicate {
    pub fn new(description: impl Into<String>, test: impl Fn(&PreparedGait) -> bool + Send + Sync + 'static) -> Self {
        ConstraintPredicate { description: description.into(), test: Arc::new(test) }
    }

    pub fn always() -> Self {
        Self::new("any gait", |_| true)
    }

    pub fn max_walking_speed(limit: f64) -> Self {
        Self::new(format!("walking speed <= {limit} m/s"), move |g| g.walking_speed() <= limit)
    }

    pub fn and(self, other: ConstraintPredicate) -> Self {
        let (a, b) = (self.test, other.test);
        ConstraintPredicate {
            description: format!("{} and {}", self.description, other.description),
            test: Arc::new(move |g| a(g) && b(g)),
        }
    }

    pub fn test(&self, gait: &PreparedGait) -> bool {
        (self.test)(gait)
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

impl fmt::Debug for ConstraintPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConstraintPredicate({})", self.description)
    }
}

#[derive(Debug, Clone)]
pub struct LibraryEntry {
    pub gait: Arc<PreparedGait>,
    pub label: DominanceLabel,
}

/// Labeled gaits indexed by dominance level. Immutable once built.
#[derive(Debug, Clone, Default)]
pub struct GaitLibrary {
    entries: Vec<LibraryEntry>,
    by_label: [Vec<usize>; 5],
    by_id: HashMap<String, usize>,
}

impl GaitLibrary {
    pub fn new(gaits: Vec<(Gait, DominanceLabel)>) -> Result<Self, EngineError> {
        let mut lib = GaitLibrary::default();
        for (gait, label) in gaits {
            if lib.by_id.contains_key(&gait.id) {
                return Err(EngineError::DuplicateGait(gait.id));
            }
            let idx = lib.entries.len();
            lib.by_id.insert(gait.id.clone(), idx);
            lib.by_label[label.index()].push(idx);
            lib.entries.push(LibraryEntry { gait: Arc::new(PreparedGait::new(gait)), label });
        }
        Ok(lib)
    }

    /// Pairs gaits with their labels by id. Every gait must be labeled;
    /// labels for absent gaits are ignored.
    pub fn from_labels(gaits: Vec<Gait>, labels: &[GaitLabel]) -> Result<Self, EngineError> {
        let index: HashMap<&str, DominanceLabel> = labels.iter().map(|l| (l.gait_id.as_str(), l.label5)).collect();
        let paired = gaits
            .into_iter()
            .map(|g| match index.get(g.id.as_str()) {
                Some(&l) => Ok((g, l)),
                None => Err(EngineError::UnlabeledGait(g.id)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(paired)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[LibraryEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&LibraryEntry> {
        self.by_id.get(id).map(|&i| &self.entries[i])
    }

    pub fn with_label(&self, label: DominanceLabel) -> impl Iterator<Item = &LibraryEntry> {
        self.by_label[label.index()].iter().map(|&i| &self.entries[i])
    }

    pub fn count(&self, label: DominanceLabel) -> usize {
        self.by_label[label.index()].len()
    }
}

/// Uniform random choice among gaits with the desired level that pass the predicate.
pub fn select_gait<R: Rng + ?Sized>(
    library: &GaitLibrary,
    desired: DominanceLabel,
    predicate: &ConstraintPredicate,
    rng: &mut R,
) -> Result<Arc<PreparedGait>, EngineError> {
    if library.is_empty() {
        return Err(EngineError::EmptyLibrary);
    }
    let qualifying: Vec<&LibraryEntry> = library.with_label(desired).filter(|e| predicate.test(&e.gait)).collect();
    if qualifying.is_empty() {
        return Err(EngineError::NoMatchingGait { level: desired, predicate: predicate.description.clone() });
    }
    Ok(Arc::clone(&qualifying[rng.random_range(0..qualifying.len())].gait))
}
