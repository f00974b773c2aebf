//! Gait to dominance label, shared by every front end.

use serde::Serialize;

use crate::classifier::OvrModel;
use crate::features::extract_features;
use crate::mapping::{DominanceLabel, DominanceMapping, LabelSet, Level3};
use crate::mocap::Gait;
use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub gait_id: String,
    /// Present for five-level models.
    pub label5: Option<DominanceLabel>,
    pub label3: Level3,
    pub decision_values: Vec<f64>,
    /// Perceived-dominance score, when the gait belongs to the rated corpus.
    pub normalized_score: Option<f64>,
}

pub fn classify_gait(gait: &Gait, model: &OvrModel, mapping: Option<&DominanceMapping>) -> Result<Classification, Error> {
    let features = extract_features(gait)?;
    let p = model.predict(&features)?;
    let (label5, label3) = match model.label_set() {
        LabelSet::Five => {
            let l = DominanceLabel::from_index(p.class).expect("five-level class");
            (Some(l), l.collapse())
        }
        LabelSet::Three => (None, Level3::from_index(p.class).expect("three-level class")),
    };
    Ok(Classification {
        gait_id: gait.id.clone(),
        label5,
        label3,
        decision_values: p.decision_values,
        normalized_score: mapping.and_then(|m| m.score(&gait.id)).map(|s| s.normalized),
    })
}
