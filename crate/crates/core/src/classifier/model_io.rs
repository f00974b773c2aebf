use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::features::FEATURE_LAYOUT_VERSION;

use super::ovr::OvrModel;
use super::ClassifierError;

pub const MODEL_FORMAT: &str = "gaitdom-ovr-svm";
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    format: String,
    version: u32,
    classes: Vec<String>,
    #[serde(flatten)]
    model: OvrModel,
}

#[derive(Deserialize)]
struct Header {
    format: String,
    version: u32,
    layout_version: u32,
}

pub fn model_to_json(model: &OvrModel) -> String {
    let doc = ModelDocument {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        classes: model.label_set().class_names().into_iter().map(String::from).collect(),
        model: model.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("model serializes")
}

/// Parses a model document and refuses ones this build cannot use.
pub fn model_from_json(text: &str) -> Result<OvrModel, ClassifierError> {
    let header: Header = serde_json::from_str(text).map_err(|e| ClassifierError::Corrupt(e.to_string()))?;
    if header.format != MODEL_FORMAT {
        return Err(ClassifierError::Corrupt(format!("unknown model format `{}`", header.format)));
    }
    if header.version != MODEL_VERSION {
        return Err(ClassifierError::ModelVersion { found: header.version, supported: MODEL_VERSION });
    }
    if header.layout_version != FEATURE_LAYOUT_VERSION {
        return Err(ClassifierError::LayoutMismatch { model: header.layout_version, features: FEATURE_LAYOUT_VERSION });
    }
    let doc: ModelDocument = serde_json::from_str(text).map_err(|e| ClassifierError::Corrupt(e.to_string()))?;
    let model = doc.model;
    let expected: Vec<&str> = model.label_set().class_names();
    if doc.classes != expected || model.classifier.scorers.len() != expected.len() {
        return Err(ClassifierError::Corrupt("class list does not match the label set".into()));
    }
    if model.normalization.dim() != crate::features::FEATURE_DIM
        || model.normalization.max.len() != model.normalization.dim()
    {
        return Err(ClassifierError::Corrupt("normalization has the wrong dimension".into()));
    }
    Ok(model)
}

pub fn save_model(path: impl AsRef<Path>, model: &OvrModel) -> Result<(), ClassifierError> {
    let path = path.as_ref();
    fs::write(path, model_to_json(model)).map_err(|e| ClassifierError::Io(format!("{}: {e}", path.display())))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<OvrModel, ClassifierError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| ClassifierError::Io(format!("{}: {e}", path.display())))?;
    model_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::SvmHyperParams;
    use crate::features::GaitFeatures;
    use crate::mapping::LabelSet;

    fn model() -> OvrModel {
        let f: Vec<GaitFeatures> = (0..9).map(|i| GaitFeatures::new(std::array::from_fn(|k| ((i * 7 + k) % 5) as f64))).collect();
        let y: Vec<usize> = (0..9).map(|i| i % 3).collect();
        OvrModel::train(&f, &y, LabelSet::Three, &SvmHyperParams::new(10.0, 0.1), 4).unwrap()
    }

    #[test]
    fn json_roundtrip() {
        let m = model();
        assert_eq!(model_from_json(&model_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn truncated_is_corrupt() {
        let text = model_to_json(&model());
        assert!(matches!(model_from_json(&text[..text.len() / 2]), Err(ClassifierError::Corrupt(_))));
    }

    #[test]
    fn version_gates() {
        let text = model_to_json(&model());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let mut layout = v.clone();
        layout["layout_version"] = 2.into();
        assert_eq!(
            model_from_json(&layout.to_string()).unwrap_err(),
            ClassifierError::LayoutMismatch { model: 2, features: FEATURE_LAYOUT_VERSION }
        );
        let mut version = v;
        version["version"] = 9.into();
        assert!(matches!(model_from_json(&version.to_string()), Err(ClassifierError::ModelVersion { found: 9, .. })));
    }
}
