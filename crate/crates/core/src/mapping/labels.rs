use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::MappingError;

/// Five dominance levels, ordered from most submissive to most dominant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DominanceLabel {
    HS = 0,
    S,
    N,
    D,
    HD,
}

impl DominanceLabel {
    pub const ALL: [DominanceLabel; 5] =
        [DominanceLabel::HS, DominanceLabel::S, DominanceLabel::N, DominanceLabel::D, DominanceLabel::HD];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            DominanceLabel::HS => "HS",
            DominanceLabel::S => "S",
            DominanceLabel::N => "N",
            DominanceLabel::D => "D",
            DominanceLabel::HD => "HD",
        }
    }

    pub fn collapse(self) -> Level3 {
        match self {
            DominanceLabel::HS | DominanceLabel::S => Level3::S,
            DominanceLabel::N => Level3::N,
            DominanceLabel::D | DominanceLabel::HD => Level3::D,
        }
    }
}

impl fmt::Display for DominanceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DominanceLabel {
    type Err = MappingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|l| l.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| MappingError::UnknownLabel(s.to_string()))
    }
}

/// Three-level labels: the extremes merged into their neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level3 {
    S = 0,
    N,
    D,
}

impl Level3 {
    pub const ALL: [Level3; 3] = [Level3::S, Level3::N, Level3::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Level3::S => "S",
            Level3::N => "N",
            Level3::D => "D",
        }
    }
}

impl fmt::Display for Level3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Level3 {
    type Err = MappingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let t = t.strip_suffix('3').unwrap_or(t);
        Self::ALL
            .iter()
            .copied()
            .find(|l| l.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| MappingError::UnknownLabel(s.to_string()))
    }
}

/// Which label granularity a classifier is trained on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelSet {
    Three,
    Five,
}

impl LabelSet {
    pub fn class_count(self) -> usize {
        match self {
            LabelSet::Three => 3,
            LabelSet::Five => 5,
        }
    }

    pub fn class_names(self) -> Vec<&'static str> {
        match self {
            LabelSet::Three => Level3::ALL.iter().map(|l| l.name()).collect(),
            LabelSet::Five => DominanceLabel::ALL.iter().map(|l| l.name()).collect(),
        }
    }

    /// Class index of a five-level label under this granularity.
    pub fn class_of(self, label: DominanceLabel) -> usize {
        match self {
            LabelSet::Three => label.collapse().index(),
            LabelSet::Five => label.index(),
        }
    }

    pub fn class_name(self, class: usize) -> Option<&'static str> {
        self.class_names().get(class).copied()
    }
}

impl FromStr for LabelSet {
    type Err = MappingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "3" | "three" => Ok(LabelSet::Three),
            "5" | "five" => Ok(LabelSet::Five),
            other => Err(MappingError::UnknownLabel(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaitLabel {
    pub gait_id: String,
    pub raw: f64,
    pub normalized: f64,
    pub label5: DominanceLabel,
    pub label3: Level3,
}

pub const LABELS_HEADER: [&str; 5] = ["gait_id", "raw_score", "normalized_score", "label5", "label3"];

pub fn write_labels_csv<W: Write>(writer: W, labels: &[GaitLabel]) -> Result<(), MappingError> {
    let err = |e: csv::Error| MappingError::Csv(e.to_string());
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(LABELS_HEADER).map_err(err)?;
    for l in labels {
        w.write_record([
            l.gait_id.as_str(),
            &l.raw.to_string(),
            &l.normalized.to_string(),
            l.label5.name(),
            l.label3.name(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| MappingError::Csv(e.to_string()))
}

pub fn read_labels_csv<R: Read>(reader: R) -> Result<Vec<GaitLabel>, MappingError> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers().map_err(|e| MappingError::Csv(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != LABELS_HEADER {
        return Err(MappingError::Csv(format!("expected header {}", LABELS_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| MappingError::Csv(e.to_string()))?;
        let row = i + 2;
        let num = |k: usize| -> Result<f64, MappingError> {
            rec[k].trim().parse().map_err(|_| MappingError::Csv(format!("row {row}: `{}` is not a number", &rec[k])))
        };
        let label5: DominanceLabel = rec[3].parse()?;
        let label3: Level3 = rec[4].parse()?;
        if label5.collapse() != label3 {
            return Err(MappingError::Csv(format!("row {row}: label3 {label3} does not match label5 {label5}")));
        }
        out.push(GaitLabel { gait_id: rec[0].to_string(), raw: num(1)?, normalized: num(2)?, label5, label3 });
    }
    Ok(out)
}
