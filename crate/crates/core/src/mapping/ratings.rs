use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::MappingError;

/// Rated adjectives, in the order used by every 4-vector in this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Adjective {
    Submissive = 0,
    Withdrawn,
    Dominant,
    Confident,
}

impl Adjective {
    pub const ALL: [Adjective; 4] = [Adjective::Submissive, Adjective::Withdrawn, Adjective::Dominant, Adjective::Confident];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Adjective::Submissive => "submissive",
            Adjective::Withdrawn => "withdrawn",
            Adjective::Dominant => "dominant",
            Adjective::Confident => "confident",
        }
    }
}

impl fmt::Display for Adjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Adjective {
    type Err = MappingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Adjective::ALL
            .iter()
            .copied()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| MappingError::UnknownAdjective(s.to_string()))
    }
}

/// Five-point agreement: 1 strongly disagree .. 5 strongly agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "u8")]
pub struct Likert(u8);

impl Likert {
    pub fn new(value: i64) -> Result<Self, MappingError> {
        if (1..=5).contains(&value) {
            Ok(Likert(value as u8))
        } else {
            Err(MappingError::LikertRange(value))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl From<Likert> for u8 {
    fn from(l: Likert) -> u8 {
        l.0
    }
}

impl<'de> Deserialize<'de> for Likert {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Likert::new(v).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingRecord {
    pub gait_id: String,
    pub participant_id: String,
    pub adjective: Adjective,
    pub value: Likert,
    /// ISO-8601 time of the response.
    pub timestamp: String,
}

/// Mean response per adjective for one gait.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjectiveMeans {
    pub gait_id: String,
    /// Indexed by [`Adjective::index`].
    pub means: [f64; 4],
    /// Number of participants who rated the gait.
    pub responses: usize,
}

impl AdjectiveMeans {
    pub fn get(&self, adjective: Adjective) -> f64 {
        self.means[adjective.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncompleteGait {
    pub gait_id: String,
    pub missing: Vec<Adjective>,
}

/// Per-gait means for gaits rated on all four adjectives, plus the gaits that were not.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Aggregation {
    pub complete: Vec<AdjectiveMeans>,
    pub incomplete: Vec<IncompleteGait>,
}

/// Arithmetic mean per (gait, adjective), gaits in id order.
pub fn aggregate_responses(records: &[RatingRecord]) -> Aggregation {
    #[derive(Default)]
    struct Acc {
        sums: [f64; 4],
        counts: [usize; 4],
        participants: BTreeSet<String>,
    }
    let mut by_gait: BTreeMap<&str, Acc> = BTreeMap::new();
    for r in records {
        let acc = by_gait.entry(&r.gait_id).or_default();
        let k = r.adjective.index();
        acc.sums[k] += f64::from(r.value.get());
        acc.counts[k] += 1;
        acc.participants.insert(r.participant_id.clone());
    }
    let mut out = Aggregation::default();
    for (gait_id, acc) in by_gait {
        let missing: Vec<Adjective> = Adjective::ALL.iter().copied().filter(|a| acc.counts[a.index()] == 0).collect();
        if missing.is_empty() {
            out.complete.push(AdjectiveMeans {
                gait_id: gait_id.to_string(),
                means: std::array::from_fn(|k| acc.sums[k] / acc.counts[k] as f64),
                responses: acc.participants.len(),
            });
        } else {
            out.incomplete.push(IncompleteGait { gait_id: gait_id.to_string(), missing });
        }
    }
    out
}

pub const RESPONSES_HEADER: [&str; 5] = ["gait_id", "participant_id", "adjective", "value", "timestamp"];

pub fn write_responses_csv<W: Write>(writer: W, records: &[RatingRecord]) -> Result<(), MappingError> {
    let err = |e: csv::Error| MappingError::Csv(e.to_string());
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(RESPONSES_HEADER).map_err(err)?;
    for r in records {
        w.write_record([
            r.gait_id.as_str(),
            r.participant_id.as_str(),
            r.adjective.name(),
            &r.value.get().to_string(),
            r.timestamp.as_str(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| MappingError::Csv(e.to_string()))
}

pub fn read_responses_csv<R: Read>(reader: R) -> Result<Vec<RatingRecord>, MappingError> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers().map_err(|e| MappingError::Csv(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != RESPONSES_HEADER {
        return Err(MappingError::Csv(format!("expected header {}", RESPONSES_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| MappingError::Csv(e.to_string()))?;
        let row = i + 2;
        let value: i64 = rec[3].trim().parse().map_err(|_| MappingError::Csv(format!("row {row}: value `{}` is not an integer", &rec[3])))?;
        out.push(RatingRecord {
            gait_id: rec[0].to_string(),
            participant_id: rec[1].to_string(),
            adjective: rec[2].parse()?,
            value: Likert::new(value)?,
            timestamp: rec[4].to_string(),
        });
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) fn record(gait: &str, participant: &str, adjective: Adjective, value: i64) -> RatingRecord {
    RatingRecord {
        gait_id: gait.into(),
        participant_id: participant.into(),
        adjective,
        value: Likert::new(value).unwrap(),
        timestamp: "2024-01-01T00:00:00Z".into(),
    }
}
