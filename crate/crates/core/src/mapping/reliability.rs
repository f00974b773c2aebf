use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ratings::{Adjective, RatingRecord};

/// Agreement between two random halves of the raters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitHalfReport {
    pub seed: u64,
    /// Participants in each half; an odd participant goes to the first.
    pub half_sizes: (usize, usize),
    /// Members of the first half, sorted.
    pub first_half: Vec<String>,
    /// Mean absolute difference of half means over gaits, as a percentage of
    /// the 4-point Likert span. `None` when no gait had raters in both halves.
    pub per_adjective: [Option<f64>; 4],
    /// Mean of the available per-adjective errors.
    pub average: Option<f64>,
    /// (gait, adjective) pairs left out because one half had no ratings.
    pub excluded: Vec<(String, Adjective)>,
}

/// Likert span between "strongly disagree" and "strongly agree".
const LIKERT_SPAN: f64 = 4.0;

pub fn split_half_error(records: &[RatingRecord], seed: u64) -> SplitHalfReport {
    let mut participants: Vec<&str> =
        records.iter().map(|r| r.participant_id.as_str()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    participants.shuffle(&mut rng);
    let first_size = participants.len().div_ceil(2);
    let first_half: BTreeSet<&str> = participants[..first_size].iter().copied().collect();

    // (gait, adjective) -> [sum, count] per half
    let mut cells: BTreeMap<(&str, Adjective), [(f64, usize); 2]> = BTreeMap::new();
    for r in records {
        let half = if first_half.contains(r.participant_id.as_str()) { 0 } else { 1 };
        let cell = cells.entry((r.gait_id.as_str(), r.adjective)).or_default();
        cell[half].0 += f64::from(r.value.get());
        cell[half].1 += 1;
    }

    let mut totals = [(0.0, 0usize); 4];
    let mut excluded = Vec::new();
    for ((gait, adjective), halves) in &cells {
        let [(s1, n1), (s2, n2)] = *halves;
        if n1 == 0 || n2 == 0 {
            log::warn!("gait `{gait}` has {adjective} ratings in only one half; excluded");
            excluded.push((gait.to_string(), *adjective));
            continue;
        }
        let diff = (s1 / n1 as f64 - s2 / n2 as f64).abs();
        totals[adjective.index()].0 += diff;
        totals[adjective.index()].1 += 1;
    }
    let per_adjective = totals.map(|(sum, n)| (n > 0).then(|| 100.0 * sum / n as f64 / LIKERT_SPAN));
    let available: Vec<f64> = per_adjective.iter().flatten().copied().collect();
    let average = (!available.is_empty()).then(|| available.iter().sum::<f64>() / available.len() as f64);

    SplitHalfReport {
        seed,
        half_sizes: (first_size, participants.len() - first_size),
        first_half: first_half.iter().map(|p| p.to_string()).collect(),
        per_adjective,
        average,
        excluded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::ratings::record;

    #[test]
    fn identical_halves_have_zero_error() {
        let mut recs = Vec::new();
        for p in ["a", "b", "c", "d"] {
            for (g, v) in [("g1", 2), ("g2", 4), ("g3", 5)] {
                for adj in Adjective::ALL {
                    recs.push(record(g, p, adj, v));
                }
            }
        }
        let rep = split_half_error(&recs, 3);
        assert_eq!(rep.half_sizes, (2, 2));
        assert_eq!(rep.per_adjective, [Some(0.0); 4]);
        assert_eq!(rep.average, Some(0.0));
    }

    #[test]
    fn one_point_apart_is_a_quarter_of_the_span() {
        // Two participants, so the halves are {a} and {b} in some order.
        let mut recs = Vec::new();
        for g in ["g1", "g2", "g3"] {
            for adj in Adjective::ALL {
                recs.push(record(g, "a", adj, 2));
                recs.push(record(g, "b", adj, 3));
            }
        }
        let rep = split_half_error(&recs, 11);
        assert_eq!(rep.per_adjective, [Some(25.0); 4]);
    }

    #[test]
    fn one_sided_gait_excluded() {
        let recs = vec![record("g1", "a", Adjective::Dominant, 3), record("g1", "b", Adjective::Dominant, 3), record("g2", "a", Adjective::Dominant, 1)];
        let rep = split_half_error(&recs, 0);
        assert_eq!(rep.excluded, vec![("g2".to_string(), Adjective::Dominant)]);
        assert_eq!(rep.per_adjective[Adjective::Dominant.index()], Some(0.0));
        assert_eq!(rep.per_adjective[Adjective::Submissive.index()], None);
    }

    #[test]
    fn odd_count_favours_first_half() {
        let recs: Vec<_> = ["a", "b", "c"].iter().map(|p| record("g", p, Adjective::Dominant, 3)).collect();
        assert_eq!(split_half_error(&recs, 5).half_sizes, (2, 1));
    }

    #[test]
    fn seeded() {
        let recs: Vec<_> = (0..10).map(|p| record("g", &format!("p{p}"), Adjective::Dominant, 1 + p % 5)).collect();
        assert_eq!(split_half_error(&recs, 42), split_half_error(&recs, 42));
    }
}
