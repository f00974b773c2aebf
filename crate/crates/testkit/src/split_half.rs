//! Split-half disagreement for a given partition of the raters.

use std::collections::{HashMap, HashSet};

/// One answer: (gait, participant, adjective index 0..4, value).
pub type Answer<'a> = (&'a str, &'a str, usize, u8);

/// Mean over gaits of |mean(first half) - mean(second half)|, as a
/// percentage of 4 Likert points, per adjective. Gaits missing a half are skipped.
pub fn split_half_errors(answers: &[Answer], first_half: &HashSet<&str>) -> [Option<f64>; 4] {
    let mut out = [None; 4];
    for (adj, slot) in out.iter_mut().enumerate() {
        let mut halves: HashMap<&str, [Vec<f64>; 2]> = HashMap::new();
        for &(g, p, a, v) in answers {
            if a == adj {
                let h = usize::from(!first_half.contains(p));
                halves.entry(g).or_default()[h].push(v as f64);
            }
        }
        let diffs: Vec<f64> = halves
            .values()
            .filter(|h| !h[0].is_empty() && !h[1].is_empty())
            .map(|h| {
                let m = |v: &Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
                (m(&h[0]) - m(&h[1])).abs()
            })
            .collect();
        if !diffs.is_empty() {
            *slot = Some(diffs.iter().sum::<f64>() / diffs.len() as f64 / 4.0 * 100.0);
        }
    }
    out
}
