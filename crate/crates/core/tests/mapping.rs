mod common;

use std::collections::HashSet;

use gaitdom::mapping::{
    adjective_correlations, aggregate_responses, dominance_score, label_corpus, pca_dominance_axis, score_to_label,
    split_half_error, Adjective, AdjectiveMeans, DominanceLabel, Level3, ScoringAxis, PUBLISHED_AXIS,
};
use gaitdom::synth::{simulate_ratings, RaterPanel};
use gaitdom_testkit::{close, pca::first_component, split_half::split_half_errors};
use rand::Rng;
use rand_distr::{Distribution, Normal};

fn as_means(rows: &[[f64; 4]]) -> Vec<AdjectiveMeans> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| AdjectiveMeans { gait_id: format!("g{i:03}"), means: *r, responses: 1 })
        .collect()
}

#[test]
fn boundary_vector() {
    use DominanceLabel::*;
    let scores = [-1.0, -0.9, -0.8, -0.5, 0.0, 0.5, 0.65, 0.8, 0.9, 1.0];
    let expected = [HS, HS, S, N, N, N, D, D, HD, HD];
    for (r, want) in scores.iter().zip(expected) {
        assert_eq!(score_to_label(*r).unwrap(), want, "r = {r}");
    }
    assert!(score_to_label(1.0 + 1e-12).is_err());
    assert!(score_to_label(f64::NAN).is_err());
}

#[test]
fn coefficients_are_exact() {
    assert_eq!(PUBLISHED_AXIS, [-0.44, -0.57, 0.43, 0.54]);
    assert_eq!(ScoringAxis::default().coefficients, PUBLISHED_AXIS);
    assert_eq!(dominance_score(&[-1.0, -1.0, 1.0, 1.0], &ScoringAxis::default()), 0.44 + 0.57 + 0.43 + 0.54);
}

#[test]
fn pca_matches_eigen_oracle() {
    let mut r = common::rng(11);
    for _ in 0..100 {
        let n = r.random_range(6..60);
        let scales: [f64; 4] = std::array::from_fn(|_| r.random_range(0.2..2.0));
        let rows: Vec<[f64; 4]> = (0..n)
            .map(|_| std::array::from_fn(|k| 3.0 + scales[k] * r.random_range(-1.0..1.0)))
            .collect();
        let ours = pca_dominance_axis(&as_means(&rows)).unwrap();
        let (axis, explained) = first_component(&rows);
        for k in 0..4 {
            assert!(close(ours.coefficients[k], axis[k], 1e-8), "{:?} vs {:?}", ours.coefficients, axis);
        }
        assert!(close(ours.explained_variance, explained, 1e-8));
    }
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

#[test]
fn planted_factor_is_recovered() {
    let mut r = common::rng(5);
    let noise = Normal::new(0.0, 0.05).unwrap();
    let rows: Vec<[f64; 4]> = (0..200)
        .map(|_| {
            let f: f64 = r.random_range(-1.5..1.5);
            std::array::from_fn(|k| 3.0 + PUBLISHED_AXIS[k] * f + noise.sample(&mut r))
        })
        .collect();
    let axis = pca_dominance_axis(&as_means(&rows)).unwrap();
    assert!(pearson(&axis.coefficients, &PUBLISHED_AXIS) > 0.99, "{:?}", axis.coefficients);
    assert!(axis.explained_variance > 0.9);
}

#[test]
fn split_half_matches_oracle() {
    let gaits: Vec<(String, f64)> = (0..24).map(|i| (format!("g{i:02}"), -1.0 + i as f64 / 12.0)).collect();
    for seed in 0..5 {
        let records = simulate_ratings(&gaits, &RaterPanel { raters: 15, noise: 0.5, leniency: 0.0, seed });
        let report = split_half_error(&records, seed + 100);
        let first: HashSet<&str> = report.first_half.iter().map(String::as_str).collect();
        assert_eq!(first.len(), 8);
        let answers: Vec<_> = records
            .iter()
            .map(|r| (r.gait_id.as_str(), r.participant_id.as_str(), r.adjective.index(), r.value.get()))
            .collect();
        let oracle = split_half_errors(&answers, &first);
        for (a, b) in report.per_adjective.iter().zip(&oracle) {
            let (a, b) = (a.unwrap(), b.unwrap());
            assert!(close(a, b, 1e-12), "{a} vs {b}");
        }
    }
}

#[test]
fn correlations_follow_the_questionnaire_polarity() {
    let gaits: Vec<(String, f64)> = (0..40).map(|i| (format!("g{i:02}"), -1.0 + i as f64 / 20.0)).collect();
    let records = simulate_ratings(&gaits, &RaterPanel::default());
    let agg = aggregate_responses(&records);
    let c = adjective_correlations(&agg.complete).unwrap();
    use Adjective::*;
    assert!(c.get(Submissive, Withdrawn).unwrap() > 0.0);
    assert!(c.get(Dominant, Confident).unwrap() > 0.0);
    for a in [Submissive, Withdrawn] {
        for b in [Dominant, Confident] {
            assert!(c.get(a, b).unwrap() < 0.0);
        }
    }
}

#[test]
fn labels_are_monotone_in_the_score() {
    let mut r = common::rng(3);
    let rows: Vec<[f64; 4]> = (0..300).map(|_| std::array::from_fn(|_| r.random_range(1.0..5.0))).collect();
    let (mapping, labels) = label_corpus(&as_means(&rows), &ScoringAxis::default()).unwrap();
    let mut sorted = labels.clone();
    sorted.sort_by(|a, b| a.raw.total_cmp(&b.raw));
    for w in sorted.windows(2) {
        assert!(w[0].normalized <= w[1].normalized);
        assert!(w[0].label5 <= w[1].label5);
        assert!(w[0].label3 <= w[1].label3);
    }
    assert_eq!(sorted.first().unwrap().normalized, -1.0);
    assert_eq!(sorted.last().unwrap().normalized, 1.0);
    for l in &labels {
        assert_eq!(l.label3, l.label5.collapse());
        assert_eq!(mapping.normalize(l.raw).unwrap(), l.normalized);
    }
    assert_eq!(DominanceLabel::HS.collapse(), Level3::S);
    assert_eq!(DominanceLabel::HD.collapse(), Level3::D);
}

#[test]
fn raw_score_is_linear() {
    let mut r = common::rng(9);
    let axis = ScoringAxis::default();
    for _ in 0..1000 {
        let a: [f64; 4] = std::array::from_fn(|_| r.random_range(1.0..5.0));
        let b: [f64; 4] = std::array::from_fn(|_| r.random_range(1.0..5.0));
        let (s, t) = (r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
        let combo: [f64; 4] = std::array::from_fn(|k| s * a[k] + t * b[k]);
        let lhs = dominance_score(&combo, &axis);
        let rhs = s * dominance_score(&a, &axis) + t * dominance_score(&b, &axis);
        assert!(close(lhs, rhs, 1e-12));
    }
}
