use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::features::NormalizationParams;
use crate::mapping::LabelSet;

use super::ovr::{train_ovr, OvrClassifier};
use super::smo::SvmHyperParams;
use super::ClassifierError;

/// Anything that can be fitted on a training fold and asked for class indices.
pub trait FoldLearner: Sync {
    type Model: Send;

    fn fit(&self, x: &[&[f64]], y: &[usize], classes: usize, seed: u64) -> Result<Self::Model, ClassifierError>;

    fn predict(&self, model: &Self::Model, x: &[f64]) -> usize;
}

/// RBF one-vs-rest SVM with normalization fitted on each training fold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmLearner {
    pub params: SvmHyperParams,
    pub label_set: LabelSet,
}

pub enum SvmFoldModel {
    Svm { normalization: NormalizationParams, classifier: OvrClassifier },
    /// Training fold held a single class.
    Constant(usize),
}

impl FoldLearner for SvmLearner {
    type Model = SvmFoldModel;

    fn fit(&self, x: &[&[f64]], y: &[usize], _classes: usize, seed: u64) -> Result<SvmFoldModel, ClassifierError> {
        if let Some(&first) = y.first() {
            if y.iter().all(|&l| l == first) {
                return Ok(SvmFoldModel::Constant(first));
            }
        }
        let normalization = NormalizationParams::fit(x)?;
        let xn = x.iter().map(|r| normalization.apply(r)).collect::<Result<Vec<_>, _>>()?;
        let t = train_ovr(&xn, y, self.label_set, &self.params, seed)?;
        Ok(SvmFoldModel::Svm { normalization, classifier: t.classifier })
    }

    fn predict(&self, model: &SvmFoldModel, x: &[f64]) -> usize {
        match model {
            SvmFoldModel::Constant(c) => *c,
            SvmFoldModel::Svm { normalization, classifier } => {
                classifier.predict(&normalization.apply(x).expect("fold dimension checked at fit"))
            }
        }
    }
}

/// Counts indexed `[truth][predicted]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub counts: Vec<Vec<u64>>,
}

impl Confusion {
    pub fn new(classes: usize) -> Self {
        Confusion { counts: vec![vec![0; classes]; classes] }
    }

    pub fn classes(&self) -> usize {
        self.counts.len()
    }

    pub fn add(&mut self, truth: usize, predicted: usize) {
        self.counts[truth][predicted] += 1;
    }

    pub fn merge(&mut self, other: &Confusion) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        let hits: u64 = (0..self.classes()).map(|i| self.counts[i][i]).sum();
        hits as f64 / total as f64
    }

    /// Five-level counts mapped onto three levels.
    pub fn collapse_to_three(&self) -> Confusion {
        assert_eq!(self.classes(), 5, "collapse needs a five-level confusion");
        let map = |i: usize| LabelSet::Three.class_of(crate::mapping::DominanceLabel::from_index(i).unwrap());
        let mut out = Confusion::new(3);
        for (t, row) in self.counts.iter().enumerate() {
            for (p, &n) in row.iter().enumerate() {
                out.counts[map(t)][map(p)] += n;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub k: usize,
    pub iterations: usize,
    pub seed: u64,
    pub stratified: bool,
    /// Mean fold accuracy of each iteration.
    pub per_iteration: Vec<f64>,
    pub mean_accuracy: f64,
    /// Test predictions summed over all folds and iterations.
    pub confusion: Confusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CvConfig {
    pub k: usize,
    pub iterations: usize,
    pub seed: u64,
}

/// Assigns each sample to a fold. Stratified when every present class has at
/// least `k` members.
pub fn assign_folds(labels: &[usize], classes: usize, k: usize, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for (i, &l) in labels.iter().enumerate() {
        by_class[l].push(i);
    }
    let stratified = by_class.iter().all(|m| m.is_empty() || m.len() >= k);
    let mut folds = vec![0; labels.len()];
    if stratified {
        let mut next = 0;
        for members in by_class.iter_mut() {
            members.shuffle(rng);
            for &i in members.iter() {
                folds[i] = next % k;
                next += 1;
            }
        }
    } else {
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.shuffle(rng);
        for (pos, &i) in order.iter().enumerate() {
            folds[i] = pos % k;
        }
    }
    (folds, stratified)
}

pub(crate) fn iteration_rng(seed: u64, iteration: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration as u64);
    rng
}

/// Repeated k-fold cross-validation. Iterations run in parallel and are merged
/// in index order, so the report depends only on the inputs and the seed.
pub fn cross_validate<L: FoldLearner, R: AsRef<[f64]> + Sync>(
    learner: &L,
    x: &[R],
    labels: &[usize],
    classes: usize,
    config: CvConfig,
) -> Result<CvReport, ClassifierError> {
    let n = x.len();
    if n != labels.len() {
        return Err(ClassifierError::DimensionMismatch { expected: n, found: labels.len() });
    }
    if config.k < 2 || config.k > n {
        return Err(ClassifierError::FoldCount { k: config.k, samples: n });
    }
    if config.iterations == 0 {
        return Err(ClassifierError::InvalidParams("iterations must be positive".into()));
    }
    if let Some(&bad) = labels.iter().find(|&&l| l >= classes) {
        return Err(ClassifierError::InvalidParams(format!("class index {bad} outside {classes} classes")));
    }
    let rows: Vec<&[f64]> = x.iter().map(|r| r.as_ref()).collect();

    let results: Vec<Result<(f64, Confusion, bool), ClassifierError>> = (0..config.iterations)
        .into_par_iter()
        .map(|it| {
            let mut rng = iteration_rng(config.seed, it);
            let (folds, stratified) = assign_folds(labels, classes, config.k, &mut rng);
            let mut confusion = Confusion::new(classes);
            let mut acc_sum = 0.0;
            for fold in 0..config.k {
                let (mut tx, mut ty, mut test) = (Vec::new(), Vec::new(), Vec::new());
                for i in 0..n {
                    if folds[i] == fold {
                        test.push(i);
                    } else {
                        tx.push(rows[i]);
                        ty.push(labels[i]);
                    }
                }
                let fold_seed = config.seed ^ ((it as u64) << 20 | fold as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
                let model = learner.fit(&tx, &ty, classes, fold_seed)?;
                let mut hits = 0;
                for &i in &test {
                    let p = learner.predict(&model, rows[i]);
                    confusion.add(labels[i], p);
                    hits += (p == labels[i]) as usize;
                }
                acc_sum += hits as f64 / test.len() as f64;
            }
            Ok((acc_sum / config.k as f64, confusion, stratified))
        })
        .collect();

    let mut per_iteration = Vec::with_capacity(config.iterations);
    let mut confusion = Confusion::new(classes);
    let mut stratified = true;
    for r in results {
        let (acc, c, s) = r?;
        per_iteration.push(acc);
        confusion.merge(&c);
        stratified &= s;
    }
    if !stratified {
        log::warn!("some class has fewer than {} members; folds are not stratified", config.k);
    }
    let mean_accuracy = per_iteration.iter().sum::<f64>() / per_iteration.len() as f64;
    Ok(CvReport { k: config.k, iterations: config.iterations, seed: config.seed, stratified, per_iteration, mean_accuracy, confusion })
}
