use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::kernel::{rbf_kernel, KernelMatrix};
use super::ClassifierError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmHyperParams {
    pub c: f64,
    pub gamma: f64,
    /// KKT tolerance.
    pub tolerance: f64,
    /// Limit on outer SMO sweeps.
    pub max_passes: usize,
}

impl Default for SvmHyperParams {
    fn default() -> Self {
        SvmHyperParams { c: 1.0, gamma: 1.0 / 29.0, tolerance: 1e-3, max_passes: 10_000 }
    }
}

impl SvmHyperParams {
    pub fn new(c: f64, gamma: f64) -> Self {
        SvmHyperParams { c, gamma, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), ClassifierError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(self.c) && ok(self.gamma) && ok(self.tolerance) && self.max_passes > 0 {
            Ok(())
        } else {
            Err(ClassifierError::InvalidParams(format!(
                "C={}, gamma={}, tolerance={}, max_passes={} must all be positive",
                self.c, self.gamma, self.tolerance, self.max_passes
            )))
        }
    }
}

/// `f(x) = sum_i coef_i K(sv_i, x) + bias`, with `coef_i = alpha_i y_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarySvmModel {
    pub support_vectors: Vec<Vec<f64>>,
    pub coefficients: Vec<f64>,
    pub bias: f64,
    pub gamma: f64,
}

impl BinarySvmModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.coefficients)
            .map(|(sv, c)| c * rbf_kernel(sv, x, self.gamma))
            .sum::<f64>()
            + self.bias
    }

    pub fn dim(&self) -> usize {
        self.support_vectors.first().map_or(0, Vec::len)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub model: BinarySvmModel,
    /// Dual variables for every training point, in input order.
    pub alphas: Vec<f64>,
    pub converged: bool,
    pub kkt_violations: usize,
    pub passes: usize,
}

/// Trains a soft-margin RBF SVM with Platt's SMO. Labels are `+1.0` / `-1.0`.
pub fn train_binary_svm<R: AsRef<[f64]>>(
    x: &[R],
    y: &[f64],
    params: &SvmHyperParams,
    seed: u64,
) -> Result<TrainOutcome, ClassifierError> {
    params.validate()?;
    check_inputs(x, y)?;
    let kernel = KernelMatrix::rbf(x, params.gamma);
    train_with_kernel(x, y, &kernel, params, seed)
}

fn check_inputs<R: AsRef<[f64]>>(x: &[R], y: &[f64]) -> Result<(), ClassifierError> {
    if x.is_empty() {
        return Err(ClassifierError::Empty);
    }
    if x.len() != y.len() {
        return Err(ClassifierError::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    let dim = x[0].as_ref().len();
    if let Some(bad) = x.iter().find(|r| r.as_ref().len() != dim) {
        return Err(ClassifierError::DimensionMismatch { expected: dim, found: bad.as_ref().len() });
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(ClassifierError::InvalidParams("binary labels must be +1 or -1".into()));
    }
    if !(y.contains(&1.0) && y.contains(&-1.0)) {
        return Err(ClassifierError::SingleClass);
    }
    Ok(())
}

/// Training on a precomputed Gram matrix of `x`.
pub(crate) fn train_with_kernel<R: AsRef<[f64]>>(
    x: &[R],
    y: &[f64],
    kernel: &KernelMatrix,
    params: &SvmHyperParams,
    seed: u64,
) -> Result<TrainOutcome, ClassifierError> {
    params.validate()?;
    check_inputs(x, y)?;
    let mut smo = Smo::new(kernel, y, params.c, params.tolerance, seed);
    let passes = smo.run(params.max_passes);

    // Platt's bias update is only exact at free vectors.
    let mut bias = smo.bias;
    let mut violations = kkt_violations(kernel, y, &smo.alphas, bias, params.c, params.tolerance);
    if let Some(refit) = refit_bias(kernel, y, &smo.alphas, params.c) {
        let v = kkt_violations(kernel, y, &smo.alphas, refit, params.c, params.tolerance);
        if v < violations {
            bias = refit;
            violations = v;
        }
    }
    if violations > 0 {
        log::warn!("SMO stopped after {passes} passes with {violations} KKT violations");
    }

    let mut support_vectors = Vec::new();
    let mut coefficients = Vec::new();
    for (i, &a) in smo.alphas.iter().enumerate() {
        if a > 0.0 {
            support_vectors.push(x[i].as_ref().to_vec());
            coefficients.push(a * y[i]);
        }
    }
    Ok(TrainOutcome {
        model: BinarySvmModel { support_vectors, coefficients, bias, gamma: params.gamma },
        alphas: smo.alphas,
        converged: violations == 0,
        kkt_violations: violations,
        passes,
    })
}

/// Bias re-estimated from the final alphas: the mean over free vectors, or,
/// when every vector sits at a bound, the middle of the feasible interval.
fn refit_bias(kernel: &KernelMatrix, y: &[f64], alphas: &[f64], c: f64) -> Option<f64> {
    let n = y.len();
    let target = |i: usize| y[i] - (0..n).map(|j| alphas[j] * y[j] * kernel.get(j, i)).sum::<f64>();
    let free: Vec<usize> = (0..n).filter(|&i| alphas[i] > 0.0 && alphas[i] < c).collect();
    if !free.is_empty() {
        return Some(free.iter().map(|&i| target(i)).sum::<f64>() / free.len() as f64);
    }
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..n {
        let t = target(i);
        if (y[i] > 0.0) == (alphas[i] <= 0.0) {
            lo = lo.max(t);
        } else {
            hi = hi.min(t);
        }
    }
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => Some(0.5 * (lo + hi)),
        (true, false) => Some(lo),
        (false, true) => Some(hi),
        (false, false) => None,
    }
}

/// Number of training points violating the soft-margin KKT conditions by more
/// than `tol` on the margin `y f(x)`.
pub fn kkt_violations(kernel: &KernelMatrix, y: &[f64], alphas: &[f64], bias: f64, c: f64, tol: f64) -> usize {
    (0..y.len())
        .filter(|&i| {
            let f: f64 = (0..y.len()).map(|j| alphas[j] * y[j] * kernel.get(j, i)).sum::<f64>() + bias;
            let m = y[i] * f;
            let a = alphas[i];
            if a <= 0.0 {
                m < 1.0 - tol
            } else if a >= c {
                m > 1.0 + tol
            } else {
                (m - 1.0).abs() > tol
            }
        })
        .count()
}

struct Smo<'a> {
    k: &'a KernelMatrix,
    y: &'a [f64],
    c: f64,
    tol: f64,
    alphas: Vec<f64>,
    bias: f64,
    /// `f(x_i) - y_i`, kept current for every point.
    errors: Vec<f64>,
    rng: ChaCha8Rng,
}

const STEP_EPS: f64 = 1e-12;

impl<'a> Smo<'a> {
    fn new(k: &'a KernelMatrix, y: &'a [f64], c: f64, tol: f64, seed: u64) -> Self {
        Smo {
            k,
            y,
            c,
            tol,
            alphas: vec![0.0; y.len()],
            bias: 0.0,
            errors: y.iter().map(|v| -v).collect(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn is_free(&self, i: usize) -> bool {
        self.alphas[i] > 0.0 && self.alphas[i] < self.c
    }

    fn run(&mut self, max_passes: usize) -> usize {
        let n = self.y.len();
        let mut examine_all = true;
        let mut passes = 0;
        loop {
            if passes >= max_passes {
                break;
            }
            passes += 1;
            let mut changed = 0;
            for i in 0..n {
                if examine_all || self.is_free(i) {
                    changed += self.examine(i) as usize;
                }
            }
            if examine_all {
                if changed == 0 {
                    break;
                }
                examine_all = false;
            } else if changed == 0 {
                examine_all = true;
            }
        }
        passes
    }

    fn violates(&self, i: usize) -> bool {
        let r = self.errors[i] * self.y[i];
        (r < -self.tol && self.alphas[i] < self.c) || (r > self.tol && self.alphas[i] > 0.0)
    }

    fn examine(&mut self, i2: usize) -> bool {
        if !self.violates(i2) {
            return false;
        }
        let n = self.y.len();
        let e2 = self.errors[i2];
        let free: Vec<usize> = (0..n).filter(|&i| self.is_free(i)).collect();
        if free.len() > 1 {
            let i1 = *free
                .iter()
                .max_by(|&&a, &&b| (self.errors[a] - e2).abs().total_cmp(&(self.errors[b] - e2).abs()))
                .unwrap();
            if self.step(i1, i2) {
                return true;
            }
        }
        if !free.is_empty() {
            let start = self.rng.random_range(0..free.len());
            for k in 0..free.len() {
                if self.step(free[(start + k) % free.len()], i2) {
                    return true;
                }
            }
        }
        let start = self.rng.random_range(0..n);
        (0..n).any(|k| self.step((start + k) % n, i2))
    }

    fn step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (a1, a2) = (self.alphas[i1], self.alphas[i2]);
        let (e1, e2) = (self.errors[i1], self.errors[i2]);
        let s = y1 * y2;
        let c = self.c;
        let (lo, hi) = if s < 0.0 { ((a2 - a1).max(0.0), (c + a2 - a1).min(c)) } else { ((a1 + a2 - c).max(0.0), (a1 + a2).min(c)) };
        if hi - lo < STEP_EPS * c {
            return false;
        }
        let k11 = self.k.get(i1, i1);
        let k12 = self.k.get(i1, i2);
        let k22 = self.k.get(i2, i2);
        let eta = k11 + k22 - 2.0 * k12;
        let slope = y2 * (e1 - e2);
        let mut a2n = if eta > STEP_EPS {
            (a2 + slope / eta).clamp(lo, hi)
        } else if slope > 0.0 {
            hi
        } else if slope < 0.0 {
            lo
        } else {
            a2
        };
        if a2n < STEP_EPS * c {
            a2n = 0.0;
        } else if a2n > c * (1.0 - STEP_EPS) {
            a2n = c;
        }
        if (a2n - a2).abs() < STEP_EPS * (a2n + a2 + STEP_EPS) {
            return false;
        }
        let mut a1n = a1 + s * (a2 - a2n);
        if a1n < STEP_EPS * c {
            a1n = 0.0;
        } else if a1n > c * (1.0 - STEP_EPS) {
            a1n = c;
        }

        let d1 = y1 * (a1n - a1);
        let d2 = y2 * (a2n - a2);
        let b1 = self.bias - e1 - d1 * k11 - d2 * k12;
        let b2 = self.bias - e2 - d1 * k12 - d2 * k22;
        let bn = if a1n > 0.0 && a1n < c {
            b1
        } else if a2n > 0.0 && a2n < c {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        let db = bn - self.bias;
        let (r1, r2) = (self.k.row(i1), self.k.row(i2));
        for (k, e) in self.errors.iter_mut().enumerate() {
            *e += d1 * r1[k] + d2 * r2[k] + db;
        }
        self.alphas[i1] = a1n;
        self.alphas[i2] = a2n;
        self.bias = bn;
        true
    }
}
