//! Reference implementations used as test oracles.
//!
//! Everything here works on plain arrays and is written independently of the
//! main crate, favouring the most direct formula over speed or elegance.

pub mod features;
pub mod pca;
pub mod split_half;
pub mod svm;

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
