#![allow(dead_code)]

use gaitdom::mocap::{Gait, Vec3};
use gaitdom::synth::{synthesize_gait, WalkerParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A walker with random traits, length and frame rate, plus independent
/// jitter on every joint coordinate.
pub fn random_gait(seed: u64) -> Gait {
    let mut r = rng(seed);
    let z = r.random_range(-1.0..=1.0);
    let mut params = WalkerParams::random_individual(z, &mut r);
    params.frames = r.random_range(90..200);
    params.fps = [30.0, 60.0, 120.0][r.random_range(0..3)];
    let mut g = synthesize_gait(&format!("rand{seed}"), &params);
    let jitter = Normal::new(0.0, 0.002).unwrap();
    for pose in g.frames.iter_mut() {
        for v in pose.positions.iter_mut() {
            *v += Vec3::new(jitter.sample(&mut r), jitter.sample(&mut r), jitter.sample(&mut r));
        }
    }
    g
}

pub fn to_arrays(g: &Gait) -> Vec<[[f64; 3]; 16]> {
    g.frames.iter().map(|p| p.to_arrays()).collect()
}
