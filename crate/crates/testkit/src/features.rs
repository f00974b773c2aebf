//! Brute-force 29-value gait descriptor.
//!
//! Joint order: Root, Spine, Neck, Head, LShoulder, LElbow, LHand, RShoulder,
//! RElbow, RHand, LHip, LKnee, LFoot, RHip, RKnee, RFoot.

pub type P = [f64; 3];
pub type Frame = [P; 16];

const ROOT: usize = 0;
const SPINE: usize = 1;
const NECK: usize = 2;
const HEAD: usize = 3;
const LSHOULDER: usize = 4;
const LHAND: usize = 6;
const RSHOULDER: usize = 7;
const RHAND: usize = 9;
const LHIP: usize = 10;
const LFOOT: usize = 12;
const RHIP: usize = 13;
const RFOOT: usize = 15;

fn sub(a: P, b: P) -> P {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: P, b: P) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn len(a: P) -> f64 {
    dot(a, a).sqrt()
}

fn scale(a: P, s: f64) -> P {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn add(a: P, b: P) -> P {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Half-angle form: 2 atan2(|û - v̂|, |û + v̂|).
fn angle(u: P, v: P) -> f64 {
    let (a, b) = (scale(u, 1.0 / len(u)), scale(v, 1.0 / len(v)));
    2.0 * len(sub(a, b)).atan2(len(add(a, b)))
}

/// Lagrange identity: |a x b|^2 = |a|^2 |b|^2 - (a.b)^2.
fn area(a: P, b: P, c: P) -> f64 {
    let (u, v) = (sub(b, a), sub(c, a));
    0.5 * (dot(u, u) * dot(v, v) - dot(u, v).powi(2)).max(0.0).sqrt()
}

/// Box volume measured along the walker's forward, up and sideways axes.
fn volume(f: &Frame) -> f64 {
    let hips = sub(f[LHIP], f[RHIP]);
    // (hips x Y) keeps only the horizontal part.
    let fwd = [-hips[2], 0.0, hips[0]];
    let axes: [P; 3] = if len(fwd) < 1e-12 {
        [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    } else {
        let fwd = scale(fwd, 1.0 / len(fwd));
        [[fwd[2], 0.0, -fwd[0]], [0.0, 1.0, 0.0], fwd]
    };
    axes.iter()
        .map(|&axis| {
            let proj: Vec<f64> = f.iter().map(|&p| dot(p, axis)).collect();
            let hi = proj.iter().cloned().fold(f64::MIN, f64::max);
            let lo = proj.iter().cloned().fold(f64::MAX, f64::min);
            hi - lo
        })
        .product()
}

fn posture(f: &Frame) -> [f64; 12] {
    [
        volume(f),
        angle(sub(f[LSHOULDER], f[NECK]), sub(f[RSHOULDER], f[NECK])),
        angle(sub(f[NECK], f[RSHOULDER]), sub(f[LSHOULDER], f[RSHOULDER])),
        angle(sub(f[NECK], f[LSHOULDER]), sub(f[RSHOULDER], f[LSHOULDER])),
        angle([0.0, 1.0, 0.0], sub(f[SPINE], f[NECK])),
        angle(sub(f[HEAD], f[NECK]), sub(f[SPINE], f[NECK])),
        len(sub(f[RHAND], f[ROOT])),
        len(sub(f[LHAND], f[ROOT])),
        len(sub(f[RFOOT], f[ROOT])),
        len(sub(f[LFOOT], f[ROOT])),
        area(f[RHAND], f[LHAND], f[NECK]),
        area(f[RFOOT], f[LFOOT], f[ROOT]),
    ]
}

/// Mean over frames of the magnitude of the `order`-th forward difference,
/// using the binomial stencil directly. Frames before the first full stencil
/// repeat the first value.
fn mean_difference_magnitude(track: &[P], order: usize, fps: f64) -> f64 {
    let binom: &[f64] = match order {
        1 => &[-1.0, 1.0],
        2 => &[1.0, -2.0, 1.0],
        3 => &[-1.0, 3.0, -3.0, 1.0],
        _ => unreachable!(),
    };
    let n = track.len();
    let mags: Vec<f64> = (0..n - order)
        .map(|i| {
            let mut d = [0.0; 3];
            for (k, w) in binom.iter().enumerate() {
                for c in 0..3 {
                    d[c] += w * track[i + k][c];
                }
            }
            len(d) * fps.powi(order as i32)
        })
        .collect();
    (order as f64 * mags[0] + mags.iter().sum::<f64>()) / n as f64
}

/// Strike frames of one foot height signal.
pub fn strikes(h: &[f64], fps: f64) -> Vec<usize> {
    let lo = h.iter().cloned().fold(f64::MAX, f64::min);
    let hi = h.iter().cloned().fold(f64::MIN, f64::max);
    let band = lo + 0.1 * (hi - lo);
    let gap = 0.2 * fps;
    let mut out: Vec<usize> = vec![];
    for t in 1..h.len().saturating_sub(1) {
        let is_min = h[t] < h[t - 1] && h[t] <= h[t + 1] && h[t] <= band;
        if !is_min {
            continue;
        }
        let n = out.len();
        if n > 0 && ((t - out[n - 1]) as f64) < gap {
            if h[t] < h[out[n - 1]] {
                out[n - 1] = t;
            }
        } else {
            out.push(t);
        }
    }
    out
}

/// The full descriptor, or `None` when fewer than four frames or no foot has
/// two strikes.
pub fn brute_force_features(frames: &[Frame], fps: f64) -> Option<[f64; 29]> {
    let n = frames.len();
    if n < 4 {
        return None;
    }
    let mut out = [0.0; 29];
    for f in frames {
        for (k, v) in posture(f).iter().enumerate() {
            out[k] += v / n as f64;
        }
    }
    for (k, joint) in [RHAND, LHAND, HEAD, RFOOT, LFOOT].iter().enumerate() {
        let track: Vec<P> = frames.iter().map(|f| f[*joint]).collect();
        for order in 1..=3 {
            out[12 + 5 * (order - 1) + k] = mean_difference_magnitude(&track, order, fps);
        }
    }

    let mut strides = vec![];
    let mut cycles = vec![];
    for foot in [LFOOT, RFOOT] {
        let h: Vec<f64> = frames.iter().map(|f| f[foot][1]).collect();
        let s = strikes(&h, fps);
        if s.len() < 2 {
            continue;
        }
        let mut dist = 0.0;
        let mut time = 0.0;
        for w in s.windows(2) {
            let (a, b) = (frames[w[0]][foot], frames[w[1]][foot]);
            dist += ((b[0] - a[0]).powi(2) + (b[2] - a[2]).powi(2)).sqrt();
            time += (w[1] - w[0]) as f64 / fps;
        }
        strides.push(dist / (s.len() - 1) as f64);
        cycles.push(time / (s.len() - 1) as f64);
    }
    if strides.is_empty() {
        return None;
    }
    out[27] = cycles.iter().sum::<f64>() / cycles.len() as f64;
    out[28] = strides.iter().sum::<f64>() / strides.len() as f64;
    Some(out)
}
