//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls into the optimizer's arithmetic: the operator oracles
//! rebuild every update from the recorded random draws, and the MCET oracle
//! sums the histogram level by level.

#![allow(dead_code)]

use std::f64::consts::PI;

use apo_core::rng::Draw;
use apo_core::segmentation::RgbImage;

pub const EPS: f64 = 2.2204e-16;

/// Sequential reader over a recorded tape.
pub struct Tape {
    draws: Vec<Draw>,
    pos: usize,
}

impl Tape {
    pub fn new(draws: Vec<Draw>) -> Self {
        Self { draws, pos: 0 }
    }

    fn next(&mut self) -> Draw {
        let d = self.draws.get(self.pos).cloned().expect("tape exhausted");
        self.pos += 1;
        d
    }

    pub fn uniform(&mut self) -> f64 {
        match self.next() {
            Draw::Uniform(u) => u,
            other => panic!("expected a uniform, found {other:?}"),
        }
    }

    pub fn index(&mut self) -> usize {
        match self.next() {
            Draw::Index(i) => i,
            other => panic!("expected an index, found {other:?}"),
        }
    }

    pub fn coin(&mut self) -> bool {
        match self.next() {
            Draw::Coin(c) => c,
            other => panic!("expected a coin, found {other:?}"),
        }
    }

    pub fn subset(&mut self) -> Vec<usize> {
        match self.next() {
            Draw::Subset(s) => s,
            other => panic!("expected a subset, found {other:?}"),
        }
    }

    pub fn is_done(&self) -> bool {
        self.pos == self.draws.len()
    }
}

/// Sorted population as plain rows: `xs[r - 1]` and `fs[r - 1]` belong to rank `r`.
pub struct Sorted<'a> {
    pub xs: &'a [Vec<f64>],
    pub fs: &'a [f64],
}

fn clamp(v: f64, lo: f64, hi: f64) -> f64 {
    if v < lo {
        lo
    } else if v > hi {
        hi
    } else {
        v
    }
}

fn mask_from(dim: usize, picked: &[usize]) -> Vec<f64> {
    let mut m = vec![0.0; dim];
    for &d in picked {
        m[d] = 1.0;
    }
    m
}

/// X_i + (f (X_j - X_i) + 1/np sum_k w_a (X_k- - X_k+)) * M_f, clamped.
pub fn autotroph(
    tape: &mut Tape,
    pop: &Sorted,
    i: usize,
    np: usize,
    iter: usize,
    iter_max: usize,
    lb: &[f64],
    ub: &[f64],
) -> Vec<f64> {
    let ps = pop.xs.len();
    let dim = lb.len();
    let f = tape.uniform() * (1.0 + (iter as f64 / iter_max as f64 * PI).cos());
    let m = mask_from(dim, &tape.subset());
    let j = tape.index() + 1;
    let mut pairs = Vec::new();
    for _ in 0..np {
        let km = if i == 1 { 1 } else { tape.index() + 1 };
        let kp = if i == ps { ps } else { i + 1 + tape.index() };
        pairs.push((km, kp));
    }
    let xi = &pop.xs[i - 1];
    let xj = &pop.xs[j - 1];
    let mut out = vec![0.0; dim];
    for d in 0..dim {
        let mut sum = 0.0;
        for &(km, kp) in &pairs {
            let wa = (-(pop.fs[km - 1] / (pop.fs[kp - 1] + EPS)).abs()).exp();
            sum += wa * (pop.xs[km - 1][d] - pop.xs[kp - 1][d]);
        }
        let v = xi[d] + (f * (xj[d] - xi[d]) + sum / np as f64) * m[d];
        out[d] = clamp(v, lb[d], ub[d]);
    }
    out
}

/// X_i + f (X_near - X_i + 1/np sum_k w_h (X_{i-k} - X_{i+k})) * M_f, clamped,
/// with X_near = (1 +- Rand (1 - iter/iter_max)) * X_i.
pub fn heterotroph(
    tape: &mut Tape,
    pop: &Sorted,
    i: usize,
    np: usize,
    iter: usize,
    iter_max: usize,
    lb: &[f64],
    ub: &[f64],
) -> Vec<f64> {
    let ps = pop.xs.len();
    let dim = lb.len();
    let f = tape.uniform() * (1.0 + (iter as f64 / iter_max as f64 * PI).cos());
    let m = mask_from(dim, &tape.subset());
    let sign = if tape.coin() { 1.0 } else { -1.0 };
    let xi = &pop.xs[i - 1];
    let mut near = vec![0.0; dim];
    for d in 0..dim {
        near[d] = (1.0 + sign * tape.uniform() * (1.0 - iter as f64 / iter_max as f64)) * xi[d];
    }
    let mut out = vec![0.0; dim];
    for d in 0..dim {
        let mut sum = 0.0;
        for k in 1..=np {
            let lo = if i > k { i - k } else { 1 };
            let hi = if i + k <= ps { i + k } else { ps };
            let wh = (-(pop.fs[lo - 1] / (pop.fs[hi - 1] + EPS)).abs()).exp();
            sum += wh * (pop.xs[lo - 1][d] - pop.xs[hi - 1][d]);
        }
        let v = xi[d] + f * (near[d] - xi[d] + sum / np as f64) * m[d];
        out[d] = clamp(v, lb[d], ub[d]);
    }
    out
}

/// X_min + Rand * (X_max - X_min).
pub fn dormancy(tape: &mut Tape, lb: &[f64], ub: &[f64]) -> Vec<f64> {
    (0..lb.len())
        .map(|d| lb[d] + tape.uniform() * (ub[d] - lb[d]))
        .collect()
}

/// X_i +- rand (X_min + Rand * (X_max - X_min)) * M_r, clamped, where M_r has
/// ceil(dim * rand) set bits.
pub fn reproduction(tape: &mut Tape, xi: &[f64], lb: &[f64], ub: &[f64]) -> Vec<f64> {
    let dim = lb.len();
    let sign = if tape.coin() { 1.0 } else { -1.0 };
    let r = tape.uniform();
    let u = tape.uniform();
    let picked = tape.subset();
    assert_eq!(picked.len(), ((dim as f64 * u).ceil() as usize).min(dim));
    let m = mask_from(dim, &picked);
    let mut out = vec![0.0; dim];
    for d in 0..dim {
        let sample = lb[d] + tape.uniform() * (ub[d] - lb[d]);
        out[d] = clamp(xi[d] + sign * r * sample * m[d], lb[d], ub[d]);
    }
    out
}

/// `|a - b| <= tol * max(1, |a|, |b|)` for every coordinate.
pub fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= tol * 1f64.max(x.abs()).max(y.abs()))
}

/// Contribution of the 1-based levels `[lo, hi)` to the cross-entropy,
/// summed level by level: `sum i h(i) ln(i / mu)`.
pub fn class_cost(counts: &[u64; 256], lo: usize, hi: usize) -> f64 {
    let (mut mass, mut moment) = (0.0, 0.0);
    for level in lo..hi {
        let h = counts[level - 1] as f64;
        mass += h;
        moment += level as f64 * h;
    }
    if mass == 0.0 {
        return 0.0;
    }
    let mu = moment / mass;
    let mut cost = 0.0;
    for level in lo..hi {
        let h = counts[level - 1] as f64;
        if h > 0.0 {
            let i = level as f64;
            cost += i * h * (i / mu).ln();
        }
    }
    cost
}

/// Cross-entropy objective of a threshold set. `counts[g]` is the count of
/// 0-based gray `g`; thresholds are 1-based levels as in the library.
pub fn mcet_direct(counts: &[u64; 256], thresholds: &[usize]) -> f64 {
    let mut bounds = vec![1usize];
    bounds.extend_from_slice(thresholds);
    bounds.push(257);
    bounds.windows(2).map(|w| class_cost(counts, w[0], w[1])).fold(0.0, |a, c| a + c)
}

/// Exhaustive minimum of [`mcet_direct`] over all `n`-threshold sets with
/// levels in `2..=255`, `n` in {1, 2}. Uses a table of class costs, summed in
/// the same order as [`mcet_direct`] so values compare exactly.
pub fn mcet_exhaustive(counts: &[u64; 256], n: usize) -> f64 {
    let mut cost = vec![vec![0.0; 258]; 258];
    for lo in 1..=256 {
        for hi in lo + 1..=257 {
            cost[lo][hi] = class_cost(counts, lo, hi);
        }
    }
    let mut best = f64::INFINITY;
    match n {
        1 => {
            for t in 2..=255 {
                best = best.min(0.0 + cost[1][t] + cost[t][257]);
            }
        }
        2 => {
            for a in 2..=254 {
                for b in a + 1..=255 {
                    best = best.min(0.0 + cost[1][a] + cost[a][b] + cost[b][257]);
                }
            }
        }
        _ => panic!("exhaustive scan only for one or two thresholds"),
    }
    best
}

/// 256x256 image of soft-edged blobs: each channel mixes a handful of tones
/// with a little deterministic texture, so every channel has many populated
/// levels but a clear multi-modal histogram.
pub fn multitone_image() -> RgbImage {
    let (w, h) = (256usize, 256usize);
    let tones: [[f64; 6]; 3] = [
        [20.0, 60.0, 105.0, 150.0, 200.0, 240.0],
        [35.0, 80.0, 120.0, 170.0, 210.0, 230.0],
        [10.0, 55.0, 95.0, 140.0, 185.0, 250.0],
    ];
    let mut planes: [Vec<u8>; 3] = [vec![0; w * h], vec![0; w * h], vec![0; w * h]];
    for y in 0..h {
        for x in 0..w {
            let region = ((x / 43) + 2 * (y / 64)) % 6;
            let ripple = ((x as f64 * 0.37).sin() + (y as f64 * 0.23).cos()) * 6.0;
            for c in 0..3 {
                let v = tones[c][(region + c) % 6] + ripple + ((x * 7 + y * 13 + c * 5) % 9) as f64 - 4.0;
                planes[c][y * w + x] = v.round().clamp(0.0, 255.0) as u8;
            }
        }
    }
    RgbImage::from_planes(w, h, planes).unwrap()
}
