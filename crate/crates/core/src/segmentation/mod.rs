//! Multilevel thresholding by minimum cross-entropy (MCET).
//!
//! Gray levels `0..=255` are re-indexed to `1..=256` so that `ln(i)` is defined
//! for every level. A [`ThresholdSet`] `t_1 < ... < t_n` splits the levels into
//! the classes `[t_{k-1}, t_k)` with `t_0 = 1` and `t_{n+1} = L + 1`.
//!
//! The optimizer searches the continuous box `[2, L - 1]^n`. Every candidate
//! is repaired into a valid set before scoring: round, sort, then push
//! duplicates apart (see [`repair_thresholds`]).

mod image;
mod quality;

pub use image::{encode_pgm, encode_ppm, parse_pgm, parse_ppm, read_pgm, read_ppm, write_pgm, write_ppm, GrayImage, RgbImage};
pub use quality::{psnr, ssim, SSIM_WINDOW};

use log::warn;

use crate::apo::{optimize, ApoParams};
use crate::error::{Error, Result};
use crate::space::{Bounds, ObjectiveFn};

/// Number of gray levels.
pub const LEVELS: usize = 256;

/// Largest supported threshold count.
pub const MAX_THRESHOLDS: usize = 32;

/// Pixel counts per gray level with cached prefix sums.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayHistogram {
    counts: Vec<u64>,
    // prefix sums over 1-based levels: index i holds the sum over levels < i
    mass: Vec<f64>,
    moment: Vec<f64>,
    entropy: f64,
}

impl GrayHistogram {
    /// `counts[g]` is the number of pixels with gray value `g`.
    pub fn from_counts(counts: [u64; LEVELS]) -> Result<Self> {
        if counts.iter().all(|&c| c == 0) {
            return Err(Error::Input("histogram has no pixels".into()));
        }
        let mut mass = vec![0.0; LEVELS + 2];
        let mut moment = vec![0.0; LEVELS + 2];
        let mut entropy = 0.0;
        for i in 1..=LEVELS {
            let z = counts[i - 1] as f64;
            let level = i as f64;
            mass[i + 1] = mass[i] + z;
            moment[i + 1] = moment[i] + level * z;
            if z > 0.0 {
                entropy += level * z * level.ln();
            }
        }
        Ok(Self {
            counts: counts.to_vec(),
            mass,
            moment,
            entropy,
        })
    }

    pub fn from_channel(channel: &[u8]) -> Result<Self> {
        if channel.is_empty() {
            return Err(Error::Input("empty channel".into()));
        }
        let mut counts = [0u64; LEVELS];
        for &g in channel {
            counts[g as usize] += 1;
        }
        Self::from_counts(counts)
    }

    /// Count at 1-based level `i` (gray value `i - 1`).
    pub fn count(&self, level: usize) -> u64 {
        self.counts[level - 1]
    }

    /// Counts indexed by gray value.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// 1-based levels with non-zero counts.
    pub fn populated_levels(&self) -> Vec<usize> {
        (1..=LEVELS).filter(|&i| self.count(i) > 0).collect()
    }

    // (sum z, sum i z) over levels lo..hi
    fn class_sums(&self, lo: usize, hi: usize) -> (f64, f64) {
        (
            self.mass[hi] - self.mass[lo],
            self.moment[hi] - self.moment[lo],
        )
    }
}

/// Strictly increasing 1-based thresholds inside `(1, L)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThresholdSet(Vec<usize>);

impl ThresholdSet {
    pub fn new(thresholds: Vec<usize>) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(Error::Contract("threshold set is empty".into()));
        }
        if thresholds.iter().any(|&t| t <= 1 || t >= LEVELS) {
            return Err(Error::Contract(format!(
                "thresholds must lie in (1, {LEVELS}): {thresholds:?}"
            )));
        }
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Contract(format!(
                "thresholds must be strictly increasing: {thresholds:?}"
            )));
        }
        Ok(Self(thresholds))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Class boundaries `[1, t_1, ..., t_n, L + 1]`.
    pub fn boundaries(&self) -> Vec<usize> {
        let mut b = Vec::with_capacity(self.0.len() + 2);
        b.push(1);
        b.extend_from_slice(&self.0);
        b.push(LEVELS + 1);
        b
    }
}

/// Intensity-weighted mean of the 1-based levels in `[lo, hi)`. An empty class
/// has no mean; its midpoint `(lo + hi - 1) / 2` is returned instead, with a
/// warning.
pub fn class_mean(hist: &GrayHistogram, lo: usize, hi: usize) -> Result<f64> {
    if lo < 1 || lo >= hi || hi > LEVELS + 1 {
        return Err(Error::Contract(format!("invalid class [{lo}, {hi})")));
    }
    let (mass, moment) = hist.class_sums(lo, hi);
    if mass == 0.0 {
        warn!("class [{lo}, {hi}) is empty; using its midpoint as the mean");
        return Ok((lo + hi - 1) as f64 / 2.0);
    }
    Ok(moment / mass)
}

/// Cross-entropy between the image and its class-mean reconstruction. Empty
/// classes contribute nothing.
pub fn mcet_objective(hist: &GrayHistogram, ts: &ThresholdSet) -> f64 {
    let bounds = ts.boundaries();
    let fitted: f64 = bounds
        .windows(2)
        .map(|w| {
            let (mass, moment) = hist.class_sums(w[0], w[1]);
            if mass == 0.0 {
                0.0
            } else {
                moment * (moment / mass).ln()
            }
        })
        .sum();
    hist.entropy - fitted
}

/// Rounds, sorts and separates duplicates: a forward pass lifts any `t_k <= t_{k-1}`
/// to `t_{k-1} + 1`, capped at `L - 1`, then a backward pass lowers anything the
/// cap pushed onto its right neighbor.
pub fn repair_thresholds(position: &[f64]) -> Result<ThresholdSet> {
    let n = position.len();
    if n == 0 || n > MAX_THRESHOLDS {
        return Err(Error::Parameter(format!(
            "threshold count must lie in [1, {MAX_THRESHOLDS}], got {n}"
        )));
    }
    let (lo, hi) = (2usize, LEVELS - 1);
    let mut t: Vec<usize> = position
        .iter()
        .map(|&v| {
            let r = if v.is_finite() { v.round() } else { lo as f64 };
            r.clamp(lo as f64, hi as f64) as usize
        })
        .collect();
    t.sort_unstable();
    for k in 1..n {
        if t[k] <= t[k - 1] {
            t[k] = (t[k - 1] + 1).min(hi);
        }
    }
    for k in (0..n - 1).rev() {
        if t[k] >= t[k + 1] {
            t[k] = t[k + 1] - 1;
        }
    }
    ThresholdSet::new(t)
}

/// Minimizes [`mcet_objective`] over `n` thresholds with the optimizer.
pub fn solve_thresholds(hist: &GrayHistogram, n: usize, params: &ApoParams, seed: u64) -> Result<ThresholdSet> {
    if n == 0 || n > MAX_THRESHOLDS {
        return Err(Error::Parameter(format!(
            "threshold count must lie in [1, {MAX_THRESHOLDS}], got {n}"
        )));
    }
    let bounds = Bounds::uniform(n, 2.0, (LEVELS - 1) as f64)?;
    let h = hist.clone();
    let objective = ObjectiveFn::new("mcet", bounds, move |x| {
        let ts = repair_thresholds(x).expect("repair always yields a valid set");
        mcet_objective(&h, &ts)
    });
    let result = optimize(&objective, params, seed)?;
    repair_thresholds(&result.best.position)
}

/// Replaces every pixel by the rounded mean of its class.
pub fn apply_thresholds(channel: &[u8], ts: &ThresholdSet, hist: &GrayHistogram) -> Result<Vec<u8>> {
    let bounds = ts.boundaries();
    let mut lut = [0u8; LEVELS];
    for w in bounds.windows(2) {
        let mean = class_mean(hist, w[0], w[1])?;
        let gray = (mean.round() - 1.0).clamp(0.0, 255.0) as u8;
        for level in w[0]..w[1] {
            lut[level - 1] = gray;
        }
    }
    Ok(channel.iter().map(|&g| lut[g as usize]).collect())
}

/// Thresholds for one channel together with the objective value they reach.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelFit {
    pub thresholds: ThresholdSet,
    pub objective: f64,
}

/// Segments each channel independently (channel `c` uses seed `seed + c`) and
/// reassembles the image.
pub fn segment_rgb(img: &RgbImage, n: usize, params: &ApoParams, seed: u64) -> Result<(RgbImage, [ChannelFit; 3])> {
    if n == 0 {
        return Err(Error::Parameter("need at least one threshold".into()));
    }
    let solved: Vec<Result<(Vec<u8>, ChannelFit)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..3)
            .map(|c| {
                scope.spawn(move || {
                    let channel = img.channel(c);
                    let hist = GrayHistogram::from_channel(channel)?;
                    let ts = solve_thresholds(&hist, n, params, seed.wrapping_add(c as u64))?;
                    let objective = mcet_objective(&hist, &ts);
                    let out = apply_thresholds(channel, &ts, &hist)?;
                    Ok((out, ChannelFit { thresholds: ts, objective }))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("channel solver panicked"))
            .collect()
    });
    let mut planes = Vec::with_capacity(3);
    let mut fits = Vec::with_capacity(3);
    for r in solved {
        let (plane, fit) = r?;
        planes.push(plane);
        fits.push(fit);
    }
    let [r, g, b]: [Vec<u8>; 3] = planes.try_into().expect("three planes");
    let out = RgbImage::from_planes(img.width(), img.height(), [r, g, b])?;
    let fits: [ChannelFit; 3] = fits.try_into().expect("three fits");
    Ok((out, fits))
}
