use log::warn;
use statrs::function::erf::erfc;

use super::friedman::average_ranks;
use crate::error::{Error, Result};

/// Largest sample (after dropping zero differences) that gets an exact p-value
/// by sign-flip enumeration; larger samples use the normal approximation.
pub const EXACT_MAX_N: usize = 12;

/// Smallest usable sample; anything below is reported as a draw.
const MIN_N: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Win,
    Draw,
    Loss,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Win => "win",
            Verdict::Draw => "draw",
            Verdict::Loss => "loss",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilcoxonResult {
    /// Rank sum of pairs where the first sample is smaller (better).
    pub r_plus: f64,
    /// Rank sum of pairs where the first sample is larger (worse).
    pub r_minus: f64,
    /// Pairs left after discarding zero differences.
    pub n: usize,
    /// Two-sided p-value.
    pub p_value: f64,
    pub verdict: Verdict,
}

/// Signed ranks of the non-zero differences `b - a`: `(ranks, positive?)`.
fn signed_ranks(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<bool>) {
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| y - x)
        .filter(|d| *d != 0.0)
        .collect();
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    (average_ranks(&magnitudes), diffs.iter().map(|d| *d > 0.0).collect())
}

/// Exact two-sided p-value: the fraction of all `2^n` sign assignments whose
/// positive rank sum lies at least as far from its mean as `r_plus`.
pub fn exact_p_value(ranks: &[f64], r_plus: f64) -> f64 {
    let n = ranks.len();
    assert!(n < 31, "exact enumeration limited to small samples");
    let total: f64 = ranks.iter().sum();
    let center = total / 2.0;
    let observed = (r_plus - center).abs() - 1e-9;
    let mut extreme = 0u64;
    for signs in 0u64..(1u64 << n) {
        let sum: f64 = ranks
            .iter()
            .enumerate()
            .filter(|(k, _)| signs >> k & 1 == 1)
            .map(|(_, r)| r)
            .sum();
        if (sum - center).abs() >= observed {
            extreme += 1;
        }
    }
    extreme as f64 / (1u64 << n) as f64
}

/// Normal approximation with tie-corrected variance and continuity correction.
pub fn normal_p_value(ranks: &[f64], r_plus: f64) -> f64 {
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut start = 0;
    while start < sorted.len() {
        let mut end = start + 1;
        while end < sorted.len() && sorted[end] == sorted[start] {
            end += 1;
        }
        let t = (end - start) as f64;
        tie_term += t * t * t - t;
        start = end;
    }
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let z = (((r_plus - mean).abs() - 0.5).max(0.0)) / var.sqrt();
    erfc(z / std::f64::consts::SQRT_2).min(1.0)
}

/// Paired Wilcoxon signed-rank test of `a` against `b` for minimization: a win
/// means `a` is significantly smaller.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64], alpha: f64) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::Input(format!(
            "paired samples differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let (ranks, positive) = signed_ranks(a, b);
    let n = ranks.len();
    let r_plus: f64 = ranks.iter().zip(&positive).filter(|(_, p)| **p).map(|(r, _)| r).sum();
    let r_minus: f64 = ranks.iter().sum::<f64>() - r_plus;

    if n < MIN_N {
        warn!("only {n} non-zero paired differences; reporting a draw");
        return Ok(WilcoxonResult {
            r_plus,
            r_minus,
            n,
            p_value: 1.0,
            verdict: Verdict::Draw,
        });
    }
    let p_value = if n <= EXACT_MAX_N {
        exact_p_value(&ranks, r_plus)
    } else {
        normal_p_value(&ranks, r_plus)
    };
    let verdict = if p_value >= alpha || r_plus == r_minus {
        Verdict::Draw
    } else if r_plus > r_minus {
        Verdict::Win
    } else {
        Verdict::Loss
    };
    Ok(WilcoxonResult {
        r_plus,
        r_minus,
        n,
        p_value,
        verdict,
    })
}
