//! The four position-update operators.
//!
//! Ranks are 1-based and refer to a population sorted by ascending fitness.
//! Each operator consumes draws from the stream in this order:
//!
//! * autotroph: foraging factor, foraging mask, peer `j`, then per pair
//!   `k = 1..=np` the lower neighbor and the upper neighbor (edge ranks
//!   substitute themselves without a draw)
//! * heterotroph: foraging factor, foraging mask, sign coin, one uniform per
//!   dimension for the nearby location
//! * dormancy: one uniform per dimension
//! * reproduction: sign coin, scalar step, reproduction mask (uniform then
//!   subset), one uniform per dimension
//!
//! Updates leaving the box are clamped onto the violated bound.

use super::schedule::{foraging_factor, foraging_mask, neighbor_weight, reproduction_mask, DimMask};
use super::{ApoParams, ScheduleState};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::space::{clamp_to_bounds, Bounds, Candidate, Population};

fn check_rank(rank: usize, pop: &Population) -> Result<()> {
    if !pop.is_sorted() {
        return Err(Error::Contract("operator requires a sorted population".into()));
    }
    if rank == 0 || rank > pop.len() {
        return Err(Error::Parameter(format!("rank {rank} outside [1, {}]", pop.len())));
    }
    Ok(())
}

/// `x + step ⊙ mask`, clamped.
fn masked_move(x: &[f64], step: &[f64], mask: &DimMask, bounds: &Bounds) -> Result<Vec<f64>> {
    let moved: Vec<f64> = x
        .iter()
        .zip(step)
        .zip(mask.bits())
        .map(|((&xi, &si), &on)| if on { xi + si } else { xi })
        .collect();
    clamp_to_bounds(&moved, bounds)
}

/// Adds `weight * (a - b) / np` into `acc`.
fn accumulate_pair(acc: &mut [f64], lower: &Candidate, upper: &Candidate, np: usize) {
    let w = neighbor_weight(lower.fitness, upper.fitness);
    for ((s, a), b) in acc.iter_mut().zip(&lower.position).zip(&upper.position) {
        *s += w * (a - b) / np as f64;
    }
}

/// Autotrophic foraging: move relative to a random peer plus weighted
/// differences of randomly chosen better/worse neighbors.
pub fn autotrophic_update(
    rank: usize,
    pop: &Population,
    params: &ApoParams,
    sched: &ScheduleState,
    bounds: &Bounds,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    check_rank(rank, pop)?;
    let ps = pop.len();
    let me = pop.by_rank(rank);
    let dim = me.position.len();

    let f = foraging_factor(sched.iter, params.iter_max(), rng)?;
    let mask = foraging_mask(rank, ps, dim, rng);
    let peer = pop.by_rank(rng.index(ps) + 1);

    let mut step: Vec<f64> = peer
        .position
        .iter()
        .zip(&me.position)
        .map(|(xj, xi)| f * (xj - xi))
        .collect();
    for _ in 0..params.np {
        let lower_rank = if rank == 1 { rank } else { rng.index(rank - 1) + 1 };
        let upper_rank = if rank == ps { rank } else { rank + 1 + rng.index(ps - rank) };
        accumulate_pair(&mut step, pop.by_rank(lower_rank), pop.by_rank(upper_rank), params.np);
    }
    masked_move(&me.position, &step, &mask, bounds)
}

/// Heterotrophic foraging: move toward a nearby location, corrected by the
/// weighted difference of the ordinal neighbors `rank - k` and `rank + k`.
pub fn heterotrophic_update(
    rank: usize,
    pop: &Population,
    params: &ApoParams,
    sched: &ScheduleState,
    bounds: &Bounds,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    check_rank(rank, pop)?;
    let ps = pop.len();
    let me = pop.by_rank(rank);
    let dim = me.position.len();
    let iter_max = params.iter_max();

    let f = foraging_factor(sched.iter, iter_max, rng)?;
    let mask = foraging_mask(rank, ps, dim, rng);
    let sign = if rng.coin() { 1.0 } else { -1.0 };
    let shrink = 1.0 - sched.iter as f64 / iter_max as f64;
    let near: Vec<f64> = me
        .position
        .iter()
        .map(|&xi| (1.0 + sign * rng.uniform() * shrink) * xi)
        .collect();

    let mut inner: Vec<f64> = near.iter().zip(&me.position).map(|(n, x)| n - x).collect();
    for k in 1..=params.np {
        let lower = pop.by_rank(rank.saturating_sub(k).max(1));
        let upper = pop.by_rank((rank + k).min(ps));
        accumulate_pair(&mut inner, lower, upper, params.np);
    }
    let step: Vec<f64> = inner.iter().map(|v| f * v).collect();
    masked_move(&me.position, &step, &mask, bounds)
}

/// Dormancy: a fresh uniform sample in the box.
pub fn dormancy_update(bounds: &Bounds, rng: &mut RngStream) -> Vec<f64> {
    bounds.sample(rng)
}

/// Reproduction: a masked random perturbation of `x`.
pub fn reproduction_update(x: &[f64], bounds: &Bounds, rng: &mut RngStream) -> Result<Vec<f64>> {
    if x.len() != bounds.dim() {
        return Err(Error::Dimension {
            expected: bounds.dim(),
            actual: x.len(),
        });
    }
    let sign = if rng.coin() { 1.0 } else { -1.0 };
    let scale = rng.uniform();
    let mask = reproduction_mask(x.len(), rng);
    let step: Vec<f64> = bounds
        .sample(rng)
        .into_iter()
        .map(|v| sign * scale * v)
        .collect();
    masked_move(x, &step, &mask, bounds)
}
