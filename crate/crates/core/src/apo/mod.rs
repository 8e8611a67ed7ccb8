//! The artificial protozoa optimizer.
//!
//! Each generation sorts the population, routes a random fraction of it to
//! dormancy or reproduction and lets everyone else forage, either
//! autotrophically (exploration around a random peer) or heterotrophically
//! (exploitation around a perturbed copy of itself). A new position survives
//! only if it strictly improves on the incumbent.
//!
//! Random draws within a generation happen in a fixed order so runs are
//! reproducible from the seed alone:
//!
//! 1. proportion fraction `pf` (one uniform)
//! 2. dormancy/reproduction slots (one subset of `ceil(ps * pf)` ranks)
//! 3. for every rank in ascending order: the branch uniform, then the
//!    operator's own draws (see [`operators`])

pub mod operators;
mod optimizer;
pub mod schedule;

pub use operators::{autotrophic_update, dormancy_update, heterotrophic_update, reproduction_update};
pub use optimizer::{apo_step, optimize, optimize_observed};
pub use schedule::{
    foraging_factor, foraging_mask, neighbor_weight, prob_dormancy, prob_forage_mode,
    proportion_fraction, reproduction_mask, DimMask, EPS,
};

use crate::error::{Error, Result};
use crate::space::Candidate;

/// Control parameters of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApoParams {
    /// Population size.
    pub ps: usize,
    /// Neighbor pairs per foraging update.
    pub np: usize,
    /// Upper limit of the per-generation dormancy/reproduction fraction.
    pub pf_max: f64,
    /// Evaluation budget, initialization included.
    pub max_fes: usize,
}

impl Default for ApoParams {
    fn default() -> Self {
        Self {
            ps: 100,
            np: 1,
            pf_max: 0.1,
            max_fes: 100 * 501,
        }
    }
}

impl ApoParams {
    pub fn new(ps: usize, np: usize, pf_max: f64, max_fes: usize) -> Result<Self> {
        let params = Self {
            ps,
            np,
            pf_max,
            max_fes,
        };
        params.validate()?;
        Ok(params)
    }

    /// Budget of `ps` initial evaluations plus `generations` full generations.
    pub fn with_generations(ps: usize, np: usize, pf_max: f64, generations: usize) -> Result<Self> {
        Self::new(ps, np, pf_max, ps * (generations + 1))
    }

    /// `floor((ps - 1) / 2)`.
    pub fn np_max(&self) -> usize {
        self.ps.saturating_sub(1) / 2
    }

    /// `floor(max_fes / ps)`.
    pub fn iter_max(&self) -> usize {
        if self.ps == 0 {
            0
        } else {
            self.max_fes / self.ps
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ps < 2 {
            return Err(Error::Parameter(format!("ps must be at least 2, got {}", self.ps)));
        }
        // ps = 2 has np_max = 0; a single pair is still well defined through the
        // edge-rank substitution, so np = 1 is always accepted.
        if self.np == 0 || self.np > self.np_max().max(1) {
            return Err(Error::Parameter(format!(
                "np must lie in [1, {}], got {}",
                self.np_max().max(1),
                self.np
            )));
        }
        if !(0.0..=1.0).contains(&self.pf_max) {
            return Err(Error::Parameter(format!(
                "pf_max must lie in [0, 1], got {}",
                self.pf_max
            )));
        }
        Ok(())
    }
}

/// Progress of a run: iteration counter and evaluations consumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScheduleState {
    pub iter: usize,
    pub fes: usize,
}

/// One line of the convergence trace, written after initialization (`iter = 0`)
/// and after every generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    pub fes: usize,
    pub best: f64,
    pub diversity: f64,
}

/// Outcome of a full run.
#[derive(Debug, Clone, PartialEq)]
pub struct ApoResult {
    pub best: Candidate,
    pub trace: Vec<TraceRecord>,
    pub fes_used: usize,
}
