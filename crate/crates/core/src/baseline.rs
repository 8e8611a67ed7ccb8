//! Uniform random search, the reference point for the optimizer's structure.

use crate::apo::{ApoResult, TraceRecord};
use crate::error::{Error, Result};
use crate::metrics::diversity;
use crate::rng::RngStream;
use crate::space::{Candidate, ObjectiveFn, Population};

/// Samples per trace record; mirrors the optimizer's default population size.
pub const BATCH: usize = 100;

/// Draws `max_fes` independent uniform samples in the objective's bounds and
/// keeps the best. One trace record is written per batch of [`BATCH`] samples
/// (the last batch may be shorter), with the batch's diversity.
pub fn random_search(objective: &ObjectiveFn, max_fes: usize, seed: u64) -> Result<ApoResult> {
    random_search_observed(objective, max_fes, seed, |_, _| {})
}

/// Like [`random_search`], calling `observe` after every batch with the new
/// trace record and the best sample so far.
pub fn random_search_observed<F>(objective: &ObjectiveFn, max_fes: usize, seed: u64, mut observe: F) -> Result<ApoResult>
where
    F: FnMut(&TraceRecord, &Candidate),
{
    if max_fes == 0 {
        return Err(Error::Parameter("max_fes must be at least 1".into()));
    }
    let mut rng = RngStream::new(seed);
    let bounds = objective.bounds();
    let mut fes = 0;
    let mut best: Option<Candidate> = None;
    let mut trace = Vec::with_capacity(max_fes.div_ceil(BATCH));
    while fes < max_fes {
        let n = BATCH.min(max_fes - fes);
        let mut batch = Vec::with_capacity(n);
        for _ in 0..n {
            let x = bounds.sample(&mut rng);
            let f = objective.evaluate(&x, &mut fes)?;
            if best.as_ref().is_none_or(|b| f < b.fitness) {
                best = Some(Candidate::new(x.clone(), f));
            }
            batch.push(Candidate::new(x, f));
        }
        let best = best.as_ref().expect("batch is non-empty");
        let rec = TraceRecord {
            iter: trace.len(),
            fes,
            best: best.fitness,
            diversity: diversity(&Population::new(batch)),
        };
        observe(&rec, best);
        trace.push(rec);
    }
    Ok(ApoResult {
        best: best.expect("max_fes is positive"),
        trace,
        fes_used: fes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Bounds;

    #[test]
    fn constant_objective() {
        let f = ObjectiveFn::new("c", Bounds::uniform(3, -1.0, 1.0).unwrap(), |_| 4.25);
        let r = random_search(&f, 250, 1).unwrap();
        assert_eq!(r.best.fitness, 4.25);
        assert_eq!(r.fes_used, 250);
        assert_eq!(r.trace.len(), 3);
        assert_eq!(r.trace.last().unwrap().fes, 250);
    }

    #[test]
    fn sphere_small_box() {
        // P(no sample within radius 0.1) = (1 - pi 0.01 / 4)^1e5, effectively zero
        let f = ObjectiveFn::new("sphere", Bounds::uniform(2, -1.0, 1.0).unwrap(), |x| {
            x.iter().map(|v| v * v).sum()
        });
        let r = random_search(&f, 100_000, 7).unwrap();
        assert!(r.best.fitness < 0.01);
        assert!(f.bounds().contains(&r.best.position));
        assert!(r.trace.windows(2).all(|w| w[1].best <= w[0].best));
    }

    #[test]
    fn deterministic_and_rejects_zero_budget() {
        let f = ObjectiveFn::new("lin", Bounds::uniform(2, 0.0, 1.0).unwrap(), |x| x[0] - x[1]);
        assert_eq!(random_search(&f, 500, 3).unwrap(), random_search(&f, 500, 3).unwrap());
        assert!(random_search(&f, 0, 3).is_err());
    }
}
