//! Schedules, probabilities and dimension masks that steer the search.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Guard added to the denominator of the neighbor weight.
pub const EPS: f64 = 2.2204e-16;

/// Binary per-dimension mask selecting which coordinates an update may move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimMask(Vec<bool>);

impl DimMask {
    pub fn zeros(dim: usize) -> Self {
        Self(vec![false; dim])
    }

    pub fn ones(dim: usize) -> Self {
        Self(vec![true; dim])
    }

    /// Mask with exactly the listed (0-based) dimensions set.
    pub fn from_indices(dim: usize, indices: &[usize]) -> Self {
        let mut bits = vec![false; dim];
        for &d in indices {
            bits[d] = true;
        }
        Self(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_set(&self, d: usize) -> bool {
        self.0[d]
    }
}

fn check_iter(iter: usize, iter_max: usize) -> Result<()> {
    if iter_max == 0 {
        return Err(Error::Parameter("iter_max must be positive".into()));
    }
    if iter > iter_max {
        return Err(Error::Parameter(format!("iter {iter} exceeds iter_max {iter_max}")));
    }
    Ok(())
}

/// `1 + cos(iter / iter_max * pi)`, the deterministic part of the foraging factor.
pub(crate) fn foraging_envelope(iter: usize, iter_max: usize) -> f64 {
    1.0 + (iter as f64 / iter_max as f64 * PI).cos()
}

/// `rand * (1 + cos(iter / iter_max * pi))`, in `[0, 2]`.
pub fn foraging_factor(iter: usize, iter_max: usize, rng: &mut RngStream) -> Result<f64> {
    check_iter(iter, iter_max)?;
    Ok(rng.uniform() * foraging_envelope(iter, iter_max))
}

/// Probability of the autotrophic branch, falling from 1 to 0 over the run.
pub fn prob_forage_mode(iter: usize, iter_max: usize) -> Result<f64> {
    check_iter(iter, iter_max)?;
    Ok(0.5 * foraging_envelope(iter, iter_max))
}

/// Probability of dormancy (rather than reproduction) for the protozoan of the
/// given 1-based rank; the worst one is always dormant.
pub fn prob_dormancy(rank: usize, ps: usize) -> Result<f64> {
    if rank == 0 || rank > ps {
        return Err(Error::Parameter(format!("rank {rank} outside [1, {ps}]")));
    }
    Ok(0.5 * (1.0 + ((1.0 - rank as f64 / ps as f64) * PI).cos()))
}

/// `pf_max * rand`.
pub fn proportion_fraction(pf_max: f64, rng: &mut RngStream) -> f64 {
    pf_max * rng.uniform()
}

/// Number of foraging dimensions for a rank: `ceil(dim * rank / ps)`, computed
/// in integers so the count is exact.
pub(crate) fn foraging_count(rank: usize, ps: usize, dim: usize) -> usize {
    (dim * rank).div_ceil(ps)
}

/// Foraging mask with exactly `ceil(dim * rank / ps)` dimensions set. Better
/// ranks move fewer coordinates.
pub fn foraging_mask(rank: usize, ps: usize, dim: usize, rng: &mut RngStream) -> DimMask {
    let picked = rng.subset(dim, foraging_count(rank, ps, dim).min(dim));
    DimMask::from_indices(dim, &picked)
}

/// Reproduction mask with `ceil(dim * rand)` dimensions set. Zero bits only when
/// the draw is exactly 0.
pub fn reproduction_mask(dim: usize, rng: &mut RngStream) -> DimMask {
    let count = ((dim as f64 * rng.uniform()).ceil() as usize).min(dim);
    let picked = rng.subset(dim, count);
    DimMask::from_indices(dim, &picked)
}

/// `exp(-|fit_a / (fit_b + eps)|)`, in `(0, 1]`.
pub fn neighbor_weight(fit_a: f64, fit_b: f64) -> f64 {
    (-(fit_a / (fit_b + EPS)).abs()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn foraging_factor_endpoints() {
        let mut rng = RngStream::new(0);
        for _ in 0..20 {
            assert_eq!(foraging_factor(50, 50, &mut rng).unwrap(), 0.0);
        }
        assert_eq!(foraging_envelope(0, 10), 2.0);
        // rand = 0.5 at the midpoint gives 0.5
        assert_relative_eq!(0.5 * foraging_envelope(5, 10), 0.5, epsilon = 1e-15);
        assert!(foraging_factor(0, 0, &mut rng).is_err());
        assert!(foraging_factor(11, 10, &mut rng).is_err());
    }

    #[test]
    fn foraging_factor_range() {
        let mut rng = RngStream::new(4);
        for iter in 0..=100 {
            let f = foraging_factor(iter, 100, &mut rng).unwrap();
            assert!((0.0..=2.0).contains(&f));
        }
    }

    #[test]
    fn forage_mode_probability() {
        assert_eq!(prob_forage_mode(0, 10).unwrap(), 1.0);
        assert_eq!(prob_forage_mode(10, 10).unwrap(), 0.0);
        assert_relative_eq!(prob_forage_mode(5, 10).unwrap(), 0.5, epsilon = 1e-15);
        let mut prev = f64::INFINITY;
        for iter in 0..=37 {
            let p = prob_forage_mode(iter, 37).unwrap();
            assert!(p <= prev);
            prev = p;
        }
    }

    #[test]
    fn dormancy_probability() {
        assert_eq!(prob_dormancy(100, 100).unwrap(), 1.0);
        assert_relative_eq!(prob_dormancy(50, 100).unwrap(), 0.5, epsilon = 1e-15);
        // 0.5 * (1 + cos(0.99 pi)), evaluated with mpmath at 50 digits:
        // 0.000246719817134221499654...
        assert_relative_eq!(prob_dormancy(1, 100).unwrap(), 2.467198171342215e-4, max_relative = 1e-9);
        assert!(prob_dormancy(0, 10).is_err());
        assert!(prob_dormancy(11, 10).is_err());
        let mut prev = -1.0;
        for rank in 1..=23 {
            let p = prob_dormancy(rank, 23).unwrap();
            assert!(p >= prev);
            prev = p;
        }
    }

    #[test]
    fn proportion_fraction_range() {
        let mut rng = RngStream::new(9);
        assert_eq!(proportion_fraction(0.0, &mut rng), 0.0);
        for _ in 0..1000 {
            let pf = proportion_fraction(0.1, &mut rng);
            assert!((0.0..=0.1).contains(&pf));
        }
    }

    #[test]
    fn foraging_mask_cardinality() {
        let mut rng = RngStream::new(2);
        assert_eq!(foraging_mask(100, 100, 20, &mut rng), DimMask::ones(20));
        assert_eq!(foraging_mask(1, 100, 20, &mut rng).count(), 1);
        assert_eq!(foraging_mask(50, 100, 20, &mut rng).count(), 10);
    }

    #[test]
    fn reproduction_mask_cardinality() {
        let mut rng = RngStream::recording(5);
        for dim in [1, 2, 7, 20] {
            for _ in 0..50 {
                let mask = reproduction_mask(dim, &mut rng);
                let tape = rng.take_tape();
                let u = match tape[0] {
                    crate::rng::Draw::Uniform(u) => u,
                    ref other => panic!("unexpected draw {other:?}"),
                };
                assert_eq!(mask.count(), (dim as f64 * u).ceil() as usize);
                assert!(mask.count() >= 1);
            }
        }
    }

    #[test]
    fn neighbor_weight_examples() {
        assert_eq!(neighbor_weight(0.0, 3.0), 1.0);
        assert_relative_eq!(neighbor_weight(4.2, 4.2), (-1.0f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(neighbor_weight(2.0, 1.0), (-2.0f64).exp(), max_relative = 1e-14);
        let w = neighbor_weight(1.0, 0.0);
        assert!(w.is_finite() && w >= 0.0);
    }
}
