//! Search-space primitives shared by every optimizer and problem: bounds,
//! candidates, populations and the objective-function contract.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Axis-aligned box `[lower, upper]` with `lower[d] < upper[d]` in every dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::Bounds("dimension must be at least 1".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::Dimension {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        for (d, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::Bounds(format!(
                    "dimension {d}: lower {lo} must be finite and below upper {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same interval `[lo, hi]` repeated `dim` times.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    /// `lower + Rand ⊙ (upper - lower)`, one fresh uniform per dimension.
    pub fn sample(&self, rng: &mut RngStream) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| lo + rng.uniform() * (hi - lo))
            .collect()
    }
}

/// Clips every component onto its bound. In-range components are returned untouched.
pub fn clamp_to_bounds(position: &[f64], bounds: &Bounds) -> Result<Vec<f64>> {
    if position.len() != bounds.dim() {
        return Err(Error::Dimension {
            expected: bounds.dim(),
            actual: position.len(),
        });
    }
    Ok(position
        .iter()
        .zip(bounds.lower.iter().zip(&bounds.upper))
        .map(|(&v, (&lo, &hi))| hi.min(lo.max(v)))
        .collect())
}

/// A position with its cached objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub position: Vec<f64>,
    pub fitness: f64,
}

impl Candidate {
    pub fn new(position: Vec<f64>, fitness: f64) -> Self {
        Self { position, fitness }
    }
}

/// Fixed-size collection of candidates. When `is_sorted()` holds, members are in
/// ascending fitness order and member `k` has rank `k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Candidate>,
    sorted: bool,
}

impl Population {
    pub fn new(members: Vec<Candidate>) -> Self {
        Self {
            members,
            sorted: false,
        }
    }

    /// Positions with fitness left at `+inf` until [`evaluate`] runs.
    pub fn from_positions(positions: Vec<Vec<f64>>) -> Self {
        Self::new(
            positions
                .into_iter()
                .map(|p| Candidate::new(p, f64::INFINITY))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    pub fn members(&self) -> &[Candidate] {
        &self.members
    }

    /// Member by 1-based rank. Only meaningful on a sorted population.
    pub fn by_rank(&self, rank: usize) -> &Candidate {
        &self.members[rank - 1]
    }

    pub fn best(&self) -> Option<&Candidate> {
        self.members
            .iter()
            .min_by(|a, b| a.fitness.total_cmp(&b.fitness))
    }

    pub fn dim(&self) -> usize {
        self.members.first().map_or(0, |c| c.position.len())
    }

    /// Replaces member `k` (0-based slot). Clears the sorted flag.
    pub fn replace(&mut self, k: usize, candidate: Candidate) {
        self.members[k] = candidate;
        self.sorted = false;
    }

    pub fn into_members(self) -> Vec<Candidate> {
        self.members
    }
}

/// Stable ascending sort by fitness; ties keep their input order.
pub fn sort_population(mut pop: Population) -> Result<Population> {
    if let Some(bad) = pop.members.iter().find(|c| c.fitness.is_nan()) {
        return Err(Error::InvalidFitness {
            position: bad.position.clone(),
        });
    }
    pop.members.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
    pop.sorted = true;
    Ok(pop)
}

type Evaluator = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// A named, bounded, deterministic objective to be minimized.
#[derive(Clone)]
pub struct ObjectiveFn {
    name: String,
    bounds: Bounds,
    evaluator: Arc<Evaluator>,
}

impl ObjectiveFn {
    pub fn new<F>(name: impl Into<String>, bounds: Bounds, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            bounds,
            evaluator: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    /// Raw evaluation, no budget accounting.
    pub fn call(&self, x: &[f64]) -> f64 {
        (self.evaluator)(x)
    }

    /// Evaluates `x`, counting one evaluation against `fes`. NaN is an error.
    pub fn evaluate(&self, x: &[f64], fes: &mut usize) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        let value = self.call(x);
        *fes += 1;
        if value.is_nan() {
            return Err(Error::InvalidFitness {
                position: x.to_vec(),
            });
        }
        Ok(value)
    }
}

impl fmt::Debug for ObjectiveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveFn")
            .field("name", &self.name)
            .field("bounds", &self.bounds)
            .finish_non_exhaustive()
    }
}

/// Refreshes every fitness cache. `fes` grows by exactly the population size.
pub fn evaluate(mut pop: Population, objective: &ObjectiveFn, fes: &mut usize) -> Result<Population> {
    for member in &mut pop.members {
        member.fitness = objective.evaluate(&member.position, fes)?;
    }
    pop.sorted = false;
    Ok(pop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(dim: usize) -> Bounds {
        Bounds::uniform(dim, 0.0, 1.0).unwrap()
    }

    fn sphere() -> ObjectiveFn {
        ObjectiveFn::new("sphere", Bounds::uniform(2, -5.0, 5.0).unwrap(), |x| {
            x.iter().map(|v| v * v).sum()
        })
    }

    fn with_fitness(values: &[f64]) -> Population {
        Population::new(
            values
                .iter()
                .enumerate()
                .map(|(k, &f)| Candidate::new(vec![k as f64], f))
                .collect(),
        )
    }

    #[test]
    fn bounds_reject_bad_input() {
        assert!(Bounds::new(vec![], vec![]).is_err());
        assert!(Bounds::new(vec![1.0], vec![1.0]).is_err());
        assert!(Bounds::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(Bounds::new(vec![f64::NEG_INFINITY], vec![0.0]).is_err());
    }

    #[test]
    fn clamp_examples() {
        let b = unit(2);
        assert_eq!(clamp_to_bounds(&[0.5, 0.5], &b).unwrap(), vec![0.5, 0.5]);
        assert_eq!(clamp_to_bounds(&[-3.0, 2.0], &b).unwrap(), vec![0.0, 1.0]);
        assert_eq!(clamp_to_bounds(&[1.0], &unit(1)).unwrap(), vec![1.0]);
        assert!(matches!(
            clamp_to_bounds(&[0.1], &b),
            Err(Error::Dimension { expected: 2, actual: 1 })
        ));
    }

    #[test]
    fn sort_examples() {
        let sorted = sort_population(with_fitness(&[3.0, 1.0, 2.0])).unwrap();
        let order: Vec<f64> = sorted.members().iter().map(|c| c.position[0]).collect();
        assert_eq!(order, vec![1.0, 2.0, 0.0]);
        assert!(sorted.is_sorted());

        let ties = sort_population(with_fitness(&[5.0, 5.0, 1.0])).unwrap();
        let order: Vec<f64> = ties.members().iter().map(|c| c.position[0]).collect();
        assert_eq!(order, vec![2.0, 0.0, 1.0]);

        let again = sort_population(sorted.clone()).unwrap();
        assert_eq!(again, sorted);
    }

    #[test]
    fn sort_rejects_nan() {
        let err = sort_population(with_fitness(&[1.0, f64::NAN])).unwrap_err();
        assert!(matches!(err, Error::InvalidFitness { .. }));
    }

    #[test]
    fn evaluate_counts_and_caches() {
        let pop = Population::from_positions(vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
        let mut fes = 0;
        let pop = evaluate(pop, &sphere(), &mut fes).unwrap();
        assert_eq!(fes, 2);
        let f: Vec<f64> = pop.members().iter().map(|c| c.fitness).collect();
        assert_eq!(f, vec![0.0, 2.0]);

        let empty = evaluate(Population::new(vec![]), &sphere(), &mut fes).unwrap();
        assert!(empty.is_empty());
        assert_eq!(fes, 2);
    }

    #[test]
    fn evaluate_hundred_members_costs_hundred() {
        let positions = (0..100).map(|k| vec![k as f64 / 100.0, 0.0]).collect();
        let mut fes = 0;
        let pop = evaluate(Population::from_positions(positions), &sphere(), &mut fes).unwrap();
        assert_eq!(fes, 100);
        assert_eq!(pop.len(), 100);
    }

    #[test]
    fn evaluate_reports_nan_position() {
        let bad = ObjectiveFn::new("nan", unit(1), |_| f64::NAN);
        let mut fes = 0;
        match evaluate(Population::from_positions(vec![vec![0.25]]), &bad, &mut fes) {
            Err(Error::InvalidFitness { position }) => assert_eq!(position, vec![0.25]),
            other => panic!("unexpected {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn clamp_is_idempotent_and_contained(xs in proptest::collection::vec(-10.0f64..10.0, 3)) {
            let b = Bounds::new(vec![-1.0, 0.0, 2.0], vec![1.0, 0.5, 3.0]).unwrap();
            let once = clamp_to_bounds(&xs, &b).unwrap();
            let twice = clamp_to_bounds(&once, &b).unwrap();
            prop_assert_eq!(&once, &twice);
            prop_assert!(b.contains(&once));
            for (x, c) in xs.iter().zip(&once) {
                if b.contains(&xs) { prop_assert_eq!(x.to_bits(), c.to_bits()); }
            }
        }

        #[test]
        fn sort_is_a_stable_permutation(fs in proptest::collection::vec(0u8..5, 0..30)) {
            let values: Vec<f64> = fs.iter().map(|&v| v as f64).collect();
            let sorted = sort_population(with_fitness(&values)).unwrap();
            prop_assert_eq!(sorted.len(), values.len());
            let m = sorted.members();
            for w in m.windows(2) {
                prop_assert!(w[0].fitness <= w[1].fitness);
                if w[0].fitness == w[1].fitness {
                    prop_assert!(w[0].position[0] < w[1].position[0]);
                }
            }
        }
    }
}
