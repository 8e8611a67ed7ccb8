//! Penalty-based constraint handling and the engineering design problems.
//!
//! A [`ConstrainedProblem`] has an objective, inequality constraints
//! `g_j(x) <= 0` and box bounds. [`penalize`] folds the constraints into the
//! objective as `f(x) + lambda * sum_j max(0, g_j(x))^exponent`.

mod problems;

pub use problems::{
    pressure_vessel_problem, problem, speed_reducer_problem, spring_problem, three_bar_truss_problem,
    welded_beam_problem, PROBLEM_NAMES,
};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::{Bounds, ObjectiveFn};

type ScalarFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type VectorFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// Default tolerance of [`is_feasible`].
pub const FEASIBILITY_TOL: f64 = 1e-6;

/// Violations are capped here so a penalized value never overflows or turns
/// NaN (a NaN constraint value counts as the cap).
const VIOLATION_CAP: f64 = 1e100;

#[derive(Clone)]
pub struct ConstrainedProblem {
    name: String,
    variables: Vec<&'static str>,
    bounds: Bounds,
    objective: Arc<ScalarFn>,
    constraints: Arc<VectorFn>,
    witness: Vec<f64>,
}

impl ConstrainedProblem {
    /// `constraints` returns every `g_j(x)`; the point is feasible when all are `<= 0`.
    /// `witness` must be a feasible point inside the bounds.
    pub fn new<F, G>(
        name: impl Into<String>,
        variables: Vec<&'static str>,
        bounds: Bounds,
        objective: F,
        constraints: G,
        witness: Vec<f64>,
    ) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        if variables.len() != bounds.dim() || witness.len() != bounds.dim() {
            return Err(Error::Dimension {
                expected: bounds.dim(),
                actual: if variables.len() != bounds.dim() {
                    variables.len()
                } else {
                    witness.len()
                },
            });
        }
        let problem = Self {
            name: name.into(),
            variables,
            bounds,
            objective: Arc::new(objective),
            constraints: Arc::new(constraints),
            witness,
        };
        if !problem.bounds.contains(&problem.witness) || !is_feasible(&problem, &problem.witness, 0.0) {
            return Err(Error::Contract(format!(
                "witness of {} is not feasible",
                problem.name
            )));
        }
        Ok(problem)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn variables(&self) -> &[&'static str] {
        &self.variables
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn witness(&self) -> &[f64] {
        &self.witness
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        (self.objective)(x)
    }

    pub fn constraints(&self, x: &[f64]) -> Vec<f64> {
        (self.constraints)(x)
    }

    /// Largest constraint value; positive means infeasible.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.constraints(x).into_iter().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl fmt::Debug for ConstrainedProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstrainedProblem")
            .field("name", &self.name)
            .field("variables", &self.variables)
            .field("bounds", &self.bounds)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyPolicy {
    pub coefficient: f64,
    pub exponent: f64,
}

impl Default for PenaltyPolicy {
    fn default() -> Self {
        Self {
            coefficient: 1e10,
            exponent: 2.0,
        }
    }
}

impl PenaltyPolicy {
    pub fn new(coefficient: f64, exponent: f64) -> Result<Self> {
        if !(coefficient > 0.0 && coefficient.is_finite()) {
            return Err(Error::Parameter(format!(
                "penalty coefficient must be positive, got {coefficient}"
            )));
        }
        if !(exponent >= 1.0 && exponent.is_finite()) {
            return Err(Error::Parameter(format!(
                "penalty exponent must be at least 1, got {exponent}"
            )));
        }
        Ok(Self {
            coefficient,
            exponent,
        })
    }

    /// `lambda * sum_j max(0, g_j)^exponent`.
    pub fn penalty(&self, constraint_values: &[f64]) -> f64 {
        let total: f64 = constraint_values
            .iter()
            .map(|&g| {
                let v = if g.is_nan() { VIOLATION_CAP } else { g.clamp(0.0, VIOLATION_CAP) };
                if v == 0.0 {
                    0.0
                } else {
                    v.powf(self.exponent)
                }
            })
            .sum();
        self.coefficient * total
    }
}

/// Unconstrained surrogate of `problem`. Equals the raw objective wherever every
/// constraint holds.
pub fn penalize(problem: &ConstrainedProblem, policy: PenaltyPolicy) -> ObjectiveFn {
    let p = problem.clone();
    ObjectiveFn::new(problem.name.clone(), problem.bounds.clone(), move |x| {
        let g = p.constraints(x);
        let f = p.objective(x);
        let penalty = policy.penalty(&g);
        if penalty == 0.0 {
            f
        } else {
            f + penalty
        }
    })
}

/// True when every constraint value is at most `tol`.
pub fn is_feasible(problem: &ConstrainedProblem, x: &[f64], tol: f64) -> bool {
    problem.constraints(x).iter().all(|&g| g <= tol)
}
