//! Unconstrained test functions and a generic shift/rotation wrapper.
//!
//! The base forms are the classical definitions behind the first five CEC2022
//! functions (Zakharov, Rosenbrock, expanded Schaffer F6, non-continuous
//! Rastrigin, Levy) plus sphere, Ackley and Griewank. A [`Transform`] evaluates
//! `base(M (x - o)) + bias`.

use std::f64::consts::{E, PI};
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::space::{Bounds, ObjectiveFn};

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn zakharov(x: &[f64]) -> f64 {
    let squares: f64 = x.iter().map(|v| v * v).sum();
    let weighted: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| 0.5 * (i + 1) as f64 * v)
        .sum();
    squares + weighted.powi(2) + weighted.powi(4)
}

/// Needs at least two dimensions.
pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

fn schaffer_f6_pair(a: f64, b: f64) -> f64 {
    let r2 = a * a + b * b;
    0.5 + (r2.sqrt().sin().powi(2) - 0.5) / (1.0 + 0.001 * r2).powi(2)
}

/// Schaffer F6 summed over consecutive pairs, wrapping the last coordinate
/// back to the first. Needs at least two dimensions.
pub fn expanded_schaffer_f6(x: &[f64]) -> f64 {
    let n = x.len();
    (0..n).map(|i| schaffer_f6_pair(x[i], x[(i + 1) % n])).sum()
}

/// Rastrigin on `y`, where `y_d = x_d` if `|x_d| <= 0.5` and `round(2 x_d) / 2` otherwise.
pub fn rastrigin_noncont(x: &[f64]) -> f64 {
    x.iter()
        .map(|&v| {
            let y = if v.abs() <= 0.5 { v } else { (2.0 * v).round() / 2.0 };
            y * y - 10.0 * (2.0 * PI * y).cos() + 10.0
        })
        .sum()
}

pub fn levy(x: &[f64]) -> f64 {
    let w: Vec<f64> = x.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
    let n = w.len();
    let head = (PI * w[0]).sin().powi(2);
    let body: f64 = w[..n - 1]
        .iter()
        .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
        .sum();
    let last = w[n - 1];
    let tail = (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
    head + body + tail
}

pub fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
}

pub fn griewank(x: &[f64]) -> f64 {
    let sum = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    sum - prod + 1.0
}

/// Shift vector, orthonormal rotation and additive bias.
#[derive(Debug, Clone, PartialEq)]
pub struct Transform {
    shift: Vec<f64>,
    rotation: Vec<Vec<f64>>,
    bias: f64,
}

const ORTHONORMAL_TOL: f64 = 1e-6;

impl Transform {
    pub fn new(shift: Vec<f64>, rotation: Vec<Vec<f64>>, bias: f64) -> Result<Self> {
        let dim = shift.len();
        if dim == 0 {
            return Err(Error::Transform("empty shift vector".into()));
        }
        if rotation.len() != dim || rotation.iter().any(|r| r.len() != dim) {
            return Err(Error::Transform(format!("rotation must be {dim}x{dim}")));
        }
        for i in 0..dim {
            for j in 0..dim {
                let dot: f64 = (0..dim).map(|k| rotation[k][i] * rotation[k][j]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                if (dot - expected).abs() > ORTHONORMAL_TOL {
                    return Err(Error::Transform(format!(
                        "rotation is not orthonormal: (M^T M)[{i}][{j}] = {dot}"
                    )));
                }
            }
        }
        Ok(Self {
            shift,
            rotation,
            bias,
        })
    }

    pub fn identity(dim: usize) -> Self {
        let rotation = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self {
            shift: vec![0.0; dim],
            rotation,
            bias: 0.0,
        }
    }

    /// Random shift inside `[-shift_range, shift_range]` and a random rotation,
    /// obtained by Gram-Schmidt orthonormalization of a seeded uniform matrix.
    pub fn synthetic(dim: usize, shift_range: f64, seed: u64) -> Self {
        let mut rng = RngStream::new(seed);
        let shift = (0..dim)
            .map(|_| shift_range * (2.0 * rng.uniform() - 1.0))
            .collect();
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(dim);
        while rows.len() < dim {
            let mut v: Vec<f64> = (0..dim).map(|_| 2.0 * rng.uniform() - 1.0).collect();
            for r in &rows {
                let dot: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
                for (vi, ri) in v.iter_mut().zip(r) {
                    *vi -= dot * ri;
                }
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm > 1e-8 {
                rows.push(v.into_iter().map(|a| a / norm).collect());
            }
        }
        Self {
            shift,
            rotation: rows,
            bias: 0.0,
        }
    }

    pub fn with_bias(mut self, bias: f64) -> Self {
        self.bias = bias;
        self
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    /// `M (x - o)`.
    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let centered: Vec<f64> = x.iter().zip(&self.shift).map(|(a, o)| a - o).collect();
        self.rotation
            .iter()
            .map(|row| row.iter().zip(&centered).map(|(m, c)| m * c).sum())
            .collect()
    }

    /// Inverse of [`Transform::forward`]: `o + M^T z`.
    pub fn backward(&self, z: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|j| self.shift[j] + (0..self.dim()).map(|i| self.rotation[i][j] * z[i]).sum::<f64>())
            .collect()
    }

    /// Parses the text format: dimension, shift values, then one rotation row
    /// per line, all whitespace separated.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let numbers = |line: &str| -> Result<Vec<f64>> {
            line.split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|e| Error::Transform(format!("bad number {t:?}: {e}")))
                })
                .collect()
        };
        let dim: usize = lines
            .next()
            .ok_or_else(|| Error::Transform("missing dimension line".into()))?
            .parse()
            .map_err(|e| Error::Transform(format!("bad dimension: {e}")))?;
        let shift = numbers(lines.next().ok_or_else(|| Error::Transform("missing shift line".into()))?)?;
        if shift.len() != dim {
            return Err(Error::Transform(format!("shift has {} values, expected {dim}", shift.len())));
        }
        let rotation = (0..dim)
            .map(|i| {
                let row = numbers(
                    lines
                        .next()
                        .ok_or_else(|| Error::Transform(format!("missing rotation row {i}")))?,
                )?;
                if row.len() != dim {
                    return Err(Error::Transform(format!(
                        "rotation row {i} has {} values, expected {dim}",
                        row.len()
                    )));
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(shift, rotation, 0.0)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Writes the text format with 17 significant digits.
    pub fn to_text(&self) -> String {
        let row = |v: &[f64]| v.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(" ");
        let mut out = format!("{}\n{}\n", self.dim(), row(&self.shift));
        for r in &self.rotation {
            out.push_str(&row(r));
            out.push('\n');
        }
        out
    }
}

type BaseFn = fn(&[f64]) -> f64;

/// A registered test function: base evaluator, optional transform and the known
/// minimum.
#[derive(Clone)]
pub struct BenchFunction {
    name: &'static str,
    dim: usize,
    base: BaseFn,
    base_minimizer: f64,
    transform: Option<Transform>,
}

/// Names accepted by [`benchmark`].
pub const BENCHMARK_NAMES: [&str; 8] = [
    "zakharov",
    "rosenbrock",
    "schaffer_f6",
    "rastrigin_noncont",
    "levy",
    "sphere",
    "ackley",
    "griewank",
];

/// Search range used for every benchmark.
pub const SEARCH_RANGE: (f64, f64) = (-100.0, 100.0);

fn lookup(name: &str) -> Option<(&'static str, BaseFn, usize, f64)> {
    Some(match name {
        "zakharov" => ("zakharov", zakharov as BaseFn, 1, 0.0),
        "rosenbrock" => ("rosenbrock", rosenbrock, 2, 1.0),
        "schaffer_f6" | "expanded_schaffer_f6" => ("schaffer_f6", expanded_schaffer_f6, 2, 0.0),
        "rastrigin_noncont" => ("rastrigin_noncont", rastrigin_noncont, 1, 0.0),
        "levy" => ("levy", levy, 1, 1.0),
        "sphere" => ("sphere", sphere, 1, 0.0),
        "ackley" => ("ackley", ackley, 1, 0.0),
        "griewank" => ("griewank", griewank, 1, 0.0),
        _ => return None,
    })
}

/// Looks a benchmark up by name for the given dimension.
pub fn benchmark(name: &str, dim: usize) -> Result<BenchFunction> {
    let (name, base, min_dim, base_minimizer) = lookup(name).ok_or_else(|| {
        Error::Config(format!(
            "unknown function {name:?}; valid names: {}",
            BENCHMARK_NAMES.join(", ")
        ))
    })?;
    if dim < min_dim {
        return Err(Error::Dimension {
            expected: min_dim,
            actual: dim,
        });
    }
    Ok(BenchFunction {
        name,
        dim,
        base,
        base_minimizer,
        transform: None,
    })
}

impl BenchFunction {
    pub fn with_transform(mut self, transform: Transform) -> Result<Self> {
        if transform.dim() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                actual: transform.dim(),
            });
        }
        self.transform = Some(transform);
        Ok(self)
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn transform(&self) -> Option<&Transform> {
        self.transform.as_ref()
    }

    /// Known global minimum value (bias included).
    pub fn minimum(&self) -> f64 {
        self.transform.as_ref().map_or(0.0, Transform::bias)
    }

    pub fn minimizer(&self) -> Vec<f64> {
        let base = vec![self.base_minimizer; self.dim];
        match &self.transform {
            Some(t) => t.backward(&base),
            None => base,
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                actual: x.len(),
            });
        }
        Ok(apply_transform(self, x))
    }

    pub fn objective(&self) -> ObjectiveFn {
        let bounds = Bounds::uniform(self.dim, SEARCH_RANGE.0, SEARCH_RANGE.1)
            .expect("benchmark range is valid");
        let f = self.clone();
        ObjectiveFn::new(self.name, bounds, move |x| apply_transform(&f, x))
    }
}

impl fmt::Debug for BenchFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BenchFunction")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("transform", &self.transform)
            .finish()
    }
}

/// `base(M (x - o)) + bias`, or the bare base function without a transform.
pub fn apply_transform(f: &BenchFunction, x: &[f64]) -> f64 {
    match &f.transform {
        Some(t) => (f.base)(&t.forward(x)) + t.bias,
        None => (f.base)(x),
    }
}
