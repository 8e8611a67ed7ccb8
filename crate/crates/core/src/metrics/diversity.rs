use log::warn;

use crate::space::Population;

/// Mean absolute deviation from the per-dimension median, averaged over
/// dimensions and members. Zero for an empty or collapsed population.
pub fn diversity(pop: &Population) -> f64 {
    let ps = pop.len();
    let dim = pop.dim();
    if ps == 0 || dim == 0 {
        return 0.0;
    }
    let mut column = vec![0.0; ps];
    let mut total = 0.0;
    for d in 0..dim {
        for (slot, member) in column.iter_mut().zip(pop.members()) {
            *slot = member.position[d];
        }
        column.sort_by(f64::total_cmp);
        let median = if ps % 2 == 1 {
            column[ps / 2]
        } else {
            0.5 * (column[ps / 2 - 1] + column[ps / 2])
        };
        total += column.iter().map(|v| (median - v).abs()).sum::<f64>();
    }
    total / (dim * ps) as f64
}

/// Exploration and exploitation rates `(div / div_max, 1 - div / div_max)`.
/// A population that never spread out (`div_max = 0`) counts as pure exploitation.
pub fn explore_exploit_rates(div: f64, div_max: f64) -> (f64, f64) {
    if div_max <= 0.0 {
        warn!("maximum diversity is zero; reporting err = 0, eir = 1");
        return (0.0, 1.0);
    }
    let err = div / div_max;
    (err, 1.0 - err)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityPoint {
    pub div: f64,
    pub div_max: f64,
    pub err: f64,
    pub eir: f64,
}

/// Per-iteration diversity with the running maximum and derived rates.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiversityTrace {
    points: Vec<DiversityPoint>,
}

impl DiversityTrace {
    /// Builds the trace from raw per-iteration diversity values. `div_max` is
    /// taken over the whole run, so rates are relative to the most diverse
    /// generation observed.
    pub fn from_values(values: &[f64]) -> Self {
        let div_max = values.iter().copied().fold(0.0, f64::max);
        let mut running = 0.0f64;
        let points = values
            .iter()
            .map(|&div| {
                running = running.max(div);
                let (err, eir) = explore_exploit_rates(div, div_max);
                DiversityPoint {
                    div,
                    div_max: running,
                    err,
                    eir,
                }
            })
            .collect();
        Self { points }
    }

    pub fn points(&self) -> &[DiversityPoint] {
        &self.points
    }
}
