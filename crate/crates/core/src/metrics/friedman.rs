use crate::error::{Error, Result};

/// Mean results, one row per problem and one column per algorithm. Lower is better.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultMatrix {
    algorithms: Vec<String>,
    problems: Vec<String>,
    values: Vec<Vec<f64>>,
}

impl ResultMatrix {
    pub fn new(algorithms: Vec<String>, problems: Vec<String>, values: Vec<Vec<f64>>) -> Result<Self> {
        if algorithms.len() < 2 {
            return Err(Error::Input("need at least two algorithms".into()));
        }
        if problems.is_empty() || problems.len() != values.len() {
            return Err(Error::Input(format!(
                "{} problem names for {} rows",
                problems.len(),
                values.len()
            )));
        }
        for (name, row) in problems.iter().zip(&values) {
            if row.len() != algorithms.len() {
                return Err(Error::Input(format!(
                    "row {name} has {} entries, expected {}",
                    row.len(),
                    algorithms.len()
                )));
            }
            if row.iter().any(|v| v.is_nan()) {
                return Err(Error::Input(format!("row {name} has a missing entry")));
            }
        }
        Ok(Self {
            algorithms,
            problems,
            values,
        })
    }

    pub fn algorithms(&self) -> &[String] {
        &self.algorithms
    }

    pub fn problems(&self) -> &[String] {
        &self.problems
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }
}

/// Per-problem ranks, their means and the final standing of each algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct FriedmanRanking {
    pub per_problem: Vec<Vec<f64>>,
    pub mean_ranks: Vec<f64>,
    /// Competition ranking of the mean ranks: equal means share a place and the
    /// next place is skipped (1, 2, 2, 4).
    pub standing: Vec<usize>,
}

/// Ascending ranks with ties sharing the average of the positions they span.
pub(crate) fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end share their average
        let shared = (start + 1 + end) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = shared;
        }
        start = end;
    }
    ranks
}

pub fn friedman_mean_ranks(m: &ResultMatrix) -> FriedmanRanking {
    let per_problem: Vec<Vec<f64>> = m.values.iter().map(|row| average_ranks(row)).collect();
    let n = per_problem.len() as f64;
    let mean_ranks: Vec<f64> = (0..m.algorithms.len())
        .map(|a| per_problem.iter().map(|row| row[a]).sum::<f64>() / n)
        .collect();
    // Means are compared after rounding away accumulated float noise so that
    // e.g. 17.5/5 and 3.5 land on the same place.
    let key = |v: f64| (v * 1e9).round();
    let standing = mean_ranks
        .iter()
        .map(|&r| 1 + mean_ranks.iter().filter(|&&o| key(o) < key(r)).count())
        .collect();
    FriedmanRanking {
        per_problem,
        mean_ranks,
        standing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|k| format!("{prefix}{k}")).collect()
    }

    #[test]
    fn average_rank_ties() {
        assert_eq!(average_ranks(&[3.0, 1.0, 2.0]), vec![3.0, 1.0, 2.0]);
        assert_eq!(average_ranks(&[1.0, 1.0, 5.0]), vec![1.5, 1.5, 3.0]);
        assert_eq!(average_ranks(&[2.0, 2.0, 2.0]), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn dominating_algorithm_ranks_first() {
        let m = ResultMatrix::new(
            names("a", 3),
            names("p", 4),
            vec![
                vec![0.0, 1.0, 2.0],
                vec![0.5, 0.7, 0.6],
                vec![-3.0, 1.0, 1.0],
                vec![1.0, 9.0, 2.0],
            ],
        )
        .unwrap();
        let r = friedman_mean_ranks(&m);
        assert_eq!(r.mean_ranks[0], 1.0);
        assert_eq!(r.standing[0], 1);
        let mean: f64 = r.mean_ranks.iter().sum::<f64>() / 3.0;
        assert!((mean - 2.0).abs() < 1e-12);
    }

    #[test]
    fn shared_standing() {
        let m = ResultMatrix::new(names("a", 3), names("p", 1), vec![vec![1.0, 1.0, 2.0]]).unwrap();
        let r = friedman_mean_ranks(&m);
        assert_eq!(r.mean_ranks, vec![1.5, 1.5, 3.0]);
        assert_eq!(r.standing, vec![1, 1, 3]);
    }

    #[test]
    fn rejects_ragged_or_small_input() {
        assert!(ResultMatrix::new(names("a", 1), names("p", 1), vec![vec![1.0]]).is_err());
        assert!(ResultMatrix::new(names("a", 2), names("p", 1), vec![vec![1.0]]).is_err());
        assert!(ResultMatrix::new(names("a", 2), names("p", 2), vec![vec![1.0, 2.0]]).is_err());
        assert!(ResultMatrix::new(names("a", 2), names("p", 1), vec![vec![1.0, f64::NAN]]).is_err());
    }
}
