/// Outcome of one run against a success target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRecord {
    pub success: bool,
    /// Evaluations spent when the target was first met; `Some` iff `success`.
    pub fes_to_feasible: Option<usize>,
    /// Wall-clock seconds until the target was first met (or for the whole run
    /// when it never was).
    pub duration_seconds: f64,
}

impl RunRecord {
    pub fn succeeded(fes: usize, duration_seconds: f64) -> Self {
        Self {
            success: true,
            fes_to_feasible: Some(fes),
            duration_seconds,
        }
    }

    pub fn failed(duration_seconds: f64) -> Self {
        Self {
            success: false,
            fes_to_feasible: None,
            duration_seconds,
        }
    }
}

/// Success rate in percent plus mean evaluations and durations over the
/// successful runs. The means are absent when no run succeeded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilitySummary {
    pub runs: usize,
    pub successes: usize,
    pub sr: f64,
    pub afes: Option<f64>,
    pub acds: Option<f64>,
}

pub fn stability_summary(records: &[RunRecord]) -> StabilitySummary {
    let runs = records.len();
    let ok: Vec<&RunRecord> = records.iter().filter(|r| r.success).collect();
    let successes = ok.len();
    let sr = if runs == 0 {
        0.0
    } else {
        100.0 * successes as f64 / runs as f64
    };
    let (afes, acds) = if successes == 0 {
        (None, None)
    } else {
        let n = successes as f64;
        let fes: f64 = ok.iter().map(|r| r.fes_to_feasible.unwrap_or(0) as f64).sum();
        let secs: f64 = ok.iter().map(|r| r.duration_seconds).sum();
        (Some(fes / n), Some(secs / n))
    };
    StabilitySummary {
        runs,
        successes,
        sr,
        afes,
        acds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_successful() {
        let recs = vec![RunRecord::succeeded(9900, 0.1); 31];
        let s = stability_summary(&recs);
        assert_eq!(s.sr, 100.0);
        assert_eq!(s.afes, Some(9900.0));
    }

    #[test]
    fn no_success_leaves_means_absent() {
        let s = stability_summary(&[RunRecord::failed(1.0); 31]);
        assert_eq!(s.sr, 0.0);
        assert_eq!(s.afes, None);
        assert_eq!(s.acds, None);
    }

    #[test]
    fn two_point_mean() {
        let s = stability_summary(&[
            RunRecord::succeeded(100, 1.0),
            RunRecord::succeeded(300, 3.0),
            RunRecord::failed(10.0),
        ]);
        assert_eq!(s.afes, Some(200.0));
        assert_eq!(s.acds, Some(2.0));
        assert!((s.sr - 200.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn thirty_one_run_protocol() {
        // 23 of 31 successful: 100 * 23 / 31
        let mut recs = vec![RunRecord::succeeded(1000, 0.5); 23];
        recs.extend(vec![RunRecord::failed(0.7); 8]);
        let s = stability_summary(&recs);
        assert_eq!(s.successes, 23);
        assert!((s.sr - 74.193_548_387_096_77).abs() < 1e-9);
    }
}
