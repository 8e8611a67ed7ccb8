//! Experiment runners behind the `apo` binary.
//!
//! Every command writes CSV files plus a `manifest.json` (tool version,
//! resolved config, seeds, file list) into its output directory. Floats are
//! printed with 17 significant digits. Reruns with the same config produce
//! byte-identical files, except `timing.csv`, which holds wall-clock durations.
//!
//! CSV layouts (schema 1):
//!
//! | file | columns |
//! |------|---------|
//! | per-run trace | `iter,fes,best,div,err,eir` |
//! | `results.csv` | `algorithm,problem,run,seed,value` |
//! | bench `summary.csv` | `function,algorithm,dim,repeats,max_fes,mean,std,best,worst` |
//! | engineering `summary.csv` | `problem,algorithm,repeats,best,mean,std,worst,feasible_runs` |
//! | `*_best.csv` | `variable,value` plus `objective`, `max_violation`, `feasible`, `seed` rows |
//! | `stability.csv` | `problem,algorithm,target,runs,successes,sr,afes` |
//! | `timing.csv` | `problem,algorithm,acds` |
//! | segment `metrics.csv` | `n,run,seed,psnr,ssim,mcet_r,mcet_g,mcet_b` |
//! | `thresholds.csv` | `n,run,channel,k,t_k,gray` (`t_k` is the 1-based level, `gray = t_k - 1`) |
//! | segment `summary.csv` | `n,best_run,psnr,ssim` |
//! | `ranks.csv` | `algorithm,mean_rank,standing` |
//! | `wilcoxon.csv` | `problem,algorithm_a,algorithm_b,n,r_plus,r_minus,p_value,verdict` |

mod config;
mod output;
mod runners;

pub use config::{load_targets, Algorithm, CommandKind, ConfigLayer, ExperimentConfig};
pub use output::{fmt_f64, mean_std, parallel_map, parse_f64, OutputDir, CSV_SCHEMA, TIMING_FILES};
pub use runners::{parse_results, run_bench, run_engineering, run_segment, run_stats, trace_csv, ResultRow};

use crate::error::Result;

/// Dispatches a resolved config to its runner.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<String>> {
    match cfg.command {
        CommandKind::Bench => run_bench(cfg),
        CommandKind::Engineering => run_engineering(cfg),
        CommandKind::Segment => run_segment(cfg),
    }
}
