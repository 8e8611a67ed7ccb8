//! Analysis toolkit: population diversity, run stability summaries and
//! nonparametric comparisons between algorithms.

mod diversity;
mod friedman;
mod stability;
mod wilcoxon;

pub use diversity::{diversity, explore_exploit_rates, DiversityPoint, DiversityTrace};
pub use friedman::{friedman_mean_ranks, FriedmanRanking, ResultMatrix};
pub use stability::{stability_summary, RunRecord, StabilitySummary};
pub use wilcoxon::{
    exact_p_value, normal_p_value, wilcoxon_signed_rank, Verdict, WilcoxonResult, EXACT_MAX_N,
};
