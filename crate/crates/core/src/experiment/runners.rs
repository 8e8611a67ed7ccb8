use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use log::{info, warn};

use super::config::{Algorithm, CommandKind, ExperimentConfig};
use super::output::{fmt_f64, fmt_opt, mean_std, parallel_map, parse_f64, OutputDir};
use crate::apo::{optimize, optimize_observed, ApoResult, TraceRecord};
use crate::baseline::{random_search, random_search_observed};
use crate::bench::{benchmark, BenchFunction, Transform};
use crate::constraints::{is_feasible, penalize, problem, PenaltyPolicy, FEASIBILITY_TOL};
use crate::error::{Error, Result};
use crate::metrics::{
    friedman_mean_ranks, stability_summary, wilcoxon_signed_rank, DiversityTrace, ResultMatrix,
    RunRecord,
};
use crate::segmentation::{psnr, read_ppm, segment_rgb, ssim, write_ppm, SSIM_WINDOW};
use crate::space::{Candidate, ObjectiveFn};

/// `iter,fes,best,div,err,eir`, with rates relative to the run's peak diversity.
pub fn trace_csv(trace: &[TraceRecord]) -> String {
    let divs: Vec<f64> = trace.iter().map(|r| r.diversity).collect();
    let rates = DiversityTrace::from_values(&divs);
    let mut out = String::from("iter,fes,best,div,err,eir\n");
    for (r, p) in trace.iter().zip(rates.points()) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.iter,
            r.fes,
            fmt_f64(r.best),
            fmt_f64(p.div),
            fmt_f64(p.err),
            fmt_f64(p.eir)
        );
    }
    out
}

fn run_algorithm(algo: Algorithm, objective: &ObjectiveFn, cfg: &ExperimentConfig, seed: u64) -> Result<ApoResult> {
    match algo {
        Algorithm::Apo => optimize(objective, &cfg.params()?, seed),
        Algorithm::Random => random_search(objective, cfg.max_fes, seed),
    }
}

fn seeds(cfg: &ExperimentConfig) -> Vec<u64> {
    (0..cfg.repeats).map(|k| cfg.run_seed(k)).collect()
}

/// Long-format result table shared with the `stats` command.
const RESULTS_HEADER: &str = "algorithm,problem,run,seed,value\n";

fn bench_function(cfg: &ExperimentConfig, name: &str) -> Result<BenchFunction> {
    let f = benchmark(name, cfg.dim)?;
    match &cfg.transform {
        Some(path) => f.with_transform(Transform::load(path)?.with_bias(cfg.bias)),
        None if cfg.bias != 0.0 => f.with_transform(Transform::identity(cfg.dim).with_bias(cfg.bias)),
        None => Ok(f),
    }
}

/// Runs every (function, algorithm, repeat) and writes per-run traces, a
/// summary and the long result table. Returns the files written.
pub fn run_bench(cfg: &ExperimentConfig) -> Result<Vec<String>> {
    let functions = cfg
        .names
        .iter()
        .map(|n| bench_function(cfg, n))
        .collect::<Result<Vec<_>>>()?;
    let mut out = OutputDir::create(&cfg.out)?;
    let seeds = seeds(cfg);
    let mut summary = String::from("function,algorithm,dim,repeats,max_fes,mean,std,best,worst\n");
    let mut results = String::from(RESULTS_HEADER);
    for f in &functions {
        let objective = f.objective();
        for &algo in &cfg.algorithms {
            let runs = parallel_map(&seeds, |&seed| run_algorithm(algo, &objective, cfg, seed));
            let mut finals = Vec::with_capacity(runs.len());
            for (k, run) in runs.into_iter().enumerate() {
                let run = run?;
                out.write(
                    &format!("bench/{}_{}_run{k:03}.csv", f.name(), algo.as_str()),
                    trace_csv(&run.trace),
                )?;
                let _ = writeln!(results, "{},{},{k},{},{}", algo.as_str(), f.name(), seeds[k], fmt_f64(run.best.fitness));
                finals.push(run.best.fitness);
            }
            let (mean, std) = mean_std(&finals);
            let best = finals.iter().copied().fold(f64::INFINITY, f64::min);
            let worst = finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let _ = writeln!(
                summary,
                "{},{},{},{},{},{},{},{},{}",
                f.name(),
                algo.as_str(),
                cfg.dim,
                cfg.repeats,
                cfg.max_fes,
                fmt_f64(mean),
                fmt_f64(std),
                fmt_f64(best),
                fmt_f64(worst)
            );
            info!("{} / {}: mean {mean:e}, best {best:e}", f.name(), algo.as_str());
        }
    }
    out.write("summary.csv", summary)?;
    out.write("results.csv", results)?;
    out.finish(CommandKind::Bench.as_str(), cfg, &seeds, Vec::new())
}

struct EngineeringRun {
    result: ApoResult,
    record: Option<RunRecord>,
}

fn engineering_run(
    algo: Algorithm,
    objective: &ObjectiveFn,
    cfg: &ExperimentConfig,
    seed: u64,
    success: impl Fn(&Candidate) -> bool,
    track: bool,
) -> Result<EngineeringRun> {
    let start = Instant::now();
    let mut reached: Option<(usize, f64)> = None;
    let mut check = |rec: &TraceRecord, best: &Candidate| {
        if track && reached.is_none() && success(best) {
            reached = Some((rec.fes, start.elapsed().as_secs_f64()));
        }
    };
    let result = match algo {
        Algorithm::Apo => optimize_observed(objective, &cfg.params()?, seed, |rec, pop| {
            if let Some(best) = pop.best() {
                check(rec, best);
            }
        })?,
        Algorithm::Random => random_search_observed(objective, cfg.max_fes, seed, |rec, best| check(rec, best))?,
    };
    let elapsed = start.elapsed().as_secs_f64();
    let record = track.then(|| match reached {
        Some((fes, secs)) => RunRecord::succeeded(fes, secs),
        None => RunRecord::failed(elapsed),
    });
    Ok(EngineeringRun { result, record })
}

/// Runs the engineering problems. Writes per-run traces, best designs, a
/// summary, stability rates against the configured targets and, separately,
/// the wall-clock durations.
pub fn run_engineering(cfg: &ExperimentConfig) -> Result<Vec<String>> {
    let problems = cfg.names.iter().map(|n| problem(n)).collect::<Result<Vec<_>>>()?;
    let policy = PenaltyPolicy::new(cfg.penalty_lambda, 2.0).map_err(|e| Error::Config(e.to_string()))?;
    let mut out = OutputDir::create(&cfg.out)?;
    let seeds = seeds(cfg);
    let mut notes = Vec::new();
    if cfg.targets.is_none() {
        notes.push("no targets configured; stability section skipped".to_string());
        info!("no targets configured; stability section skipped");
    }

    let mut summary = String::from("problem,algorithm,repeats,best,mean,std,worst,feasible_runs\n");
    let mut stability = String::from("problem,algorithm,target,runs,successes,sr,afes\n");
    let mut timing = String::from("problem,algorithm,acds\n");
    let mut results = String::from(RESULTS_HEADER);
    for p in &problems {
        let objective = penalize(p, policy);
        let target = cfg.targets.as_ref().and_then(|t| t.get(p.name()).copied());
        if cfg.targets.is_some() && target.is_none() {
            notes.push(format!("no target for {}; stability skipped", p.name()));
        }
        let success = |c: &Candidate| {
            target.is_some_and(|t| p.objective(&c.position) <= t && is_feasible(p, &c.position, FEASIBILITY_TOL))
        };
        for &algo in &cfg.algorithms {
            let runs = parallel_map(&seeds, |&seed| {
                engineering_run(algo, &objective, cfg, seed, success, target.is_some())
            });
            let mut finals = Vec::with_capacity(runs.len());
            let mut records = Vec::new();
            let mut best: Option<(usize, Candidate)> = None;
            let mut feasible_runs = 0;
            for (k, run) in runs.into_iter().enumerate() {
                let run = run?;
                let tag = format!("engineering/{}_{}_run{k:03}.csv", p.name(), algo.as_str());
                out.write(&tag, trace_csv(&run.result.trace))?;
                let x = &run.result.best.position;
                let f = p.objective(x);
                let feasible = is_feasible(p, x, FEASIBILITY_TOL);
                if feasible {
                    feasible_runs += 1;
                }
                let _ = writeln!(results, "{},{},{k},{},{}", algo.as_str(), p.name(), seeds[k], fmt_f64(run.result.best.fitness));
                finals.push(f);
                if best.as_ref().is_none_or(|(_, b)| run.result.best.fitness < b.fitness) {
                    best = Some((k, run.result.best.clone()));
                }
                records.extend(run.record);
            }
            let (k_best, best) = best.expect("at least one repeat");
            let feasible = is_feasible(p, &best.position, FEASIBILITY_TOL);
            if !feasible {
                warn!("{} / {}: best design is infeasible", p.name(), algo.as_str());
                notes.push(format!("{} / {}: best design is infeasible", p.name(), algo.as_str()));
            }
            let mut design = String::from("variable,value\n");
            for (name, v) in p.variables().iter().zip(&best.position) {
                let _ = writeln!(design, "{name},{}", fmt_f64(*v));
            }
            let _ = writeln!(design, "objective,{}", fmt_f64(p.objective(&best.position)));
            let _ = writeln!(design, "max_violation,{}", fmt_f64(p.max_violation(&best.position)));
            let _ = writeln!(design, "feasible,{}", u8::from(feasible));
            let _ = writeln!(design, "seed,{}", seeds[k_best]);
            out.write(&format!("engineering/{}_{}_best.csv", p.name(), algo.as_str()), design)?;

            let (mean, std) = mean_std(&finals);
            let worst = finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let _ = writeln!(
                summary,
                "{},{},{},{},{},{},{},{feasible_runs}",
                p.name(),
                algo.as_str(),
                cfg.repeats,
                fmt_f64(p.objective(&best.position)),
                fmt_f64(mean),
                fmt_f64(std),
                fmt_f64(worst)
            );
            if let Some(t) = target {
                let s = stability_summary(&records);
                let _ = writeln!(
                    stability,
                    "{},{},{},{},{},{},{}",
                    p.name(),
                    algo.as_str(),
                    fmt_f64(t),
                    s.runs,
                    s.successes,
                    fmt_f64(s.sr),
                    fmt_opt(s.afes)
                );
                let _ = writeln!(timing, "{},{},{}", p.name(), algo.as_str(), fmt_opt(s.acds));
            }
        }
    }
    out.write("summary.csv", summary)?;
    out.write("results.csv", results)?;
    if cfg.targets.is_some() {
        out.write("stability.csv", stability)?;
        out.write("timing.csv", timing)?;
    }
    out.finish(CommandKind::Engineering.as_str(), cfg, &seeds, notes)
}

/// Segments the configured image for every threshold count. Writes metrics
/// and thresholds for every repeat, a best-of-repeats summary (by PSNR) and the
/// best segmented image per count.
pub fn run_segment(cfg: &ExperimentConfig) -> Result<Vec<String>> {
    let path = cfg
        .image
        .as_ref()
        .ok_or_else(|| Error::Config("segment needs --image <path.ppm>".into()))?;
    if cfg.algorithms != [Algorithm::Apo] {
        return Err(Error::Config("segment supports only the apo algorithm".into()));
    }
    if cfg.thresholds.is_empty() || cfg.thresholds.contains(&0) {
        return Err(Error::Config("thresholds must be positive".into()));
    }
    let img = read_ppm(path)?;
    let params = cfg.params()?;
    let mut out = OutputDir::create(&cfg.out)?;
    let seeds = seeds(cfg);
    let mut metrics = String::from("n,run,seed,psnr,ssim,mcet_r,mcet_g,mcet_b\n");
    let mut thresholds = String::from("n,run,channel,k,t_k,gray\n");
    let mut summary = String::from("n,best_run,psnr,ssim\n");
    for &n in &cfg.thresholds {
        let runs = parallel_map(&seeds, |&seed| -> Result<_> {
            let (seg, fits) = segment_rgb(&img, n, &params, seed)?;
            Ok((psnr(&img, &seg)?, ssim(&img, &seg)?, seg, fits))
        });
        let mut best: Option<(usize, f64, f64, crate::segmentation::RgbImage)> = None;
        for (k, run) in runs.into_iter().enumerate() {
            let (p, s, seg, fits) = run?;
            let _ = writeln!(
                metrics,
                "{n},{k},{},{},{},{},{},{}",
                seeds[k],
                fmt_f64(p),
                fmt_f64(s),
                fmt_f64(fits[0].objective),
                fmt_f64(fits[1].objective),
                fmt_f64(fits[2].objective)
            );
            for (c, fit) in fits.iter().enumerate() {
                for (j, &t) in fit.thresholds.as_slice().iter().enumerate() {
                    let _ = writeln!(thresholds, "{n},{k},{c},{},{t},{}", j + 1, t - 1);
                }
            }
            if best.as_ref().is_none_or(|b| p > b.1) {
                best = Some((k, p, s, seg));
            }
        }
        let (k, p, s, seg) = best.expect("at least one repeat");
        let _ = writeln!(summary, "{n},{k},{},{}", fmt_f64(p), fmt_f64(s));
        let name = format!("segment/segmented_n{n}.ppm");
        let target = out.path(&name);
        std::fs::create_dir_all(target.parent().expect("nested path"))?;
        write_ppm(&seg, &target)?;
        out.record(&name);
    }
    out.write("metrics.csv", metrics)?;
    out.write("thresholds.csv", thresholds)?;
    out.write("summary.csv", summary)?;
    let notes = vec![format!(
        "ssim uses {SSIM_WINDOW}x{SSIM_WINDOW} non-overlapping windows; channel c uses seed + c"
    )];
    out.finish(CommandKind::Segment.as_str(), cfg, &seeds, notes)
}

/// One row of a long-format result table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub algorithm: String,
    pub problem: String,
    pub run: usize,
    pub value: f64,
}

pub fn parse_results(text: &str) -> Result<Vec<ResultRow>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header.trim() != RESULTS_HEADER.trim() {
        return Err(Error::Input(format!(
            "expected header {:?}, got {header:?}",
            RESULTS_HEADER.trim()
        )));
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let bad = || Error::Input(format!("line {}: malformed row {line:?}", i + 2));
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 5 {
                return Err(bad());
            }
            Ok(ResultRow {
                algorithm: cols[0].to_string(),
                problem: cols[1].to_string(),
                run: cols[2].trim().parse().map_err(|_| bad())?,
                value: parse_f64(cols[4]).ok_or_else(bad)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, serde::Serialize)]
struct StatsConfig {
    inputs: Vec<String>,
    alpha: f64,
}

/// Friedman mean ranks over per-problem mean values and pairwise Wilcoxon
/// tests (paired by run index) from one or more result tables.
pub fn run_stats(inputs: &[&Path], out_dir: &Path, alpha: f64) -> Result<Vec<String>> {
    if inputs.is_empty() {
        return Err(Error::Config("stats needs at least one results.csv".into()));
    }
    let mut rows = Vec::new();
    for path in inputs {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        rows.extend(parse_results(&text)?);
    }
    // algorithm -> problem -> run -> value, in first-seen order for algorithms and problems
    let mut algorithms: Vec<String> = Vec::new();
    let mut problems: Vec<String> = Vec::new();
    let mut table: BTreeMap<(usize, usize), BTreeMap<usize, f64>> = BTreeMap::new();
    for r in rows {
        let a = index_of(&mut algorithms, &r.algorithm);
        let p = index_of(&mut problems, &r.problem);
        table.entry((a, p)).or_default().insert(r.run, r.value);
    }
    let mut out = OutputDir::create(out_dir)?;
    let mut notes = Vec::new();

    let complete = problems
        .iter()
        .enumerate()
        .all(|(p, _)| (0..algorithms.len()).all(|a| table.contains_key(&(a, p))));
    if algorithms.len() >= 2 && complete {
        let values = (0..problems.len())
            .map(|p| {
                (0..algorithms.len())
                    .map(|a| {
                        let runs = &table[&(a, p)];
                        runs.values().sum::<f64>() / runs.len() as f64
                    })
                    .collect()
            })
            .collect();
        let m = ResultMatrix::new(algorithms.clone(), problems.clone(), values)?;
        let ranking = friedman_mean_ranks(&m);
        let mut ranks = String::from("algorithm,mean_rank,standing\n");
        for (a, name) in algorithms.iter().enumerate() {
            let _ = writeln!(ranks, "{name},{},{}", fmt_f64(ranking.mean_ranks[a]), ranking.standing[a]);
        }
        out.write("ranks.csv", ranks)?;
    } else {
        notes.push("fewer than two algorithms or incomplete table; ranks skipped".to_string());
    }

    let mut wilcoxon = String::from("problem,algorithm_a,algorithm_b,n,r_plus,r_minus,p_value,verdict\n");
    for (p, problem) in problems.iter().enumerate() {
        for a in 0..algorithms.len() {
            for b in a + 1..algorithms.len() {
                let (Some(ra), Some(rb)) = (table.get(&(a, p)), table.get(&(b, p))) else {
                    continue;
                };
                let paired: Vec<(f64, f64)> = ra
                    .iter()
                    .filter_map(|(run, va)| rb.get(run).map(|vb| (*va, *vb)))
                    .collect();
                let xa: Vec<f64> = paired.iter().map(|x| x.0).collect();
                let xb: Vec<f64> = paired.iter().map(|x| x.1).collect();
                let w = wilcoxon_signed_rank(&xa, &xb, alpha)?;
                let _ = writeln!(
                    wilcoxon,
                    "{problem},{},{},{},{},{},{},{}",
                    algorithms[a],
                    algorithms[b],
                    w.n,
                    fmt_f64(w.r_plus),
                    fmt_f64(w.r_minus),
                    fmt_f64(w.p_value),
                    w.verdict.as_str()
                );
            }
        }
    }
    out.write("wilcoxon.csv", wilcoxon)?;
    let config = StatsConfig {
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        alpha,
    };
    out.finish("stats", &config, &[], notes)
}

fn index_of(names: &mut Vec<String>, name: &str) -> usize {
    match names.iter().position(|n| n == name) {
        Some(k) => k,
        None => {
            names.push(name.to_string());
            names.len() - 1
        }
    }
}
