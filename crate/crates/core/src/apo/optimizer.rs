use super::operators::{autotrophic_update, dormancy_update, heterotrophic_update, reproduction_update};
use super::schedule::{prob_dormancy, prob_forage_mode, proportion_fraction};
use super::{ApoParams, ApoResult, ScheduleState, TraceRecord};
use crate::error::{Error, Result};
use crate::metrics::diversity;
use crate::rng::RngStream;
use crate::space::{evaluate, sort_population, Candidate, ObjectiveFn, Population};

/// Runs one generation: sort, route ranks to operators, evaluate every proposal
/// and keep the ones that strictly improve. All proposals are computed from the
/// generation-start population.
pub fn apo_step(
    pop: Population,
    params: &ApoParams,
    sched: &mut ScheduleState,
    objective: &ObjectiveFn,
    rng: &mut RngStream,
) -> Result<Population> {
    let ps = params.ps;
    if pop.len() != ps {
        return Err(Error::Contract(format!(
            "population has {} members, params say {ps}",
            pop.len()
        )));
    }
    if sched.fes + ps > params.max_fes {
        return Err(Error::Budget {
            used: sched.fes,
            max: params.max_fes,
            needed: ps,
        });
    }
    let bounds = objective.bounds();
    let iter_max = params.iter_max();
    let pop = sort_population(pop)?;

    let pf = proportion_fraction(params.pf_max, rng);
    let dr_count = ((ps as f64 * pf).ceil() as usize).min(ps);
    let mut dormant_or_reproducing = vec![false; ps];
    for slot in rng.subset(ps, dr_count) {
        dormant_or_reproducing[slot] = true;
    }

    let p_ah = prob_forage_mode(sched.iter, iter_max)?;
    let mut proposals = Vec::with_capacity(ps);
    for rank in 1..=ps {
        let proposal = if dormant_or_reproducing[rank - 1] {
            if prob_dormancy(rank, ps)? > rng.uniform() {
                dormancy_update(bounds, rng)
            } else {
                reproduction_update(&pop.by_rank(rank).position, bounds, rng)?
            }
        } else if p_ah > rng.uniform() {
            autotrophic_update(rank, &pop, params, sched, bounds, rng)?
        } else {
            heterotrophic_update(rank, &pop, params, sched, bounds, rng)?
        };
        proposals.push(proposal);
    }

    let proposals = evaluate(Population::from_positions(proposals), objective, &mut sched.fes)?;
    let mut next = pop.clone();
    for (k, candidate) in proposals.into_members().into_iter().enumerate() {
        if candidate.fitness < pop.members()[k].fitness {
            next.replace(k, candidate);
        }
    }
    sched.iter += 1;
    Ok(next)
}

/// Minimizes `objective` from a uniform random initial population.
pub fn optimize(objective: &ObjectiveFn, params: &ApoParams, seed: u64) -> Result<ApoResult> {
    optimize_observed(objective, params, seed, |_, _| {})
}

/// Like [`optimize`], calling `observe` after initialization and after every
/// generation with the new trace record and the population.
pub fn optimize_observed<F>(
    objective: &ObjectiveFn,
    params: &ApoParams,
    seed: u64,
    mut observe: F,
) -> Result<ApoResult>
where
    F: FnMut(&TraceRecord, &Population),
{
    params.validate()?;
    if params.max_fes < params.ps {
        return Err(Error::Budget {
            used: 0,
            max: params.max_fes,
            needed: params.ps,
        });
    }
    let mut rng = RngStream::new(seed);
    let bounds = objective.bounds();
    let mut sched = ScheduleState::default();

    let initial = (0..params.ps).map(|_| bounds.sample(&mut rng)).collect();
    let mut pop = evaluate(Population::from_positions(initial), objective, &mut sched.fes)?;
    let record = |pop: &Population, generation: usize, fes: usize| TraceRecord {
        iter: generation,
        fes,
        best: pop.best().map_or(f64::INFINITY, |c| c.fitness),
        diversity: diversity(pop),
    };
    let mut trace = vec![record(&pop, 0, sched.fes)];
    observe(&trace[0], &pop);

    // Generation g runs with iter = g, so the schedules see 1..iter_max.
    sched.iter = 1;
    while sched.fes + params.ps <= params.max_fes {
        pop = apo_step(pop, params, &mut sched, objective, &mut rng)?;
        let rec = record(&pop, sched.iter - 1, sched.fes);
        trace.push(rec);
        observe(&rec, &pop);
    }

    let best: Candidate = pop
        .best()
        .cloned()
        .ok_or_else(|| Error::Contract("empty population".into()))?;
    Ok(ApoResult {
        best,
        trace,
        fes_used: sched.fes,
    })
}
