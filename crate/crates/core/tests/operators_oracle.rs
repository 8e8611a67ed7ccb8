mod common;

use apo_core::apo::{
    autotrophic_update, dormancy_update, heterotrophic_update, reproduction_update, ApoParams, ScheduleState,
};
use apo_core::rng::RngStream;
use apo_core::space::{sort_population, Bounds, Candidate, Population};
use common::{close, Sorted, Tape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One random small case: sorted population, bounds and schedule.
struct Case {
    pop: Population,
    xs: Vec<Vec<f64>>,
    fs: Vec<f64>,
    bounds: Bounds,
    params: ApoParams,
    sched: ScheduleState,
}

fn case(seed: u64) -> Case {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let ps = g.random_range(2..=5usize);
    let dim = g.random_range(1..=3usize);
    let lower: Vec<f64> = (0..dim).map(|_| g.random_range(-10.0..-1.0)).collect();
    let upper: Vec<f64> = (0..dim).map(|_| g.random_range(1.0..10.0)).collect();
    let members = (0..ps)
        .map(|_| {
            let x: Vec<f64> = (0..dim).map(|d| g.random_range(lower[d]..upper[d])).collect();
            // mixed-sign fitness exercises the absolute value in the weight
            let f = g.random_range(-5.0..50.0);
            Candidate::new(x, f)
        })
        .collect();
    let pop = sort_population(Population::new(members)).unwrap();
    let iter_max = g.random_range(1..=60usize);
    let iter = g.random_range(0..=iter_max);
    Case {
        xs: pop.members().iter().map(|c| c.position.clone()).collect(),
        fs: pop.members().iter().map(|c| c.fitness).collect(),
        pop,
        bounds: Bounds::new(lower, upper).unwrap(),
        params: ApoParams {
            ps,
            np: 1,
            pf_max: 0.1,
            max_fes: ps * iter_max,
        },
        sched: ScheduleState { iter, fes: 0 },
    }
}

const CASES: u64 = 200;
const TOL: f64 = 1e-12;

#[test]
fn autotroph_matches_transcription() {
    for seed in 0..CASES {
        let c = case(seed);
        let rank = 1 + (seed as usize % c.params.ps);
        let mut rng = RngStream::recording(1000 + seed);
        let got = autotrophic_update(rank, &c.pop, &c.params, &c.sched, &c.bounds, &mut rng).unwrap();
        let mut tape = Tape::new(rng.take_tape());
        let sorted = Sorted { xs: &c.xs, fs: &c.fs };
        let want = common::autotroph(
            &mut tape,
            &sorted,
            rank,
            1,
            c.sched.iter,
            c.params.iter_max(),
            c.bounds.lower(),
            c.bounds.upper(),
        );
        assert!(tape.is_done(), "case {seed}: unused draws");
        assert!(close(&got, &want, TOL), "case {seed}: {got:?} vs {want:?}");
    }
}

#[test]
fn heterotroph_matches_transcription() {
    for seed in 0..CASES {
        let c = case(seed);
        let rank = 1 + (seed as usize * 7 % c.params.ps);
        let mut rng = RngStream::recording(2000 + seed);
        let got = heterotrophic_update(rank, &c.pop, &c.params, &c.sched, &c.bounds, &mut rng).unwrap();
        let mut tape = Tape::new(rng.take_tape());
        let sorted = Sorted { xs: &c.xs, fs: &c.fs };
        let want = common::heterotroph(
            &mut tape,
            &sorted,
            rank,
            1,
            c.sched.iter,
            c.params.iter_max(),
            c.bounds.lower(),
            c.bounds.upper(),
        );
        assert!(tape.is_done(), "case {seed}: unused draws");
        assert!(close(&got, &want, TOL), "case {seed}: {got:?} vs {want:?}");
    }
}

#[test]
fn dormancy_matches_transcription() {
    for seed in 0..CASES {
        let c = case(seed);
        let mut rng = RngStream::recording(3000 + seed);
        let got = dormancy_update(&c.bounds, &mut rng);
        let mut tape = Tape::new(rng.take_tape());
        let want = common::dormancy(&mut tape, c.bounds.lower(), c.bounds.upper());
        assert!(tape.is_done());
        assert!(close(&got, &want, TOL), "case {seed}: {got:?} vs {want:?}");
        assert!(c.bounds.contains(&got));
    }
}

#[test]
fn reproduction_matches_transcription() {
    for seed in 0..CASES {
        let c = case(seed);
        let x = &c.xs[seed as usize % c.xs.len()];
        let mut rng = RngStream::recording(4000 + seed);
        let got = reproduction_update(x, &c.bounds, &mut rng).unwrap();
        let mut tape = Tape::new(rng.take_tape());
        let want = common::reproduction(&mut tape, x, c.bounds.lower(), c.bounds.upper());
        assert!(tape.is_done());
        assert!(close(&got, &want, TOL), "case {seed}: {got:?} vs {want:?}");
    }
}

#[test]
fn every_rank_is_covered() {
    // the rank choices above reach the edge ranks of every population size
    let mut seen = std::collections::BTreeSet::new();
    for seed in 0..CASES {
        let c = case(seed);
        seen.insert((c.params.ps, 1 + (seed as usize % c.params.ps)));
    }
    for ps in 2..=5 {
        assert!(seen.contains(&(ps, 1)) && seen.contains(&(ps, ps)), "ps {ps}");
    }
}
