//! The anytime solve loop: construct a schedule, descend to a local
//! optimum, then repeatedly shake and re-descend, keeping a new local
//! optimum whenever it is at least as good as the working incumbent.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::construct::{min_min, min_min_extension, random_assignment, Constructor};
use crate::instance::EtcMatrix;
use crate::schedule::Schedule;
use crate::search::{local_search_descend_with, shake, SearchParams};
use crate::stats;

/// How long a solve run may keep iterating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    /// Wall-clock limit; the stopping point depends on machine speed.
    Time(Duration),
    /// Fixed number of shake/descend cycles; fully reproducible.
    Iterations(u64),
}

/// Configuration of one solve run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub budget: Budget,
    pub search: SearchParams,
    pub constructor: Constructor,
    /// Record the (time, makespan) improvement curve.
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            budget: Budget::Time(Duration::from_secs(90)),
            search: SearchParams::default(),
            constructor: Constructor::MinMin,
            record_trace: true,
        }
    }
}

/// Outcome of one solve run.
#[derive(Debug, Clone)]
pub struct RunResult<'a> {
    /// Best schedule seen across the whole run.
    pub best_schedule: Schedule<'a>,
    /// Its makespan; always equal to `best_schedule.makespan()`.
    pub best_makespan: f64,
    /// Completed shake/descend cycles.
    pub iterations: u64,
    /// Improvement curve: one `(t, makespan)` point per strict improvement,
    /// where `t` is elapsed seconds under a time budget and the cycle count
    /// under an iteration budget.
    pub trace: Option<Vec<(f64, f64)>>,
    /// Seed the run used.
    pub seed: u64,
}

/// Hooks into the solve loop, used by tests to assert the search invariants
/// while the solver runs.
pub trait SolveObserver {
    /// A descent begins from a schedule with this makespan.
    fn descent_started(&mut self, _start_makespan: f64) {}
    /// A descent move was applied; `makespan` is the improved value.
    fn descent_step(&mut self, _makespan: f64) {}
    /// A descent reached a local optimum.
    fn descent_finished(&mut self, _schedule: &Schedule<'_>) {}
    /// A shaken-and-descended candidate was compared with the incumbent.
    fn cycle_evaluated(
        &mut self,
        _candidate: &Schedule<'_>,
        _incumbent_makespan: f64,
        _accepted: bool,
    ) {
    }
}

/// Observer that does nothing; used by the plain [`solve`] entry point.
pub struct NoopObserver;

impl SolveObserver for NoopObserver {}

/// Runs the full anytime loop on `instance` and returns the best schedule
/// found within the budget.
pub fn solve<'a>(instance: &'a EtcMatrix, config: &SolverConfig) -> RunResult<'a> {
    solve_observed(instance, config, &mut NoopObserver)
}

/// [`solve`] with instrumentation hooks.
pub fn solve_observed<'a>(
    instance: &'a EtcMatrix,
    config: &SolverConfig,
    observer: &mut dyn SolveObserver,
) -> RunResult<'a> {
    let seed = config.search.rng_seed;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut incumbent = match config.constructor {
        Constructor::MinMin => min_min(instance),
        Constructor::MinMaxExtension => min_min_extension(instance),
        Constructor::Random => random_assignment(instance, seed),
    };
    descend(&mut incumbent, observer);

    let mut cycles = 0u64;
    let stamp = |cycles: u64| match config.budget {
        Budget::Time(_) => start.elapsed().as_secs_f64(),
        Budget::Iterations(_) => cycles as f64,
    };
    let mut best = incumbent.clone();
    let mut trace = config
        .record_trace
        .then(|| vec![(stamp(cycles), best.makespan())]);

    loop {
        let exhausted = match config.budget {
            Budget::Time(limit) => start.elapsed() >= limit,
            Budget::Iterations(limit) => cycles >= limit,
        };
        if exhausted {
            break;
        }
        let mut candidate = incumbent.clone();
        if shake(&mut candidate, &config.search, &mut rng).is_err() {
            // No cross-processor swap exists, so every future cycle would
            // revisit the same local optimum.
            break;
        }
        descend(&mut candidate, observer);
        cycles += 1;
        let accepted = candidate.makespan() <= incumbent.makespan();
        observer.cycle_evaluated(&candidate, incumbent.makespan(), accepted);
        if accepted {
            incumbent = candidate;
            if incumbent.makespan() < best.makespan() {
                best = incumbent.clone();
                if let Some(points) = trace.as_mut() {
                    points.push((stamp(cycles), best.makespan()));
                }
            }
        }
    }

    RunResult {
        best_makespan: best.makespan(),
        best_schedule: best,
        iterations: cycles,
        trace,
        seed,
    }
}

/// Runs a full descent with observer callbacks, then recomputes the loads
/// from scratch so later acceptance comparisons are free of accumulated
/// rounding drift.
fn descend(schedule: &mut Schedule<'_>, observer: &mut dyn SolveObserver) {
    observer.descent_started(schedule.makespan());
    local_search_descend_with(schedule, |makespan| observer.descent_step(makespan));
    schedule.rebuild();
    observer.descent_finished(schedule);
}

/// Runs `k` independent solves with seeds `base_seed..base_seed + k` (in
/// parallel when a thread pool is available) and returns the best result;
/// ties go to the lowest seed. The outcome is identical to running the
/// seeds sequentially.
pub fn best_of_k<'a>(
    instance: &'a EtcMatrix,
    config: &SolverConfig,
    k: usize,
    base_seed: u64,
) -> RunResult<'a> {
    assert!(k >= 1, "best_of_k needs at least one run");
    let runs: Vec<RunResult<'a>> = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut run_config = *config;
            run_config.search.rng_seed = base_seed.wrapping_add(i as u64);
            solve(instance, &run_config)
        })
        .collect();
    runs.into_iter()
        .min_by(|a, b| a.best_makespan.total_cmp(&b.best_makespan))
        .expect("k >= 1 run results")
}

/// Distribution of best-of-k makespans for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchStats {
    pub mean: f64,
    pub cv_percent: f64,
    pub best: f64,
    pub samples: Vec<f64>,
}

/// Repeats best-of-k `repetitions` times per instance with disjoint seed
/// blocks (repetition `r` uses seeds starting at `rng_seed + r * k`) and
/// summarizes the makespan distribution of each instance.
pub fn benchmark(
    instances: &[EtcMatrix],
    config: &SolverConfig,
    k: usize,
    repetitions: usize,
) -> Vec<BenchStats> {
    assert!(repetitions >= 1, "benchmark needs at least one repetition");
    let base_seed = config.search.rng_seed;
    instances
        .iter()
        .map(|instance| {
            let samples: Vec<f64> = (0..repetitions)
                .map(|r| {
                    let block = base_seed.wrapping_add((r as u64).wrapping_mul(k as u64));
                    best_of_k(instance, config, k, block).best_makespan
                })
                .collect();
            let summary = stats::summarize(&samples).expect("makespans are positive");
            let best = samples.iter().copied().fold(f64::INFINITY, f64::min);
            BenchStats {
                mean: summary.mean,
                cv_percent: summary.cv_percent,
                best,
                samples,
            }
        })
        .collect()
}
