//! Local search over the problem-processor neighborhood plus the random
//! disruption (shake) that lets the outer loop escape local optima.

use std::num::NonZeroU32;

use rand::Rng;
use thiserror::Error;

use crate::schedule::{Move, Schedule};

/// Errors raised by the shaking step.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    /// No cross-processor swap exists.
    #[error("schedule too small to shake: {0}")]
    TooSmallToShake(String),
}

/// Parameters of the shake step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchParams {
    /// Upper bound on the number of random swaps per shake; the count is
    /// drawn uniformly from `1..=max_shake_swaps`.
    pub max_shake_swaps: NonZeroU32,
    /// Seed of the solver's random stream.
    pub rng_seed: u64,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            max_shake_swaps: NonZeroU32::new(9).unwrap(),
            rng_seed: 0,
        }
    }
}

/// The most loaded processor, whose completion time is the makespan; ties
/// go to the lowest index.
pub fn find_problem_processor(s: &Schedule<'_>) -> usize {
    s.problem_processor()
}

/// All moves in the problem-processor neighborhood, in canonical order:
/// transfers of each of its tasks to every other processor, then swaps of
/// each of its tasks with every task on another processor; each group runs
/// in ascending task order, then ascending partner index.
pub fn neighborhood(s: &Schedule<'_>) -> Vec<Move> {
    let q = find_problem_processor(s);
    let num_procs = s.instance().num_procs();
    let on_q: Vec<usize> = (0..s.instance().num_tasks())
        .filter(|&t| s.assignment()[t] == q)
        .collect();
    let mut moves = Vec::new();
    for &task in &on_q {
        for to_proc in (0..num_procs).filter(|&p| p != q) {
            moves.push(Move::Transfer { task, to_proc });
        }
    }
    for &task in &on_q {
        for partner in (0..s.instance().num_tasks()).filter(|&u| s.assignment()[u] != q) {
            moves.push(Move::Swap {
                task_a: task,
                task_b: partner,
            });
        }
    }
    moves
}

/// The neighborhood move with the lowest resulting makespan and that
/// makespan, or `None` if the neighborhood is empty (single processor).
/// Among equally good moves the first in canonical order wins.
pub fn best_neighbor(s: &Schedule<'_>) -> Option<(Move, f64)> {
    let mut best: Option<(Move, f64)> = None;
    for mv in neighborhood(s) {
        let makespan = s
            .peek_move(mv)
            .expect("neighborhood moves are valid by construction");
        if best.is_none_or(|(_, current)| makespan < current) {
            best = Some((mv, makespan));
        }
    }
    best
}

/// Best-improvement descent: repeatedly applies the best neighborhood move
/// while it strictly lowers the makespan. Returns the number of applied
/// moves; the resulting schedule is a local optimum (no neighbor of its
/// problem processor is strictly better).
pub fn local_search_descend(s: &mut Schedule<'_>) -> u64 {
    local_search_descend_with(s, |_| {})
}

/// Descent variant reporting the makespan after every applied move.
pub fn local_search_descend_with(s: &mut Schedule<'_>, mut on_improve: impl FnMut(f64)) -> u64 {
    // Strict descent cannot revisit a makespan, so hitting this cap means
    // the incremental bookkeeping is broken.
    let cap = 10 * (s.instance().num_tasks() as u64) * (s.instance().num_procs() as u64);
    let mut steps = 0u64;
    while let Some((mv, makespan)) = best_neighbor(s) {
        if makespan >= s.makespan() {
            break;
        }
        s.apply_move(mv).expect("best neighbor is a valid move");
        steps += 1;
        assert!(
            steps <= cap,
            "descent exceeded {cap} moves on a {}x{} instance",
            s.instance().num_tasks(),
            s.instance().num_procs()
        );
        on_improve(s.makespan());
    }
    steps
}

/// Applies `k ~ U{{1, …, max_shake_swaps}}` random swaps, each exchanging
/// the processors of two tasks currently on different processors. Returns
/// the `k` that was drawn. The same rng state always produces the same
/// shake.
pub fn shake<R: Rng>(
    s: &mut Schedule<'_>,
    params: &SearchParams,
    rng: &mut R,
) -> Result<u32, SearchError> {
    let num_tasks = s.instance().num_tasks();
    let num_procs = s.instance().num_procs();
    if num_procs < 2 {
        return Err(SearchError::TooSmallToShake(format!(
            "{num_procs} processor(s), need at least 2"
        )));
    }
    if num_tasks < 2 {
        return Err(SearchError::TooSmallToShake(format!(
            "{num_tasks} task(s), need at least 2"
        )));
    }
    let first = s.assignment()[0];
    if s.assignment().iter().all(|&proc| proc == first) {
        return Err(SearchError::TooSmallToShake(format!(
            "all tasks sit on processor {first}"
        )));
    }
    let k = rng.gen_range(1..=params.max_shake_swaps.get());
    for _ in 0..k {
        // Swaps preserve the multiset of processors in the assignment, so a
        // cross-processor pair keeps existing and this loop terminates.
        loop {
            let task_a = rng.gen_range(0..num_tasks);
            let task_b = rng.gen_range(0..num_tasks);
            if task_a != task_b && s.assignment()[task_a] != s.assignment()[task_b] {
                s.apply_move(Move::Swap { task_a, task_b })
                    .expect("cross-processor swap is valid");
                break;
            }
        }
    }
    Ok(k)
}
