//! Constructive heuristics that produce the schedule the local search
//! starts from.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::instance::EtcMatrix;
use crate::schedule::Schedule;

/// Which constructive heuristic seeds the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constructor {
    /// Classic min-min: repeatedly commit the task with the smallest
    /// achievable completion time.
    MinMin,
    /// Min-min variant scoring tasks by how little they extend the current
    /// makespan.
    MinMaxExtension,
    /// Uniform random assignment (baseline).
    Random,
}

/// Min-min: each round computes, for every unscheduled task, the minimum
/// completion time over all processors, then commits the task with the
/// smallest such minimum. Ties prefer the lowest task index, then the
/// lowest processor index.
pub fn min_min(instance: &EtcMatrix) -> Schedule<'_> {
    build_greedy(instance, |_makespan, completion| completion)
}

/// Min-min variant: tasks are scored by the makespan the partial schedule
/// would have after placing them, so each round commits the task that
/// extends the current makespan least. Processor ties prefer the smaller
/// completion time, then the lower index.
pub fn min_min_extension(instance: &EtcMatrix) -> Schedule<'_> {
    build_greedy(instance, |makespan, completion| makespan.max(completion))
}

/// Shared greedy loop: `score(current_makespan, completion_time)` ranks a
/// candidate placement; lower is better, ties fall back to the completion
/// time and then to task and processor order.
fn build_greedy(instance: &EtcMatrix, score: impl Fn(f64, f64) -> f64) -> Schedule<'_> {
    let num_tasks = instance.num_tasks();
    let num_procs = instance.num_procs();
    let mut proc_time = vec![0.0; num_procs];
    let mut assignment = vec![0usize; num_tasks];
    let mut unscheduled: Vec<usize> = (0..num_tasks).collect();
    let mut makespan = 0.0f64;
    while !unscheduled.is_empty() {
        let mut best: Option<(f64, f64, usize, usize)> = None;
        for (pos, &task) in unscheduled.iter().enumerate() {
            for (proc, &load) in proc_time.iter().enumerate() {
                let completion = load + instance.cost(task, proc);
                let key = (score(makespan, completion), completion);
                let better = match best {
                    None => true,
                    Some((s, c, _, _)) => key.0 < s || (key.0 == s && key.1 < c),
                };
                if better {
                    best = Some((key.0, key.1, pos, proc));
                }
            }
        }
        let (_, completion, pos, proc) = best.expect("at least one placement exists");
        let task = unscheduled.remove(pos);
        assignment[task] = proc;
        proc_time[proc] = completion;
        makespan = makespan.max(completion);
    }
    Schedule::evaluate(instance, assignment).expect("greedy assignment is complete and in range")
}

/// Assigns every task to a uniformly random processor; the same seed always
/// yields the same schedule.
pub fn random_assignment(instance: &EtcMatrix, seed: u64) -> Schedule<'_> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let assignment: Vec<usize> = (0..instance.num_tasks())
        .map(|_| rng.gen_range(0..instance.num_procs()))
        .collect();
    Schedule::evaluate(instance, assignment).expect("random assignment is complete and in range")
}
