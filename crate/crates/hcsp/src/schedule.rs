//! Task-to-processor assignments with constant-time lookahead of swap and
//! transfer moves.
//!
//! A [`Schedule`] caches per-processor completion times plus the three
//! highest loads. A move touches at most two processors, so the makespan
//! after a move is the maximum of the cached third-place load and the two
//! updated loads; [`Schedule::peek_move`] needs no rescans. Applying a move
//! rewrites the two loads and rescans once (linear in processors), which
//! keeps the cached makespan bit-identical to what the peek reported.

use thiserror::Error;

use crate::instance::EtcMatrix;

/// Errors raised when building a schedule or applying moves to it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    /// The assignment vector must hold one processor per task.
    #[error("assignment holds {found} entries but the instance has {expected} tasks")]
    AssignmentLength { expected: usize, found: usize },
    /// An assignment entry referenced a processor the instance lacks.
    #[error(
        "task {task} assigned to processor {proc}, but the instance has {num_procs} processors"
    )]
    IndexOutOfRange {
        task: usize,
        proc: usize,
        num_procs: usize,
    },
    /// The move references unknown indices or would not change the schedule.
    #[error("invalid move: {0}")]
    InvalidMove(String),
}

/// A candidate neighborhood move: reassign one task, or exchange the
/// processors of two tasks on different processors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    /// Move `task` from its current processor to `to_proc`.
    Transfer { task: usize, to_proc: usize },
    /// Exchange the processors of `task_a` and `task_b`.
    Swap { task_a: usize, task_b: usize },
}

#[derive(Debug, Clone, Copy)]
struct LoadEntry {
    load: f64,
    proc: usize,
}

const EMPTY_ENTRY: LoadEntry = LoadEntry {
    load: f64::NEG_INFINITY,
    proc: usize::MAX,
};

/// A complete assignment of tasks to processors for one [`EtcMatrix`],
/// with cached processor completion times and makespan.
#[derive(Debug, Clone)]
pub struct Schedule<'a> {
    instance: &'a EtcMatrix,
    assignment: Vec<usize>,
    proc_time: Vec<f64>,
    // Three largest loads, descending; ties keep the lower processor first.
    top: [LoadEntry; 3],
}

impl<'a> Schedule<'a> {
    /// Builds a schedule from a full assignment, computing all loads from
    /// scratch.
    pub fn evaluate(
        instance: &'a EtcMatrix,
        assignment: Vec<usize>,
    ) -> Result<Self, ScheduleError> {
        if assignment.len() != instance.num_tasks() {
            return Err(ScheduleError::AssignmentLength {
                expected: instance.num_tasks(),
                found: assignment.len(),
            });
        }
        if let Some((task, &proc)) = assignment
            .iter()
            .enumerate()
            .find(|(_, &proc)| proc >= instance.num_procs())
        {
            return Err(ScheduleError::IndexOutOfRange {
                task,
                proc,
                num_procs: instance.num_procs(),
            });
        }
        let mut schedule = Self {
            instance,
            assignment,
            proc_time: vec![0.0; instance.num_procs()],
            top: [EMPTY_ENTRY; 3],
        };
        schedule.rebuild();
        Ok(schedule)
    }

    pub fn instance(&self) -> &'a EtcMatrix {
        self.instance
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Completion time of each processor.
    pub fn proc_time(&self) -> &[f64] {
        &self.proc_time
    }

    /// Completion time of the latest processor.
    pub fn makespan(&self) -> f64 {
        self.top[0].load
    }

    /// The most loaded processor; ties go to the lowest index.
    pub fn problem_processor(&self) -> usize {
        self.top[0].proc
    }

    /// Recomputes loads and makespan from the assignment alone, discarding
    /// any rounding drift accumulated by incremental updates.
    pub fn rebuild(&mut self) {
        self.proc_time.fill(0.0);
        for (task, &proc) in self.assignment.iter().enumerate() {
            self.proc_time[proc] += self.instance.cost(task, proc);
        }
        self.rescan_top();
    }

    fn rescan_top(&mut self) {
        let mut top = [EMPTY_ENTRY; 3];
        for (proc, &load) in self.proc_time.iter().enumerate() {
            let entry = LoadEntry { load, proc };
            if entry.load > top[0].load {
                top = [entry, top[0], top[1]];
            } else if entry.load > top[1].load {
                top = [top[0], entry, top[1]];
            } else if entry.load > top[2].load {
                top[2] = entry;
            }
        }
        self.top = top;
    }

    /// Largest load on any processor other than `a` and `b`.
    fn max_excluding(&self, a: usize, b: usize) -> f64 {
        for entry in &self.top {
            if entry.proc != a && entry.proc != b {
                return entry.load;
            }
        }
        f64::NEG_INFINITY
    }

    /// The two processors a move touches and their loads after the move.
    fn move_effect(&self, mv: Move) -> (usize, usize, f64, f64) {
        match mv {
            Move::Transfer { task, to_proc } => {
                let from = self.assignment[task];
                let new_from = self.proc_time[from] - self.instance.cost(task, from);
                let new_to = self.proc_time[to_proc] + self.instance.cost(task, to_proc);
                (from, to_proc, new_from, new_to)
            }
            Move::Swap { task_a, task_b } => {
                let pa = self.assignment[task_a];
                let pb = self.assignment[task_b];
                let new_pa = self.proc_time[pa] - self.instance.cost(task_a, pa)
                    + self.instance.cost(task_b, pa);
                let new_pb = self.proc_time[pb] - self.instance.cost(task_b, pb)
                    + self.instance.cost(task_a, pb);
                (pa, pb, new_pa, new_pb)
            }
        }
    }

    fn validate_move(&self, mv: Move) -> Result<(), ScheduleError> {
        let num_tasks = self.instance.num_tasks();
        match mv {
            Move::Transfer { task, to_proc } => {
                if task >= num_tasks {
                    return Err(ScheduleError::InvalidMove(format!(
                        "transfer of unknown task {task} (instance has {num_tasks} tasks)"
                    )));
                }
                if to_proc >= self.instance.num_procs() {
                    return Err(ScheduleError::InvalidMove(format!(
                        "transfer to unknown processor {to_proc} (instance has {} processors)",
                        self.instance.num_procs()
                    )));
                }
                if self.assignment[task] == to_proc {
                    return Err(ScheduleError::InvalidMove(format!(
                        "transfer of task {task} to its own processor {to_proc}"
                    )));
                }
            }
            Move::Swap { task_a, task_b } => {
                if task_a >= num_tasks || task_b >= num_tasks {
                    return Err(ScheduleError::InvalidMove(format!(
                        "swap of unknown tasks {task_a} and {task_b} (instance has {num_tasks} tasks)"
                    )));
                }
                if task_a == task_b {
                    return Err(ScheduleError::InvalidMove(format!(
                        "swap of task {task_a} with itself"
                    )));
                }
                if self.assignment[task_a] == self.assignment[task_b] {
                    return Err(ScheduleError::InvalidMove(format!(
                        "swap of tasks {task_a} and {task_b} on the same processor {}",
                        self.assignment[task_a]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Makespan the schedule would have after `mv`, without applying it.
    pub fn peek_move(&self, mv: Move) -> Result<f64, ScheduleError> {
        self.validate_move(mv)?;
        Ok(self.peek_unchecked(mv))
    }

    pub(crate) fn peek_unchecked(&self, mv: Move) -> f64 {
        let (pa, pb, new_a, new_b) = self.move_effect(mv);
        self.max_excluding(pa, pb).max(new_a).max(new_b)
    }

    /// Applies `mv`, updating the two touched loads incrementally. The new
    /// makespan equals what [`Schedule::peek_move`] reported for `mv`.
    pub fn apply_move(&mut self, mv: Move) -> Result<(), ScheduleError> {
        self.validate_move(mv)?;
        self.apply_unchecked(mv);
        Ok(())
    }

    pub(crate) fn apply_unchecked(&mut self, mv: Move) {
        let (pa, pb, new_a, new_b) = self.move_effect(mv);
        match mv {
            Move::Transfer { task, to_proc } => self.assignment[task] = to_proc,
            Move::Swap { task_a, task_b } => {
                self.assignment.swap(task_a, task_b);
            }
        }
        self.proc_time[pa] = new_a;
        self.proc_time[pb] = new_b;
        self.rescan_top();
    }
}
