//! Exhaustive optimum for small instances, used to validate heuristics.

use thiserror::Error;

use crate::instance::EtcMatrix;

/// Errors raised by the exhaustive solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    /// The search space `num_procs ^ num_tasks` exceeds the enumeration cap.
    #[error("instance too large for exhaustive search: {num_procs}^{num_tasks} assignments exceeds {cap}")]
    InstanceTooLarge {
        num_tasks: usize,
        num_procs: usize,
        cap: u64,
    },
}

/// An optimal assignment and its makespan.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub assignment: Vec<usize>,
    pub makespan: f64,
}

const ENUMERATION_CAP: u64 = 10_000_000;

/// Finds the minimum-makespan assignment by depth-first enumeration with
/// pruning on the partial makespan. Among equally good optima the
/// lexicographically smallest assignment is returned. Refuses instances
/// with more than 10^7 candidate assignments.
pub fn brute_force_optimum(instance: &EtcMatrix) -> Result<Optimum, OracleError> {
    let num_tasks = instance.num_tasks();
    let num_procs = instance.num_procs();
    let too_large = || OracleError::InstanceTooLarge {
        num_tasks,
        num_procs,
        cap: ENUMERATION_CAP,
    };
    let space = (num_procs as u128)
        .checked_pow(num_tasks as u32)
        .ok_or_else(too_large)?;
    if space > ENUMERATION_CAP as u128 {
        return Err(too_large());
    }

    let mut state = Dfs {
        instance,
        proc_time: vec![0.0; num_procs],
        current: Vec::with_capacity(num_tasks),
        best_makespan: f64::INFINITY,
        best_assignment: Vec::new(),
    };
    state.descend(0.0);
    Ok(Optimum {
        assignment: state.best_assignment,
        makespan: state.best_makespan,
    })
}

struct Dfs<'a> {
    instance: &'a EtcMatrix,
    proc_time: Vec<f64>,
    current: Vec<usize>,
    best_makespan: f64,
    best_assignment: Vec<usize>,
}

impl Dfs<'_> {
    fn descend(&mut self, partial_makespan: f64) {
        // Pruning on >= keeps the first (lexicographically smallest) optimum.
        if partial_makespan >= self.best_makespan {
            return;
        }
        let task = self.current.len();
        if task == self.instance.num_tasks() {
            self.best_makespan = partial_makespan;
            self.best_assignment = self.current.clone();
            return;
        }
        for proc in 0..self.instance.num_procs() {
            let saved = self.proc_time[proc];
            let loaded = saved + self.instance.cost(task, proc);
            self.proc_time[proc] = loaded;
            self.current.push(proc);
            self.descend(partial_makespan.max(loaded));
            self.current.pop();
            self.proc_time[proc] = saved;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    #[test]
    fn picks_the_cheap_diagonal() {
        let m = parse_instance("1 2 2 1", 2, 2).unwrap();
        let opt = brute_force_optimum(&m).unwrap();
        assert_eq!(opt.assignment, vec![0, 1]);
        assert_eq!(opt.makespan, 1.0);
    }

    #[test]
    fn single_task_picks_cheapest_processor() {
        let m = parse_instance("9 4 6", 1, 3).unwrap();
        let opt = brute_force_optimum(&m).unwrap();
        assert_eq!(opt.assignment, vec![1]);
        assert_eq!(opt.makespan, 4.0);
    }

    #[test]
    fn uniform_costs_balance_tasks() {
        let m = parse_instance("1 1 1 1 1 1", 3, 2).unwrap();
        let opt = brute_force_optimum(&m).unwrap();
        assert_eq!(opt.makespan, 2.0);
        // First assignment reaching makespan 2 in lexicographic order.
        assert_eq!(opt.assignment, vec![0, 0, 1]);
    }

    #[test]
    fn refuses_oversized_instances() {
        let costs = vec![1.0; 512 * 16];
        let m = EtcMatrix::new(512, 16, costs).unwrap();
        assert_eq!(
            brute_force_optimum(&m).unwrap_err(),
            OracleError::InstanceTooLarge {
                num_tasks: 512,
                num_procs: 16,
                cap: 10_000_000,
            }
        );
    }

    #[test]
    fn within_cap_boundary_is_accepted() {
        // 10^7 assignments exactly: 7 tasks on 10 processors of cost 1.
        let m = EtcMatrix::new(7, 10, vec![1.0; 70]).unwrap();
        let opt = brute_force_optimum(&m).unwrap();
        assert_eq!(opt.makespan, 1.0);
        assert_eq!(opt.assignment, vec![0, 1, 2, 3, 4, 5, 6]);
    }
}
