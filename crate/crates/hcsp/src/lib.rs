//! Scheduling of independent tasks on heterogeneous processors under the
//! expected-time-to-compute (ETC) cost model.
//!
//! The crate provides:
//!
//! * [`instance`]: the ETC cost matrix, parsing of the standard benchmark
//!   formats, and a seeded generator for the twelve canonical instance
//!   classes (consistency x task heterogeneity x machine heterogeneity).
//! * [`schedule`]: a task-to-processor assignment with incremental
//!   makespan evaluation of swap and transfer moves.
//! * [`construct`]: min-min style constructive heuristics and a random
//!   baseline.
//! * [`search`]: best-improvement local search on the most loaded
//!   processor and the random-swap shake used to escape local optima.
//! * [`solver`]: the anytime solve loop (construct, descend, shake,
//!   accept-if-not-worse) plus parallel multi-start and benchmarking.
//! * [`stats`]: summary statistics and the Wilcoxon matched-pairs
//!   signed-ranks test used to compare solvers across instances.
//! * [`oracle`]: exhaustive branch-and-bound optimum for small instances.
//! * [`braun`]: published reference figures for the 512x16 benchmark
//!   suite.
//!
//! # Example
//!
//! ```
//! use hcsp::instance::{generate_instance, InstanceClass};
//! use hcsp::solver::{solve, Budget, SolverConfig};
//!
//! let class: InstanceClass = "u_c_hihi".parse().unwrap();
//! let etc = generate_instance(&class, 32, 4, 7).unwrap();
//! let mut config = SolverConfig::default();
//! config.budget = Budget::Iterations(50);
//! let result = solve(&etc, &config);
//! assert_eq!(result.best_makespan, result.best_schedule.makespan());
//! ```

pub mod braun;
pub mod construct;
pub mod instance;
pub mod oracle;
pub mod schedule;
pub mod search;
pub mod solver;
pub mod stats;

pub use instance::{EtcMatrix, InstanceClass};
pub use schedule::{Move, Schedule};
pub use solver::{solve, Budget, RunResult, SolverConfig};
