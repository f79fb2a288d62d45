//! Published reference figures for the twelve canonical 512x16 benchmark
//! instances of Braun et al. (`u_<consistency>_<task het><machine het>.0`):
//! mean best-of-16 makespans and CVs of two solvers (a micro evolutionary
//! algorithm and local search with shaking, 50 runs of 90 seconds each),
//! linear-programming lower bounds, and the best makespans known from long
//! runs. Used for regression checks and gap reports.

/// Benchmark dimensions: 512 tasks on 16 processors.
pub const NUM_TASKS: usize = 512;
pub const NUM_PROCS: usize = 16;

/// The instances in canonical order (consistent, inconsistent,
/// semi-consistent; each hihi, hilo, lohi, lolo).
pub const INSTANCE_NAMES: [&str; 12] = [
    "u_c_hihi.0",
    "u_c_hilo.0",
    "u_c_lohi.0",
    "u_c_lolo.0",
    "u_i_hihi.0",
    "u_i_hilo.0",
    "u_i_lohi.0",
    "u_i_lolo.0",
    "u_s_hihi.0",
    "u_s_hilo.0",
    "u_s_lohi.0",
    "u_s_lolo.0",
];

/// Mean best-of-16 makespan of the micro evolutionary algorithm.
pub const MICRO_EA_MEAN: [f64; 12] = [
    7394702.7, 153193.7, 239706.2, 5152.3, 2947896.4, 73531.4, 102402.8, 2547.1, 4123537.3,
    96020.5, 122744.4, 3438.3,
];

/// CV (percent) of the micro evolutionary algorithm results.
pub const MICRO_EA_CV_PERCENT: [f64; 12] = [
    0.09, 0.04, 0.08, 0.04, 0.14, 0.10, 0.17, 0.09, 0.27, 0.10, 0.23, 0.07,
];

/// Mean best-of-16 makespan of local search with shaking.
pub const LS_SHAKING_MEAN: [f64; 12] = [
    7401477.4, 153156.2, 239859.3, 5146.5, 2932328.8, 73310.9, 101685.4, 2539.6, 4095948.4,
    95820.2, 121734.2, 3427.3,
];

/// CV (percent) of the local-search-with-shaking results.
pub const LS_SHAKING_CV_PERCENT: [f64; 12] = [
    0.06, 0.02, 0.06, 0.02, 0.07, 0.03, 0.06, 0.04, 0.09, 0.03, 0.13, 0.03,
];

/// Linear-programming lower bounds on the optimal makespan.
pub const LOWER_BOUND: [f64; 12] = [
    7346524.2, 152700.4, 238138.1, 5132.8, 2909326.6, 73057.9, 101063.4, 2529.0, 4063563.7,
    95419.0, 120452.3, 3414.8,
];

/// Best known makespans, from multi-week local search runs.
pub const BEST_KNOWN: [f64; 12] = [
    7360142.1, 152815.4, 238768.4, 5137.9, 2930069.0, 73182.6, 101547.1, 2536.1, 4087295.7,
    95584.0, 121147.6, 3420.8,
];

/// Position of an instance in the fixture arrays. Accepts the exact file
/// name (`u_c_hihi.0`), the bare class (`u_c_hihi`), or a path ending in
/// either.
pub fn index_of(name: &str) -> Option<usize> {
    let base = name.rsplit(['/', '\\']).next().unwrap_or(name);
    let stem = base.strip_suffix(".0").unwrap_or(base);
    INSTANCE_NAMES
        .iter()
        .position(|candidate| candidate.strip_suffix(".0") == Some(stem))
}

/// Lower bound for a named instance, when it is one of the twelve.
pub fn lower_bound_for(name: &str) -> Option<f64> {
    index_of(name).map(|i| LOWER_BOUND[i])
}
