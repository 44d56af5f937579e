//! Branching-process approximation: group final sizes `F_k`, the local
//! outbreak mixture `R`, offspring pgfs, `R_0`, the extinction probability
//! and the total progeny law.

mod branching;
mod final_size;
mod local;
mod weights;

pub use branching::{
    compound_poisson_degree_pmf, extinction_prob, finite_n_offspring_pgf, offspring_pgf,
    r_nought, total_progeny_pmf, BranchingModel, FiniteBranchingModel, TheorySolution,
    TotalProgeny, FIXED_POINT_TOL, MAX_ITERATIONS, MAX_PROGENY_SIZE, NEAR_CRITICAL,
};
pub use final_size::{
    final_size_dist, final_size_dist_capped, FinalSizeDist, FinalSizeTable, DEFAULT_K_CAP,
};
pub use local::{
    finite_local_outbreak_dist, local_outbreak_dist, local_outbreak_dist_with, truncation_point,
    LocalOutbreakDist, DEFAULT_EPSILON,
};
