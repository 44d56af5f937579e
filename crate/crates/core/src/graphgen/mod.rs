//! Random intersection graph generation, projection, thinning and empirical
//! statistics.

mod bipartite;
mod intersection;
pub mod io;
mod params;
mod stats;

pub use bipartite::{ball_is_tree, sample_bipartite, sample_edge_groups, BipartiteGraph};
pub use intersection::{project, sample_intersection, thin, IntersectionGraph};
pub(crate) use intersection::check_probability;
pub use params::{clustering, mean_degree as limit_mean_degree, solve_params, GraphParams};
pub use stats::{
    degree_histogram, mean_degree, transitivity, transitivity_exact, transitivity_sampled,
    triangle_count, wedge_count, DEFAULT_WEDGE_SAMPLES, EXACT_TRANSITIVITY_LIMIT,
};
